// Copyright 2026 The qcsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <iterator>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qcsynth/gates.hpp"
#include "qcsynth/numerics.hpp"

namespace qcsynth {

class IrError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The pass that created a node. Values are part of the `.qco` format.
enum class Producer : std::uint8_t {
  Root = 0,
  TlDecompose = 1,
  GrayDecompose = 2,
  CtrlDecompose = 3,
  EulerDecompose = 4,
  CliffordTDecompose = 5,
  SkDecompose = 6,
  Annihilate = 7,
  Consolidate = 8,
};
inline constexpr std::uint8_t kProducerCount = 9;

std::string_view producer_name(Producer p);
std::optional<Producer> producer_from_name(std::string_view name);
/// True for nodes written by an optimizer pass rather than a decomposition.
inline bool is_optimizer_producer(Producer p) {
  return p == Producer::Annihilate || p == Producer::Consolidate;
}

struct Lineage {
  Producer producer = Producer::Root;
  std::uint32_t ordinal = 0;
  std::string notes;
  friend bool operator==(const Lineage&, const Lineage&) = default;
};

using Payload = std::variant<UnitaryM, CtrlGate>;

/// One node of the compilation tree. The product of the children (children[0]
/// applied first) reconstructs the node's own payload.
struct ByteCode {
  Payload payload;
  std::vector<ByteCode> children;
  Lineage lineage;
  bool tombstone = false;

  bool is_leaf() const { return children.empty(); }
  bool holds_gate() const { return std::holds_alternative<CtrlGate>(payload); }
  const CtrlGate& gate() const;
  const UnitaryM& unitary() const;

  /// Appends a child, stamping its ordinal with the new position.
  ByteCode& add_child(ByteCode child);

  /// Structural equality; payloads compare bitwise.
  friend bool operator==(const ByteCode& a, const ByteCode& b);
};

ByteCode make_node(Payload payload, Producer producer, std::string notes = {});

/// Child indices from the root, printed as "0.3.1" (the root is "").
using NodePath = std::vector<std::uint32_t>;
std::string format_path(const NodePath& path);
NodePath parse_path(std::string_view text);

const ByteCode& node_at(const ByteCode& root, const NodePath& path);
ByteCode& node_at(ByteCode& root, const NodePath& path);

/// Conjugate transpose: payload adjointed, children reversed and conjugated.
ByteCode herm(const ByteCode& n);

class PreorderIterator {
 public:
  using iterator_category = std::forward_iterator_tag;
  using value_type = ByteCode;
  using difference_type = std::ptrdiff_t;
  using pointer = const ByteCode*;
  using reference = const ByteCode&;

  PreorderIterator() = default;
  explicit PreorderIterator(const ByteCode& root);

  reference operator*() const { return *stack_.back().first; }
  pointer operator->() const { return stack_.back().first; }
  /// Path of the current node from the root.
  const NodePath& path() const { return stack_.back().second; }
  PreorderIterator& operator++();
  PreorderIterator operator++(int) {
    auto copy = *this;
    ++*this;
    return copy;
  }
  friend bool operator==(const PreorderIterator& a, const PreorderIterator& b) {
    return a.stack_.empty() ? b.stack_.empty()
                            : (!b.stack_.empty() && a.operator->() == b.operator->());
  }

 private:
  std::vector<std::pair<const ByteCode*, NodePath>> stack_;
};

/// Yields exactly the reverse of the preorder sequence.
class ReversePreorderIterator {
 public:
  using iterator_category = std::forward_iterator_tag;
  using value_type = ByteCode;
  using difference_type = std::ptrdiff_t;
  using pointer = const ByteCode*;
  using reference = const ByteCode&;

  ReversePreorderIterator() = default;
  explicit ReversePreorderIterator(const ByteCode& root);

  reference operator*() const { return *frames_.back().node; }
  pointer operator->() const { return frames_.back().node; }
  NodePath path() const;
  ReversePreorderIterator& operator++();
  ReversePreorderIterator operator++(int) {
    auto copy = *this;
    ++*this;
    return copy;
  }
  friend bool operator==(const ReversePreorderIterator& a,
                         const ReversePreorderIterator& b) {
    return a.frames_.empty() ? b.frames_.empty()
                             : (!b.frames_.empty() && a.operator->() == b.operator->());
  }

 private:
  struct Frame {
    const ByteCode* node;
    std::uint32_t index;       // position under the parent
    std::size_t next_child;    // children still to visit, counting down
  };
  void descend();
  std::vector<Frame> frames_;
};

template <typename It>
struct TreeRange {
  It first;
  It last;
  It begin() const { return first; }
  It end() const { return last; }
};

inline TreeRange<PreorderIterator> preorder(const ByteCode& root) {
  return {PreorderIterator(root), PreorderIterator()};
}
inline TreeRange<ReversePreorderIterator> reverse_preorder(const ByteCode& root) {
  return {ReversePreorderIterator(root), ReversePreorderIterator()};
}

/// The executable circuit: childless, non-tombstoned nodes in application
/// order. Identity UnitaryM leaves contribute nothing; any other UnitaryM
/// leaf makes it throw IrError.
std::vector<CtrlGate> leaf_gates(const ByteCode& root);
std::vector<NodePath> leaf_paths(const ByteCode& root);

/// Lineage records from the root down to the node at `path`, inclusive.
std::vector<Lineage> trace_gate(const ByteCode& root, const NodePath& path);
/// Same, locating `leaf` by identity inside the tree.
std::vector<Lineage> trace_gate(const ByteCode& root, const ByteCode& leaf);

std::size_t count_nodes(const ByteCode& root);

}  // namespace qcsynth

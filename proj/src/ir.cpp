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


#include "qcsynth/ir.hpp"

#include <array>
#include <charconv>

namespace qcsynth {

namespace {

constexpr std::array<std::string_view, kProducerCount> kProducerNames = {
    "root",           "tl_decompose",        "gray_decompose",
    "ctrl_decompose", "euler_decompose",     "cliffordt_decompose",
    "sk_decompose",   "annihilate",          "consolidate"};

bool find_path(const ByteCode& node, const ByteCode* target, NodePath& path) {
  if (&node == target) return true;
  for (std::uint32_t i = 0; i < node.children.size(); ++i) {
    path.push_back(i);
    if (find_path(node.children[i], target, path)) return true;
    path.pop_back();
  }
  return false;
}

}  // namespace

std::string_view producer_name(Producer p) {
  return kProducerNames[static_cast<std::size_t>(p)];
}

std::optional<Producer> producer_from_name(std::string_view name) {
  for (std::uint8_t i = 0; i < kProducerCount; ++i) {
    if (kProducerNames[i] == name) return static_cast<Producer>(i);
  }
  return std::nullopt;
}

const CtrlGate& ByteCode::gate() const {
  if (const auto* g = std::get_if<CtrlGate>(&payload)) return *g;
  throw IrError("node holds a UnitaryM, not a gate");
}

const UnitaryM& ByteCode::unitary() const {
  if (const auto* u = std::get_if<UnitaryM>(&payload)) return *u;
  throw IrError("node holds a gate, not a UnitaryM");
}

ByteCode& ByteCode::add_child(ByteCode child) {
  child.lineage.ordinal = static_cast<std::uint32_t>(children.size());
  children.push_back(std::move(child));
  return children.back();
}

bool operator==(const ByteCode& a, const ByteCode& b) {
  if (a.tombstone != b.tombstone || !(a.lineage == b.lineage)) return false;
  if (a.payload.index() != b.payload.index()) return false;
  if (a.holds_gate()) {
    if (!(a.gate() == b.gate())) return false;
  } else if (!(a.unitary() == b.unitary())) {
    return false;
  }
  return a.children == b.children;
}

ByteCode make_node(Payload payload, Producer producer, std::string notes) {
  ByteCode n;
  n.payload = std::move(payload);
  n.lineage.producer = producer;
  n.lineage.notes = std::move(notes);
  return n;
}

std::string format_path(const NodePath& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(path[i]);
  }
  return out;
}

NodePath parse_path(std::string_view text) {
  NodePath path;
  if (text.empty()) return path;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t dot = std::min(text.find('.', start), text.size());
    std::uint32_t v = 0;
    const auto* first = text.data() + start;
    const auto* last = text.data() + dot;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || first == last) {
      throw IrError("malformed node path '" + std::string(text) + "'");
    }
    path.push_back(v);
    start = dot + 1;
  }
  return path;
}

const ByteCode& node_at(const ByteCode& root, const NodePath& path) {
  const ByteCode* n = &root;
  for (std::size_t d = 0; d < path.size(); ++d) {
    if (path[d] >= n->children.size()) {
      NodePath prefix(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(d + 1));
      throw IrError("no node at path " + format_path(prefix));
    }
    n = &n->children[path[d]];
  }
  return *n;
}

ByteCode& node_at(ByteCode& root, const NodePath& path) {
  return const_cast<ByteCode&>(node_at(static_cast<const ByteCode&>(root), path));
}

ByteCode herm(const ByteCode& n) {
  ByteCode out;
  out.lineage = n.lineage;
  out.tombstone = n.tombstone;
  if (n.holds_gate()) {
    out.payload = herm(n.gate());
  } else {
    out.payload = n.unitary().herm();
  }
  for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) {
    out.add_child(herm(*it));
  }
  return out;
}

PreorderIterator::PreorderIterator(const ByteCode& root) {
  stack_.emplace_back(&root, NodePath{});
}

PreorderIterator& PreorderIterator::operator++() {
  auto [node, path] = std::move(stack_.back());
  stack_.pop_back();
  for (std::size_t i = node->children.size(); i-- > 0;) {
    NodePath child = path;
    child.push_back(static_cast<std::uint32_t>(i));
    stack_.emplace_back(&node->children[i], std::move(child));
  }
  return *this;
}

ReversePreorderIterator::ReversePreorderIterator(const ByteCode& root) {
  frames_.push_back({&root, 0, root.children.size()});
  descend();
}

void ReversePreorderIterator::descend() {
  while (frames_.back().next_child > 0) {
    Frame& top = frames_.back();
    const auto i = --top.next_child;
    const ByteCode* child = &top.node->children[i];
    frames_.push_back({child, static_cast<std::uint32_t>(i), child->children.size()});
  }
}

ReversePreorderIterator& ReversePreorderIterator::operator++() {
  frames_.pop_back();
  if (!frames_.empty()) descend();
  return *this;
}

NodePath ReversePreorderIterator::path() const {
  NodePath p;
  for (std::size_t i = 1; i < frames_.size(); ++i) p.push_back(frames_[i].index);
  return p;
}

namespace {

// An identity matrix left undecomposed stands for the empty circuit.
bool is_empty_leaf(const ByteCode& n) { return !n.holds_gate() && n.unitary().is_identity(); }

}  // namespace

std::vector<CtrlGate> leaf_gates(const ByteCode& root) {
  std::vector<CtrlGate> out;
  for (auto it = PreorderIterator(root); it != PreorderIterator(); ++it) {
    if (!it->is_leaf() || it->tombstone || is_empty_leaf(*it)) continue;
    if (!it->holds_gate()) {
      throw IrError("compilation incomplete: leaf " + format_path(it.path()) +
                    " still holds a unitary matrix");
    }
    out.push_back(it->gate());
  }
  return out;
}

std::vector<NodePath> leaf_paths(const ByteCode& root) {
  std::vector<NodePath> out;
  for (auto it = PreorderIterator(root); it != PreorderIterator(); ++it) {
    if (it->is_leaf() && !it->tombstone && !is_empty_leaf(*it)) out.push_back(it.path());
  }
  return out;
}

std::vector<Lineage> trace_gate(const ByteCode& root, const NodePath& path) {
  std::vector<Lineage> out{root.lineage};
  const ByteCode* n = &root;
  for (std::uint32_t i : path) {
    if (i >= n->children.size()) {
      throw IrError("node " + format_path(path) + " is not reachable");
    }
    n = &n->children[i];
    out.push_back(n->lineage);
  }
  return out;
}

std::vector<Lineage> trace_gate(const ByteCode& root, const ByteCode& leaf) {
  NodePath path;
  if (!find_path(root, &leaf, path)) {
    throw IrError("node is not reachable from the given root");
  }
  return trace_gate(root, path);
}

std::size_t count_nodes(const ByteCode& root) {
  std::size_t n = 1;
  for (const ByteCode& c : root.children) n += count_nodes(c);
  return n;
}

}  // namespace qcsynth

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

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcsynth/gates.hpp"
#include "qcsynth/ir.hpp"

namespace qcsynth {

inline constexpr double kAngleTol = 1e-12;

/// Conservative syntactic commutation: disjoint supports, or every shared
/// qubit is diagonal (a control, or a target of a diagonal core) in both.
bool gates_commute(const CtrlGate& a, const CtrlGate& b);

/// True when b·a is the identity (up to global phase for uncontrolled gates).
bool is_inverse_pair(const CtrlGate& a, const CtrlGate& b);

/// A proposed change to a window: consumed[0] is the earlier gate i,
/// consumed[1] the later gate j (offsets within the window). A replacement,
/// if any, takes j's place.
struct Rewrite {
  std::size_t first = 0;
  std::size_t second = 0;
  std::optional<CtrlGate> replacement;
};

class WindowOperator {
 public:
  virtual ~WindowOperator() = default;
  virtual Producer producer() const = 0;
  virtual std::optional<Rewrite> examine(std::span<const CtrlGate> window) const = 0;
};

/// Removes a gate together with a later inverse it commutes up to.
class AnnihilationOptimizer final : public WindowOperator {
 public:
  Producer producer() const override { return Producer::Annihilate; }
  std::optional<Rewrite> examine(std::span<const CtrlGate> window) const override;
};

/// Merges two gates with the same qubit signature when the merged gate is
/// still at least as fine as `granularity`.
class ConsolidationOptimizer final : public WindowOperator {
 public:
  explicit ConsolidationOptimizer(GateGrain granularity) : granularity_(granularity) {}
  Producer producer() const override { return Producer::Consolidate; }
  std::optional<Rewrite> examine(std::span<const CtrlGate> window) const override;

 private:
  GateGrain granularity_;
};

struct PassReport {
  std::string name;
  std::size_t rewrites = 0;
  std::size_t tombstoned = 0;
  std::size_t replacements = 0;
  std::size_t leaves_before = 0;
  std::size_t leaves_after = 0;
  std::size_t sweeps = 0;
  bool budget_exhausted = false;
};

/// Slides a window over the live leaves, applying the first rewrite any
/// operator proposes, until a full sweep changes nothing.
class SlidingWindowCombiner {
 public:
  SlidingWindowCombiner(std::string name, std::vector<std::shared_ptr<const WindowOperator>> ops,
                        std::size_t window_size);
  PassReport run(ByteCode& tree) const;
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::vector<std::shared_ptr<const WindowOperator>> ops_;
  std::size_t window_size_;
};

/// Pass schedule for an optimization level: 0 none, 1 annihilation,
/// 2 annihilation then consolidation.
std::vector<SlidingWindowCombiner> optimizer_passes(int level, std::size_t window_size,
                                                    GateGrain granularity);
/// Runs the schedule, repeating it while any pass still rewrites.
std::vector<PassReport> optimize(ByteCode& tree, int level, std::size_t window_size,
                                 GateGrain granularity);

}  // namespace qcsynth

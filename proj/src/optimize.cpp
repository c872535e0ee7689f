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


#include "qcsynth/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace qcsynth {

namespace {

bool diagonal_on(const CtrlGate& g, const Qubit& q) {
  const auto role = g.role_of(q);
  if (!role || *role == QType::Idler || is_control(*role)) return true;
  return core_is_diagonal(g.core());
}

bool in_support(const CtrlGate& g, const Qubit& q) {
  const auto role = g.role_of(q);
  return role && *role != QType::Idler;
}

// Whether the core of `g` acts trivially (global phase allowed only when
// nothing controls it).
bool core_is_identity(const CtrlGate& g) {
  const bool controlled = g.control_count() > 0;
  if (const auto* r = std::get_if<Rotation>(&g.core())) {
    const double period = controlled ? 4 * std::numbers::pi : 2 * std::numbers::pi;
    return std::abs(std::remainder(r->angle, period)) < kAngleTol;
  }
  const Matrix m = core_matrix(g.core());
  const Matrix id = identity_matrix(static_cast<std::size_t>(m.rows()));
  return controlled ? max_abs_diff(m, id) <= kTolIdentity : distance(m, id) <= kTolIdentity;
}

bool commutes_through(std::span<const CtrlGate> window, std::size_t i, std::size_t j) {
  for (std::size_t k = i + 1; k < j; ++k) {
    if (!gates_commute(window[i], window[k])) return false;
  }
  return true;
}

bool same_signature(const CtrlGate& a, const CtrlGate& b) {
  return a.qubits() == b.qubits() && a.qtypes() == b.qtypes();
}

}  // namespace

bool gates_commute(const CtrlGate& a, const CtrlGate& b) {
  for (const Qubit& q : a.support()) {
    if (!in_support(b, q)) continue;
    if (!diagonal_on(a, q) || !diagonal_on(b, q)) return false;
  }
  return true;
}

bool is_inverse_pair(const CtrlGate& a, const CtrlGate& b) {
  if (!same_signature(a, b)) return false;
  const auto* na = std::get_if<NamedGate>(&a.core());
  const auto* nb = std::get_if<NamedGate>(&b.core());
  if (na && nb) return *nb == named_inverse(*na);
  const auto* ra = std::get_if<Rotation>(&a.core());
  const auto* rb = std::get_if<Rotation>(&b.core());
  if (ra && rb && ra->axis == rb->axis) {
    return core_is_identity(CtrlGate(a.qubits(), a.qtypes(),
                                     Rotation{ra->axis, ra->angle + rb->angle}));
  }
  const Matrix product = core_matrix(b.core()) * core_matrix(a.core());
  if (!is_unitary(product)) return false;
  return core_is_identity(CtrlGate(a.qubits(), a.qtypes(), GenericCore{product}));
}

std::optional<Rewrite> AnnihilationOptimizer::examine(std::span<const CtrlGate> window) const {
  for (std::size_t i = 0; i < window.size(); ++i) {
    for (std::size_t j = i + 1; j < window.size(); ++j) {
      if (is_inverse_pair(window[i], window[j]) && commutes_through(window, i, j)) {
        return Rewrite{i, j, std::nullopt};
      }
    }
  }
  return std::nullopt;
}

std::optional<Rewrite> ConsolidationOptimizer::examine(std::span<const CtrlGate> window) const {
  for (std::size_t i = 0; i < window.size(); ++i) {
    for (std::size_t j = i + 1; j < window.size(); ++j) {
      if (!same_signature(window[i], window[j]) || !commutes_through(window, i, j)) continue;
      CtrlGate merged = matmul(window[j], window[i]);
      if (core_is_identity(merged)) return Rewrite{i, j, std::nullopt};
      if (grain_of(merged) >= granularity_) return Rewrite{i, j, std::move(merged)};
    }
  }
  return std::nullopt;
}

SlidingWindowCombiner::SlidingWindowCombiner(
    std::string name, std::vector<std::shared_ptr<const WindowOperator>> ops,
    std::size_t window_size)
    : name_(std::move(name)), ops_(std::move(ops)), window_size_(std::max<std::size_t>(window_size, 2)) {}

PassReport SlidingWindowCombiner::run(ByteCode& tree) const {
  PassReport report;
  report.name = name_;
  std::vector<NodePath> paths = leaf_paths(tree);
  std::vector<CtrlGate> gates = leaf_gates(tree);
  const std::size_t n = gates.size();
  report.leaves_before = n;
  const std::size_t budget = std::max<std::size_t>(10 * n, 10);

  // Live leaves as a doubly linked list over indices into `gates`.
  constexpr std::size_t kEnd = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> next(n), prev(n);
  for (std::size_t k = 0; k < n; ++k) {
    next[k] = k + 1 < n ? k + 1 : kEnd;
    prev[k] = k > 0 ? k - 1 : kEnd;
  }
  std::size_t head = n > 0 ? 0 : kEnd;
  std::size_t live = n;
  auto unlink = [&](std::size_t k) {
    if (prev[k] != kEnd) next[prev[k]] = next[k];
    else head = next[k];
    if (next[k] != kEnd) prev[next[k]] = prev[k];
    --live;
  };

  auto mark = [&](const NodePath& p, Producer by, const std::string& note) {
    ByteCode& node = node_at(tree, p);
    node.tombstone = true;
    if (!node.lineage.notes.empty()) node.lineage.notes += "; ";
    node.lineage.notes += "tombstoned by " + std::string(producer_name(by)) + " " + note;
    ++report.tombstoned;
  };

  std::vector<std::size_t> idx;
  std::vector<CtrlGate> window;
  bool changed = true;
  while (changed && !report.budget_exhausted) {
    changed = false;
    ++report.sweeps;
    std::size_t pos = head;
    while (pos != kEnd) {
      idx.clear();
      window.clear();
      for (std::size_t k = pos; k != kEnd && idx.size() < window_size_; k = next[k]) {
        idx.push_back(k);
        window.push_back(gates[k]);
      }
      std::optional<Rewrite> rw;
      Producer by = Producer::Annihilate;
      for (const auto& op : ops_) {
        rw = op->examine(window);
        if (rw) {
          by = op->producer();
          break;
        }
      }
      if (!rw) {
        pos = next[pos];
        continue;
      }
      if (report.rewrites == budget) {
        report.budget_exhausted = true;
        break;
      }
      ++report.rewrites;
      changed = true;
      const std::size_t i = idx[rw->first];
      const std::size_t j = idx[rw->second];
      const NodePath pi = paths[i];
      const NodePath pj = paths[j];
      mark(pi, by, "(with " + format_path(pj) + ")");
      mark(pj, by, "(with " + format_path(pi) + ")");
      if (rw->replacement) {
        ByteCode& host = node_at(tree, pj);
        host.add_child(make_node(*rw->replacement, by,
                                 "merged " + format_path(pi) + " and " + format_path(pj)));
        NodePath np = pj;
        np.push_back(static_cast<std::uint32_t>(host.children.size() - 1));
        paths[j] = std::move(np);
        gates[j] = std::move(*rw->replacement);
        ++report.replacements;
      } else {
        unlink(j);
      }
      // Resume so the next window still reaches the element after i.
      pos = prev[i];
      unlink(i);
      for (std::size_t step = 2; step < window_size_ && pos != kEnd; ++step) pos = prev[pos];
      if (pos == kEnd) pos = head;
    }
  }
  report.leaves_after = live;
  return report;
}

std::vector<SlidingWindowCombiner> optimizer_passes(int level, std::size_t window_size,
                                                    GateGrain granularity) {
  std::vector<SlidingWindowCombiner> passes;
  if (level <= 0) return passes;
  auto annihilation = std::make_shared<const AnnihilationOptimizer>();
  passes.emplace_back("annihilation",
                      std::vector<std::shared_ptr<const WindowOperator>>{annihilation},
                      window_size);
  if (level >= 2) {
    auto consolidation = std::make_shared<const ConsolidationOptimizer>(granularity);
    passes.emplace_back("consolidation",
                        std::vector<std::shared_ptr<const WindowOperator>>{consolidation},
                        window_size);
  }
  return passes;
}

std::vector<PassReport> optimize(ByteCode& tree, int level, std::size_t window_size,
                                 GateGrain granularity) {
  const auto passes = optimizer_passes(level, window_size, granularity);
  std::vector<PassReport> reports;
  for (const auto& pass : passes) reports.push_back(PassReport{pass.name()});
  // later passes can expose work for earlier ones; repeat until quiet
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t k = 0; k < passes.size(); ++k) {
      const PassReport r = passes[k].run(tree);
      PassReport& total = reports[k];
      if (total.sweeps == 0) total.leaves_before = r.leaves_before;
      total.rewrites += r.rewrites;
      total.tombstoned += r.tombstoned;
      total.replacements += r.replacements;
      total.leaves_after = r.leaves_after;
      total.sweeps += r.sweeps;
      total.budget_exhausted = total.budget_exhausted || r.budget_exhausted;
      if (r.budget_exhausted) return reports;
      if (r.rewrites > 0 && passes.size() > 1) changed = true;
    }
  }
  return reports;
}

}  // namespace qcsynth

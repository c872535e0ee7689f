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


#include <algorithm>
#include <stdexcept>

#include "qcsynth/compiler.hpp"

namespace qcsynth {

namespace {

std::vector<const ByteCode*> decomposition_children(const ByteCode& node) {
  std::vector<const ByteCode*> out;
  for (const ByteCode& c : node.children) {
    if (!is_optimizer_producer(c.lineage.producer)) out.push_back(&c);
  }
  return out;
}

struct Reduced {
  Matrix block;
  double leakage = 0.0;
};

// Product of `gates` over `base` plus whatever other qubits they touch,
// restricted to the |0⟩ block of those extra qubits.
Reduced reduce(const std::vector<CtrlGate>& gates, const std::vector<Qubit>& base) {
  std::vector<Qubit> all = base;
  for (const CtrlGate& g : gates) all.insert(all.end(), g.qubits().begin(), g.qubits().end());
  const auto space = sorted_qubits(std::move(all));
  std::vector<Qubit> extra;
  for (const Qubit& q : space) {
    if (std::none_of(base.begin(), base.end(), [&](const Qubit& b) { return b.id == q.id; })) {
      extra.push_back(q);
    }
  }
  const Matrix m = circuit_matrix(gates, space);
  if (extra.empty()) return {m, 0.0};
  TracedBlock tb = trace_out(m, space, extra);
  return {std::move(tb.block), tb.leakage};
}

}  // namespace

std::size_t VerifyReport::nodes_failed() const {
  return static_cast<std::size_t>(std::count_if(
      node_checks.begin(), node_checks.end(), [](const NodeCheck& c) { return !c.passed; }));
}

std::optional<double> node_residual(const ByteCode& node, std::size_t data_count,
                                    double* leakage) {
  const auto kids = decomposition_children(node);
  if (kids.empty()) return std::nullopt;
  if (leakage) *leakage = 0.0;

  const bool unitary_kids = !kids.front()->holds_gate();
  for (const ByteCode* k : kids) {
    if (k->holds_gate() == unitary_kids) {
      throw IrError("children mix matrix and gate payloads");
    }
  }
  if (unitary_kids) {
    const UnitaryM& parent = node.unitary();
    UnitaryM product = UnitaryM::identity(parent.dimension());
    for (const ByteCode* k : kids) product = k->unitary().matmul(product);
    return distance(product.inflate(), parent.inflate());
  }

  std::vector<CtrlGate> gates;
  for (const ByteCode* k : kids) gates.push_back(k->gate());
  Matrix expected;
  std::vector<Qubit> base;
  if (node.holds_gate()) {
    base = sorted_qubits(node.gate().qubits());
    expected = gate_matrix(node.gate(), base);
  } else {
    base = data_qubits(data_count);
    expected = node.unitary().inflate();
  }
  const Reduced r = reduce(gates, base);
  if (leakage) *leakage = r.leakage;
  return distance(r.block, expected);
}

VerifyReport verify(const ByteCode& tree, const UnitaryM& u, const VerifyOptions& options) {
  if (tree.holds_gate()) throw std::invalid_argument("tree root must hold a unitary matrix");
  if (tree.unitary().dimension() != u.dimension()) {
    throw std::invalid_argument("circuit dimension " +
                                std::to_string(tree.unitary().dimension()) +
                                " does not match matrix dimension " +
                                std::to_string(u.dimension()));
  }
  const std::size_t m = log2_exact(u.dimension());
  VerifyReport report;

  for (auto it = PreorderIterator(tree); it != PreorderIterator(); ++it) {
    if (it->lineage.producer == Producer::SkDecompose) report.approximated = true;
  }

  for (auto it = PreorderIterator(tree); it != PreorderIterator(); ++it) {
    const auto kids = decomposition_children(*it);
    if (kids.empty()) continue;
    NodeCheck check;
    check.path = it.path();
    const bool approximated = std::any_of(kids.begin(), kids.end(), [](const ByteCode* k) {
      return k->lineage.producer == Producer::SkDecompose;
    });
    check.tolerance = approximated ? options.sk_budget : options.tol_verify;
    try {
      double leakage = 0.0;
      check.distance = *node_residual(*it, m, &leakage);
      check.passed = check.distance <= check.tolerance;
      if (leakage > check.tolerance) {
        check.passed = false;
        check.detail = "ancilla leakage " + std::to_string(leakage);
      }
    } catch (const std::exception& e) {
      check.passed = false;
      check.detail = e.what();
    }
    if (!check.passed) report.failing_paths.push_back(check.path);
    report.node_checks.push_back(std::move(check));
  }

  report.circuit_tolerance = report.approximated ? options.sk_budget : options.tol_verify;
  try {
    const auto gates = leaf_gates(tree);
    const Reduced r = reduce(gates, data_qubits(m));
    report.ancilla_leakage = r.leakage;
    report.ancilla_clean = r.leakage <= report.circuit_tolerance;
    report.circuit_distance = distance(r.block, u.inflate());
    report.circuit_passed = report.circuit_distance <= report.circuit_tolerance;
  } catch (const std::exception&) {
    report.circuit_passed = false;
    report.circuit_distance = 1.0;
  }
  if ((!report.circuit_passed || !report.ancilla_clean) && report.failing_paths.empty()) {
    report.failing_paths.push_back({});
  }
  return report;
}

}  // namespace qcsynth

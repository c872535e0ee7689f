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

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcsynth/config.hpp"
#include "qcsynth/ir.hpp"
#include "qcsynth/numerics.hpp"
#include "qcsynth/sknet.hpp"

namespace qcsynth {

/// A failure inside the decomposition recursion, tagged with the tree path.
class CompileError : public std::runtime_error {
 public:
  CompileError(NodePath path, const std::string& what);
  const NodePath& path() const { return path_; }

 private:
  NodePath path_;
};

struct Compilation {
  ByteCode tree;
  std::size_t data_qubits = 0;
  std::size_t ancilla_qubits = 0;
};

/// Recursive decomposition of a unitary down to the configured granularity.
/// `net` is only consulted for UNIV_GATE and CLIFFORD_T; when it is null and
/// needed, a net is built from the configuration.
Compilation compile(const UnitaryM& u, const QConfig& config,
                    const SU2Net* net = nullptr);

struct NodeCheck {
  NodePath path;
  double distance = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  std::string detail;
};

struct VerifyOptions {
  double tol_verify = 1e-8;
  /// Tolerance for approximated nodes and for the whole circuit once any
  /// node was approximated.
  double sk_budget = 0.3;
};

struct VerifyReport {
  std::vector<NodeCheck> node_checks;
  double circuit_distance = 0.0;
  double circuit_tolerance = 0.0;
  bool circuit_passed = true;
  bool ancilla_clean = true;
  double ancilla_leakage = 0.0;
  bool approximated = false;
  std::vector<NodePath> failing_paths;

  bool passed() const { return failing_paths.empty() && circuit_passed && ancilla_clean; }
  std::size_t nodes_failed() const;
};

/// Checks every interior node against its children and the whole circuit
/// against `u`. Throws std::invalid_argument when the tree and `u` differ in
/// dimension; every other problem is reported.
VerifyReport verify(const ByteCode& tree, const UnitaryM& u,
                    const VerifyOptions& options = {});

/// Phase-invariant distance between a node and the product of its
/// decomposition children, with any extra qubits traced out. nullopt when
/// the node has no decomposition children. Sets `leakage` if non-null.
std::optional<double> node_residual(const ByteCode& node, std::size_t data_qubits,
                                    double* leakage = nullptr);

}  // namespace qcsynth

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

#include <span>
#include <stdexcept>
#include <vector>

#include "qcsynth/gates.hpp"
#include "qcsynth/numerics.hpp"
#include "qcsynth/qspace.hpp"

namespace qcsynth {

class DecompError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two-level factors whose ordered product (factor 0 applied first) is `u`.
/// Inputs that are already two-level come back unchanged; the identity
/// yields no factors.
std::vector<UnitaryM> tl_decompose(const UnitaryM& u);

/// Lowers a factor with at most two core indices to gates over `space`
/// (space[0] is the most significant bit). Non-diagonal two-index factors
/// use a Gray-code ladder of fully controlled X gates around one singlet;
/// diagonal factors become fully controlled phase gates on the last qubit.
std::vector<CtrlGate> gray_decompose(const UnitaryM& f, std::span<const Qubit> space);

/// Number of gates gray_decompose emits for a non-diagonal pair (i, j).
std::size_t gray_gate_count(std::size_t i, std::size_t j);

/// Rewrites a single-target gate with c ≥ 2 controls into gates with at most
/// one control. Three or more controls borrow c − 1 ancilla from `device`
/// and hand them back clean.
std::vector<CtrlGate> ctrl_decompose(const CtrlGate& g, QDevice& device);

/// u = e^{iα}·Rz(β)·Ry(γ)·Rz(δ) with γ ∈ [0, π] and α, β, δ ∈ (−π, π].
struct EulerAngles {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
};

EulerAngles euler_decompose(const Matrix& u);
Matrix euler_matrix(const EulerAngles& a);

/// Principal square root of a 2×2 unitary, V² = u.
Matrix unitary_sqrt(const Matrix& u);

/// Lowers a gate with at most one control to rotations and CNOTs.
std::vector<CtrlGate> euler_gates(const CtrlGate& g);

/// Rewrites a UNIV_GATE-grain gate into {H, S, T, CNOT}. The returned phase
/// is the global phase the rewrite dropped (gate = e^{i·phase}·product).
struct CliffordTRewrite {
  std::vector<CtrlGate> gates;
  double phase = 0.0;
};
CliffordTRewrite cliffordt_decompose(const CtrlGate& g);

}  // namespace qcsynth

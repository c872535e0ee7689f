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
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qcsynth/numerics.hpp"
#include "qcsynth/qspace.hpp"

namespace qcsynth {

class GateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// SD = S†, TD = T†.
enum class NamedGate : std::uint8_t { X = 0, Y, Z, H, S, T, SD, TD };
inline constexpr std::size_t kNamedGateCount = 8;

enum class Axis : std::uint8_t { X = 0, Y, Z };

/// R_n(θ) = exp(−iθσ_n/2).
struct Rotation {
  Axis axis = Axis::Z;
  double angle = 0.0;
  friend bool operator==(const Rotation&, const Rotation&) = default;
};

/// A 2^t × 2^t unitary acting on t targets (first target = most significant).
struct GenericCore {
  Matrix matrix;
};

using CoreOp = std::variant<NamedGate, Rotation, GenericCore>;

/// Fineness scale; larger is finer.
enum class GateGrain : std::uint8_t {
  Unitary = 0,
  TwoLevel,
  MultiTarget,
  Singlet,
  CtrlPruned,
  Principal,
  UnivGate,
  CliffordT,
};

std::string_view named_gate_name(NamedGate g);
std::optional<NamedGate> named_gate_from_name(std::string_view name);
std::string_view axis_name(Axis a);
std::string_view grain_name(GateGrain g);
/// Accepts "CLIFFORD_T" and "clifford_t" spellings.
std::optional<GateGrain> grain_from_name(std::string_view name);

const Matrix& named_matrix(NamedGate g);
NamedGate named_inverse(NamedGate g);
Matrix rotation_matrix(Axis axis, double angle);
Matrix core_matrix(const CoreOp& core);
std::size_t core_target_count(const CoreOp& core);
bool core_is_diagonal(const CoreOp& core);
/// Exact (within 1e-12) lookup of a 2×2 matrix in the named-gate table.
std::optional<NamedGate> recognize_named(const Matrix& m);

/// A gate: a core operator, the qubits it touches, and each qubit's role.
///
/// `phase` is a global factor e^{i·phase} on the whole gate matrix. It is
/// bookkeeping for exact reconstruction; circuit equivalence ignores it.
class CtrlGate {
 public:
  CtrlGate() = default;
  CtrlGate(std::vector<Qubit> qubits, std::vector<QType> qtypes, CoreOp core,
           double phase = 0.0);

  static CtrlGate single(NamedGate g, Qubit q);
  static CtrlGate single(Rotation r, Qubit q);
  static CtrlGate single(const Matrix& m, Qubit q);
  /// CONTROL1 on `control`, core X on `target`.
  static CtrlGate cnot(Qubit control, Qubit target);
  static CtrlGate controlled(std::vector<Qubit> controls,
                             std::vector<QType> control_types, Qubit target,
                             CoreOp core);

  const std::vector<Qubit>& qubits() const { return qubits_; }
  const std::vector<QType>& qtypes() const { return qtypes_; }
  const CoreOp& core() const { return core_; }
  double phase() const { return phase_; }
  void set_phase(double phase) { phase_ = phase; }

  std::vector<Qubit> targets() const;
  std::vector<Qubit> controls() const;
  /// Targets and controls, in gate order.
  std::vector<Qubit> support() const;
  std::size_t control_count() const;
  std::optional<QType> role_of(const Qubit& q) const;

  bool is_named() const { return std::holds_alternative<NamedGate>(core_); }
  bool is_rotation() const { return std::holds_alternative<Rotation>(core_); }
  bool is_generic() const { return std::holds_alternative<GenericCore>(core_); }
  bool is_cnot() const;

  /// Exact structural equality, including bitwise core entries and phase.
  friend bool operator==(const CtrlGate& a, const CtrlGate& b);

  std::string describe() const;

 private:
  std::vector<Qubit> qubits_;
  std::vector<QType> qtypes_;
  CoreOp core_ = NamedGate::X;
  double phase_ = 0.0;
};

/// Oracle construction: entry-by-entry over basis states of `space`.
Matrix gate_matrix(const CtrlGate& g, std::span<const Qubit> space);

/// Left-multiplies `m` (rows indexed by basis states of `space`) by the
/// gate. Row-gathering kernel, independent of gate_matrix.
void apply_gate(Matrix& m, const CtrlGate& g, std::span<const Qubit> space);

/// Product of gates in application order (gates[0] applied first).
Matrix circuit_matrix(std::span<const CtrlGate> gates,
                      std::span<const Qubit> space);

/// Union of gate qubits, sorted by id.
std::vector<Qubit> union_space(std::span<const CtrlGate> gates);
std::vector<Qubit> sorted_qubits(std::vector<Qubit> qubits);

/// gate_matrix(result) = gate_matrix(a) · gate_matrix(b) over the union.
CtrlGate matmul(const CtrlGate& a, const CtrlGate& b);
CtrlGate expand(const CtrlGate& g, std::span<const Qubit> extra);
/// Removes qubits, keeping the removed=|0⟩ block. Throws GateError naming
/// the first qubit whose |0⟩ subspace is not preserved.
CtrlGate trace(const CtrlGate& g, std::span<const Qubit> removed);
CtrlGate sorted(const CtrlGate& g);
CtrlGate convert(const UnitaryM& u, std::span<const Qubit> space);
CtrlGate herm(const CtrlGate& g);

GateGrain grain_of(const CtrlGate& g);
GateGrain grain_of(const UnitaryM& u);

/// Result of restricting a matrix to the |0⟩ block of some qubits.
struct TracedBlock {
  Matrix block;
  std::vector<Qubit> remaining;
  /// max |entry| leaking out of the |0⟩ subspace of the removed qubits.
  double leakage = 0.0;
  /// First removed qubit observed leaking, if any.
  std::optional<Qubit> offender;
};

/// `m` acts on `space`; keeps rows/cols where every removed qubit is 0.
TracedBlock trace_out(const Matrix& m, std::span<const Qubit> space,
                      std::span<const Qubit> removed, double tol = kTolUnitary);

}  // namespace qcsynth

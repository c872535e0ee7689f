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

#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qcsynth/gates.hpp"
#include "qcsynth/ir.hpp"
#include "qcsynth/numerics.hpp"
#include "qcsynth/sknet.hpp"

namespace qcsynth::testing {

// Dense reference constructions. Nothing here calls the library's own
// matrix builders, so agreement with them is evidence rather than tautology.

Matrix kron(const Matrix& a, const Matrix& b);
Matrix textbook(NamedGate g);
Matrix textbook_rotation(Axis axis, double angle);

/// Σ over core entries of Kronecker-product operators, plus the identity on
/// the complement of the control projector. `space[0]` is the MSB.
Matrix oracle_gate(const CtrlGate& g, std::span<const Qubit> space);
/// Circuit product, gates[0] applied first, built by plain multiplication.
Matrix oracle_circuit(std::span<const CtrlGate> gates, std::span<const Qubit> space);
/// Keeps the block where every qubit at position >= keep is |0>.
Matrix oracle_restrict(const Matrix& m, std::size_t total_qubits, std::size_t keep);

Matrix haar_unitary(std::size_t n, std::mt19937_64& rng);
Matrix haar_su2(std::mt19937_64& rng);

/// The 8×8 cyclic permutation used throughout the end-to-end tests:
/// |0> fixed, |k> -> |k+1> for 1 <= k < 7, |7> -> |1>.
Matrix cyclic_permutation8();

/// Random gates over `qubits` wires: named, rotations, CNOTs, controlled
/// gates and deliberate inverse pairs so optimizers have work to do.
std::vector<CtrlGate> random_circuit(std::mt19937_64& rng, std::size_t qubits,
                                     std::size_t length);

/// A root over the whole space whose children are the given gates.
ByteCode tree_of(const std::vector<CtrlGate>& gates, std::size_t qubits);

/// Live leaf circuit over data ∪ ancilla, restricted to ancilla |0>.
Matrix tree_circuit(const ByteCode& tree, std::size_t data, std::size_t total);

struct QasmProgram {
  std::size_t data = 0;
  std::size_t ancilla = 0;
  Matrix unitary;  // over data then ancilla, qubit 0 MSB
  std::size_t gate_lines = 0;
  std::size_t comment_lines = 0;
};

/// Interprets the QASM subset the emitter produces. Throws std::runtime_error
/// on any line outside it.
QasmProgram run_qasm(const std::string& text);

/// Default-alphabet net of length 12, built once per process.
const SU2Net& default_net();

std::string read_file(const std::string& path);
std::vector<std::uint8_t> read_bytes(const std::string& path);

}  // namespace qcsynth::testing

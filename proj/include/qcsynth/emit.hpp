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
#include <stdexcept>
#include <string>
#include <vector>

#include "qcsynth/gates.hpp"
#include "qcsynth/ir.hpp"

namespace qcsynth {

class EmitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Receives a rendered circuit gate by gate, in application order.
class CircuitBuilder {
 public:
  virtual ~CircuitBuilder() = default;
  virtual void declare_qubits(std::size_t data, std::size_t ancilla) = 0;
  virtual void add_gate(const CtrlGate& g, const std::string& lineage_comment) = 0;
  virtual std::string finish() = 0;
};

/// QASM text for one gate; generic cores expand to several lines.
/// `phase` collects the global phase the lines leave out.
struct QasmLines {
  std::vector<std::string> lines;
  double phase = 0.0;
};
QasmLines qasm_gate_lines(const CtrlGate& g, std::size_t data_count);
/// Single-line form; throws EmitError if the gate needs more than one line.
std::string qasm_gate_line(const CtrlGate& g, std::size_t data_count);

/// Shortest decimal that reads back to the same double.
std::string format_angle(double x);

class QasmBuilder final : public CircuitBuilder {
 public:
  explicit QasmBuilder(bool annotate = false) : annotate_(annotate) {}
  void declare_qubits(std::size_t data, std::size_t ancilla) override;
  void add_gate(const CtrlGate& g, const std::string& lineage_comment) override;
  std::string finish() override;

 private:
  bool annotate_;
  bool declared_ = false;
  bool finished_ = false;
  std::size_t data_ = 0;
  double phase_ = 0.0;
  std::string out_;
};

/// Feeds every live leaf of `tree` to `builder`. Never modifies the tree.
std::string render(const ByteCode& tree, std::size_t data_qubits, std::size_t total_qubits,
                   CircuitBuilder& builder);

/// Comment text describing where a leaf came from.
std::string lineage_comment(const ByteCode& root, const NodePath& path);

}  // namespace qcsynth

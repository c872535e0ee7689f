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


#include "qcsynth/emit.hpp"

#include <charconv>
#include <cmath>

#include "qcsynth/decomp.hpp"

namespace qcsynth {

namespace {

std::string qubit_ref(const Qubit& q, std::size_t data_count) {
  if (q.id < data_count) return "q[" + std::to_string(q.id) + "]";
  return "anc[" + std::to_string(q.id - data_count) + "]";
}

std::string gate_name(const CoreOp& core) {
  if (const auto* n = std::get_if<NamedGate>(&core)) {
    switch (*n) {
      case NamedGate::X:
        return "x";
      case NamedGate::Y:
        return "y";
      case NamedGate::Z:
        return "z";
      case NamedGate::H:
        return "h";
      case NamedGate::S:
        return "s";
      case NamedGate::T:
        return "t";
      case NamedGate::SD:
        return "sdg";
      case NamedGate::TD:
        return "tdg";
    }
  }
  const auto& r = std::get<Rotation>(core);
  return "r" + std::string(axis_name(r.axis)) + "(" + format_angle(r.angle) + ")";
}

struct Control {
  Qubit q;
  bool positive;
};

std::string line(const std::vector<Control>& ctrls, const std::string& op, const Qubit& target,
                 std::size_t data_count) {
  std::string s;
  for (const Control& c : ctrls) s += c.positive ? "ctrl @ " : "negctrl @ ";
  s += op + " ";
  for (const Control& c : ctrls) s += qubit_ref(c.q, data_count) + ", ";
  s += qubit_ref(target, data_count) + ";";
  return s;
}

// e^{iα} on the subspace where every control is satisfied.
void controlled_phase(std::vector<Control> ctrls, double alpha, std::size_t data_count,
                      QasmLines& out) {
  while (!ctrls.empty() && alpha != 0.0) {
    const Control last = ctrls.back();
    ctrls.pop_back();
    // diag(1, e^{iα}) = e^{iα/2}·Rz(α); a negative control mirrors it
    const double angle = last.positive ? alpha : -alpha;
    out.lines.push_back(line(ctrls, "rz(" + format_angle(angle) + ")", last.q, data_count));
    alpha /= 2;
  }
  out.phase += alpha;
}

}  // namespace

std::string format_angle(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

QasmLines qasm_gate_lines(const CtrlGate& g, std::size_t data_count) {
  const auto targets = g.targets();
  if (targets.size() != 1) {
    throw EmitError("gate " + g.describe() + " has several targets; no QASM form");
  }
  const Qubit t = targets[0];
  std::vector<Control> ctrls;
  for (std::size_t k = 0; k < g.qubits().size(); ++k) {
    if (is_control(g.qtypes()[k])) {
      ctrls.push_back({g.qubits()[k], g.qtypes()[k] == QType::Control1});
    }
  }
  QasmLines out;
  out.phase = g.phase();
  if (g.is_cnot()) {
    out.lines.push_back("cx " + qubit_ref(ctrls[0].q, data_count) + ", " +
                        qubit_ref(t, data_count) + ";");
    return out;
  }
  if (!g.is_generic()) {
    out.lines.push_back(line(ctrls, gate_name(g.core()), t, data_count));
    return out;
  }
  const EulerAngles e = euler_decompose(std::get<GenericCore>(g.core()).matrix);
  const std::pair<char, double> steps[] = {{'z', e.delta}, {'y', e.gamma}, {'z', e.beta}};
  for (const auto& [axis, angle] : steps) {
    if (angle == 0.0) continue;
    out.lines.push_back(line(ctrls, std::string("r") + axis + "(" + format_angle(angle) + ")",
                             t, data_count));
  }
  controlled_phase(ctrls, e.alpha, data_count, out);
  return out;
}

std::string qasm_gate_line(const CtrlGate& g, std::size_t data_count) {
  const QasmLines l = qasm_gate_lines(g, data_count);
  if (l.lines.size() != 1) throw EmitError("gate " + g.describe() + " needs several lines");
  return l.lines.front();
}

void QasmBuilder::declare_qubits(std::size_t data, std::size_t ancilla) {
  if (declared_) throw EmitError("qubits declared twice");
  declared_ = true;
  data_ = data;
  out_ = "OPENQASM 3.0;\ninclude \"stdgates.inc\";\n";
  out_ += "qubit[" + std::to_string(data) + "] q;\n";
  if (ancilla > 0) out_ += "qubit[" + std::to_string(ancilla) + "] anc;\n";
}

void QasmBuilder::add_gate(const CtrlGate& g, const std::string& lineage_comment) {
  if (!declared_ || finished_) throw EmitError("add_gate outside declare/finish");
  const QasmLines l = qasm_gate_lines(g, data_);
  phase_ += l.phase;
  for (const std::string& s : l.lines) {
    if (annotate_) out_ += "// " + lineage_comment + "\n";
    out_ += s + "\n";
  }
}

std::string QasmBuilder::finish() {
  if (finished_) throw EmitError("finish called twice");
  if (!declared_) throw EmitError("finish before declare_qubits");
  finished_ = true;
  out_ += "// global phase: " + format_angle(std::remainder(phase_, 2 * 3.141592653589793)) + "\n";
  return out_;
}

std::string lineage_comment(const ByteCode& root, const NodePath& path) {
  std::string s = path.empty() ? std::string("<root>") : format_path(path);
  const auto chain = trace_gate(root, path);
  for (std::size_t i = 1; i < chain.size(); ++i) {
    s += i == 1 ? " " : " > ";
    s += std::string(producer_name(chain[i].producer)) + "#" + std::to_string(chain[i].ordinal);
  }
  return s;
}

std::string render(const ByteCode& tree, std::size_t data_qubits, std::size_t total_qubits,
                   CircuitBuilder& builder) {
  if (total_qubits < data_qubits) throw EmitError("total qubits below data qubits");
  builder.declare_qubits(data_qubits, total_qubits - data_qubits);
  for (const NodePath& p : leaf_paths(tree)) {
    const ByteCode& n = node_at(tree, p);
    if (!n.holds_gate()) {
      throw EmitError("leaf " + format_path(p) + " holds a unitary matrix with no backend form");
    }
    builder.add_gate(n.gate(), lineage_comment(tree, p));
  }
  return builder.finish();
}

}  // namespace qcsynth

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


#include <cmath>
#include <cstdio>
#include <memory>

#include "qcsynth/compiler.hpp"
#include "qcsynth/decomp.hpp"

namespace qcsynth {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string index_list(const std::vector<std::size_t>& idx) {
  std::string s;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(idx[i]);
  }
  return s;
}

class Compiler {
 public:
  Compiler(const QConfig& config, const SU2Net* net) : config_(config), net_(net) {}

  Compilation run(const UnitaryM& u) {
    if (!is_power_of_two(u.dimension()) || u.dimension() < 2) {
      throw CompileError({}, "dimension " + std::to_string(u.dimension()) +
                                 " is not a power of two >= 2");
    }
    QDevice device(config_.ancilla_budget);
    const auto data = device.allocate_data(log2_exact(u.dimension()));
    device_ = &device;

    Compilation out;
    out.tree = make_node(u, Producer::Root);
    ByteCode& root = out.tree;
    const GateGrain target = config_.granularity;
    if (!u.trimmed().is_identity()) {
      try {
        if (target == GateGrain::Unitary || target == GateGrain::MultiTarget) {
          root.add_child(make_node(convert(u, data), Producer::Root, "qspace assignment"));
        } else {
          const auto factors = tl_decompose(u);
          for (std::size_t f = 0; f < factors.size(); ++f) {
            ByteCode& fnode = root.add_child(make_node(
                factors[f], Producer::TlDecompose,
                "indices " + index_list(factors[f].core_indices())));
            const NodePath fpath{static_cast<std::uint32_t>(f)};
            lower_factor(fnode, fpath, data);
          }
        }
      } catch (const CompileError&) {
        throw;
      } catch (const std::exception& e) {
        throw CompileError({}, e.what());
      }
    }
    out.data_qubits = device.data_count();
    out.ancilla_qubits = device.ancilla_count();
    device_ = nullptr;
    return out;
  }

 private:
  void lower_factor(ByteCode& fnode, const NodePath& path, const std::vector<Qubit>& data) {
    try {
      const UnitaryM& f = fnode.unitary();
      if (config_.granularity == GateGrain::TwoLevel) {
        fnode.add_child(make_node(convert(f, data), Producer::Root, "qspace assignment"));
        return;
      }
      const auto gates = gray_decompose(f, data);
      const bool diagonal = gates.size() != gray_gate_count_or_zero(f);
      const std::size_t core_at = gates.size() / 2;
      for (std::size_t k = 0; k < gates.size(); ++k) {
        std::string notes = diagonal ? "diagonal" : (k == core_at ? "core" : "ladder");
        ByteCode& child = fnode.add_child(make_node(gates[k], Producer::GrayDecompose, notes));
        NodePath cpath = path;
        cpath.push_back(static_cast<std::uint32_t>(k));
        refine(child, cpath);
      }
    } catch (const CompileError&) {
      throw;
    } catch (const std::exception& e) {
      throw CompileError(path, e.what());
    }
  }

  static std::size_t gray_gate_count_or_zero(const UnitaryM& f) {
    const auto& idx = f.core_indices();
    if (idx.size() != 2) return 0;
    const Matrix& c = f.core();
    if (std::abs(c(0, 1)) <= 1e-14 && std::abs(c(1, 0)) <= 1e-14) return 0;
    return gray_gate_count(idx[0], idx[1]);
  }

  void refine(ByteCode& node, const NodePath& path) {
    std::vector<CtrlGate> kids;
    Producer producer = Producer::Root;
    std::vector<std::string> notes;
    try {
      const CtrlGate& g = node.gate();
      const GateGrain grain = grain_of(g);
      if (grain >= config_.granularity) return;
      switch (grain) {
        case GateGrain::Singlet: {
          producer = Producer::CtrlDecompose;
          const std::size_t before = device_->ancilla_count();
          kids = ctrl_decompose(g, *device_);
          std::string n = g.control_count() == 2 ? "barenco" : "toffoli ladder";
          if (device_->ancilla_count() != before) {
            n += ", ancilla allocated " + std::to_string(device_->ancilla_count() - before);
          }
          notes.assign(kids.size(), n);
          break;
        }
        case GateGrain::CtrlPruned: {
          producer = Producer::EulerDecompose;
          kids = euler_gates(g);
          std::string n = "zyz";
          if (!(g.is_named() && g.control_count() == 1)) {
            const EulerAngles e = euler_decompose(core_matrix(g.core()));
            n += " alpha=" + fmt(e.alpha) + " beta=" + fmt(e.beta) +
                 " gamma=" + fmt(e.gamma) + " delta=" + fmt(e.delta);
          }
          notes.assign(kids.size(), n);
          break;
        }
        case GateGrain::Principal: {
          producer = Producer::SkDecompose;
          const Matrix target = core_matrix(g.core());
          const GateWord word = sk_decompose(net(), target, config_.sk_depth);
          const Qubit q = g.targets()[0];
          for (NamedGate l : word.letters) kids.push_back(CtrlGate::single(l, q));
          const double err = distance(word.matrix, target);
          if (!kids.empty()) {
            const double ph = std::arg(relative_phase(word.matrix, target));
            kids.front().set_phase(g.phase() + ph);
          }
          notes.assign(kids.size(), "depth=" + std::to_string(config_.sk_depth) +
                                        " error=" + fmt(err));
          break;
        }
        case GateGrain::UnivGate: {
          producer = Producer::CliffordTDecompose;
          const CliffordTRewrite rw = cliffordt_decompose(g);
          kids = rw.gates;
          notes.assign(kids.size(), "phase=" + fmt(rw.phase));
          break;
        }
        default:
          throw DecompError("no decomposition refines " + std::string(grain_name(grain)) +
                            " gate " + g.describe());
      }
    } catch (const CompileError&) {
      throw;
    } catch (const std::exception& e) {
      throw CompileError(path, e.what());
    }

    if (kids.empty()) {
      node.tombstone = true;
      if (!node.lineage.notes.empty()) node.lineage.notes += "; ";
      node.lineage.notes += "identity core elided";
      return;
    }
    for (std::size_t k = 0; k < kids.size(); ++k) {
      ByteCode& child = node.add_child(make_node(std::move(kids[k]), producer, notes[k]));
      NodePath cpath = path;
      cpath.push_back(static_cast<std::uint32_t>(k));
      refine(child, cpath);
    }
  }

  const SU2Net& net() {
    if (net_) return *net_;
    if (!owned_net_) {
      owned_net_ = std::make_unique<SU2Net>(SU2Net::build(
          config_.sk_alphabet, static_cast<std::size_t>(config_.sk_net_length)));
    }
    return *owned_net_;
  }

  const QConfig& config_;
  const SU2Net* net_;
  std::unique_ptr<SU2Net> owned_net_;
  QDevice* device_ = nullptr;
};

std::string path_prefix(const NodePath& path) {
  return "at node " + (path.empty() ? std::string("<root>") : format_path(path)) + ": ";
}

}  // namespace

CompileError::CompileError(NodePath path, const std::string& what)
    : std::runtime_error(path_prefix(path) + what), path_(std::move(path)) {}

Compilation compile(const UnitaryM& u, const QConfig& config, const SU2Net* net) {
  return Compiler(config, net).run(u);
}

}  // namespace qcsynth

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


#include "qcsynth/pipeline.hpp"

namespace qcsynth {

QcoFile CompileResult::to_qco(GateGrain granularity) const {
  QcoFile f;
  f.header.data_qubits = static_cast<std::uint32_t>(compilation.data_qubits);
  f.header.total_qubits =
      static_cast<std::uint32_t>(compilation.data_qubits + compilation.ancilla_qubits);
  f.header.granularity = granularity;
  f.root = compilation.tree;
  return f;
}

Pipeline::Pipeline(QConfig config, const SU2Net* net) : config_(std::move(config)), net_(net) {}

std::vector<std::string> Pipeline::optimizer_names() const {
  std::vector<std::string> names;
  for (const auto& pass : optimizer_passes(config_.optimization_level,
                                           static_cast<std::size_t>(config_.window_size),
                                           config_.granularity)) {
    names.push_back(pass.name());
  }
  return names;
}

VerifyOptions Pipeline::verify_options() const {
  return VerifyOptions{config_.tol_verify, config_.sk_epsilon};
}

const SU2Net* Pipeline::net_for_run() {
  if (net_) return net_;
  if (config_.granularity < GateGrain::UnivGate) return nullptr;
  if (!owned_net_) {
    owned_net_ = std::make_unique<SU2Net>(NetCache::from_environment().get_or_build(
        config_.sk_alphabet, static_cast<std::size_t>(config_.sk_net_length)));
  }
  return owned_net_.get();
}

CompileResult Pipeline::run(const UnitaryM& u) {
  CompileResult r;
  r.compilation = compile(u, config_, net_for_run());
  r.passes = optimize(r.compilation.tree, config_.optimization_level,
                      static_cast<std::size_t>(config_.window_size), config_.granularity);
  return r;
}

Pipeline build_pipeline(const QConfig& config, const SU2Net* net) { return Pipeline(config, net); }

}  // namespace qcsynth

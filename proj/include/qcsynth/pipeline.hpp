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

#include <memory>
#include <string>
#include <vector>

#include "qcsynth/compiler.hpp"
#include "qcsynth/config.hpp"
#include "qcsynth/optimize.hpp"
#include "qcsynth/serde.hpp"

namespace qcsynth {

struct CompileResult {
  Compilation compilation;
  std::vector<PassReport> passes;

  QcoFile to_qco(GateGrain granularity) const;
};

/// One compilation run: decomposition, optimizer passes and verification
/// settings wired from a single configuration. Pipelines share no state.
class Pipeline {
 public:
  /// `net` is borrowed; when null, the net comes from the on-disk cache the
  /// first time a rotation needs approximating.
  explicit Pipeline(QConfig config, const SU2Net* net = nullptr);

  const QConfig& config() const { return config_; }
  std::vector<std::string> optimizer_names() const;
  VerifyOptions verify_options() const;

  CompileResult run(const UnitaryM& u);

 private:
  const SU2Net* net_for_run();

  QConfig config_;
  const SU2Net* net_;
  std::unique_ptr<SU2Net> owned_net_;
};

Pipeline build_pipeline(const QConfig& config, const SU2Net* net = nullptr);

}  // namespace qcsynth

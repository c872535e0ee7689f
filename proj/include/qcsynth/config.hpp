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

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qcsynth/gates.hpp"

namespace qcsynth {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class EmitFormat { Qasm3, Qco };

struct QConfig {
  GateGrain granularity = GateGrain::Principal;
  double tol_verify = 1e-8;
  double sk_epsilon = 0.3;
  int sk_depth = 3;
  int sk_net_length = 12;
  int optimization_level = 1;
  int window_size = 4;
  std::optional<std::size_t> ancilla_budget;  // nullopt = unbounded
  EmitFormat emit_format = EmitFormat::Qasm3;
  std::string rotation_basis = "ZYZ";
  std::vector<NamedGate> sk_alphabet = {NamedGate::H, NamedGate::T, NamedGate::TD,
                                        NamedGate::S, NamedGate::SD};
};

/// Where each key's final value came from: "default", "override" or "cli".
using Provenance = std::map<std::string, std::string>;

struct LoadedConfig {
  QConfig config;
  Provenance provenance;
};

/// The built-in defaults as a JSON object.
nlohmann::json default_config_document();
nlohmann::json to_json(const QConfig& c);

/// Merges defaults, an optional override document and command-line
/// assignments, later sources winning per key.
LoadedConfig load_config(const nlohmann::json& defaults,
                         const std::optional<nlohmann::json>& override_doc,
                         const std::vector<std::pair<std::string, std::string>>& cli_pairs);

/// Splits "key=value". The value is read as JSON when it parses, else as a
/// plain string.
std::pair<std::string, std::string> parse_assignment(const std::string& text);

/// Known key closest to `key` by edit distance.
std::string nearest_config_key(const std::string& key);

std::vector<std::string> config_keys();

}  // namespace qcsynth

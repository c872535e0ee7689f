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


#include "qcsynth/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace qcsynth {

using nlohmann::json;

namespace {

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> kKeys = {
      "granularity",   "tol_verify",         "sk_epsilon",  "sk_depth",
      "sk_net_length", "optimization_level", "window_size", "ancilla_budget",
      "emit_format",   "rotation_basis",     "sk_alphabet"};
  return kKeys;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] != b[j - 1])});
      diag = up;
    }
  }
  return row[b.size()];
}

[[noreturn]] void type_error(const std::string& key, const std::string& want,
                             const json& got, const std::string& source) {
  throw ConfigError("config key '" + key + "' (" + source + ") expects " + want +
                    ", got " + got.dump());
}

double number(const std::string& key, const json& v, const std::string& src) {
  if (!v.is_number()) type_error(key, "a number", v, src);
  return v.get<double>();
}

int integer(const std::string& key, const json& v, const std::string& src) {
  if (!v.is_number_integer()) type_error(key, "an integer", v, src);
  const auto x = v.get<long long>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    type_error(key, "an integer in range", v, src);
  }
  return static_cast<int>(x);
}

std::string text(const std::string& key, const json& v, const std::string& src) {
  if (!v.is_string()) type_error(key, "a string", v, src);
  return v.get<std::string>();
}

void apply(QConfig& c, const std::string& key, const json& v, const std::string& src) {
  if (key == "granularity") {
    const auto g = grain_from_name(text(key, v, src));
    if (!g) type_error(key, "a granularity name", v, src);
    c.granularity = *g;
  } else if (key == "tol_verify") {
    c.tol_verify = number(key, v, src);
  } else if (key == "sk_epsilon") {
    c.sk_epsilon = number(key, v, src);
  } else if (key == "sk_depth") {
    c.sk_depth = integer(key, v, src);
  } else if (key == "sk_net_length") {
    c.sk_net_length = integer(key, v, src);
  } else if (key == "optimization_level") {
    c.optimization_level = integer(key, v, src);
  } else if (key == "window_size") {
    c.window_size = integer(key, v, src);
  } else if (key == "ancilla_budget") {
    if (v.is_null() || (v.is_string() && v.get<std::string>() == "unbounded")) {
      c.ancilla_budget.reset();
    } else {
      const int n = integer(key, v, src);
      if (n < 0) throw ConfigError("config key 'ancilla_budget' must be >= 0");
      c.ancilla_budget = static_cast<std::size_t>(n);
    }
  } else if (key == "emit_format") {
    std::string f = text(key, v, src);
    std::transform(f.begin(), f.end(), f.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
    if (f == "QASM3") {
      c.emit_format = EmitFormat::Qasm3;
    } else if (f == "QCO") {
      c.emit_format = EmitFormat::Qco;
    } else {
      type_error(key, "QASM3 or QCO", v, src);
    }
  } else if (key == "rotation_basis") {
    c.rotation_basis = text(key, v, src);
  } else if (key == "sk_alphabet") {
    if (!v.is_array()) type_error(key, "an array of gate names", v, src);
    std::vector<NamedGate> letters;
    for (const json& e : v) {
      const auto g = e.is_string() ? named_gate_from_name(e.get<std::string>())
                                   : std::nullopt;
      if (!g) type_error(key, "an array of gate names", v, src);
      letters.push_back(*g);
    }
    c.sk_alphabet = std::move(letters);
  }
}

void check_invariants(const QConfig& c) {
  if (c.window_size < 2) {
    throw ConfigError("window_size must be >= 2, got " + std::to_string(c.window_size));
  }
  if (!(c.tol_verify > 0) || !std::isfinite(c.tol_verify)) {
    throw ConfigError("tol_verify must be positive");
  }
  if (!(c.sk_epsilon > 0) || !std::isfinite(c.sk_epsilon)) {
    throw ConfigError("sk_epsilon must be positive");
  }
  if (c.sk_depth < 0) throw ConfigError("sk_depth must be >= 0");
  if (c.sk_net_length < 1) throw ConfigError("sk_net_length must be >= 1");
  if (c.optimization_level < 0 || c.optimization_level > 2) {
    throw ConfigError("optimization_level must be 0, 1 or 2");
  }
  if (c.rotation_basis != "ZYZ") {
    throw ConfigError("rotation_basis '" + c.rotation_basis + "' is not supported (ZYZ only)");
  }
  if (c.sk_alphabet.empty()) throw ConfigError("sk_alphabet must not be empty");
}

void merge(QConfig& c, Provenance& prov, const json& doc, const std::string& src) {
  if (!doc.is_object()) throw ConfigError(src + " configuration is not a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end()) {
      throw ConfigError("unknown config key '" + key + "' (" + src +
                        "); did you mean '" + nearest_config_key(key) + "'?");
    }
    apply(c, key, value, src);
    prov[key] = src;
  }
}

}  // namespace

std::vector<std::string> config_keys() { return known_keys(); }

std::string nearest_config_key(const std::string& key) {
  std::string best;
  std::size_t best_d = std::numeric_limits<std::size_t>::max();
  for (const std::string& k : known_keys()) {
    const std::size_t d = edit_distance(key, k);
    if (d < best_d) {
      best = k;
      best_d = d;
    }
  }
  return best;
}

json to_json(const QConfig& c) {
  json alphabet = json::array();
  for (NamedGate g : c.sk_alphabet) alphabet.push_back(std::string(named_gate_name(g)));
  return json{
      {"granularity", std::string(grain_name(c.granularity))},
      {"tol_verify", c.tol_verify},
      {"sk_epsilon", c.sk_epsilon},
      {"sk_depth", c.sk_depth},
      {"sk_net_length", c.sk_net_length},
      {"optimization_level", c.optimization_level},
      {"window_size", c.window_size},
      {"ancilla_budget", c.ancilla_budget ? json(*c.ancilla_budget) : json(nullptr)},
      {"emit_format", c.emit_format == EmitFormat::Qasm3 ? "QASM3" : "QCO"},
      {"rotation_basis", c.rotation_basis},
      {"sk_alphabet", alphabet},
  };
}

json default_config_document() { return to_json(QConfig{}); }

LoadedConfig load_config(const json& defaults, const std::optional<json>& override_doc,
                         const std::vector<std::pair<std::string, std::string>>& cli_pairs) {
  LoadedConfig out;
  merge(out.config, out.provenance, defaults, "default");
  for (const std::string& k : known_keys()) {
    if (!out.provenance.contains(k)) {
      throw ConfigError("default configuration is missing key '" + k + "'");
    }
  }
  if (override_doc) merge(out.config, out.provenance, *override_doc, "override");
  json cli = json::object();
  for (const auto& [k, v] : cli_pairs) {
    json parsed = json::parse(v, nullptr, false);
    cli[k] = parsed.is_discarded() ? json(v) : parsed;
  }
  merge(out.config, out.provenance, cli, "cli");
  check_invariants(out.config);
  return out;
}

std::pair<std::string, std::string> parse_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("expected key=value, got '" + text + "'");
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

}  // namespace qcsynth

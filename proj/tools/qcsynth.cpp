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


// qcsynth command-line driver.
//
// Exit codes: 0 success, 1 internal error, 2 bad input or usage,
// 3 compilation failure, 4 verification failure.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qcsynth/compiler.hpp"
#include "qcsynth/config.hpp"
#include "qcsynth/emit.hpp"
#include "qcsynth/ir.hpp"
#include "qcsynth/numerics.hpp"
#include "qcsynth/pipeline.hpp"
#include "qcsynth/serde.hpp"
#include "qcsynth/sknet.hpp"

namespace {

using namespace qcsynth;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;
constexpr int kExitCompile = 3;
constexpr int kExitVerify = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigFlags {
  std::optional<std::string> granularity, opt, sk_depth, sk_epsilon, window, ancilla_budget;
  std::optional<std::string> config_path;
  std::vector<std::string> sets;

  void attach(CLI::App* app) {
    app->add_option("--granularity", granularity, "Target gate grain (unitary ... clifford_t)");
    app->add_option("--opt", opt, "Optimization level 0, 1 or 2");
    app->add_option("--sk-depth", sk_depth, "Solovay-Kitaev recursion depth");
    app->add_option("--sk-epsilon", sk_epsilon, "Approximation budget for rotations");
    app->add_option("--window", window, "Optimizer window size");
    app->add_option("--ancilla-budget", ancilla_budget, "Maximum ancilla qubits");
    app->add_option("--config", config_path, "JSON override file");
    app->add_option("--set", sets, "key=value configuration assignment (repeatable)");
  }

  LoadedConfig load() const {
    std::vector<std::pair<std::string, std::string>> pairs;
    std::map<std::string, std::string> seen;
    auto push = [&](const std::string& key, const std::string& value) {
      const auto [it, fresh] = seen.emplace(key, value);
      if (!fresh && it->second != value) {
        throw UsageError("conflicting values for '" + key + "': '" + it->second + "' and '" +
                         value + "'");
      }
      pairs.emplace_back(key, value);
    };
    if (granularity) push("granularity", "\"" + *granularity + "\"");
    if (opt) push("optimization_level", *opt);
    if (sk_depth) push("sk_depth", *sk_depth);
    if (sk_epsilon) push("sk_epsilon", *sk_epsilon);
    if (window) push("window_size", *window);
    if (ancilla_budget) push("ancilla_budget", *ancilla_budget);
    for (const std::string& s : sets) {
      const auto [k, v] = parse_assignment(s);
      push(k, v);
    }
    std::optional<nlohmann::json> override_doc;
    if (config_path) {
      std::ifstream in(*config_path);
      if (!in) throw UsageError("cannot open config file " + *config_path);
      try {
        override_doc = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(*config_path + ": " + e.what());
      }
    }
    return load_config(default_config_document(), override_doc, pairs);
  }
};

UnitaryM read_input(const std::string& path) {
  const Matrix m = read_um_file(path);
  if (!is_power_of_two(static_cast<std::size_t>(m.rows())) || m.rows() < 2) {
    throw UsageError(path + ": dimension " + std::to_string(m.rows()) +
                     " is not a power of two");
  }
  if (!is_unitary(m)) throw UsageError(path + ": matrix is not unitary");
  return UnitaryM::deflate(m);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
  if (!out) throw UsageError("write failed for " + path);
}

void print_report(const VerifyReport& r) {
  std::cout << "nodes checked: " << r.node_checks.size() << ", failed: " << r.nodes_failed()
            << "\n";
  for (const NodeCheck& c : r.node_checks) {
    if (c.passed) continue;
    std::cout << "  node " << (c.path.empty() ? "<root>" : format_path(c.path))
              << ": distance " << c.distance << " > " << c.tolerance;
    if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
    std::cout << "\n";
  }
  std::cout << "circuit distance: " << r.circuit_distance << " (tolerance "
            << r.circuit_tolerance << ")" << (r.approximated ? " approximated" : "") << "\n";
  std::cout << "ancilla clean: " << (r.ancilla_clean ? "yes" : "no") << "\n";
  std::cout << (r.passed() ? "verification passed" : "verification FAILED") << "\n";
}

int cmd_compile(const std::string& input, const std::string& output, const ConfigFlags& flags,
                bool check) {
  const LoadedConfig loaded = flags.load();
  const UnitaryM u = read_input(input);
  Pipeline pipeline = build_pipeline(loaded.config);
  CompileResult result;
  try {
    result = pipeline.run(u);
  } catch (const CompileError& e) {
    std::cerr << "compile error: " << e.what() << "\n";
    return kExitCompile;
  } catch (const AllocationError& e) {
    std::cerr << "compile error: " << e.what() << "\n";
    return kExitCompile;
  }
  write_qco(output, result.to_qco(loaded.config.granularity));

  const Compilation& c = result.compilation;
  const auto leaves = leaf_gates(c.tree);
  std::map<GateGrain, std::size_t> per_grain;
  for (const CtrlGate& g : leaves) ++per_grain[grain_of(g)];
  std::cout << "wrote " << output << "\n";
  std::cout << "gates: " << leaves.size() << "\n";
  for (const auto& [grain, n] : per_grain) std::cout << "  " << grain_name(grain) << ": " << n << "\n";
  std::cout << "qubits: " << c.data_qubits << " data, " << c.ancilla_qubits << " ancilla\n";
  for (const PassReport& p : result.passes) {
    std::cout << "pass " << p.name << ": " << p.rewrites << " rewrites, leaves "
              << p.leaves_before << " -> " << p.leaves_after << "\n";
  }
  if (!check) return kExitOk;
  const VerifyReport r = verify(c.tree, u, pipeline.verify_options());
  print_report(r);
  return r.passed() ? kExitOk : kExitVerify;
}

int cmd_render(const std::string& input, const std::string& format, const std::string& output,
               bool annotate) {
  if (format != "qasm3") throw UsageError("unsupported format '" + format + "'");
  const QcoFile f = read_qco(input);
  QasmBuilder builder(annotate);
  write_text(output, render(f.root, f.header.data_qubits, f.header.total_qubits, builder));
  return kExitOk;
}

int cmd_verify(const std::string& input, const std::string& against, const ConfigFlags& flags) {
  const LoadedConfig loaded = flags.load();
  const QcoFile f = read_qco(input);
  const UnitaryM u = read_input(against);
  if (u.dimension() != f.root.unitary().dimension()) {
    throw UsageError("dimension mismatch: circuit " + std::to_string(f.root.unitary().dimension()) +
                     ", matrix " + std::to_string(u.dimension()));
  }
  const VerifyReport r =
      verify(f.root, u, VerifyOptions{loaded.config.tol_verify, loaded.config.sk_epsilon});
  print_report(r);
  return r.passed() ? kExitOk : kExitVerify;
}

int cmd_trace(const std::string& input, std::size_t index, bool all) {
  const QcoFile f = read_qco(input);
  std::vector<NodePath> paths;
  if (all) {
    for (auto it = preorder(f.root).begin(); it != preorder(f.root).end(); ++it) {
      if (it->children.empty()) paths.push_back(it.path());
    }
  } else {
    paths = leaf_paths(f.root);
  }
  if (index >= paths.size()) {
    throw UsageError("gate index " + std::to_string(index) + " out of range (" +
                     std::to_string(paths.size()) + " gates)");
  }
  const NodePath& path = paths[index];
  const auto chain = trace_gate(f.root, path);
  for (std::size_t depth = 0; depth < chain.size(); ++depth) {
    const NodePath prefix(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(depth));
    const Lineage& l = chain[depth];
    std::cout << std::string(2 * depth, ' ') << (prefix.empty() ? "<root>" : format_path(prefix))
              << " " << producer_name(l.producer) << "#" << l.ordinal;
    if (!l.notes.empty()) std::cout << ": " << l.notes;
    std::cout << "\n";
  }
  const ByteCode& leaf = node_at(f.root, path);
  std::cout << (leaf.tombstone ? "tombstoned " : "gate ")
            << (leaf.holds_gate() ? leaf.gate().describe() : std::string("<unitary>")) << "\n";
  return kExitOk;
}

int cmd_net(const ConfigFlags& flags) {
  const QConfig c = flags.load().config;
  const NetCache cache = NetCache::from_environment();
  bool hit = false;
  const SU2Net net =
      cache.get_or_build(c.sk_alphabet, static_cast<std::size_t>(c.sk_net_length), &hit);
  std::cout << "cache file: " << cache.path_for(c.sk_alphabet, net.max_length()).string()
            << (hit ? " (loaded)" : " (built)") << "\n";
  std::cout << "max length: " << net.max_length() << "\n";
  std::cout << "entries: " << net.entries().size() << "\n";
  std::cout << "covering radius estimate: " << net.epsilon0() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qcsynth: synthesize quantum circuits from unitary matrices"};
  app.require_subcommand(1);

  std::string input, output, against, format = "qasm3";
  bool check = false, annotate = false, all = false;
  std::size_t gate_index = 0;
  ConfigFlags compile_flags, verify_flags, net_flags;

  CLI::App* compile = app.add_subcommand("compile", "Compile a .um matrix to a .qco circuit");
  compile->add_option("input", input, "Input .um file")->required();
  compile->add_option("-o,--output", output, "Output .qco file")->required();
  compile->add_flag("--verify", check, "Verify the result against the input");
  compile_flags.attach(compile);

  CLI::App* render_cmd = app.add_subcommand("render", "Render a .qco circuit as QASM");
  render_cmd->add_option("input", input, "Input .qco file")->required();
  render_cmd->add_option("--format", format, "Output format (qasm3)");
  render_cmd->add_option("-o,--output", output, "Output file (default stdout)");
  render_cmd->add_flag("--annotate", annotate, "Comment each gate with its lineage");

  CLI::App* verify_cmd = app.add_subcommand("verify", "Check a .qco circuit against a matrix");
  verify_cmd->add_option("input", input, "Input .qco file")->required();
  verify_cmd->add_option("--against", against, "Reference .um file")->required();
  verify_flags.attach(verify_cmd);

  CLI::App* trace = app.add_subcommand("trace", "Show how a gate was produced");
  trace->add_option("input", input, "Input .qco file")->required();
  trace->add_option("--gate", gate_index, "Gate index in application order")->required();
  trace->add_flag("--all", all, "Count tombstoned gates too");

  CLI::App* net = app.add_subcommand("net", "Build or load the cached approximation net");
  net_flags.attach(net);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*compile) return cmd_compile(input, output, compile_flags, check);
    if (*render_cmd) return cmd_render(input, format, output, annotate);
    if (*verify_cmd) return cmd_verify(input, against, verify_flags);
    if (*trace) return cmd_trace(input, gate_index, all);
    if (*net) return cmd_net(net_flags);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const SerdeError& e) {
    std::cerr << "error: " << input << ": " << e.what() << "\n";
    return kExitInput;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitInput;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const EmitError& e) {
    std::cerr << "render error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

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


// Runs every end-to-end acceptance criterion and prints one PASS/FAIL line
// per criterion. Exit status is nonzero when any criterion fails.

#include <zlib.h>

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "qcsynth/decomp.hpp"
#include "qcsynth/emit.hpp"
#include "qcsynth/optimize.hpp"
#include "qcsynth/pipeline.hpp"
#include "support/oracles.hpp"

namespace qcsynth {
namespace {

using Clock = std::chrono::steady_clock;
using testing::haar_unitary;
using testing::oracle_circuit;
using testing::oracle_gate;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Collects failures for one criterion; keeps the first few messages.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (messages_.size() < 5) messages_.push_back(what);
  }
  void note(const std::string& s) { notes_.push_back(s); }
  bool passed() const { return failures_ == 0; }
  std::string summary() const {
    std::ostringstream out;
    out << checks_ << " checks";
    if (failures_ > 0) out << ", " << failures_ << " failed";
    for (const auto& n : notes_) out << "; " << n;
    for (const auto& m : messages_) out << "\n    " << m;
    return out.str();
  }

 private:
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
  std::vector<std::string> messages_;
  std::vector<std::string> notes_;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

struct Compiled {
  std::string name;
  Matrix input;
  GateGrain grain = GateGrain::Principal;
  QConfig config;
  ByteCode raw;
  ByteCode optimized;
  std::size_t data = 0;
  std::size_t total = 0;
};

std::vector<Compiled>& compiled_trees() {
  static std::vector<Compiled> trees;
  return trees;
}

Compiled compile_case(const std::string& name, const Matrix& input, GateGrain grain) {
  Compiled c;
  c.name = name;
  c.input = input;
  c.grain = grain;
  c.config.granularity = grain;
  c.config.optimization_level = 2;
  Compilation comp = compile(UnitaryM::deflate(input), c.config, &testing::default_net());
  c.raw = comp.tree;
  optimize(comp.tree, c.config.optimization_level, c.config.window_size, grain);
  c.optimized = std::move(comp.tree);
  c.data = comp.data_qubits;
  c.total = comp.data_qubits + comp.ancilla_qubits;
  return c;
}

double exact_budget(const Compiled& c) {
  return c.grain >= GateGrain::UnivGate ? c.config.sk_epsilon : 1e-8;
}

void criterion_cyclic(Check& check) {
  for (GateGrain g : {GateGrain::MultiTarget, GateGrain::Singlet, GateGrain::CtrlPruned,
                      GateGrain::Principal, GateGrain::CliffordT}) {
    const auto start = Clock::now();
    Compiled c = compile_case("cyclic8 " + std::string(grain_name(g)),
                              testing::cyclic_permutation8(), g);
    const VerifyReport r = verify(c.optimized, UnitaryM::deflate(c.input),
                                  VerifyOptions{c.config.tol_verify, c.config.sk_epsilon});
    const double elapsed = seconds_since(start);
    check.expect(r.circuit_distance < exact_budget(c),
                 c.name + ": distance " + fmt(r.circuit_distance));
    check.expect(r.ancilla_clean, c.name + ": ancilla not clean");
    check.expect(elapsed < 60.0, c.name + ": " + fmt(elapsed) + " s");
    check.note(std::string(grain_name(g)) + " d=" + fmt(r.circuit_distance) + " " + fmt(elapsed) +
               "s " + std::to_string(leaf_gates(c.optimized).size()) + " gates");
    compiled_trees().push_back(std::move(c));
  }
}

void criterion_haar(Check& check) {
  std::mt19937_64 rng(901);
  const auto start = Clock::now();
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    Compiled c = compile_case("haar8 #" + std::to_string(trial), haar_unitary(8, rng),
                              GateGrain::Principal);
    const VerifyReport r = verify(c.optimized, UnitaryM::deflate(c.input));
    worst = std::max(worst, r.circuit_distance);
    check.expect(r.circuit_distance < 1e-8 && r.ancilla_clean,
                 c.name + ": distance " + fmt(r.circuit_distance));
    compiled_trees().push_back(std::move(c));
  }
  const double elapsed = seconds_since(start);
  check.expect(elapsed < 300.0, "total " + fmt(elapsed) + " s");
  check.note("worst d=" + fmt(worst) + " total " + fmt(elapsed) + "s");
}

// Interior nodes whose children came from rotation approximation reconstruct
// only up to the approximation budget; all others must be exact.
void check_reconstruction(Check& check, const Compiled& c, const ByteCode& tree,
                          const std::string& stage, std::size_t& exact, std::size_t& approx) {
  for (auto it = preorder(tree).begin(); it != preorder(tree).end(); ++it) {
    const ByteCode& node = *it;
    const auto residual = node_residual(node, c.data);
    if (!residual) continue;
    bool approximated = false;
    for (const ByteCode& child : node.children) {
      approximated = approximated || child.lineage.producer == Producer::SkDecompose;
    }
    const std::string where = c.name + " " + stage + " node " + format_path(it.path());
    if (approximated) {
      ++approx;
      check.expect(*residual < c.config.sk_epsilon, where + ": " + fmt(*residual));
    } else {
      ++exact;
      check.expect(*residual < 1e-8, where + ": " + fmt(*residual));
    }
  }
}

void criterion_reconstruction(Check& check) {
  std::size_t exact = 0, approx = 0;
  for (const Compiled& c : compiled_trees()) {
    check_reconstruction(check, c, c.raw, "before", exact, approx);
    check_reconstruction(check, c, c.optimized, "after", exact, approx);
  }
  check.note(std::to_string(exact) + " exact nodes < 1e-8, " + std::to_string(approx) +
             " approximated nodes within budget");
}

Matrix product_of(const std::vector<UnitaryM>& factors, std::size_t n) {
  Matrix m = identity_matrix(n);
  for (const UnitaryM& f : factors) m = (f.inflate() * m).eval();
  return m;
}

std::vector<Qubit> mixed_space(std::size_t data, std::size_t total) {
  std::vector<Qubit> space;
  for (std::uint32_t i = 0; i < total; ++i) {
    space.push_back(i < data ? Qubit::data(i) : Qubit::ancilla(i));
  }
  return space;
}

void criterion_decomposition(Check& check) {
  constexpr double tol = 1e-10;
  using std::numbers::pi;
  std::mt19937_64 rng(902);

  for (std::size_t n : {2u, 4u, 8u, 16u}) {
    for (int trial = 0; trial < 25; ++trial) {
      const Matrix u = haar_unitary(n, rng);
      const auto factors = tl_decompose(UnitaryM::deflate(u));
      bool two_level = true;
      for (const UnitaryM& f : factors) two_level = two_level && f.core_indices().size() <= 2;
      check.expect(two_level && factors.size() <= n * (n - 1) / 2,
                   "tl n=" + std::to_string(n) + ": " + std::to_string(factors.size()) +
                       " factors");
      check.expect(max_abs_diff(product_of(factors, n), u) < tol, "tl n=" + std::to_string(n));
    }
  }

  const auto space3 = data_qubits(3);
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = i + 1; j < 8; ++j) {
      const UnitaryM f(8, {i, j}, haar_unitary(2, rng));
      const auto gates = gray_decompose(f, space3);
      check.expect(max_abs_diff(oracle_circuit(gates, space3), f.inflate()) < tol,
                   "gray " + std::to_string(i) + "," + std::to_string(j));
      check.expect(gates.size() == 2 * (static_cast<std::size_t>(std::popcount(i ^ j)) - 1) + 1,
                   "gray count " + std::to_string(i) + "," + std::to_string(j));
    }
  }

  for (std::size_t c = 1; c <= 4; ++c) {
    for (int trial = 0; trial < 8; ++trial) {
      QDevice d;
      const auto q = d.allocate_data(c + 1);
      std::vector<Qubit> order = q;
      std::shuffle(order.begin(), order.end(), rng);
      std::vector<QType> types;
      for (std::size_t k = 0; k < c; ++k) {
        types.push_back((rng() & 1) ? QType::Control1 : QType::Control0);
      }
      CoreOp core = trial % 2 ? CoreOp{GenericCore{haar_unitary(2, rng)}}
                              : CoreOp{static_cast<NamedGate>(rng() % kNamedGateCount)};
      CtrlGate g = CtrlGate::controlled(
          std::vector<Qubit>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(c)), types,
          order[c], core);
      g.set_phase(0.3 * trial);
      const auto gates = ctrl_decompose(g, d);
      bool pruned = true;
      for (const CtrlGate& out : gates) pruned = pruned && out.control_count() <= 1;
      const std::size_t total = d.total_count();
      const Matrix full = oracle_circuit(gates, mixed_space(c + 1, total));
      const std::size_t stride = std::size_t{1} << (total - c - 1);
      double leak = 0.0;
      for (Eigen::Index col = 0; col < full.cols(); col += static_cast<Eigen::Index>(stride)) {
        for (Eigen::Index row = 0; row < full.rows(); ++row) {
          if (static_cast<std::size_t>(row) % stride != 0) {
            leak = std::max(leak, std::abs(full(row, col)));
          }
        }
      }
      const std::string what = "ctrl c=" + std::to_string(c) + " " + g.describe();
      check.expect(pruned, what + ": leftover controls");
      check.expect(leak < tol, what + ": ancilla leakage " + fmt(leak));
      check.expect(max_abs_diff(testing::oracle_restrict(full, total, c + 1), oracle_gate(g, q)) <
                       tol,
                   what);
    }
  }

  std::uniform_real_distribution<double> angle(-pi, pi);
  std::uniform_real_distribution<double> tiny(-1e-9, 1e-9);
  for (int trial = 0; trial < 1000; ++trial) {
    Matrix u;
    switch (trial % 4) {
      case 2:
        u = testing::textbook_rotation(Axis::Z, angle(rng)) *
            testing::textbook_rotation(Axis::Y, tiny(rng)) *
            testing::textbook_rotation(Axis::Z, angle(rng));
        break;
      case 3:
        u = testing::textbook_rotation(Axis::Z, angle(rng)) *
            testing::textbook_rotation(Axis::Y, pi + tiny(rng)) *
            testing::textbook_rotation(Axis::Z, angle(rng));
        break;
      default:
        u = testing::haar_su2(rng);
    }
    const EulerAngles a = euler_decompose(u);
    const Matrix back = std::exp(Complex(0, a.alpha)) *
                        testing::textbook_rotation(Axis::Z, a.beta) *
                        testing::textbook_rotation(Axis::Y, a.gamma) *
                        testing::textbook_rotation(Axis::Z, a.delta);
    check.expect(max_abs_diff(back, u) < tol, "euler sample " + std::to_string(trial));
  }

  const auto space2 = data_qubits(2);
  std::vector<CtrlGate> inputs;
  for (std::size_t k = 0; k < kNamedGateCount; ++k) {
    inputs.push_back(CtrlGate::single(static_cast<NamedGate>(k), space2[1]));
  }
  inputs.push_back(CtrlGate::cnot(space2[0], space2[1]));
  for (const CtrlGate& g : inputs) {
    const CliffordTRewrite rw = cliffordt_decompose(g);
    bool alphabet = true;
    for (const CtrlGate& out : rw.gates) alphabet = alphabet && grain_of(out) == GateGrain::CliffordT;
    check.expect(alphabet, "cliffordt alphabet for " + g.describe());
    check.expect(max_abs_diff(oracle_circuit(rw.gates, space2), oracle_gate(g, space2)) < tol,
                 "cliffordt " + g.describe());
  }
}

void criterion_sk(Check& check) {
  const auto start = Clock::now();
  const SU2Net net = SU2Net::build({NamedGate::H, NamedGate::T, NamedGate::TD, NamedGate::S,
                                    NamedGate::SD},
                                   12);
  check.note("net " + std::to_string(net.entries().size()) + " entries, built in " +
             fmt(seconds_since(start)) + "s");
  std::mt19937_64 rng(903);
  std::size_t regime = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix u = testing::haar_su2(rng);
    double prev = 0.0;
    for (int depth = 0; depth <= 3; ++depth) {
      const GateWord w = sk_decompose(net, u, depth);
      const double err = distance(w.matrix, u);
      const std::string what = "sample " + std::to_string(trial) + " depth " +
                               std::to_string(depth);
      check.expect(static_cast<double>(w.size()) <= std::pow(5.0, depth) * 12,
                   what + ": length " + std::to_string(w.size()));
      if (depth > 0 && prev > kSkTerminationTol && prev < 0.5) {
        ++regime;
        check.expect(err <= prev, what + ": " + fmt(err) + " > " + fmt(prev));
      }
      prev = err;
    }
  }
  for (int trial = 0; trial < 1000; ++trial) {
    const Matrix u = haar_unitary(2, rng);
    const double fast = distance(net.entries()[net.nearest_index(u)].matrix, u);
    const double slow = distance(net.entries()[net.brute_force_nearest(u)].matrix, u);
    check.expect(std::abs(fast - slow) <= 1e-12, "query " + std::to_string(trial));
  }
  const double elapsed = seconds_since(start);
  check.expect(elapsed < 600.0, "net + suite " + fmt(elapsed) + " s");
  check.note(std::to_string(regime) + " depth steps in regime, " + fmt(elapsed) + "s");
}

std::vector<std::uint8_t> bytes_of(const ByteCode& tree) {
  return serialize(QcoFile{QcoHeader{}, tree});
}

void criterion_optimizer(Check& check) {
  std::mt19937_64 rng(904);
  const std::pair<int, GateGrain> configs[] = {{1, GateGrain::Principal},
                                               {2, GateGrain::Principal},
                                               {2, GateGrain::CtrlPruned},
                                               {2, GateGrain::CliffordT}};
  std::size_t removed = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 4;
    const auto gates = testing::random_circuit(rng, n, 2 + rng() % 20);
    const ByteCode original = testing::tree_of(gates, n);
    const Matrix before = testing::tree_circuit(original, n, n);
    for (const auto& [level, grain] : configs) {
      const std::string what = "circuit " + std::to_string(trial) + " level " +
                               std::to_string(level) + " " + std::string(grain_name(grain));
      ByteCode tree = original;
      optimize(tree, level, 4, grain);
      const std::size_t count_before = leaf_gates(original).size();
      const std::size_t count_after = leaf_gates(tree).size();
      removed += count_before - std::min(count_before, count_after);
      check.expect(distance(testing::tree_circuit(tree, n, n), before) < 1e-8, what + ": operator");
      check.expect(count_after <= count_before, what + ": count grew");
      const auto snapshot = bytes_of(tree);
      std::size_t rewrites = 0;
      for (const PassReport& p : optimize(tree, level, 4, grain)) rewrites += p.rewrites;
      check.expect(rewrites == 0 && bytes_of(tree) == snapshot, what + ": not a fixpoint");
    }
  }
  check.note(std::to_string(removed) + " gates removed over the suite");

  for (const Compiled& c : compiled_trees()) {
    if (c.grain != GateGrain::CliffordT) continue;
    const std::size_t a = leaf_gates(c.raw).size();
    const std::size_t b = leaf_gates(c.optimized).size();
    check.expect(b < a, c.name + ": level 2 left " + std::to_string(b) + " of " +
                            std::to_string(a));
    check.note(c.name + " " + std::to_string(a) + " -> " + std::to_string(b) + " gates");
  }
}

void refresh_crc(std::vector<std::uint8_t>& bytes) {
  const std::size_t n = bytes.size() - 4;
  const auto crc = static_cast<std::uint32_t>(::crc32(0L, bytes.data(), static_cast<uInt>(n)));
  for (int k = 0; k < 4; ++k) bytes[n + k] = static_cast<std::uint8_t>(crc >> (8 * k));
}

std::optional<SerdeErrorKind> error_kind(const std::vector<std::uint8_t>& bytes) {
  try {
    deserialize(bytes);
  } catch (const SerdeError& e) {
    return e.kind();
  }
  return std::nullopt;
}

void criterion_serde(Check& check) {
  std::size_t trees = 0;
  for (const Compiled& c : compiled_trees()) {
    for (const ByteCode* tree : {&c.raw, &c.optimized}) {
      const QcoFile f{QcoHeader{static_cast<std::uint32_t>(c.data),
                                static_cast<std::uint32_t>(c.total), c.grain},
                      *tree};
      const auto bytes = serialize(f);
      const QcoFile back = deserialize(bytes);
      check.expect(back.header == f.header && back.root == f.root, c.name + ": round trip");
      check.expect(serialize(back) == bytes, c.name + ": bytes changed on re-serialization");
      ++trees;
    }
  }
  check.note(std::to_string(trees) + " trees round-tripped");

  std::size_t goldens = 0;
  for (const auto& entry : std::filesystem::directory_iterator(QCSYNTH_FIXTURE_DIR)) {
    if (entry.path().extension() != ".qco") continue;
    const auto bytes = testing::read_bytes(entry.path().string());
    const QcoFile f = deserialize(bytes);
    check.expect(serialize(f) == bytes, entry.path().filename().string() + ": not stable");
    // Recompiling gives the stored bytes again.
    const std::string stem = entry.path().stem().string();
    Matrix input = stem.rfind("single_h", 0) == 0 ? testing::textbook(NamedGate::H)
                                                   : testing::cyclic_permutation8();
    QConfig config;
    config.granularity = f.header.granularity;
    config.optimization_level = 2;
    Pipeline p(config, &testing::default_net());
    check.expect(serialize(p.run(UnitaryM::deflate(input)).to_qco(config.granularity)) == bytes,
                 stem + ": recompilation differs from fixture");
    ++goldens;
  }
  check.expect(goldens > 0, "no golden fixtures found");
  check.note(std::to_string(goldens) + " golden fixtures");

  const Compiled& sample = compiled_trees().front();
  const auto bytes =
      serialize(QcoFile{QcoHeader{static_cast<std::uint32_t>(sample.data),
                                  static_cast<std::uint32_t>(sample.total), sample.grain},
                        sample.optimized});
  for (std::size_t len = 0; len < bytes.size(); ++len) {
    const std::vector<std::uint8_t> prefix(bytes.begin(),
                                           bytes.begin() + static_cast<std::ptrdiff_t>(len));
    const auto kind = error_kind(prefix);
    check.expect(kind == SerdeErrorKind::Truncated || (len < 4 && kind == SerdeErrorKind::BadMagic),
                 "prefix " + std::to_string(len));
  }
  // A flip that enlarges a count field reads as a short file; anything else
  // is a checksum mismatch.
  std::size_t mismatches = 0, flips = 0;
  for (std::size_t pos = 24; pos < bytes.size(); pos += 7) {
    auto flipped = bytes;
    flipped[pos] ^= 0x04;
    const auto kind = error_kind(flipped);
    check.expect(kind == SerdeErrorKind::ChecksumMismatch || kind == SerdeErrorKind::Truncated,
                 "flip at " + std::to_string(pos));
    mismatches += kind == SerdeErrorKind::ChecksumMismatch;
    ++flips;
  }
  for (std::size_t pos = bytes.size() - 12; pos < bytes.size(); ++pos) {
    auto flipped = bytes;
    flipped[pos] ^= 0x01;
    check.expect(error_kind(flipped) == SerdeErrorKind::ChecksumMismatch,
                 "phase/trailer flip at " + std::to_string(pos));
  }
  check.note(std::to_string(mismatches) + "/" + std::to_string(flips) +
             " interior flips reported as checksum mismatch");
  auto magic = bytes;
  magic[0] = 'X';
  check.expect(error_kind(magic) == SerdeErrorKind::BadMagic, "magic");
  auto version = bytes;
  version[4] = 9;
  check.expect(error_kind(version) == SerdeErrorKind::UnsupportedVersion, "version");
  auto kind = bytes;
  kind[24] = 7;
  refresh_crc(kind);
  check.expect(error_kind(kind) == SerdeErrorKind::Malformed, "node kind");
  auto grain = bytes;
  grain[16] = 42;
  refresh_crc(grain);
  check.expect(error_kind(grain) == SerdeErrorKind::Malformed, "granularity");
}

void criterion_qasm(Check& check) {
  std::vector<Compiled> cases;
  for (const Compiled& c : compiled_trees()) {
    if (c.grain >= GateGrain::Singlet && c.total <= 4) cases.push_back(c);
  }
  std::mt19937_64 rng(905);
  for (GateGrain g : {GateGrain::Singlet, GateGrain::CtrlPruned, GateGrain::Principal,
                      GateGrain::CliffordT}) {
    for (std::size_t dim : {2u, 4u}) {
      Compiled c = compile_case("haar" + std::to_string(dim) + " " + std::string(grain_name(g)),
                                haar_unitary(dim, rng), g);
      if (c.total <= 4) cases.push_back(std::move(c));
    }
  }
  for (const Compiled& c : cases) {
    for (const ByteCode* tree : {&c.raw, &c.optimized}) {
      QasmBuilder first(true), second(true);
      const std::string text = render(*tree, c.data, c.total, first);
      check.expect(text == render(*tree, c.data, c.total, second), c.name + ": bytes differ");
      const auto prog = testing::run_qasm(text);
      const Matrix simulated = testing::oracle_restrict(prog.unitary, c.total, c.data);
      const Matrix circuit = testing::tree_circuit(*tree, c.data, c.total);
      check.expect(distance(simulated, circuit) < 1e-9,
                   c.name + ": interpreter distance " + fmt(distance(simulated, circuit)));
    }
  }
  check.note(std::to_string(cases.size()) + " circuits of at most 4 qubits");
}

}  // namespace
}  // namespace qcsynth

int main() {
  using namespace qcsynth;
  const std::pair<const char*, std::function<void(Check&)>> criteria[] = {
      {"cyclic permutation end-to-end at five granularities", criterion_cyclic},
      {"20 random 8x8 unitaries at PRINCIPAL", criterion_haar},
      {"interior nodes reconstruct before and after optimization", criterion_reconstruction},
      {"decomposition unit oracles", criterion_decomposition},
      {"Solovay-Kitaev convergence and net index", criterion_sk},
      {"optimizer preservation, monotonicity, idempotence", criterion_optimizer},
      {"serialization round trip, goldens, corruption", criterion_serde},
      {"QASM re-simulation and determinism", criterion_qasm},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Check check;
    const auto start = Clock::now();
    try {
      run(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    std::cout << (check.passed() ? "PASS" : "FAIL") << "  " << name << " ("
              << fmt(seconds_since(start)) << "s; " << check.summary() << ")" << std::endl;
    failed += !check.passed();
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}

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


#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "qcsynth/emit.hpp"
#include "qcsynth/pipeline.hpp"
#include "support/oracles.hpp"

// Set QCSYNTH_REGEN_FIXTURES=1 to rewrite the fixtures from the current build.

namespace qcsynth {
namespace {

struct Golden {
  std::string name;
  Matrix input;
  GateGrain grain;
};

std::vector<Golden> goldens() {
  std::vector<Golden> out;
  out.push_back({"single_h_principal", testing::textbook(NamedGate::H), GateGrain::Principal});
  for (GateGrain g : {GateGrain::Singlet, GateGrain::CtrlPruned, GateGrain::Principal,
                      GateGrain::CliffordT}) {
    out.push_back({"cyclic8_" + std::string(grain_name(g)), testing::cyclic_permutation8(), g});
  }
  return out;
}

std::string fixture(const std::string& file) {
  return std::string(QCSYNTH_FIXTURE_DIR) + "/" + file;
}

bool regenerating() {
  const char* v = std::getenv("QCSYNTH_REGEN_FIXTURES");
  return v != nullptr && std::string(v) == "1";
}

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

class GoldenTest : public ::testing::TestWithParam<Golden> {};

TEST_P(GoldenTest, OutputIsByteStable) {
  const Golden& g = GetParam();
  QConfig c;
  c.granularity = g.grain;
  c.optimization_level = 2;
  Pipeline p(c, &testing::default_net());
  const CompileResult r = p.run(UnitaryM::deflate(g.input));
  const auto qco = serialize(r.to_qco(g.grain));
  QasmBuilder b(false);
  const std::string qasm = render(r.compilation.tree, r.compilation.data_qubits,
                                  r.compilation.data_qubits + r.compilation.ancilla_qubits, b);
  const std::string qco_path = fixture(g.name + ".qco");
  const std::string qasm_path = fixture(g.name + ".qasm");
  if (regenerating()) {
    std::filesystem::create_directories(QCSYNTH_FIXTURE_DIR);
    write_bytes(qco_path, qco);
    std::ofstream(qasm_path, std::ios::binary) << qasm;
    GTEST_SKIP() << "regenerated " << g.name;
  }
  ASSERT_TRUE(std::filesystem::exists(qco_path)) << qco_path;
  EXPECT_EQ(qco, testing::read_bytes(qco_path));
  EXPECT_EQ(qasm, testing::read_file(qasm_path));

  // The stored file still decodes to a circuit for the input.
  const QcoFile f = read_qco(qco_path);
  EXPECT_EQ(f.root, r.compilation.tree);
  EXPECT_LT(distance(testing::tree_circuit(f.root, f.header.data_qubits, f.header.total_qubits),
                     g.input),
            g.grain >= GateGrain::UnivGate ? c.sk_epsilon : 1e-8);
}

INSTANTIATE_TEST_SUITE_P(Fixtures, GoldenTest, ::testing::ValuesIn(goldens()),
                         [](const auto& info) { return info.param.name; });

}  // namespace
}  // namespace qcsynth

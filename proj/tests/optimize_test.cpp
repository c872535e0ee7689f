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

#include <random>

#include "qcsynth/compiler.hpp"
#include "qcsynth/optimize.hpp"
#include "support/oracles.hpp"

namespace qcsynth {
namespace {

const Qubit q0 = Qubit::data(0), q1 = Qubit::data(1);

CtrlGate named(NamedGate g, Qubit q = q0) { return CtrlGate::single(g, q); }
CtrlGate rz(double a, Qubit q = q0) { return CtrlGate::single(Rotation{Axis::Z, a}, q); }

std::size_t live_count(const ByteCode& tree) { return leaf_gates(tree).size(); }

TEST(AnnihilationTest, SelfInversePair) {
  const std::vector<CtrlGate> w = {named(NamedGate::H), named(NamedGate::H)};
  const auto rw = AnnihilationOptimizer().examine(w);
  ASSERT_TRUE(rw.has_value());
  EXPECT_EQ(rw->first, 0u);
  EXPECT_EQ(rw->second, 1u);
  EXPECT_FALSE(rw->replacement.has_value());
}

TEST(AnnihilationTest, AcrossDisjointSupport) {
  const std::vector<CtrlGate> w = {named(NamedGate::S), named(NamedGate::X, q1),
                                   named(NamedGate::SD)};
  const auto rw = AnnihilationOptimizer().examine(w);
  ASSERT_TRUE(rw.has_value());
  EXPECT_EQ(rw->first, 0u);
  EXPECT_EQ(rw->second, 2u);
  const auto space = data_qubits(2);
  const std::vector<CtrlGate> kept = {w[1]};
  EXPECT_LT(distance(testing::oracle_circuit(kept, space), testing::oracle_circuit(w, space)),
            1e-15);
}

TEST(AnnihilationTest, BlockedByNonCommutingGate) {
  const std::vector<CtrlGate> w = {named(NamedGate::S), named(NamedGate::X),
                                   named(NamedGate::SD)};
  EXPECT_FALSE(AnnihilationOptimizer().examine(w).has_value());
  const auto space = data_qubits(1);
  const std::vector<CtrlGate> kept = {w[1]};
  EXPECT_GT(distance(testing::oracle_circuit(kept, space), testing::oracle_circuit(w, space)),
            0.1);
}

TEST(AnnihilationTest, CommutesThroughSharedControls) {
  const CtrlGate cz = CtrlGate::controlled({q0}, {QType::Control1}, q1, NamedGate::Z);
  const std::vector<CtrlGate> w = {named(NamedGate::T), cz, named(NamedGate::TD)};
  EXPECT_TRUE(gates_commute(named(NamedGate::T), cz));
  EXPECT_TRUE(AnnihilationOptimizer().examine(w).has_value());
  EXPECT_FALSE(gates_commute(named(NamedGate::H), cz));
}

TEST(ConsolidationTest, AddsRotationAngles) {
  const std::vector<CtrlGate> w = {rz(0.3), rz(0.4)};
  const auto rw = ConsolidationOptimizer(GateGrain::Principal).examine(w);
  ASSERT_TRUE(rw.has_value());
  ASSERT_TRUE(rw->replacement.has_value());
  ASSERT_TRUE(rw->replacement->is_rotation());
  EXPECT_NEAR(std::get<Rotation>(rw->replacement->core()).angle, 0.7, 1e-15);
}

TEST(ConsolidationTest, TTBecomesS) {
  const std::vector<CtrlGate> w = {named(NamedGate::T), named(NamedGate::T)};
  const auto rw = ConsolidationOptimizer(GateGrain::CliffordT).examine(w);
  ASSERT_TRUE(rw.has_value());
  ASSERT_TRUE(rw->replacement.has_value());
  ASSERT_TRUE(rw->replacement->is_named());
  EXPECT_EQ(std::get<NamedGate>(rw->replacement->core()), NamedGate::S);
}

TEST(ConsolidationTest, RespectsGranularity) {
  const std::vector<CtrlGate> w = {named(NamedGate::H), named(NamedGate::T)};
  EXPECT_FALSE(ConsolidationOptimizer(GateGrain::CliffordT).examine(w).has_value());
  EXPECT_TRUE(ConsolidationOptimizer(GateGrain::CtrlPruned).examine(w).has_value());
}

TEST(PassTest, HHVanishes) {
  ByteCode tree = testing::tree_of({named(NamedGate::H), named(NamedGate::H)}, 1);
  const auto passes = optimizer_passes(1, 4, GateGrain::CliffordT);
  ASSERT_EQ(passes.size(), 1u);
  const PassReport r = passes[0].run(tree);
  EXPECT_EQ(r.tombstoned, 2u);
  EXPECT_EQ(r.replacements, 0u);
  EXPECT_EQ(r.rewrites, 1u);
  EXPECT_EQ(live_count(tree), 0u);
}

TEST(PassTest, OddParityLeavesOneGate) {
  ByteCode tree = testing::tree_of(
      {named(NamedGate::X), named(NamedGate::X), named(NamedGate::X)}, 1);
  const PassReport r = optimizer_passes(1, 4, GateGrain::CliffordT)[0].run(tree);
  EXPECT_EQ(r.rewrites, 1u);
  EXPECT_EQ(r.tombstoned, 2u);
  ASSERT_EQ(live_count(tree), 1u);
  EXPECT_EQ(leaf_gates(tree)[0], named(NamedGate::X));
}

TEST(PassTest, OptimalCircuitIsUntouched) {
  const std::vector<CtrlGate> gates = {named(NamedGate::H), named(NamedGate::T),
                                       CtrlGate::cnot(q0, q1), named(NamedGate::H, q1)};
  ByteCode tree = testing::tree_of(gates, 2);
  const ByteCode before = tree;
  for (const auto& r : optimize(tree, 2, 4, GateGrain::CliffordT)) EXPECT_EQ(r.rewrites, 0u);
  EXPECT_EQ(tree, before);
}

TEST(PassTest, ScheduleByLevel) {
  EXPECT_TRUE(optimizer_passes(0, 4, GateGrain::Principal).empty());
  const auto one = optimizer_passes(1, 4, GateGrain::Principal);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].name(), "annihilation");
  const auto two = optimizer_passes(2, 4, GateGrain::Principal);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[0].name(), "annihilation");
  EXPECT_EQ(two[1].name(), "consolidation");
}

TEST(PassTest, WindowLimitsReach) {
  // the inverse sits four gates later; a window of 4 cannot see both ends
  const std::vector<CtrlGate> gates = {named(NamedGate::S), named(NamedGate::X, q1),
                                       named(NamedGate::H, q1), named(NamedGate::Y, q1),
                                       named(NamedGate::SD)};
  ByteCode narrow = testing::tree_of(gates, 2);
  EXPECT_EQ(optimizer_passes(1, 4, GateGrain::Principal)[0].run(narrow).rewrites, 0u);
  ByteCode wide = testing::tree_of(gates, 2);
  EXPECT_EQ(optimizer_passes(1, 5, GateGrain::Principal)[0].run(wide).rewrites, 1u);
}

struct PropertyCase {
  int level;
  GateGrain grain;
};

class OptimizerProperties : public ::testing::TestWithParam<PropertyCase> {};

TEST_P(OptimizerProperties, RandomCircuits) {
  const auto [level, grain] = GetParam();
  std::mt19937_64 rng(91 + level * 7 + static_cast<int>(grain));
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 4;
    const std::size_t len = 4 + rng() % 20;
    const auto gates = testing::random_circuit(rng, n, len);
    ByteCode tree = testing::tree_of(gates, n);
    const Matrix before = testing::tree_circuit(tree, n, n);
    std::size_t count = live_count(tree);
    for (const auto& pass : optimizer_passes(level, 2 + rng() % 4, grain)) {
      const PassReport r = pass.run(tree);
      EXPECT_FALSE(r.budget_exhausted);
      EXPECT_LE(live_count(tree), count);
      EXPECT_EQ(r.leaves_after, live_count(tree));
      count = live_count(tree);
      EXPECT_LT(distance(testing::tree_circuit(tree, n, n), before), 1e-8)
          << "trial " << trial << " after " << r.name;
      EXPECT_EQ(pass.run(tree).rewrites, 0u) << "pass " << r.name << " not idempotent";
    }
    // the repeated schedule reaches a joint fixpoint
    optimize(tree, level, 4, grain);
    for (const auto& r : optimize(tree, level, 4, grain)) EXPECT_EQ(r.rewrites, 0u);
    EXPECT_LT(distance(testing::tree_circuit(tree, n, n), before), 1e-8);

    // lineage of tombstones and replacements resolves
    for (auto it = preorder(tree).begin(); it != preorder(tree).end(); ++it) {
      if (it->tombstone || is_optimizer_producer(it->lineage.producer)) {
        const auto chain = trace_gate(tree, it.path());
        EXPECT_EQ(chain.size(), it.path().size() + 1);
      }
      if (it->tombstone) {
        EXPECT_NE(it->lineage.notes.find("tombstoned by"), std::string::npos);
      }
    }
    // child products still hold with tombstones in place
    const VerifyReport rep = verify(tree, tree.unitary());
    EXPECT_TRUE(rep.passed()) << "trial " << trial;
  }
}

INSTANTIATE_TEST_SUITE_P(Levels, OptimizerProperties,
                         ::testing::Values(PropertyCase{1, GateGrain::Principal},
                                           PropertyCase{2, GateGrain::Principal},
                                           PropertyCase{2, GateGrain::CtrlPruned},
                                           PropertyCase{2, GateGrain::CliffordT}));

TEST(OptimizeTest, LevelTwoShrinksCyclicCliffordTCircuit) {
  QConfig c;
  c.granularity = GateGrain::CliffordT;
  const UnitaryM u = UnitaryM::deflate(testing::cyclic_permutation8());
  Compilation comp = compile(u, c, &testing::default_net());
  const std::size_t before = live_count(comp.tree);
  const auto reports = optimize(comp.tree, 2, 4, GateGrain::CliffordT);
  EXPECT_LT(live_count(comp.tree), before);
  std::size_t merged = 0;
  for (const auto& r : reports) merged += r.replacements;
  EXPECT_GT(merged, 0u);
  const VerifyReport rep = verify(comp.tree, u);
  EXPECT_TRUE(rep.passed());
  for (const CtrlGate& g : leaf_gates(comp.tree)) {
    EXPECT_EQ(grain_of(g), GateGrain::CliffordT) << g.describe();
  }
}

}  // namespace
}  // namespace qcsynth

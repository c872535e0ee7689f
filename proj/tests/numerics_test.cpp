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

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "qcsynth/numerics.hpp"
#include "support/oracles.hpp"

namespace qcsynth {
namespace {

using testing::haar_unitary;

TEST(UnitaryMTest, IdentityTimesIdentityHasEmptyCore) {
  const UnitaryM i8 = UnitaryM::identity(8);
  const UnitaryM p = i8.matmul(i8);
  EXPECT_EQ(p.dimension(), 8u);
  EXPECT_TRUE(p.is_identity());
  EXPECT_TRUE(p.core_indices().empty());
}

TEST(UnitaryMTest, TwoLevelXIsAnInvolution) {
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  const UnitaryM a(8, {0, 1}, x);
  EXPECT_TRUE(a.matmul(a).is_identity());
}

TEST(UnitaryMTest, DeflateIdentity) {
  const UnitaryM u = UnitaryM::deflate(identity_matrix(4));
  EXPECT_EQ(u.dimension(), 4u);
  EXPECT_TRUE(u.core_indices().empty());
  EXPECT_EQ(u.core().size(), 0);
}

TEST(UnitaryMTest, DeflateSingleDiagonalEntry) {
  Matrix d = identity_matrix(4);
  d(3, 3) = -1.0;
  const UnitaryM u = UnitaryM::deflate(d);
  EXPECT_EQ(u.core_indices(), (std::vector<std::size_t>{3}));
  ASSERT_EQ(u.core().rows(), 1);
  EXPECT_EQ(u.core()(0, 0), Complex(-1.0));
}

TEST(UnitaryMTest, DeflateCyclicPermutationSkipsFixedState) {
  const UnitaryM u = UnitaryM::deflate(testing::cyclic_permutation8());
  EXPECT_EQ(u.core_indices(), (std::vector<std::size_t>{1, 2, 3, 4, 5, 6, 7}));
}

TEST(UnitaryMTest, InflateEmptyCoreIsIdentity) {
  EXPECT_EQ(UnitaryM(2, {}, Matrix(0, 0)).inflate(), identity_matrix(2));
}

TEST(UnitaryMTest, InflateScattersCore) {
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  const Matrix m = UnitaryM(4, {1, 3}, x).inflate();
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 0) = expected(2, 2) = 1.0;
  expected(1, 3) = expected(3, 1) = 1.0;
  EXPECT_EQ(m, expected);
}

TEST(UnitaryMTest, InflateDeflateRoundTripIsExact) {
  std::mt19937_64 rng(6);
  const Matrix u = haar_unitary(8, rng);
  EXPECT_EQ(max_abs_diff(UnitaryM::deflate(u).inflate(), u), 0.0);
}

TEST(UnitaryMTest, MatmulMatchesDenseProduct) {
  std::mt19937_64 rng(11);
  for (std::size_t n : {2u, 4u, 8u, 16u}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Matrix a = haar_unitary(n, rng);
      const Matrix b = haar_unitary(n, rng);
      const Matrix got = UnitaryM::deflate(a).matmul(UnitaryM::deflate(b)).inflate();
      EXPECT_LT(max_abs_diff(got, a * b), 1e-10);
    }
  }
}

TEST(UnitaryMTest, MatmulOfSparseFactorsMatchesDenseProduct) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix c1 = haar_unitary(2, rng), c2 = haar_unitary(2, rng);
    std::uniform_int_distribution<std::size_t> idx(0, 7);
    std::size_t i = idx(rng), j = idx(rng), k = idx(rng), l = idx(rng);
    while (j == i) j = idx(rng);
    while (l == k) l = idx(rng);
    const UnitaryM a(8, {std::min(i, j), std::max(i, j)}, c1);
    const UnitaryM b(8, {std::min(k, l), std::max(k, l)}, c2);
    EXPECT_LT(max_abs_diff(a.matmul(b).inflate(), a.inflate() * b.inflate()), 1e-12);
  }
}

TEST(UnitaryMTest, DeflateNeverKeepsIdentityRows) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix m = identity_matrix(8);
    std::uniform_int_distribution<std::size_t> idx(0, 7);
    std::size_t i = idx(rng), j = idx(rng);
    while (j == i) j = idx(rng);
    const Matrix c = haar_unitary(2, rng);
    m(i, i) = c(0, 0);
    m(i, j) = c(0, 1);
    m(j, i) = c(1, 0);
    m(j, j) = c(1, 1);
    const UnitaryM u = UnitaryM::deflate(m);
    for (std::size_t k : u.core_indices()) {
      bool row_is_identity = true;
      for (Eigen::Index c2 = 0; c2 < 8; ++c2) {
        const Complex want = (static_cast<std::size_t>(c2) == k) ? 1.0 : 0.0;
        if (std::abs(m(k, c2) - want) > kTolIdentity || std::abs(m(c2, k) - want) > kTolIdentity) {
          row_is_identity = false;
        }
      }
      EXPECT_FALSE(row_is_identity) << "index " << k;
    }
    EXPECT_EQ(u.core_indices().size(), 2u);
  }
}

TEST(UnitaryMTest, RejectsNonUnitaryCore) {
  Matrix c(2, 2);
  c << 1, 1, 0, 1;
  EXPECT_THROW(UnitaryM(4, {0, 1}, c), NumericsError);
  EXPECT_THROW(UnitaryM(4, {1, 0}, identity_matrix(2)), NumericsError);
  EXPECT_THROW(UnitaryM(4, {1, 4}, identity_matrix(2)), NumericsError);
}

TEST(DistanceTest, Examples) {
  const Matrix h = testing::textbook(NamedGate::H);
  EXPECT_EQ(distance(h, h), 0.0);
  const Matrix phased = std::exp(Complex(0, std::numbers::pi / 7)) * identity_matrix(2);
  EXPECT_LT(distance(identity_matrix(2), phased), 1e-15);
  EXPECT_NEAR(distance(identity_matrix(2), testing::textbook(NamedGate::X)), 1.0, 1e-15);
}

TEST(DistanceTest, AgreesWithTraceFormula) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix a = haar_unitary(4, rng), b = haar_unitary(4, rng);
    const double tr = std::abs((a.adjoint() * b).trace()) / 4.0;
    EXPECT_NEAR(distance(a, b), std::sqrt(std::max(0.0, 1.0 - tr)), 1e-12);
  }
}

TEST(DistanceTest, MetricProperties) {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix a = haar_unitary(4, rng), b = haar_unitary(4, rng), c = haar_unitary(4, rng);
    const double ab = distance(a, b);
    EXPECT_GE(ab, 0.0);
    EXPECT_NEAR(ab, distance(b, a), 1e-14);
    EXPECT_LT(distance(a, std::exp(Complex(0, phase(rng))) * a), 1e-14);
    EXPECT_LE(distance(a, c), ab + distance(b, c) + 1e-12);
  }
}

TEST(DistanceTest, ResolvesTinyDifferences) {
  const Matrix rz = testing::textbook_rotation(Axis::Z, 1e-9);
  // exact value: sqrt(1 - cos(θ/2)) ≈ θ/(2√2)
  EXPECT_NEAR(distance(identity_matrix(2), rz), 1e-9 / (2 * std::sqrt(2.0)), 1e-18);
}

TEST(UmFormatTest, RoundTripsThroughText) {
  std::mt19937_64 rng(16);
  const Matrix u = haar_unitary(4, rng);
  std::stringstream s;
  write_um(s, u);
  const Matrix back = read_um(s, "mem");
  EXPECT_EQ(max_abs_diff(u, back), 0.0);
}

TEST(UmFormatTest, ParsesComplexSpellings) {
  EXPECT_EQ(parse_complex("1"), Complex(1, 0));
  EXPECT_EQ(parse_complex("-0.5j"), Complex(0, -0.5));
  EXPECT_EQ(parse_complex("0.25+0.75j"), Complex(0.25, 0.75));
  EXPECT_EQ(parse_complex("1e-3-2e-3j"), Complex(1e-3, -2e-3));
  EXPECT_EQ(parse_complex(format_complex(Complex(0.1, -1.0 / 3))), Complex(0.1, -1.0 / 3));
}

TEST(UmFormatTest, ReportsLineOfBadEntry) {
  std::stringstream s("2\n1 0\n0 x\n");
  try {
    read_um(s, "bad.um");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.source(), "bad.um");
  }
}

TEST(UmFormatTest, RejectsShortRowsAndTrailingData) {
  std::stringstream short_row("2\n1 0\n0\n");
  EXPECT_THROW(read_um(short_row, "a"), ParseError);
  std::stringstream trailing("1\n1\n1\n");
  EXPECT_THROW(read_um(trailing, "b"), ParseError);
  std::stringstream empty("");
  EXPECT_THROW(read_um(empty, "c"), ParseError);
}

TEST(NumericsTest, PowerOfTwoHelpers) {
  EXPECT_TRUE(is_power_of_two(1));
  EXPECT_TRUE(is_power_of_two(64));
  EXPECT_FALSE(is_power_of_two(6));
  EXPECT_EQ(log2_exact(16), 4u);
  EXPECT_THROW(log2_exact(12), NumericsError);
}

}  // namespace
}  // namespace qcsynth

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

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcsynth/gates.hpp"
#include "qcsynth/numerics.hpp"

namespace qcsynth {

class SkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A sequence of named single-qubit gates in application order, together
/// with its 2×2 product (last letter leftmost).
struct GateWord {
  std::vector<NamedGate> letters;
  Matrix matrix = identity_matrix(2);

  static GateWord from_letters(std::vector<NamedGate> letters);
  GateWord herm() const;
  std::size_t size() const { return letters.size(); }
};

/// `first` applied before `second`.
GateWord concat(const GateWord& first, const GateWord& second);
/// Cancels adjacent inverse pairs (T TD, H H, ...) until none remain.
GateWord reduce_word(const GateWord& w);

/// Unit quaternion (w, x, y, z) of the SU(2) representative of `u`, sign
/// chosen so the first nonzero component is positive.
std::array<double, 4> su2_quaternion(const Matrix& u);
/// Divides out the determinant phase (det becomes 1).
Matrix to_su2(const Matrix& u);
/// Haar-distributed SU(2) element.
Matrix random_su2(std::mt19937_64& rng);

/// Exact k-nearest-neighbour search over 4-vectors.
class KdTree4 {
 public:
  using Point = std::array<double, 4>;

  KdTree4() = default;
  explicit KdTree4(std::vector<Point> points);

  /// Indices of the k closest points (Euclidean), closest first.
  std::vector<std::size_t> nearest(const Point& q, std::size_t k) const;
  std::size_t size() const { return points_.size(); }

 private:
  struct Node {
    std::size_t point;
    int axis;
    std::int32_t left = -1;
    std::int32_t right = -1;
  };
  std::int32_t build(std::vector<std::size_t>& idx, std::size_t lo, std::size_t hi,
                     int depth);
  std::vector<Point> points_;
  std::vector<Node> nodes_;
  std::int32_t root_ = -1;
};

class SU2Net {
 public:
  SU2Net() = default;

  /// Breadth-first enumeration of reduced words up to `max_length`;
  /// phase-equivalent duplicates keep the shortest, lexicographically first.
  static SU2Net build(std::vector<NamedGate> alphabet, std::size_t max_length);
  /// Reassembles a net from stored words (matrices are recomputed).
  static SU2Net from_words(std::vector<NamedGate> alphabet, std::size_t max_length,
                           std::vector<std::vector<NamedGate>> words,
                           std::optional<double> epsilon0 = std::nullopt);

  const std::vector<GateWord>& entries() const { return entries_; }
  const std::vector<NamedGate>& alphabet() const { return alphabet_; }
  std::size_t max_length() const { return max_length_; }
  /// Monte-Carlo covering radius over 10^4 Haar samples.
  double epsilon0() const { return epsilon0_; }

  std::size_t nearest_index(const Matrix& u) const;
  const GateWord& nearest(const Matrix& u) const { return entries_[nearest_index(u)]; }
  /// Linear scan; reference for the index.
  std::size_t brute_force_nearest(const Matrix& u) const;

 private:
  void index();
  std::vector<NamedGate> alphabet_;
  std::size_t max_length_ = 0;
  std::vector<GateWord> entries_;
  KdTree4 tree_;
  double epsilon0_ = 0.0;
};

double estimate_covering_radius(const SU2Net& net, std::size_t samples,
                                std::uint64_t seed);

/// Balanced commutator factors: V·W·V†·W† equals `delta` up to phase.
struct CommutatorPair {
  Matrix v;
  Matrix w;
};
CommutatorPair group_factor(const Matrix& delta);

inline constexpr double kSkTerminationTol = 1e-10;

/// Recursive approximation of `u` by a word over the net's alphabet.
GateWord sk_decompose(const SU2Net& net, const Matrix& u, int depth);

/// On-disk store of built nets, keyed by a digest of (alphabet, length).
class NetCache {
 public:
  explicit NetCache(std::filesystem::path dir) : dir_(std::move(dir)) {}
  /// $QCSYNTH_NET_CACHE, else $XDG_CACHE_HOME/qcsynth, else ~/.cache/qcsynth.
  static NetCache from_environment();

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path path_for(std::span<const NamedGate> alphabet,
                                 std::size_t max_length) const;
  std::optional<SU2Net> load(std::span<const NamedGate> alphabet,
                             std::size_t max_length) const;
  /// Returns false if the file could not be written; never throws on I/O.
  bool store(const SU2Net& net) const;
  SU2Net get_or_build(const std::vector<NamedGate>& alphabet, std::size_t max_length,
                      bool* cache_hit = nullptr) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace qcsynth

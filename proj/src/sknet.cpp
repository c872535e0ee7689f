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


#include "qcsynth/sknet.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <map>
#include <numbers>
#include <queue>
#include <set>

namespace qcsynth {

namespace {

using Point = KdTree4::Point;

constexpr std::size_t kCandidates = 16;
constexpr std::size_t kCoveringSamples = 10000;
constexpr std::uint64_t kCoveringSeed = 0x5eed5eedULL;
constexpr double kKeyGrid = 1e9;
constexpr double kGroupFactorLimit = 0.5;

constexpr char kCacheMagic[4] = {'Q', 'S', 'K', 'N'};
constexpr std::uint32_t kCacheVersion = 1;

using Key = std::array<long long, 4>;

Key word_key(const Matrix& m) {
  const auto q = su2_quaternion(m);
  Key k;
  for (int i = 0; i < 4; ++i) k[i] = std::llround(q[i] * kKeyGrid);
  for (long long c : k) {
    if (c == 0) continue;
    if (c < 0) {
      for (auto& x : k) x = -x;
    }
    break;
  }
  return k;
}

// Components of the SU(2) element w·I − i(x·σx + y·σy + z·σz).
Point raw_quaternion(const Matrix& v) {
  return {v(0, 0).real(), -v(1, 0).imag(), v(1, 0).real(), -v(0, 0).imag()};
}

Matrix from_quaternion(double w, double x, double y, double z) {
  Matrix m(2, 2);
  m << Complex(w, -z), Complex(-y, -x), Complex(y, -x), Complex(w, z);
  return m;
}

double squared(const Point& a, const Point& b) {
  double s = 0;
  for (int i = 0; i < 4; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

std::array<double, 3> cross(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

double dot3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

Matrix axis_rotation(const std::array<double, 3>& n, double angle) {
  const double s = std::sin(angle / 2);
  return from_quaternion(std::cos(angle / 2), s * n[0], s * n[1], s * n[2]);
}

// Rotation angle θ ∈ [0, π] and unit axis of an SU(2) element whose trace
// is non-negative.
std::pair<double, std::array<double, 3>> angle_axis(const Matrix& v) {
  const Point q = raw_quaternion(v);
  std::array<double, 3> axis = {q[1], q[2], q[3]};
  const double s = std::sqrt(dot3(axis, axis));
  const double theta = 2 * std::atan2(s, q[0]);
  if (s > 0) {
    for (auto& c : axis) c /= s;
  } else {
    axis = {0, 0, 1};
  }
  return {theta, axis};
}

// SU(2) representative of `u` with non-negative real trace.
Matrix positive_su2(const Matrix& u) {
  Matrix v = to_su2(u);
  if (v.trace().real() < 0) v = -v;
  return v;
}

std::string cache_key(std::span<const NamedGate> alphabet, std::size_t max_length) {
  std::string key = "su2net/v1:";
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    if (i) key += ',';
    key += named_gate_name(alphabet[i]);
  }
  key += ':' + std::to_string(max_length);
  return key;
}

template <typename T>
void put(std::ostream& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.put(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff));
  }
}

template <typename T>
bool get(std::istream& in, T& v) {
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    const int c = in.get();
    if (c == EOF) return false;
    acc |= static_cast<std::uint64_t>(c & 0xff) << (8 * i);
  }
  v = static_cast<T>(acc);
  return true;
}

}  // namespace

// --- words -------------------------------------------------------------------

GateWord GateWord::from_letters(std::vector<NamedGate> letters) {
  GateWord w;
  for (NamedGate g : letters) w.matrix = named_matrix(g) * w.matrix;
  w.letters = std::move(letters);
  return w;
}

GateWord GateWord::herm() const {
  GateWord w;
  w.letters.reserve(letters.size());
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
    w.letters.push_back(named_inverse(*it));
  }
  w.matrix = matrix.adjoint();
  return w;
}

GateWord concat(const GateWord& first, const GateWord& second) {
  GateWord w;
  w.letters = first.letters;
  w.letters.insert(w.letters.end(), second.letters.begin(), second.letters.end());
  w.matrix = second.matrix * first.matrix;
  return w;
}

GateWord reduce_word(const GateWord& w) {
  std::vector<NamedGate> out;
  out.reserve(w.letters.size());
  for (NamedGate g : w.letters) {
    if (!out.empty() && out.back() == named_inverse(g)) {
      out.pop_back();
    } else {
      out.push_back(g);
    }
  }
  if (out.size() == w.letters.size()) return w;
  return GateWord::from_letters(std::move(out));
}

Matrix to_su2(const Matrix& u) {
  if (u.rows() != 2 || u.cols() != 2) throw SkError("expected a 2x2 matrix");
  const Complex det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
  return u / std::sqrt(det);
}

std::array<double, 4> su2_quaternion(const Matrix& u) {
  Point q = raw_quaternion(to_su2(u));
  for (double c : q) {
    if (std::abs(c) <= kTolIdentity) continue;
    if (c < 0) {
      for (auto& x : q) x = -x;
    }
    break;
  }
  return q;
}

Matrix random_su2(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Point q;
  double norm = 0;
  do {
    for (auto& c : q) c = normal(rng);
    norm = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
  } while (norm < 1e-9);
  return from_quaternion(q[0] / norm, q[1] / norm, q[2] / norm, q[3] / norm);
}

// --- k-d tree ----------------------------------------------------------------

KdTree4::KdTree4(std::vector<Point> points) : points_(std::move(points)) {
  std::vector<std::size_t> idx(points_.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  nodes_.reserve(points_.size());
  root_ = build(idx, 0, idx.size(), 0);
}

std::int32_t KdTree4::build(std::vector<std::size_t>& idx, std::size_t lo,
                            std::size_t hi, int depth) {
  if (lo >= hi) return -1;
  const int axis = depth % 4;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::nth_element(idx.begin() + static_cast<std::ptrdiff_t>(lo),
                   idx.begin() + static_cast<std::ptrdiff_t>(mid),
                   idx.begin() + static_cast<std::ptrdiff_t>(hi),
                   [&](std::size_t a, std::size_t b) {
                     return points_[a][axis] < points_[b][axis] ||
                            (points_[a][axis] == points_[b][axis] && a < b);
                   });
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back({idx[mid], axis});
  const std::int32_t left = build(idx, lo, mid, depth + 1);
  const std::int32_t right = build(idx, mid + 1, hi, depth + 1);
  nodes_[static_cast<std::size_t>(id)].left = left;
  nodes_[static_cast<std::size_t>(id)].right = right;
  return id;
}

std::vector<std::size_t> KdTree4::nearest(const Point& q, std::size_t k) const {
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry> heap;  // worst candidate on top
  k = std::min(k, points_.size());
  if (k == 0) return {};
  auto visit = [&](auto&& self, std::int32_t node) -> void {
    if (node < 0) return;
    const Node& n = nodes_[static_cast<std::size_t>(node)];
    const Entry e{squared(points_[n.point], q), n.point};
    if (heap.size() < k) {
      heap.push(e);
    } else if (e < heap.top()) {
      heap.pop();
      heap.push(e);
    }
    const double diff = q[n.axis] - points_[n.point][n.axis];
    const std::int32_t near = diff < 0 ? n.left : n.right;
    const std::int32_t far = diff < 0 ? n.right : n.left;
    self(self, near);
    if (heap.size() < k || diff * diff <= heap.top().first) self(self, far);
  };
  visit(visit, root_);
  std::vector<std::size_t> out(heap.size());
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = heap.top().second;
    heap.pop();
  }
  return out;
}

// --- net -----------------------------------------------------------------------

SU2Net SU2Net::build(std::vector<NamedGate> alphabet, std::size_t max_length) {
  if (alphabet.empty()) throw SkError("net alphabet is empty");
  std::vector<std::vector<NamedGate>> words{{}};
  std::set<Key> seen{word_key(identity_matrix(2))};
  std::vector<GateWord> frontier{GateWord{}};
  for (std::size_t len = 1; len <= max_length && !frontier.empty(); ++len) {
    std::vector<GateWord> next;
    for (const GateWord& w : frontier) {
      for (NamedGate g : alphabet) {
        if (!w.letters.empty() && w.letters.back() == named_inverse(g)) continue;
        GateWord ext;
        ext.letters = w.letters;
        ext.letters.push_back(g);
        ext.matrix = named_matrix(g) * w.matrix;
        if (!seen.insert(word_key(ext.matrix)).second) continue;
        words.push_back(ext.letters);
        next.push_back(std::move(ext));
      }
    }
    frontier = std::move(next);
  }
  return from_words(std::move(alphabet), max_length, std::move(words));
}

SU2Net SU2Net::from_words(std::vector<NamedGate> alphabet, std::size_t max_length,
                          std::vector<std::vector<NamedGate>> words,
                          std::optional<double> epsilon0) {
  SU2Net net;
  net.alphabet_ = std::move(alphabet);
  net.max_length_ = max_length;
  net.entries_.reserve(words.size());
  for (auto& w : words) net.entries_.push_back(GateWord::from_letters(std::move(w)));
  net.index();
  net.epsilon0_ = epsilon0 ? *epsilon0
                           : estimate_covering_radius(net, kCoveringSamples, kCoveringSeed);
  return net;
}

void SU2Net::index() {
  std::vector<Point> pts;
  pts.reserve(entries_.size());
  for (const GateWord& w : entries_) pts.push_back(su2_quaternion(w.matrix));
  tree_ = KdTree4(std::move(pts));
}

std::size_t SU2Net::nearest_index(const Matrix& u) const {
  if (entries_.empty()) throw SkError("net is empty");
  Point q = su2_quaternion(u);
  Point neg = q;
  for (auto& c : neg) c = -c;
  auto cands = tree_.nearest(q, kCandidates);
  const auto more = tree_.nearest(neg, kCandidates);
  cands.insert(cands.end(), more.begin(), more.end());
  std::sort(cands.begin(), cands.end());
  std::size_t best = cands.front();
  double best_d = distance(entries_[best].matrix, u);
  for (std::size_t i : cands) {
    const double d = distance(entries_[i].matrix, u);
    if (d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

std::size_t SU2Net::brute_force_nearest(const Matrix& u) const {
  if (entries_.empty()) throw SkError("net is empty");
  std::size_t best = 0;
  double best_d = distance(entries_[0].matrix, u);
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    const double d = distance(entries_[i].matrix, u);
    if (d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

double estimate_covering_radius(const SU2Net& net, std::size_t samples,
                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const Matrix u = random_su2(rng);
    worst = std::max(worst, distance(net.nearest(u).matrix, u));
  }
  return worst;
}

// --- Solovay-Kitaev --------------------------------------------------------------

CommutatorPair group_factor(const Matrix& delta) {
  if (distance(delta, identity_matrix(2)) >= kGroupFactorLimit) {
    throw SkError("group_factor: operator too far from the identity");
  }
  const Matrix d = positive_su2(delta);
  const auto [theta, n] = angle_axis(d);
  if (theta == 0.0) return {identity_matrix(2), identity_matrix(2)};

  // sin(θ/2) = 2 sin²(φ/2) √(1 − sin⁴(φ/2)) for V = Rx(φ), W = Ry(φ).
  const double s2 = (1 - std::cos(theta / 2)) / 2;
  const double phi = 2 * std::asin(std::pow(s2, 0.25));
  const Matrix v0 = rotation_matrix(Axis::X, phi);
  const Matrix w0 = rotation_matrix(Axis::Y, phi);
  const Matrix c = v0 * w0 * v0.adjoint() * w0.adjoint();
  const auto m = angle_axis(positive_su2(c)).second;

  // S rotates the commutator axis m onto n.
  const auto k = cross(m, n);
  const double sin_a = std::sqrt(dot3(k, k));
  const double cos_a = dot3(m, n);
  Matrix s;
  if (sin_a > 1e-15) {
    s = axis_rotation({k[0] / sin_a, k[1] / sin_a, k[2] / sin_a},
                      std::atan2(sin_a, cos_a));
  } else if (cos_a > 0) {
    s = identity_matrix(2);
  } else {
    // antiparallel: half turn about any axis perpendicular to m
    std::array<double, 3> p = std::abs(m[0]) < 0.9 ? std::array<double, 3>{1, 0, 0}
                                                   : std::array<double, 3>{0, 1, 0};
    auto perp = cross(m, p);
    const double len = std::sqrt(dot3(perp, perp));
    for (auto& x : perp) x /= len;
    s = axis_rotation(perp, std::numbers::pi);
  }
  return {s * v0 * s.adjoint(), s * w0 * s.adjoint()};
}

GateWord sk_decompose(const SU2Net& net, const Matrix& u, int depth) {
  if (depth < 0) throw SkError("sk_decompose: negative depth");
  if (depth == 0) return net.nearest(u);
  GateWord a = sk_decompose(net, u, depth - 1);
  const Matrix delta = u * a.matrix.adjoint();
  const double residual = distance(delta, identity_matrix(2));
  if (residual < kSkTerminationTol || residual >= kGroupFactorLimit) return a;
  const auto [v, w] = group_factor(delta);
  const GateWord vw = sk_decompose(net, v, depth - 1);
  const GateWord ww = sk_decompose(net, w, depth - 1);
  GateWord cand = concat(concat(concat(concat(a, ww.herm()), vw.herm()), ww), vw);
  cand = reduce_word(cand);
  return distance(cand.matrix, u) < distance(a.matrix, u) ? cand : a;
}

// --- cache ---------------------------------------------------------------------------

NetCache NetCache::from_environment() {
  if (const char* dir = std::getenv("QCSYNTH_NET_CACHE"); dir && *dir) {
    return NetCache(dir);
  }
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) {
    return NetCache(std::filesystem::path(xdg) / "qcsynth");
  }
  if (const char* home = std::getenv("HOME"); home && *home) {
    return NetCache(std::filesystem::path(home) / ".cache" / "qcsynth");
  }
  return NetCache(std::filesystem::temp_directory_path() / "qcsynth");
}

std::filesystem::path NetCache::path_for(std::span<const NamedGate> alphabet,
                                         std::size_t max_length) const {
  const std::string key = cache_key(alphabet, max_length);
  const auto crc = crc32(crc32(0L, Z_NULL, 0),
                         reinterpret_cast<const Bytef*>(key.data()),
                         static_cast<uInt>(key.size()));
  char name[32];
  std::snprintf(name, sizeof name, "su2net-%08lx.bin", static_cast<unsigned long>(crc));
  return dir_ / name;
}

std::optional<SU2Net> NetCache::load(std::span<const NamedGate> alphabet,
                                     std::size_t max_length) const {
  std::ifstream in(path_for(alphabet, max_length), std::ios::binary);
  if (!in) return std::nullopt;
  char magic[4];
  if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kCacheMagic)) return std::nullopt;
  std::uint32_t version = 0;
  if (!get(in, version) || version != kCacheVersion) return std::nullopt;
  std::uint8_t nletters = 0;
  if (!get(in, nletters) || nletters != alphabet.size()) return std::nullopt;
  for (NamedGate g : alphabet) {
    std::uint8_t c = 0;
    if (!get(in, c) || c != static_cast<std::uint8_t>(g)) return std::nullopt;
  }
  std::uint32_t len = 0;
  std::uint64_t eps_bits = 0;
  std::uint32_t count = 0;
  if (!get(in, len) || len != max_length || !get(in, eps_bits) || !get(in, count)) {
    return std::nullopt;
  }
  std::vector<std::vector<NamedGate>> words;
  words.reserve(std::min<std::uint32_t>(count, 1U << 20));
  for (std::uint32_t i = 0; i < count; ++i) {
    std::uint16_t wl = 0;
    if (!get(in, wl) || wl > max_length) return std::nullopt;
    std::vector<NamedGate> w(wl);
    for (auto& g : w) {
      std::uint8_t c = 0;
      if (!get(in, c) || c >= kNamedGateCount) return std::nullopt;
      g = static_cast<NamedGate>(c);
    }
    words.push_back(std::move(w));
  }
  return SU2Net::from_words({alphabet.begin(), alphabet.end()}, max_length,
                            std::move(words), std::bit_cast<double>(eps_bits));
}

bool NetCache::store(const SU2Net& net) const {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) return false;
  const auto path = path_for(net.alphabet(), net.max_length());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return false;
    out.write(kCacheMagic, 4);
    put(out, kCacheVersion);
    put(out, static_cast<std::uint8_t>(net.alphabet().size()));
    for (NamedGate g : net.alphabet()) put(out, static_cast<std::uint8_t>(g));
    put(out, static_cast<std::uint32_t>(net.max_length()));
    put(out, std::bit_cast<std::uint64_t>(net.epsilon0()));
    put(out, static_cast<std::uint32_t>(net.entries().size()));
    for (const GateWord& w : net.entries()) {
      put(out, static_cast<std::uint16_t>(w.letters.size()));
      for (NamedGate g : w.letters) put(out, static_cast<std::uint8_t>(g));
    }
    if (!out) return false;
  }
  std::filesystem::rename(tmp, path, ec);
  return !ec;
}

SU2Net NetCache::get_or_build(const std::vector<NamedGate>& alphabet,
                              std::size_t max_length, bool* cache_hit) const {
  if (auto net = load(alphabet, max_length)) {
    if (cache_hit) *cache_hit = true;
    return std::move(*net);
  }
  if (cache_hit) *cache_hit = false;
  SU2Net net = SU2Net::build(alphabet, max_length);
  store(net);
  return net;
}

}  // namespace qcsynth

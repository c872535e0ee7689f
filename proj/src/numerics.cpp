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

#include "qcsynth/numerics.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace qcsynth {

ParseError::ParseError(std::string source, std::size_t line,
                       const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
      source_(std::move(source)),
      line_(line) {}

Matrix identity_matrix(std::size_t n) {
  return Matrix::Identity(static_cast<Eigen::Index>(n),
                          static_cast<Eigen::Index>(n));
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw NumericsError("max_abs_diff: shape mismatch");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

bool all_finite(const Matrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

bool is_unitary(const Matrix& m, double tol) {
  if (m.rows() != m.cols() || !all_finite(m)) return false;
  if (m.size() == 0) return true;
  const Matrix gram = m.adjoint() * m;
  return max_abs_diff(gram, identity_matrix(m.rows())) <= tol;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t log2_exact(std::size_t n) {
  if (!is_power_of_two(n)) {
    throw NumericsError("dimension " + std::to_string(n) +
                        " is not a power of two");
  }
  std::size_t k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  return k;
}

Complex relative_phase(const Matrix& a, const Matrix& b) {
  const Complex tr = (a.adjoint() * b).trace();
  const double mag = std::abs(tr);
  if (mag == 0.0) return {1.0, 0.0};
  return tr / mag;
}

double distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw NumericsError("distance: shape mismatch");
  }
  const auto n = static_cast<double>(a.rows());
  if (n == 0) return 0.0;
  const Complex phase = relative_phase(a, b);
  const double frob = (b - phase * a).norm();
  return std::min(1.0, frob / std::sqrt(2.0 * n));
}

// --- UnitaryM ---------------------------------------------------------------

namespace {

bool row_is_identity(const Matrix& m, Eigen::Index r) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const Complex expect = (r == c) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
    if (std::abs(m(r, c) - expect) > kTolIdentity) return false;
  }
  return true;
}

bool col_is_identity(const Matrix& m, Eigen::Index c) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const Complex expect = (r == c) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
    if (std::abs(m(r, c) - expect) > kTolIdentity) return false;
  }
  return true;
}

// Local positions (into `block`) whose row or column leaves the identity.
std::vector<Eigen::Index> non_identity_positions(const Matrix& block) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < block.rows(); ++i) {
    if (!row_is_identity(block, i) || !col_is_identity(block, i)) {
      keep.push_back(i);
    }
  }
  return keep;
}

Matrix submatrix(const Matrix& m, const std::vector<Eigen::Index>& pos) {
  const auto k = static_cast<Eigen::Index>(pos.size());
  Matrix out(k, k);
  for (Eigen::Index r = 0; r < k; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) out(r, c) = m(pos[r], pos[c]);
  }
  return out;
}

}  // namespace

UnitaryM::UnitaryM(std::size_t dimension, std::vector<std::size_t> core_indices,
                   Matrix core)
    : dimension_(dimension),
      indices_(std::move(core_indices)),
      core_(std::move(core)) {
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] >= dimension_) {
      throw NumericsError("core index " + std::to_string(indices_[i]) +
                          " out of range for dimension " +
                          std::to_string(dimension_));
    }
    if (i > 0 && indices_[i] <= indices_[i - 1]) {
      throw NumericsError("core indices must be strictly increasing");
    }
  }
  const auto k = static_cast<Eigen::Index>(indices_.size());
  if (core_.rows() != k || core_.cols() != k) {
    throw NumericsError("core matrix shape does not match core index count");
  }
  if (!is_unitary(core_)) {
    throw NumericsError("core matrix is not unitary");
  }
}

UnitaryM UnitaryM::identity(std::size_t dimension) {
  UnitaryM u;
  u.dimension_ = dimension;
  u.core_ = Matrix(0, 0);
  return u;
}

UnitaryM UnitaryM::deflate(const Matrix& a) {
  if (a.rows() != a.cols()) throw NumericsError("deflate: matrix not square");
  if (!is_unitary(a)) throw NumericsError("deflate: matrix not unitary");
  const auto keep = non_identity_positions(a);
  std::vector<std::size_t> idx(keep.begin(), keep.end());
  return UnitaryM(static_cast<std::size_t>(a.rows()), std::move(idx),
                  submatrix(a, keep));
}

Matrix UnitaryM::inflate() const {
  Matrix out = identity_matrix(dimension_);
  const auto k = static_cast<Eigen::Index>(indices_.size());
  for (Eigen::Index r = 0; r < k; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) {
      out(static_cast<Eigen::Index>(indices_[r]),
          static_cast<Eigen::Index>(indices_[c])) = core_(r, c);
    }
  }
  return out;
}

UnitaryM UnitaryM::matmul(const UnitaryM& other) const {
  if (dimension_ != other.dimension_) {
    throw NumericsError("matmul: dimension mismatch (" +
                        std::to_string(dimension_) + " vs " +
                        std::to_string(other.dimension_) + ")");
  }
  std::vector<std::size_t> uni;
  std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(),
                 other.indices_.end(), std::back_inserter(uni));
  const auto k = static_cast<Eigen::Index>(uni.size());
  auto embed = [&](const UnitaryM& u) {
    Matrix block = identity_matrix(uni.size());
    std::vector<Eigen::Index> pos;
    for (std::size_t i : u.indices_) {
      pos.push_back(std::lower_bound(uni.begin(), uni.end(), i) - uni.begin());
    }
    for (std::size_t r = 0; r < pos.size(); ++r) {
      for (std::size_t c = 0; c < pos.size(); ++c) {
        block(pos[r], pos[c]) = u.core_(static_cast<Eigen::Index>(r),
                                        static_cast<Eigen::Index>(c));
      }
    }
    return block;
  };
  const Matrix product = (k == 0) ? Matrix(0, 0) : Matrix(embed(*this) * embed(other));
  const auto keep = non_identity_positions(product);
  std::vector<std::size_t> idx;
  for (auto p : keep) idx.push_back(uni[static_cast<std::size_t>(p)]);
  UnitaryM out;
  out.dimension_ = dimension_;
  out.indices_ = std::move(idx);
  out.core_ = submatrix(product, keep);
  return out;
}

UnitaryM UnitaryM::herm() const {
  UnitaryM out = *this;
  out.core_ = core_.adjoint();
  return out;
}

UnitaryM UnitaryM::trimmed() const {
  const auto keep = non_identity_positions(core_);
  UnitaryM out;
  out.dimension_ = dimension_;
  for (auto p : keep) out.indices_.push_back(indices_[static_cast<std::size_t>(p)]);
  out.core_ = submatrix(core_, keep);
  return out;
}

bool UnitaryM::operator==(const UnitaryM& other) const {
  if (dimension_ != other.dimension_ || indices_ != other.indices_) return false;
  if (core_.rows() != other.core_.rows()) return false;
  for (Eigen::Index i = 0; i < core_.size(); ++i) {
    const Complex a = core_.data()[i];
    const Complex b = other.core_.data()[i];
    if (a.real() != b.real() || a.imag() != b.imag()) return false;
  }
  return true;
}

// --- text I/O ---------------------------------------------------------------

namespace {

std::string shortest(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

double parse_real(std::string_view s, std::string_view whole) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty() || s == "-") {
    throw NumericsError("malformed number in '" + std::string(whole) + "'");
  }
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw NumericsError("malformed number in '" + std::string(whole) + "'");
  }
  return v;
}

// Unit coefficient for forms like "j", "+j", "-j".
double parse_imag_coeff(std::string_view s, std::string_view whole) {
  if (s.empty() || s == "+") return 1.0;
  if (s == "-") return -1.0;
  return parse_real(s, whole);
}

}  // namespace

std::string format_complex(Complex z) {
  std::string out = shortest(z.real());
  out += std::signbit(z.imag()) ? '-' : '+';
  out += shortest(std::abs(z.imag()));
  out += 'j';
  return out;
}

Complex parse_complex(std::string_view token) {
  const std::string_view whole = token;
  if (token.size() >= 2 && token.front() == '(' && token.back() == ')') {
    token = token.substr(1, token.size() - 2);
  }
  if (token.empty()) throw NumericsError("empty complex literal");
  const char last = token.back();
  if (last != 'j' && last != 'J') return {parse_real(token, whole), 0.0};
  const std::string_view body = token.substr(0, token.size() - 1);
  for (std::size_t p = body.size(); p-- > 1;) {
    const char c = body[p];
    if ((c == '+' || c == '-') && body[p - 1] != 'e' && body[p - 1] != 'E') {
      return {parse_real(body.substr(0, p), whole),
              parse_imag_coeff(body.substr(p), whole)};
    }
  }
  return {0.0, parse_imag_coeff(body, whole)};
}

Matrix read_um(std::istream& in, const std::string& source_name) {
  std::string line;
  std::size_t lineno = 0;
  auto next_content_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++lineno;
      if (out.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_content_line(line)) {
    throw ParseError(source_name, lineno == 0 ? 1 : lineno, "empty input");
  }
  std::istringstream head(line);
  long long n = 0;
  std::string extra;
  if (!(head >> n) || (head >> extra) || n <= 0) {
    throw ParseError(source_name, lineno,
                     "first line must be a positive integer dimension");
  }
  Matrix m(n, n);
  for (long long r = 0; r < n; ++r) {
    if (!next_content_line(line)) {
      throw ParseError(source_name, lineno + 1,
                       "expected " + std::to_string(n) + " rows, found " +
                           std::to_string(r));
    }
    std::istringstream row(line);
    std::string tok;
    long long c = 0;
    while (row >> tok) {
      if (c >= n) {
        throw ParseError(source_name, lineno,
                         "row has more than " + std::to_string(n) + " entries");
      }
      try {
        m(r, c) = parse_complex(tok);
      } catch (const NumericsError& e) {
        throw ParseError(source_name, lineno, e.what());
      }
      ++c;
    }
    if (c != n) {
      throw ParseError(source_name, lineno,
                       "expected " + std::to_string(n) + " entries, found " +
                           std::to_string(c));
    }
  }
  if (next_content_line(line)) {
    throw ParseError(source_name, lineno, "trailing data after matrix rows");
  }
  return m;
}

Matrix read_um_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return read_um(in, path);
}

void write_um(std::ostream& out, const Matrix& m) {
  out << m.rows() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      out << format_complex(m(r, c));
    }
    out << '\n';
  }
}

}  // namespace qcsynth

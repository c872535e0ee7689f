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

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qcsynth {

using Complex = std::complex<double>;

/// Dense complex matrix, row-major.
using Matrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// ‖M†M − I‖_max bound for a matrix to count as unitary.
inline constexpr double kTolUnitary = 1e-9;
/// Entries closer than this to the identity pattern are treated as identity.
inline constexpr double kTolIdentity = 1e-12;

class NumericsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the `.um` reader; carries the source name and 1-based line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& what);
  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

Matrix identity_matrix(std::size_t n);
double max_abs_diff(const Matrix& a, const Matrix& b);
bool all_finite(const Matrix& m);
bool is_unitary(const Matrix& m, double tol = kTolUnitary);
bool is_power_of_two(std::size_t n);
/// log2 of a power of two; throws NumericsError otherwise.
std::size_t log2_exact(std::size_t n);

/// Phase-invariant distance √(1 − |tr(a†b)|/n) between unitaries.
///
/// Evaluated as min_φ ‖b − e^{iφ}a‖_F / √(2n), which is the same quantity
/// for unitary inputs but does not lose half the digits to cancellation
/// when a and b are nearly equal.
double distance(const Matrix& a, const Matrix& b);

/// The phase e^{iφ} minimising ‖b − e^{iφ}a‖_F (1 when tr(a†b) = 0).
Complex relative_phase(const Matrix& a, const Matrix& b);

/// Sparse-aware unitary: an identity background with a dense core block
/// scattered onto `core_indices`.
class UnitaryM {
 public:
  UnitaryM() = default;
  /// Validates ordering, bounds, shape and unitarity of the core.
  UnitaryM(std::size_t dimension, std::vector<std::size_t> core_indices,
           Matrix core);

  static UnitaryM identity(std::size_t dimension);
  static UnitaryM deflate(const Matrix& a);

  Matrix inflate() const;
  /// this · other, with a minimal core.
  UnitaryM matmul(const UnitaryM& other) const;
  UnitaryM herm() const;
  /// Drops core indices whose row and column match the identity.
  UnitaryM trimmed() const;

  std::size_t dimension() const { return dimension_; }
  const std::vector<std::size_t>& core_indices() const { return indices_; }
  const Matrix& core() const { return core_; }
  bool is_identity() const { return indices_.empty(); }

  /// Exact (bitwise) equality of dimension, indices and core entries.
  bool operator==(const UnitaryM& other) const;

 private:
  std::size_t dimension_ = 0;
  std::vector<std::size_t> indices_;
  Matrix core_;
};

// `.um` text format: line 1 is n, then n rows of n complex entries.
std::string format_complex(Complex z);
Complex parse_complex(std::string_view token);
Matrix read_um(std::istream& in, const std::string& source_name);
Matrix read_um_file(const std::string& path);
void write_um(std::ostream& out, const Matrix& m);

}  // namespace qcsynth

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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qcsynth {

/// Role of a qubit within one gate.
enum class QType : std::uint8_t { Target = 0, Control0 = 1, Control1 = 2, Idler = 3 };

std::string_view qtype_name(QType t);
inline bool is_control(QType t) {
  return t == QType::Control0 || t == QType::Control1;
}

enum class QubitKind : std::uint8_t { Data = 0, Ancilla = 1 };

// Ids are dense over a device: data qubits 0..d-1, ancilla after them.
// Basis index convention is big-endian: qubit 0 is the most significant bit.
struct Qubit {
  std::uint32_t id = 0;
  QubitKind kind = QubitKind::Data;

  static Qubit data(std::uint32_t id) { return {id, QubitKind::Data}; }
  static Qubit ancilla(std::uint32_t id) { return {id, QubitKind::Ancilla}; }

  friend bool operator==(const Qubit&, const Qubit&) = default;
  friend auto operator<=>(const Qubit& a, const Qubit& b) { return a.id <=> b.id; }
};

std::vector<Qubit> data_qubits(std::size_t n);

class AllocationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The virtual qspace of one compilation.
class QDevice {
 public:
  explicit QDevice(std::optional<std::size_t> ancilla_budget = std::nullopt)
      : budget_(ancilla_budget) {}

  /// Allocates data qubits 0..n-1. May be called once.
  std::vector<Qubit> allocate_data(std::size_t n);

  /// Always allocates fresh ancilla ids after every existing id.
  std::vector<Qubit> allocate_ancilla(std::size_t n);

  /// Pooled allocation: previously released ancilla are handed out first
  /// (lowest id first), fresh ones are allocated for the remainder.
  std::vector<Qubit> borrow_ancilla(std::size_t n);
  void release_ancilla(std::span<const Qubit> qubits);

  std::size_t data_count() const { return data_count_; }
  std::size_t ancilla_count() const { return ancilla_count_; }
  std::size_t total_count() const { return data_count_ + ancilla_count_; }
  std::optional<std::size_t> ancilla_budget() const { return budget_; }
  bool data_allocated() const { return data_allocated_; }

 private:
  std::optional<std::size_t> budget_;
  bool data_allocated_ = false;
  std::size_t data_count_ = 0;
  std::size_t ancilla_count_ = 0;
  std::vector<Qubit> free_;
};

}  // namespace qcsynth

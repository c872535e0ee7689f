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

#include "qcsynth/qspace.hpp"

#include <algorithm>

namespace qcsynth {

std::string_view qtype_name(QType t) {
  switch (t) {
    case QType::Target:
      return "TARGET";
    case QType::Control0:
      return "CONTROL0";
    case QType::Control1:
      return "CONTROL1";
    case QType::Idler:
      return "IDLER";
  }
  return "?";
}

std::vector<Qubit> data_qubits(std::size_t n) {
  std::vector<Qubit> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(Qubit::data(static_cast<std::uint32_t>(i)));
  }
  return out;
}

std::vector<Qubit> QDevice::allocate_data(std::size_t n) {
  if (data_allocated_) {
    throw AllocationError("data qubits already allocated for this device");
  }
  if (ancilla_count_ != 0) {
    throw AllocationError("data qubits must be allocated before ancilla");
  }
  data_allocated_ = true;
  data_count_ = n;
  return data_qubits(n);
}

std::vector<Qubit> QDevice::allocate_ancilla(std::size_t n) {
  if (budget_ && ancilla_count_ + n > *budget_) {
    throw AllocationError(
        "ancilla budget exhausted: need " + std::to_string(ancilla_count_ + n) +
        ", budget " + std::to_string(*budget_) + " (short by " +
        std::to_string(ancilla_count_ + n - *budget_) + ")");
  }
  std::vector<Qubit> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(Qubit::ancilla(static_cast<std::uint32_t>(total_count())));
    ++ancilla_count_;
  }
  return out;
}

std::vector<Qubit> QDevice::borrow_ancilla(std::size_t n) {
  std::sort(free_.begin(), free_.end());
  const std::size_t reused = std::min(n, free_.size());
  std::vector<Qubit> out(free_.begin(), free_.begin() + static_cast<std::ptrdiff_t>(reused));
  free_.erase(free_.begin(), free_.begin() + static_cast<std::ptrdiff_t>(reused));
  if (reused < n) {
    auto fresh = allocate_ancilla(n - reused);
    out.insert(out.end(), fresh.begin(), fresh.end());
  }
  return out;
}

void QDevice::release_ancilla(std::span<const Qubit> qubits) {
  for (const Qubit& q : qubits) {
    if (q.kind != QubitKind::Ancilla || q.id < data_count_ ||
        q.id >= total_count()) {
      throw AllocationError("release of qubit " + std::to_string(q.id) +
                            " which is not an allocated ancilla");
    }
    if (std::find(free_.begin(), free_.end(), q) != free_.end()) {
      throw AllocationError("ancilla " + std::to_string(q.id) +
                            " released twice");
    }
    free_.push_back(q);
  }
}

}  // namespace qcsynth

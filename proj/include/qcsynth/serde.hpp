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

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcsynth/gates.hpp"
#include "qcsynth/ir.hpp"

namespace qcsynth {

inline constexpr std::uint16_t kQcoVersion = 1;

enum class SerdeErrorKind {
  BadMagic,
  UnsupportedVersion,
  Truncated,
  ChecksumMismatch,
  Malformed,
  Io,
};

class SerdeError : public std::runtime_error {
 public:
  SerdeError(SerdeErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  SerdeErrorKind kind() const { return kind_; }

 private:
  SerdeErrorKind kind_;
};

struct QcoHeader {
  std::uint32_t data_qubits = 0;
  std::uint32_t total_qubits = 0;
  GateGrain granularity = GateGrain::Principal;
  friend bool operator==(const QcoHeader&, const QcoHeader&) = default;
};

struct QcoFile {
  QcoHeader header;
  ByteCode root;
};

// Little-endian layout:
//   "QCO1" | version u16 | flags u16 | data_qubits u32 | total_qubits u32 |
//   granularity u8 | 7 reserved bytes
//   nodes in preorder, each:
//     kind u8 (0 UnitaryM, 1 CtrlGate) | tombstone u8 | child_count u32 |
//     producer u8 | ordinal u32 | notes u16 length + UTF-8 | payload
//   CRC32 of everything before it, u32.
std::vector<std::uint8_t> serialize(const QcoFile& file);
QcoFile deserialize(std::span<const std::uint8_t> bytes);

void write_qco(const std::string& path, const QcoFile& file);
QcoFile read_qco(const std::string& path);

}  // namespace qcsynth

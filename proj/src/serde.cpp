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


#include "qcsynth/serde.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace qcsynth {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic = {'Q', 'C', 'O', '1'};
constexpr std::size_t kHeaderSize = 32;
constexpr std::size_t kTrailerSize = 4;
constexpr std::size_t kMaxDepth = 4096;
// kind, tombstone, child_count, producer, ordinal, notes length
constexpr std::size_t kMinNodeSize = 1 + 1 + 4 + 1 + 4 + 2;

constexpr std::uint8_t kCoreRotationBase = 8;
constexpr std::uint8_t kCoreGeneric = 11;

std::uint32_t crc_of(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, bytes.data(), static_cast<uInt>(bytes.size()));
  return static_cast<std::uint32_t>(crc);
}

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) { put(v, 2); }
  void u32(std::uint32_t v) { put(v, 4); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  std::vector<std::uint8_t>& buffer() { return out_; }

 private:
  void put(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> out_;
};

template <typename T>
std::uint32_t checked_u32(T v, const char* what) {
  if (v > static_cast<T>(UINT32_MAX)) {
    throw SerdeError(SerdeErrorKind::Malformed, std::string(what) + " exceeds u32");
  }
  return static_cast<std::uint32_t>(v);
}

void write_matrix(Writer& w, const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      w.f64(m(r, c).real());
      w.f64(m(r, c).imag());
    }
  }
}

void write_node(Writer& w, const ByteCode& n) {
  w.u8(n.holds_gate() ? 1 : 0);
  w.u8(n.tombstone ? 1 : 0);
  w.u32(checked_u32(n.children.size(), "child count"));
  w.u8(static_cast<std::uint8_t>(n.lineage.producer));
  w.u32(n.lineage.ordinal);
  if (n.lineage.notes.size() > UINT16_MAX) {
    throw SerdeError(SerdeErrorKind::Malformed, "lineage notes exceed 65535 bytes");
  }
  w.u16(static_cast<std::uint16_t>(n.lineage.notes.size()));
  w.bytes({reinterpret_cast<const std::uint8_t*>(n.lineage.notes.data()),
           n.lineage.notes.size()});

  if (!n.holds_gate()) {
    const UnitaryM& u = n.unitary();
    w.u32(checked_u32(u.dimension(), "dimension"));
    w.u32(checked_u32(u.core_indices().size(), "core size"));
    for (std::size_t i : u.core_indices()) w.u32(checked_u32(i, "core index"));
    write_matrix(w, u.core());
  } else {
    const CtrlGate& g = n.gate();
    if (g.qubits().size() > UINT8_MAX) {
      throw SerdeError(SerdeErrorKind::Malformed, "gate has more than 255 qubits");
    }
    w.u8(static_cast<std::uint8_t>(g.qubits().size()));
    for (std::size_t k = 0; k < g.qubits().size(); ++k) {
      w.u32(g.qubits()[k].id);
      w.u8(static_cast<std::uint8_t>(g.qtypes()[k]));
    }
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, NamedGate>) {
            w.u8(static_cast<std::uint8_t>(c));
          } else if constexpr (std::is_same_v<T, Rotation>) {
            w.u8(static_cast<std::uint8_t>(kCoreRotationBase +
                                           static_cast<std::uint8_t>(c.axis)));
            w.f64(c.angle);
          } else {
            w.u8(kCoreGeneric);
            w.u8(static_cast<std::uint8_t>(core_target_count(c)));
            write_matrix(w, c.matrix);
          }
        },
        g.core());
    w.f64(g.phase());
  }
  for (const ByteCode& c : n.children) write_node(w, c);
}

struct OutOfBytes {};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> b) : b_(b) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  double f64() { return std::bit_cast<double>(get(8)); }
  std::string text(std::size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char*>(b_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return b_.size() - pos_; }
  void need(std::size_t n) const {
    if (remaining() < n) throw OutOfBytes{};
  }

 private:
  std::uint64_t get(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= std::uint64_t{b_[pos_ + i]} << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }
  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
};

[[noreturn]] void malformed(const std::string& what) {
  throw SerdeError(SerdeErrorKind::Malformed, "malformed .qco: " + what);
}

Matrix read_matrix(Reader& r, std::size_t dim) {
  // each entry is 16 bytes; refuse sizes the remaining input cannot hold
  if (dim != 0 && dim > r.remaining() / 16 / dim) throw OutOfBytes{};
  Matrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      const double re = r.f64();
      const double im = r.f64();
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = Complex(re, im);
    }
  }
  return m;
}

ByteCode read_node(Reader& r, const QcoHeader& h, std::size_t depth) {
  if (depth > kMaxDepth) malformed("tree deeper than " + std::to_string(kMaxDepth));
  ByteCode n;
  const std::uint8_t kind = r.u8();
  if (kind > 1) malformed("unknown node kind " + std::to_string(kind));
  const std::uint8_t tomb = r.u8();
  if (tomb > 1) malformed("bad tombstone flag");
  n.tombstone = tomb == 1;
  const std::uint32_t child_count = r.u32();
  if (child_count > r.remaining() / kMinNodeSize) throw OutOfBytes{};
  const std::uint8_t producer = r.u8();
  if (producer >= kProducerCount) malformed("unknown producer " + std::to_string(producer));
  n.lineage.producer = static_cast<Producer>(producer);
  n.lineage.ordinal = r.u32();
  n.lineage.notes = r.text(r.u16());

  try {
    if (kind == 0) {
      const std::uint32_t dim = r.u32();
      const std::uint32_t count = r.u32();
      if (count > dim) malformed("core larger than dimension");
      r.need(std::size_t{count} * 4);
      std::vector<std::size_t> indices(count);
      for (auto& i : indices) i = r.u32();
      Matrix core = read_matrix(r, count);
      n.payload = UnitaryM(dim, std::move(indices), std::move(core));
    } else {
      const std::uint8_t qcount = r.u8();
      std::vector<Qubit> qubits;
      std::vector<QType> qtypes;
      for (std::uint8_t k = 0; k < qcount; ++k) {
        const std::uint32_t id = r.u32();
        const std::uint8_t qt = r.u8();
        if (qt > 3) malformed("unknown qtype " + std::to_string(qt));
        if (id >= h.total_qubits) malformed("qubit id " + std::to_string(id) + " out of range");
        qubits.push_back(id >= h.data_qubits ? Qubit::ancilla(id) : Qubit::data(id));
        qtypes.push_back(static_cast<QType>(qt));
      }
      const std::uint8_t core_kind = r.u8();
      CoreOp core;
      if (core_kind < kNamedGateCount) {
        core = static_cast<NamedGate>(core_kind);
      } else if (core_kind < kCoreGeneric) {
        const auto axis = static_cast<Axis>(core_kind - kCoreRotationBase);
        core = Rotation{axis, r.f64()};
      } else if (core_kind == kCoreGeneric) {
        const std::uint8_t t = r.u8();
        if (t == 0 || t > 16) malformed("bad generic target count");
        core = GenericCore{read_matrix(r, std::size_t{1} << t)};
      } else {
        malformed("unknown core kind " + std::to_string(core_kind));
      }
      const double phase = r.f64();
      n.payload = CtrlGate(std::move(qubits), std::move(qtypes), std::move(core), phase);
    }
  } catch (const NumericsError& e) {
    malformed(e.what());
  } catch (const GateError& e) {
    malformed(e.what());
  }

  n.children.reserve(child_count);
  for (std::uint32_t i = 0; i < child_count; ++i) {
    n.children.push_back(read_node(r, h, depth + 1));
  }
  return n;
}

}  // namespace

std::vector<std::uint8_t> serialize(const QcoFile& file) {
  Writer w;
  w.bytes(kMagic);
  w.u16(kQcoVersion);
  w.u16(0);
  w.u32(file.header.data_qubits);
  w.u32(file.header.total_qubits);
  w.u8(static_cast<std::uint8_t>(file.header.granularity));
  for (int i = 0; i < 7; ++i) w.u8(0);
  write_node(w, file.root);
  w.u32(crc_of(w.buffer()));
  return std::move(w.buffer());
}

QcoFile deserialize(std::span<const std::uint8_t> bytes) {
  const std::size_t prefix = std::min(bytes.size(), kMagic.size());
  if (!std::equal(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(prefix),
                  kMagic.begin())) {
    throw SerdeError(SerdeErrorKind::BadMagic, "not a .qco file (bad magic)");
  }
  if (bytes.size() < 6) throw SerdeError(SerdeErrorKind::Truncated, "truncated .qco header");
  const auto version = static_cast<std::uint16_t>(bytes[4] | (bytes[5] << 8));
  if (version != kQcoVersion) {
    throw SerdeError(SerdeErrorKind::UnsupportedVersion,
                     "unsupported .qco version " + std::to_string(version));
  }
  if (bytes.size() < kHeaderSize + kTrailerSize) {
    throw SerdeError(SerdeErrorKind::Truncated, "truncated .qco file");
  }
  const auto body = bytes.first(bytes.size() - kTrailerSize);
  Reader trailer(bytes.last(kTrailerSize));
  const bool crc_ok = trailer.u32() == crc_of(body);

  QcoFile file;
  try {
    Reader r(body);
    r.text(4);
    r.u16();
    if (r.u16() != 0) malformed("unknown flags");
    file.header.data_qubits = r.u32();
    file.header.total_qubits = r.u32();
    const std::uint8_t grain = r.u8();
    if (grain > static_cast<std::uint8_t>(GateGrain::CliffordT)) malformed("bad granularity");
    file.header.granularity = static_cast<GateGrain>(grain);
    if (file.header.total_qubits < file.header.data_qubits) malformed("total < data qubits");
    r.text(7);
    file.root = read_node(r, file.header, 0);
    if (r.remaining() != 0) malformed("trailing bytes after the tree");
  } catch (const OutOfBytes&) {
    if (!crc_ok) throw SerdeError(SerdeErrorKind::Truncated, "truncated .qco file");
    malformed("node records run past the end of the file");
  } catch (const SerdeError&) {
    if (!crc_ok) {
      throw SerdeError(SerdeErrorKind::ChecksumMismatch, ".qco checksum mismatch");
    }
    throw;
  }
  if (!crc_ok) throw SerdeError(SerdeErrorKind::ChecksumMismatch, ".qco checksum mismatch");
  return file;
}

void write_qco(const std::string& path, const QcoFile& file) {
  const auto bytes = serialize(file);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SerdeError(SerdeErrorKind::Io, "cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw SerdeError(SerdeErrorKind::Io, "write to " + path + " failed");
}

QcoFile read_qco(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SerdeError(SerdeErrorKind::Io, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

}  // namespace qcsynth

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

#include "qcsynth/gates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <unordered_set>

namespace qcsynth {

namespace {

constexpr double kNamedMatchTol = 1e-12;

using Index = Eigen::Index;

std::array<Matrix, kNamedGateCount> make_named_table() {
  using std::numbers::sqrt2;
  const Complex i{0.0, 1.0};
  std::array<Matrix, kNamedGateCount> t;
  for (auto& m : t) m = Matrix::Zero(2, 2);
  t[0] << 0.0, 1.0, 1.0, 0.0;                   // X
  t[1] << 0.0, -i, i, 0.0;                      // Y
  t[2] << 1.0, 0.0, 0.0, -1.0;                  // Z
  t[3] << 1.0 / sqrt2, 1.0 / sqrt2, 1.0 / sqrt2, -1.0 / sqrt2;  // H
  t[4] << 1.0, 0.0, 0.0, i;                     // S
  t[5] << 1.0, 0.0, 0.0, std::polar(1.0, std::numbers::pi / 4);  // T
  t[6] << 1.0, 0.0, 0.0, -i;                    // SD
  t[7] << 1.0, 0.0, 0.0, std::polar(1.0, -std::numbers::pi / 4);  // TD
  return t;
}

// Position of every gate qubit inside `space`, in gate order.
std::vector<std::size_t> positions_in(const CtrlGate& g,
                                      std::span<const Qubit> space) {
  std::vector<std::size_t> pos;
  pos.reserve(g.qubits().size());
  for (const Qubit& q : g.qubits()) {
    auto it = std::find_if(space.begin(), space.end(),
                           [&](const Qubit& s) { return s.id == q.id; });
    if (it == space.end()) {
      throw GateError("qubit q" + std::to_string(q.id) +
                      " of gate is missing from the space");
    }
    pos.push_back(static_cast<std::size_t>(it - space.begin()));
  }
  return pos;
}

struct Masks {
  std::size_t control_mask = 0;
  std::size_t control_value = 0;
  std::vector<std::size_t> target_offsets;  // bit pattern per core index
  std::size_t target_mask = 0;
};

Masks build_masks(const CtrlGate& g, std::span<const Qubit> space) {
  const std::size_t m = space.size();
  const auto pos = positions_in(g, space);
  Masks out;
  std::vector<std::size_t> target_bits;
  for (std::size_t k = 0; k < pos.size(); ++k) {
    const std::size_t bit = std::size_t{1} << (m - 1 - pos[k]);
    switch (g.qtypes()[k]) {
      case QType::Target:
        target_bits.push_back(bit);
        out.target_mask |= bit;
        break;
      case QType::Control1:
        out.control_mask |= bit;
        out.control_value |= bit;
        break;
      case QType::Control0:
        out.control_mask |= bit;
        break;
      case QType::Idler:
        break;
    }
  }
  const std::size_t t = target_bits.size();
  out.target_offsets.assign(std::size_t{1} << t, 0);
  for (std::size_t idx = 0; idx < out.target_offsets.size(); ++idx) {
    std::size_t off = 0;
    for (std::size_t k = 0; k < t; ++k) {
      if ((idx >> (t - 1 - k)) & 1U) off |= target_bits[k];
    }
    out.target_offsets[idx] = off;
  }
  return out;
}

void check_unique_ids(std::span<const Qubit> qs, const char* what) {
  std::unordered_set<std::uint32_t> seen;
  for (const Qubit& q : qs) {
    if (!seen.insert(q.id).second) {
      throw GateError(std::string(what) + ": duplicate qubit q" +
                      std::to_string(q.id));
    }
  }
}

bool same_signature(const CtrlGate& a, const CtrlGate& b) {
  return a.qubits() == b.qubits() && a.qtypes() == b.qtypes();
}

CtrlGate without_phase(const CtrlGate& g) {
  CtrlGate out = g;
  out.set_phase(0.0);
  return out;
}

CoreOp core_from_matrix(const Matrix& m) {
  if (m.rows() == 2) {
    if (auto named = recognize_named(m)) return *named;
  }
  return GenericCore{m};
}

}  // namespace

// --- names -------------------------------------------------------------------

std::string_view named_gate_name(NamedGate g) {
  static constexpr std::array<std::string_view, kNamedGateCount> kNames = {
      "X", "Y", "Z", "H", "S", "T", "SD", "TD"};
  return kNames[static_cast<std::size_t>(g)];
}

std::optional<NamedGate> named_gate_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kNamedGateCount; ++i) {
    const auto g = static_cast<NamedGate>(i);
    if (named_gate_name(g) == name) return g;
  }
  return std::nullopt;
}

std::string_view axis_name(Axis a) {
  switch (a) {
    case Axis::X:
      return "x";
    case Axis::Y:
      return "y";
    case Axis::Z:
      return "z";
  }
  return "?";
}

std::string_view grain_name(GateGrain g) {
  static constexpr std::array<std::string_view, 8> kNames = {
      "UNITARY",    "TWO_LEVEL", "MULTI_TARGET", "SINGLET",
      "CTRL_PRUNED", "PRINCIPAL", "UNIV_GATE",   "CLIFFORD_T"};
  return kNames[static_cast<std::size_t>(g)];
}

std::optional<GateGrain> grain_from_name(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (std::uint8_t i = 0; i < 8; ++i) {
    const auto g = static_cast<GateGrain>(i);
    if (grain_name(g) == upper) return g;
  }
  return std::nullopt;
}

// --- cores -------------------------------------------------------------------

const Matrix& named_matrix(NamedGate g) {
  static const auto kTable = make_named_table();
  return kTable[static_cast<std::size_t>(g)];
}

NamedGate named_inverse(NamedGate g) {
  switch (g) {
    case NamedGate::S:
      return NamedGate::SD;
    case NamedGate::SD:
      return NamedGate::S;
    case NamedGate::T:
      return NamedGate::TD;
    case NamedGate::TD:
      return NamedGate::T;
    default:
      return g;
  }
}

Matrix rotation_matrix(Axis axis, double angle) {
  const double c = std::cos(angle / 2);
  const double s = std::sin(angle / 2);
  Matrix m(2, 2);
  switch (axis) {
    case Axis::X:
      m << c, Complex(0, -s), Complex(0, -s), c;
      break;
    case Axis::Y:
      m << c, -s, s, c;
      break;
    case Axis::Z:
      m << std::polar(1.0, -angle / 2), 0.0, 0.0, std::polar(1.0, angle / 2);
      break;
  }
  return m;
}

Matrix core_matrix(const CoreOp& core) {
  return std::visit(
      [](const auto& c) -> Matrix {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, NamedGate>) {
          return named_matrix(c);
        } else if constexpr (std::is_same_v<T, Rotation>) {
          return rotation_matrix(c.axis, c.angle);
        } else {
          return c.matrix;
        }
      },
      core);
}

std::size_t core_target_count(const CoreOp& core) {
  if (const auto* g = std::get_if<GenericCore>(&core)) {
    const auto rows = static_cast<std::size_t>(g->matrix.rows());
    if (!is_power_of_two(rows) || rows < 2) {
      throw GateError("generic core dimension must be a power of two >= 2");
    }
    return log2_exact(rows);
  }
  return 1;
}

bool core_is_diagonal(const CoreOp& core) {
  if (const auto* n = std::get_if<NamedGate>(&core)) {
    switch (*n) {
      case NamedGate::Z:
      case NamedGate::S:
      case NamedGate::T:
      case NamedGate::SD:
      case NamedGate::TD:
        return true;
      default:
        return false;
    }
  }
  if (const auto* r = std::get_if<Rotation>(&core)) {
    return r->axis == Axis::Z;
  }
  const Matrix& m = std::get<GenericCore>(core).matrix;
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (r != c && m(r, c) != Complex{0.0, 0.0}) return false;
    }
  }
  return true;
}

std::optional<NamedGate> recognize_named(const Matrix& m) {
  if (m.rows() != 2 || m.cols() != 2) return std::nullopt;
  for (std::size_t i = 0; i < kNamedGateCount; ++i) {
    const auto g = static_cast<NamedGate>(i);
    if (max_abs_diff(m, named_matrix(g)) <= kNamedMatchTol) return g;
  }
  return std::nullopt;
}

// --- CtrlGate ----------------------------------------------------------------

CtrlGate::CtrlGate(std::vector<Qubit> qubits, std::vector<QType> qtypes,
                   CoreOp core, double phase)
    : qubits_(std::move(qubits)),
      qtypes_(std::move(qtypes)),
      core_(std::move(core)),
      phase_(phase) {
  if (qubits_.size() != qtypes_.size()) {
    throw GateError("qubit and qtype lists differ in length");
  }
  check_unique_ids(qubits_, "CtrlGate");
  const auto t = static_cast<std::size_t>(
      std::count(qtypes_.begin(), qtypes_.end(), QType::Target));
  if (t == 0) throw GateError("gate has no TARGET qubit");
  if (core_target_count(core_) != t) {
    throw GateError("core acts on " + std::to_string(core_target_count(core_)) +
                    " qubit(s) but gate has " + std::to_string(t) + " target(s)");
  }
  if (const auto* g = std::get_if<GenericCore>(&core_)) {
    if (!is_unitary(g->matrix)) throw GateError("generic core is not unitary");
  }
  if (const auto* r = std::get_if<Rotation>(&core_)) {
    if (!std::isfinite(r->angle)) throw GateError("rotation angle not finite");
  }
  if (!std::isfinite(phase_)) throw GateError("gate phase not finite");
}

CtrlGate CtrlGate::single(NamedGate g, Qubit q) {
  return CtrlGate({q}, {QType::Target}, g);
}

CtrlGate CtrlGate::single(Rotation r, Qubit q) {
  return CtrlGate({q}, {QType::Target}, r);
}

CtrlGate CtrlGate::single(const Matrix& m, Qubit q) {
  return CtrlGate({q}, {QType::Target}, GenericCore{m});
}

CtrlGate CtrlGate::cnot(Qubit control, Qubit target) {
  return CtrlGate({control, target}, {QType::Control1, QType::Target},
                  NamedGate::X);
}

CtrlGate CtrlGate::controlled(std::vector<Qubit> controls,
                              std::vector<QType> control_types, Qubit target,
                              CoreOp core) {
  if (controls.size() != control_types.size()) {
    throw GateError("control list and control types differ in length");
  }
  for (QType t : control_types) {
    if (!is_control(t)) throw GateError("control type must be CONTROL0/1");
  }
  controls.push_back(target);
  control_types.push_back(QType::Target);
  return CtrlGate(std::move(controls), std::move(control_types), std::move(core));
}

std::vector<Qubit> CtrlGate::targets() const {
  std::vector<Qubit> out;
  for (std::size_t k = 0; k < qubits_.size(); ++k) {
    if (qtypes_[k] == QType::Target) out.push_back(qubits_[k]);
  }
  return out;
}

std::vector<Qubit> CtrlGate::controls() const {
  std::vector<Qubit> out;
  for (std::size_t k = 0; k < qubits_.size(); ++k) {
    if (is_control(qtypes_[k])) out.push_back(qubits_[k]);
  }
  return out;
}

std::vector<Qubit> CtrlGate::support() const {
  std::vector<Qubit> out;
  for (std::size_t k = 0; k < qubits_.size(); ++k) {
    if (qtypes_[k] != QType::Idler) out.push_back(qubits_[k]);
  }
  return out;
}

std::size_t CtrlGate::control_count() const {
  return static_cast<std::size_t>(
      std::count_if(qtypes_.begin(), qtypes_.end(), is_control));
}

std::optional<QType> CtrlGate::role_of(const Qubit& q) const {
  for (std::size_t k = 0; k < qubits_.size(); ++k) {
    if (qubits_[k].id == q.id) return qtypes_[k];
  }
  return std::nullopt;
}

bool CtrlGate::is_cnot() const {
  const auto* n = std::get_if<NamedGate>(&core_);
  if (!n || *n != NamedGate::X) return false;
  std::size_t c1 = 0;
  for (QType t : qtypes_) {
    if (t == QType::Control0) return false;
    if (t == QType::Control1) ++c1;
  }
  return c1 == 1;
}

bool operator==(const CtrlGate& a, const CtrlGate& b) {
  if (a.qubits_ != b.qubits_ || a.qtypes_ != b.qtypes_) return false;
  if (a.phase_ != b.phase_ && !(std::isnan(a.phase_) && std::isnan(b.phase_))) {
    return false;
  }
  if (a.core_.index() != b.core_.index()) return false;
  if (const auto* ga = std::get_if<GenericCore>(&a.core_)) {
    const auto& gb = std::get<GenericCore>(b.core_);
    if (ga->matrix.rows() != gb.matrix.rows()) return false;
    for (Index i = 0; i < ga->matrix.size(); ++i) {
      const Complex x = ga->matrix.data()[i];
      const Complex y = gb.matrix.data()[i];
      if (x.real() != y.real() || x.imag() != y.imag()) return false;
    }
    return true;
  }
  if (const auto* ra = std::get_if<Rotation>(&a.core_)) {
    return *ra == std::get<Rotation>(b.core_);
  }
  return std::get<NamedGate>(a.core_) == std::get<NamedGate>(b.core_);
}

std::string CtrlGate::describe() const {
  std::ostringstream os;
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, NamedGate>) {
          os << named_gate_name(c);
        } else if constexpr (std::is_same_v<T, Rotation>) {
          os << 'R' << axis_name(c.axis) << '(' << c.angle << ')';
        } else {
          os << "U" << c.matrix.rows() << 'x' << c.matrix.cols();
        }
      },
      core_);
  os << " [";
  for (std::size_t k = 0; k < qubits_.size(); ++k) {
    if (k) os << ", ";
    os << 'q' << qubits_[k].id << ':' << qtype_name(qtypes_[k]);
  }
  os << ']';
  return os.str();
}

// --- dense kernels -------------------------------------------------------------

Matrix gate_matrix(const CtrlGate& g, std::span<const Qubit> space) {
  const std::size_t m = space.size();
  const auto pos = positions_in(g, space);
  const Matrix core = core_matrix(g.core());
  std::vector<std::size_t> tpos;
  std::vector<std::pair<std::size_t, unsigned>> ctrl;
  for (std::size_t k = 0; k < pos.size(); ++k) {
    switch (g.qtypes()[k]) {
      case QType::Target:
        tpos.push_back(pos[k]);
        break;
      case QType::Control0:
        ctrl.emplace_back(pos[k], 0U);
        break;
      case QType::Control1:
        ctrl.emplace_back(pos[k], 1U);
        break;
      case QType::Idler:
        break;
    }
  }
  auto bit = [m](std::size_t x, std::size_t p) {
    return static_cast<unsigned>((x >> (m - 1 - p)) & 1U);
  };
  const std::size_t n = std::size_t{1} << m;
  const std::size_t t = tpos.size();
  Matrix out = Matrix::Zero(static_cast<Index>(n), static_cast<Index>(n));
  for (std::size_t x = 0; x < n; ++x) {
    bool active = true;
    for (auto [p, v] : ctrl) active = active && bit(x, p) == v;
    if (!active) {
      out(static_cast<Index>(x), static_cast<Index>(x)) = 1.0;
      continue;
    }
    std::size_t tin = 0;
    std::size_t base = x;
    for (std::size_t k = 0; k < t; ++k) {
      tin = (tin << 1) | bit(x, tpos[k]);
      base &= ~(std::size_t{1} << (m - 1 - tpos[k]));
    }
    for (std::size_t tout = 0; tout < (std::size_t{1} << t); ++tout) {
      std::size_t y = base;
      for (std::size_t k = 0; k < t; ++k) {
        if ((tout >> (t - 1 - k)) & 1U) y |= std::size_t{1} << (m - 1 - tpos[k]);
      }
      out(static_cast<Index>(y), static_cast<Index>(x)) +=
          core(static_cast<Index>(tout), static_cast<Index>(tin));
    }
  }
  if (g.phase() != 0.0) out *= std::polar(1.0, g.phase());
  return out;
}

void apply_gate(Matrix& m, const CtrlGate& g, std::span<const Qubit> space) {
  const auto n = std::size_t{1} << space.size();
  if (static_cast<std::size_t>(m.rows()) != n) {
    throw GateError("apply_gate: matrix rows do not match the space");
  }
  const Masks masks = build_masks(g, space);
  const Matrix core = core_matrix(g.core());
  const auto dim = static_cast<Index>(masks.target_offsets.size());
  Matrix gathered(dim, m.cols());
  for (std::size_t base = 0; base < n; ++base) {
    if ((base & masks.target_mask) != 0) continue;
    if ((base & masks.control_mask) != masks.control_value) continue;
    for (Index j = 0; j < dim; ++j) {
      gathered.row(j) = m.row(static_cast<Index>(base | masks.target_offsets[j]));
    }
    const Matrix updated = core * gathered;
    for (Index i = 0; i < dim; ++i) {
      m.row(static_cast<Index>(base | masks.target_offsets[i])) = updated.row(i);
    }
  }
  if (g.phase() != 0.0) m *= std::polar(1.0, g.phase());
}

Matrix circuit_matrix(std::span<const CtrlGate> gates,
                      std::span<const Qubit> space) {
  Matrix m = identity_matrix(std::size_t{1} << space.size());
  for (const CtrlGate& g : gates) apply_gate(m, g, space);
  return m;
}

std::vector<Qubit> sorted_qubits(std::vector<Qubit> qubits) {
  std::sort(qubits.begin(), qubits.end());
  qubits.erase(std::unique(qubits.begin(), qubits.end(),
                           [](const Qubit& a, const Qubit& b) { return a.id == b.id; }),
               qubits.end());
  return qubits;
}

std::vector<Qubit> union_space(std::span<const CtrlGate> gates) {
  std::vector<Qubit> all;
  for (const CtrlGate& g : gates) {
    all.insert(all.end(), g.qubits().begin(), g.qubits().end());
  }
  return sorted_qubits(std::move(all));
}

// --- algebra -------------------------------------------------------------------

CtrlGate matmul(const CtrlGate& a, const CtrlGate& b) {
  const double phase = a.phase() + b.phase();
  if (same_signature(a, b)) {
    const auto* ra = std::get_if<Rotation>(&a.core());
    const auto* rb = std::get_if<Rotation>(&b.core());
    if (ra && rb && ra->axis == rb->axis) {
      return CtrlGate(a.qubits(), a.qtypes(),
                      Rotation{ra->axis, ra->angle + rb->angle}, phase);
    }
    const Matrix product = core_matrix(a.core()) * core_matrix(b.core());
    return CtrlGate(a.qubits(), a.qtypes(), core_from_matrix(product), phase);
  }
  const std::array<CtrlGate, 2> pair = {a, b};
  const auto space = union_space(pair);
  const Matrix product =
      gate_matrix(without_phase(a), space) * gate_matrix(without_phase(b), space);
  CtrlGate out = convert(UnitaryM::deflate(product), space);
  out.set_phase(phase);
  return out;
}

CtrlGate expand(const CtrlGate& g, std::span<const Qubit> extra) {
  check_unique_ids(extra, "expand");
  std::vector<Qubit> qubits = g.qubits();
  std::vector<QType> qtypes = g.qtypes();
  for (const Qubit& q : extra) {
    if (g.role_of(q)) {
      throw GateError("expand: qubit q" + std::to_string(q.id) +
                      " already belongs to the gate");
    }
    qubits.push_back(q);
    qtypes.push_back(QType::Idler);
  }
  return CtrlGate(std::move(qubits), std::move(qtypes), g.core(), g.phase());
}

CtrlGate trace(const CtrlGate& g, std::span<const Qubit> removed) {
  check_unique_ids(removed, "trace");
  bool structural = true;
  bool inactive = false;
  for (const Qubit& q : removed) {
    const auto role = g.role_of(q);
    if (!role) {
      throw GateError("trace: qubit q" + std::to_string(q.id) +
                      " is not part of the gate");
    }
    if (*role == QType::Target) structural = false;
    if (*role == QType::Control1) inactive = true;
  }
  auto is_removed = [&](const Qubit& q) {
    return std::any_of(removed.begin(), removed.end(),
                       [&](const Qubit& r) { return r.id == q.id; });
  };
  std::vector<Qubit> remaining;
  std::vector<QType> remaining_types;
  for (std::size_t k = 0; k < g.qubits().size(); ++k) {
    if (!is_removed(g.qubits()[k])) {
      remaining.push_back(g.qubits()[k]);
      remaining_types.push_back(g.qtypes()[k]);
    }
  }

  if (structural) {
    if (remaining.empty()) throw GateError("trace: no qubits remain");
    if (inactive) {
      // A CONTROL1 qubit pinned at |0⟩ switches the gate off.
      CtrlGate id = convert(UnitaryM::identity(std::size_t{1} << remaining.size()),
                            remaining);
      id.set_phase(g.phase());
      return id;
    }
    return CtrlGate(std::move(remaining), std::move(remaining_types), g.core(),
                    g.phase());
  }

  const auto space = sorted_qubits(g.qubits());
  const Matrix m = gate_matrix(without_phase(g), space);
  const TracedBlock tb = trace_out(m, space, removed);
  if (tb.offender) {
    throw GateError("trace: qubit q" + std::to_string(tb.offender->id) +
                    " does not return to |0> (leakage " +
                    std::to_string(tb.leakage) + ")");
  }
  if (tb.remaining.empty()) throw GateError("trace: no qubits remain");
  CtrlGate out = convert(UnitaryM::deflate(tb.block), tb.remaining);
  out.set_phase(g.phase());
  return out;
}

CtrlGate sorted(const CtrlGate& g) {
  const std::size_t n = g.qubits().size();
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < n; ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return g.qubits()[a].id < g.qubits()[b].id;
  });
  std::vector<Qubit> qubits;
  std::vector<QType> qtypes;
  for (std::size_t k : order) {
    qubits.push_back(g.qubits()[k]);
    qtypes.push_back(g.qtypes()[k]);
  }
  CoreOp core = g.core();
  if (const auto* gen = std::get_if<GenericCore>(&g.core())) {
    // old target rank of the k-th target in the new order
    std::vector<std::size_t> old_rank_of_pos(n, 0);
    std::size_t r = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (g.qtypes()[k] == QType::Target) old_rank_of_pos[k] = r++;
    }
    std::vector<std::size_t> perm;  // new target k -> old target rank
    for (std::size_t k : order) {
      if (g.qtypes()[k] == QType::Target) perm.push_back(old_rank_of_pos[k]);
    }
    const std::size_t t = perm.size();
    bool identity_perm = true;
    for (std::size_t k = 0; k < t; ++k) identity_perm = identity_perm && perm[k] == k;
    if (!identity_perm) {
      const std::size_t dim = std::size_t{1} << t;
      std::vector<std::size_t> old_index(dim, 0);
      for (std::size_t ni = 0; ni < dim; ++ni) {
        std::size_t oi = 0;
        for (std::size_t k = 0; k < t; ++k) {
          if ((ni >> (t - 1 - k)) & 1U) oi |= std::size_t{1} << (t - 1 - perm[k]);
        }
        old_index[ni] = oi;
      }
      Matrix m(static_cast<Index>(dim), static_cast<Index>(dim));
      for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
          m(static_cast<Index>(i), static_cast<Index>(j)) =
              gen->matrix(static_cast<Index>(old_index[i]),
                          static_cast<Index>(old_index[j]));
        }
      }
      core = GenericCore{std::move(m)};
    }
  }
  return CtrlGate(std::move(qubits), std::move(qtypes), std::move(core), g.phase());
}

CtrlGate convert(const UnitaryM& u, std::span<const Qubit> space) {
  if (!is_power_of_two(u.dimension())) {
    throw GateError("convert: dimension " + std::to_string(u.dimension()) +
                    " is not a power of two");
  }
  if (space.empty() || u.dimension() != (std::size_t{1} << space.size())) {
    throw GateError("convert: dimension " + std::to_string(u.dimension()) +
                    " does not match a space of " + std::to_string(space.size()) +
                    " qubit(s)");
  }
  const std::size_t m = space.size();
  std::vector<Qubit> qubits(space.begin(), space.end());
  std::vector<QType> qtypes(m, QType::Idler);
  if (u.is_identity()) {
    qtypes[0] = QType::Target;
    return CtrlGate(std::move(qubits), std::move(qtypes),
                    GenericCore{identity_matrix(2)});
  }

  const auto& idx = u.core_indices();
  auto bit = [m](std::size_t x, std::size_t p) {
    return static_cast<unsigned>((x >> (m - 1 - p)) & 1U);
  };
  std::vector<std::size_t> free_pos;
  for (std::size_t p = 0; p < m; ++p) {
    const unsigned b0 = bit(idx[0], p);
    const bool fixed = std::all_of(idx.begin(), idx.end(),
                                   [&](std::size_t x) { return bit(x, p) == b0; });
    if (!fixed) free_pos.push_back(p);
  }
  if (free_pos.empty()) free_pos.push_back(m - 1);  // single index: pick the LSB
  const std::size_t span_size = std::size_t{1} << free_pos.size();
  const bool complete =
      idx.size() == span_size || (idx.size() == 1 && span_size == 2);

  const Matrix dense = u.inflate();
  if (!complete) {
    std::fill(qtypes.begin(), qtypes.end(), QType::Target);
    return CtrlGate(std::move(qubits), std::move(qtypes), GenericCore{dense});
  }

  std::size_t base = idx[0];
  for (std::size_t p : free_pos) base &= ~(std::size_t{1} << (m - 1 - p));
  for (std::size_t p = 0; p < m; ++p) {
    qtypes[p] = bit(base, p) ? QType::Control1 : QType::Control0;
  }
  for (std::size_t p : free_pos) qtypes[p] = QType::Target;
  const std::size_t t = free_pos.size();
  std::vector<std::size_t> members(span_size);
  for (std::size_t k = 0; k < span_size; ++k) {
    std::size_t x = base;
    for (std::size_t j = 0; j < t; ++j) {
      if ((k >> (t - 1 - j)) & 1U) x |= std::size_t{1} << (m - 1 - free_pos[j]);
    }
    members[k] = x;
  }
  Matrix core(static_cast<Index>(span_size), static_cast<Index>(span_size));
  for (std::size_t r = 0; r < span_size; ++r) {
    for (std::size_t c = 0; c < span_size; ++c) {
      core(static_cast<Index>(r), static_cast<Index>(c)) =
          dense(static_cast<Index>(members[r]), static_cast<Index>(members[c]));
    }
  }
  return CtrlGate(std::move(qubits), std::move(qtypes), core_from_matrix(core));
}

CtrlGate herm(const CtrlGate& g) {
  CoreOp core = std::visit(
      [](const auto& c) -> CoreOp {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, NamedGate>) {
          return named_inverse(c);
        } else if constexpr (std::is_same_v<T, Rotation>) {
          return Rotation{c.axis, -c.angle};
        } else {
          return GenericCore{c.matrix.adjoint()};
        }
      },
      g.core());
  return CtrlGate(g.qubits(), g.qtypes(), std::move(core), -g.phase());
}

// --- granularity ---------------------------------------------------------------

GateGrain grain_of(const CtrlGate& g) {
  const std::size_t targets = g.targets().size();
  if (targets >= 2) return GateGrain::MultiTarget;
  const std::size_t controls = g.control_count();
  if (controls == 0) {
    if (const auto* n = std::get_if<NamedGate>(&g.core())) {
      switch (*n) {
        case NamedGate::H:
        case NamedGate::S:
        case NamedGate::T:
          return GateGrain::CliffordT;
        default:
          return GateGrain::UnivGate;
      }
    }
    if (g.is_rotation()) return GateGrain::Principal;
    return GateGrain::CtrlPruned;
  }
  if (controls == 1) {
    return g.is_cnot() ? GateGrain::CliffordT : GateGrain::CtrlPruned;
  }
  return GateGrain::Singlet;
}

GateGrain grain_of(const UnitaryM& u) {
  return u.core_indices().size() <= 2 ? GateGrain::TwoLevel : GateGrain::Unitary;
}

TracedBlock trace_out(const Matrix& m, std::span<const Qubit> space,
                      std::span<const Qubit> removed, double tol) {
  const std::size_t width = space.size();
  const std::size_t n = std::size_t{1} << width;
  if (static_cast<std::size_t>(m.rows()) != n || m.rows() != m.cols()) {
    throw GateError("trace_out: matrix does not match the space");
  }
  std::vector<std::size_t> removed_bits;
  std::size_t rmask = 0;
  for (const Qubit& q : removed) {
    auto it = std::find_if(space.begin(), space.end(),
                           [&](const Qubit& s) { return s.id == q.id; });
    if (it == space.end()) {
      throw GateError("trace_out: qubit q" + std::to_string(q.id) +
                      " not in space");
    }
    const std::size_t b = std::size_t{1} << (width - 1 - static_cast<std::size_t>(it - space.begin()));
    removed_bits.push_back(b);
    rmask |= b;
  }
  TracedBlock out;
  for (const Qubit& q : space) {
    if (std::none_of(removed.begin(), removed.end(),
                     [&](const Qubit& r) { return r.id == q.id; })) {
      out.remaining.push_back(q);
    }
  }
  std::vector<Index> keep;
  for (std::size_t x = 0; x < n; ++x) {
    if ((x & rmask) == 0) keep.push_back(static_cast<Index>(x));
  }
  const auto k = static_cast<Index>(keep.size());
  out.block.resize(k, k);
  for (Index r = 0; r < k; ++r) {
    for (Index c = 0; c < k; ++c) out.block(r, c) = m(keep[r], keep[c]);
  }
  for (Index c : keep) {
    for (std::size_t r = 0; r < n; ++r) {
      if ((r & rmask) == 0) continue;
      const double leak = std::abs(m(static_cast<Index>(r), c));
      if (leak > out.leakage) out.leakage = leak;
      if (leak > tol && !out.offender) {
        for (std::size_t i = 0; i < removed_bits.size(); ++i) {
          if (r & removed_bits[i]) {
            out.offender = removed[i];
            break;
          }
        }
      }
    }
  }
  return out;
}

}  // namespace qcsynth

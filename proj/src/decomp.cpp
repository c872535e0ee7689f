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


#include "qcsynth/decomp.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace qcsynth {

namespace {

using Index = Eigen::Index;
using std::numbers::pi;

// Rotations this small are dropped rather than emitted.
constexpr double kAngleTol = 1e-12;
// Sub-diagonal entries below this are already eliminated.
constexpr double kEliminationTol = 1e-14;

double wrap_angle(double x) {
  x = std::remainder(x, 2 * pi);  // [-π, π]
  if (x <= -pi) x += 2 * pi;
  return x;
}

CoreOp core_of(const Matrix& m) {
  if (auto named = recognize_named(m)) return *named;
  return GenericCore{m};
}

Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

struct RowOp {
  std::size_t r0;
  std::size_t r1;
  Matrix m;  // acts on rows (r0, r1) of the working matrix
};

void apply_rows(Matrix& w, const RowOp& op) {
  const auto r0 = static_cast<Index>(op.r0);
  const auto r1 = static_cast<Index>(op.r1);
  const Eigen::Matrix<Complex, 1, Eigen::Dynamic> a = w.row(r0);
  const Eigen::Matrix<Complex, 1, Eigen::Dynamic> b = w.row(r1);
  w.row(r0) = op.m(0, 0) * a + op.m(0, 1) * b;
  w.row(r1) = op.m(1, 0) * a + op.m(1, 1) * b;
}

bool is_diagonal2(const Matrix& m) {
  return m.rows() == 1 ||
         (std::abs(m(0, 1)) <= kEliminationTol && std::abs(m(1, 0)) <= kEliminationTol);
}

std::size_t bit_position(std::size_t m, std::size_t bit) {
  return m - 1 - static_cast<std::size_t>(std::countr_zero(bit));
}

// Gate on the whole space: `target_pos` is the target, every other qubit a
// control fixed at its bit in `pattern`.
CtrlGate fully_controlled(std::span<const Qubit> space, std::size_t pattern,
                          std::size_t target_pos, CoreOp core) {
  const std::size_t m = space.size();
  std::vector<QType> qtypes(m);
  for (std::size_t p = 0; p < m; ++p) {
    const bool one = (pattern >> (m - 1 - p)) & 1U;
    qtypes[p] = one ? QType::Control1 : QType::Control0;
  }
  qtypes[target_pos] = QType::Target;
  return CtrlGate(std::vector<Qubit>(space.begin(), space.end()), std::move(qtypes),
                  std::move(core));
}

std::vector<CtrlGate> diagonal_gates(const UnitaryM& f, std::span<const Qubit> space) {
  const std::size_t m = space.size();
  const auto& idx = f.core_indices();
  const Matrix& c = f.core();
  std::vector<CtrlGate> out;
  if (idx.size() == 2 && std::popcount(idx[0] ^ idx[1]) == 1) {
    const std::size_t pos = bit_position(m, idx[0] ^ idx[1]);
    out.push_back(fully_controlled(space, idx[0], pos,
                                   core_of(mat2(c(0, 0), 0.0, 0.0, c(1, 1)))));
    return out;
  }
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const Complex p = c(static_cast<Index>(k), static_cast<Index>(k));
    if (p == Complex(1.0, 0.0)) continue;
    const bool low = (idx[k] & 1U) == 0;
    const Matrix core = low ? mat2(p, 0.0, 0.0, 1.0) : mat2(1.0, 0.0, 0.0, p);
    out.push_back(fully_controlled(space, idx[k], m - 1, core_of(core)));
  }
  return out;
}

CoreOp half_core(const CoreOp& core) {
  if (const auto* r = std::get_if<Rotation>(&core)) {
    return Rotation{r->axis, r->angle / 2};
  }
  return core_of(unitary_sqrt(core_matrix(core)));
}

CoreOp inverse_core(const CoreOp& core) {
  return herm(CtrlGate({Qubit::data(0)}, {QType::Target}, core)).core();
}

CtrlGate single_controlled(Qubit c, Qubit t, CoreOp core) {
  return CtrlGate({c, t}, {QType::Control1, QType::Target}, std::move(core));
}

// Two positive controls: c-V(c2), CNOT(c1,c2), c-V†(c2), CNOT(c1,c2), c-V(c1).
void barenco(Qubit c1, Qubit c2, Qubit t, const CoreOp& core,
             std::vector<CtrlGate>& out) {
  const CoreOp v = half_core(core);
  const CoreOp vd = inverse_core(v);
  out.push_back(single_controlled(c2, t, v));
  out.push_back(CtrlGate::cnot(c1, c2));
  out.push_back(single_controlled(c2, t, vd));
  out.push_back(CtrlGate::cnot(c1, c2));
  out.push_back(single_controlled(c1, t, v));
}

}  // namespace

// --- two-level ---------------------------------------------------------------

std::vector<UnitaryM> tl_decompose(const UnitaryM& input) {
  if (input.is_identity()) return {};
  const UnitaryM u = input.trimmed();
  if (u.is_identity()) return {};
  if (u.core_indices().size() <= 2) return {u};

  const auto& idx = u.core_indices();
  const std::size_t k = idx.size();
  Matrix w = u.core();
  std::vector<RowOp> ops;
  for (std::size_t j = 0; j + 2 < k; ++j) {
    const auto jj = static_cast<Index>(j);
    bool mixed = false;
    for (std::size_t i = k - 1; i > j; --i) {
      const Complex b = w(static_cast<Index>(i), jj);
      if (std::abs(b) <= kEliminationTol) continue;
      const Complex a = w(jj, jj);
      const double r = std::hypot(std::abs(a), std::abs(b));
      RowOp op{j, i, mat2(std::conj(a) / r, std::conj(b) / r, b / r, -a / r)};
      apply_rows(w, op);
      ops.push_back(std::move(op));
      mixed = true;
    }
    if (!mixed) {
      const Complex p = w(jj, jj) / std::abs(w(jj, jj));
      if (p != Complex(1.0, 0.0)) {
        RowOp op{j, j + 1, mat2(std::conj(p), 0.0, 0.0, p)};
        apply_rows(w, op);
        ops.push_back(std::move(op));
      }
    }
  }

  std::vector<UnitaryM> factors;
  auto push = [&](std::size_t r0, std::size_t r1, Matrix m) {
    UnitaryM f = UnitaryM(u.dimension(), {idx[r0], idx[r1]}, std::move(m)).trimmed();
    if (!f.is_identity()) factors.push_back(std::move(f));
  };
  const auto last = static_cast<Index>(k - 2);
  push(k - 2, k - 1, w.block(last, last, 2, 2));
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    push(it->r0, it->r1, it->m.adjoint());
  }
  return factors;
}

// --- gray code ---------------------------------------------------------------

std::size_t gray_gate_count(std::size_t i, std::size_t j) {
  return 2 * (static_cast<std::size_t>(std::popcount(i ^ j)) - 1) + 1;
}

std::vector<CtrlGate> gray_decompose(const UnitaryM& f, std::span<const Qubit> space) {
  const std::size_t m = space.size();
  if (m == 0 || f.dimension() != (std::size_t{1} << m)) {
    throw DecompError("gray_decompose: factor dimension " +
                      std::to_string(f.dimension()) + " does not match " +
                      std::to_string(m) + " qubit(s)");
  }
  const auto& idx = f.core_indices();
  if (idx.size() > 2) throw DecompError("gray_decompose: factor is not two-level");
  if (idx.empty()) return {};
  if (is_diagonal2(f.core())) return diagonal_gates(f, space);

  const std::size_t i = idx[0];
  const std::size_t j = idx[1];
  std::vector<std::size_t> flips;
  for (std::size_t diff = i ^ j; diff != 0; diff &= diff - 1) {
    flips.push_back(diff & (~diff + 1));
  }
  std::vector<CtrlGate> ladder;
  std::size_t code = i;
  for (std::size_t s = 0; s + 1 < flips.size(); ++s) {
    ladder.push_back(fully_controlled(space, code, bit_position(m, flips[s]), NamedGate::X));
    code ^= flips[s];
  }
  std::vector<CtrlGate> out = ladder;
  out.push_back(fully_controlled(space, code, bit_position(m, flips.back()),
                                 core_of(f.core())));
  out.insert(out.end(), ladder.rbegin(), ladder.rend());
  return out;
}

// --- control pruning -------------------------------------------------------------

std::vector<CtrlGate> ctrl_decompose(const CtrlGate& g, QDevice& device) {
  const auto targets = g.targets();
  if (targets.size() != 1) {
    throw DecompError("ctrl_decompose: expected a single-target gate, got " +
                      g.describe());
  }
  if (g.control_count() <= 1) return {g};
  const Qubit t = targets[0];

  std::vector<Qubit> ctrls;
  std::vector<CtrlGate> flips;
  for (std::size_t k = 0; k < g.qubits().size(); ++k) {
    if (!is_control(g.qtypes()[k])) continue;
    ctrls.push_back(g.qubits()[k]);
    if (g.qtypes()[k] == QType::Control0) {
      flips.push_back(CtrlGate::single(NamedGate::X, g.qubits()[k]));
    }
  }

  std::vector<CtrlGate> out = flips;
  if (ctrls.size() == 2) {
    barenco(ctrls[0], ctrls[1], t, g.core(), out);
  } else {
    const auto anc = device.borrow_ancilla(ctrls.size() - 1);
    std::vector<CtrlGate> compute;
    barenco(ctrls[0], ctrls[1], anc[0], NamedGate::X, compute);
    for (std::size_t a = 1; a < anc.size(); ++a) {
      barenco(anc[a - 1], ctrls[a + 1], anc[a], NamedGate::X, compute);
    }
    out.insert(out.end(), compute.begin(), compute.end());
    out.push_back(single_controlled(anc.back(), t, g.core()));
    for (auto it = compute.rbegin(); it != compute.rend(); ++it) out.push_back(herm(*it));
    device.release_ancilla(anc);
  }
  out.insert(out.end(), flips.begin(), flips.end());
  out.front().set_phase(out.front().phase() + g.phase());
  return out;
}

// --- Euler -------------------------------------------------------------------------

EulerAngles euler_decompose(const Matrix& u) {
  if (u.rows() != 2 || u.cols() != 2) throw DecompError("euler_decompose: expected 2x2");
  if (!is_unitary(u)) throw DecompError("euler_decompose: matrix is not unitary");
  const Complex det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
  EulerAngles e;
  e.alpha = std::arg(det) / 2;
  const Complex phase = std::polar(1.0, -e.alpha);
  const Complex a = u(0, 0) * phase;
  const Complex b = u(1, 0) * phase;
  e.gamma = 2 * std::atan2(std::abs(b), std::abs(a));
  if (std::abs(b) < kTolIdentity) {
    e.delta = 0.0;
    e.beta = -2 * std::arg(a);
  } else if (std::abs(a) < kTolIdentity) {
    e.delta = 0.0;
    e.beta = 2 * std::arg(b);
  } else {
    e.beta = std::arg(b) - std::arg(a);
    e.delta = -std::arg(a) - std::arg(b);
  }
  // A 2π shift of β or δ negates the rotation; absorb it into α.
  const double beta = wrap_angle(e.beta);
  const double delta = wrap_angle(e.delta);
  const long long turns = std::llround((beta - e.beta) / (2 * pi)) +
                          std::llround((delta - e.delta) / (2 * pi));
  e.beta = beta;
  e.delta = delta;
  if (turns % 2 != 0) e.alpha += pi;
  e.alpha = wrap_angle(e.alpha);
  return e;
}

Matrix euler_matrix(const EulerAngles& a) {
  return std::polar(1.0, a.alpha) * rotation_matrix(Axis::Z, a.beta) *
         rotation_matrix(Axis::Y, a.gamma) * rotation_matrix(Axis::Z, a.delta);
}

Matrix unitary_sqrt(const Matrix& u) {
  if (u.rows() != 2 || u.cols() != 2) throw DecompError("unitary_sqrt: expected 2x2");
  const Complex det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
  Complex root_phase = std::sqrt(det);  // u = root_phase · v, det v = 1
  Matrix v = u / root_phase;
  if (v.trace().real() < 0) {
    v = -v;
    root_phase = -root_phase;
  }
  // v = cos(θ/2)·I − i·sin(θ/2)·n·σ with θ/2 ∈ [0, π/2]
  const double c = std::clamp(v.trace().real() / 2, -1.0, 1.0);
  const double half = std::acos(c);
  const double c4 = std::cos(half / 2);
  const Matrix id = identity_matrix(2);
  const Matrix root_v = c4 * id + (v - c * id) / (2 * c4);
  return std::sqrt(root_phase) * root_v;
}

std::vector<CtrlGate> euler_gates(const CtrlGate& g) {
  const auto targets = g.targets();
  if (targets.size() != 1 || g.control_count() > 1) {
    throw DecompError("euler_decompose: expected at most one control, got " +
                      g.describe());
  }
  const Qubit t = targets[0];
  std::vector<CtrlGate> out;
  auto rot = [&](Axis axis, double angle, Qubit q) {
    if (std::abs(angle) > kAngleTol) out.push_back(CtrlGate::single(Rotation{axis, angle}, q));
  };

  if (g.control_count() == 0) {
    const EulerAngles e = euler_decompose(core_matrix(g.core()));
    rot(Axis::Z, e.delta, t);
    rot(Axis::Y, e.gamma, t);
    rot(Axis::Z, e.beta, t);
    if (!out.empty()) out.front().set_phase(g.phase() + e.alpha);
    return out;
  }

  const Qubit c = g.controls()[0];
  const bool negated = g.role_of(c) == QType::Control0;
  if (negated) out.push_back(CtrlGate::single(NamedGate::X, c));
  const auto* named = std::get_if<NamedGate>(&g.core());
  const auto* generic = std::get_if<GenericCore>(&g.core());
  if ((named && *named == NamedGate::X) ||
      (generic && recognize_named(generic->matrix) == NamedGate::X)) {
    out.push_back(CtrlGate::cnot(c, t));
  } else {
    // U = e^{iα}·A·X·B·X·C with A·B·C = I
    const EulerAngles e = euler_decompose(core_matrix(g.core()));
    rot(Axis::Z, (e.delta - e.beta) / 2, t);
    out.push_back(CtrlGate::cnot(c, t));
    rot(Axis::Z, -(e.delta + e.beta) / 2, t);
    rot(Axis::Y, -e.gamma / 2, t);
    out.push_back(CtrlGate::cnot(c, t));
    rot(Axis::Y, e.gamma / 2, t);
    rot(Axis::Z, e.beta, t);
    if (std::abs(e.alpha) > kAngleTol) {
      CtrlGate ph = CtrlGate::single(Rotation{Axis::Z, e.alpha}, c);
      ph.set_phase(e.alpha / 2);
      out.push_back(std::move(ph));
    }
  }
  if (negated) out.push_back(CtrlGate::single(NamedGate::X, c));
  out.front().set_phase(out.front().phase() + g.phase());
  return out;
}

// --- Clifford+T ----------------------------------------------------------------------

CliffordTRewrite cliffordt_decompose(const CtrlGate& g) {
  if (g.is_rotation()) {
    throw DecompError("cliffordt_decompose: rotation " + g.describe() +
                      " must be approximated first");
  }
  const GateGrain grain = grain_of(g);
  if (grain != GateGrain::UnivGate && grain != GateGrain::CliffordT) {
    throw DecompError("cliffordt_decompose: " + g.describe() + " is not a universal gate");
  }
  CliffordTRewrite rw;
  if (grain == GateGrain::CliffordT) {
    rw.gates.push_back(g);
    return rw;
  }
  using N = NamedGate;
  std::vector<N> letters;
  switch (std::get<NamedGate>(g.core())) {
    case N::X:
      letters = {N::H, N::S, N::S, N::H};
      break;
    case N::Y:
      letters = {N::S, N::S, N::H, N::S, N::S, N::H};
      rw.phase = pi / 2;
      break;
    case N::Z:
      letters = {N::S, N::S};
      break;
    case N::SD:
      letters = {N::S, N::S, N::S};
      break;
    case N::TD:
      letters.assign(7, N::T);
      break;
    default:
      throw DecompError("cliffordt_decompose: no rewrite for " + g.describe());
  }
  const Qubit q = g.targets()[0];
  for (N l : letters) rw.gates.push_back(CtrlGate::single(l, q));
  rw.gates.front().set_phase(g.phase() + rw.phase);
  return rw;
}

}  // namespace qcsynth

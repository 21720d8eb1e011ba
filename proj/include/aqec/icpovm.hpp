// Copyright 2026 The aqec Authors
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

// Informationally complete POVMs and their canonical dual frames.
//
// A POVM {P_i} is informationally complete when its elements span the operator
// space; any such POVM admits Hermitian duals {D_i} with
//
//     X = sum_i Tr[X P_i] D_i   for every operator X.
//
// The canonical duals are D_i = S^+(P_i), where S(X) = sum_i Tr[X P_i] P_i is
// the frame superoperator. The constant K = max_i |D_i|_1^2 controls how much
// trace distance is lost when conditional states are recombined with duals.

#pragma once

#include <set>

#include "aqec/channel.hpp"
#include "aqec/qalg.hpp"

namespace aqec {

class InvalidPovm : public Error {
 public:
  using Error::Error;
};

namespace tol {
inline constexpr double kPovmPsd = 1e-10;
inline constexpr double kPovmSum = 1e-9;
inline constexpr double kGramRank = 1e-10;
inline constexpr double kFrameCutoff = 1e-10;
inline constexpr double kDesignMoment = 1e-9;
}  // namespace tol

class Povm {
 public:
  explicit Povm(std::vector<Matrix> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) throw InvalidPovm("Povm: no elements");
    const auto d = elements_.front().rows();
    Matrix sum = Matrix::Zero(d, d);
    for (Matrix& p : elements_) {
      if (p.rows() != d || p.cols() != d) throw InvalidPovm("Povm: elements differ in shape");
      if (hermiticity_error(p) > tol::kHermitian) throw InvalidPovm("Povm: element not Hermitian");
      p = hermitian_part(p);
      if (eigvalsh(p).minCoeff() < -tol::kPovmPsd) throw InvalidPovm("Povm: element not positive semidefinite");
      sum += p;
    }
    if (max_abs(sum - Matrix::Identity(d, d)) > tol::kPovmSum) throw InvalidPovm("Povm: elements do not sum to I");
  }

  int dim() const { return static_cast<int>(elements_.front().rows()); }
  std::size_t size() const { return elements_.size(); }
  const std::vector<Matrix>& elements() const { return elements_; }
  const Matrix& operator[](std::size_t i) const { return elements_.at(i); }

  /// Outcome probabilities Tr[rho P_i].
  std::vector<double> probabilities(const Matrix& rho) const {
    std::vector<double> p;
    p.reserve(elements_.size());
    for (const Matrix& e : elements_) p.push_back((rho * e).trace().real());
    return p;
  }

 private:
  std::vector<Matrix> elements_;
};

struct DualFrame {
  std::vector<Matrix> duals;
  double k_constant = 0.0;
};

struct IcReport {
  bool complete = false;
  int rank = 0;
  int required = 0;  // d^2
};

namespace detail {

inline Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

inline Matrix unvec(const Vector& v, int d) { return Eigen::Map<const Matrix>(v.data(), d, d); }

}  // namespace detail

/// Numerical rank of the Gram matrix Tr[P_i P_j].
inline IcReport is_informationally_complete(const Povm& povm) {
  const auto n = static_cast<Eigen::Index>(povm.size());
  Matrix gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) gram(i, j) = (povm[static_cast<std::size_t>(i)] * povm[static_cast<std::size_t>(j)]).trace();
  }
  const RealVector ev = eigvalsh(gram);
  IcReport r;
  r.rank = static_cast<int>((ev.array() > tol::kGramRank).count());
  r.required = povm.dim() * povm.dim();
  r.complete = r.rank == r.required;
  return r;
}

/// Max trace norm squared over the duals.
inline double k_constant(std::span<const Matrix> duals) {
  double k = 0.0;
  for (const Matrix& d : duals) k = std::max(k, trace_norm(d));
  return k * k;
}

inline double k_constant(const DualFrame& frame) { return k_constant(frame.duals); }

/// Canonical duals from the pseudo-inverse of the d^2 x d^2 frame superoperator.
inline DualFrame canonical_dual(const Povm& povm) {
  const IcReport ic = is_informationally_complete(povm);
  if (!ic.complete) throw InvalidPovm("canonical_dual: POVM is not informationally complete");
  const int d = povm.dim();
  const Eigen::Index d2 = static_cast<Eigen::Index>(d) * d;
  // S = sum_i |P_i>><<P_i|, since Tr[X P_i] = <<P_i|X>> for Hermitian P_i.
  Matrix frame = Matrix::Zero(d2, d2);
  for (const Matrix& p : povm.elements()) {
    const Vector v = detail::vec(p);
    frame += v * v.adjoint();
  }
  const Spectrum s = eigh(frame);
  RealVector inv = s.values.unaryExpr([](double x) { return x > tol::kFrameCutoff ? 1.0 / x : 0.0; });
  const Matrix pinv = s.vectors * inv.cast<Complex>().asDiagonal() * s.vectors.adjoint();
  DualFrame out;
  out.duals.reserve(povm.size());
  for (const Matrix& p : povm.elements()) out.duals.push_back(hermitian_part(detail::unvec(pinv * detail::vec(p), d)));
  out.k_constant = k_constant(out.duals);
  return out;
}

/// sum_i Tr[X P_i] D_i.
inline Matrix reconstruct(const Matrix& x, const Povm& povm, std::span<const Matrix> duals) {
  if (duals.size() != povm.size()) throw DimensionError("reconstruct: POVM and dual lengths differ");
  if (x.rows() != povm.dim() || x.cols() != povm.dim()) throw DimensionError("reconstruct: operator dimension mismatch");
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (std::size_t i = 0; i < povm.size(); ++i) out += (x * povm[i]).trace() * duals[i];
  return out;
}

inline Matrix reconstruct(const Matrix& x, const Povm& povm, const DualFrame& frame) {
  return reconstruct(x, povm, frame.duals);
}

// ---------------------------------------------------------------------------
// Frame catalogue

/// Qubit tetrahedron SIC {(I + n_i.sigma)/4}, Bloch vectors at the vertices of a regular tetrahedron.
inline Povm qubit_sic() {
  const double s = 1.0 / std::sqrt(3.0);
  const double n[4][3] = {{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
  std::vector<Matrix> els;
  for (const auto& v : n) {
    els.push_back((identity(2) + v[0] * paulis::x() + v[1] * paulis::y() + v[2] * paulis::z()) / 4.0);
  }
  return Povm(std::move(els));
}

/// Qutrit SIC: Weyl-Heisenberg orbit of the Hesse fiducial (0, 1, -1)/sqrt(2),
/// elements |psi_ab><psi_ab| / 3. Overlaps |<psi|psi'>|^2 = 1/4 = 1/(d+1).
inline Povm qutrit_sic() {
  Vector fid(3);
  fid << 0.0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  std::vector<Matrix> els;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) els.push_back(projector(weyl(3, a, b) * fid) / 3.0);
  }
  return Povm(std::move(els));
}

/// Eigenprojectors of X, Y, Z, each weighted 1/3.
inline Povm qubit_mub_povm() {
  std::vector<Matrix> els;
  for (const Matrix& pauli : {paulis::x(), paulis::y(), paulis::z()}) {
    els.push_back((identity(2) + pauli) / 6.0);
    els.push_back((identity(2) - pauli) / 6.0);
  }
  return Povm(std::move(els));
}

/// Elementwise tensor product {P_i (x) Q_j}.
inline Povm tensor(const Povm& a, const Povm& b) {
  std::vector<Matrix> els;
  els.reserve(a.size() * b.size());
  for (const Matrix& p : a.elements()) {
    for (const Matrix& q : b.elements()) els.push_back(kron(p, q));
  }
  return Povm(std::move(els));
}

inline Povm trivial_povm() { return Povm({identity(1)}); }

/// The IC frame used on an environment of dimension d: SICs for d = 2, 3 and
/// tensor products of them for d = 2^a 3^b. Other dimensions are unsupported.
inline Povm embedded_frame(int d) {
  if (d < 1) throw InvalidPovm("embedded_frame: dimension must be positive");
  if (d == 1) return trivial_povm();
  std::optional<Povm> frame;
  int rest = d;
  for (const int f : {3, 2}) {
    while (rest % f == 0) {
      const Povm factor = f == 2 ? qubit_sic() : qutrit_sic();
      frame = frame ? tensor(*frame, factor) : factor;
      rest /= f;
    }
  }
  if (rest != 1) throw InvalidPovm("embedded_frame: no embedded frame for this dimension");
  return *frame;
}

// ---------------------------------------------------------------------------
// Unitary 2-designs and covariant POVMs

/// Single-qubit Clifford group modulo global phase (24 elements), generated from H and S.
inline std::vector<Matrix> qubit_clifford_group() {
  Matrix h(2, 2), s(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  s << 1, 0, 0, Complex(0, 1);
  auto normalize = [](Matrix u) {
    Eigen::Index k = 0;
    for (; k < u.size(); ++k) {
      if (std::abs(u(k)) > 1e-9) break;
    }
    u *= std::conj(u(k)) / std::abs(u(k));
    return u;
  };
  std::vector<Matrix> group{identity(2)};
  for (std::size_t i = 0; i < group.size(); ++i) {
    for (const Matrix& g : {h, s}) {
      const Matrix cand = normalize(g * group[i]);
      const bool known = std::any_of(group.begin(), group.end(),
                                     [&](const Matrix& u) { return max_abs(u - cand) < 1e-9; });
      if (!known) group.push_back(cand);
    }
  }
  return group;
}

/// Frame potential (1/N^2) sum_ij |Tr U_i^dag U_j|^4; equals 2 exactly for unitary 2-designs (d >= 2).
inline double frame_potential(std::span<const Matrix> design) {
  double acc = 0.0;
  for (const Matrix& u : design) {
    for (const Matrix& v : design) acc += std::pow(std::abs((u.adjoint() * v).trace()), 4);
  }
  const double n = static_cast<double>(design.size());
  return acc / (n * n);
}

inline bool is_unitary_2design(std::span<const Matrix> design) {
  if (design.empty()) return false;
  const auto d = design.front().rows();
  for (const Matrix& u : design) {
    if (u.rows() != d || u.cols() != d) return false;
    if (max_abs(u.adjoint() * u - Matrix::Identity(d, d)) > 1e-9) return false;
  }
  return d >= 2 && std::abs(frame_potential(design) - 2.0) <= tol::kDesignMoment;
}

/// Orbit POVM {(d/N) U_g phi U_g^dag} of a pure fiducial under an exact unitary 2-design.
/// Its canonical dual element is (d+1) U_g phi U_g^dag - I, with trace norm 2d - 1.
inline Povm covariant_design_povm(std::span<const Matrix> design, const PureState& fiducial) {
  if (!is_unitary_2design(design)) throw InvalidPovm("covariant_design_povm: set is not a unitary 2-design");
  const int d = static_cast<int>(design.front().rows());
  if (fiducial.dim() != d) throw DimensionError("covariant_design_povm: fiducial dimension mismatch");
  const Matrix phi = projector(fiducial.vector());
  const double w = static_cast<double>(d) / static_cast<double>(design.size());
  std::vector<Matrix> els;
  els.reserve(design.size());
  for (const Matrix& u : design) els.push_back(w * u * phi * u.adjoint());
  return Povm(std::move(els));
}

/// Number of distinct elements (up to 1e-9) in a POVM.
inline std::size_t distinct_elements(const Povm& povm) {
  std::vector<Matrix> seen;
  for (const Matrix& p : povm.elements()) {
    if (std::none_of(seen.begin(), seen.end(), [&](const Matrix& q) { return max_abs(p - q) < 1e-9; })) {
      seen.push_back(p);
    }
  }
  return seen.size();
}

}  // namespace aqec

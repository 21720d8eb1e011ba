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

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace aqec {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

namespace tol {
/// Eigenvalues at or below this are treated as zero for entropies and supports.
inline constexpr double kEigenCutoff = 1e-12;
/// Largest negative eigenvalue tolerated (and clamped) in a state.
inline constexpr double kNegativity = 1e-10;
inline constexpr double kHermitian = 1e-10;
inline constexpr double kTrace = 1e-10;
inline constexpr double kNorm = 1e-10;
/// Cutoff shared by pseudo-inverses (frame operator, Petz map).
inline constexpr double kPseudoInverse = 1e-10;
}  // namespace tol

// ---------------------------------------------------------------------------
// Layouts

/// Ordered subsystem dimensions of a tensor-product space. The first factor is
/// the most significant digit of a flat index.
class TensorLayout {
 public:
  TensorLayout() = default;
  explicit TensorLayout(std::vector<int> local_dims) : dims_(std::move(local_dims)) {
    if (dims_.empty()) throw DimensionError("TensorLayout: no factors");
    for (int d : dims_) {
      if (d < 1) throw DimensionError("TensorLayout: local dimension must be >= 1");
    }
  }
  TensorLayout(std::initializer_list<int> local_dims)
      : TensorLayout(std::vector<int>(local_dims)) {}

  static TensorLayout single(int d) { return TensorLayout({d}); }

  std::size_t factors() const { return dims_.size(); }
  int operator[](std::size_t i) const { return dims_.at(i); }
  const std::vector<int>& dims() const { return dims_; }

  int total() const {
    return std::accumulate(dims_.begin(), dims_.end(), 1, std::multiplies<>());
  }

  /// Layout of the selected factors, in the given order.
  TensorLayout select(std::span<const std::size_t> which) const {
    std::vector<int> out;
    out.reserve(which.size());
    for (std::size_t i : which) out.push_back(dims_.at(i));
    return TensorLayout(std::move(out));
  }

  bool operator==(const TensorLayout&) const = default;

 private:
  std::vector<int> dims_{1};
};

/// A bipartition of a layout: `left` factors form A, the remaining ones B.
struct Cut {
  std::vector<std::size_t> left;

  /// The usual cut of a two-factor layout.
  static Cut first() { return Cut{{0}}; }

  std::vector<std::size_t> right(const TensorLayout& layout) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < layout.factors(); ++i) {
      if (std::find(left.begin(), left.end(), i) == left.end()) out.push_back(i);
    }
    return out;
  }

  void check(const TensorLayout& layout) const {
    if (left.empty() || left.size() >= layout.factors()) {
      throw DimensionError("Cut: both sides must be nonempty");
    }
    std::vector<bool> seen(layout.factors(), false);
    for (std::size_t i : left) {
      if (i >= layout.factors() || seen[i]) throw DimensionError("Cut: invalid factor index");
      seen[i] = true;
    }
  }
};

// ---------------------------------------------------------------------------
// Small helpers

inline Matrix dagger(const Matrix& m) { return m.adjoint(); }

inline Matrix identity(int d) { return Matrix::Identity(d, d); }

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline Matrix projector(const Vector& v) { return v * v.adjoint(); }

inline Vector basis_vector(int d, int k) {
  Vector v = Vector::Zero(d);
  v(k) = 1.0;
  return v;
}

inline double hermiticity_error(const Matrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Spectral decomposition of a Hermitian matrix (ascending eigenvalues).
struct Spectrum {
  RealVector values;
  Matrix vectors;
};

inline Spectrum eigh(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(h));
  if (solver.info() != Eigen::Success) throw Error("eigh: eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

inline RealVector eigvalsh(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(h), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error("eigvalsh: eigensolver failed");
  return solver.eigenvalues();
}

/// Applies f to the eigenvalues of a Hermitian matrix.
template <typename F>
Matrix hermitian_function(const Matrix& h, F&& f) {
  Spectrum s = eigh(h);
  RealVector fv = s.values.unaryExpr(f);
  return s.vectors * fv.cast<Complex>().asDiagonal() * s.vectors.adjoint();
}

/// Square root of a PSD matrix; small negative eigenvalues are clamped.
inline Matrix psd_sqrt(const Matrix& h) {
  return hermitian_function(h, [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

/// Moore-Penrose inverse square root on the support of a PSD matrix.
inline Matrix psd_inverse_sqrt(const Matrix& h, double cutoff = tol::kPseudoInverse) {
  return hermitian_function(h, [cutoff](double x) { return x > cutoff ? 1.0 / std::sqrt(x) : 0.0; });
}

/// Rotates the global phase of v so its largest-magnitude entry is real positive.
inline Vector canonical_phase(Vector v) {
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  if (std::abs(v(k)) > 0) v *= std::conj(v(k)) / std::abs(v(k));
  return v;
}

/// Binary Shannon entropy in bits.
inline double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

/// Shannon entropy in bits of a probability vector; zero entries contribute 0.
inline double shannon_entropy(std::span<const double> probs) {
  double s = 0.0;
  for (double p : probs) {
    if (p > tol::kEigenCutoff) s -= p * std::log2(p);
  }
  return s;
}

// ---------------------------------------------------------------------------
// States

/// Hermitian, positive semidefinite, unit-trace operator with a tensor layout.
class DensityMatrix {
 public:
  DensityMatrix(Matrix m, TensorLayout layout) : matrix_(std::move(m)), layout_(std::move(layout)) {
    validate();
  }
  explicit DensityMatrix(const Matrix& m)
      : DensityMatrix(m, TensorLayout::single(static_cast<int>(m.rows()))) {}

  static DensityMatrix maximally_mixed(const TensorLayout& layout) {
    const int d = layout.total();
    return DensityMatrix(identity(d) / static_cast<double>(d), layout);
  }
  static DensityMatrix maximally_mixed(int d) { return maximally_mixed(TensorLayout::single(d)); }

  static DensityMatrix diagonal(std::span<const double> probs) {
    RealVector p = Eigen::Map<const RealVector>(probs.data(), static_cast<Eigen::Index>(probs.size()));
    return DensityMatrix(p.cast<Complex>().asDiagonal().toDenseMatrix(),
                         TensorLayout::single(static_cast<int>(probs.size())));
  }

  const Matrix& matrix() const { return matrix_; }
  const TensorLayout& layout() const { return layout_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }

  DensityMatrix relabel(TensorLayout layout) const { return DensityMatrix(matrix_, std::move(layout)); }

 private:
  void validate() {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
      throw DimensionError("DensityMatrix: matrix must be square and nonempty");
    }
    if (layout_.total() != matrix_.rows()) {
      throw DimensionError("DensityMatrix: layout does not match matrix dimension");
    }
    if (hermiticity_error(matrix_) > tol::kHermitian) throw InvalidState("DensityMatrix: not Hermitian");
    matrix_ = hermitian_part(matrix_);
    if (std::abs(matrix_.trace() - 1.0) > tol::kTrace) throw InvalidState("DensityMatrix: trace is not 1");
    if (eigvalsh(matrix_).minCoeff() < -tol::kNegativity) {
      throw InvalidState("DensityMatrix: not positive semidefinite");
    }
  }

  Matrix matrix_;
  TensorLayout layout_;
};

/// Unit vector with a tensor layout.
class PureState {
 public:
  PureState(Vector v, TensorLayout layout) : vector_(std::move(v)), layout_(std::move(layout)) {
    if (layout_.total() != vector_.size()) throw DimensionError("PureState: layout does not match vector");
    if (std::abs(vector_.norm() - 1.0) > tol::kNorm) throw InvalidState("PureState: vector is not normalized");
  }
  explicit PureState(Vector v) : PureState(v, TensorLayout::single(static_cast<int>(v.size()))) {}

  const Vector& vector() const { return vector_; }
  const TensorLayout& layout() const { return layout_; }
  int dim() const { return static_cast<int>(vector_.size()); }

  DensityMatrix density() const { return DensityMatrix(projector(vector_), layout_); }

 private:
  Vector vector_;
  TensorLayout layout_;
};

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  std::vector<int> dims = a.layout().dims();
  dims.insert(dims.end(), b.layout().dims().begin(), b.layout().dims().end());
  return DensityMatrix(kron(a.matrix(), b.matrix()), TensorLayout(std::move(dims)));
}

// ---------------------------------------------------------------------------
// Index plumbing for multipartite operators

namespace detail {

inline std::vector<int> digits(int index, const std::vector<int>& dims) {
  std::vector<int> out(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    out[k] = index % dims[k];
    index /= dims[k];
  }
  return out;
}

inline int compose(const std::vector<int>& digits, const std::vector<int>& dims,
                   std::span<const std::size_t> which) {
  int idx = 0;
  for (std::size_t k : which) idx = idx * dims[k] + digits[k];
  return idx;
}

/// For each flat index, the flat index in the permuted layout.
inline std::vector<int> permutation_map(const TensorLayout& layout, std::span<const std::size_t> order) {
  const int n = layout.total();
  std::vector<int> map(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) map[static_cast<std::size_t>(i)] = compose(digits(i, layout.dims()), layout.dims(), order);
  return map;
}

inline void check_order(const TensorLayout& layout, std::span<const std::size_t> order) {
  if (order.size() != layout.factors()) throw DimensionError("permute: order must name every factor");
  std::vector<bool> seen(layout.factors(), false);
  for (std::size_t i : order) {
    if (i >= layout.factors() || seen[i]) throw DimensionError("permute: invalid factor order");
    seen[i] = true;
  }
}

}  // namespace detail

/// Reorders tensor factors of an operator; `order[k]` is the source factor placed at slot k.
inline Matrix permute(const Matrix& x, const TensorLayout& layout, std::span<const std::size_t> order) {
  detail::check_order(layout, order);
  if (x.rows() != layout.total() || x.cols() != layout.total()) throw DimensionError("permute: size mismatch");
  const auto map = detail::permutation_map(layout, order);
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) out(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]) = x(i, j);
  }
  return out;
}

inline Vector permute(const Vector& v, const TensorLayout& layout, std::span<const std::size_t> order) {
  detail::check_order(layout, order);
  if (v.size() != layout.total()) throw DimensionError("permute: size mismatch");
  const auto map = detail::permutation_map(layout, order);
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(map[static_cast<std::size_t>(i)]) = v(i);
  return out;
}

/// Partial trace keeping the listed factors (in increasing factor order).
inline Matrix partial_trace(const Matrix& x, const TensorLayout& layout, std::span<const std::size_t> keep) {
  if (x.rows() != layout.total() || x.cols() != layout.total()) {
    throw DimensionError("partial_trace: matrix does not match layout");
  }
  if (keep.empty()) throw DimensionError("partial_trace: keep set must be nonempty");
  std::vector<std::size_t> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end() || kept.back() >= layout.factors()) {
    throw DimensionError("partial_trace: invalid factor indices");
  }
  std::vector<std::size_t> traced;
  for (std::size_t i = 0; i < layout.factors(); ++i) {
    if (!std::binary_search(kept.begin(), kept.end(), i)) traced.push_back(i);
  }
  const int n = layout.total();
  int kept_dim = 1;
  for (std::size_t k : kept) kept_dim *= layout[k];
  std::vector<int> kidx(static_cast<std::size_t>(n)), tidx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto dg = detail::digits(i, layout.dims());
    kidx[static_cast<std::size_t>(i)] = detail::compose(dg, layout.dims(), kept);
    tidx[static_cast<std::size_t>(i)] = detail::compose(dg, layout.dims(), traced);
  }
  Matrix out = Matrix::Zero(kept_dim, kept_dim);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (tidx[static_cast<std::size_t>(i)] == tidx[static_cast<std::size_t>(j)]) {
        out(kidx[static_cast<std::size_t>(i)], kidx[static_cast<std::size_t>(j)]) += x(i, j);
      }
    }
  }
  return out;
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
  std::vector<std::size_t> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  Matrix reduced = partial_trace(rho.matrix(), rho.layout(), kept);  // validates indices
  return DensityMatrix(std::move(reduced), rho.layout().select(kept));
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<std::size_t> keep) {
  return partial_trace(rho, std::span<const std::size_t>(keep.begin(), keep.size()));
}

/// Reduced state of a pure state on the kept factors, computed as A A^dagger.
inline DensityMatrix reduced_state(const PureState& psi, std::span<const std::size_t> keep) {
  std::vector<std::size_t> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  std::vector<std::size_t> order = kept;
  for (std::size_t i = 0; i < psi.layout().factors(); ++i) {
    if (!std::binary_search(kept.begin(), kept.end(), i)) order.push_back(i);
  }
  const TensorLayout kept_layout = psi.layout().select(kept);
  const int dk = kept_layout.total();
  const int dr = psi.dim() / dk;
  Vector v = permute(psi.vector(), psi.layout(), order);
  Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> a(v.data(), dk, dr);
  Matrix rho = a * a.adjoint();
  return DensityMatrix(rho, kept_layout);
}

inline DensityMatrix reduced_state(const PureState& psi, std::initializer_list<std::size_t> keep) {
  return reduced_state(psi, std::span<const std::size_t>(keep.begin(), keep.size()));
}

/// Transposes the factors on the B side of the cut.
inline Matrix partial_transpose(const Matrix& x, const TensorLayout& layout, const Cut& cut) {
  cut.check(layout);
  const auto right = cut.right(layout);
  const int n = layout.total();
  std::vector<std::size_t> all(layout.factors());
  std::iota(all.begin(), all.end(), std::size_t{0});
  Matrix out(n, n);
  for (int i = 0; i < n; ++i) {
    const auto di = detail::digits(i, layout.dims());
    for (int j = 0; j < n; ++j) {
      auto a = di;
      auto b = detail::digits(j, layout.dims());
      for (std::size_t k : right) std::swap(a[k], b[k]);
      out(detail::compose(a, layout.dims(), all), detail::compose(b, layout.dims(), all)) = x(i, j);
    }
  }
  return out;
}

inline Matrix partial_transpose(const DensityMatrix& rho, const Cut& cut) {
  return partial_transpose(rho.matrix(), rho.layout(), cut);
}

/// Reorders a state so the cut's left factors come first, then regroups it as A (x) B.
inline DensityMatrix as_bipartite(const DensityMatrix& rho, const Cut& cut) {
  cut.check(rho.layout());
  std::vector<std::size_t> order = cut.left;
  const auto right = cut.right(rho.layout());
  order.insert(order.end(), right.begin(), right.end());
  int da = 1;
  for (std::size_t k : cut.left) da *= rho.layout()[k];
  const int db = rho.dim() / da;
  return DensityMatrix(permute(rho.matrix(), rho.layout(), order), TensorLayout({da, db}));
}

/// Swaps the two factors of a bipartite state.
inline DensityMatrix swap_parties(const DensityMatrix& rho) {
  if (rho.layout().factors() != 2) throw DimensionError("swap_parties: state must be bipartite");
  const std::array<std::size_t, 2> order{1, 0};
  return DensityMatrix(permute(rho.matrix(), rho.layout(), order),
                       TensorLayout({rho.layout()[1], rho.layout()[0]}));
}

// ---------------------------------------------------------------------------
// Entropies, norms, fidelity

/// Eigenvalues of a state with tolerated negativity clamped to zero.
inline RealVector state_spectrum(const Matrix& rho) {
  RealVector ev = eigvalsh(rho);
  if (ev.size() > 0 && ev.minCoeff() < -tol::kNegativity) {
    throw InvalidState("entropy: matrix is not positive semidefinite");
  }
  return ev.cwiseMax(0.0);
}

/// von Neumann entropy in bits of a PSD matrix (need not be normalized).
inline double entropy_bits(const Matrix& rho) {
  const RealVector ev = state_spectrum(rho);
  double s = 0.0;
  for (double l : ev) {
    if (l > tol::kEigenCutoff) s -= l * std::log2(l);
  }
  return std::max(s, 0.0);
}

inline double von_neumann_entropy(const DensityMatrix& rho) { return entropy_bits(rho.matrix()); }

/// Quantum relative entropy D(rho||sigma) in bits; +infinity when supp(rho) is not inside supp(sigma).
inline double relative_entropy(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw DimensionError("relative_entropy: dimension mismatch");
  }
  const Spectrum r = eigh(rho);
  const Spectrum s = eigh(sigma);
  if (r.values.minCoeff() < -tol::kNegativity || s.values.minCoeff() < -tol::kNegativity) {
    throw InvalidState("relative_entropy: matrix is not positive semidefinite");
  }
  // overlap(i, j) = |<r_i|s_j>|^2
  const Eigen::MatrixXd overlap = (r.vectors.adjoint() * s.vectors).cwiseAbs2();
  double d = 0.0;
  for (Eigen::Index i = 0; i < r.values.size(); ++i) {
    const double li = r.values(i);
    if (li <= tol::kEigenCutoff) continue;
    d += li * std::log2(li);
    for (Eigen::Index j = 0; j < s.values.size(); ++j) {
      const double mj = s.values(j);
      const double w = li * overlap(i, j);
      if (mj <= tol::kEigenCutoff) {
        if (w > tol::kNegativity) return std::numeric_limits<double>::infinity();
        continue;
      }
      d -= w * std::log2(mj);
    }
  }
  return std::max(d, 0.0);
}

inline double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return relative_entropy(rho.matrix(), sigma.matrix());
}

/// I(A:B) = S(A) + S(B) - S(AB) for the given cut, in bits.
inline double mutual_information(const DensityMatrix& sigma, const Cut& cut) {
  cut.check(sigma.layout());
  const auto right = cut.right(sigma.layout());
  const double sa = entropy_bits(partial_trace(sigma.matrix(), sigma.layout(), cut.left));
  const double sb = entropy_bits(partial_trace(sigma.matrix(), sigma.layout(), right));
  return std::max(sa + sb - von_neumann_entropy(sigma), 0.0);
}

/// Sum of singular values.
inline double trace_norm(const Matrix& x) {
  if (x.rows() != x.cols()) throw DimensionError("trace_norm: matrix must be square");
  if (x.size() == 0) return 0.0;
  if (hermiticity_error(x) < 1e-14) return eigvalsh(x).cwiseAbs().sum();
  Eigen::JacobiSVD<Matrix> svd(x);
  return svd.singularValues().sum();
}

inline double trace_distance(const Matrix& a, const Matrix& b) { return 0.5 * trace_norm(a - b); }

/// Square-root fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)), in [0, 1].
inline double fidelity(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw DimensionError("fidelity: dimension mismatch");
  }
  const Matrix sr = psd_sqrt(rho);
  const RealVector ev = eigvalsh(sr * sigma * sr);
  double f = 0.0;
  for (double l : ev) f += std::sqrt(std::max(l, 0.0));
  return std::clamp(f, 0.0, 1.0);
}

inline double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return fidelity(rho.matrix(), sigma.matrix());
}

/// Spectral purification |Psi> = sum_k sqrt(l_k) |k>_R |e_k>_Q on layout (R, Q), dim R = dim Q.
///
/// Eigenvalues are taken in decreasing order and every eigenvector is phase
/// fixed, so the result is deterministic for a given input.
inline PureState purify(const DensityMatrix& rho) {
  const int d = rho.dim();
  const Spectrum s = eigh(rho.matrix());
  Vector psi = Vector::Zero(static_cast<Eigen::Index>(d) * d);
  for (int k = 0; k < d; ++k) {
    const Eigen::Index src = d - 1 - k;
    const double lambda = std::max(s.values(src), 0.0);
    if (lambda <= 0.0) continue;
    const Vector e = canonical_phase(s.vectors.col(src));
    psi.segment(static_cast<Eigen::Index>(k) * d, d) = std::sqrt(lambda) * e;
  }
  psi /= psi.norm();
  return PureState(psi, TensorLayout({d, d}));
}

// ---------------------------------------------------------------------------
// Random sampling

using Rng = std::mt19937_64;

/// Deterministic 64-bit seed derivation (splitmix64 finalizer).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Matrix ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  }
  return g;
}

/// Thin Q factor of a full-column-rank matrix, with phases fixed so R has a positive diagonal.
inline Matrix orthonormalize(const Matrix& a) {
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(a.rows(), a.cols());
  const Matrix r = qr.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    const Complex rk = r(k, k);
    if (std::abs(rk) > 0) q.col(k) *= rk / std::abs(rk);
  }
  return q;
}

/// Haar-random isometry C^cols -> C^rows (rows >= cols).
inline Matrix haar_isometry(int rows, int cols, Rng& rng) {
  if (rows < cols) throw DimensionError("haar_isometry: rows must be >= cols");
  return orthonormalize(ginibre(rows, cols, rng));
}

enum class SampleKind { HaarUnitary, GinibreState, PureState, RankKState };

inline Matrix haar_unitary(int d, std::uint64_t seed) {
  Rng rng(seed);
  return haar_isometry(d, d, rng);
}

inline DensityMatrix random_rank_k_state(int d, int k, Rng& rng) {
  if (d < 1 || k < 1 || k > d) throw DimensionError("random_rank_k_state: need 1 <= k <= d");
  const Matrix g = ginibre(d, k, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(hermitian_part(rho));
}

inline DensityMatrix random_rank_k_state(int d, int k, std::uint64_t seed) {
  Rng rng(seed);
  return random_rank_k_state(d, k, rng);
}

inline DensityMatrix ginibre_state(int d, Rng& rng) { return random_rank_k_state(d, d, rng); }

inline DensityMatrix ginibre_state(int d, std::uint64_t seed) {
  Rng rng(seed);
  return ginibre_state(d, rng);
}

inline PureState random_pure_state(int d, Rng& rng) {
  Vector v = ginibre(d, 1, rng).col(0);
  return PureState(v / v.norm());
}

inline PureState random_pure_state(int d, std::uint64_t seed) {
  Rng rng(seed);
  return random_pure_state(d, rng);
}

}  // namespace aqec

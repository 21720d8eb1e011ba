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

#include <cstdio>
#include <map>
#include <optional>

#include "aqec/qalg.hpp"

namespace aqec {

class InvalidChannel : public Error {
 public:
  using Error::Error;
};

namespace tol {
inline constexpr double kCptp = 1e-9;
/// Kraus operators with Frobenius norm below this are dropped from compositions.
inline constexpr double kKrausPrune = 1e-12;
}  // namespace tol

struct CptpReport {
  /// max |sum_m E_m^dagger E_m - I|, entrywise.
  double deviation = 0.0;
  double choi_min_eigenvalue = 0.0;
  bool valid = false;
};

namespace detail {

inline void check_kraus_shapes(std::span<const Matrix> ops) {
  if (ops.empty()) throw InvalidChannel("channel: no Kraus operators");
  const auto rows = ops.front().rows();
  const auto cols = ops.front().cols();
  if (rows == 0 || cols == 0) throw InvalidChannel("channel: empty Kraus operator");
  for (const Matrix& e : ops) {
    if (e.rows() != rows || e.cols() != cols) throw InvalidChannel("channel: Kraus operators differ in shape");
  }
}

inline Matrix choi_of(std::span<const Matrix> ops) {
  const auto d = ops.front().cols();
  const auto dp = ops.front().rows();
  Matrix choi = Matrix::Zero(d * dp, d * dp);
  for (const Matrix& e : ops) {
    // |v>> = sum_i |i> (x) E|i>
    Vector v(d * dp);
    for (Eigen::Index i = 0; i < d; ++i) v.segment(i * dp, dp) = e.col(i);
    choi += v * v.adjoint();
  }
  return choi;
}

}  // namespace detail

/// Reports trace-preservation deviation and Choi positivity of a raw Kraus list.
inline CptpReport validate_cptp(std::span<const Matrix> ops) {
  detail::check_kraus_shapes(ops);
  const auto d = ops.front().cols();
  Matrix sum = Matrix::Zero(d, d);
  for (const Matrix& e : ops) sum += e.adjoint() * e;
  CptpReport r;
  r.deviation = max_abs(sum - Matrix::Identity(d, d));
  r.choi_min_eigenvalue = eigvalsh(detail::choi_of(ops)).minCoeff();
  r.valid = r.deviation <= tol::kCptp && r.choi_min_eigenvalue >= -tol::kCptp;
  return r;
}

/// A CPTP map S(C^in_dim) -> S(C^out_dim) in Kraus form.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<Matrix> ops) : ops_(std::move(ops)) {
    detail::check_kraus_shapes(ops_);
    const CptpReport r = validate_cptp(ops_);
    if (r.deviation > tol::kCptp) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "channel: not trace preserving, |sum E^dag E - I| = %.3e", r.deviation);
      throw InvalidChannel(buf);
    }
    if (ops_.size() > static_cast<std::size_t>(in_dim() * out_dim())) {
      throw InvalidChannel("channel: more Kraus operators than in_dim * out_dim; compress via Choi first");
    }
  }

  int in_dim() const { return static_cast<int>(ops_.front().cols()); }
  int out_dim() const { return static_cast<int>(ops_.front().rows()); }
  std::size_t size() const { return ops_.size(); }
  const std::vector<Matrix>& ops() const { return ops_; }
  const Matrix& operator[](std::size_t m) const { return ops_.at(m); }

  Matrix apply(const Matrix& x) const {
    if (x.rows() != in_dim() || x.cols() != in_dim()) throw DimensionError("channel: input dimension mismatch");
    Matrix out = Matrix::Zero(out_dim(), out_dim());
    for (const Matrix& e : ops_) out += e * x * e.adjoint();
    return out;
  }

  DensityMatrix apply(const DensityMatrix& rho) const {
    return DensityMatrix(hermitian_part(apply(rho.matrix())));
  }

  /// Adjoint (Heisenberg-picture) map.
  Matrix apply_adjoint(const Matrix& y) const {
    if (y.rows() != out_dim() || y.cols() != out_dim()) throw DimensionError("channel: output dimension mismatch");
    Matrix out = Matrix::Zero(in_dim(), in_dim());
    for (const Matrix& e : ops_) out += e.adjoint() * y * e;
    return out;
  }

 private:
  std::vector<Matrix> ops_;
};

// ---------------------------------------------------------------------------
// Choi representation. The Choi matrix is unnormalized, J = sum_ij |i><j| (x) E(|i><j|),
// input factor first, so Tr J = in_dim and the identity channel gives d |Phi+><Phi+|.

inline Matrix choi_from_kraus(const KrausChannel& ch) { return detail::choi_of(ch.ops()); }

/// Minimal Kraus family of a Choi matrix; the Kraus rank equals the Choi rank.
inline KrausChannel kraus_from_choi(const Matrix& choi, int in_dim, int out_dim) {
  if (choi.rows() != static_cast<Eigen::Index>(in_dim) * out_dim || choi.cols() != choi.rows()) {
    throw DimensionError("kraus_from_choi: Choi matrix does not match dimensions");
  }
  if (hermiticity_error(choi) > tol::kCptp) throw InvalidChannel("kraus_from_choi: Choi matrix not Hermitian");
  const Spectrum s = eigh(choi);
  if (s.values.minCoeff() < -tol::kCptp) throw InvalidChannel("kraus_from_choi: Choi matrix not PSD");
  const double cutoff = tol::kEigenCutoff * std::max(1.0, s.values.maxCoeff());
  std::vector<Matrix> ops;
  for (Eigen::Index k = s.values.size(); k-- > 0;) {
    if (s.values(k) <= cutoff) continue;
    const Vector v = std::sqrt(s.values(k)) * canonical_phase(s.vectors.col(k));
    Matrix e(out_dim, in_dim);
    for (int i = 0; i < in_dim; ++i) e.col(i) = v.segment(static_cast<Eigen::Index>(i) * out_dim, out_dim);
    ops.push_back(std::move(e));
  }
  return KrausChannel(std::move(ops));
}

inline std::size_t kraus_rank(const KrausChannel& ch) {
  const RealVector ev = eigvalsh(choi_from_kraus(ch));
  const double cutoff = tol::kEigenCutoff * std::max(1.0, ev.maxCoeff());
  return static_cast<std::size_t>((ev.array() > cutoff).count());
}

/// Composition second after first, as pruned Kraus products; compressed through the
/// Choi matrix when the product family exceeds in_dim * out_dim operators.
inline KrausChannel compose(const KrausChannel& second, const KrausChannel& first) {
  if (second.in_dim() != first.out_dim()) throw DimensionError("compose: dimension mismatch");
  std::vector<Matrix> ops;
  for (const Matrix& r : second.ops()) {
    for (const Matrix& e : first.ops()) {
      Matrix p = r * e;
      if (p.norm() >= tol::kKrausPrune) ops.push_back(std::move(p));
    }
  }
  const std::size_t cap = static_cast<std::size_t>(first.in_dim() * second.out_dim());
  if (ops.size() <= cap) return KrausChannel(std::move(ops));
  return kraus_from_choi(detail::choi_of(ops), first.in_dim(), second.out_dim());
}

// ---------------------------------------------------------------------------
// Stinespring dilation

/// Isometry V: C^d -> C^d' (x) C^dE with V|psi> = sum_m E_m|psi> (x) |m>.
struct StinespringDilation {
  Matrix isometry;
  int in_dim = 0;
  int out_dim = 0;
  int env_dim = 0;

  TensorLayout output_layout() const { return TensorLayout({out_dim, env_dim}); }
};

inline StinespringDilation stinespring_dilate(const KrausChannel& ch) {
  const int d = ch.in_dim();
  const int dp = ch.out_dim();
  const int de = static_cast<int>(ch.size());
  Matrix v(static_cast<Eigen::Index>(dp) * de, d);
  for (int a = 0; a < dp; ++a) {
    for (int m = 0; m < de; ++m) v.row(static_cast<Eigen::Index>(a) * de + m) = ch[static_cast<std::size_t>(m)].row(a);
  }
  return {std::move(v), d, dp, de};
}

// ---------------------------------------------------------------------------
// Tripartite global state

/// The pure state (1 (x) V)|Psi^{RQ}> on (R, Q', E') and its reduced states.
struct TripartiteOutput {
  PureState psi;
  DensityMatrix rho_R;
  DensityMatrix rho_RQ;  // R (x) Q'
  DensityMatrix rho_RE;  // R (x) E'
  DensityMatrix rho_Q;   // Q' = E(rho)
  DensityMatrix rho_E;   // E'
  double input_entropy = 0.0;

  int ref_dim() const { return psi.layout()[0]; }
  int out_dim() const { return psi.layout()[1]; }
  int env_dim() const { return psi.layout()[2]; }
};

inline PureState dilate_purification(const PureState& psi_rq, const StinespringDilation& dil) {
  const int dr = psi_rq.layout()[0];
  const int d = psi_rq.layout()[1];
  if (d != dil.in_dim) throw DimensionError("global_state: input dimension mismatch");
  Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      psi_rq.vector().data(), dr, d);
  const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> out = m * dil.isometry.transpose();
  Vector v = Eigen::Map<const Vector>(out.data(), out.size());
  v /= v.norm();
  return PureState(v, TensorLayout({dr, dil.out_dim, dil.env_dim}));
}

inline TripartiteOutput global_state(const DensityMatrix& rho, const KrausChannel& ch) {
  if (rho.dim() != ch.in_dim()) throw DimensionError("global_state: state and channel dimensions differ");
  const PureState psi = dilate_purification(purify(rho), stinespring_dilate(ch));
  return TripartiteOutput{psi,
                          reduced_state(psi, {0}),
                          reduced_state(psi, {0, 1}),
                          reduced_state(psi, {0, 2}),
                          reduced_state(psi, {1}),
                          reduced_state(psi, {2}),
                          von_neumann_entropy(rho)};
}

// ---------------------------------------------------------------------------
// Entanglement fidelity and coherent information

/// F(rho, E) = sum_m |Tr(rho E_m)|^2.
inline double entanglement_fidelity(const DensityMatrix& rho, const KrausChannel& ch) {
  if (ch.in_dim() != ch.out_dim()) throw DimensionError("entanglement_fidelity: output and input dimensions differ");
  if (rho.dim() != ch.in_dim()) throw DimensionError("entanglement_fidelity: state dimension mismatch");
  double f = 0.0;
  for (const Matrix& e : ch.ops()) f += std::norm((rho.matrix() * e).trace());
  return std::clamp(f, 0.0, 1.0);
}

/// F(rho, R o E) = sum_{j,m} |Tr(rho R_j E_m)|^2, without forming the composition.
inline double entanglement_fidelity(const DensityMatrix& rho, const KrausChannel& recovery,
                                    const KrausChannel& ch) {
  if (recovery.in_dim() != ch.out_dim() || recovery.out_dim() != ch.in_dim() || rho.dim() != ch.in_dim()) {
    throw DimensionError("entanglement_fidelity: composition dimension mismatch");
  }
  double f = 0.0;
  for (const Matrix& e : ch.ops()) {
    const Matrix erho = e * rho.matrix();
    for (const Matrix& r : recovery.ops()) f += std::norm((r * erho).trace());
  }
  return std::clamp(f, 0.0, 1.0);
}

/// F as <Psi|(id (x) E)(Psi)|Psi> for a given purification of rho on (R, Q).
inline double entanglement_fidelity(const PureState& purification, const KrausChannel& ch) {
  if (ch.in_dim() != ch.out_dim()) throw DimensionError("entanglement_fidelity: output and input dimensions differ");
  const int dr = purification.layout()[0];
  const Matrix id_r = identity(dr);
  const Vector& psi = purification.vector();
  double f = 0.0;
  for (const Matrix& e : ch.ops()) f += std::norm(psi.dot(kron(id_r, e) * psi));
  return std::clamp(f, 0.0, 1.0);
}

/// I_c = S(rho^{Q'}) - S(rho^{RQ'}).
inline double coherent_information(const TripartiteOutput& tri) {
  return von_neumann_entropy(tri.rho_Q) - von_neumann_entropy(tri.rho_RQ);
}

inline double coherent_information(const DensityMatrix& rho, const KrausChannel& ch) {
  return coherent_information(global_state(rho, ch));
}

/// Second route: S(rho^Q) - I(R:E').
inline double coherent_information_via_environment(const TripartiteOutput& tri) {
  return tri.input_entropy - mutual_information(tri.rho_RE, Cut::first());
}

// ---------------------------------------------------------------------------
// Channel families

namespace paulis {
inline Matrix x() { Matrix m(2, 2); m << 0, 1, 1, 0; return m; }
inline Matrix y() { Matrix m(2, 2); m << 0, Complex(0, -1), Complex(0, 1), 0; return m; }
inline Matrix z() { Matrix m(2, 2); m << 1, 0, 0, -1; return m; }
}  // namespace paulis

/// Weyl-Heisenberg shift X^a Z^b on C^d.
inline Matrix weyl(int d, int a, int b) {
  const double pi = std::acos(-1.0);
  Matrix w = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    w((k + a) % d, k) = std::polar(1.0, 2.0 * pi * b * k / d);
  }
  return w;
}

inline KrausChannel identity_channel(int d) { return KrausChannel({identity(d)}); }

inline KrausChannel unitary_channel(const Matrix& u) { return KrausChannel({u}); }

/// rho -> (1 - p) rho + p Tr(rho) I/d; Weyl-Heisenberg Kraus form
/// {sqrt(1 - p + p/d^2) I, sqrt(p/d^2) X^a Z^b}. For d = 2 this is
/// {sqrt(1 - 3p/4) I, sqrt(p/4) X, sqrt(p/4) Y, sqrt(p/4) Z} up to phases.
inline KrausChannel depolarizing(int d, double p) {
  if (d < 2) throw InvalidChannel("depolarizing: d must be >= 2");
  if (!(p >= 0.0 && p <= 1.0 + 1.0 / (d * d - 1.0))) throw InvalidChannel("depolarizing: p out of range");
  const double d2 = static_cast<double>(d) * d;
  std::vector<Matrix> ops;
  ops.push_back(std::sqrt(std::max(0.0, 1.0 - p + p / d2)) * identity(d));
  if (p > 0.0) {
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        if (a == 0 && b == 0) continue;
        ops.push_back(std::sqrt(p / d2) * weyl(d, a, b));
      }
    }
  }
  return KrausChannel(std::move(ops));
}

/// Qubit amplitude damping: E0 = diag(1, sqrt(1 - g)), E1 = sqrt(g) |0><1|.
inline KrausChannel amplitude_damping(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidChannel("amplitude_damping: gamma out of range");
  Matrix e0 = Matrix::Zero(2, 2), e1 = Matrix::Zero(2, 2);
  e0(0, 0) = 1.0;
  e0(1, 1) = std::sqrt(1.0 - gamma);
  e1(0, 1) = std::sqrt(gamma);
  if (gamma == 0.0) return KrausChannel({e0});
  return KrausChannel({e0, e1});
}

/// Qubit phase damping: E0 = diag(1, sqrt(1 - l)), E1 = diag(0, sqrt(l)).
inline KrausChannel phase_damping(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidChannel("phase_damping: lambda out of range");
  Matrix e0 = Matrix::Zero(2, 2), e1 = Matrix::Zero(2, 2);
  e0(0, 0) = 1.0;
  e0(1, 1) = std::sqrt(1.0 - lambda);
  e1(1, 1) = std::sqrt(lambda);
  if (lambda == 0.0) return KrausChannel({e0});
  return KrausChannel({e0, e1});
}

/// Channel with k Kraus operators cut from a Haar-random isometry C^d_in -> C^d_out (x) C^k.
inline KrausChannel random_channel(int d_in, int d_out, int k, Rng& rng) {
  if (d_in < 1 || d_out < 1 || k < 1) throw InvalidChannel("random_channel: dimensions must be positive");
  if (k * d_out < d_in) throw InvalidChannel("random_channel: k * d_out must be >= d_in");
  if (k > d_in * d_out) throw InvalidChannel("random_channel: k must be <= d_in * d_out");
  const Matrix v = haar_isometry(d_out * k, d_in, rng);
  std::vector<Matrix> ops;
  for (int m = 0; m < k; ++m) ops.push_back(v.middleRows(static_cast<Eigen::Index>(m) * d_out, d_out));
  return KrausChannel(std::move(ops));
}

inline KrausChannel random_channel(int d_in, int d_out, int k, std::uint64_t seed) {
  Rng rng(seed);
  return random_channel(d_in, d_out, k, rng);
}

enum class ChannelFamily { Depolarizing, AmplitudeDamping, PhaseDamping, RandomRankK, Identity };

inline std::optional<ChannelFamily> parse_channel_family(const std::string& name) {
  static const std::map<std::string, ChannelFamily> names{
      {"depolarizing", ChannelFamily::Depolarizing},
      {"amplitude_damping", ChannelFamily::AmplitudeDamping},
      {"phase_damping", ChannelFamily::PhaseDamping},
      {"random_rank_k", ChannelFamily::RandomRankK},
      {"identity", ChannelFamily::Identity}};
  const auto it = names.find(name);
  if (it == names.end()) return std::nullopt;
  return it->second;
}

struct ChannelParams {
  int dim = 2;
  int out_dim = 0;  // 0 means same as dim
  double p = 0.0;   // noise strength for the parametric families
  int rank = 1;     // Kraus rank for random_rank_k
  std::uint64_t seed = 0;
};

inline KrausChannel channel_family(ChannelFamily family, const ChannelParams& params) {
  const int d_out = params.out_dim > 0 ? params.out_dim : params.dim;
  switch (family) {
    case ChannelFamily::Depolarizing:
      return depolarizing(params.dim, params.p);
    case ChannelFamily::AmplitudeDamping:
      if (params.dim != 2) throw InvalidChannel("amplitude_damping: qubit only");
      return amplitude_damping(params.p);
    case ChannelFamily::PhaseDamping:
      if (params.dim != 2) throw InvalidChannel("phase_damping: qubit only");
      return phase_damping(params.p);
    case ChannelFamily::RandomRankK:
      return random_channel(params.dim, d_out, params.rank, params.seed);
    case ChannelFamily::Identity:
      return identity_channel(params.dim);
  }
  throw InvalidChannel("channel_family: unknown family");
}

}  // namespace aqec

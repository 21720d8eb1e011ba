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

#include <array>
#include <cmath>

#include <gtest/gtest.h>

#include "aqec/entmeas.hpp"
#include "aqec/recovery.hpp"
#include "oracles.hpp"

namespace {

using aqec::Cut;
using aqec::DensityMatrix;
using aqec::KrausChannel;
using aqec::Matrix;
using aqec::PureState;
using aqec::TensorLayout;
using aqec::Vector;

const TensorLayout kTwoQubits({2, 2});

Vector bell_vector() {
  Vector v = Vector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v;
}

DensityMatrix bell_state() { return PureState(bell_vector(), kTwoQubits).density(); }

DensityMatrix isotropic(double p) {
  const Vector phi = bell_vector();
  return DensityMatrix((1.0 - p) * phi * phi.adjoint() + p * Matrix::Identity(4, 4) / 4.0, kTwoQubits);
}

double eof_from_concurrence(double c) {
  const double x = 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c)));
  return oracle::shannon({x, 1.0 - x});
}

DensityMatrix product_mixture(std::uint64_t seed) {
  // Separable: a mixture of two product states.
  const DensityMatrix a = aqec::tensor(aqec::random_pure_state(2, seed).density(), aqec::random_pure_state(2, seed + 1).density());
  const DensityMatrix b = aqec::tensor(aqec::random_pure_state(2, seed + 2).density(), aqec::random_pure_state(2, seed + 3).density());
  return DensityMatrix(0.3 * a.matrix() + 0.7 * b.matrix(), kTwoQubits);
}

// ---------------------------------------------------------------------------
// Pure-state entanglement and ensembles

TEST(PureEntanglement, Examples) {
  const PureState product(aqec::kron(aqec::basis_vector(2, 0), aqec::basis_vector(2, 1)), kTwoQubits);
  EXPECT_NEAR(aqec::pure_entanglement(product, Cut::first()), 0.0, 1e-12);
  EXPECT_NEAR(aqec::pure_entanglement(PureState(bell_vector(), kTwoQubits), Cut::first()), 1.0, 1e-12);
  Vector v = Vector::Zero(4);
  v(0) = std::sqrt(0.75);
  v(3) = 0.5;
  EXPECT_NEAR(aqec::pure_entanglement(PureState(v, kTwoQubits), Cut::first()), oracle::shannon({0.75, 0.25}), 1e-12);
}

TEST(PureEntanglement, InvalidCutThrows) {
  EXPECT_THROW(aqec::pure_entanglement(PureState(bell_vector(), kTwoQubits), Cut{{0, 1}}), aqec::DimensionError);
}

TEST(Ensemble, AverageEntanglement) {
  aqec::EnsembleDecomposition single{{1.0}, {PureState(bell_vector(), kTwoQubits)}};
  EXPECT_NEAR(aqec::ensemble_average_entanglement(single, Cut::first()), 1.0, 1e-12);
  aqec::EnsembleDecomposition prod{{0.4, 0.6},
                                   {PureState(aqec::kron(aqec::basis_vector(2, 0), aqec::basis_vector(2, 0)), kTwoQubits),
                                    PureState(aqec::kron(aqec::basis_vector(2, 1), aqec::basis_vector(2, 1)), kTwoQubits)}};
  EXPECT_NEAR(aqec::ensemble_average_entanglement(prod, Cut::first()), 0.0, 1e-12);
  aqec::EnsembleDecomposition bad{{0.4, 0.4}, prod.states};
  EXPECT_THROW(aqec::ensemble_average_entanglement(bad, Cut::first()), aqec::InvalidState);
}

TEST(Ensemble, SpectralEnsembleOfWernerUpperBoundsWootters) {
  const DensityMatrix w = isotropic(0.3);
  const aqec::Spectrum sp = aqec::eigh(w.matrix());
  aqec::EnsembleDecomposition ens;
  for (Eigen::Index k = 0; k < 4; ++k) {
    ens.weights.push_back(sp.values(k));
    ens.states.emplace_back(Vector(sp.vectors.col(k)), kTwoQubits);
  }
  EXPECT_LT(aqec::max_abs(ens.mixture() - w.matrix()), 1e-12);
  EXPECT_GE(aqec::ensemble_average_entanglement(ens, Cut::first()), oracle::wootters(w.matrix()) - 1e-12);
}

// ---------------------------------------------------------------------------
// Wootters closed form

TEST(Wootters, KnownValues) {
  EXPECT_NEAR(aqec::wootters_eof(bell_state()), 1.0, 1e-12);
  EXPECT_NEAR(aqec::wootters_eof(DensityMatrix::maximally_mixed(kTwoQubits)), 0.0, 1e-12);
  for (double p = 0.0; p <= 1.0; p += 0.1) {
    const double c = std::max(0.0, 1.0 - 1.5 * p);
    EXPECT_NEAR(aqec::concurrence(isotropic(p)), c, 1e-12) << "p = " << p;
    EXPECT_NEAR(aqec::wootters_eof(isotropic(p)), eof_from_concurrence(c), 1e-10) << "p = " << p;
  }
}

TEST(Wootters, MatchesSpinFlipOracle) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const DensityMatrix rho = aqec::random_rank_k_state(4, 1 + static_cast<int>(s % 4), s).relabel(kTwoQubits);
    EXPECT_NEAR(aqec::wootters_eof(rho), oracle::wootters(rho.matrix()), 1e-6) << "seed " << s;
  }
}

TEST(Wootters, WrongDimensionsThrow) {
  EXPECT_THROW(aqec::wootters_eof(DensityMatrix::maximally_mixed(3)), aqec::DimensionError);
}

// ---------------------------------------------------------------------------
// Numerical EoF

TEST(Eof, PureStateMatchesMarginalEntropy) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const PureState phi(aqec::random_pure_state(6, s).vector(), TensorLayout({2, 3}));
    const aqec::EofResult r = aqec::eof(phi.density(), Cut::first());
    EXPECT_NEAR(r.value, aqec::pure_entanglement(phi, Cut::first()), 1e-6);
  }
}

TEST(Eof, SeparableMixtureIsNearZero) {
  for (std::uint64_t s = 0; s < 5; ++s) EXPECT_LE(aqec::eof(product_mixture(10 * s), Cut::first()).value, 1e-4);
}

TEST(Eof, AgreesWithWoottersOnRandomStates) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const DensityMatrix rho = aqec::random_rank_k_state(4, 2 + static_cast<int>(s % 3), 100 + s).relabel(kTwoQubits);
    aqec::EofOptions opts;
    opts.seed = s;
    EXPECT_NEAR(aqec::eof(rho, Cut::first(), opts).value, oracle::wootters(rho.matrix()), 1e-3) << "seed " << s;
  }
}

TEST(Eof, CertificateReconstructsStateAndValue) {
  const DensityMatrix rho = aqec::ginibre_state(6, 3).relabel(TensorLayout({2, 3}));
  const aqec::EofResult r = aqec::eof(rho, Cut::first());
  double total = 0.0;
  for (double p : r.ensemble.weights) {
    EXPECT_GE(p, 0.0);
    total += p;
  }
  EXPECT_NEAR(total, 1.0, 1e-10);
  EXPECT_LT(aqec::max_abs(r.ensemble.mixture() - rho.matrix()), 1e-8);
  EXPECT_NEAR(aqec::ensemble_average_entanglement(r.ensemble, Cut::first()), r.value, 1e-8);
}

TEST(Eof, LargerEnsemblesDoNotIncreaseValue) {
  const DensityMatrix rho = aqec::random_rank_k_state(4, 3, 77).relabel(kTwoQubits);
  aqec::EofOptions small, large;
  small.ensemble_size = 3;
  large.ensemble_size = 12;
  EXPECT_LE(aqec::eof(rho, Cut::first(), large).value, aqec::eof(rho, Cut::first(), small).value + 1e-6);
}

TEST(Eof, DeterministicPerSeed) {
  const DensityMatrix rho = aqec::ginibre_state(4, 5).relabel(kTwoQubits);
  aqec::EofOptions opts;
  opts.seed = 9;
  EXPECT_EQ(aqec::eof(rho, Cut::first(), opts).value, aqec::eof(rho, Cut::first(), opts).value);
}

// ---------------------------------------------------------------------------
// Classical correlations

TEST(ClassicalCorrelations, Examples) {
  const DensityMatrix prod = aqec::tensor(aqec::ginibre_state(2, 1), aqec::ginibre_state(2, 2));
  EXPECT_NEAR(aqec::classical_correlations(prod, Cut::first()).value, 0.0, 1e-6);
  EXPECT_NEAR(aqec::classical_correlations(bell_state(), Cut::first()).value, 1.0, 1e-6);
  const std::array<double, 4> p{0.5, 0.0, 0.0, 0.5};
  const DensityMatrix cl = DensityMatrix::diagonal(p).relabel(kTwoQubits);
  EXPECT_NEAR(aqec::classical_correlations(cl, Cut::first()).value, 1.0, 1e-6);
}

TEST(ClassicalCorrelations, StrategyReproducesValueAndIsBoundedByMutualInformation) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const DensityMatrix rho = aqec::ginibre_state(6, s).relabel(TensorLayout({3, 2}));
    aqec::CcOptions opts;
    opts.seed = s;
    const aqec::CcResult r = aqec::classical_correlations(rho, Cut::first(), opts);
    EXPECT_NEAR(aqec::measured_entropy_reduction(rho, r.strategy.povm), r.strategy.achieved_value, 1e-10);
    EXPECT_LE(r.value, aqec::mutual_information(rho, Cut::first()) + 1e-9);
    EXPECT_GE(r.value, 0.0);
  }
}

TEST(ClassicalCorrelations, ProductHasZeroEof) {
  const DensityMatrix prod = aqec::tensor(aqec::ginibre_state(2, 5), aqec::ginibre_state(2, 6));
  EXPECT_NEAR(aqec::eof(prod, Cut::first()).value, 0.0, 1e-6);
}

// ---------------------------------------------------------------------------
// Monogamy, negativity, distillable interval

TEST(KoashiWinter, IdentityChannelResidualIsZero) {
  const aqec::KoashiWinterReport r = aqec::koashi_winter_residual(DensityMatrix::maximally_mixed(2), aqec::identity_channel(2));
  EXPECT_NEAR(r.residual, 0.0, 1e-6);
  EXPECT_NEAR(r.classical, 0.0, 1e-6);
  EXPECT_NEAR(r.eof, 1.0, 1e-9);
  EXPECT_TRUE(r.eof_exact);
}

TEST(KoashiWinter, CompletelyDepolarizingResidualIsZero) {
  const aqec::KoashiWinterReport r =
      aqec::koashi_winter_residual(DensityMatrix::maximally_mixed(2), aqec::depolarizing(2, 1.0));
  EXPECT_NEAR(r.classical, 1.0, 1e-6);
  EXPECT_NEAR(r.eof, 0.0, 1e-9);
  EXPECT_NEAR(r.residual, 0.0, 1e-6);
}

TEST(KoashiWinter, RandomQubitChannelsSmallResidual) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const KrausChannel ch = aqec::random_channel(2, 2, 1 + static_cast<int>(s % 4), 500 + s);
    aqec::MeasureOptions opts;
    opts.cc.seed = s;
    const aqec::KoashiWinterReport r = aqec::koashi_winter_residual(DensityMatrix::maximally_mixed(2), ch, opts);
    EXPECT_LE(r.residual, 1e-9);
    EXPECT_GE(r.residual, -5e-3);
  }
}

TEST(LogNegativity, Examples) {
  EXPECT_NEAR(aqec::log_negativity(aqec::tensor(aqec::ginibre_state(2, 1), aqec::ginibre_state(2, 2)), Cut::first()),
              0.0, 1e-12);
  EXPECT_NEAR(aqec::log_negativity(bell_state(), Cut::first()), 1.0, 1e-12);
  EXPECT_NEAR(aqec::log_negativity(isotropic(1.0), Cut::first()), 0.0, 1e-12);
  // Oracle from the explicit partial transpose.
  const DensityMatrix rho = isotropic(0.2);
  EXPECT_NEAR(aqec::log_negativity(rho, Cut::first()),
              std::log2(oracle::trace_norm(oracle::transpose_second(rho.matrix(), 2, 2))), 1e-12);
}

TEST(DistillableInterval, Examples) {
  const aqec::EntanglementInterval bell = aqec::distillable_interval(bell_state(), Cut::first());
  EXPECT_NEAR(bell.lower, 1.0, 1e-9);
  EXPECT_NEAR(bell.upper, 1.0, 1e-6);
  const aqec::EntanglementInterval mixed = aqec::distillable_interval(DensityMatrix::maximally_mixed(kTwoQubits), Cut::first());
  EXPECT_NEAR(mixed.lower, 0.0, 1e-12);
  EXPECT_NEAR(mixed.upper, 0.0, 1e-6);
  const DensityMatrix iso = isotropic(0.2);
  const aqec::EntanglementInterval iv = aqec::distillable_interval(iso, Cut::first());
  const double ic = 1.0 - oracle::entropy(iso.matrix());
  EXPECT_NEAR(iv.lower, std::max(0.0, ic), 1e-9);
  EXPECT_NEAR(iv.upper, oracle::wootters(iso.matrix()), 1e-3);
  EXPECT_LE(iv.lower, iv.upper);
}

TEST(Entmeas, CoherentInformationBelowEof) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const KrausChannel ch = aqec::random_channel(2, 2, 1 + static_cast<int>(s % 4), 900 + s);
    const DensityMatrix rho = aqec::ginibre_state(2, 1900 + s);
    const aqec::TripartiteOutput tri = aqec::global_state(rho, ch);
    EXPECT_LE(aqec::coherent_information(tri), aqec::wootters_eof(tri.rho_RQ) + 1e-9);
  }
}

// ---------------------------------------------------------------------------
// Gradients of the three optimizer objectives, against central differences

template <class Problem>
void check_gradient(const Problem& prob, const Matrix& at, std::uint64_t seed) {
  aqec::Rng rng(seed);
  const aqec::ValueAndGradient vg = prob(at);
  for (int k = 0; k < 3; ++k) {
    const Matrix dir = aqec::ginibre(static_cast<int>(at.rows()), static_cast<int>(at.cols()), rng);
    const double fd = oracle::directional_derivative([&](const Matrix& u) { return prob(u).value; }, at, dir);
    EXPECT_NEAR(oracle::real_inner(vg.gradient, dir), fd, 1e-5 * std::max(1.0, std::abs(fd)));
  }
}

TEST(Gradients, EofObjective) {
  const DensityMatrix rho = aqec::ginibre_state(6, 12).relabel(TensorLayout({2, 3}));
  const aqec::Spectrum sp = aqec::eigh(rho.matrix());
  aqec::detail::EofProblem prob;
  prob.da = 2;
  prob.db = 3;
  prob.w = sp.vectors * sp.values.cwiseSqrt().cast<aqec::Complex>().asDiagonal();
  aqec::Rng rng(1);
  check_gradient(prob, aqec::haar_isometry(8, 6, rng), 2);
}

TEST(Gradients, ClassicalCorrelationObjective) {
  const DensityMatrix rho = aqec::ginibre_state(6, 13).relabel(TensorLayout({3, 2}));
  aqec::detail::CcProblem prob;
  prob.da = 3;
  prob.db = 2;
  prob.sigma = rho.matrix();
  aqec::Rng rng(3);
  check_gradient(prob, aqec::haar_isometry(4, 2, rng), 4);
}

TEST(Gradients, RecoveryObjective) {
  const DensityMatrix rho = aqec::ginibre_state(2, 14);
  const KrausChannel ch = aqec::random_channel(2, 3, 2, 15);
  aqec::detail::RecoveryProblem prob;
  prob.d = 2;
  for (const Matrix& e : ch.ops()) prob.erho.push_back(e * rho.matrix());
  aqec::Rng rng(5);
  check_gradient(prob, aqec::haar_isometry(12, 3, rng), 6);
}

}  // namespace

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

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "aqec/icpovm.hpp"
#include "oracles.hpp"

namespace {

using aqec::DualFrame;
using aqec::Matrix;
using aqec::Povm;

Povm clifford_orbit() {
  return aqec::covariant_design_povm(aqec::qubit_clifford_group(), aqec::PureState(aqec::basis_vector(2, 0)));
}

/// Worst max-entry reconstruction error over random non-Hermitian matrices.
double reconstruction_error(const Povm& povm, const DualFrame& dual, int samples, std::uint64_t seed) {
  aqec::Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Matrix x = aqec::ginibre(povm.dim(), povm.dim(), rng);
    worst = std::max(worst, aqec::max_abs(aqec::reconstruct(x, povm, dual) - x));
  }
  return worst;
}

/// Oracle dual for rank-one SIC or 2-design orbits: (d + 1) Pi - I with Pi the unit-trace projector.
Matrix design_dual(const Matrix& element) {
  const auto d = element.rows();
  const Matrix pi = element / element.trace().real();
  return static_cast<double>(d + 1) * pi - Matrix::Identity(d, d);
}

TEST(Povm, RejectsInvalidElements) {
  EXPECT_THROW(Povm({Matrix::Identity(2, 2), Matrix::Identity(2, 2)}), aqec::InvalidPovm);
  Matrix neg = Matrix::Zero(2, 2);
  neg(0, 0) = 2.0;
  neg(1, 1) = -1.0;
  Matrix comp = Matrix::Identity(2, 2) - neg;
  EXPECT_THROW(Povm({neg, comp}), aqec::InvalidPovm);
  EXPECT_THROW(Povm({}), aqec::InvalidPovm);
}

TEST(InformationalCompleteness, Catalogue) {
  const aqec::IcReport sic = aqec::is_informationally_complete(aqec::qubit_sic());
  EXPECT_TRUE(sic.complete);
  EXPECT_EQ(sic.rank, 4);
  const aqec::IcReport mub = aqec::is_informationally_complete(aqec::qubit_mub_povm());
  EXPECT_TRUE(mub.complete);
  EXPECT_EQ(mub.rank, 4);
  EXPECT_EQ(aqec::qubit_mub_povm().size(), 6u);
  Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  const aqec::IcReport proj = aqec::is_informationally_complete(Povm({p0, p1}));
  EXPECT_FALSE(proj.complete);
  EXPECT_EQ(proj.rank, 2);
  EXPECT_THROW(aqec::canonical_dual(Povm({p0, p1})), aqec::InvalidPovm);
}

TEST(InformationalCompleteness, TrivialFrameOnOneDimensionIsComplete) {
  const aqec::IcReport r = aqec::is_informationally_complete(aqec::trivial_povm());
  EXPECT_TRUE(r.complete);
  EXPECT_EQ(r.required, 1);
}

TEST(Sic, QubitElementsAreEquiangular) {
  const Povm sic = aqec::qubit_sic();
  ASSERT_EQ(sic.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    const Matrix pi = 2.0 * sic[i];
    EXPECT_NEAR(pi.trace().real(), 1.0, 1e-12);
    for (std::size_t j = i + 1; j < 4; ++j) EXPECT_NEAR((pi * 2.0 * sic[j]).trace().real(), 1.0 / 3.0, 1e-12);
  }
}

TEST(Sic, QutritElementsAreEquiangular) {
  const Povm sic = aqec::qutrit_sic();
  ASSERT_EQ(sic.size(), 9u);
  for (std::size_t i = 0; i < 9; ++i) {
    for (std::size_t j = i + 1; j < 9; ++j) EXPECT_NEAR((9.0 * sic[i] * sic[j]).trace().real(), 0.25, 1e-12);
  }
}

TEST(CanonicalDual, QubitSicMatchesClosedForm) {
  const Povm sic = aqec::qubit_sic();
  const DualFrame dual = aqec::canonical_dual(sic);
  for (std::size_t i = 0; i < sic.size(); ++i) {
    EXPECT_LT(aqec::max_abs(dual.duals[i] - design_dual(sic[i])), 1e-9);
    EXPECT_NEAR(oracle::trace_norm(dual.duals[i]), 3.0, 1e-9);
  }
  EXPECT_NEAR(dual.k_constant, 9.0, 1e-9);
  EXPECT_NEAR(aqec::k_constant(dual), 9.0, 1e-9);
}

TEST(CanonicalDual, QutritSicDualNorm) {
  // Oracle: (d + 1) Pi - I has eigenvalues {d, -1, -1}, trace norm 2d - 1 = 5.
  const Povm sic = aqec::qutrit_sic();
  const DualFrame dual = aqec::canonical_dual(sic);
  for (std::size_t i = 0; i < sic.size(); ++i) {
    EXPECT_LT(aqec::max_abs(dual.duals[i] - design_dual(sic[i])), 1e-9);
    EXPECT_NEAR(oracle::trace_norm(dual.duals[i]), 5.0, 1e-9);
  }
  EXPECT_NEAR(dual.k_constant, 25.0, 1e-8);
}

TEST(CanonicalDual, MubMatchesClosedForm) {
  // The MUB POVM is a projective 2-design, so its dual is again (d + 1) Pi - I.
  const Povm mub = aqec::qubit_mub_povm();
  const DualFrame dual = aqec::canonical_dual(mub);
  EXPECT_LT(reconstruction_error(mub, dual, 100, 3), 1e-9);
  for (std::size_t i = 0; i < mub.size(); ++i) EXPECT_LT(aqec::max_abs(dual.duals[i] - design_dual(mub[i])), 1e-9);
  EXPECT_NEAR(dual.k_constant, 9.0, 1e-9);
}

TEST(CanonicalDual, TrivialFrameIsSelfDual) {
  const DualFrame dual = aqec::canonical_dual(aqec::trivial_povm());
  ASSERT_EQ(dual.duals.size(), 1u);
  EXPECT_NEAR(std::abs(dual.duals[0](0, 0) - 1.0), 0.0, 1e-12);
}

TEST(CanonicalDual, DualsAreHermitianAndReconstructIdentity) {
  for (const Povm& povm : {aqec::qubit_sic(), aqec::qutrit_sic(), aqec::qubit_mub_povm(), clifford_orbit(),
                           aqec::embedded_frame(4), aqec::embedded_frame(6)}) {
    const DualFrame dual = aqec::canonical_dual(povm);
    Matrix id = Matrix::Zero(povm.dim(), povm.dim());
    for (std::size_t i = 0; i < povm.size(); ++i) {
      EXPECT_LT(aqec::hermiticity_error(dual.duals[i]), 1e-10);
      id += povm[i].trace() * dual.duals[i];
    }
    EXPECT_LT(aqec::max_abs(id - Matrix::Identity(povm.dim(), povm.dim())), 1e-9);
    EXPECT_LT(reconstruction_error(povm, dual, 100, 11), 1e-9);
  }
}

TEST(Reconstruct, IdentityAndHermitian) {
  const Povm sic = aqec::qubit_sic();
  const DualFrame dual = aqec::canonical_dual(sic);
  EXPECT_LT(aqec::max_abs(aqec::reconstruct(Matrix::Identity(2, 2), sic, dual) - Matrix::Identity(2, 2)), 1e-12);
  aqec::Rng rng(4);
  const Matrix g = aqec::ginibre(2, 2, rng);
  const Matrix h = g + g.adjoint();
  EXPECT_LT(aqec::max_abs(aqec::reconstruct(h, sic, dual) - h), 1e-9);
}

TEST(Reconstruct, LengthMismatchThrows) {
  const Povm sic = aqec::qubit_sic();
  DualFrame dual = aqec::canonical_dual(sic);
  dual.duals.pop_back();
  EXPECT_THROW(aqec::reconstruct(Matrix::Identity(2, 2), sic, dual), aqec::DimensionError);
}

TEST(KConstant, InvariantUnderRelabeling) {
  const Povm mub = aqec::qubit_mub_povm();
  std::vector<Matrix> els = mub.elements();
  std::reverse(els.begin(), els.end());
  std::rotate(els.begin(), els.begin() + 2, els.end());
  EXPECT_NEAR(aqec::canonical_dual(Povm(els)).k_constant, aqec::canonical_dual(mub).k_constant, 1e-12);
}

TEST(Design, CliffordGroupIsExactTwoDesign) {
  const std::vector<Matrix> group = aqec::qubit_clifford_group();
  EXPECT_EQ(group.size(), 24u);
  EXPECT_NEAR(aqec::frame_potential(group), 2.0, 1e-12);
  EXPECT_TRUE(aqec::is_unitary_2design(group));
  const std::vector<Matrix> paulis{Matrix::Identity(2, 2), aqec::paulis::x(), aqec::paulis::y(), aqec::paulis::z()};
  EXPECT_FALSE(aqec::is_unitary_2design(paulis));  // a 1-design only
  EXPECT_THROW(aqec::covariant_design_povm(paulis, aqec::PureState(aqec::basis_vector(2, 0))), aqec::InvalidPovm);
}

TEST(Design, CliffordOrbitDualNormIsTwoDMinusOne) {
  const Povm orbit = clifford_orbit();
  EXPECT_EQ(orbit.size(), 24u);
  EXPECT_EQ(aqec::distinct_elements(orbit), 6u);
  EXPECT_TRUE(aqec::is_informationally_complete(orbit).complete);
  const DualFrame dual = aqec::canonical_dual(orbit);
  for (std::size_t i = 0; i < orbit.size(); ++i) {
    EXPECT_LT(aqec::max_abs(dual.duals[i] - design_dual(orbit[i])), 1e-9);
    EXPECT_NEAR(aqec::trace_norm(dual.duals[i]), 3.0, 1e-9);
  }
  EXPECT_NEAR(dual.k_constant, 9.0, 1e-9);
  EXPECT_LT(reconstruction_error(orbit, dual, 100, 5), 1e-9);
}

TEST(Design, OrbitOfRandomFiducialStillHasNormThree) {
  const Povm orbit = aqec::covariant_design_povm(aqec::qubit_clifford_group(), aqec::random_pure_state(2, 19));
  const DualFrame dual = aqec::canonical_dual(orbit);
  for (const Matrix& m : dual.duals) EXPECT_NEAR(aqec::trace_norm(m), 3.0, 1e-9);
}

TEST(EmbeddedFrame, DimensionsAndCompleteness) {
  EXPECT_EQ(aqec::embedded_frame(1).size(), 1u);
  EXPECT_EQ(aqec::embedded_frame(2).size(), 4u);
  EXPECT_EQ(aqec::embedded_frame(3).size(), 9u);
  EXPECT_EQ(aqec::embedded_frame(4).size(), 16u);
  EXPECT_EQ(aqec::embedded_frame(6).size(), 36u);
  EXPECT_EQ(aqec::embedded_frame(9).size(), 81u);
  for (int d : {2, 3, 4, 6, 8, 9}) EXPECT_TRUE(aqec::is_informationally_complete(aqec::embedded_frame(d)).complete);
  EXPECT_THROW(aqec::embedded_frame(5), aqec::InvalidPovm);
  EXPECT_THROW(aqec::embedded_frame(0), aqec::InvalidPovm);
}

TEST(EmbeddedFrame, TensorDualNormsMultiply) {
  // Duals of a tensor frame are tensor products of duals, so K multiplies: 9 * 9 for d = 4.
  EXPECT_NEAR(aqec::canonical_dual(aqec::embedded_frame(4)).k_constant, 81.0, 1e-8);
  EXPECT_NEAR(aqec::canonical_dual(aqec::embedded_frame(6)).k_constant, 225.0, 1e-7);
}

TEST(Povm, ProbabilitiesSumToOne) {
  const aqec::DensityMatrix rho = aqec::ginibre_state(3, 8);
  const std::vector<double> p = aqec::qutrit_sic().probabilities(rho.matrix());
  double total = 0.0;
  for (double x : p) {
    EXPECT_GE(x, -1e-12);
    total += x;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

}  // namespace

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "oatecho/optimizer.hpp"
#include "oatecho/oracle.hpp"

using namespace oatecho;

namespace {

template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& a) {
  return a.cwiseAbs().maxCoeff();
}

// Overlap-based distance insensitive to a global phase.
double state_distance(const DickeVector& a, const DickeVector& b) {
  return 1.0 - std::abs(a.amplitudes.dot(b.amplitudes));
}

}  // namespace

TEST(SpinOperators, AngularMomentumAlgebra) {
  const cplx i{0.0, 1.0};
  for (int N : {1, 2, 3, 8, 17, 64, 128}) {
    const SpinOperators s = spin_operators(N);
    const double tol = 1e-10 * N * N;
    EXPECT_LT(max_abs(s.Sx * s.Sy - s.Sy * s.Sx - i * s.Sz), tol) << N;
    EXPECT_LT(max_abs(s.Sy * s.Sz - s.Sz * s.Sy - i * s.Sx), tol) << N;
    EXPECT_LT(max_abs(s.Sz * s.Sx - s.Sx * s.Sz - i * s.Sy), tol) << N;
    const double S = 0.5 * N;
    const CMatrix casimir = s.Sx * s.Sx + s.Sy * s.Sy + s.Sz * s.Sz;
    EXPECT_LT(max_abs(casimir - S * (S + 1) * CMatrix::Identity(N + 1, N + 1)), tol);
    for (int k = 0; k <= N; ++k) {
      EXPECT_EQ(s.Sz(k, k).real(), k - S);
    }
  }
}

TEST(CoherentState, PolesAndEquator) {
  const DickeVector down = coherent_state(0.0, 0.0, 3);
  EXPECT_NEAR(std::abs(down.amplitudes(0)), 1.0, 1e-15);
  EXPECT_NEAR(max_abs(CVector(down.amplitudes.tail(3))), 0.0, 1e-15);
  const DickeVector x2 = coherent_state(kPi / 2, 0.0, 2);
  EXPECT_NEAR(x2.amplitudes(0).real(), 0.5, 1e-15);
  EXPECT_NEAR(x2.amplitudes(1).real(), std::sqrt(2.0) / 2, 1e-15);
  EXPECT_NEAR(x2.amplitudes(2).real(), 0.5, 1e-15);
}

TEST(CoherentState, UnitNormAndPolarization) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> th(0.0, kPi), ph(0.0, 2 * kPi);
  for (int N = 1; N <= 64; ++N) {
    const double t = th(rng), p = ph(rng);
    const DickeVector psi = coherent_state(t, p, N);
    EXPECT_NEAR(psi.amplitudes.norm(), 1.0, 1e-12);
  }
  const SpinOperators s = spin_operators(10);
  const DickeDensity x = to_density(x_state(10));
  EXPECT_NEAR(expectation(x, s.Sx), 5.0, 1e-12);
  EXPECT_NEAR(expectation(x, s.Sy), 0.0, 1e-12);
}

TEST(ApplyOat, IdentityAndInverse) {
  const DickeVector psi = coherent_state(1.1, 0.3, 9);
  EXPECT_LT(max_abs(CVector(apply_oat(psi, 0.0).amplitudes - psi.amplitudes)), 1e-15);
  EXPECT_LT(max_abs(CVector(apply_oat(apply_oat(psi, 0.77), -0.77).amplitudes - psi.amplitudes)), 1e-14);
  const DickeDensity rho = to_density(psi);
  const DickeDensity twisted = apply_oat(rho, 0.9);
  EXPECT_LT(max_abs(twisted.matrix - to_density(apply_oat(psi, 0.9)).matrix), 1e-14);
}

TEST(CollectiveDephase, ElementFactorAndCommutation) {
  const DickeDensity rho = to_density(x_state(4));
  EXPECT_LT(max_abs(collective_dephase(rho, 0.0, 1.0).matrix - rho.matrix), 1e-16);
  const DickeDensity d = collective_dephase(rho, 0.1, kPi / 2);
  // m = 1 is index 3, m' = -1 is index 1.
  EXPECT_NEAR(std::abs(d.matrix(3, 1) / rho.matrix(3, 1)), 0.85464, 1e-5);
  EXPECT_NEAR(std::abs(d.matrix(3, 1) / rho.matrix(3, 1)), std::exp(-0.1 * (kPi / 2) * 4 / 4), 1e-14);
  const DickeDensity a = apply_oat(collective_dephase(rho, 0.3, 0.8), 0.8);
  const DickeDensity b = collective_dephase(apply_oat(rho, 0.8), 0.3, 0.8);
  EXPECT_LT(max_abs(a.matrix - b.matrix), 1e-14);
  EXPECT_NEAR(d.matrix.trace().real(), 1.0, 1e-12);
}

TEST(Rotate, IdentityInverseAndEquatorConvention) {
  const DickeVector psi = coherent_state(0.4, 1.2, 7);
  const Direction axis = Direction::from({0.3, -0.5, 0.8});
  EXPECT_LT(state_distance(rotate(psi, axis, 0.0), psi), 1e-13);
  EXPECT_LT(max_abs(CVector(rotate(rotate(psi, axis, 0.9), axis, -0.9).amplitudes - psi.amplitudes)), 1e-12);
  const DickeVector down = coherent_state(0.0, 0.0, 6);
  // exp(-i a S_y) turns +z toward +x for a > 0, so the south pole reaches
  // +x with a = -pi/2.
  EXPECT_LT(state_distance(rotate(down, Direction::y(), -kPi / 2), x_state(6)), 1e-12);
  EXPECT_LT(state_distance(rotate(down, Direction::y(), kPi / 2), coherent_state(kPi / 2, kPi, 6)), 1e-12);
  const CMatrix U = rotation_unitary(6, axis, 1.3);
  EXPECT_LT(max_abs(U * U.adjoint() - CMatrix::Identity(7, 7)), 1e-12);
}

TEST(ProtocolDensity, TrivialAndPurity) {
  const DickeDensity a = protocol_density({6, 0.0, 0.0, {}}, Direction::y(), 0.0);
  EXPECT_LT(max_abs(a.matrix - to_density(x_state(6)).matrix), 1e-14);
  const DickeDensity b = protocol_density({8, 0.5, 0.5, {}}, Direction::y(), 0.0);
  EXPECT_NEAR(purity(b), 1.0, 1e-12);
  const DickeDensity c = protocol_density({8, 0.5, 0.5, {0.3, 0.0}}, Direction::y(), 0.0);
  EXPECT_LT(purity(c), 1.0 - 1e-6);
  EXPECT_NEAR(c.matrix.trace().real(), 1.0, 1e-12);
  EXPECT_LT(max_abs(c.matrix - c.matrix.adjoint()), 1e-12);
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(c.matrix);
  EXPECT_GT(eig.eigenvalues().minCoeff(), -1e-10);
  EXPECT_THROW(protocol_density({8, 0.5, 0.5, {0.0, 0.2}}, Direction::y(), 0.0), std::invalid_argument);
}

TEST(DirectSensitivity, ConventionalRamsey) {
  EXPECT_NEAR(direct_sensitivity({4, 0.0, 0.0, {}}, Direction::z(), Direction::y()), 2.0, 1e-12);
}

TEST(DirectSensitivity, DegenerateMeasurementIsAnError) {
  // |x> is an eigenstate of S_x.
  EXPECT_THROW(direct_sensitivity({4, 0.0, 0.0, {}}, Direction::z(), Direction::x()), std::domain_error);
}

TEST(DirectSensitivity, MatchesOptimizerForSmallN) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int N = 2; N <= 16; ++N) {
    for (int t = 0; t < 6; ++t) {
      const ProtocolPoint p{N, ang(rng), ang(rng), {(t % 3) * 0.2, 0.0}};
      const OptimizedSensitivity s = sensitivity(p);
      if (s.snr < 1e-6) {
        continue;
      }
      EXPECT_NEAR(direct_sensitivity(p, s.n_opt, s.m_opt) / s.snr, 1.0, 1e-8) << N << " " << p.mu << " " << p.nu;
    }
  }
}

TEST(DirectSensitivity, CommutatorSlopeMatchesFiniteDifference) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int t = 0; t < 20; ++t) {
    const ProtocolPoint p{3 + t % 9, ang(rng), ang(rng), {(t % 2) * 0.3, 0.0}};
    const OptimizedSensitivity s = sensitivity(p);
    const DirectMeasurement d = direct_measurement(p, s.n_opt, s.m_opt);
    if (std::abs(d.slope) < 1e-3) {
      continue;
    }
    EXPECT_NEAR(finite_difference_slope(p, s.n_opt, s.m_opt) / d.slope, 1.0, 1e-6);
  }
  const ProtocolPoint ind{5, 0.7, -0.4, {0.0, 0.3}};
  const OptimizedSensitivity s = sensitivity(ind);
  EXPECT_NEAR(finite_difference_slope(ind, s.n_opt, s.m_opt) / direct_measurement(ind, s.n_opt, s.m_opt).slope,
              1.0, 1e-6);
}

TEST(FullSpace, AgreesWithEmbeddedDickePath) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int N = 1; N <= 8; ++N) {
    const ProtocolPoint p{N, ang(rng), ang(rng), {N % 2 ? 0.0 : 0.4, 0.0}};
    const Direction n = Direction::from({0.2, 0.9, -0.3});
    const double phi = 0.37;
    const FullSpaceDensity full = full_space_protocol(p, n, phi);
    const FullSpaceDensity embedded = embed_dicke(protocol_density(p, n, phi));
    EXPECT_LT(max_abs(full.matrix - embedded.matrix), 1e-11) << N;
  }
  EXPECT_THROW(full_space_protocol({11, 0.1, 0.1, {}}, Direction::y(), 0.0), std::invalid_argument);
}

TEST(FullSpace, LoweringOperatorDamping) {
  const int N = 4;
  const double Sigma = 0.35, mu = 1.3;
  const FullSpaceDensity rho = embed_dicke(to_density(coherent_state(1.0, 0.4, N)));
  const FullSpaceDensity damped = individual_dephase(rho, Sigma, mu);
  const cplx i{0.0, 1.0};
  const CMatrix Sp = full_space_spin(N, 0) + i * full_space_spin(N, 1);
  const CMatrix Sm = Sp.adjoint();
  const CMatrix Sz = full_space_spin(N, 2);
  auto ev = [](const FullSpaceDensity& r, const CMatrix& op) { return cplx((op * r.matrix).trace()); };
  EXPECT_LT(std::abs(ev(damped, Sp) - std::exp(-Sigma * mu) * ev(rho, Sp)), 1e-12);
  const double f = std::exp(2 * Sigma * mu);
  const CMatrix Id = CMatrix::Identity(Sz.rows(), Sz.cols());
  const cplx rule_pm = (ev(rho, Sp * Sm) + ev(rho, 0.5 * N * Id + Sz) * (f - 1.0)) / f;
  const cplx rule_mp = (ev(rho, Sm * Sp) + ev(rho, 0.5 * N * Id - Sz) * (f - 1.0)) / f;
  EXPECT_LT(std::abs(ev(damped, Sp * Sm) - rule_pm), 1e-12);
  EXPECT_LT(std::abs(ev(damped, Sm * Sp) - rule_mp), 1e-12);
  EXPECT_LT(std::abs(ev(damped, Sz) - ev(rho, Sz)), 1e-12);
}

TEST(FullSpace, TracePreservedByChannels) {
  const FullSpaceDensity rho = full_space_protocol({6, 0.8, -0.2, {0.2, 0.6}}, Direction::z(), 0.4);
  EXPECT_NEAR(rho.matrix.trace().real(), 1.0, 1e-12);
  EXPECT_LT(max_abs(rho.matrix - rho.matrix.adjoint()), 1e-12);
}

TEST(SignalCurve, VanishesAtWorkingPointWithoutEcho) {
  for (int N : {3, 6, 10}) {
    const auto s = signal_curve({N, 0.6, 0.6, {0.1, 0.0}}, Direction::z(), Direction::y(), {0.0});
    EXPECT_NEAR(s[0], 0.0, 1e-12);
  }
}

namespace {

// Positions and values of the local extrema of |<S_y>| for the quarter-twist
// echo, rotating about y, on (0, pi/2].
std::vector<std::pair<double, double>> out_extrema(int N) {
  const ProtocolPoint p{N, kPi / 2, -kPi / 2, {}};
  std::vector<double> phis;
  for (int k = 1; k <= 4000; ++k) {
    phis.push_back(0.5 * kPi * k / 4000);
  }
  const auto sig = signal_curve(p, Direction::y(), Direction::y(), phis);
  std::vector<std::pair<double, double>> out;
  for (std::size_t k = 1; k + 1 < sig.size(); ++k) {
    const double v = std::abs(sig[k]);
    if (v >= std::abs(sig[k - 1]) && v >= std::abs(sig[k + 1])) {
      out.emplace_back(phis[k], v);
    }
  }
  return out;
}

}  // namespace

TEST(SignalCurve, EvenNOscillatesNTimesFaster) {
  for (int N : {4, 8, 16, 32}) {
    const auto ext = out_extrema(N);
    ASSERT_GE(ext.size(), 2u) << N;
    for (std::size_t k = 1; k < ext.size(); ++k) {
      EXPECT_NEAR(ext[k].first - ext[k - 1].first, kPi / N, 0.1 * kPi / N) << N;
      // No attenuation: every extremum stays comparable to the first.
      EXPECT_GT(ext[k].second, 0.5 * ext[0].second) << N;
    }
  }
}

TEST(SignalCurve, OddNStrongInitialSignalThenAttenuation) {
  for (int N : {5, 9, 17, 33}) {
    const auto ext = out_extrema(N);
    ASSERT_GE(ext.size(), 2u) << N;
    for (std::size_t k = 1; k < ext.size() && k < 5; ++k) {
      EXPECT_LT(ext[k].second, ext[k - 1].second) << N << " " << k;
    }
  }
  // The odd-N incline at phi = 0 is steeper than its even neighbour's.
  const double slope33 = direct_measurement({33, kPi / 2, -kPi / 2, {}}, Direction::y(), Direction::y()).slope;
  const double slope32 = direct_measurement({32, kPi / 2, -kPi / 2, {}}, Direction::y(), Direction::y()).slope;
  EXPECT_GT(std::abs(slope33), std::abs(slope32));
  // N = 3 has a single lobe on (0, pi/2]: no oscillation to attenuate.
  EXPECT_EQ(out_extrema(3).size(), 1u);
}

TEST(Wineland, CoherentStateIsOne) {
  EXPECT_NEAR(wineland_parameter(12, 0.0, 0.0), 1.0, 1e-12);
  EXPECT_LT(wineland_parameter(12, 0.3, 0.0), 1.0);
}

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "oatecho/optimizer.hpp"
#include "oatecho/qfi.hpp"

using namespace oatecho;

namespace {

// Pure-state QFI maximum: 4 times the largest eigenvalue of the symmetrized
// spin covariance of T_mu |x>.
double pure_state_qfi(double mu, int N) {
  const SpinOperators s = spin_operators(N);
  const DickeVector psi = apply_oat(x_state(N), mu);
  Eigen::Matrix3d cov;
  for (int k = 0; k < 3; ++k) {
    for (int l = 0; l < 3; ++l) {
      const cplx kl = psi.amplitudes.dot(s.axis(k) * s.axis(l) * psi.amplitudes);
      const cplx a = psi.amplitudes.dot(s.axis(k) * psi.amplitudes);
      const cplx b = psi.amplitudes.dot(s.axis(l) * psi.amplitudes);
      cov(k, l) = kl.real() - a.real() * b.real();
    }
  }
  cov = 0.5 * (cov + cov.transpose()).eval();
  return 4.0 * Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(cov).eigenvalues().maxCoeff();
}

}  // namespace

TEST(QfiClosedForm, Endpoints) {
  for (int N : {2, 4, 8, 32, 100}) {
    EXPECT_NEAR(qfi_closed_form_max(0.0, N) / N, 1.0, 1e-12);
    EXPECT_NEAR(qfi_closed_form_max(kPi, N) / (static_cast<double>(N) * N), 1.0, 1e-12);
  }
  EXPECT_NEAR(qfi_closed_form_max(kPi / 2, 2), 2.0 + std::sqrt(2.0), 1e-12);
  EXPECT_THROW(qfi_closed_form_max(0.3, 1), std::invalid_argument);
}

TEST(QfiClosedForm, MatchesPureStateVarianceAndSpectralQfi) {
  for (int N = 2; N <= 64; N += (N < 12 ? 1 : 7)) {
    for (int i = 0; i <= 32; ++i) {
      const double mu = kPi * i / 32;
      const double closed = qfi_closed_form_max(mu, N);
      EXPECT_NEAR(pure_state_qfi(mu, N) / closed, 1.0, 1e-8) << N << " " << mu;
      EXPECT_NEAR(qfi_max(mu, 0.0, N).value / closed, 1.0, 1e-8) << N << " " << mu;
    }
  }
}

TEST(DephasedInitialDensity, LimitsAndOracleAgreement) {
  const DickeDensity pure = dephased_initial_density(0.9, 0.0, 10);
  EXPECT_NEAR(purity(pure), 1.0, 1e-12);
  const DickeDensity zero = dephased_initial_density(0.0, 0.7, 10);
  EXPECT_LT((zero.matrix - to_density(x_state(10)).matrix).cwiseAbs().maxCoeff(), 1e-15);
  // The protocol with nu = mu and phi = 0 leaves the prepared state untouched.
  const DickeDensity a = dephased_initial_density(0.7, 0.2, 8);
  const DickeDensity b = protocol_density({8, 0.7, 0.7, {0.2, 0.0}}, Direction::z(), 0.0);
  EXPECT_LT((a.matrix - b.matrix).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(a.matrix.trace().real(), 1.0, 1e-12);
}

TEST(QfiMatrix, PureCoherentState) {
  const Mat3 F = qfi_matrix(to_density(x_state(4)));
  EXPECT_NEAR(F[0][0], 0.0, 1e-12);
  EXPECT_NEAR(F[1][1], 4.0, 1e-12);
  EXPECT_NEAR(F[2][2], 4.0, 1e-12);
}

TEST(QfiMatrix, MaximallyMixedIsZero) {
  const DickeDensity rho{6, CMatrix::Identity(7, 7) / 7.0};
  EXPECT_LT(frobenius_norm(qfi_matrix(rho)), 1e-12);
}

TEST(QfiMatrix, PureStatesGiveFourTimesCovariance) {
  const SpinOperators s = spin_operators(7);
  const DickeVector psi = rotate(apply_oat(x_state(7), 0.8), Direction::from({1, 2, 3}), 0.5);
  const Mat3 F = qfi_matrix(to_density(psi));
  for (int k = 0; k < 3; ++k) {
    for (int l = 0; l < 3; ++l) {
      const double kl = psi.amplitudes.dot(0.5 * (s.axis(k) * s.axis(l) + s.axis(l) * s.axis(k)) * psi.amplitudes).real();
      const double a = psi.amplitudes.dot(s.axis(k) * psi.amplitudes).real();
      const double b = psi.amplitudes.dot(s.axis(l) * psi.amplitudes).real();
      EXPECT_NEAR(F[k][l], 4.0 * (kl - a * b), 1e-9);
    }
  }
}

TEST(QfiMatrix, BoundedAndPositive) {
  for (int N : {3, 10, 24}) {
    for (double mu : {0.2, 1.0, 2.5, kPi}) {
      for (double sigma : {0.0, 0.1, 1.0}) {
        const Mat3 F = qfi_matrix(dephased_initial_density(mu, sigma, N));
        const SymmetricEigen3 e = eigen_symmetric(F);
        EXPECT_GE(e.values[2], -1e-9 * N);
        EXPECT_LE(e.values[0], static_cast<double>(N) * N + 1e-6);
        EXPECT_LT(max_abs_diff(F, transpose(F)), 1e-12);
      }
    }
  }
}

TEST(QfiMax, ZeroTwistAndHeisenbergLimit) {
  const QfiResult z = qfi_max(0.0, 0.4, 12);
  EXPECT_NEAR(z.value, 12.0, 1e-10);
  EXPECT_NEAR(z.axis[0], 0.0, 1e-9);
  const QfiResult g = qfi_max(kPi, 0.0, 4);
  EXPECT_NEAR(g.value, 16.0, 1e-10);
}

TEST(QfiMax, DephasingStrictlyLowersQfi) {
  for (int N : {8, 32}) {
    for (int i = 1; i <= 16; ++i) {
      const double mu = kPi * i / 16;
      EXPECT_LT(qfi_max(mu, 0.5, N).value, qfi_max(mu, 0.0, N).value) << N << " " << mu;
    }
  }
}

TEST(Qcrb, HoldsForNoiselessAndDephased) {
  std::vector<double> mus;
  for (int i = 0; i <= 64; ++i) {
    mus.push_back(kPi * i / 64);
  }
  for (double sigma : {0.0, 0.1}) {
    const QcrbReport r = qcrb_check(32, {sigma, 0.0}, mus);
    EXPECT_LE(r.max_violation, 1e-9) << sigma;
    EXPECT_NEAR(r.per_mu.front().relative_excess, 0.0, 1e-9);
  }
  EXPECT_THROW(qcrb_check(8, {0.0, 0.5}, {0.1}), std::invalid_argument);
}

TEST(Qcrb, OutProtocolsApproachTheBoundWithN) {
  double prev = 0.0;
  for (int N : {128, 256, 512}) {
    const auto m = class_maximum(ProtocolClass::OverUnTwisting, N, {});
    ASSERT_TRUE(m.has_value());
    const double ratio = m->snr * m->snr / qfi_max(m->mu, 0.0, N).value;
    EXPECT_GT(ratio, prev) << N;
    EXPECT_LE(ratio, 1.0 + 1e-9);
    prev = ratio;
  }
}

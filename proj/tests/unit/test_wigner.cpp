#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oatecho/wigner.hpp"

using namespace oatecho;

namespace {

CMatrix random_hermitian(int N, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix a(N + 1, N + 1);
  for (int i = 0; i <= N; ++i) {
    for (int j = 0; j <= N; ++j) {
      a(i, j) = cplx(g(rng), g(rng));
    }
  }
  return 0.5 * (a + a.adjoint());
}

}  // namespace

TEST(ClebschGordan, TableValues) {
  EXPECT_NEAR(clebsch_gordan(0.5, 0.5, 0.5, -0.5, 1, 0), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(clebsch_gordan(0.5, 0.5, 0.5, -0.5, 0, 0), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(clebsch_gordan(0.5, -0.5, 0.5, 0.5, 0, 0), -1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(clebsch_gordan(1, 1, 1, -1, 2, 0), 1.0 / std::sqrt(6.0), 1e-15);
  EXPECT_NEAR(clebsch_gordan(1, 0, 1, 0, 1, 0), 0.0, 1e-15);
  for (double j : {0.5, 1.0, 3.5, 12.0}) {
    for (double m = -j; m <= j; m += 1.0) {
      EXPECT_NEAR(clebsch_gordan(j, m, 0, 0, j, m), 1.0, 1e-13);
    }
  }
}

TEST(ClebschGordan, SelectionRules) {
  EXPECT_EQ(clebsch_gordan(1, 1, 1, 1, 1, 1), 0.0);
  EXPECT_EQ(clebsch_gordan(1, 0, 1, 0, 3, 0), 0.0);
  EXPECT_EQ(clebsch_gordan(0.5, 0.5, 1, 0, 1, 0.5), 0.0);
  EXPECT_EQ(clebsch_gordan(1, 2, 1, 0, 2, 2), 0.0);
  EXPECT_EQ(clebsch_gordan(0.3, 0.3, 1, 0, 1, 0.3), 0.0);
}

TEST(ClebschGordan, CompletenessForRandomPairs) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> twice(0, 24);
  for (int t = 0; t < 60; ++t) {
    const double j1 = 0.5 * twice(rng), j2 = 0.5 * twice(rng);
    std::uniform_int_distribution<int> k1(0, static_cast<int>(2 * j1)), k2(0, static_cast<int>(2 * j2));
    const double m1 = -j1 + k1(rng), m2 = -j2 + k2(rng);
    double sum = 0.0;
    for (double J = std::abs(j1 - j2); J <= j1 + j2 + 1e-9; J += 1.0) {
      const double c = clebsch_gordan(j1, m1, j2, m2, J, m1 + m2);
      sum += c * c;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12) << j1 << " " << m1 << " " << j2 << " " << m2;
  }
}

TEST(MultipoleOperator, ScalarAndVector) {
  for (int N : {1, 4, 9}) {
    const CMatrix T00 = multipole_operator(0, 0, N);
    EXPECT_LT((T00 - CMatrix::Identity(N + 1, N + 1) / std::sqrt(N + 1.0)).cwiseAbs().maxCoeff(), 1e-14);
    const CMatrix T10 = multipole_operator(1, 0, N);
    const CMatrix Sz = spin_operators(N).Sz;
    const cplx ratio = (T10.adjoint() * Sz).trace() / (Sz.adjoint() * Sz).trace();
    EXPECT_LT((T10 - ratio * Sz).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_GT(ratio.real(), 0.0);
  }
  EXPECT_THROW(multipole_operator(3, 0, 2), std::invalid_argument);
  EXPECT_THROW(multipole_operator(1, 2, 4), std::invalid_argument);
}

TEST(MultipoleOperator, Orthonormality) {
  const int N = 6;
  std::vector<CMatrix> ops;
  for (int K = 0; K <= N; ++K) {
    for (int Q = -K; Q <= K; ++Q) {
      ops.push_back(multipole_operator(K, Q, N));
    }
  }
  for (std::size_t a = 0; a < ops.size(); ++a) {
    for (std::size_t b = 0; b < ops.size(); ++b) {
      const cplx ip = (ops[a] * ops[b].adjoint()).trace();
      EXPECT_NEAR(std::abs(ip - cplx(a == b ? 1.0 : 0.0, 0.0)), 0.0, 1e-12);
    }
  }
}

TEST(WignerField, IdentityIsConstant) {
  const WignerField w = wigner_field(CMatrix::Identity(3, 3), 5, 10);
  for (double v : w.samples) {
    EXPECT_NEAR(v, std::sqrt(3.0) / std::sqrt(4 * kPi), 1e-12);
  }
  EXPECT_NEAR(std::sqrt(3.0 / (4 * kPi)), 0.48860, 1e-5);
}

TEST(WignerField, CoherentStatePeaksOnPlusX) {
  for (int N : {2, 5, 12}) {
    const WignerField w = wigner_field(to_density(x_state(N)), 2 * N + 1, 4 * N + 2);
    std::size_t best = 0;
    for (std::size_t k = 1; k < w.samples.size(); ++k) {
      if (w.samples[k] > w.samples[best]) {
        best = k;
      }
    }
    EXPECT_NEAR(w.theta[best / w.phi.size()], kPi / 2, 1e-12);
    EXPECT_NEAR(w.phi[best % w.phi.size()], 0.0, 1e-12);
    EXPECT_LT(w.max_imag, 1e-10);
  }
}

TEST(WignerField, QuarterTwistIsFourEquatorialCoherentStates) {
  const int N = 32;
  const WignerField w = wigner_field(to_density(apply_oat(x_state(N), kPi / 2)), 0, 0);
  const int count = 64;
  std::vector<double> weight;
  for (int j = 0; j < count; ++j) {
    const WignerField c = wigner_field(to_density(coherent_state(kPi / 2, 2 * kPi * j / count, N)), 0, 0);
    weight.push_back(sphere_overlap(w, c));
  }
  std::vector<int> peaks;
  for (int j = 0; j < count; ++j) {
    const double l = weight[(j + count - 1) % count], r = weight[(j + 1) % count];
    if (weight[j] > l && weight[j] > r && weight[j] > 0.2) {
      peaks.push_back(j);
    }
  }
  ASSERT_EQ(peaks.size(), 4u);
  for (int k = 0; k < 4; ++k) {
    EXPECT_EQ(peaks[static_cast<std::size_t>(k)], k * count / 4);
    EXPECT_NEAR(weight[static_cast<std::size_t>(peaks[static_cast<std::size_t>(k)])], 0.25, 1e-3);
  }
}

TEST(SphereOverlap, IdentityAndMismatch) {
  const WignerField i2 = wigner_field(CMatrix::Identity(3, 3), 0, 0);
  EXPECT_NEAR(sphere_overlap(i2, i2), 3.0, 1e-12);
  const WignerField i3 = wigner_field(CMatrix::Identity(4, 4), 0, 0);
  EXPECT_THROW(sphere_overlap(i2, i3), std::invalid_argument);
}

TEST(SphereOverlap, TraceIdentityAndQuadrature) {
  std::mt19937_64 rng(12);
  for (int N : {1, 4, 8, 16}) {
    for (int t = 0; t < 5; ++t) {
      const CMatrix A = random_hermitian(N, rng), B = random_hermitian(N, rng);
      const WignerField wa = wigner_field(A, 2 * N + 1, 4 * N + 2);
      const WignerField wb = wigner_field(B, 2 * N + 1, 4 * N + 2);
      const double exact = (A * B.adjoint()).trace().real();
      const double scale = A.norm() * B.norm();
      EXPECT_LE(std::abs(sphere_overlap(wa, wb) - exact), 1e-9 * scale);
      EXPECT_NEAR(sphere_overlap_quadrature(wa, wb), sphere_overlap(wa, wb), 1e-8 * scale);
      EXPECT_LT(wa.max_imag, 1e-10 * A.norm());
      double self = 0.0;
      for (const cplx& c : wa.coefficients) {
        self += std::norm(c);
      }
      EXPECT_NEAR(self / (A.adjoint() * A).trace().real(), 1.0, 1e-9);
    }
  }
}

TEST(WignerField, RotationAboutZShiftsAzimuth) {
  std::mt19937_64 rng(14);
  const int N = 7;
  const CMatrix A = random_hermitian(N, rng);
  const double alpha = 0.731;
  const CMatrix U = rotation_unitary(N, Direction::z(), alpha);
  const WignerField w = wigner_field(A, 0, 0);
  const WignerField wr = wigner_field(CMatrix(U * A * U.adjoint()), 0, 0);
  for (double theta : {0.3, 1.2, 2.0}) {
    for (double phi : {0.0, 1.0, 4.0}) {
      EXPECT_NEAR(wigner_value(wr, theta, phi).real(), wigner_value(w, theta, phi - alpha).real(), 1e-8);
    }
  }
}

TEST(OutMechanism, OverlapReproducesEchoSignal) {
  const OutMechanismReport r = out_mechanism_report(32, kPi / 2, -0.02, 1, 1);
  EXPECT_NEAR(r.overlap / r.oracle_expectation, 1.0, 1e-9);
  const OutMechanismReport flipped = out_mechanism_report(32, kPi / 2, 0.02, 1, 1);
  EXPECT_LT(r.overlap * flipped.overlap, 0.0);
  const OutMechanismReport still = out_mechanism_report(32, kPi / 2, 0.0, 1, 1);
  EXPECT_NEAR(still.overlap, 0.0, 1e-9);
  EXPECT_NEAR(still.oracle_expectation, 0.0, 1e-9);
}

TEST(OutMechanism, OddNStrongInclineThenAttenuation) {
  std::vector<double> signal;
  for (int k = 0; k <= 40; ++k) {
    signal.push_back(out_mechanism_report(33, kPi / 2, 0.01 * k, 1, 1).overlap);
  }
  double early = 0.0, late = 0.0;
  for (int k = 0; k <= 40; ++k) {
    (k <= 10 ? early : late) = std::max(k <= 10 ? early : late, std::abs(signal[k]));
  }
  EXPECT_GT(std::abs(signal[1]), 0.0);
  EXPECT_GT(early, late);
}

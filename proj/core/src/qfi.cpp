#include "oatecho/qfi.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "oatecho/optimizer.hpp"
#include "oatecho/parallel.hpp"

namespace oatecho {

double qfi_closed_form_max(double mu, int N) {
  if (N < 2) {
    throw std::invalid_argument("closed-form QFI requires N >= 2");
  }
  const double n = N;
  const double A = 1.0 - stable_cos_pow(std::cos(mu), N - 2);
  const double B = 4.0 * std::sin(0.5 * mu) * stable_cos_pow(std::cos(0.5 * mu), N - 2);
  const double first = n + 0.25 * n * (n - 1.0) * (A + std::sqrt(A * A + B * B));
  const double second = n * n * (1.0 - stable_cos_pow(std::cos(0.5 * mu), 2 * N - 2)) - 0.5 * n * (n - 1.0) * A;
  return std::max(first, second);
}

DickeDensity dephased_initial_density(double mu, double sigma, int N) {
  if (!(sigma >= 0.0)) {
    throw std::invalid_argument("sigma must be >= 0");
  }
  return collective_dephase(apply_oat(to_density(x_state(N)), mu), sigma, mu);
}

Mat3 qfi_matrix(const DickeDensity& rho) {
  const SpinOperators ops = spin_operators(rho.N);
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(rho.matrix);
  Eigen::VectorXd p = eig.eigenvalues().cwiseMax(0.0);
  const CMatrix& V = eig.eigenvectors();
  const double cut = 1e-14 * p.maxCoeff();
  const Eigen::Index d = p.size();

  std::array<CMatrix, 3> A;
  for (int k = 0; k < 3; ++k) {
    A[k] = V.adjoint() * ops.axis(k) * V;
  }

  Mat3 F{};
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      const double sum = p(a) + p(b);
      if (!(sum > cut)) {
        continue;
      }
      const double diff = p(a) - p(b);
      const double w = diff * diff / sum;
      if (w == 0.0) {
        continue;
      }
      for (int k = 0; k < 3; ++k) {
        for (int l = k; l < 3; ++l) {
          F[k][l] += 2.0 * w * (A[k](b, a) * A[l](a, b)).real();
        }
      }
    }
  }
  for (int k = 0; k < 3; ++k) {
    for (int l = 0; l < k; ++l) {
      F[k][l] = F[l][k];
    }
  }
  return F;
}

QfiResult qfi_max(double mu, double sigma, int N) {
  QfiResult out;
  out.matrix = qfi_matrix(dephased_initial_density(mu, sigma, N));
  const SymmetricEigen3 eig = eigen_symmetric(out.matrix);
  out.value = eig.values[0];
  const double scale = std::max(std::abs(eig.values[0]), std::numeric_limits<double>::min());
  int degenerate = 1;
  while (degenerate < 3 && eig.values[degenerate] >= eig.values[0] - 1e-9 * scale) {
    ++degenerate;
  }
  std::array<Vec3, 3> span{};
  for (int i = 0; i < degenerate; ++i) {
    span[i] = eig.vector(i);
  }
  out.axis = Direction::from(canonical_unit_in_span(span, degenerate));
  return out;
}

QcrbReport qcrb_check(int N, const NoiseModel& noise, const std::vector<double>& mu_values, int threads) {
  validate(noise);
  if (noise.Sigma > 0.0) {
    throw std::invalid_argument("QFI comparison supports collective dephasing only");
  }
  const std::vector<SliceRow> slice = nu_optimized_slice(mu_values, N, noise, default_nu_search(), threads);
  QcrbReport report;
  report.per_mu.resize(mu_values.size());
  parallel_for(mu_values.size(), threads, [&](std::size_t i) {
    QcrbRow row;
    row.mu = mu_values[i];
    row.snr_sq = slice[i].snr_sq_over_N * N;
    row.fisher = qfi_max(mu_values[i], noise.sigma, N).value;
    row.relative_excess = (row.snr_sq - row.fisher) / row.fisher;
    report.per_mu[i] = row;
  });
  report.max_violation = -std::numeric_limits<double>::infinity();
  for (const auto& row : report.per_mu) {
    report.max_violation = std::max(report.max_violation, row.relative_excess);
  }
  return report;
}

}  // namespace oatecho

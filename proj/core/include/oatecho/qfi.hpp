#pragma once

// Quantum Fisher information of the twisted initial state and the
// Cramer-Rao comparison with the optimized echo sensitivity.

#include <vector>

#include "oatecho/core.hpp"
#include "oatecho/linalg3.hpp"
#include "oatecho/oracle.hpp"

namespace oatecho {

struct QfiResult {
  double value = 0.0;
  Direction axis{};
  Mat3 matrix{};
};

/// Noiseless maximum over rotation axes, for N >= 2:
///   max{ N + N(N-1)/4 (A + sqrt(A^2 + B^2)),
///        N^2 (1 - cos^(2N-2)(mu/2)) - N(N-1) A / 2 }
/// with A = 1 - cos^(N-2)(mu), B = 4 sin(mu/2) cos^(N-2)(mu/2).
double qfi_closed_form_max(double mu, int N);

/// T_mu |x><x| T_mu^+ with collective dephasing of strength sigma |mu|.
DickeDensity dephased_initial_density(double mu, double sigma, int N);

/// Spectral QFI matrix over the generators Sx, Sy, Sz. Eigenvalue pairs with
/// p + p' <= 1e-14 max(p) are skipped; negative eigenvalues are clamped to 0.
Mat3 qfi_matrix(const DickeDensity& rho);

/// Largest eigenvalue and eigenvector of qfi_matrix(dephased_initial_density).
/// A degenerate maximum resolves to the axis nearest z, then y, then x.
QfiResult qfi_max(double mu, double sigma, int N);

struct QcrbRow {
  double mu = 0.0;
  double snr_sq = 0.0;  // max over nu of snr^2
  double fisher = 0.0;  // F_Q of the dephased initial state
  double relative_excess = 0.0;  // (snr_sq - fisher) / fisher
};

struct QcrbReport {
  double max_violation = 0.0;
  std::vector<QcrbRow> per_mu;
};

/// Collective-only noise (throws for Sigma > 0).
QcrbReport qcrb_check(int N, const NoiseModel& noise, const std::vector<double>& mu_values, int threads = 0);

}  // namespace oatecho

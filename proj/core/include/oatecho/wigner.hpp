#pragma once

// Spherical Wigner functions of Dicke-space operators via the orthonormal
// multipole basis T_KQ, and the split-evolution picture of the
// over-un-twisting echo.

#include <memory>
#include <vector>

#include "oatecho/core.hpp"
#include "oatecho/oracle.hpp"

namespace oatecho {

/// <j1 m1; j2 m2 | J M> in the Condon-Shortley convention. Arguments are
/// integers or half-integers; any violated selection rule gives 0.
double clebsch_gordan(double j1, double m1, double j2, double m2, double J, double M);

/// Index of (K, Q) in coefficient arrays.
inline int multipole_index(int K, int Q) { return K * K + K + Q; }

/// T_KQ for spin S = N/2: (T_KQ)_{m m'} = sqrt((2K+1)/(2S+1)) <S m'; K Q | S m>.
/// Each operator has a single nonzero diagonal m = m' + Q, stored as
/// `diagonals[multipole_index(K, Q)][k']` for Dicke column index k'.
struct MultipoleBasis {
  int N = 0;
  std::vector<std::vector<double>> diagonals;

  [[nodiscard]] CMatrix dense(int K, int Q) const;
};

/// Shared, immutable basis for N (cached).
std::shared_ptr<const MultipoleBasis> multipole_basis(int N);

/// Dense T_KQ. Throws for K outside [0, N] or |Q| > K.
CMatrix multipole_operator(int K, int Q, int N);

struct WignerField {
  int N = 0;
  /// A_KQ = tr(A T_KQ^+), indexed by multipole_index.
  std::vector<cplx> coefficients;
  /// Gauss-Legendre polar nodes (ascending) with their weights.
  std::vector<double> theta;
  std::vector<double> theta_weights;
  /// Uniform azimuthal nodes 2 pi j / count.
  std::vector<double> phi;
  /// samples[i * phi.size() + j] = W(theta[i], phi[j]) (real part).
  std::vector<double> samples;
  /// Largest |Im W| encountered while sampling.
  double max_imag = 0.0;

  [[nodiscard]] double at(std::size_t i, std::size_t j) const { return samples[i * phi.size() + j]; }
};

/// Field of an operator on the Dicke space. theta_count or phi_count of 0
/// computes coefficients only.
WignerField wigner_field(const CMatrix& op, int theta_count, int phi_count);
WignerField wigner_field(const DickeDensity& rho, int theta_count, int phi_count);

/// Evaluates the expansion at an arbitrary point.
cplx wigner_value(const WignerField& field, double theta, double phi);

/// sum_KQ A_KQ conj(B_KQ) = tr(A B^+) (real part). Throws on mismatched N.
double sphere_overlap(const WignerField& a, const WignerField& b);

/// Quadrature of W_a W_b sin(theta) over the sampled grid; both fields must
/// share the same grid.
double sphere_overlap_quadrature(const WignerField& a, const WignerField& b);

/// Gauss-Legendre nodes in cos(theta), mapped to theta ascending.
void gauss_legendre_theta(int count, std::vector<double>& theta, std::vector<double>& weights);

struct OutMechanismReport {
  WignerField state_field;
  WignerField measurement_field;
  double overlap = 0.0;
  double oracle_expectation = 0.0;
};

/// State T_{-mu} R_y(phi) T_mu |x> and measurement operator T_mu S_y T_mu^+,
/// so that their overlap is <S_y> of the echo with nu = -mu. Sample counts of
/// 0 select 2N+1 polar and 4N+2 azimuthal nodes.
OutMechanismReport out_mechanism_report(int N, double mu, double phi, int theta_count = 0, int phi_count = 0);

}  // namespace oatecho

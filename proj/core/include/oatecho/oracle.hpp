#pragma once

// Brute-force ground truth. The symmetric (Dicke) path handles noiseless and
// collectively dephased protocols for any moderate N; the full 2^N product
// space path adds individual dephasing for N <= 10.
//
// Dicke index k = 0..N corresponds to m = k - N/2. In the product space, bit
// q of a basis index is 1 when qubit q points up.

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "oatecho/core.hpp"
#include "oatecho/moments.hpp"

namespace oatecho {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr int kFullSpaceMaxN = 10;

struct SpinOperators {
  int N = 0;
  CMatrix Sx, Sy, Sz;

  /// n_x Sx + n_y Sy + n_z Sz.
  [[nodiscard]] CMatrix along(const Direction& n) const;
  [[nodiscard]] const CMatrix& axis(int k) const { return k == 0 ? Sx : (k == 1 ? Sy : Sz); }
};

SpinOperators spin_operators(int N);

struct DickeVector {
  int N = 0;
  CVector amplitudes;
};

struct DickeDensity {
  int N = 0;
  CMatrix matrix;
};

DickeDensity to_density(const DickeVector& psi);

/// |theta, phi> with amplitudes sqrt(C(N,k)) sin^k(theta/2) cos^(N-k)(theta/2) e^{-ik phi}.
DickeVector coherent_state(double theta, double phi, int N);

/// Coherent state along +x, the protocol's initial state.
DickeVector x_state(int N);

/// T_mu = exp(-i mu Sz^2 / 2).
DickeVector apply_oat(const DickeVector& psi, double mu);
DickeDensity apply_oat(const DickeDensity& rho, double mu);

/// Collective dephasing channel of duration-strength |mu|: element (m, m')
/// is multiplied by exp(-sigma (m - m')^2 |mu| / 4).
DickeDensity collective_dephase(const DickeDensity& rho, double sigma, double mu);

/// exp(-i angle S_n), built from the eigendecomposition of S_n.
CMatrix rotation_unitary(int N, const Direction& axis, double angle);
DickeVector rotate(const DickeVector& psi, const Direction& axis, double angle);
DickeDensity rotate(const DickeDensity& rho, const Direction& axis, double angle);

/// Final density D[T_{nu-mu} R_n(phi) D[T_mu |x><x| T_mu^+] R_n^+ T_{nu-mu}^+]
/// with collective dephasing D. Throws for Sigma > 0.
DickeDensity protocol_density(const ProtocolPoint& point, const Direction& n, double phi);

struct FullSpaceDensity {
  int N = 0;
  CMatrix matrix;
};

/// Same protocol in the 2^N product space, including individual dephasing.
/// Throws for N > 10.
FullSpaceDensity full_space_protocol(const ProtocolPoint& point, const Direction& n, double phi);

/// Multiplies every single-qubit z-basis coherence by exp(-Sigma |mu|).
FullSpaceDensity individual_dephase(const FullSpaceDensity& rho, double Sigma, double mu);

/// Isometric image of a symmetric-subspace density in the product space.
FullSpaceDensity embed_dicke(const DickeDensity& rho);

/// Collective spin component k (0, 1, 2 for x, y, z) or along a direction,
/// as a dense product-space matrix.
CMatrix full_space_spin(int N, int k);
CMatrix full_space_spin(int N, const Direction& n);

double expectation(const DickeDensity& rho, const CMatrix& op);
double expectation(const FullSpaceDensity& rho, const CMatrix& op);

double purity(const DickeDensity& rho);

struct DirectMeasurement {
  double slope = 0.0;     // d<S_m>/dphi at phi = 0
  double variance = 0.0;  // Var(S_m) at phi = 0
  double snr = 0.0;       // |slope| / sqrt(variance)
};

/// Slope from the exact commutator at phi = 0, variance from the final
/// state. Uses the product space when Sigma > 0. Throws
/// std::domain_error("degenerate measurement") when Var <= 1e-12 (N/2)^2.
DirectMeasurement direct_measurement(const ProtocolPoint& point, const Direction& n, const Direction& m);
double direct_sensitivity(const ProtocolPoint& point, const Direction& n, const Direction& m);

/// Richardson-extrapolated central difference of <S_m>(phi) at 0.
double finite_difference_slope(const ProtocolPoint& point, const Direction& n, const Direction& m,
                               double step = 1e-5);

/// <S_m>(phi) for each phi.
std::vector<double> signal_curve(const ProtocolPoint& point, const Direction& n, const Direction& m,
                                 const std::vector<double>& phi_values);

/// M, Q and j computed from the simulated states. Product-space path when
/// Sigma > 0.
MomentMatrices oracle_moment_matrices(const ProtocolPoint& point);

/// Largest absolute entry deviation between the oracle and `analytic`,
/// divided by N^2. The one-argument form uses moment_matrices(point).
double verify_moment_matrices(const ProtocolPoint& point, const MomentMatrices& analytic);
double verify_moment_matrices(const ProtocolPoint& point);

/// N Var_min / |<S>|^2 with the minimum over directions perpendicular to the
/// mean spin.
double wineland_parameter(const DickeDensity& rho);

/// Same, for the state after the first twist (with collective dephasing).
double wineland_parameter(int N, double mu, double sigma);

}  // namespace oatecho

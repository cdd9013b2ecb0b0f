#include "oatecho/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace oatecho {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_N(int N) {
  if (N < 1) {
    throw std::invalid_argument("N must be >= 1");
  }
}

void require_full_space(int N) {
  require_N(N);
  if (N > kFullSpaceMaxN) {
    throw std::invalid_argument("product-space path supports N <= " + std::to_string(kFullSpaceMaxN) +
                                ", got " + std::to_string(N));
  }
}

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Elementwise stage map in the Dicke basis: twist by t with collective
// dephasing of strength sigma |t|.
CMatrix dicke_stage(int N, double t, double sigma) {
  const int d = N + 1;
  CMatrix F(d, d);
  const double half = 0.5 * N;
  for (int a = 0; a < d; ++a) {
    const double ma = a - half;
    for (int b = 0; b < d; ++b) {
      const double mb = b - half;
      const double damp = -sigma * std::abs(t) * (ma - mb) * (ma - mb) / 4.0;
      F(a, b) = std::exp(cplx(damp, -0.5 * t * (ma * ma - mb * mb)));
    }
  }
  return F;
}

CMatrix full_stage(int N, double t, const NoiseModel& noise) {
  const Eigen::Index D = Eigen::Index{1} << N;
  CMatrix F(D, D);
  const double half = 0.5 * N;
  for (Eigen::Index a = 0; a < D; ++a) {
    const double ma = std::popcount(static_cast<unsigned>(a)) - half;
    for (Eigen::Index b = 0; b < D; ++b) {
      const double mb = std::popcount(static_cast<unsigned>(b)) - half;
      const int flips = std::popcount(static_cast<unsigned>(a ^ b));
      const double damp = -noise.sigma * std::abs(t) * (ma - mb) * (ma - mb) / 4.0 -
                          noise.Sigma * std::abs(t) * flips;
      F(a, b) = std::exp(cplx(damp, -0.5 * t * (ma * ma - mb * mb)));
    }
  }
  return F;
}

// Single-qubit n.s in the (down, up) ordering.
Eigen::Matrix2cd qubit_spin(const Vec3& n) {
  Eigen::Matrix2cd s;
  s(0, 0) = -0.5 * n[2];
  s(1, 1) = 0.5 * n[2];
  s(0, 1) = 0.5 * cplx(n[0], n[1]);
  s(1, 0) = 0.5 * cplx(n[0], -n[1]);
  return s;
}

Vec3 unit(int k) {
  Vec3 e{0.0, 0.0, 0.0};
  e[static_cast<std::size_t>(k)] = 1.0;
  return e;
}

// u X with u acting on qubit q.
void apply_qubit_left(const Eigen::Matrix2cd& u, int q, const CMatrix& X, CMatrix& out, bool accumulate) {
  const Eigen::Index D = X.rows();
  const Eigen::Index bit = Eigen::Index{1} << q;
  if (!accumulate) {
    out.setZero(D, X.cols());
  }
  for (Eigen::Index a0 = 0; a0 < D; ++a0) {
    if ((a0 & bit) != 0) {
      continue;
    }
    const Eigen::Index a1 = a0 | bit;
    out.row(a0) += u(0, 0) * X.row(a0) + u(0, 1) * X.row(a1);
    out.row(a1) += u(1, 0) * X.row(a0) + u(1, 1) * X.row(a1);
  }
}

// S_n X in the product space, O(N 4^N).
CMatrix full_spin_left(int N, const Vec3& n, const CMatrix& X) {
  const Eigen::Matrix2cd s = qubit_spin(n);
  CMatrix out = CMatrix::Zero(X.rows(), X.cols());
  for (int q = 0; q < N; ++q) {
    apply_qubit_left(s, q, X, out, true);
  }
  return out;
}

CMatrix full_spin_commutator(int N, const Vec3& n, const CMatrix& X) {
  const CMatrix left = full_spin_left(N, n, X);
  const CMatrix right = full_spin_left(N, n, X.adjoint()).adjoint();
  return left - right;
}

// tr(S_n Y) without forming S_n.
cplx full_spin_trace(int N, const Vec3& n, const CMatrix& Y) {
  const Eigen::Matrix2cd s = qubit_spin(n);
  const Eigen::Index D = Y.rows();
  cplx acc{0.0, 0.0};
  for (int q = 0; q < N; ++q) {
    const Eigen::Index bit = Eigen::Index{1} << q;
    for (Eigen::Index a = 0; a < D; ++a) {
      const int ba = (a & bit) != 0 ? 1 : 0;
      acc += s(ba, ba) * Y(a, a);
      acc += s(ba, 1 - ba) * Y(a ^ bit, a);
    }
  }
  return acc;
}

CMatrix full_rotate(int N, const Vec3& n, double angle, const CMatrix& rho) {
  const Eigen::Matrix2cd u = std::cos(0.5 * angle) * Eigen::Matrix2cd::Identity() -
                             kI * std::sin(0.5 * angle) * 2.0 * qubit_spin(n);
  CMatrix cur = rho;
  CMatrix tmp;
  for (int q = 0; q < N; ++q) {
    apply_qubit_left(u, q, cur, tmp, false);
    CMatrix adj = tmp.adjoint();
    apply_qubit_left(u, q, adj, cur, false);
    cur.adjointInPlace();
  }
  return cur;
}

CMatrix full_x_density(int N) {
  const Eigen::Index D = Eigen::Index{1} << N;
  return CMatrix::Constant(D, D, cplx(1.0 / static_cast<double>(D), 0.0));
}

DickeDensity dicke_prepared(const ProtocolPoint& p) {
  DickeDensity rho = to_density(x_state(p.N));
  rho.matrix = rho.matrix.cwiseProduct(dicke_stage(p.N, p.mu, p.noise.sigma));
  return rho;
}

CMatrix full_prepared(const ProtocolPoint& p) {
  return full_x_density(p.N).cwiseProduct(full_stage(p.N, p.mu, p.noise));
}

void require_dicke_path(const ProtocolPoint& p) {
  validate(p);
  if (p.noise.Sigma > 0.0) {
    throw std::invalid_argument("individual dephasing needs the product-space path");
  }
}

double variance_floor(int N) { return 1e-12 * 0.25 * N * N; }

}  // namespace

CMatrix SpinOperators::along(const Direction& n) const { return n[0] * Sx + n[1] * Sy + n[2] * Sz; }

SpinOperators spin_operators(int N) {
  require_N(N);
  const int d = N + 1;
  const double S = 0.5 * N;
  CMatrix Sp = CMatrix::Zero(d, d);
  SpinOperators ops;
  ops.N = N;
  ops.Sz = CMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    const double m = k - S;
    ops.Sz(k, k) = m;
    if (k + 1 < d) {
      Sp(k + 1, k) = std::sqrt((S - m) * (S + m + 1.0));
    }
  }
  const CMatrix Sm = Sp.adjoint();
  ops.Sx = 0.5 * (Sp + Sm);
  ops.Sy = (Sp - Sm) / (2.0 * kI);
  return ops;
}

DickeDensity to_density(const DickeVector& psi) {
  return DickeDensity{psi.N, psi.amplitudes * psi.amplitudes.adjoint()};
}

DickeVector coherent_state(double theta, double phi, int N) {
  require_N(N);
  DickeVector psi{N, CVector(N + 1)};
  const double s = std::sin(0.5 * theta);
  const double c = std::cos(0.5 * theta);
  for (int k = 0; k <= N; ++k) {
    const double mag = std::exp(0.5 * log_binomial(N, k)) * stable_cos_pow(s, k) * stable_cos_pow(c, N - k);
    psi.amplitudes(k) = mag * std::exp(cplx(0.0, -k * phi));
  }
  return psi;
}

DickeVector x_state(int N) { return coherent_state(0.5 * kPi, 0.0, N); }

DickeVector apply_oat(const DickeVector& psi, double mu) {
  DickeVector out = psi;
  const double half = 0.5 * psi.N;
  for (Eigen::Index k = 0; k < out.amplitudes.size(); ++k) {
    const double m = static_cast<double>(k) - half;
    out.amplitudes(k) *= std::exp(cplx(0.0, -0.5 * mu * m * m));
  }
  return out;
}

DickeDensity apply_oat(const DickeDensity& rho, double mu) {
  return DickeDensity{rho.N, rho.matrix.cwiseProduct(dicke_stage(rho.N, mu, 0.0))};
}

DickeDensity collective_dephase(const DickeDensity& rho, double sigma, double mu) {
  if (!(sigma >= 0.0)) {
    throw std::invalid_argument("sigma must be >= 0");
  }
  CMatrix out = rho.matrix;
  for (Eigen::Index a = 0; a < out.rows(); ++a) {
    for (Eigen::Index b = 0; b < out.cols(); ++b) {
      const double dm = static_cast<double>(a - b);
      out(a, b) *= std::exp(-sigma * dm * dm * std::abs(mu) / 4.0);
    }
  }
  return DickeDensity{rho.N, out};
}

CMatrix rotation_unitary(int N, const Direction& axis, double angle) {
  const CMatrix Sn = spin_operators(N).along(axis);
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(Sn);
  const Eigen::VectorXd& w = eig.eigenvalues();
  CVector phases(w.size());
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    phases(k) = std::exp(cplx(0.0, -angle * w(k)));
  }
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

DickeVector rotate(const DickeVector& psi, const Direction& axis, double angle) {
  return DickeVector{psi.N, rotation_unitary(psi.N, axis, angle) * psi.amplitudes};
}

DickeDensity rotate(const DickeDensity& rho, const Direction& axis, double angle) {
  const CMatrix U = rotation_unitary(rho.N, axis, angle);
  return DickeDensity{rho.N, U * rho.matrix * U.adjoint()};
}

DickeDensity protocol_density(const ProtocolPoint& point, const Direction& n, double phi) {
  require_dicke_path(point);
  DickeDensity rho = rotate(dicke_prepared(point), n, phi);
  rho.matrix = rho.matrix.cwiseProduct(dicke_stage(point.N, point.nu - point.mu, point.noise.sigma));
  return rho;
}

FullSpaceDensity full_space_protocol(const ProtocolPoint& point, const Direction& n, double phi) {
  validate(point);
  require_full_space(point.N);
  CMatrix rho = full_rotate(point.N, n.components(), phi, full_prepared(point));
  return FullSpaceDensity{point.N, rho.cwiseProduct(full_stage(point.N, point.nu - point.mu, point.noise))};
}

FullSpaceDensity individual_dephase(const FullSpaceDensity& rho, double Sigma, double mu) {
  if (!(Sigma >= 0.0)) {
    throw std::invalid_argument("Sigma must be >= 0");
  }
  CMatrix out = rho.matrix;
  for (Eigen::Index a = 0; a < out.rows(); ++a) {
    for (Eigen::Index b = 0; b < out.cols(); ++b) {
      const int flips = std::popcount(static_cast<unsigned>(a ^ b));
      out(a, b) *= std::exp(-Sigma * std::abs(mu) * flips);
    }
  }
  return FullSpaceDensity{rho.N, out};
}

FullSpaceDensity embed_dicke(const DickeDensity& rho) {
  require_full_space(rho.N);
  const int N = rho.N;
  const Eigen::Index D = Eigen::Index{1} << N;
  CMatrix V = CMatrix::Zero(D, N + 1);
  for (Eigen::Index a = 0; a < D; ++a) {
    const int k = std::popcount(static_cast<unsigned>(a));
    V(a, k) = std::exp(-0.5 * log_binomial(N, k));
  }
  return FullSpaceDensity{N, V * rho.matrix * V.adjoint()};
}

CMatrix full_space_spin(int N, int k) {
  require_full_space(N);
  const Eigen::Index D = Eigen::Index{1} << N;
  return full_spin_left(N, unit(k), CMatrix::Identity(D, D));
}

CMatrix full_space_spin(int N, const Direction& n) {
  require_full_space(N);
  const Eigen::Index D = Eigen::Index{1} << N;
  return full_spin_left(N, n.components(), CMatrix::Identity(D, D));
}

double expectation(const DickeDensity& rho, const CMatrix& op) { return (op * rho.matrix).trace().real(); }

double expectation(const FullSpaceDensity& rho, const CMatrix& op) { return (op * rho.matrix).trace().real(); }

double purity(const DickeDensity& rho) { return (rho.matrix * rho.matrix).trace().real(); }

DirectMeasurement direct_measurement(const ProtocolPoint& point, const Direction& n, const Direction& m) {
  validate(point);
  DirectMeasurement out;
  if (point.noise.Sigma > 0.0) {
    require_full_space(point.N);
    const CMatrix prep = full_prepared(point);
    const CMatrix F2 = full_stage(point.N, point.nu - point.mu, point.noise);
    const CMatrix drho = (-kI * full_spin_commutator(point.N, n.components(), prep)).cwiseProduct(F2);
    out.slope = full_spin_trace(point.N, m.components(), drho).real();
    const CMatrix fin = prep.cwiseProduct(F2);
    const CMatrix sm_rho = full_spin_left(point.N, m.components(), fin);
    const double mean = sm_rho.trace().real();
    const double second = full_spin_trace(point.N, m.components(), sm_rho).real();
    out.variance = second - mean * mean;
  } else {
    const SpinOperators ops = spin_operators(point.N);
    const CMatrix Sn = ops.along(n);
    const CMatrix Sm = ops.along(m);
    const CMatrix prep = dicke_prepared(point).matrix;
    const CMatrix F2 = dicke_stage(point.N, point.nu - point.mu, point.noise.sigma);
    const CMatrix drho = (-kI * (Sn * prep - prep * Sn)).cwiseProduct(F2);
    out.slope = (Sm * drho).trace().real();
    const CMatrix fin = prep.cwiseProduct(F2);
    const CMatrix sm_rho = Sm * fin;
    const double mean = sm_rho.trace().real();
    out.variance = (Sm * sm_rho).trace().real() - mean * mean;
  }
  if (!(out.variance > variance_floor(point.N))) {
    throw std::domain_error("degenerate measurement");
  }
  out.snr = std::abs(out.slope) / std::sqrt(out.variance);
  return out;
}

double direct_sensitivity(const ProtocolPoint& point, const Direction& n, const Direction& m) {
  return direct_measurement(point, n, m).snr;
}

std::vector<double> signal_curve(const ProtocolPoint& point, const Direction& n, const Direction& m,
                                 const std::vector<double>& phi_values) {
  validate(point);
  std::vector<double> out;
  out.reserve(phi_values.size());
  if (point.noise.Sigma > 0.0) {
    require_full_space(point.N);
    for (double phi : phi_values) {
      const FullSpaceDensity rho = full_space_protocol(point, n, phi);
      out.push_back(full_spin_trace(point.N, m.components(), rho.matrix).real());
    }
  } else {
    const CMatrix Sm = spin_operators(point.N).along(m);
    for (double phi : phi_values) {
      out.push_back(expectation(protocol_density(point, n, phi), Sm));
    }
  }
  return out;
}

double finite_difference_slope(const ProtocolPoint& point, const Direction& n, const Direction& m, double step) {
  const std::vector<double> f = signal_curve(point, n, m, {step, -step, 0.5 * step, -0.5 * step});
  const double d_h = (f[0] - f[1]) / (2.0 * step);
  const double d_half = (f[2] - f[3]) / step;
  return (4.0 * d_half - d_h) / 3.0;
}

MomentMatrices oracle_moment_matrices(const ProtocolPoint& point) {
  validate(point);
  MomentMatrices out;
  if (point.noise.Sigma > 0.0) {
    require_full_space(point.N);
    const int N = point.N;
    const CMatrix prep = full_prepared(point);
    const CMatrix F2 = full_stage(N, point.nu - point.mu, point.noise);
    const CMatrix fin = prep.cwiseProduct(F2);
    for (int k = 0; k < 3; ++k) {
      const CMatrix drho = (-kI * full_spin_commutator(N, unit(k), prep)).cwiseProduct(F2);
      for (int l = 0; l < 3; ++l) {
        out.M[k][l] = full_spin_trace(N, unit(l), drho).real();
      }
    }
    std::array<CMatrix, 3> s_rho;
    for (int k = 0; k < 3; ++k) {
      s_rho[k] = full_spin_left(N, unit(k), fin);
      out.j[k] = s_rho[k].trace().real();
    }
    for (int k = 0; k < 3; ++k) {
      for (int l = 0; l < 3; ++l) {
        out.Q[k][l] = full_spin_trace(N, unit(k), s_rho[l]).real() - out.j[k] * out.j[l];
      }
    }
  } else {
    const SpinOperators ops = spin_operators(point.N);
    const CMatrix prep = dicke_prepared(point).matrix;
    const CMatrix F2 = dicke_stage(point.N, point.nu - point.mu, point.noise.sigma);
    const CMatrix fin = prep.cwiseProduct(F2);
    for (int k = 0; k < 3; ++k) {
      const CMatrix& Sk = ops.axis(k);
      const CMatrix drho = (-kI * (Sk * prep - prep * Sk)).cwiseProduct(F2);
      for (int l = 0; l < 3; ++l) {
        out.M[k][l] = (ops.axis(l) * drho).trace().real();
      }
      out.j[k] = (Sk * fin).trace().real();
    }
    for (int k = 0; k < 3; ++k) {
      for (int l = 0; l < 3; ++l) {
        out.Q[k][l] = (ops.axis(k) * ops.axis(l) * fin).trace().real() - out.j[k] * out.j[l];
      }
    }
  }
  // Symmetrized covariance.
  for (int k = 0; k < 3; ++k) {
    for (int l = k + 1; l < 3; ++l) {
      const double s = 0.5 * (out.Q[k][l] + out.Q[l][k]);
      out.Q[k][l] = out.Q[l][k] = s;
    }
  }
  return out;
}

double verify_moment_matrices(const ProtocolPoint& point, const MomentMatrices& analytic) {
  const MomentMatrices oracle = oracle_moment_matrices(point);
  double dev = std::max(max_abs_diff(oracle.M, analytic.M), max_abs_diff(oracle.Q, analytic.Q));
  for (int k = 0; k < 3; ++k) {
    dev = std::max(dev, std::abs(oracle.j[k] - analytic.j[k]));
  }
  return dev / (static_cast<double>(point.N) * point.N);
}

double verify_moment_matrices(const ProtocolPoint& point) {
  return verify_moment_matrices(point, moment_matrices(point));
}

double wineland_parameter(const DickeDensity& rho) {
  const SpinOperators ops = spin_operators(rho.N);
  Vec3 j{};
  for (int k = 0; k < 3; ++k) {
    j[k] = expectation(rho, ops.axis(k));
  }
  const double jn = norm(j);
  if (!(jn > 0.0)) {
    throw std::domain_error("Wineland parameter undefined for zero mean spin");
  }
  const Vec3 jhat{j[0] / jn, j[1] / jn, j[2] / jn};
  // Any vector not parallel to jhat seeds the perpendicular basis.
  Vec3 seed{0.0, 0.0, 0.0};
  seed[std::abs(jhat[0]) < 0.9 ? 0 : 1] = 1.0;
  Vec3 e1 = cross(jhat, seed);
  const double e1n = norm(e1);
  for (double& x : e1) {
    x /= e1n;
  }
  const Vec3 e2 = cross(jhat, e1);
  const CMatrix A = ops.along(Direction::from(e1));
  const CMatrix B = ops.along(Direction::from(e2));
  const double ma = expectation(rho, A);
  const double mb = expectation(rho, B);
  const double vaa = expectation(rho, A * A) - ma * ma;
  const double vbb = expectation(rho, B * B) - mb * mb;
  const double vab = 0.5 * expectation(rho, A * B + B * A) - ma * mb;
  const double vmin = 0.5 * (vaa + vbb) - std::sqrt(0.25 * (vaa - vbb) * (vaa - vbb) + vab * vab);
  return rho.N * vmin / (jn * jn);
}

double wineland_parameter(int N, double mu, double sigma) {
  return wineland_parameter(dicke_prepared(ProtocolPoint{N, mu, mu, NoiseModel{sigma, 0.0}}));
}

}  // namespace oatecho

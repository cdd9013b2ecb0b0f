#include "oatecho/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "oatecho/parallel.hpp"

namespace oatecho {

namespace {

// 2x as an integer when x is an integer or half-integer.
bool doubled(double x, long& out) {
  const double t = 2.0 * x;
  const double r = std::round(t);
  if (std::abs(t - r) > 1e-9) {
    return false;
  }
  out = static_cast<long>(r);
  return true;
}

long double log_factorial(long n) { return std::lgammal(static_cast<long double>(n) + 1.0L); }

}  // namespace

double clebsch_gordan(double j1, double m1, double j2, double m2, double J, double M) {
  long tj1 = 0, tm1 = 0, tj2 = 0, tm2 = 0, tJ = 0, tM = 0;
  if (!doubled(j1, tj1) || !doubled(m1, tm1) || !doubled(j2, tj2) || !doubled(m2, tm2) || !doubled(J, tJ) ||
      !doubled(M, tM)) {
    return 0.0;
  }
  if (tj1 < 0 || tj2 < 0 || tJ < 0) {
    return 0.0;
  }
  if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tM) > tJ) {
    return 0.0;
  }
  if ((tj1 + tm1) % 2 != 0 || (tj2 + tm2) % 2 != 0 || (tJ + tM) % 2 != 0) {
    return 0.0;
  }
  if (tm1 + tm2 != tM) {
    return 0.0;
  }
  if (tJ < std::abs(tj1 - tj2) || tJ > tj1 + tj2 || (tj1 + tj2 + tJ) % 2 != 0) {
    return 0.0;
  }

  // All of the following are non-negative integers.
  const long a = (tj1 + tj2 - tJ) / 2;
  const long b = (tj1 - tj2 + tJ) / 2;
  const long c = (-tj1 + tj2 + tJ) / 2;
  const long s = (tj1 + tj2 + tJ) / 2 + 1;
  const long j1p = (tj1 + tm1) / 2, j1m = (tj1 - tm1) / 2;
  const long j2p = (tj2 + tm2) / 2, j2m = (tj2 - tm2) / 2;
  const long Jp = (tJ + tM) / 2, Jm = (tJ - tM) / 2;
  const long d1 = (tJ - tj2 + tm1) / 2;  // J - j2 + m1
  const long d2 = (tJ - tj1 - tm2) / 2;  // J - j1 - m2

  const long double log_pref =
      0.5L * (std::log(static_cast<long double>(tJ + 1)) + log_factorial(a) + log_factorial(b) + log_factorial(c) -
              log_factorial(s) + log_factorial(j1p) + log_factorial(j1m) + log_factorial(j2p) +
              log_factorial(j2m) + log_factorial(Jp) + log_factorial(Jm));

  const long kmin = std::max({0L, -d1, -d2});
  const long kmax = std::min({a, j1m, j2p});
  long double sum = 0.0L;
  for (long k = kmin; k <= kmax; ++k) {
    const long double log_den = log_factorial(k) + log_factorial(a - k) + log_factorial(j1m - k) +
                                log_factorial(j2p - k) + log_factorial(d1 + k) + log_factorial(d2 + k);
    const long double term = std::exp(log_pref - log_den);
    sum += (k % 2 == 0) ? term : -term;
  }
  return static_cast<double>(sum);
}

CMatrix MultipoleBasis::dense(int K, int Q) const {
  const int d = N + 1;
  CMatrix T = CMatrix::Zero(d, d);
  const auto& diag = diagonals.at(static_cast<std::size_t>(multipole_index(K, Q)));
  for (int kc = 0; kc < d; ++kc) {
    const int kr = kc + Q;
    if (kr >= 0 && kr < d) {
      T(kr, kc) = diag[static_cast<std::size_t>(kc)];
    }
  }
  return T;
}

namespace {

MultipoleBasis build_basis(int N) {
  MultipoleBasis basis;
  basis.N = N;
  const int d = N + 1;
  const double S = 0.5 * N;
  basis.diagonals.assign(static_cast<std::size_t>(d * d), std::vector<double>(static_cast<std::size_t>(d), 0.0));
  for (int K = 0; K <= N; ++K) {
    const double norm = std::sqrt((2.0 * K + 1.0) / d);
    for (int Q = -K; Q <= K; ++Q) {
      auto& diag = basis.diagonals[static_cast<std::size_t>(multipole_index(K, Q))];
      for (int kc = 0; kc < d; ++kc) {
        const int kr = kc + Q;
        if (kr < 0 || kr >= d) {
          continue;
        }
        diag[static_cast<std::size_t>(kc)] = norm * clebsch_gordan(S, kc - S, K, Q, S, kr - S);
      }
    }
  }
  return basis;
}

}  // namespace

std::shared_ptr<const MultipoleBasis> multipole_basis(int N) {
  if (N < 1) {
    throw std::invalid_argument("multipole basis requires N >= 1");
  }
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const MultipoleBasis>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(N); it != cache.end()) {
      return it->second;
    }
  }
  auto built = std::make_shared<const MultipoleBasis>(build_basis(N));
  std::lock_guard lock(mutex);
  return cache.emplace(N, std::move(built)).first->second;
}

CMatrix multipole_operator(int K, int Q, int N) {
  if (N < 1 || K < 0 || K > N || std::abs(Q) > K) {
    throw std::invalid_argument("multipole indices out of range");
  }
  return multipole_basis(N)->dense(K, Q);
}

void gauss_legendre_theta(int count, std::vector<double>& theta, std::vector<double>& weights) {
  theta.assign(static_cast<std::size_t>(count), 0.0);
  weights.assign(static_cast<std::size_t>(count), 0.0);
  for (int i = 0; i < count; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (count + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int n = 2; n <= count; ++n) {
        const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
        p0 = p1;
        p1 = p2;
      }
      dp = count * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        break;
      }
    }
    theta[static_cast<std::size_t>(i)] = std::acos(x);
    weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

namespace {

std::vector<cplx> coefficients_of(const CMatrix& op, const MultipoleBasis& basis) {
  const int N = basis.N;
  const int d = N + 1;
  std::vector<cplx> out(static_cast<std::size_t>(d * d));
  for (int K = 0; K <= N; ++K) {
    for (int Q = -K; Q <= K; ++Q) {
      const auto& diag = basis.diagonals[static_cast<std::size_t>(multipole_index(K, Q))];
      cplx acc{0.0, 0.0};
      for (int kc = 0; kc < d; ++kc) {
        const int kr = kc + Q;
        if (kr >= 0 && kr < d) {
          acc += op(kr, kc) * diag[static_cast<std::size_t>(kc)];
        }
      }
      out[static_cast<std::size_t>(multipole_index(K, Q))] = acc;
    }
  }
  return out;
}

// g_Q(theta) = sum_K A_KQ Y_KQ(theta, 0), for Q = -N..N.
std::vector<cplx> azimuthal_modes(const std::vector<cplx>& coeffs, int N, double theta) {
  std::vector<cplx> g(static_cast<std::size_t>(2 * N + 1), cplx{0.0, 0.0});
  for (int K = 0; K <= N; ++K) {
    for (int q = 0; q <= K; ++q) {
      const double y = std::sph_legendre(static_cast<unsigned>(K), static_cast<unsigned>(q), theta);
      g[static_cast<std::size_t>(N + q)] += coeffs[static_cast<std::size_t>(multipole_index(K, q))] * y;
      if (q > 0) {
        const double sign = (q % 2 == 0) ? 1.0 : -1.0;
        g[static_cast<std::size_t>(N - q)] += coeffs[static_cast<std::size_t>(multipole_index(K, -q))] * sign * y;
      }
    }
  }
  return g;
}

}  // namespace

WignerField wigner_field(const CMatrix& op, int theta_count, int phi_count) {
  if (op.rows() != op.cols() || op.rows() < 2) {
    throw std::invalid_argument("Wigner field needs a square Dicke-space operator with N >= 1");
  }
  if (theta_count < 0 || phi_count < 0) {
    throw std::invalid_argument("sample counts must be >= 0");
  }
  const int N = static_cast<int>(op.rows()) - 1;
  const auto basis = multipole_basis(N);
  WignerField field;
  field.N = N;
  field.coefficients = coefficients_of(op, *basis);
  if (theta_count == 0 || phi_count == 0) {
    return field;
  }
  gauss_legendre_theta(theta_count, field.theta, field.theta_weights);
  field.phi.resize(static_cast<std::size_t>(phi_count));
  for (int j = 0; j < phi_count; ++j) {
    field.phi[static_cast<std::size_t>(j)] = 2.0 * kPi * j / phi_count;
  }
  const std::size_t np = field.phi.size();
  field.samples.assign(field.theta.size() * np, 0.0);
  std::vector<double> row_imag(field.theta.size(), 0.0);
  parallel_for(field.theta.size(), 0, [&](std::size_t i) {
    const std::vector<cplx> g = azimuthal_modes(field.coefficients, N, field.theta[i]);
    for (std::size_t j = 0; j < np; ++j) {
      cplx w{0.0, 0.0};
      for (int Q = -N; Q <= N; ++Q) {
        w += g[static_cast<std::size_t>(N + Q)] * std::exp(cplx(0.0, Q * field.phi[j]));
      }
      field.samples[i * np + j] = w.real();
      row_imag[i] = std::max(row_imag[i], std::abs(w.imag()));
    }
  });
  for (double v : row_imag) {
    field.max_imag = std::max(field.max_imag, v);
  }
  return field;
}

WignerField wigner_field(const DickeDensity& rho, int theta_count, int phi_count) {
  return wigner_field(rho.matrix, theta_count, phi_count);
}

cplx wigner_value(const WignerField& field, double theta, double phi) {
  const int N = field.N;
  const std::vector<cplx> g = azimuthal_modes(field.coefficients, N, theta);
  cplx w{0.0, 0.0};
  for (int Q = -N; Q <= N; ++Q) {
    w += g[static_cast<std::size_t>(N + Q)] * std::exp(cplx(0.0, Q * phi));
  }
  return w;
}

double sphere_overlap(const WignerField& a, const WignerField& b) {
  if (a.N != b.N || a.coefficients.size() != b.coefficients.size()) {
    throw std::invalid_argument("sphere overlap requires fields of the same N");
  }
  cplx acc{0.0, 0.0};
  for (std::size_t k = 0; k < a.coefficients.size(); ++k) {
    acc += a.coefficients[k] * std::conj(b.coefficients[k]);
  }
  return acc.real();
}

double sphere_overlap_quadrature(const WignerField& a, const WignerField& b) {
  if (a.N != b.N) {
    throw std::invalid_argument("sphere overlap requires fields of the same N");
  }
  if (a.theta != b.theta || a.phi != b.phi || a.samples.empty()) {
    throw std::invalid_argument("quadrature overlap requires identical, non-empty sample grids");
  }
  const std::size_t np = a.phi.size();
  const double dphi = 2.0 * kPi / static_cast<double>(np);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.theta.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < np; ++j) {
      row += a.samples[i * np + j] * b.samples[i * np + j];
    }
    acc += a.theta_weights[i] * row * dphi;
  }
  return acc;
}

OutMechanismReport out_mechanism_report(int N, double mu, double phi, int theta_count, int phi_count) {
  if (N < 2) {
    throw std::invalid_argument("OUT mechanism report requires N >= 2");
  }
  if (theta_count == 0) {
    theta_count = 2 * N + 1;
  }
  if (phi_count == 0) {
    phi_count = 4 * N + 2;
  }
  const DickeVector psi = apply_oat(rotate(apply_oat(x_state(N), mu), Direction::y(), phi), -mu);
  const SpinOperators ops = spin_operators(N);
  CMatrix P = ops.Sy;
  const double half = 0.5 * N;
  for (int a = 0; a <= N; ++a) {
    for (int b = 0; b <= N; ++b) {
      const double ma = a - half, mb = b - half;
      P(a, b) *= std::exp(cplx(0.0, -0.5 * mu * (ma * ma - mb * mb)));
    }
  }
  OutMechanismReport report;
  report.state_field = wigner_field(to_density(psi), theta_count, phi_count);
  report.measurement_field = wigner_field(P, theta_count, phi_count);
  report.overlap = sphere_overlap(report.state_field, report.measurement_field);
  const DickeDensity echo = protocol_density(ProtocolPoint{N, mu, -mu, {}}, Direction::y(), phi);
  report.oracle_expectation = expectation(echo, ops.Sy);
  return report;
}

}  // namespace oatecho

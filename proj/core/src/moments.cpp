#include "oatecho/moments.hpp"

#include <cmath>

namespace oatecho {

ScalarCoefficients scalar_coefficients(const ProtocolPoint& point) {
  validate(point);
  const double N = point.N;
  const double mu = point.mu;
  const double nu = point.nu;
  const double pair = 0.5 * N * (N - 1.0);

  ScalarCoefficients s;
  if (point.N >= 2) {
    const double half_diff = 0.5 * (mu - nu);
    s.n1 = pair * std::sin(half_diff) * stable_cos_pow(std::cos(half_diff), point.N - 2);
    s.n2 = -pair * std::sin(half_diff) * stable_cos_pow(std::cos(0.5 * (mu + nu)), point.N - 2);
    s.q2 = 0.5 * pair * stable_cos_pow(std::cos(nu), point.N - 2);
    s.q3 = 0.5 * pair * std::sin(0.5 * nu) * stable_cos_pow(std::cos(0.5 * nu), point.N - 2);
  }
  s.n3 = -0.5 * N * stable_cos_pow(std::cos(0.5 * mu), point.N - 1);
  s.n4 = 0.5 * N * stable_cos_pow(std::cos(0.5 * nu), point.N - 1);
  s.q0 = 0.5 * N * stable_cos_pow(std::cos(0.5 * nu), point.N - 1);
  s.q1 = 0.25 * N * (N + 1.0);
  s.q4 = 0.25 * N;

  const double a = std::abs(nu - mu);
  const double b = std::abs(mu);

  if (const double sg = point.noise.sigma; sg > 0.0) {
    s.q0 *= std::exp(-sg * (a + b) / 4.0);
    s.q2 *= std::exp(-sg * (a + b));
    s.q3 *= std::exp(-sg * (a + b) / 4.0);
    s.n1 *= std::exp(-sg * a / 4.0);
    s.n2 *= std::exp(-sg * (a / 4.0 + b));
    s.n3 *= std::exp(-sg * b / 4.0);
    s.n4 *= std::exp(-sg * (a + b) / 4.0);
  }

  if (const double Sg = point.noise.Sigma; Sg > 0.0) {
    const double single = std::exp(-Sg * (a + b));
    const double twice = std::exp(-2.0 * Sg * (a + b));
    const double signal = std::exp(-Sg * (a + 2.0 * b));
    s.q0 *= single;
    s.q1 = twice * s.q1 + 0.5 * N * (1.0 - twice);
    s.q2 *= twice;
    s.q3 *= single;
    s.n1 *= signal;
    s.n2 *= signal;
    s.n3 *= std::exp(-Sg * b);
    s.n4 *= single;
  }
  return s;
}

MomentMatrices assemble(const ScalarCoefficients& s) {
  MomentMatrices m;
  m.M = Mat3{{{0.5 * (s.n1 + s.n2), 0.0, 0.0}, {0.0, 0.5 * (s.n1 - s.n2), s.n3}, {0.0, s.n4, 0.0}}};
  m.Q = Mat3{{{0.5 * (s.q1 + s.q2) - s.q0 * s.q0, 0.0, 0.0},
              {0.0, 0.5 * (s.q1 - s.q2), s.q3},
              {0.0, s.q3, s.q4}}};
  m.j = Vec3{s.q0, 0.0, 0.0};
  return m;
}

MomentMatrices moment_matrices(const ProtocolPoint& point) { return assemble(scalar_coefficients(point)); }

}  // namespace oatecho

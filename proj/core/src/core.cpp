#include "oatecho/core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace oatecho {

void validate(const NoiseModel& noise) {
  if (!std::isfinite(noise.sigma) || noise.sigma < 0.0) {
    throw std::invalid_argument("collective dephasing sigma must be finite and >= 0");
  }
  if (!std::isfinite(noise.Sigma) || noise.Sigma < 0.0) {
    throw std::invalid_argument("individual dephasing Sigma must be finite and >= 0");
  }
}

void validate(const ProtocolPoint& point) {
  if (point.N < 1) {
    throw std::invalid_argument("particle number N must be >= 1, got " + std::to_string(point.N));
  }
  if (!std::isfinite(point.mu) || !std::isfinite(point.nu)) {
    throw std::invalid_argument("twisting angles mu and nu must be finite");
  }
  validate(point.noise);
}

Direction Direction::from(const Vec3& v) {
  const double norm = std::hypot(v[0], v[1], v[2]);
  if (!std::isfinite(norm) || norm == 0.0) {
    throw std::invalid_argument("direction requires a finite nonzero vector");
  }
  return Direction({v[0] / norm, v[1] / norm, v[2] / norm});
}

namespace {

void check_axis(const std::vector<double>& values, const char* name) {
  if (values.size() < 2) {
    throw std::invalid_argument(std::string(name) + " axis needs at least 2 samples");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw std::invalid_argument(std::string(name) + " axis contains a non-finite value");
    }
    if (i > 0 && !(values[i] > values[i - 1])) {
      throw std::invalid_argument(std::string(name) + " axis must be strictly increasing");
    }
  }
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  const double step = (hi - lo) / (count - 1);
  for (int i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = lo + step * i;
  }
  out.back() = hi;
  return out;
}

}  // namespace

ParameterGrid ParameterGrid::from_values(std::vector<double> mu_values, std::vector<double> nu_values) {
  check_axis(mu_values, "mu");
  check_axis(nu_values, "nu");
  return ParameterGrid{std::move(mu_values), std::move(nu_values)};
}

double stable_cos_pow(double c, int k) {
  if (k == 0) {
    return 1.0;
  }
  if (c == 0.0) {
    return 0.0;
  }
  const double magnitude = std::exp(k * std::log(std::abs(c)));
  return (c < 0.0 && (k % 2 != 0)) ? -magnitude : magnitude;
}

ParameterGrid make_grid(double mu_min, double mu_max, int mu_count,
                        double nu_min, double nu_max, int nu_count) {
  for (double b : {mu_min, mu_max, nu_min, nu_max}) {
    if (!std::isfinite(b)) {
      throw std::invalid_argument("grid bounds must be finite");
    }
  }
  if (mu_count < 2 || nu_count < 2) {
    throw std::invalid_argument("grid counts must be >= 2");
  }
  if (!(mu_max > mu_min)) {
    throw std::invalid_argument("mu range is degenerate (need mu_max > mu_min)");
  }
  if (!(nu_max > nu_min)) {
    throw std::invalid_argument("nu range is degenerate (need nu_max > nu_min)");
  }
  return ParameterGrid::from_values(linspace(mu_min, mu_max, mu_count),
                                    linspace(nu_min, nu_max, nu_count));
}

}  // namespace oatecho

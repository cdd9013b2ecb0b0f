#pragma once

// Shared domain types for generalized one-axis-twisting echo protocols.
//
// A protocol is fixed by the particle number N, the initial twisting strength
// mu, and the excess inversion nu (the second twist has strength nu - mu).
// Dephasing during both twists is described by two dimensionless ratios of
// the dephasing rate to the twisting coupling.

#include <array>
#include <cstddef>
#include <numbers>
#include <vector>

namespace oatecho {

using Vec3 = std::array<double, 3>;

inline constexpr double kPi = std::numbers::pi;

/// Dephasing strengths during the twisting interactions.
///   sigma: collective dephasing |gamma_C| / |chi|
///   Sigma: individual (per-particle) dephasing |gamma_I| / |chi|
struct NoiseModel {
  double sigma = 0.0;
  double Sigma = 0.0;

  [[nodiscard]] bool noiseless() const { return sigma == 0.0 && Sigma == 0.0; }
  [[nodiscard]] bool collective_only() const { return Sigma == 0.0; }

  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

/// One evaluation site of the (mu, nu) landscape. The collective spin length
/// S = N/2 is always derived from N.
struct ProtocolPoint {
  int N = 1;
  double mu = 0.0;
  double nu = 0.0;
  NoiseModel noise{};

  [[nodiscard]] double spin() const { return 0.5 * N; }
};

/// Throws std::invalid_argument if N < 1, an angle is not finite, or a
/// dephasing strength is negative or not finite.
void validate(const ProtocolPoint& point);
void validate(const NoiseModel& noise);

/// Unit 3-vector used for signal and measurement axes.
class Direction {
 public:
  /// +z.
  Direction() = default;

  /// Normalizes `v`; throws std::invalid_argument for a zero or non-finite vector.
  static Direction from(const Vec3& v);
  static Direction x() { return from({1.0, 0.0, 0.0}); }
  static Direction y() { return from({0.0, 1.0, 0.0}); }
  static Direction z() { return from({0.0, 0.0, 1.0}); }

  [[nodiscard]] const Vec3& components() const { return v_; }
  double operator[](std::size_t i) const { return v_[i]; }

 private:
  explicit Direction(const Vec3& v) : v_(v) {}
  Vec3 v_{0.0, 0.0, 1.0};
};

/// Discretized (mu, nu) sample axes, each strictly increasing and finite.
struct ParameterGrid {
  std::vector<double> mu_values;
  std::vector<double> nu_values;

  [[nodiscard]] std::size_t size() const { return mu_values.size() * nu_values.size(); }

  /// Validating constructor for explicit sample lists.
  static ParameterGrid from_values(std::vector<double> mu_values, std::vector<double> nu_values);
};

/// c^k evaluated as sign(c)^k * exp(k ln|c|), so that cos^(N-2) terms stay
/// finite and accurate for large N. Returns 1 for k == 0 (including c == 0)
/// and 0 for c == 0, k > 0.
double stable_cos_pow(double c, int k);

/// Uniform grids with inclusive endpoints. Requires counts >= 2, finite
/// bounds and max > min on both axes.
ParameterGrid make_grid(double mu_min, double mu_max, int mu_count,
                        double nu_min, double nu_max, int nu_count);

}  // namespace oatecho

#pragma once

// Direction optimization via the SVD of M Q^{-1/2}, plus landscapes, slices,
// protocol classes, local maxima and power-law scaling fits.

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "oatecho/core.hpp"
#include "oatecho/linalg3.hpp"
#include "oatecho/moments.hpp"

namespace oatecho {

struct OptimizedSensitivity {
  double snr = 0.0;
  Direction n_opt{};
  Direction m_opt{};
  Vec3 singular_values{};
  int rank_Q = 0;
};

/// R = Q^{-1/2} on the retained eigenspace. `eigenvalues` are ascending and
/// null_mask[i] flags eigenvalues[i] as a numerical null.
struct InvSqrtResult {
  Mat3 R{};
  std::array<bool, 3> null_mask{};
  Vec3 eigenvalues{};
};

inline constexpr double kNullTolerance = 1e-12;

/// Throws std::invalid_argument if Q is not symmetric within 1e-10 (scaled by
/// its norm) or has an eigenvalue below -rel_tol * lambda_max.
InvSqrtResult inv_sqrt_psd(const Mat3& Q, double rel_tol = kNullTolerance);

/// Largest singular value of M Q^{-1/2} and its optimal directions. A
/// degenerate top singular value resolves to the canonical representative
/// nearest z, then y, then x; the largest component of n_opt is positive.
/// Throws if Q is zero.
OptimizedSensitivity optimize_directions(const Mat3& M, const Mat3& Q);

OptimizedSensitivity sensitivity(const ProtocolPoint& point);

/// n^T M m / sqrt(m^T Q m).
double snr_for_directions(const MomentMatrices& mm, const Direction& n, const Direction& m);

struct LandscapeGrid {
  ParameterGrid grid;
  int N = 0;
  NoiseModel noise{};
  /// mu-major: index i * nu_count + j.
  std::vector<OptimizedSensitivity> points;

  [[nodiscard]] std::size_t mu_count() const { return grid.mu_values.size(); }
  [[nodiscard]] std::size_t nu_count() const { return grid.nu_values.size(); }
  [[nodiscard]] const OptimizedSensitivity& at(std::size_t i, std::size_t j) const {
    return points[i * nu_count() + j];
  }
  [[nodiscard]] double value(std::size_t i, std::size_t j) const { return at(i, j).snr; }
};

/// threads <= 0 selects the hardware concurrency. Output is independent of
/// the thread count.
LandscapeGrid landscape(const ParameterGrid& grid, int N, const NoiseModel& noise, int threads = 0);

struct SliceRow {
  double mu = 0.0;
  double best_nu = 0.0;
  double snr_sq_over_N = 0.0;
};

/// For each mu: best nu on `nu_search` (strictly increasing), then
/// golden-section refinement between the neighbouring samples to 1e-6.
std::vector<SliceRow> nu_optimized_slice(const std::vector<double>& mu_values, int N,
                                         const NoiseModel& noise, const std::vector<double>& nu_search,
                                         int threads = 0);

/// Default search axis: 1025 samples over [-pi, pi].
std::vector<double> default_nu_search();

enum class ProtocolClass { Squeezing, OverUnTwisting, GHZ };

std::string_view to_string(ProtocolClass c);

/// 4 / sqrt(N).
double class_threshold(int N);

/// Requires N >= 2 and 0 <= mu <= pi. Squeezing wins on the box boundary.
ProtocolClass classify(double mu, double nu, int N);

/// classify() extended to mu in [-pi, 0) through (mu, nu) -> (-mu, -nu).
/// Empty for |mu| > pi or N < 2.
std::optional<ProtocolClass> classify_signed(double mu, double nu, int N);

struct LocalMaximum {
  ProtocolClass cls = ProtocolClass::Squeezing;
  double mu = 0.0;
  double nu = 0.0;
  double snr = 0.0;
  Direction n_opt{};
  Direction m_opt{};
};

/// Relative margin by which a grid point must exceed every neighbour.
inline constexpr double kStrictMargin = 1e-10;

/// Strict grid maxima (edge points compare against in-grid neighbours only),
/// each refined by an 8-direction pattern search (step doubled after a move, up
/// to the grid spacing, halved otherwise, down to 1e-6) that stays inside the
/// cells adjacent to the seed and the starting class. Returns the
/// best refined maximum per class in the order Squeezing, OverUnTwisting, GHZ.
std::vector<LocalMaximum> find_local_maxima(const LandscapeGrid& landscape);

/// Refined maximum of one class on a grid adapted to the class region and N.
std::optional<LocalMaximum> class_maximum(ProtocolClass cls, int N, const NoiseModel& noise,
                                          int threads = 0);

struct ScalingFit {
  double c = 0.0;
  double alpha = 0.0;
  std::vector<int> N_range;
  double residual = 0.0;
};

/// Least squares of ln(snr) against ln(N) over all given samples.
ScalingFit fit_power_law(const std::vector<int>& N_values, const std::vector<double>& snr_values);

/// Class maxima for every N, fitted over the upper ceil(n/2) entries.
/// Requires >= 4 increasing entries, each >= 16; throws if a class maximum
/// is missing for some N.
ScalingFit fit_scaling(ProtocolClass cls, const NoiseModel& noise, const std::vector<int>& N_list,
                       int threads = 0);

/// Same fit applied to caller-supplied maxima (one per N).
ScalingFit fit_scaling_values(const std::vector<int>& N_list, const std::vector<double>& maxima);

}  // namespace oatecho

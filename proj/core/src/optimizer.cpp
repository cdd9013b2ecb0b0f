#include "oatecho/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "oatecho/parallel.hpp"

namespace oatecho {

InvSqrtResult inv_sqrt_psd(const Mat3& Q, double rel_tol) {
  const double scale = frobenius_norm(Q);
  if (!std::isfinite(scale)) {
    throw std::invalid_argument("covariance matrix contains non-finite entries");
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      if (std::abs(Q[i][j] - Q[j][i]) > 1e-10 * std::max(1.0, scale)) {
        throw std::invalid_argument("covariance matrix is not symmetric");
      }
    }
  }
  Mat3 sym = Q;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      sym[i][j] = sym[j][i] = 0.5 * (Q[i][j] + Q[j][i]);
    }
  }
  const SymmetricEigen3 eig = eigen_symmetric(sym);
  const double lmax = eig.values[0];
  if (lmax < 0.0 || eig.values[2] < -rel_tol * lmax) {
    throw std::invalid_argument("covariance matrix is not positive semi-definite");
  }

  InvSqrtResult out;
  const double cut = rel_tol * lmax;
  for (int k = 0; k < 3; ++k) {
    // Ascending order in the result, descending from the solver.
    const int src = 2 - k;
    const double lambda = eig.values[src];
    out.eigenvalues[k] = lambda;
    out.null_mask[k] = !(lambda > cut);
    if (out.null_mask[k]) {
      continue;
    }
    const Vec3 v = eig.vector(src);
    const double w = 1.0 / std::sqrt(lambda);
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        out.R[r][c] += w * v[r] * v[c];
      }
    }
  }
  return out;
}

OptimizedSensitivity optimize_directions(const Mat3& M, const Mat3& Q) {
  for (const auto& row : M) {
    for (double x : row) {
      if (!std::isfinite(x)) {
        throw std::invalid_argument("signal matrix contains non-finite entries");
      }
    }
  }
  const InvSqrtResult inv = inv_sqrt_psd(Q);
  OptimizedSensitivity out;
  out.rank_Q = static_cast<int>(std::count(inv.null_mask.begin(), inv.null_mask.end(), false));
  if (out.rank_Q == 0) {
    throw std::invalid_argument("covariance matrix is zero");
  }

  const Mat3 B = M * inv.R;
  const Svd3 dec = svd(B);
  out.singular_values = dec.values;
  const double s1 = dec.values[0];
  out.snr = s1;
  if (!(s1 > 0.0)) {
    out.snr = 0.0;
    return out;
  }

  Vec3 n{};
  int degenerate = 1;
  while (degenerate < 3 && dec.values[degenerate] >= s1 * (1.0 - 1e-10)) {
    ++degenerate;
  }
  if (degenerate == 1) {
    n = dec.left(0);
  } else {
    std::array<Vec3, 3> span{};
    for (int i = 0; i < degenerate; ++i) {
      span[i] = dec.left(i);
    }
    n = canonical_unit_in_span(span, degenerate);
  }

  Vec3 v = transpose(B) * n;
  const double vn = norm(v);
  for (double& x : v) {
    x /= vn;
  }
  if (n[leading_index(n)] < 0.0) {
    for (int r = 0; r < 3; ++r) {
      n[r] = -n[r];
      v[r] = -v[r];
    }
  }
  out.n_opt = Direction::from(n);
  out.m_opt = Direction::from(inv.R * v);
  return out;
}

OptimizedSensitivity sensitivity(const ProtocolPoint& point) {
  const MomentMatrices mm = moment_matrices(point);
  return optimize_directions(mm.M, mm.Q);
}

double snr_for_directions(const MomentMatrices& mm, const Direction& n, const Direction& m) {
  const Vec3& nv = n.components();
  const Vec3& mv = m.components();
  return dot(nv, mm.M * mv) / std::sqrt(dot(mv, mm.Q * mv));
}

LandscapeGrid landscape(const ParameterGrid& grid, int N, const NoiseModel& noise, int threads) {
  validate(ProtocolPoint{N, 0.0, 0.0, noise});
  LandscapeGrid out{grid, N, noise, {}};
  const std::size_t nn = grid.nu_values.size();
  out.points.resize(grid.size());
  parallel_for(out.points.size(), threads, [&](std::size_t k) {
    out.points[k] = sensitivity(ProtocolPoint{N, grid.mu_values[k / nn], grid.nu_values[k % nn], noise});
  });
  return out;
}

namespace {

template <class F>
std::pair<double, double> golden_max(F&& f, double a, double b, double tol) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

void check_increasing(const std::vector<double>& values, const char* what) {
  if (values.size() < 2) {
    throw std::invalid_argument(std::string(what) + " needs at least 2 samples");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || (i > 0 && !(values[i] > values[i - 1]))) {
      throw std::invalid_argument(std::string(what) + " must be finite and strictly increasing");
    }
  }
}

}  // namespace

std::vector<double> default_nu_search() {
  return make_grid(0.0, 1.0, 2, -kPi, kPi, 1025).nu_values;
}

std::vector<SliceRow> nu_optimized_slice(const std::vector<double>& mu_values, int N,
                                         const NoiseModel& noise, const std::vector<double>& nu_search,
                                         int threads) {
  validate(ProtocolPoint{N, 0.0, 0.0, noise});
  check_increasing(nu_search, "nu search axis");
  for (double mu : mu_values) {
    if (!std::isfinite(mu)) {
      throw std::invalid_argument("mu values must be finite");
    }
  }
  std::vector<SliceRow> rows(mu_values.size());
  parallel_for(rows.size(), threads, [&](std::size_t r) {
    const double mu = mu_values[r];
    auto f = [&](double nu) { return sensitivity(ProtocolPoint{N, mu, nu, noise}).snr; };
    std::size_t best = 0;
    double best_val = -1.0;
    for (std::size_t k = 0; k < nu_search.size(); ++k) {
      const double v = f(nu_search[k]);
      if (v > best_val) {
        best_val = v;
        best = k;
      }
    }
    const double lo = nu_search[best == 0 ? 0 : best - 1];
    const double hi = nu_search[std::min(best + 1, nu_search.size() - 1)];
    double best_nu = nu_search[best];
    const auto [x, fx] = golden_max(f, lo, hi, 1e-6);
    if (fx > best_val) {
      best_val = fx;
      best_nu = x;
    }
    rows[r] = SliceRow{mu, best_nu, best_val * best_val / N};
  });
  return rows;
}

std::string_view to_string(ProtocolClass c) {
  switch (c) {
    case ProtocolClass::Squeezing:
      return "squeezing";
    case ProtocolClass::OverUnTwisting:
      return "out";
    case ProtocolClass::GHZ:
      return "ghz";
  }
  return "unknown";
}

double class_threshold(int N) { return 4.0 / std::sqrt(static_cast<double>(N)); }

ProtocolClass classify(double mu, double nu, int N) {
  if (N < 2) {
    throw std::invalid_argument("classification requires N >= 2");
  }
  if (!(mu >= 0.0 && mu <= kPi) || !std::isfinite(nu)) {
    throw std::invalid_argument("classification requires 0 <= mu <= pi and finite nu");
  }
  const double t = class_threshold(N);
  if (mu <= t && std::abs(nu) <= t) {
    return ProtocolClass::Squeezing;
  }
  if (mu >= kPi - t) {
    return ProtocolClass::GHZ;
  }
  return ProtocolClass::OverUnTwisting;
}

std::optional<ProtocolClass> classify_signed(double mu, double nu, int N) {
  if (N < 2 || !std::isfinite(mu) || !std::isfinite(nu) || std::abs(mu) > kPi) {
    return std::nullopt;
  }
  return mu < 0.0 ? classify(-mu, -nu, N) : classify(mu, nu, N);
}

namespace {

struct Candidate {
  std::size_t i;
  std::size_t j;
  ProtocolClass cls;
};

LocalMaximum refine(const LandscapeGrid& land, const Candidate& cand) {
  const auto& mus = land.grid.mu_values;
  const auto& nus = land.grid.nu_values;
  const double mu_lo = mus[cand.i == 0 ? 0 : cand.i - 1];
  const double mu_hi = mus[std::min(cand.i + 1, mus.size() - 1)];
  const double nu_lo = nus[cand.j == 0 ? 0 : cand.j - 1];
  const double nu_hi = nus[std::min(cand.j + 1, nus.size() - 1)];

  auto admissible = [&](double mu, double nu) {
    if (mu < mu_lo || mu > mu_hi || nu < nu_lo || nu > nu_hi) {
      return false;
    }
    const auto c = classify_signed(mu, nu, land.N);
    return c && *c == cand.cls;
  };

  double mu = mus[cand.i];
  double nu = nus[cand.j];
  OptimizedSensitivity best = land.at(cand.i, cand.j);

  auto spacing = [](const std::vector<double>& axis, std::size_t k) {
    const std::size_t lo = k == 0 ? 0 : k - 1;
    const std::size_t hi = std::min(k + 1, axis.size() - 1);
    return (axis[hi] - axis[lo]) / static_cast<double>(hi - lo);
  };
  const double max_mu = spacing(mus, cand.i);
  const double max_nu = spacing(nus, cand.j);
  double step_mu = max_mu;
  double step_nu = max_nu;

  static constexpr int kMoves[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  while (step_mu >= 1e-6 || step_nu >= 1e-6) {
    double trial_mu = mu, trial_nu = nu;
    OptimizedSensitivity trial_best = best;
    for (const auto& mv : kMoves) {
      const double a = mu + mv[0] * step_mu;
      const double b = nu + mv[1] * step_nu;
      if (!admissible(a, b)) {
        continue;
      }
      OptimizedSensitivity s = sensitivity(ProtocolPoint{land.N, a, b, land.noise});
      if (s.snr > trial_best.snr) {
        trial_best = s;
        trial_mu = a;
        trial_nu = b;
      }
    }
    if (trial_best.snr > best.snr) {
      best = trial_best;
      mu = trial_mu;
      nu = trial_nu;
      step_mu = std::min(2.0 * step_mu, max_mu);
      step_nu = std::min(2.0 * step_nu, max_nu);
    } else {
      step_mu *= 0.5;
      step_nu *= 0.5;
    }
  }
  return LocalMaximum{cand.cls, mu, nu, best.snr, best.n_opt, best.m_opt};
}

}  // namespace

std::vector<LocalMaximum> find_local_maxima(const LandscapeGrid& land) {
  const std::size_t nm = land.mu_count();
  const std::size_t nn = land.nu_count();
  if (land.points.size() != nm * nn) {
    throw std::invalid_argument("landscape values do not match the grid");
  }
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < nm; ++i) {
    for (std::size_t j = 0; j < nn; ++j) {
      const double v = land.value(i, j);
      bool strict = true;
      for (int di = -1; di <= 1 && strict; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) {
            continue;
          }
          const auto a = static_cast<std::ptrdiff_t>(i) + di;
          const auto b = static_cast<std::ptrdiff_t>(j) + dj;
          if (a < 0 || b < 0 || a >= static_cast<std::ptrdiff_t>(nm) || b >= static_cast<std::ptrdiff_t>(nn)) {
            continue;
          }
          if (!(v > land.value(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) * (1.0 + kStrictMargin))) {
            strict = false;
            break;
          }
        }
      }
      if (!strict) {
        continue;
      }
      if (const auto cls = classify_signed(land.grid.mu_values[i], land.grid.nu_values[j], land.N)) {
        candidates.push_back({i, j, *cls});
      }
    }
  }

  std::vector<LocalMaximum> refined(candidates.size());
  parallel_for(candidates.size(), 0, [&](std::size_t k) { refined[k] = refine(land, candidates[k]); });

  std::vector<LocalMaximum> out;
  for (ProtocolClass cls : {ProtocolClass::Squeezing, ProtocolClass::OverUnTwisting, ProtocolClass::GHZ}) {
    const LocalMaximum* best = nullptr;
    for (const auto& r : refined) {
      if (r.cls == cls && (best == nullptr || r.snr > best->snr)) {
        best = &r;
      }
    }
    if (best != nullptr) {
      out.push_back(*best);
    }
  }
  return out;
}

std::optional<LocalMaximum> class_maximum(ProtocolClass cls, int N, const NoiseModel& noise, int threads) {
  if (N < 2) {
    throw std::invalid_argument("class maxima require N >= 2");
  }
  const double t = class_threshold(N);
  double mu_lo = 0.0, mu_hi = 0.0, nu_lo = -kPi, nu_hi = kPi;
  switch (cls) {
    case ProtocolClass::Squeezing:
      mu_hi = std::min(t, kPi);
      nu_lo = -t;
      nu_hi = t;
      break;
    case ProtocolClass::OverUnTwisting:
      mu_lo = t;
      mu_hi = kPi - t;
      break;
    case ProtocolClass::GHZ:
      mu_lo = std::max(kPi - t, 0.0);
      mu_hi = kPi;
      break;
  }
  if (!(mu_hi > mu_lo)) {
    throw std::invalid_argument("class region is empty for N = " + std::to_string(N));
  }
  const double range = nu_hi - nu_lo;
  const double step = std::min(0.2 / std::sqrt(static_cast<double>(N)), range / 256.0);
  const int nu_count = std::min(4097, static_cast<int>(range / step) + 1);
  const ParameterGrid grid = make_grid(mu_lo, mu_hi, 257, nu_lo, nu_hi, nu_count);
  for (const auto& m : find_local_maxima(landscape(grid, N, noise, threads))) {
    if (m.cls == cls) {
      return m;
    }
  }
  return std::nullopt;
}

ScalingFit fit_power_law(const std::vector<int>& N_values, const std::vector<double>& snr_values) {
  if (N_values.size() != snr_values.size() || N_values.size() < 2) {
    throw std::invalid_argument("power-law fit needs at least 2 matching samples");
  }
  const auto n = static_cast<double>(N_values.size());
  double sx = 0.0, sy = 0.0;
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < N_values.size(); ++k) {
    if (N_values[k] < 1 || !(snr_values[k] > 0.0) || !std::isfinite(snr_values[k])) {
      throw std::invalid_argument("power-law fit needs positive N and snr");
    }
    xs.push_back(std::log(static_cast<double>(N_values[k])));
    ys.push_back(std::log(snr_values[k]));
    sx += xs.back();
    sy += ys.back();
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
  }
  if (!(sxx > 0.0)) {
    throw std::invalid_argument("power-law fit needs distinct N values");
  }
  ScalingFit fit;
  fit.alpha = sxy / sxx;
  const double intercept = my - fit.alpha * mx;
  fit.c = std::exp(intercept);
  fit.N_range = N_values;
  double ss = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double r = ys[k] - (intercept + fit.alpha * xs[k]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

namespace {

void check_N_list(const std::vector<int>& N_list) {
  if (N_list.size() < 4) {
    throw std::invalid_argument("scaling fit needs at least 4 particle numbers");
  }
  for (std::size_t k = 0; k < N_list.size(); ++k) {
    if (N_list[k] < 16 || (k > 0 && N_list[k] <= N_list[k - 1])) {
      throw std::invalid_argument("scaling N list must be increasing with every N >= 16");
    }
  }
}

}  // namespace

ScalingFit fit_scaling_values(const std::vector<int>& N_list, const std::vector<double>& maxima) {
  check_N_list(N_list);
  if (maxima.size() != N_list.size()) {
    throw std::invalid_argument("one maximum per particle number is required");
  }
  const std::size_t start = N_list.size() / 2;
  return fit_power_law(std::vector<int>(N_list.begin() + static_cast<std::ptrdiff_t>(start), N_list.end()),
                       std::vector<double>(maxima.begin() + static_cast<std::ptrdiff_t>(start), maxima.end()));
}

ScalingFit fit_scaling(ProtocolClass cls, const NoiseModel& noise, const std::vector<int>& N_list, int threads) {
  check_N_list(N_list);
  validate(noise);
  std::vector<double> maxima;
  for (int N : N_list) {
    const auto m = class_maximum(cls, N, noise, threads);
    if (!m) {
      throw std::runtime_error("no " + std::string(to_string(cls)) + " maximum found at N = " +
                               std::to_string(N));
    }
    maxima.push_back(m->snr);
  }
  return fit_scaling_values(N_list, maxima);
}

}  // namespace oatecho

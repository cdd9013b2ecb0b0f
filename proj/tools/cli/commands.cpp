#include <fmt/format.h>

#include <cmath>
#include <limits>

#include "cli.hpp"
#include "oatecho/optimizer.hpp"
#include "oatecho/parallel.hpp"
#include "oatecho/qfi.hpp"
#include "oatecho/wigner.hpp"

namespace oatecho::cli {

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string tag(double v) { return fmt::format("{:g}", v); }

using Header = std::vector<std::pair<std::string, std::string>>;

Header base_header(const RunConfig& config) {
  return {{"command", config.command}, {"quick", config.quick ? "true" : "false"}};
}

void add_ranges(Header& h, const RunConfig& config) {
  h.emplace_back("mu-range", num(config.mu_range[0]) + "," + num(config.mu_range[1]));
  h.emplace_back("nu-range", num(config.nu_range[0]) + "," + num(config.nu_range[1]));
  if (config.grid) {
    h.emplace_back("grid", fmt::format("{}x{}", (*config.grid)[0], (*config.grid)[1]));
  }
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    v[static_cast<std::size_t>(k)] = k + 1 == count ? hi : lo + (hi - lo) * k / (count - 1);
  }
  return v;
}

nlohmann::ordered_json direction_json(const Direction& d) { return {d[0], d[1], d[2]}; }

nlohmann::ordered_json maximum_json(const LocalMaximum& m) {
  nlohmann::ordered_json j;
  j["class"] = std::string(to_string(m.cls));
  j["mu"] = m.mu;
  j["nu"] = m.nu;
  j["snr"] = m.snr;
  j["n"] = direction_json(m.n_opt);
  j["m"] = direction_json(m.m_opt);
  return j;
}

std::string noise_suffix(int N, const NoiseModel& noise) {
  return fmt::format("_N{}_sigma{}_Sigma{}", N, tag(noise.sigma), tag(noise.Sigma));
}

}  // namespace

std::vector<Output> cmd_landscape(const RunConfig& config) {
  std::vector<Output> outputs;
  const auto [mu_count, nu_count] = *config.grid;
  const ParameterGrid grid = make_grid(config.mu_range[0], config.mu_range[1], mu_count, config.nu_range[0],
                                       config.nu_range[1], nu_count);
  for (int N : config.N) {
    for (double sigma : config.sigma) {
      for (double Sigma : config.Sigma) {
        const NoiseModel noise{sigma, Sigma};
        const LandscapeGrid land = landscape(grid, N, noise, config.threads);
        Document doc;
        doc.header = base_header(config);
        doc.header.emplace_back("N", std::to_string(N));
        doc.header.emplace_back("sigma", num(sigma));
        doc.header.emplace_back("Sigma", num(Sigma));
        add_ranges(doc.header, config);
        doc.columns = {"mu", "nu", "snr", "nx", "ny", "nz", "mx", "my", "mz", "class"};
        doc.rows.reserve(land.points.size());
        for (std::size_t i = 0; i < land.mu_count(); ++i) {
          for (std::size_t j = 0; j < land.nu_count(); ++j) {
            const double mu = grid.mu_values[i], nu = grid.nu_values[j];
            const OptimizedSensitivity& s = land.at(i, j);
            const auto cls = classify_signed(mu, nu, N);
            doc.rows.push_back({mu, nu, s.snr, s.n_opt[0], s.n_opt[1], s.n_opt[2], s.m_opt[0], s.m_opt[1],
                                s.m_opt[2], cls ? std::string(to_string(*cls)) : std::string("none")});
          }
        }
        auto maxima = nlohmann::ordered_json::array();
        if (N >= 2) {
          for (const auto& m : find_local_maxima(land)) {
            maxima.push_back(maximum_json(m));
          }
        }
        doc.extras["maxima"] = std::move(maxima);
        outputs.push_back({noise_suffix(N, noise), std::move(doc)});
      }
    }
  }
  return outputs;
}

std::vector<Output> cmd_slice(const RunConfig& config) {
  std::vector<Output> outputs;
  const auto [mu_count, nu_count] = *config.grid;
  const std::vector<double> mus = linspace(config.mu_range[0], config.mu_range[1], mu_count);
  const std::vector<double> nus = linspace(config.nu_range[0], config.nu_range[1], nu_count);
  for (int N : config.N) {
    for (double sigma : config.sigma) {
      for (double Sigma : config.Sigma) {
        const NoiseModel noise{sigma, Sigma};
        const std::vector<SliceRow> rows = nu_optimized_slice(mus, N, noise, nus, config.threads);
        // F_Q of the dephased state is only defined here for collective noise.
        std::vector<double> dephased(mus.size(), std::numeric_limits<double>::quiet_NaN());
        if (Sigma == 0.0) {
          parallel_for(mus.size(), config.threads, [&](std::size_t k) {
            dephased[k] = N >= 2 ? qfi_max(mus[k], sigma, N).value / N : 1.0;
          });
        }
        Document doc;
        doc.header = base_header(config);
        doc.header.emplace_back("N", std::to_string(N));
        doc.header.emplace_back("sigma", num(sigma));
        doc.header.emplace_back("Sigma", num(Sigma));
        add_ranges(doc.header, config);
        doc.columns = {"mu", "best_nu", "snr_sq_over_N", "qfi_ideal_over_N", "qfi_dephased_over_N"};
        for (std::size_t k = 0; k < rows.size(); ++k) {
          const double ideal = N >= 2 ? qfi_closed_form_max(mus[k], N) / N : 1.0;
          doc.rows.push_back({rows[k].mu, rows[k].best_nu, rows[k].snr_sq_over_N, ideal, dephased[k]});
        }
        outputs.push_back({noise_suffix(N, noise), std::move(doc)});
      }
    }
  }
  return outputs;
}

std::vector<Output> cmd_scaling(const RunConfig& config) {
  Document doc;
  doc.header = base_header(config);
  std::string list;
  for (std::size_t k = 0; k < config.N.size(); ++k) {
    list += (k ? "," : "") + std::to_string(config.N[k]);
  }
  doc.header.emplace_back("N", list);
  doc.columns = {"class", "sigma", "Sigma", "c", "alpha", "residual", "N_min", "N_max"};
  auto add_row = [&](const std::string& cls, const NoiseModel& noise, const ScalingFit& fit) {
    doc.rows.push_back({cls, noise.sigma, noise.Sigma, fit.c, fit.alpha, fit.residual,
                        static_cast<double>(fit.N_range.front()), static_cast<double>(fit.N_range.back())});
  };

  if (config.synthetic) {
    const auto [c, alpha] = *config.synthetic;
    doc.header.emplace_back("synthetic", num(c) + "," + num(alpha));
    std::vector<double> values;
    for (int N : config.N) {
      values.push_back(c * std::pow(static_cast<double>(N), alpha));
    }
    add_row("synthetic", {}, fit_scaling_values(config.N, values));
    return {{"", std::move(doc)}};
  }

  std::string sigmas, Sigmas;
  for (double s : config.sigma) {
    sigmas += (sigmas.empty() ? "" : ",") + num(s);
  }
  for (double s : config.Sigma) {
    Sigmas += (Sigmas.empty() ? "" : ",") + num(s);
  }
  doc.header.emplace_back("sigma", sigmas);
  doc.header.emplace_back("Sigma", Sigmas);
  auto maxima = nlohmann::ordered_json::array();
  for (double sigma : config.sigma) {
    for (double Sigma : config.Sigma) {
      const NoiseModel noise{sigma, Sigma};
      for (ProtocolClass cls : {ProtocolClass::Squeezing, ProtocolClass::OverUnTwisting, ProtocolClass::GHZ}) {
        std::vector<double> values;
        for (int N : config.N) {
          const auto m = class_maximum(cls, N, noise, config.threads);
          if (!m) {
            throw std::runtime_error(
                fmt::format("no {} maximum at N={} sigma={} Sigma={}", to_string(cls), N, tag(sigma), tag(Sigma)));
          }
          values.push_back(m->snr);
          nlohmann::ordered_json j = maximum_json(*m);
          j["N"] = N;
          j["sigma"] = sigma;
          j["Sigma"] = Sigma;
          maxima.push_back(std::move(j));
        }
        add_row(std::string(to_string(cls)), noise, fit_scaling_values(config.N, values));
      }
    }
  }
  doc.extras["maxima"] = std::move(maxima);
  return {{"", std::move(doc)}};
}

std::vector<Output> cmd_wigner(const RunConfig& config) {
  std::vector<Output> outputs;
  for (int N : config.N) {
    for (double phi : config.phi) {
      const int tc = config.grid ? (*config.grid)[0] : 2 * N + 1;
      const int pc = config.grid ? (*config.grid)[1] : 4 * N + 2;
      const OutMechanismReport r = out_mechanism_report(N, config.mu, phi, tc, pc);
      Document doc;
      doc.header = base_header(config);
      doc.header.emplace_back("N", std::to_string(N));
      doc.header.emplace_back("mu", num(config.mu));
      doc.header.emplace_back("phi", num(phi));
      doc.header.emplace_back("grid", fmt::format("{}x{}", tc, pc));
      doc.extras["overlap"] = r.overlap;
      doc.extras["oracle_expectation"] = r.oracle_expectation;
      doc.extras["state_max_imag"] = r.state_field.max_imag;
      doc.extras["measurement_max_imag"] = r.measurement_field.max_imag;
      doc.columns = {"field", "theta", "phi", "weight", "value"};
      for (const auto* f : {&r.state_field, &r.measurement_field}) {
        const std::string name = f == &r.state_field ? "state" : "measurement";
        for (std::size_t i = 0; i < f->theta.size(); ++i) {
          for (std::size_t j = 0; j < f->phi.size(); ++j) {
            doc.rows.push_back({name, f->theta[i], f->phi[j], f->theta_weights[i], f->at(i, j)});
          }
        }
      }
      outputs.push_back({fmt::format("_N{}_phi{}", N, tag(phi)), std::move(doc)});
    }
  }
  return outputs;
}

}  // namespace oatecho::cli

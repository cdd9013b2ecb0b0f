#include <fmt/format.h>

#include <cmath>
#include <random>

#include "cli.hpp"
#include "oatecho/optimizer.hpp"
#include "oatecho/oracle.hpp"
#include "oatecho/qfi.hpp"
#include "oatecho/wigner.hpp"

namespace oatecho::cli {

MomentProvider moment_provider(const std::string& fault) {
  if (fault == "n2-sign") {
    return [](const ProtocolPoint& p) {
      ScalarCoefficients s = scalar_coefficients(p);
      s.n2 = -s.n2;
      return assemble(s);
    };
  }
  return [](const ProtocolPoint& p) { return moment_matrices(p); };
}

namespace {

CheckResult finish(std::string name, double error, double tolerance, std::string detail = {}) {
  return {std::move(name), error <= tolerance, error, tolerance, std::move(detail)};
}

CheckResult ramsey_anchor() {
  double worst = 0.0;
  for (int N : {2, 10, 100, 1000, 10000}) {
    worst = std::max(worst, std::abs(sensitivity({N, 0.0, 0.0, {}}).snr / std::sqrt(N) - 1.0));
  }
  return finish("ramsey-anchor", worst, 1e-9);
}

CheckResult moment_check(const std::string& name, const MomentProvider& provider, const std::vector<int>& Ns,
                         int count, bool collective, bool individual, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ang(-kPi, kPi), rate(0.0, 1.0);
  double worst = 0.0;
  std::string where;
  for (int t = 0; t < count; ++t) {
    const int N = Ns[static_cast<std::size_t>(t) % Ns.size()];
    const double mu = ang(rng), nu = ang(rng);
    const double sigma = collective ? rate(rng) : 0.0;
    const double Sigma = individual ? rate(rng) : 0.0;
    const ProtocolPoint p{N, mu, nu, {sigma, Sigma}};
    const double e = verify_moment_matrices(p, provider(p));
    if (e > worst) {
      worst = e;
      where = fmt::format("worst at N={} mu={:.6g} nu={:.6g} sigma={:.6g} Sigma={:.6g}", N, mu, nu, sigma, Sigma);
    }
  }
  return finish(name, worst, 1e-9, where);
}

CheckResult oracle_equivalence(std::string name, const MomentProvider& provider, const std::vector<int>& Ns,
                               const std::vector<NoiseModel>& noises) {
  double worst = 0.0;
  std::string where;
  for (int N : Ns) {
    for (const NoiseModel& noise : noises) {
      for (int a = 0; a < 9; ++a) {
        for (int b = 0; b < 9; ++b) {
          const ProtocolPoint p{N, -kPi + 2 * kPi * a / 8, -kPi + 2 * kPi * b / 8, noise};
          const MomentMatrices mm = provider(p);
          const OptimizedSensitivity s = optimize_directions(mm.M, mm.Q);
          double e = 0.0;
          try {
            const double direct = direct_sensitivity(p, s.n_opt, s.m_opt);
            e = s.snr < 1e-6 ? std::abs(direct - s.snr) : std::abs(direct / s.snr - 1.0);
          } catch (const std::domain_error&) {
            // No measurable signal: the analytic value must vanish too.
            e = s.snr;
          }
          if (e > worst) {
            worst = e;
            where = fmt::format("worst at N={} mu={:.6g} nu={:.6g} sigma={:g} Sigma={:g}", N, p.mu, p.nu,
                                noise.sigma, noise.Sigma);
          }
        }
      }
    }
  }
  return finish(std::move(name), worst, 1e-8, where);
}

CheckResult qfi_endpoints(int max_N) {
  double worst = 0.0;
  for (int N : {2, 4, 8, 32}) {
    worst = std::max(worst, std::abs(qfi_closed_form_max(0.0, N) / N - 1.0));
    worst = std::max(worst, std::abs(qfi_closed_form_max(kPi, N) / (static_cast<double>(N) * N) - 1.0));
  }
  for (int N = 2; N <= max_N; N = N < 8 ? N + 1 : N * 2) {
    for (int i = 0; i <= 16; ++i) {
      const double mu = kPi * i / 16;
      worst = std::max(worst, std::abs(qfi_max(mu, 0.0, N).value / qfi_closed_form_max(mu, N) - 1.0));
    }
  }
  return finish("qfi-closed-form", worst, 1e-8);
}

CheckResult qcrb(int N, int threads) {
  std::vector<double> mus;
  for (int i = 0; i <= 64; ++i) {
    mus.push_back(kPi * i / 64);
  }
  double worst = 0.0;
  for (double sigma : {0.0, 0.1}) {
    worst = std::max(worst, qcrb_check(N, {sigma, 0.0}, mus, threads).max_violation);
  }
  return finish("qcrb", worst, 1e-9, fmt::format("N={}", N));
}

CheckResult sign_symmetry(int max_N) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> ang(-kPi, kPi), rate(0.0, 1.0);
  std::uniform_int_distribution<int> pick(2, max_N);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const NoiseModel noise{t % 3 == 1 ? rate(rng) : 0.0, t % 3 == 2 ? rate(rng) : 0.0};
    const int N = pick(rng);
    const double mu = ang(rng), nu = ang(rng);
    const double a = sensitivity({N, mu, nu, noise}).snr;
    const double b = sensitivity({N, -mu, -nu, noise}).snr;
    worst = std::max(worst, std::abs(a - b) / std::max(a, 1e-300));
  }
  return finish("sign-symmetry", worst, 1e-10);
}

CheckResult wigner_trace(const std::vector<int>& Ns) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst = 0.0;
  for (int N : Ns) {
    for (int t = 0; t < 20; ++t) {
      CMatrix A(N + 1, N + 1), B(N + 1, N + 1);
      for (CMatrix* X : {&A, &B}) {
        for (int i = 0; i <= N; ++i) {
          for (int j = 0; j <= N; ++j) {
            (*X)(i, j) = cplx(g(rng), g(rng));
          }
        }
        *X = (0.5 * (*X + X->adjoint())).eval();
      }
      const double exact = (A * B.adjoint()).trace().real();
      const double overlap = sphere_overlap(wigner_field(A, 0, 0), wigner_field(B, 0, 0));
      worst = std::max(worst, std::abs(overlap - exact) / (A.norm() * B.norm()));
    }
  }
  return finish("wigner-trace-identity", worst, 1e-9);
}

CheckResult wigner_out(int N) {
  const OutMechanismReport a = out_mechanism_report(N, kPi / 2, -0.02, 1, 1);
  const OutMechanismReport b = out_mechanism_report(N, kPi / 2, 0.02, 1, 1);
  double e = std::abs(a.overlap / a.oracle_expectation - 1.0);
  if (!(a.overlap * b.overlap < 0.0)) {
    e = std::max(e, 1.0);
  }
  return finish("wigner-out-overlap", e, 1e-9, fmt::format("N={}", N));
}

}  // namespace

std::vector<CheckResult> run_verify_checks(const RunConfig& config) {
  const MomentProvider provider = moment_provider(config.inject_fault);
  const bool quick = config.quick;
  std::vector<CheckResult> out;
  out.push_back(ramsey_anchor());
  const std::vector<int> small = quick ? std::vector<int>{2, 3, 4, 5, 6, 7, 8}
                                       : std::vector<int>{2, 3, 4, 5, 6, 7, 8, 10, 12, 16};
  const std::vector<int> product = quick ? std::vector<int>{2, 3, 4, 5, 6} : std::vector<int>{2, 3, 4, 5, 6, 7, 8};
  const int count = quick ? 30 : 100;
  out.push_back(moment_check("moments-noiseless", provider, small, count, false, false, 1));
  out.push_back(moment_check("moments-collective", provider, small, count, true, false, 2));
  out.push_back(moment_check("moments-individual", provider, product, quick ? 10 : 100, false, true, 3));
  out.push_back(moment_check("moments-combined", provider, product, quick ? 10 : 40, true, true, 4));

  std::vector<NoiseModel> collective{{0.0, 0.0}, {0.1, 0.0}, {0.5, 0.0}};
  std::vector<NoiseModel> individual{{0.0, 0.5}, {0.0, 2.0}};
  out.push_back(oracle_equivalence("oracle-equivalence-collective", provider,
                                   quick ? std::vector<int>{4, 8} : std::vector<int>{4, 8, 12, 16}, collective));
  out.push_back(oracle_equivalence("oracle-equivalence-individual", provider,
                                   quick ? std::vector<int>{4} : std::vector<int>{4, 6, 8}, individual));

  out.push_back(qfi_endpoints(quick ? 8 : 64));
  out.push_back(qcrb(quick ? 8 : 32, config.threads));
  out.push_back(sign_symmetry(quick ? 16 : 256));
  out.push_back(wigner_trace(quick ? std::vector<int>{4, 8} : std::vector<int>{4, 8, 16}));
  out.push_back(wigner_out(quick ? 8 : 32));
  return out;
}

Document verify_document(const RunConfig& config, const std::vector<CheckResult>& checks) {
  Document doc;
  doc.header = {{"command", "verify"}, {"quick", config.quick ? "true" : "false"}};
  if (!config.inject_fault.empty()) {
    doc.header.emplace_back("inject-fault", config.inject_fault);
  }
  doc.columns = {"check", "status", "error", "tolerance", "detail"};
  for (const auto& c : checks) {
    doc.rows.push_back({c.name, std::string(c.passed ? "pass" : "fail"), c.error, c.tolerance, c.detail});
  }
  return doc;
}

}  // namespace oatecho::cli

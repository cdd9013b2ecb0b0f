#include <CLI11.hpp>
#include <fmt/format.h>
#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>

#include "cli.hpp"
#include "oatecho/version.hpp"

namespace oatecho::cli {

namespace {

double parse_number(std::string_view text, std::string_view what) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ValidationError(fmt::format("invalid {} '{}'", what, text));
  }
  return v;
}

int parse_int(std::string_view text, std::string_view what) {
  int v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ValidationError(fmt::format("invalid {} '{}'", what, text));
  }
  return v;
}

std::string trimmed(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  return out;
}

template <class T, class F>
std::vector<T> parse_list(const std::vector<std::string>& items, F&& parse) {
  std::vector<T> out;
  for (const auto& s : items) {
    out.push_back(parse(trimmed(s)));
  }
  return out;
}

}  // namespace

double parse_angle(std::string_view raw) {
  const std::string text = trimmed(raw);
  const std::size_t p = text.find("pi");
  if (p == std::string::npos) {
    return parse_number(text, "angle");
  }
  std::string head = text.substr(0, p);
  if (!head.empty() && head.back() == '*') {
    head.pop_back();
  }
  double factor = 1.0;
  if (head == "-") {
    factor = -1.0;
  } else if (!head.empty() && head != "+") {
    factor = parse_number(head[0] == '+' ? head.substr(1) : head, "angle");
  }
  const std::string tail = text.substr(p + 2);
  double divisor = 1.0;
  if (!tail.empty()) {
    if (tail[0] != '/') {
      throw ValidationError(fmt::format("invalid angle '{}'", raw));
    }
    divisor = parse_number(tail.substr(1), "angle");
    if (divisor == 0.0) {
      throw ValidationError(fmt::format("invalid angle '{}'", raw));
    }
  }
  return factor * kPi / divisor;
}

void resolve_defaults(RunConfig& config) {
  if (config.N.empty()) {
    if (config.command == "scaling") {
      config.N = config.quick ? std::vector<int>{16, 32, 64, 128, 256}
                              : std::vector<int>{64, 128, 256, 512, 1024, 2048, 4096};
    } else if (config.command != "verify") {
      config.N = {32};
    }
  }
  if (!config.grid) {
    if (config.command == "landscape") {
      config.grid = std::array<int, 2>{257, 513};
    } else if (config.command == "slice") {
      config.grid = std::array<int, 2>{257, 1025};
    }
  }
}

void validate(const RunConfig& config) {
  static const std::vector<std::string> commands{"landscape", "slice", "scaling", "verify", "wigner"};
  if (std::find(commands.begin(), commands.end(), config.command) == commands.end()) {
    throw ValidationError(fmt::format("unknown command '{}'", config.command));
  }
  for (int N : config.N) {
    if (N < 1) {
      throw ValidationError(fmt::format("N must be >= 1, got {}", N));
    }
  }
  if (config.command == "wigner") {
    for (int N : config.N) {
      if (N > 512) {
        throw ValidationError("wigner supports N <= 512");
      }
    }
  }
  if (config.command == "scaling") {
    if (config.N.size() < 4 || !std::is_sorted(config.N.begin(), config.N.end()) ||
        std::adjacent_find(config.N.begin(), config.N.end()) != config.N.end() || config.N.front() < 16) {
      throw ValidationError("scaling needs at least 4 strictly increasing N values, each >= 16");
    }
  }
  if (config.sigma.empty() || config.Sigma.empty()) {
    throw ValidationError("noise lists must not be empty");
  }
  for (double s : config.sigma) {
    validate(NoiseModel{s, 0.0});
  }
  for (double s : config.Sigma) {
    validate(NoiseModel{0.0, s});
  }
  for (const auto* r : {&config.mu_range, &config.nu_range}) {
    if (!std::isfinite((*r)[0]) || !std::isfinite((*r)[1]) || !((*r)[0] < (*r)[1])) {
      throw ValidationError("ranges must be finite with min < max");
    }
  }
  if (config.grid) {
    const auto [a, b] = *config.grid;
    if (a < 2 || b < 2) {
      throw ValidationError("grid counts must be >= 2");
    }
    if (static_cast<long long>(a) * b > 50'000'000LL) {
      throw ValidationError("grid has more than 5e7 points");
    }
  }
  if (config.threads < 0) {
    throw ValidationError("threads must be >= 0");
  }
  if (!std::isfinite(config.mu)) {
    throw ValidationError("mu must be finite");
  }
  if (config.phi.empty()) {
    throw ValidationError("phi list must not be empty");
  }
  for (double p : config.phi) {
    if (!std::isfinite(p)) {
      throw ValidationError("phi must be finite");
    }
  }
  if (config.synthetic) {
    const auto [c, alpha] = *config.synthetic;
    if (!(c > 0.0) || !std::isfinite(c) || !std::isfinite(alpha)) {
      throw ValidationError("synthetic power law needs c > 0 and finite alpha");
    }
  }
  if (!config.inject_fault.empty() && config.inject_fault != "n2-sign") {
    throw ValidationError(fmt::format("unknown fault '{}'", config.inject_fault));
  }
}

namespace {

void write_outputs(const RunConfig& config, const std::vector<Output>& outputs, std::ostream& out) {
  for (const auto& o : outputs) {
    const std::string content = config.format == Format::Json ? render_json(o.doc) : render_csv(o.doc);
    const std::string path = output_path(config.out, o.suffix, outputs.size());
    if (path == "-") {
      out << content;
      continue;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
      throw IoError(fmt::format("cannot open '{}' for writing", path));
    }
    file << content;
    file.close();
    if (!file) {
      throw IoError(fmt::format("failed writing '{}'", path));
    }
  }
}

int dispatch(RunConfig& config, std::ostream& out) {
  resolve_defaults(config);
  validate(config);
  if (config.command == "verify") {
    const auto checks = run_verify_checks(config);
    bool ok = true;
    for (const auto& c : checks) {
      out << fmt::format("{} {} error={:.3g} tolerance={:.3g}{}{}\n", c.passed ? "PASS" : "FAIL", c.name, c.error,
                         c.tolerance, c.detail.empty() ? "" : " ", c.detail);
      ok = ok && c.passed;
    }
    if (config.out != "-") {
      write_outputs(config, {{"", verify_document(config, checks)}}, out);
    }
    out << (ok ? "verify: all checks passed\n" : "verify: FAILED\n");
    return ok ? kExitOk : kExitVerifyFailure;
  }
  std::vector<Output> outputs;
  if (config.command == "landscape") {
    outputs = cmd_landscape(config);
  } else if (config.command == "slice") {
    outputs = cmd_slice(config);
  } else if (config.command == "scaling") {
    outputs = cmd_scaling(config);
  } else {
    outputs = cmd_wigner(config);
  }
  write_outputs(config, outputs, out);
  return kExitOk;
}

}  // namespace

int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized one-axis-twisting echo protocols: sensitivity landscapes, scaling and checks", "oatecho"};
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "", "key=value configuration file; command-line flags take precedence");
  app.config_formatter(std::make_shared<CLI::ConfigINI>());
  app.require_subcommand(1, 1);

  std::vector<std::string> n_list, sigma_list, Sigma_list, mu_range, nu_range, grid, phi_list, synthetic;
  std::string mu_text, format = "csv";
  RunConfig config;

  app.add_option("--n", n_list, "Particle number(s), comma-separated")->delimiter(',');
  app.add_option("--sigma", sigma_list, "Collective dephasing strength(s)")->delimiter(',');
  app.add_option("--Sigma", Sigma_list, "Individual dephasing strength(s)")->delimiter(',');
  app.add_option("--mu-range", mu_range, "mu range as min,max (accepts pi)")->delimiter(',')->expected(2);
  app.add_option("--nu-range", nu_range, "nu range as min,max (accepts pi)")->delimiter(',')->expected(2);
  app.add_option("--grid", grid, "Sample counts as MUxNU or MU,NU")->delimiter(',')->expected(1, 2);
  app.add_option("--out", config.out, "Output file, '-' for stdout");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", config.threads, "Worker threads, 0 for all cores");
  app.add_flag("--quick", config.quick, "Reduced problem sizes");
  app.add_option("--mu", mu_text, "Twisting strength for wigner");
  app.add_option("--phi", phi_list, "Signal phase(s) for wigner")->delimiter(',');
  app.add_option("--synthetic", synthetic, "scaling: fit c,alpha power law instead of computing maxima")
      ->delimiter(',')
      ->expected(2);
  app.add_option("--inject-fault", config.inject_fault, "verify: deliberately corrupt the moments (n2-sign)");

  for (const auto& [name, help] : std::vector<std::pair<const char*, const char*>>{
           {"landscape", "Optimized sensitivity on a (mu, nu) grid"},
           {"slice", "Sensitivity maximized over nu, with QFI bounds"},
           {"scaling", "Power-law fits of the class maxima against N"},
           {"verify", "Oracle cross-checks and invariants"},
           {"wigner", "Wigner fields of the over-un-twisting mechanism"}}) {
    app.add_subcommand(name, help)->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::FileError& e) {
    err << e.what() << '\n';
    return kExitIo;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    config.command = app.get_subcommands().front()->get_name();
    config.N = parse_list<int>(n_list, [](const std::string& s) { return parse_int(s, "N"); });
    if (!sigma_list.empty()) {
      config.sigma = parse_list<double>(sigma_list, [](const std::string& s) { return parse_number(s, "sigma"); });
    }
    if (!Sigma_list.empty()) {
      config.Sigma = parse_list<double>(Sigma_list, [](const std::string& s) { return parse_number(s, "Sigma"); });
    }
    if (!mu_range.empty()) {
      config.mu_range = {parse_angle(mu_range[0]), parse_angle(mu_range[1])};
    }
    if (!nu_range.empty()) {
      config.nu_range = {parse_angle(nu_range[0]), parse_angle(nu_range[1])};
    }
    if (!grid.empty()) {
      std::string a = grid[0], b;
      if (grid.size() == 2) {
        b = grid[1];
      } else {
        const std::size_t x = a.find_first_of("xX");
        if (x == std::string::npos) {
          throw ValidationError("grid must be MUxNU or MU,NU");
        }
        b = a.substr(x + 1);
        a = a.substr(0, x);
      }
      config.grid = std::array<int, 2>{parse_int(trimmed(a), "grid"), parse_int(trimmed(b), "grid")};
    }
    config.format = format == "json" ? Format::Json : Format::Csv;
    if (!mu_text.empty()) {
      config.mu = parse_angle(mu_text);
    }
    if (!phi_list.empty()) {
      config.phi = parse_list<double>(phi_list, [](const std::string& s) { return parse_angle(s); });
    }
    if (!synthetic.empty()) {
      config.synthetic = std::array<double, 2>{parse_number(trimmed(synthetic[0]), "synthetic c"),
                                               parse_number(trimmed(synthetic[1]), "synthetic alpha")};
    }
    return dispatch(config, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  return run_main(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace oatecho::cli

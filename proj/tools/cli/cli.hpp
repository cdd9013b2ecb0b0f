#pragma once

// Command-line front end: configuration, sweeps, CSV/JSON export and the
// verification suite.

#include <array>
#include <functional>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "oatecho/core.hpp"
#include "oatecho/moments.hpp"

namespace oatecho::cli {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitVerifyFailure = 2, kExitIo = 3 };

struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { Csv, Json };

struct RunConfig {
  std::string command;
  std::vector<int> N;  // empty: command default
  std::vector<double> sigma{0.0};
  std::vector<double> Sigma{0.0};
  std::array<double, 2> mu_range{0.0, kPi};
  std::array<double, 2> nu_range{-kPi, kPi};
  std::optional<std::array<int, 2>> grid;
  std::string out = "-";
  Format format = Format::Csv;
  int threads = 0;
  bool quick = false;
  double mu = kPi / 2;            // wigner
  std::vector<double> phi{-0.02};  // wigner
  std::optional<std::array<double, 2>> synthetic;  // scaling: c, alpha
  std::string inject_fault;       // verify: "" or "n2-sign"
};

/// Accepts plain numbers and multiples or fractions of pi: "pi", "-pi/2",
/// "3pi/4", "0.5*pi". Throws ValidationError.
double parse_angle(std::string_view text);

/// Fills command defaults (N list, grid) in place.
void resolve_defaults(RunConfig& config);

/// Throws ValidationError on the first violated precondition.
void validate(const RunConfig& config);

using Cell = std::variant<double, std::string>;

struct Document {
  /// Configuration echo, in order. Thread count and output path are omitted.
  std::vector<std::pair<std::string, std::string>> header;
  /// Derived quantities reported alongside the table.
  nlohmann::ordered_json extras = nlohmann::ordered_json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string render_csv(const Document& doc);
std::string render_json(const Document& doc);

/// One output file; `suffix` is appended to the file stem when a command
/// produces several.
struct Output {
  std::string suffix;
  Document doc;
};

std::vector<Output> cmd_landscape(const RunConfig& config);
std::vector<Output> cmd_slice(const RunConfig& config);
std::vector<Output> cmd_scaling(const RunConfig& config);
std::vector<Output> cmd_wigner(const RunConfig& config);

struct CheckResult {
  std::string name;
  bool passed = false;
  double error = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

using MomentProvider = std::function<MomentMatrices(const ProtocolPoint&)>;

/// The analytic moments, optionally with a deliberate fault for mutation
/// testing of the suite ("n2-sign").
MomentProvider moment_provider(const std::string& fault);

std::vector<CheckResult> run_verify_checks(const RunConfig& config);
Document verify_document(const RunConfig& config, const std::vector<CheckResult>& checks);

/// Path for one output: "-" stays stdout; otherwise the suffix goes before
/// the extension.
std::string output_path(const std::string& out, const std::string& suffix, std::size_t output_count);

/// Parses argv, dispatches, writes outputs, and returns an exit code.
int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace oatecho::cli

#include <fmt/format.h>

#include "cli.hpp"
#include "oatecho/version.hpp"

namespace oatecho::cli {

namespace {

std::string format_cell(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) {
    return fmt::format("{:.17g}", *d);
  }
  return std::get<std::string>(cell);
}

}  // namespace

std::string render_csv(const Document& doc) {
  std::string s = fmt::format("# oatecho {}\n", kVersion);
  for (const auto& [key, value] : doc.header) {
    s += fmt::format("# {}={}\n", key, value);
  }
  for (const auto& [key, value] : doc.extras.items()) {
    s += fmt::format("# {}: {}\n", key, value.dump());
  }
  for (std::size_t c = 0; c < doc.columns.size(); ++c) {
    s += (c ? "," : "") + doc.columns[c];
  }
  s += '\n';
  for (const auto& row : doc.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) {
        s += ',';
      }
      s += format_cell(row[c]);
    }
    s += '\n';
  }
  return s;
}

std::string render_json(const Document& doc) {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["config"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : doc.header) {
    j["config"][key] = value;
  }
  j["results"] = doc.extras;
  j["columns"] = doc.columns;
  auto& data = j["data"] = nlohmann::ordered_json::object();
  for (std::size_t c = 0; c < doc.columns.size(); ++c) {
    auto column = nlohmann::ordered_json::array();
    for (const auto& row : doc.rows) {
      std::visit([&](const auto& v) { column.push_back(v); }, row[c]);
    }
    data[doc.columns[c]] = std::move(column);
  }
  return j.dump(1) + '\n';
}

std::string output_path(const std::string& out, const std::string& suffix, std::size_t output_count) {
  if (out == "-" || output_count <= 1 || suffix.empty()) {
    return out;
  }
  const std::size_t slash = out.find_last_of('/');
  const std::size_t dot = out.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash) || dot == slash + 1) {
    return out + suffix;
  }
  return out.substr(0, dot) + suffix + out.substr(dot);
}

}  // namespace oatecho::cli

#include "tubemass/runner/report.hpp"

#include <algorithm>
#include <fstream>

#include <fmt/format.h>

namespace tubemass::runner {

void Table::add(std::vector<double> row) {
  if (row.size() != columns.size())
    throw DimensionError(fmt::format("row of {} values for {} columns", row.size(), columns.size()));
  rows.push_back(std::move(row));
}

std::vector<double> Table::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw Error(fmt::format("no column '{}'", name));
  const auto k = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[k]);
  return out;
}

std::string Table::csv() const {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
  out += '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += fmt::format("{}", r[i]);
    }
    out += '\n';
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot write {}", path.string()));
  out << content;
  if (!out) throw Error(fmt::format("write to {} failed", path.string()));
}

Json Report::to_json() const {
  Json j;
  j["name"] = name;
  j["task"] = task_name(task);
  j["verdict"] = verdict;
  j["detail"] = detail;
  j["tables"] = tables;
  j["figures"] = figures;
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  j["metrics"] = metrics;
  j["warnings"] = warnings;
  return j;
}

}  // namespace tubemass::runner

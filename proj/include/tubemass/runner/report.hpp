#pragma once

// Tables, CSV and SVG emission and the per-run report document.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tubemass/runner/scenario.hpp"

namespace tubemass::runner {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  explicit Table(std::vector<std::string> cols) : columns(std::move(cols)) {}
  void add(std::vector<double> row);
  bool empty() const { return rows.empty(); }
  std::vector<double> column(const std::string& name) const;
  /// Header plus one line per row; doubles in shortest round-trip form.
  std::string csv() const;
};

/// Throws Error when the file cannot be written.
void write_text(const std::filesystem::path& path, const std::string& content);

struct PlotSpec {
  std::string title;
  std::string x;
  std::string y;
  std::optional<std::string> err;        // error bar half-width column
  double err_scale = 1.0;
  std::optional<std::string> reference;  // second series drawn dashed
  bool logx = false;
  bool logy = false;
  std::string annotation;
};

/// Deterministic SVG text for a table; throws Error on an empty table.
std::string render_svg(const Table& table, const PlotSpec& spec);
void emit_plot(const Table& table, const PlotSpec& spec, const std::filesystem::path& path);

struct Report {
  std::string name;
  Task task = Task::tube_mass;
  /// pass, fail, inconclusive or "bound violated (expected)".
  std::string verdict;
  std::string detail;
  std::vector<std::string> tables;
  std::vector<std::string> figures;
  std::string config_hash;
  std::uint64_t seed = 0;
  Json metrics = Json::object();
  std::vector<std::string> warnings;

  Json to_json() const;
};

}  // namespace tubemass::runner

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace kato {

/// Numeric table written as CSV with round-trip precision (%.17g), so equal
/// doubles always produce equal bytes.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  void add_row(std::vector<double> row);
};

void write_csv(const std::string& path, const CsvTable& table);
std::string format_double(double v);

enum class Status { pass, fail, hypothesis_violated, inconclusive };
const char* to_string(Status s);

/// Outcome of one experiment.
struct Verdict {
  std::string name;
  std::string kind;
  nlohmann::json params = nlohmann::json::object();
  double slope_or_ratio = 0.0;
  double target = 0.0;
  double slack = 0.0;
  Status status = Status::fail;
  std::string note;
  /// Additional named measurements (drifts, spreads, per-N values).
  nlohmann::json metrics = nlohmann::json::object();

  bool pass() const { return status == Status::pass; }
  nlohmann::json to_json() const;
};

void write_json(const std::string& path, const nlohmann::json& j);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool line = true;
};

struct PlotSpec {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool logx = false;
  bool logy = false;
  std::vector<PlotSeries> series;
};

/// Static SVG line/scatter plot.  Non-positive values are dropped on log axes.
void write_svg(const std::string& path, const PlotSpec& spec);

}  // namespace kato

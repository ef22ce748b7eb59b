#include "kato/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace kato {

void CsvTable::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) {
    throw std::invalid_argument("csv row width does not match header");
  }
  rows.push_back(std::move(row));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? "," : "") << table.columns[c];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << (c ? "," : "") << format_double(row[c]);
    }
    out << '\n';
  }
}

const char* to_string(Status s) {
  switch (s) {
    case Status::pass:
      return "pass";
    case Status::fail:
      return "fail";
    case Status::hypothesis_violated:
      return "hypothesis-violated";
    case Status::inconclusive:
      return "inconclusive";
  }
  return "fail";
}

namespace {

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace

nlohmann::json Verdict::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["kind"] = kind;
  j["params"] = params;
  j["slope_or_ratio"] = number(slope_or_ratio);
  j["target"] = number(target);
  j["slack"] = number(slack);
  j["pass"] = pass();
  j["status"] = to_string(status);
  j["note"] = note;
  j["metrics"] = metrics;
  return j;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

void write_svg(const std::string& path, const PlotSpec& spec) {
  const double width = 640, height = 420, left = 70, right = 150, top = 40, bottom = 50;
  auto tx = [&](double v) { return spec.logx ? std::log10(v) : v; };
  auto ty = [&](double v) { return spec.logy ? std::log10(v) : v; };
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!spec.logx || x > 0) &&
           (!spec.logy || y > 0);
  };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : spec.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  }
  if (!std::isfinite(x0)) {
    x0 = 0;
    x1 = 1;
    y0 = 0;
    y1 = 1;
  }
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  const double pw = width - left - right, ph = height - top - bottom;
  auto px = [&](double v) { return left + (tx(v) - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return top + ph - (ty(v) - y0) / (y1 - y0) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(spec.title) << "</text>\n";
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\""
      << ph << "\" fill=\"none\" stroke=\"black\"/>\n";
  auto tick_label = [](double v, bool log) {
    std::ostringstream s;
    s.precision(3);
    if (log) {
      s << "1e" << v;
    } else {
      s << v;
    }
    return s.str();
  };
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0;
    const double fy = y0 + (y1 - y0) * i / 4.0;
    const double sx = left + pw * i / 4.0;
    const double sy = top + ph - ph * i / 4.0;
    svg << "<text x=\"" << sx << "\" y=\"" << top + ph + 16
        << "\" text-anchor=\"middle\">" << tick_label(fx, spec.logx) << "</text>\n";
    svg << "<text x=\"" << left - 6 << "\" y=\"" << sy + 4 << "\" text-anchor=\"end\">"
        << tick_label(fy, spec.logy) << "</text>\n";
  }
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\">" << escape(spec.xlabel) << "</text>\n";
  svg << "<text x=\"16\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 16 "
      << top + ph / 2 << ")\" text-anchor=\"middle\">" << escape(spec.ylabel)
      << "</text>\n";
  for (std::size_t k = 0; k < spec.series.size(); ++k) {
    const auto& s = spec.series[k];
    const char* color = kColors[k % 8];
    std::ostringstream pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      pts << px(s.x[i]) << "," << py(s.y[i]) << " ";
      if (!s.line) {
        svg << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i])
            << "\" r=\"3\" fill=\"" << color << "\"/>\n";
      }
    }
    if (s.line) {
      svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\""
          << pts.str() << "\"/>\n";
    }
    const double ly = top + 14 + 16.0 * k;
    svg << "<rect x=\"" << width - right + 10 << "\" y=\"" << ly - 9
        << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n";
    svg << "<text x=\"" << width - right + 26 << "\" y=\"" << ly << "\">" << escape(s.label)
        << "</text>\n";
  }
  svg << "</svg>\n";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << svg.str();
}

}  // namespace kato

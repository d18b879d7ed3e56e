// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The semcom Authors

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "semcom/errors.hpp"
#include "semcom/harness.hpp"

namespace semcom {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string g9(double v) { return fmt("%.9g", v); }
std::string g17(double v) { return fmt("%.17g", v); }

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double to_double(const std::string& s, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw DomainError("csv line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

long long to_integer(const std::string& s, std::size_t line) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) {
    throw DomainError("csv line " + std::to_string(line) + ": bad integer '" + s + "'");
  }
  return v;
}

bool usable(const ResultRow& r) { return r.status == "converged" || r.status == "max-iter"; }

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

// "Nice" tick step covering span with about `target` intervals.
double tick_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double nice = norm < 1.5 ? 1.0 : norm < 3.0 ? 2.0 : norm < 7.0 ? 5.0 : 10.0;
  return nice * mag;
}

}  // namespace

void sort_rows(std::vector<ResultRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.users, a.irs_elements, a.algo, a.seed) <
           std::tie(b.users, b.irs_elements, b.algo, b.seed);
  });
}

std::string to_csv(std::vector<ResultRow> rows) {
  sort_rows(rows);
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : rows) {
    if (r.scenario_id.find_first_of(",\n") != std::string::npos ||
        r.algo.find_first_of(",\n") != std::string::npos ||
        r.status.find_first_of(",\n") != std::string::npos) {
      throw ContractViolation("write_csv: text fields must not contain commas or newlines");
    }
    out += r.scenario_id + ',' + r.algo + ',' + std::to_string(r.seed) + ',' +
           std::to_string(r.users) + ',' + std::to_string(r.irs_elements) + ',' +
           g9(r.avg_latency_s) + ',' + g9(r.avg_semantic_bits) + ',' + g9(r.avg_sinr_db) + ',' +
           g9(r.total_power_w) + ',' + g9(r.objective) + ',' + std::to_string(r.iterations) + ',' +
           r.status + '\n';
  }
  return out;
}

void write_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
  const std::string text = to_csv(rows);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_csv: cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write_csv: write to '" + path.string() + "' failed");
}

std::vector<ResultRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw DomainError("csv: missing or unexpected header");
  }
  std::vector<ResultRow> rows;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 12) {
      throw DomainError("csv line " + std::to_string(n) + ": expected 12 fields, got " +
                        std::to_string(f.size()));
    }
    ResultRow r;
    r.scenario_id = f[0];
    r.algo = f[1];
    const long long seed = to_integer(f[2], n);
    if (seed < 0) throw DomainError("csv line " + std::to_string(n) + ": negative seed");
    r.seed = static_cast<std::uint64_t>(seed);
    r.users = static_cast<int>(to_integer(f[3], n));
    r.irs_elements = static_cast<int>(to_integer(f[4], n));
    r.avg_latency_s = to_double(f[5], n);
    r.avg_semantic_bits = to_double(f[6], n);
    r.avg_sinr_db = to_double(f[7], n);
    r.total_power_w = to_double(f[8], n);
    r.objective = to_double(f[9], n);
    r.iterations = static_cast<int>(to_integer(f[10], n));
    r.status = f[11];
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ResultRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_csv: cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_csv(os.str());
}

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::Latency: return "avg_latency_s";
    case Metric::SemanticBits: return "avg_semantic_bits";
    case Metric::SinrDb: return "avg_sinr_db";
    case Metric::Power: return "total_power_w";
    case Metric::Objective: return "objective";
  }
  return "unknown";
}

double metric_value(const ResultRow& r, Metric m) {
  switch (m) {
    case Metric::Latency: return r.avg_latency_s;
    case Metric::SemanticBits: return r.avg_semantic_bits;
    case Metric::SinrDb: return r.avg_sinr_db;
    case Metric::Power: return r.total_power_w;
    case Metric::Objective: return r.objective;
  }
  return 0.0;
}

std::map<std::string, std::vector<SeriesPoint>> aggregate(const std::vector<ResultRow>& rows,
                                                          SweepAxis axis, Metric metric) {
  std::map<std::string, std::map<int, std::vector<double>>> groups;
  for (const auto& r : rows) {
    const double v = metric_value(r, metric);
    if (!usable(r) || !std::isfinite(v)) continue;
    groups[r.algo][axis == SweepAxis::Users ? r.users : r.irs_elements].push_back(v);
  }
  std::map<std::string, std::vector<SeriesPoint>> out;
  for (const auto& [algo, by_x] : groups) {
    auto& series = out[algo];
    for (const auto& [x, vals] : by_x) {
      SeriesPoint p;
      p.x = x;
      p.count = static_cast<int>(vals.size());
      double sum = 0.0;
      for (double v : vals) sum += v;
      p.mean = sum / p.count;
      if (p.count > 1) {
        double ss = 0.0;
        for (double v : vals) ss += (v - p.mean) * (v - p.mean);
        p.std_error = std::sqrt(ss / (p.count - 1)) / std::sqrt(static_cast<double>(p.count));
      }
      series.push_back(p);
    }
  }
  return out;
}

std::string render_svg(const std::map<std::string, std::vector<SeriesPoint>>& series,
                       const std::string& title, const std::string& x_label,
                       const std::string& y_label) {
  constexpr double kW = 640, kH = 420, kLeft = 80, kRight = 150, kTop = 40, kBottom = 60;
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
  for (const auto& [_, pts] : series) {
    for (const auto& p : pts) {
      x_lo = std::min(x_lo, p.x);
      x_hi = std::max(x_hi, p.x);
      y_lo = std::min(y_lo, p.mean - p.std_error);
      y_hi = std::max(y_hi, p.mean + p.std_error);
    }
  }
  if (!std::isfinite(x_lo)) x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
  if (x_hi == x_lo) x_lo -= 0.5, x_hi += 0.5;
  if (y_hi == y_lo) {
    const double pad = std::max(std::abs(y_lo) * 0.05, 1e-12);
    y_lo -= pad;
    y_hi += pad;
  }
  const double y_pad = 0.05 * (y_hi - y_lo);
  y_lo -= y_pad;
  y_hi += y_pad;

  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  const auto sx = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * pw; };
  const auto sy = [&](double y) { return kTop + (y_hi - y) / (y_hi - y_lo) * ph; };
  const auto c2 = [](double v) { return fmt("%.2f", v); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
    << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<title>" << escape_xml(title) << "</title>\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << c2(kLeft + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
    << escape_xml(title) << "</text>\n";

  // Axes and ticks.
  s << "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n";
  s << "<line x1=\"" << c2(kLeft) << "\" y1=\"" << c2(kTop + ph) << "\" x2=\"" << c2(kLeft + pw)
    << "\" y2=\"" << c2(kTop + ph) << "\"/>\n";
  s << "<line x1=\"" << c2(kLeft) << "\" y1=\"" << c2(kTop) << "\" x2=\"" << c2(kLeft)
    << "\" y2=\"" << c2(kTop + ph) << "\"/>\n";
  s << "</g>\n<g class=\"ticks\">\n";
  std::set<double> xs;
  for (const auto& [_, pts] : series) {
    for (const auto& p : pts) xs.insert(p.x);
  }
  for (double x : xs) {
    s << "<line x1=\"" << c2(sx(x)) << "\" y1=\"" << c2(kTop + ph) << "\" x2=\"" << c2(sx(x))
      << "\" y2=\"" << c2(kTop + ph + 5) << "\" stroke=\"black\"/>";
    s << "<text x=\"" << c2(sx(x)) << "\" y=\"" << c2(kTop + ph + 18)
      << "\" text-anchor=\"middle\">" << g9(x) << "</text>\n";
  }
  const double step = tick_step(y_hi - y_lo, 5);
  for (double y = std::ceil(y_lo / step) * step; y <= y_hi + 1e-9 * step; y += step) {
    const double yy = std::abs(y) < 1e-9 * step ? 0.0 : y;
    s << "<line x1=\"" << c2(kLeft - 5) << "\" y1=\"" << c2(sy(yy)) << "\" x2=\"" << c2(kLeft)
      << "\" y2=\"" << c2(sy(yy)) << "\" stroke=\"black\"/>";
    s << "<text x=\"" << c2(kLeft - 8) << "\" y=\"" << c2(sy(yy) + 4)
      << "\" text-anchor=\"end\">" << fmt("%.4g", yy) << "</text>\n";
  }
  s << "</g>\n";
  s << "<text class=\"x-label\" x=\"" << c2(kLeft + pw / 2) << "\" y=\"" << c2(kH - 15)
    << "\" text-anchor=\"middle\">" << escape_xml(x_label) << "</text>\n";
  s << "<text class=\"y-label\" x=\"18\" y=\"" << c2(kTop + ph / 2)
    << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << c2(kTop + ph / 2) << ")\">"
    << escape_xml(y_label) << "</text>\n";

  std::size_t idx = 0;
  for (const auto& [algo, pts] : series) {
    const char* color = kColors[idx % (sizeof kColors / sizeof *kColors)];
    s << "<g class=\"series\" data-algo=\"" << escape_xml(algo) << "\" stroke=\"" << color
      << "\" fill=\"" << color << "\">\n";
    s << "<polyline fill=\"none\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      s << (i ? " " : "") << c2(sx(pts[i].x)) << ',' << c2(sy(pts[i].mean));
    }
    s << "\"/>\n";
    for (const auto& p : pts) {
      if (p.std_error > 0.0) {
        s << "<line class=\"error-bar\" x1=\"" << c2(sx(p.x)) << "\" y1=\""
          << c2(sy(p.mean - p.std_error)) << "\" x2=\"" << c2(sx(p.x)) << "\" y2=\""
          << c2(sy(p.mean + p.std_error)) << "\"/>\n";
      }
      s << "<circle r=\"3\" cx=\"" << c2(sx(p.x)) << "\" cy=\"" << c2(sy(p.mean))
        << "\" data-x=\"" << g17(p.x) << "\" data-mean=\"" << g17(p.mean) << "\" data-stderr=\""
        << g17(p.std_error) << "\" data-count=\"" << p.count << "\"/>\n";
    }
    const double ly = kTop + 10 + 20 * static_cast<double>(idx);
    s << "<line x1=\"" << c2(kLeft + pw + 15) << "\" y1=\"" << c2(ly) << "\" x2=\""
      << c2(kLeft + pw + 40) << "\" y2=\"" << c2(ly) << "\" stroke-width=\"2\"/>";
    s << "<text x=\"" << c2(kLeft + pw + 45) << "\" y=\"" << c2(ly + 4)
      << "\" stroke=\"none\" fill=\"black\">" << escape_xml(algo) << "</text>\n";
    s << "</g>\n";
    ++idx;
  }
  s << "</svg>\n";
  return s.str();
}

PlotReport emit_plots(const std::vector<ResultRow>& rows, const std::filesystem::path& out_dir) {
  struct Figure {
    SweepAxis axis;
    Metric metric;
    const char* file;
    const char* title;
  };
  static const Figure kFigures[] = {
      {SweepAxis::Users, Metric::Latency, "latency_vs_K.svg", "Average latency versus user number"},
      {SweepAxis::Users, Metric::SemanticBits, "semantic_bits_vs_K.svg",
       "Average semantic bits versus user number"},
      {SweepAxis::Users, Metric::SinrDb, "sinr_vs_K.svg", "Average SINR versus user number"},
      {SweepAxis::IrsUnits, Metric::Latency, "latency_vs_N.svg",
       "Average latency versus IRS elements"},
      {SweepAxis::IrsUnits, Metric::SinrDb, "sinr_vs_N.svg", "Average SINR versus IRS elements"},
  };

  PlotReport report;
  std::filesystem::create_directories(out_dir);
  for (const auto& f : kFigures) {
    // Keep only rows at the most common value of the other axis so a mixed
    // CSV does not blend two sweeps into one line.
    std::map<int, int> other;
    for (const auto& r : rows) ++other[f.axis == SweepAxis::Users ? r.irs_elements : r.users];
    std::vector<ResultRow> subset;
    if (!other.empty()) {
      const int keep = std::max_element(other.begin(), other.end(), [](auto& a, auto& b) {
                         return a.second < b.second;
                       })->first;
      for (const auto& r : rows) {
        if ((f.axis == SweepAxis::Users ? r.irs_elements : r.users) == keep) subset.push_back(r);
      }
    }
    const auto series = aggregate(subset, f.axis, f.metric);
    std::size_t points = 0;
    for (const auto& [_, pts] : series) points = std::max(points, pts.size());
    if (points < 2) {
      report.warnings.push_back(std::string(f.file) + ": fewer than 2 sweep points along " +
                                std::string(to_string(f.axis)) + ", skipped");
      continue;
    }
    const std::string svg = render_svg(series, f.title, f.axis == SweepAxis::Users ? "K" : "N",
                                       std::string(metric_name(f.metric)));
    const auto path = out_dir / f.file;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_plots: cannot write '" + path.string() + "'");
    out << svg;
    report.written.push_back(path);
  }
  return report;
}

void write_manifest(const ScenarioConfig& c, const SweepSpec& sweep,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_manifest: cannot write '" + path.string() + "'");
  out << "semcom run manifest\n";
  out << "sweep.axis = " << to_string(sweep.axis) << "\n";
  out << "sweep.values =";
  for (int v : sweep.values) out << ' ' << v;
  out << "\nalgorithms =";
  for (auto a : c.algorithms) out << ' ' << to_string(a);
  out << "\nseeds =";
  for (auto s : c.seeds) out << ' ' << s;
  out << "\ntrials = " << sweep.values.size() * c.seeds.size() * c.algorithms.size() << "\n";
  for (const auto& w : c.warnings) out << "warning = " << w << "\n";
  out << "\n[resolved config]\n" << config_to_json(c) << "\n";
}

}  // namespace semcom

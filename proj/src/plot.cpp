#include "mzk/plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mzk/diagnostics.hpp"
#include "mzk/errors.hpp"
#include "mzk/io.hpp"

namespace mzk {

namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 80, kRight = 160, kTop = 40, kBottom = 60;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

struct PlotAxis {
  bool log = false;
  double lo = 0.0, hi = 1.0;
  double map(double v, double from, double to) const {
    const double a = log ? std::log10(v) : v;
    return from + (a - lo) / (hi - lo) * (to - from);
  }
  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      for (double e = std::ceil(lo); e <= std::floor(hi) + 1e-9; e += 1.0) out.push_back(std::pow(10.0, e));
      if (out.size() < 2) out = {std::pow(10.0, lo), std::pow(10.0, hi)};
    } else {
      for (int k = 0; k <= 4; ++k) out.push_back(lo + (hi - lo) * k / 4.0);
    }
    return out;
  }
};

PlotAxis fit_axis(const std::vector<double>& values, bool log) {
  PlotAxis a;
  a.log = log;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : values) {
    const double w = log ? std::log10(v) : v;
    lo = std::min(lo, w);
    hi = std::max(hi, w);
  }
  if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
    const double pad = log ? 0.5 : std::max(0.1 * std::abs(hi), 1.0);
    lo -= pad;
    hi += pad;
  } else {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  a.lo = lo;
  a.hi = hi;
  return a;
}

}  // namespace

std::string emit_plot(const std::vector<Series>& table, const PlotSpec& spec) {
  if (table.empty()) throw DomainError("cannot plot an empty table");
  std::vector<std::vector<std::pair<double, double>>> points;
  std::vector<double> xs, ys;
  for (const auto& s : table) {
    if (s.x.size() != s.y.size()) throw DomainError("series '" + s.name + "' has mismatched lengths");
    auto& pts = points.emplace_back();
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double x = s.x[i], y = s.y[i];
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if ((spec.log_x && x <= 0.0) || (spec.log_y && y <= 0.0)) continue;
      pts.emplace_back(x, y);
      xs.push_back(x);
      ys.push_back(y);
    }
  }
  if (xs.empty()) throw DomainError("cannot plot an empty table");

  const PlotAxis ax = fit_axis(xs, spec.log_x), ay = fit_axis(ys, spec.log_y);
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;

  std::ostringstream svg;
  svg << R"(<svg xmlns="http://www.w3.org/2000/svg" width=")" << kWidth << R"(" height=")" << kHeight
      << R"(" font-family="sans-serif" font-size="12">)" << '\n';
  svg << R"(<rect width="100%" height="100%" fill="white"/>)" << '\n';
  svg << R"(<text x=")" << kWidth / 2 << R"(" y="22" text-anchor="middle" font-size="15">)"
      << escape(spec.title) << "</text>\n";
  svg << R"(<rect x=")" << x0 << R"(" y=")" << y1 << R"(" width=")" << x1 - x0 << R"(" height=")"
      << y0 - y1 << R"(" fill="none" stroke="black"/>)" << '\n';

  for (double t : ax.ticks()) {
    const double px = ax.map(t, x0, x1);
    svg << R"(<line x1=")" << px << R"(" y1=")" << y0 << R"(" x2=")" << px << R"(" y2=")" << y0 + 5
        << R"(" stroke="black"/><text x=")" << px << R"(" y=")" << y0 + 18
        << R"(" text-anchor="middle">)" << num(t) << "</text>\n";
  }
  for (double t : ay.ticks()) {
    const double py = ay.map(t, y0, y1);
    svg << R"(<line x1=")" << x0 - 5 << R"(" y1=")" << py << R"(" x2=")" << x0 << R"(" y2=")" << py
        << R"(" stroke="black"/><text x=")" << x0 - 8 << R"(" y=")" << py + 4
        << R"(" text-anchor="end">)" << num(t) << "</text>\n";
  }
  svg << R"(<text x=")" << (x0 + x1) / 2 << R"(" y=")" << kHeight - 18 << R"(" text-anchor="middle">)"
      << escape(spec.x_label) << "</text>\n";
  svg << R"(<text x="18" y=")" << (y0 + y1) / 2 << R"(" text-anchor="middle" transform="rotate(-90 18 )"
      << (y0 + y1) / 2 << R"lit()">)lit" << escape(spec.y_label) << "</text>\n";

  for (std::size_t s = 0; s < table.size(); ++s) {
    const char* colour = kPalette[s % std::size(kPalette)];
    svg << R"(<polyline fill="none" stroke=")" << colour << R"(" stroke-width="1.5" points=")";
    for (const auto& [x, y] : points[s]) svg << format_double(ax.map(x, x0, x1)) << ',' << format_double(ay.map(y, y0, y1)) << ' ';
    svg << "\"/>\n";
    const double ly = y1 + 16 + 18 * static_cast<double>(s);
    svg << R"(<line x1=")" << x1 + 10 << R"(" y1=")" << ly << R"(" x2=")" << x1 + 30 << R"(" y2=")" << ly
        << R"(" stroke=")" << colour << R"(" stroke-width="2"/><text x=")" << x1 + 36 << R"(" y=")"
        << ly + 4 << "\">" << escape(table[s].name) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

double rate_axis_position(double rate) { return 40.0 + std::clamp(rate, 0.0, 1.0) * 640.0; }

std::string emit_rate_plot(double rho, const std::string& title) {
  if (!std::isfinite(rho)) throw DomainError("rate must be finite");
  const double axis_y = 110;
  std::ostringstream svg;
  svg << R"(<svg xmlns="http://www.w3.org/2000/svg" width="720" height="180" font-family="sans-serif" font-size="12">)"
      << '\n'
      << R"(<rect width="100%" height="100%" fill="white"/>)" << '\n'
      << R"(<text x="360" y="24" text-anchor="middle" font-size="15">)" << escape(title) << "</text>\n"
      << R"(<line x1=")" << rate_axis_position(0) << R"(" y1=")" << axis_y << R"(" x2=")"
      << rate_axis_position(1) << R"(" y2=")" << axis_y << R"(" stroke="black"/>)" << '\n';
  for (double end : {0.0, 1.0})
    svg << R"(<text x=")" << rate_axis_position(end) << R"(" y=")" << axis_y + 34
        << R"(" text-anchor="middle">)" << end << "</text>\n";
  for (const auto& r : kReferenceRates) {
    const double px = rate_axis_position(r.value);
    svg << R"(<line class="reference" data-rate=")" << format_double(r.value) << R"(" x1=")" << px
        << R"(" y1=")" << axis_y - 40 << R"(" x2=")" << px << R"(" y2=")" << axis_y + 8
        << R"(" stroke="#888" stroke-dasharray="4 3"/><text x=")" << px << R"(" y=")" << axis_y + 22
        << R"(" text-anchor="middle">)" << escape(r.label) << "</text>\n";
  }
  svg << R"(<circle id="fitted-rate" cx=")" << format_double(rate_axis_position(rho)) << R"(" cy=")"
      << axis_y << R"(" r="6" fill="#d62728"/><text x=")" << rate_axis_position(rho) << R"(" y=")"
      << axis_y - 46 << R"(" text-anchor="middle" fill="#d62728">fitted )" << num(rho) << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace mzk

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "tubemass/runner/report.hpp"

namespace tubemass::runner {

namespace {

constexpr double kWidth = 640.0, kHeight = 420.0;
constexpr double kLeft = 72.0, kRight = 24.0, kTop = 40.0, kBottom = 56.0;

struct Axis {
  bool log = false;
  double lo = 0.0, hi = 1.0;  // in transformed units

  double tr(double v) const { return log ? std::log10(v) : v; }
  double frac(double v) const { return (tr(v) - lo) / (hi - lo); }
};

Axis make_axis(std::vector<double> vals, bool log) {
  Axis a;
  a.log = log;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : vals) {
    if (!std::isfinite(v) || (log && v <= 0.0)) continue;
    lo = std::min(lo, a.tr(v));
    hi = std::max(hi, a.tr(v));
  }
  if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
  if (hi - lo < 1e-12) {
    const double pad = std::max(std::abs(lo) * 0.1, 0.5);
    lo -= pad;
    hi += pad;
  }
  const double pad = 0.05 * (hi - lo);
  a.lo = lo - pad;
  a.hi = hi + pad;
  return a;
}

// Tick positions in transformed units.
std::vector<double> ticks(const Axis& a) {
  std::vector<double> out;
  if (a.log) {
    for (double e = std::ceil(a.lo); e <= a.hi; e += 1.0) out.push_back(e);
    if (out.size() >= 2) return out;
  }
  const double span = a.hi - a.lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  for (double v = std::ceil(a.lo / step) * step; v <= a.hi + 1e-12 * span; v += step) out.push_back(v);
  return out;
}

std::string tick_label(const Axis& a, double t) {
  if (a.log && t == std::round(t)) return fmt::format("1e{}", static_cast<int>(t));
  const double v = a.log ? std::pow(10.0, t) : t;
  return fmt::format("{:.3g}", std::abs(v) < 1e-14 ? 0.0 : v);
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const Table& table, const PlotSpec& spec) {
  if (table.empty()) throw Error("cannot plot an empty table");
  const auto xs = table.column(spec.x);
  const auto ys = table.column(spec.y);
  std::vector<double> errs(xs.size(), 0.0);
  if (spec.err) {
    errs = table.column(*spec.err);
    for (double& e : errs) e *= spec.err_scale;
  }
  std::vector<double> refs;
  if (spec.reference) refs = table.column(*spec.reference);

  std::vector<double> yall;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    yall.push_back(ys[i] + errs[i]);
    yall.push_back(spec.logy ? std::max(ys[i] - errs[i], ys[i] * 0.5) : ys[i] - errs[i]);
  }
  yall.insert(yall.end(), refs.begin(), refs.end());
  const Axis ax = make_axis(xs, spec.logx), ay = make_axis(yall, spec.logy);
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + ax.frac(v) * pw; };
  auto py = [&](double v) { return kTop + (1.0 - ay.frac(v)) * ph; };
  auto ok = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!spec.logx || x > 0.0) && (!spec.logy || y > 0.0);
  };

  std::string s = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n",
      kWidth, kHeight);
  s += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", kWidth, kHeight);
  s += fmt::format("<text x=\"{:.2f}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n", kWidth / 2,
                   escape(spec.title));
  s += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" stroke=\"black\"/>\n",
                   kLeft, kTop, pw, ph);
  for (double t : ticks(ax)) {
    const double x = kLeft + (t - ax.lo) / (ax.hi - ax.lo) * pw;
    s += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"#ddd\"/>\n", x, kTop,
                     kTop + ph);
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", x, kTop + ph + 16,
                     tick_label(ax, t));
  }
  for (double t : ticks(ay)) {
    const double y = kTop + (1.0 - (t - ay.lo) / (ay.hi - ay.lo)) * ph;
    s += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"#ddd\"/>\n", kLeft, y,
                     kLeft + pw);
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{}</text>\n", kLeft - 6, y + 4,
                     tick_label(ay, t));
  }
  s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", kLeft + pw / 2,
                   kHeight - 16, escape(spec.x + (spec.logx ? " (log)" : "")));
  s += fmt::format(
      "<text x=\"16\" y=\"{0:.2f}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0:.2f})\">{1}</text>\n",
      kTop + ph / 2, escape(spec.y + (spec.logy ? " (log)" : "")));

  auto polyline = [&](const std::vector<double>& vals, const char* style) {
    std::string pts;
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (ok(xs[i], vals[i])) pts += fmt::format("{}{:.2f},{:.2f}", pts.empty() ? "" : " ", px(xs[i]), py(vals[i]));
    if (!pts.empty()) s += fmt::format("<polyline points=\"{}\" fill=\"none\" {}/>\n", pts, style);
  };
  if (!refs.empty()) polyline(refs, "stroke=\"#999\" stroke-dasharray=\"5,4\"");
  polyline(ys, "stroke=\"#1f4e9a\"");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!ok(xs[i], ys[i])) continue;
    if (errs[i] > 0.0) {
      const double lo = spec.logy ? std::max(ys[i] - errs[i], ys[i] * 1e-3) : ys[i] - errs[i];
      s += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"#1f4e9a\"/>\n",
                       px(xs[i]), py(ys[i] + errs[i]), py(lo));
    }
    s += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"#1f4e9a\"/>\n", px(xs[i]), py(ys[i]));
  }
  if (!spec.annotation.empty())
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", kLeft + 10, kTop + 18, escape(spec.annotation));
  s += "</svg>\n";
  return s;
}

void emit_plot(const Table& table, const PlotSpec& spec, const std::filesystem::path& path) {
  write_text(path, render_svg(table, spec));
}

}  // namespace tubemass::runner

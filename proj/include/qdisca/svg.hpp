// Self-contained SVG rendering for the report plots: sampled waveforms,
// bias overlays, dissymmetry histograms, and peak-vs-guess charts. Plots
// are pure functions of already-exported data files; nothing here re-runs a
// simulation.
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qdisca/io.hpp"

namespace qdisca {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

namespace detail {

inline const char* kSeriesColors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                      "#9467bd", "#ff7f0e", "#8c564b"};

struct Scale {
  double min = 0, max = 1, px0 = 0, px1 = 1;
  double operator()(double v) const {
    if (max == min) return (px0 + px1) / 2;
    return px0 + (v - min) / (max - min) * (px1 - px0);
  }
};

inline std::string svg_header(int w, int h, bool reproducible,
                              const std::string& generator) {
  std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  if (!reproducible) s += "<!-- " + generator + " -->\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
       std::to_string(w) + "\" height=\"" + std::to_string(h) +
       "\" viewBox=\"0 0 " + std::to_string(w) + " " + std::to_string(h) +
       "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return s;
}

inline void axis_ticks(std::string& out, const Scale& sx, const Scale& sy,
                       double y_base_px, double x_base_px,
                       const std::string& x_label,
                       const std::string& y_label) {
  out += "<g stroke=\"black\" stroke-width=\"1\">\n";
  out += "<line x1=\"" + fmt_sig(sx.px0) + "\" y1=\"" + fmt_sig(y_base_px) +
         "\" x2=\"" + fmt_sig(sx.px1) + "\" y2=\"" + fmt_sig(y_base_px) +
         "\"/>\n";
  out += "<line x1=\"" + fmt_sig(x_base_px) + "\" y1=\"" + fmt_sig(sy.px0) +
         "\" x2=\"" + fmt_sig(x_base_px) + "\" y2=\"" + fmt_sig(sy.px1) +
         "\"/>\n</g>\n";
  out += "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
  for (int i = 0; i <= 4; ++i) {
    double vx = sx.min + (sx.max - sx.min) * i / 4.0;
    double px = sx(vx);
    out += "<text x=\"" + fmt_sig(px) + "\" y=\"" + fmt_sig(y_base_px + 16) +
           "\" text-anchor=\"middle\">" + fmt_sig(vx) + "</text>\n";
    double vy = sy.min + (sy.max - sy.min) * i / 4.0;
    double py = sy(vy);
    out += "<text x=\"" + fmt_sig(x_base_px - 6) + "\" y=\"" +
           fmt_sig(py + 4) + "\" text-anchor=\"end\">" + fmt_sig(vy) +
           "</text>\n";
  }
  out += "<text x=\"" + fmt_sig((sx.px0 + sx.px1) / 2) + "\" y=\"" +
         fmt_sig(y_base_px + 34) + "\" text-anchor=\"middle\">" + x_label +
         "</text>\n";
  out += "<text x=\"14\" y=\"" + fmt_sig((sy.px0 + sy.px1) / 2) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
         fmt_sig((sy.px0 + sy.px1) / 2) + ")\">" + y_label + "</text>\n</g>\n";
}

}  // namespace detail

// Line plot of one or more (x, y) series; used for waveforms and bias
// overlays.
inline std::string plot_series_svg(const std::vector<PlotSeries>& series,
                                   const std::string& x_label,
                                   const std::string& y_label,
                                   bool reproducible = false,
                                   const std::string& generator = "qdisca plot") {
  if (series.empty()) throw IoError("plot: no series");
  const int W = 860, H = 420, ml = 70, mr = 20, mt = 24, mb = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series) {
    if (s.x.empty() || s.x.size() != s.y.size())
      throw IoError("plot: empty or mismatched series \"" + s.label + "\"");
    for (double v : s.x) { xmin = std::min(xmin, v); xmax = std::max(xmax, v); }
    for (double v : s.y) { ymin = std::min(ymin, v); ymax = std::max(ymax, v); }
  }
  if (ymin == ymax) { ymin -= 1; ymax += 1; }
  double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  detail::Scale sx{xmin, xmax, double(ml), double(W - mr)};
  detail::Scale sy{ymin, ymax, double(H - mb), double(mt)};

  std::string out = detail::svg_header(W, H, reproducible, generator);
  detail::axis_ticks(out, sx, sy, H - mb, ml, x_label, y_label);
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = detail::kSeriesColors[si % 6];
    out += "<polyline fill=\"none\" stroke=\"";
    out += color;
    out += "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      out += fmt_sig(sx(s.x[i]));
      out += ",";
      out += fmt_sig(sy(s.y[i]));
      out += " ";
    }
    out += "\"/>\n";
    out += "<text font-family=\"sans-serif\" font-size=\"12\" x=\"" +
           std::to_string(W - mr - 160) + "\" y=\"" +
           std::to_string(mt + 16 + 16 * static_cast<int>(si)) + "\" fill=\"";
    out += color;
    out += "\">" + s.label + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

// Histogram of scalar values (binned equally over their range).
inline std::string plot_histogram_svg(const std::vector<double>& values,
                                      int bins, const std::string& x_label,
                                      bool reproducible = false,
                                      const std::string& generator = "qdisca plot") {
  if (values.empty()) throw IoError("histogram: no values");
  if (bins < 1) bins = 10;
  double lo = *std::min_element(values.begin(), values.end());
  double hi = *std::max_element(values.begin(), values.end());
  if (lo == hi) hi = lo + 1.0;
  std::vector<int> count(bins, 0);
  for (double v : values) {
    int b = static_cast<int>((v - lo) / (hi - lo) * bins);
    b = std::clamp(b, 0, bins - 1);
    ++count[b];
  }
  int cmax = *std::max_element(count.begin(), count.end());

  const int W = 640, H = 400, ml = 60, mr = 20, mt = 24, mb = 50;
  detail::Scale sx{lo, hi, double(ml), double(W - mr)};
  detail::Scale sy{0.0, double(cmax), double(H - mb), double(mt)};
  std::string out = detail::svg_header(W, H, reproducible, generator);
  detail::axis_ticks(out, sx, sy, H - mb, ml, x_label, "count");
  double bw = (sx.px1 - sx.px0) / bins;
  for (int b = 0; b < bins; ++b) {
    double x = sx.px0 + b * bw;
    double y = sy(count[b]);
    out += "<rect x=\"" + fmt_sig(x + 1) + "\" y=\"" + fmt_sig(y) +
           "\" width=\"" + fmt_sig(bw - 2) + "\" height=\"" +
           fmt_sig(sy(0) - y) + "\" fill=\"#1f77b4\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

// Peak magnitude per key guess, highlighting the top-ranked guess.
inline std::string plot_peaks_svg(const DpaResult& res,
                                  bool reproducible = false,
                                  const std::string& generator = "qdisca plot") {
  if (res.ranking.empty()) throw IoError("peak plot: empty result");
  unsigned gmax = 0;
  double pmax = 0;
  for (const auto& e : res.ranking) {
    gmax = std::max(gmax, e.guess);
    if (e.peak) pmax = std::max(pmax, *e.peak);
  }
  if (pmax == 0) pmax = 1;
  const int W = 860, H = 400, ml = 70, mr = 20, mt = 24, mb = 50;
  detail::Scale sx{0.0, double(gmax), double(ml), double(W - mr)};
  detail::Scale sy{0.0, pmax, double(H - mb), double(mt)};
  std::string out = detail::svg_header(W, H, reproducible, generator);
  detail::axis_ticks(out, sx, sy, H - mb, ml, "key guess", "peak |T| [uA]");
  unsigned top = res.ranking.front().guess;
  for (const auto& e : res.ranking) {
    double p = e.peak ? *e.peak : 0.0;
    const char* color = e.guess == top ? "#d62728" : "#1f77b4";
    out += "<line x1=\"" + fmt_sig(sx(e.guess)) + "\" y1=\"" + fmt_sig(sy(0)) +
           "\" x2=\"" + fmt_sig(sx(e.guess)) + "\" y2=\"" + fmt_sig(sy(p)) +
           "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace qdisca

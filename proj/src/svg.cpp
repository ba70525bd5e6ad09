#include "flatlab/svg.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "flatlab/io.hpp"

namespace flatlab {

namespace {

constexpr double kW = 760, kH = 560, kML = 78, kMR = 24, kMT = 34, kMB = 56;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

struct Axis {
  double lo = 0.0, hi = 1.0;
  bool log = false;

  double map(double v, double screen_lo, double screen_hi) const {
    double t;
    if (log)
      t = (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo));
    else
      t = (v - lo) / (hi - lo);
    return screen_lo + t * (screen_hi - screen_lo);
  }
};

struct Plot {
  Axis x, y;
  std::ostringstream body;
  std::string title, xlabel, ylabel;

  double sx(double v) const { return x.map(v, kML, kW - kMR); }
  double sy(double v) const { return y.map(v, kH - kMB, kMT); }

  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                double width) {
    if (pts.empty()) return;
    body << "<path fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width
         << "\" d=\"";
    for (size_t i = 0; i < pts.size(); ++i)
      body << (i ? "L" : "M") << num(sx(pts[i].first)) << " " << num(sy(pts[i].second));
    body << "\"/>\n";
  }

  void segments(const std::vector<std::array<double, 4>>& segs, const std::string& color,
                double width) {
    if (segs.empty()) return;
    body << "<path fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width
         << "\" d=\"";
    for (const auto& s : segs)
      body << "M" << num(sx(s[0])) << " " << num(sy(s[1])) << "L" << num(sx(s[2])) << " "
           << num(sy(s[3]));
    body << "\"/>\n";
  }

  void marker(double px, double py, const std::string& color, double r) {
    body << "<circle cx=\"" << num(sx(px)) << "\" cy=\"" << num(sy(py)) << "\" r=\"" << r
         << "\" fill=\"" << color << "\"/>\n";
  }

  void ticks(std::ostringstream& out) const {
    auto tick_values = [](const Axis& a) {
      std::vector<double> t;
      if (a.log) {
        int d0 = static_cast<int>(std::ceil(std::log10(a.lo) - 1e-9));
        int d1 = static_cast<int>(std::floor(std::log10(a.hi) + 1e-9));
        for (int d = d0; d <= d1; ++d) t.push_back(std::pow(10.0, d));
      } else {
        double span = a.hi - a.lo;
        double step = std::pow(10.0, std::floor(std::log10(span / 4.0)));
        if (span / step > 8.0) step *= 2.0;
        double v = std::ceil(a.lo / step) * step;
        for (; v <= a.hi + 1e-12 * span; v += step) t.push_back(v);
      }
      return t;
    };
    for (double v : tick_values(x)) {
      double px = sx(v);
      out << "<line x1=\"" << num(px) << "\" y1=\"" << num(kH - kMB) << "\" x2=\"" << num(px)
          << "\" y2=\"" << num(kH - kMB + 5) << "\" stroke=\"#444\"/>\n";
      char lab[32];
      std::snprintf(lab, sizeof(lab), "%.3g", v);
      out << "<text x=\"" << num(px) << "\" y=\"" << num(kH - kMB + 18)
          << "\" font-size=\"11\" text-anchor=\"middle\">" << lab << "</text>\n";
    }
    for (double v : tick_values(y)) {
      double py = sy(v);
      out << "<line x1=\"" << num(kML - 5) << "\" y1=\"" << num(py) << "\" x2=\"" << num(kML)
          << "\" y2=\"" << num(py) << "\" stroke=\"#444\"/>\n";
      char lab[32];
      std::snprintf(lab, sizeof(lab), "%.3g", v);
      out << "<text x=\"" << num(kML - 8) << "\" y=\"" << num(py + 4)
          << "\" font-size=\"11\" text-anchor=\"end\">" << lab << "</text>\n";
    }
  }

  std::string render(bool with_timestamp) const {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
        << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n";
    if (with_timestamp) {
      auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
      out << "<!-- generated " << now << " -->\n";
    }
    out << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n";
    out << "<rect x=\"" << kML << "\" y=\"" << kMT << "\" width=\"" << (kW - kML - kMR)
        << "\" height=\"" << (kH - kMT - kMB) << "\" fill=\"none\" stroke=\"#444\"/>\n";
    ticks(out);
    out << "<text x=\"" << num(kW / 2) << "\" y=\"20\" font-size=\"14\" text-anchor=\"middle\">"
        << title << "</text>\n";
    out << "<text x=\"" << num(kW / 2) << "\" y=\"" << num(kH - 12)
        << "\" font-size=\"12\" text-anchor=\"middle\">" << xlabel << "</text>\n";
    out << "<text x=\"16\" y=\"" << num(kH / 2)
        << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << num(kH / 2)
        << ")\">" << ylabel << "</text>\n";
    out << body.str();
    out << "</svg>\n";
    return out.str();
  }
};

// marching squares over a sampled grid; returns segments in data coordinates
std::vector<std::array<double, 4>> contour_segments(const std::vector<Vec>& grid, double x0,
                                                    double x1, double y0, double y1, int n,
                                                    double level) {
  std::vector<std::array<double, 4>> segs;
  auto X = [&](int i) { return x0 + (x1 - x0) * i / (n - 1); };
  auto Y = [&](int j) { return y0 + (y1 - y0) * j / (n - 1); };
  auto lerp = [&](double a, double b, double fa, double fb) {
    double t = (level - fa) / (fb - fa);
    return a + t * (b - a);
  };
  for (int i = 0; i + 1 < n; ++i) {
    for (int j = 0; j + 1 < n; ++j) {
      double f00 = grid[i][j], f10 = grid[i + 1][j], f01 = grid[i][j + 1],
             f11 = grid[i + 1][j + 1];
      int mask = (f00 > level) | ((f10 > level) << 1) | ((f11 > level) << 2) |
                 ((f01 > level) << 3);
      if (mask == 0 || mask == 15) continue;
      // edge interpolation points (bottom, right, top, left)
      double bx = lerp(X(i), X(i + 1), f00, f10), by = Y(j);
      double rx = X(i + 1), ry = lerp(Y(j), Y(j + 1), f10, f11);
      double tx = lerp(X(i), X(i + 1), f01, f11), ty = Y(j + 1);
      double lx = X(i), ly = lerp(Y(j), Y(j + 1), f00, f01);
      auto seg = [&](double ax, double ay, double cx, double cy) {
        segs.push_back({ax, ay, cx, cy});
      };
      switch (mask) {
        case 1: case 14: seg(lx, ly, bx, by); break;
        case 2: case 13: seg(bx, by, rx, ry); break;
        case 3: case 12: seg(lx, ly, rx, ry); break;
        case 4: case 11: seg(rx, ry, tx, ty); break;
        case 5: seg(lx, ly, tx, ty); seg(bx, by, rx, ry); break;
        case 6: case 9: seg(bx, by, tx, ty); break;
        case 7: case 8: seg(lx, ly, tx, ty); break;
        case 10: seg(lx, ly, bx, by); seg(rx, ry, tx, ty); break;
      }
    }
  }
  return segs;
}

}  // namespace

void write_profile_svg(const std::string& path, const FlatnessProfile& p, bool timestamp) {
  Plot plot;
  double vmin = 1e300, vmax = 0.0;
  for (double v : p.values)
    if (v > 0.0) {
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
  bool logy = vmin < 1e300 && vmax > 0.0;
  plot.x = {p.radii.front(), p.radii.back(), true};
  if (logy)
    plot.y = {vmin * 0.8, vmax * 1.25, true};
  else
    plot.y = {0.0, 1.0, false};
  plot.title = "variation profile";
  plot.xlabel = "r (log)";
  plot.ylabel = "max |f - f(x)| over ball (log)";
  std::vector<std::pair<double, double>> pts;
  for (size_t i = 0; i < p.radii.size(); ++i)
    if (p.values[i] > 0.0) pts.push_back({p.radii[i], p.values[i]});
  plot.polyline(pts, "#1f77b4", 1.6);
  for (auto& pt : pts) plot.marker(pt.first, pt.second, "#1f77b4", 2.4);
  write_text_file(path, plot.render(timestamp));
}

void write_trajectory_svg(const std::string& path, const ObjectiveHandle& f,
                          const TrajectoryRecord& tr, bool timestamp) {
  Plot plot;
  if (f.dim == 2 && !tr.states.empty()) {
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (const Vec& s : tr.states) {
      x0 = std::min(x0, s[0]);
      x1 = std::max(x1, s[0]);
      y0 = std::min(y0, s[1]);
      y1 = std::max(y1, s[1]);
    }
    double padx = 0.15 * (x1 - x0 + 1e-3), pady = 0.15 * (y1 - y0 + 1e-3);
    x0 -= padx; x1 += padx; y0 -= pady; y1 += pady;
    plot.x = {x0, x1, false};
    plot.y = {y0, y1, false};
    plot.title = "trajectory over level curves";
    plot.xlabel = "x1";
    plot.ylabel = "x2";
    // level curves by marching squares on a 256x256 grid
    const int n = 256;
    std::vector<Vec> grid(n, Vec(n));
    double fmin = 1e300, fmax = -1e300;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double fx = f.eval({x0 + (x1 - x0) * i / (n - 1), y0 + (y1 - y0) * j / (n - 1)});
        grid[i][j] = fx;
        fmin = std::min(fmin, fx);
        fmax = std::max(fmax, fx);
      }
    int nlevels = 10;
    for (int l = 1; l <= nlevels; ++l) {
      double level;
      if (fmin > 0.0 && fmax / fmin > 50.0)
        level = fmin * std::pow(fmax / fmin, static_cast<double>(l) / (nlevels + 1));
      else
        level = fmin + (fmax - fmin) * l / (nlevels + 1);
      plot.segments(contour_segments(grid, x0, x1, y0, y1, n, level), "#bbbbbb", 0.7);
    }
    std::vector<std::pair<double, double>> pts;
    for (const Vec& s : tr.states) pts.push_back({s[0], s[1]});
    plot.polyline(pts, "#d62728", 1.4);
    plot.marker(pts.front().first, pts.front().second, "#2ca02c", 4.0);
    plot.marker(pts.back().first, pts.back().second, "#d62728", 4.0);
  } else {
    plot.title = "objective along trajectory";
    plot.xlabel = "t";
    plot.ylabel = "f";
    double fmax = 0.0, fmin = 1e300;
    for (double v : tr.f_values) {
      fmax = std::max(fmax, v);
      fmin = std::min(fmin, v);
    }
    plot.x = {tr.times.front(), std::max(tr.times.back(), tr.times.front() + 1e-9), false};
    plot.y = {fmin, fmax + 1e-12 + 0.05 * (fmax - fmin), false};
    std::vector<std::pair<double, double>> pts;
    for (size_t i = 0; i < tr.times.size(); ++i) pts.push_back({tr.times[i], tr.f_values[i]});
    plot.polyline(pts, "#1f77b4", 1.6);
  }
  write_text_file(path, plot.render(timestamp));
}

}  // namespace flatlab

/*
 * Copyright 2026 The effortsim Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "effortsim/figures.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "effortsim/errors.h"

namespace effortsim {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 190.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void header(std::ostringstream& out, const std::string& title) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(kWidth)
      << "\" height=\"" << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << ' '
      << num(kHeight) << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << escape(title) << "</text>\n";
}

struct Axis {
  double lo, hi;
  double map(double v, double a, double b) const {
    return hi > lo ? a + (v - lo) / (hi - lo) * (b - a) : (a + b) / 2;
  }
};

Axis padded(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
    return {lo - pad, hi + pad};
  }
  return {lo, hi};
}

void frame(std::ostringstream& out, const Axis& y, const std::string& y_label) {
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  out << "<g stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x1)
      << "\" y2=\"" << num(y0) << "\"/>\n"
      << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x0)
      << "\" y2=\"" << num(y1) << "\"/>\n</g>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = y.lo + (y.hi - y.lo) * t / 4.0;
    const double py = y.map(v, y0, y1);
    out << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(py + 4) << "\">" << tick(v)
        << "</text>\n";
  }
  out << "</g>\n";
  out << "<text x=\"16\" y=\"" << num((y0 + y1) / 2) << "\" font-family=\"sans-serif\" "
      << "font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << num((y0 + y1) / 2) << ")\">" << escape(y_label) << "</text>\n";
}

void legend(std::ostringstream& out, const std::vector<std::string>& labels) {
  const double x = kWidth - kRight + 14;
  out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double y = kTop + 10 + 16.0 * static_cast<double>(i);
    out << "<rect x=\"" << num(x) << "\" y=\"" << num(y - 8) << "\" width=\"10\" height=\"10\" "
        << "fill=\"" << kPalette[i % 10] << "\"/>\n"
        << "<text x=\"" << num(x + 14) << "\" y=\"" << num(y + 1) << "\">" << escape(labels[i])
        << "</text>\n";
  }
  out << "</g>\n";
}

}  // namespace

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<Series>& series) {
  double xlo = INFINITY, xhi = -INFINITY, ylo = INFINITY, yhi = -INFINITY;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) {
        throw DataError("chart point is not finite in series " + s.label);
      }
      xlo = std::min(xlo, x);
      xhi = std::max(xhi, x);
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
  }
  if (!std::isfinite(xlo)) throw DataError("line chart has no points: " + title);
  const Axis x = padded(xlo, xhi), y = padded(std::min(ylo, 0.0), yhi);
  std::ostringstream out;
  header(out, title);
  frame(out, y, y_label);
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  out << "<g font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = x.lo + (x.hi - x.lo) * t / 4.0;
    out << "<text x=\"" << num(x.map(v, x0, x1)) << "\" y=\"" << num(y0 + 16) << "\">"
        << tick(v) << "</text>\n";
  }
  out << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(y0 + 38) << "\" font-size=\"12\">"
      << escape(x_label) << "</text>\n</g>\n";
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < series.size(); ++i) {
    labels.push_back(series[i].label);
    out << "<polyline fill=\"none\" stroke=\"" << kPalette[i % 10]
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t p = 0; p < series[i].points.size(); ++p) {
      const auto& [px, py] = series[i].points[p];
      out << (p ? " " : "") << num(x.map(px, x0, x1)) << ',' << num(y.map(py, y0, y1));
    }
    out << "\"><title>" << escape(series[i].label) << "</title></polyline>\n";
  }
  legend(out, labels);
  out << "</svg>\n";
  return out.str();
}

std::string bar_chart_svg(const std::string& title, const std::string& y_label,
                          const std::vector<BarGroup>& groups) {
  std::vector<std::string> keys;
  std::map<std::string, std::size_t> key_index;
  double ylo = 0.0, yhi = -INFINITY;
  for (const auto& g : groups) {
    for (const auto& [k, v] : g.bars) {
      if (!std::isfinite(v)) throw DataError("bar value is not finite in group " + g.label);
      if (key_index.try_emplace(k, keys.size()).second) keys.push_back(k);
      ylo = std::min(ylo, v);
      yhi = std::max(yhi, v);
    }
  }
  if (keys.empty()) throw DataError("bar chart has no bars: " + title);
  const Axis y = padded(ylo, yhi);
  std::ostringstream out;
  header(out, title);
  frame(out, y, y_label);
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  const double slot = (x1 - x0) / static_cast<double>(groups.size());
  const double bar = slot * 0.8 / static_cast<double>(keys.size());
  const double base = y.map(0.0, y0, y1);
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const double left = x0 + slot * static_cast<double>(gi) + slot * 0.1;
    for (const auto& [k, v] : groups[gi].bars) {
      const auto ki = key_index.at(k);
      const double top = y.map(v, y0, y1);
      out << "<rect x=\"" << num(left + bar * static_cast<double>(ki)) << "\" y=\""
          << num(std::min(top, base)) << "\" width=\"" << num(bar) << "\" height=\""
          << num(std::abs(base - top)) << "\" fill=\"" << kPalette[ki % 10] << "\"><title>"
          << escape(groups[gi].label + " " + k) << "</title></rect>\n";
    }
    out << "<text x=\"" << num(left + slot * 0.4) << "\" y=\"" << num(y0 + 16)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
        << escape(groups[gi].label) << "</text>\n";
  }
  legend(out, keys);
  out << "</svg>\n";
  return out.str();
}

}  // namespace effortsim

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

#ifndef EFFORTSIM_FIGURES_H_
#define EFFORTSIM_FIGURES_H_

#include <string>
#include <utility>
#include <vector>

namespace effortsim {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;  // drawn in the given order
};

struct BarGroup {
  std::string label;
  std::vector<std::pair<std::string, double>> bars;
};

// Standalone SVG 1.1 documents. Coordinates are printed with two decimals
// so output bytes depend only on the inputs.
std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<Series>& series);
std::string bar_chart_svg(const std::string& title, const std::string& y_label,
                          const std::vector<BarGroup>& groups);

}  // namespace effortsim

#endif  // EFFORTSIM_FIGURES_H_

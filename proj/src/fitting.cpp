// Copyright 2026 The cgqemcmc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>

#include "cgqemcmc/spectral.hpp"

namespace cgq {

namespace {

struct MeanAndError {
  double mean = 0.0;
  double standard_error = 0.0;
};

MeanAndError mean_and_error(const std::vector<double>& values) {
  MeanAndError out;
  if (values.empty()) return out;
  out.mean = compensated_sum(values) / static_cast<double>(values.size());
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  const double count = static_cast<double>(values.size());
  out.standard_error = std::sqrt(ss / (count - 1.0) / count);
  return out;
}

}  // namespace

EnsembleStats ensemble_stats(std::span<const double> deltas) {
  EnsembleStats out;
  out.count = deltas.size();
  if (deltas.empty()) return out;
  const std::vector<double> values(deltas.begin(), deltas.end());
  const auto linear = mean_and_error(values);
  out.mean = linear.mean;
  out.standard_error = linear.standard_error;
  std::vector<double> logs;
  logs.reserve(values.size());
  for (double d : values) {
    if (!(d > 0.0)) {
      out.log_mean = -std::numeric_limits<double>::infinity();
      out.log_standard_error = std::numeric_limits<double>::quiet_NaN();
      return out;
    }
    logs.push_back(std::log(d));
  }
  const auto logarithmic = mean_and_error(logs);
  out.log_mean = logarithmic.mean;
  out.log_standard_error = logarithmic.standard_error;
  return out;
}

GapEstimate interpolate_sqrt_n_gap(const std::map<std::size_t, GapEstimate>& gaps,
                                   std::size_t n) {
  const double root = std::sqrt(static_cast<double>(n));
  const auto lo = static_cast<std::size_t>(std::floor(root));
  const auto hi = static_cast<std::size_t>(std::ceil(root));
  const auto lookup = [&](std::size_t q) {
    const auto it = gaps.find(q);
    if (it == gaps.end()) {
      throw std::invalid_argument("sqrt(n) interpolation at n=" + std::to_string(n) +
                                  " needs a gap for q=" + std::to_string(q));
    }
    return it->second;
  };
  const GapEstimate below = lookup(lo);
  if (lo == hi) return below;
  const GapEstimate above = lookup(hi);
  const double w = root - static_cast<double>(lo);
  GapEstimate out;
  out.mean = (1.0 - w) * below.mean + w * above.mean;
  out.error = std::hypot((1.0 - w) * below.error, w * above.error);
  return out;
}

ScalingFit fit_scaling(std::span<const ScalingPoint> points) {
  std::set<double> sizes;
  for (const auto& p : points) sizes.insert(p.n);
  if (sizes.size() < 3) throw std::invalid_argument("a scaling fit needs at least three distinct sizes");
  bool weighted = true;
  for (const auto& p : points) {
    if (!(p.delta > 0.0) || !std::isfinite(p.delta)) {
      throw std::invalid_argument("scaling fit needs positive, finite gaps");
    }
    if (!(p.delta_err > 0.0)) weighted = false;
  }
  double s = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::vector<double> w(points.size()), y(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    y[i] = std::log2(p.delta);
    const double sigma = weighted ? p.delta_err / (p.delta * std::numbers::ln2) : 1.0;
    w[i] = 1.0 / (sigma * sigma);
    s += w[i];
    sx += w[i] * p.n;
    sy += w[i] * y[i];
    sxx += w[i] * p.n * p.n;
    sxy += w[i] * p.n * y[i];
  }
  const double det = s * sxx - sx * sx;
  const double slope = (s * sxy - sx * sy) / det;
  const double intercept = (sxx * sy - sx * sxy) / det;

  ScalingFit out;
  out.points = points.size();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double r = y[i] - intercept - slope * points[i].n;
    out.chi2 += w[i] * r * r;
  }
  double var_slope = s / det;
  double var_intercept = sxx / det;
  if (!weighted) {
    const double dof = static_cast<double>(points.size()) - 2.0;
    const double scale = dof > 0.0 ? out.chi2 / dof : 0.0;
    var_slope *= scale;
    var_intercept *= scale;
  }
  out.k = -slope;
  out.a = std::exp2(intercept);
  out.k_err = std::sqrt(var_slope);
  out.log2_a_err = std::sqrt(var_intercept);
  return out;
}

double quantum_enhancement_factor(double k_quantum, double k_classical_best) {
  if (!(k_quantum > 0.0)) throw std::invalid_argument("k of the quantum strategy must be positive");
  return k_classical_best / k_quantum;
}

}  // namespace cgq

#pragma once

#include <random>
#include <string>
#include <vector>

#include "cgeo/filtration.hpp"
#include "cgeo/metric_space.hpp"

namespace testutil {

/// Random integer metric on n points: random complete-graph weights run
/// through a shortest-path closure.
inline cgeo::FiniteMetricSpace random_metric(std::mt19937& rng, std::size_t n,
                                             int max_d = 20) {
  std::uniform_int_distribution<int> weight(1, max_d);
  std::vector<double> t(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      t[i * n + j] = t[j * n + i] = weight(rng);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (t[i * n + k] + t[k * n + j] < t[i * n + j])
          t[i * n + j] = t[i * n + k] + t[k * n + j];
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = "p" + std::to_string(i);
  return cgeo::FiniteMetricSpace(std::move(labels), std::move(t), 0, true);
}

/// Two rays {(n,0)} and {(n,1)}, n >= 0, with the l1 metric of Z^2; the rays
/// stay at distance 1 but only meet bounded sets near the origin.
inline cgeo::FiltrationSpace parallel_rays(int max_level) {
  std::vector<std::string> labels;
  std::vector<std::pair<int, int>> pts;
  for (int n = 0; n <= max_level; ++n)
    for (int y : {0, 1}) {
      pts.emplace_back(n, y);
      labels.push_back("(" + std::to_string(n) + "," + std::to_string(y) + ")");
    }
  auto coords = std::make_shared<std::vector<std::pair<int, int>>>(std::move(pts));
  cgeo::FiltrationSpace::Metric m = [coords](std::size_t i, std::size_t j) {
    auto [xa, ya] = (*coords)[i];
    auto [xb, yb] = (*coords)[j];
    return static_cast<double>(std::abs(xa - xb) + std::abs(ya - yb));
  };
  return cgeo::FiltrationSpace("parallel-rays", std::move(labels), std::move(m),
                               max_level, true);
}

}  // namespace testutil

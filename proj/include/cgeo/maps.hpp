#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cgeo/filtration.hpp"

namespace cgeo {

/// Tabulated monotone control bound: rho(R_k) bounds the image distance of
/// any pair at source distance <= R_k.
struct ControlFunction {
  std::vector<double> radii;   // increasing
  std::vector<double> bounds;  // monotone non-decreasing

  double at(double R) const {
    // value at the largest tabulated radius <= R; conservative lookup
    auto it = std::upper_bound(radii.begin(), radii.end(), R);
    if (it == radii.begin())
      throw std::out_of_range("control function not tabulated below requested radius");
    return bounds[static_cast<std::size_t>(it - radii.begin()) - 1];
  }
};

/// A total map between two truncations, stored as a value table of target
/// indices per source point.
struct PointMap {
  Truncation src;
  Truncation tgt;
  std::vector<std::size_t> values;  // values[i] = target index of source point i

  void validate() const {
    if (values.size() != src.size())
      throw std::invalid_argument("point map is not total on its source truncation");
    for (std::size_t v : values)
      if (v >= tgt.size())
        throw std::invalid_argument("point map value lies outside the target truncation");
  }

  std::size_t operator()(std::size_t i) const { return values[i]; }
};

inline PointMap identity_map(const Truncation& t) {
  PointMap m{t, t, {}};
  m.values.resize(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) m.values[i] = i;
  return m;
}

inline PointMap constant_map(const Truncation& src, const Truncation& tgt,
                             std::size_t target_index) {
  PointMap m{src, tgt, std::vector<std::size_t>(src.size(), target_index)};
  return m;
}

inline PointMap compose(const PointMap& g, const PointMap& f) {
  if (!f.tgt.same_space(g.src) || f.tgt.size() > g.src.size())
    throw std::invalid_argument("maps are not composable");
  PointMap h{f.src, g.tgt, {}};
  h.values.reserve(f.values.size());
  for (std::size_t v : f.values) h.values.push_back(g.values[v]);
  return h;
}

/// rho_hat(R) = max over source pairs at distance <= R of the image
/// distance. One O(n^2) pass over the source; monotone by construction.
inline ControlFunction estimate_control(const PointMap& f,
                                        std::vector<double> radii) {
  if (radii.empty()) throw std::invalid_argument("empty radii list");
  std::sort(radii.begin(), radii.end());
  const std::size_t n = f.src.size();
  const double max_r = radii.back();
  std::vector<double> best(radii.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double ds = f.src.dist(i, j);
      if (ds > max_r) continue;
      double dt = f.tgt.dist(f.values[i], f.values[j]);
      auto it = std::lower_bound(radii.begin(), radii.end(), ds);
      std::size_t k = static_cast<std::size_t>(it - radii.begin());
      if (dt > best[k]) best[k] = dt;
    }
  for (std::size_t k = 1; k < best.size(); ++k)
    best[k] = std::max(best[k], best[k - 1]);
  return ControlFunction{std::move(radii), std::move(best)};
}

/// Control estimate at a single radius.
inline double control_at(const PointMap& f, double R) {
  return estimate_control(f, {R}).bounds[0];
}

struct PropernessReport {
  double ball_radius = 0;          // target ball probed (around target basepoint)
  std::size_t preimage_size = 0;
  double preimage_diameter = 0;
  double containment_radius = 0;   // max base distance over the preimage
  // preimage reaches within `margin` of the truncation depth: the finite
  // signal that the map fails to be proper
  bool properness_failure = false;
};

struct ProperCloseReport {
  PropernessReport properness;
  std::optional<double> closeness;  // sup_x d(f(x), g(x)) when g supplied
};

/// Probes properness of f on the truncation (preimage of the strict ball
/// B(tgt basepoint, radius)) and, when g is supplied, the closeness constant
/// sup d(f, g).
inline ProperCloseReport check_proper_close(const PointMap& f,
                                            const PointMap* g, double radius,
                                            double margin = 1.0) {
  f.validate();
  if (g) {
    g->validate();
    if (!f.src.same_space(g->src) || f.src.size() != g->src.size() ||
        !f.tgt.same_space(g->tgt))
      throw std::invalid_argument("mismatched truncations for closeness check");
  }
  ProperCloseReport rep;
  rep.properness.ball_radius = radius;
  std::vector<std::size_t> pre;
  for (std::size_t i = 0; i < f.src.size(); ++i)
    if (f.tgt.base_dist(f.values[i]) < radius) pre.push_back(i);
  rep.properness.preimage_size = pre.size();
  double diam = 0, maxbd = 0;
  for (std::size_t a = 0; a < pre.size(); ++a) {
    maxbd = std::max(maxbd, f.src.base_dist(pre[a]));
    for (std::size_t b = a + 1; b < pre.size(); ++b)
      diam = std::max(diam, f.src.dist(pre[a], pre[b]));
  }
  rep.properness.preimage_diameter = diam;
  rep.properness.containment_radius = maxbd;
  rep.properness.properness_failure = maxbd >= f.src.level() - margin;
  if (g) {
    double c = 0;
    for (std::size_t i = 0; i < f.src.size(); ++i)
      c = std::max(c, f.tgt.dist(f.values[i], g->values[i]));
    rep.closeness = c;
  }
  return rep;
}

}  // namespace cgeo

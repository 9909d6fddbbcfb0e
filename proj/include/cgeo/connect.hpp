#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cgeo/maps.hpp"
#include "cgeo/rips.hpp"

namespace cgeo {

/// A partition X = A u B of the depth-level truncation plus, per tested
/// scale R, a ball radius r(R) such that points of A and B outside
/// B(x0, r(R)) are at distance >= R. Both sides contain a point within
/// `margin` of the truncation depth (the finite proxy for unboundedness).
struct DecompositionWitness {
  std::vector<char> in_A;  // indexed by truncation point
  std::vector<std::pair<double, double>> radii;  // (R, r(R)), R ascending
  int depth = 0;
  double margin = 1.0;

  std::size_t side_size(bool a_side) const {
    std::size_t c = 0;
    for (char f : in_A)
      if (static_cast<bool>(f) == a_side) ++c;
    return c;
  }
};

enum class SeparationOutcome { witness_found, no_witness };

struct SeparationVerdict {
  SeparationOutcome outcome = SeparationOutcome::no_witness;
  std::optional<DecompositionWitness> witness;
  std::vector<double> scales;
  int depth = 0;
};

/// Brute-force re-check of the witness invariant on the truncation.
/// Returns a diagnostic, or nullopt if the witness is sound.
inline std::optional<std::string> witness_violation(const Truncation& t,
                                                    const DecompositionWitness& w) {
  const std::size_t n = t.size();
  if (w.in_A.size() != n) return "witness partition does not cover the truncation";
  double deep = w.depth - w.margin;
  bool deep_a = false, deep_b = false;
  for (std::size_t i = 0; i < n; ++i)
    if (t.base_dist(i) >= deep) (w.in_A[i] ? deep_a : deep_b) = true;
  if (!deep_a) return "A has no point within margin of the truncation depth";
  if (!deep_b) return "B has no point within margin of the truncation depth";
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!w.in_A[i] || w.in_A[j]) continue;  // want i in A, j in B
      double mbd = std::min(t.base_dist(i), t.base_dist(j));
      double d = t.dist(i, j);
      for (auto [R, r] : w.radii)
        if (mbd >= r && d < R)
          return "separation fails at scale " + std::to_string(R) + " for (" +
                 t.label(i) + "," + t.label(j) + ")";
    }
  return std::nullopt;
}

namespace detail {

// smallest admissible ball radius strictly above the worst violating pair
inline double next_radius(double max_violating_bd, bool integer_metric) {
  if (max_violating_bd < 0) return 0.0;  // no violations
  if (integer_metric) return std::floor(max_violating_bd) + 1.0;
  return std::nextafter(max_violating_bd,
                        std::numeric_limits<double>::infinity());
}

struct DeepComponentSweep {
  // per candidate radius r (descending activation sweep), the number of
  // connected components of {bd >= r} that contain a deep point
  std::vector<double> candidate_r;
  std::vector<std::size_t> deep_components;
};

// Activates points in order of decreasing base distance and counts
// components containing a deep point; records one row per distinct radius.
inline DeepComponentSweep deep_component_sweep(const Truncation& t,
                                               const Graph& g, double deep) {
  const std::size_t n = t.size();
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (auto [a, b] : g.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  UnionFind uf(n);
  std::vector<char> active(n, 0), root_deep(n, 0);
  std::size_t deep_comps = 0;
  DeepComponentSweep out;
  for (std::size_t ii = n; ii-- > 0;) {
    std::uint32_t i = static_cast<std::uint32_t>(ii);
    active[i] = 1;
    if (t.base_dist(i) >= deep) root_deep[i] = 1, ++deep_comps;
    for (std::uint32_t j : adj[i]) {
      if (!active[j]) continue;
      std::uint32_t ri = uf.find(i), rj = uf.find(j);
      if (ri == rj) continue;
      bool merged_deep = root_deep[ri] || root_deep[rj];
      if (root_deep[ri] && root_deep[rj]) --deep_comps;
      uf.unite(ri, rj);
      root_deep[uf.find(ri)] = merged_deep ? 1 : 0;
    }
    if (ii == 0 || t.base_dist(ii - 1) < t.base_dist(i)) {
      out.candidate_r.push_back(ii == 0 ? 0.0 : t.base_dist(i));
      out.deep_components.push_back(deep_comps);
    }
  }
  return out;
}

}  // namespace detail

/// Searches for a separated decomposition of the depth-level truncation.
///
/// At the largest tested scale R, points of the strict ball B(x0, r) are
/// deleted for growing r until the remainder splits into >= 2 components
/// each holding a deep point. The partition found there is then validated
/// at every smaller scale by computing the minimal admissible r(R).
inline SeparationVerdict detect_decomposition(const FiltrationSpace& X,
                                              std::vector<double> scales,
                                              int depth, double margin = 1.0) {
  if (scales.empty()) throw std::invalid_argument("empty scale list");
  std::sort(scales.begin(), scales.end());
  Truncation t = X.truncation(depth);
  const std::size_t n = t.size();
  SeparationVerdict verdict;
  verdict.scales = scales;
  verdict.depth = depth;
  if (n == 0) return verdict;
  const double deep = depth - margin;
  const double r_max = scales.back();

  Graph g = rips_graph(t, r_max, /*strict=*/true);
  auto sweep = detail::deep_component_sweep(t, g, deep);

  // minimal r with >= 2 deep components (rows were recorded with r
  // descending; scan from the back)
  std::optional<double> split_r;
  for (std::size_t k = sweep.candidate_r.size(); k-- > 0;)
    if (sweep.deep_components[k] >= 2) {
      split_r = sweep.candidate_r[k];  // rows are stored with r descending,
      break;                           // so the first hit from the back wins
    }
  if (!split_r) return verdict;

  // rebuild components of {bd >= split_r}
  UnionFind uf(n);
  std::vector<char> alive(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    if (t.base_dist(i) >= *split_r) alive[i] = 1;
  for (auto [a, b] : g.edges)
    if (alive[a] && alive[b]) uf.unite(a, b);

  // B := component of the deepest point (smallest index on ties); A := rest
  std::size_t deepest = n - 1;
  double maxbd = t.base_dist(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    if (t.base_dist(i) == maxbd) { deepest = i; break; }
  std::uint32_t broot = uf.find(static_cast<std::uint32_t>(deepest));
  DecompositionWitness w;
  w.depth = depth;
  w.margin = margin;
  w.in_A.assign(n, 1);
  for (std::size_t i = 0; i < n; ++i)
    if (alive[i] && uf.find(static_cast<std::uint32_t>(i)) == broot)
      w.in_A[i] = 0;

  // minimal r(R) per scale from the cross edges (every pair violating some
  // tested scale is an edge of the largest-scale graph)
  std::vector<double> worst(scales.size(),
                            -std::numeric_limits<double>::infinity());
  for (auto [a, b] : g.edges) {
    if (w.in_A[a] == w.in_A[b]) continue;
    double d = t.dist(a, b);
    double mbd = std::min(t.base_dist(a), t.base_dist(b));
    auto it = std::upper_bound(scales.begin(), scales.end(), d);  // scales R > d
    std::size_t k = static_cast<std::size_t>(it - scales.begin());
    if (k < scales.size()) worst[k] = std::max(worst[k], mbd);
  }
  for (std::size_t k = 1; k < scales.size(); ++k)
    worst[k] = std::max(worst[k], worst[k - 1]);
  for (std::size_t k = 0; k < scales.size(); ++k) {
    double r = detail::next_radius(worst[k], t.integer_valued());
    if (r > deep) return verdict;  // partition not separated at this scale
    w.radii.emplace_back(scales[k], r);
  }
  verdict.outcome = SeparationOutcome::witness_found;
  verdict.witness = std::move(w);
  return verdict;
}

/// The coarse map to Z extracted from a witness: f(a) = floor(d(a, a0)) on
/// A and f(b) = -floor(d(b, b0)) on B, with a0/b0 the sides' points nearest
/// the basepoint. `integers` must be the builtin integers space at a level
/// covering the truncation depth.
inline PointMap map_to_integers(const Truncation& t,
                                const DecompositionWitness& w,
                                const FiltrationSpace& integers) {
  const std::size_t n = t.size();
  if (w.in_A.size() != n)
    throw std::invalid_argument("witness does not match the truncation");
  std::optional<std::size_t> a0, b0;
  for (std::size_t i = 0; i < n; ++i) {
    auto& anchor = w.in_A[i] ? a0 : b0;
    if (!anchor || t.base_dist(i) < t.base_dist(*anchor)) anchor = i;
  }
  if (!a0 || !b0)
    throw std::invalid_argument("degenerate witness: one side is empty");
  PointMap f;
  f.src = t;
  f.tgt = integers.truncation(integers.max_level());
  f.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    long long v = w.in_A[i]
                      ? static_cast<long long>(std::floor(t.dist(i, *a0)))
                      : -static_cast<long long>(std::floor(t.dist(i, *b0)));
    auto idx = integers.index_of(std::to_string(v));
    if (!idx)
      throw std::invalid_argument("integers target too shallow for witness image");
    f.values[i] = *idx;
  }
  return f;
}

struct OscillationEntry {
  double scale = 0;
  double epsilon = 0;
  double r = 0;          // least admissible ball radius
  bool unbounded = false;  // no r below the persistence depth works
};

/// Slow-oscillation profile of a bounded complex-valued function on the
/// depth truncation: entry (R, eps) is the least r such that pairs outside
/// B(x0, r) at distance <= R have image distance <= eps.
inline std::vector<OscillationEntry> slow_oscillation_profile(
    const FiltrationSpace& X, const std::vector<std::complex<double>>& f,
    std::vector<double> scales, std::vector<double> epsilons, int depth,
    double margin = 1.0) {
  if (scales.empty() || epsilons.empty())
    throw std::invalid_argument("empty scales or epsilons");
  std::sort(scales.begin(), scales.end());
  std::sort(epsilons.begin(), epsilons.end());
  Truncation t = X.truncation(depth);
  const std::size_t n = t.size();
  if (f.size() < n)
    throw std::invalid_argument("function not total on the truncation");
  const double max_r = scales.back();
  const double neg = -std::numeric_limits<double>::infinity();
  // worst[k][e]: largest min-base-distance of a pair violating exactly at
  // scale slot k (smallest scale >= d) and epsilon slot e (largest eps < diff)
  std::vector<std::vector<double>> worst(
      scales.size(), std::vector<double>(epsilons.size(), neg));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = t.dist(i, j);
      if (d > max_r) continue;
      double diff = std::abs(f[i] - f[j]);
      if (diff <= epsilons.front()) continue;
      auto si = std::lower_bound(scales.begin(), scales.end(), d);
      std::size_t k = static_cast<std::size_t>(si - scales.begin());
      auto ei = std::lower_bound(epsilons.begin(), epsilons.end(), diff);
      std::size_t e = static_cast<std::size_t>(ei - epsilons.begin());
      // violates epsilons strictly below diff: slots < e
      if (e == 0) continue;
      double mbd = std::min(t.base_dist(i), t.base_dist(j));
      if (mbd > worst[k][e - 1]) worst[k][e - 1] = mbd;
    }
  // a violation at (k, e) also applies to all larger scales and smaller eps
  for (std::size_t k = 0; k < scales.size(); ++k)
    for (std::size_t e = epsilons.size() - 1; e-- > 0;)
      worst[k][e] = std::max(worst[k][e], worst[k][e + 1]);
  for (std::size_t k = 1; k < scales.size(); ++k)
    for (std::size_t e = 0; e < epsilons.size(); ++e)
      worst[k][e] = std::max(worst[k][e], worst[k - 1][e]);
  std::vector<OscillationEntry> out;
  for (std::size_t k = 0; k < scales.size(); ++k)
    for (std::size_t e = 0; e < epsilons.size(); ++e) {
      OscillationEntry row;
      row.scale = scales[k];
      row.epsilon = epsilons[e];
      row.r = detail::next_radius(worst[k][e], t.integer_valued());
      row.unbounded = worst[k][e] >= depth - margin;
      out.push_back(row);
    }
  return out;
}

/// Extracts a separated decomposition from an approximate idempotent: a
/// function whose values, outside some ball, all lie within 1/4 of 0 or of
/// 1. A is the quarter-disk-at-0 preimage outside that ball.
inline SeparationVerdict decomposition_from_idempotent(
    const FiltrationSpace& X, const std::vector<std::complex<double>>& f,
    std::vector<double> scales, int depth, double margin = 1.0) {
  if (scales.empty()) throw std::invalid_argument("empty scale list");
  std::sort(scales.begin(), scales.end());
  Truncation t = X.truncation(depth);
  const std::size_t n = t.size();
  if (f.size() < n)
    throw std::invalid_argument("function not total on the truncation");
  const double deep = depth - margin;
  double worst_bad = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    bool near0 = std::abs(f[i]) < 0.25;
    bool near1 = std::abs(f[i] - 1.0) < 0.25;
    if (!near0 && !near1) worst_bad = std::max(worst_bad, t.base_dist(i));
  }
  if (worst_bad >= deep)
    throw std::invalid_argument(
        "not an approximate idempotent: values outside both quarter-disks "
        "beyond every tested ball");
  double r0 = detail::next_radius(worst_bad, t.integer_valued());

  DecompositionWitness w;
  w.depth = depth;
  w.margin = margin;
  w.in_A.assign(n, 0);
  bool deep_a = false, deep_b = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (t.base_dist(i) >= r0 && std::abs(f[i]) < 0.25) w.in_A[i] = 1;
    if (t.base_dist(i) >= deep) (w.in_A[i] ? deep_a : deep_b) = true;
  }
  if (!deep_a || !deep_b)
    throw std::invalid_argument(
        "trivial idempotent: one side of the induced partition is bounded");

  // the slow-oscillation profile at epsilon = 1/4 bounds the exceptional
  // ball per scale; outside it, pairs within R keep |f difference| <= 1/4,
  // so no cross pair survives
  auto profile = slow_oscillation_profile(X, f, scales, {0.25}, depth, margin);
  for (const auto& row : profile) {
    if (row.unbounded)
      throw std::invalid_argument(
          "function is not slowly oscillating at scale " +
          std::to_string(row.scale));
    w.radii.emplace_back(row.scale, std::max(row.r, r0));
  }
  if (auto v = witness_violation(t, w))
    throw std::logic_error("idempotent witness failed re-verification: " + *v);
  SeparationVerdict verdict;
  verdict.outcome = SeparationOutcome::witness_found;
  verdict.witness = std::move(w);
  verdict.scales = std::move(scales);
  verdict.depth = depth;
  return verdict;
}

}  // namespace cgeo

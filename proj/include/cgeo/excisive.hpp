#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgeo/maps.hpp"

namespace cgeo {

/// A two-set cover X = A u B of a filtration's points, A n B non-empty.
/// Membership flags are indexed by the filtration's (global) point order.
struct CoverDecomposition {
  std::vector<char> in_A;
  std::vector<char> in_B;

  void validate(const Truncation& t) const {
    if (in_A.size() < t.size() || in_B.size() < t.size())
      throw std::invalid_argument("cover does not reach the requested depth");
    bool has_int = false;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (!in_A[i] && !in_B[i])
        throw std::invalid_argument("cover misses point " + t.label(i));
      if (in_A[i] && in_B[i]) has_int = true;
    }
    if (!has_int)
      throw std::invalid_argument("cover intersection A n B is empty");
  }
};

/// Per-depth table S(R) = max over x in B(A,R) n B(B,R) of d(x, A n B).
/// A radius is divergence-flagged when S(R) keeps changing over the top
/// half of the tested depths (exact comparison; the corpus profiles are
/// either eventually constant or linearly divergent).
struct ExcisiveProfile {
  std::vector<double> radii;    // ascending
  std::vector<int> depths;      // ascending
  std::vector<std::vector<double>> S;  // S[depth_index][radius_index]
  std::vector<char> divergent;  // per radius

  bool any_divergent() const {
    for (char d : divergent)
      if (d) return true;
    return false;
  }

  double s_at(int depth, double R) const {
    for (std::size_t di = 0; di < depths.size(); ++di)
      if (depths[di] == depth)
        for (std::size_t ri = 0; ri < radii.size(); ++ri)
          if (radii[ri] == R) return S[di][ri];
    throw std::out_of_range("profile has no entry for the requested (R, depth)");
  }
};

inline ExcisiveProfile excisive_profile(const FiltrationSpace& X,
                                        const CoverDecomposition& D,
                                        std::vector<double> radii,
                                        std::vector<int> depths) {
  if (radii.empty() || depths.empty())
    throw std::invalid_argument("empty radii or depth list");
  std::sort(radii.begin(), radii.end());
  std::sort(depths.begin(), depths.end());
  ExcisiveProfile prof;
  prof.radii = radii;
  prof.depths = depths;
  for (int depth : depths) {
    Truncation t = X.truncation(depth);
    D.validate(t);
    const std::size_t n = t.size();
    std::vector<double> dA(n, std::numeric_limits<double>::infinity()), dB = dA,
                        dI = dA;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double d = t.dist(i, j);
        if (D.in_A[j]) dA[i] = std::min(dA[i], d);
        if (D.in_B[j]) dB[i] = std::min(dB[i], d);
        if (D.in_A[j] && D.in_B[j]) dI[i] = std::min(dI[i], d);
      }
    std::vector<double> row;
    for (double R : radii) {
      double s = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (dA[i] < R && dB[i] < R) s = std::max(s, dI[i]);
      row.push_back(s);
    }
    prof.S.push_back(std::move(row));
  }
  prof.divergent.assign(radii.size(), 0);
  std::size_t half = depths.size() / 2;
  for (std::size_t ri = 0; ri < radii.size(); ++ri)
    for (std::size_t di = half; di + 1 < depths.size(); ++di)
      if (prof.S[di][ri] != prof.S[di + 1][ri]) prof.divergent[ri] = 1;
  return prof;
}

struct GlueBoundRow {
  double R = 0;
  double S = 0;
  double rho_h = 0;
  double bound = 0;  // rho_f(S+1) + rho_f(2S+2+R) + c + rho_g(S+1)
  bool holds = false;
};

struct GlueResult {
  PointMap h;
  double closeness = 0;  // c = max over A n B of d(f, g)
  std::vector<GlueBoundRow> rows;
};

namespace detail {

// control estimate over the pairs of one cover side
inline double side_control(const Truncation& t, const Truncation& tgt,
                           const std::vector<std::size_t>& side,
                           const std::vector<std::size_t>& vals, double R) {
  double best = 0;
  for (std::size_t a = 0; a < side.size(); ++a)
    for (std::size_t b = a + 1; b < side.size(); ++b) {
      std::size_t i = side[a], j = side[b];
      if (t.dist(i, j) > R) continue;
      best = std::max(best, tgt.dist(vals[i], vals[j]));
    }
  return best;
}

}  // namespace detail

/// Glues coarse maps f (on A) and g (on B) along a non-divergent cover:
/// h = f on A, g on X \ A. The reported bound per scale R is the four-term
/// estimate rho_f(S+1) + rho_f(2S+2+R) + c + rho_g(S+1) with S = S(R).
///
/// f_vals / g_vals are target indices per truncation point, consulted only
/// on A resp. B.
inline GlueResult pushout_glue(const FiltrationSpace& X,
                               const CoverDecomposition& D, int depth,
                               const std::vector<std::size_t>& f_vals,
                               const std::vector<std::size_t>& g_vals,
                               const Truncation& target,
                               const ExcisiveProfile& profile,
                               double closeness_threshold =
                                   std::numeric_limits<double>::infinity()) {
  Truncation t = X.truncation(depth);
  D.validate(t);
  const std::size_t n = t.size();
  if (f_vals.size() < n || g_vals.size() < n)
    throw std::invalid_argument("glue maps are not total on the truncation");
  if (profile.any_divergent())
    throw std::invalid_argument(
        "cover is divergence-flagged: not omega-excisive at the tested scales");
  GlueResult out;
  std::vector<std::size_t> sideA, sideB;
  for (std::size_t i = 0; i < n; ++i) {
    if (D.in_A[i]) sideA.push_back(i);
    if (D.in_B[i]) sideB.push_back(i);
    if (D.in_A[i] && D.in_B[i])
      out.closeness =
          std::max(out.closeness, target.dist(f_vals[i], g_vals[i]));
  }
  if (out.closeness > closeness_threshold)
    throw std::invalid_argument("f and g are not close on A n B (constant " +
                                std::to_string(out.closeness) + ")");
  out.h.src = t;
  out.h.tgt = target;
  out.h.values.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    out.h.values[i] = D.in_A[i] ? f_vals[i] : g_vals[i];
  for (double R : profile.radii) {
    GlueBoundRow row;
    row.R = R;
    row.S = profile.s_at(depth, R);
    row.rho_h = control_at(out.h, R);
    row.bound = detail::side_control(t, target, sideA, f_vals, row.S + 1) +
                detail::side_control(t, target, sideA, f_vals, 2 * row.S + 2 + R) +
                out.closeness +
                detail::side_control(t, target, sideB, g_vals, row.S + 1);
    row.holds = row.rho_h <= row.bound;
    out.rows.push_back(row);
  }
  return out;
}

/// The glued metric d' on the truncation: unchanged inside A \ B and
/// B \ A, and routed through the cheapest point of A n B across the cover
/// (a min, since the intersection is finite here). d' >= d pointwise
/// and both sides embed isometrically.
inline FiniteMetricSpace glued_metric(const FiltrationSpace& X,
                                      const CoverDecomposition& D, int depth) {
  Truncation t = X.truncation(depth);
  D.validate(t);
  const std::size_t n = t.size();
  std::vector<std::size_t> inter;
  for (std::size_t i = 0; i < n; ++i)
    if (D.in_A[i] && D.in_B[i]) inter.push_back(i);
  std::vector<std::string> labels(n);
  std::vector<double> table(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) labels[i] = t.label(i);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      bool same_side = (D.in_A[i] && !D.in_B[i] && D.in_A[j] && !D.in_B[j]) ||
                       (D.in_B[i] && !D.in_A[i] && D.in_B[j] && !D.in_A[j]);
      double d;
      if (same_side) {
        d = t.dist(i, j);
      } else {
        d = std::numeric_limits<double>::infinity();
        for (std::size_t c : inter)
          d = std::min(d, t.dist(i, c) + t.dist(c, j));
      }
      table[i * n + j] = table[j * n + i] = d;
    }
  return FiniteMetricSpace(std::move(labels), std::move(table), 0,
                           t.integer_valued());
}

}  // namespace cgeo

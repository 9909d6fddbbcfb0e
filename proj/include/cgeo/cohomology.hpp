#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <variant>
#include <vector>

#include "cgeo/connect.hpp"

namespace cgeo {

/// Key for a (q+1)-tuple of truncation points; unused slots hold NO_POINT.
using TupleKey = std::array<std::uint32_t, 3>;
inline constexpr std::uint32_t NO_POINT = 0xffffffffu;

struct TupleKeyHash {
  std::size_t operator()(const TupleKey& k) const {
    std::size_t h = 1469598103934665603ull;
    for (std::uint32_t x : k) {
      h ^= x + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

/// Sparse integer-valued function on (q+1)-tuples of truncation points,
/// q <= 2. Coefficients are fixed to Z.
struct Cochain {
  int degree = 0;
  std::unordered_map<TupleKey, long long, TupleKeyHash> values;

  static TupleKey key1(std::uint32_t a) { return {a, NO_POINT, NO_POINT}; }
  static TupleKey key2(std::uint32_t a, std::uint32_t b) {
    return {a, b, NO_POINT};
  }
  static TupleKey key3(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    return {a, b, c};
  }

  long long at(const TupleKey& k) const {
    auto it = values.find(k);
    return it == values.end() ? 0 : it->second;
  }
  long long at(std::uint32_t a) const { return at(key1(a)); }
  long long at(std::uint32_t a, std::uint32_t b) const { return at(key2(a, b)); }
  long long at(std::uint32_t a, std::uint32_t b, std::uint32_t c) const {
    return at(key3(a, b, c));
  }

  void set(const TupleKey& k, long long v) {
    if (v == 0) values.erase(k);
    else values[k] = v;
  }
};

/// Simplicial coboundary with the alternating-sign omission formula; for
/// q = 0 this is delta g(x0, x1) = g(x1) - g(x0). Computed densely over
/// the truncation, stored sparsely.
inline Cochain coboundary(const Cochain& phi, const Truncation& t) {
  if (phi.degree > 1)
    throw std::invalid_argument("coboundary supports degrees 0 and 1 only");
  const std::uint32_t n = static_cast<std::uint32_t>(t.size());
  Cochain out;
  out.degree = phi.degree + 1;
  if (phi.degree == 0) {
    for (std::uint32_t a = 0; a < n; ++a) {
      long long ga = phi.at(a);
      for (std::uint32_t b = 0; b < n; ++b) {
        long long v = phi.at(b) - ga;
        if (v != 0) out.set(Cochain::key2(a, b), v);
      }
    }
  } else {
    for (std::uint32_t a = 0; a < n; ++a)
      for (std::uint32_t b = 0; b < n; ++b)
        for (std::uint32_t c = 0; c < n; ++c) {
          long long v = phi.at(b, c) - phi.at(a, c) + phi.at(a, b);
          if (v != 0) out.set(Cochain::key3(a, b, c), v);
        }
  }
  return out;
}

/// The +-1 indicator cocycle of a decomposition witness:
/// f(x,y) = 1 if x in A, y in B; -1 if x in B, y in A; 0 otherwise.
inline Cochain cocycle_from_decomposition(const DecompositionWitness& w,
                                          const Truncation& t) {
  if (w.in_A.size() != t.size())
    throw std::invalid_argument("witness does not match the truncation");
  if (w.side_size(true) == 0 || w.side_size(false) == 0)
    throw std::invalid_argument("degenerate witness: one side is empty");
  Cochain f;
  f.degree = 1;
  const std::uint32_t n = static_cast<std::uint32_t>(t.size());
  for (std::uint32_t x = 0; x < n; ++x)
    for (std::uint32_t y = 0; y < n; ++y) {
      if (w.in_A[x] && !w.in_A[y]) f.set(Cochain::key2(x, y), 1);
      else if (!w.in_A[x] && w.in_A[y]) f.set(Cochain::key2(x, y), -1);
    }
  return f;
}

struct SupportProfileEntry {
  double scale = 0;  // pairwise-distance bound S of the controlled tuple set
  int depth = 0;
  double r = 0;  // least radius with supp n {controlled} inside B(x0,r)^(q+1)
};

struct SupportProfile {
  std::vector<SupportProfileEntry> entries;
  std::vector<double> scales;
  std::vector<int> depths;
  std::vector<char> divergent;  // per scale, across the top half of depths

  bool any_divergent() const {
    for (char d : divergent)
      if (d) return true;
    return false;
  }

  double r_at(double scale, int depth) const {
    for (const auto& e : entries)
      if (e.scale == scale && e.depth == depth) return e.r;
    throw std::out_of_range("no support-profile entry for (scale, depth)");
  }
};

/// Cocontrolled-support profile: controlled sets are parameterized by a
/// single scale S (tuples with pairwise distances <= S); the entry is the
/// least r containing the support tuples that are S-controlled.
inline SupportProfile cocontrolled_profile(const Cochain& phi,
                                           const FiltrationSpace& X,
                                           std::vector<double> scales,
                                           std::vector<int> depths) {
  if (scales.empty() || depths.empty())
    throw std::invalid_argument("empty scales or depth list");
  std::sort(scales.begin(), scales.end());
  std::sort(depths.begin(), depths.end());
  SupportProfile prof;
  prof.scales = scales;
  prof.depths = depths;
  for (int depth : depths) {
    Truncation t = X.truncation(depth);
    const std::uint32_t n = static_cast<std::uint32_t>(t.size());
    for (double S : scales) {
      double worst = -1;
      for (const auto& [key, v] : phi.values) {
        double maxbd = 0, maxpair = 0;
        bool inside = true;
        for (int a = 0; a < 3 && key[a] != NO_POINT; ++a) {
          if (key[a] >= n) { inside = false; break; }
          maxbd = std::max(maxbd, t.base_dist(key[a]));
          for (int b = a + 1; b < 3 && key[b] != NO_POINT; ++b)
            maxpair = std::max(maxpair, t.dist(key[a], key[b]));
        }
        if (!inside || maxpair > S) continue;
        worst = std::max(worst, maxbd);
      }
      SupportProfileEntry e;
      e.scale = S;
      e.depth = depth;
      e.r = detail::next_radius(worst < 0 ? -1 : worst, t.integer_valued());
      prof.entries.push_back(e);
    }
  }
  prof.divergent.assign(scales.size(), 0);
  std::size_t half = depths.size() / 2;
  for (std::size_t si = 0; si < scales.size(); ++si)
    for (std::size_t di = half; di + 1 < depths.size(); ++di)
      if (prof.r_at(scales[si], depths[di]) !=
          prof.r_at(scales[si], depths[di + 1]))
        prof.divergent[si] = 1;
  return prof;
}

struct TrivialityResult {
  bool trivial = false;
  Cochain potential;                         // g with delta g = f, when trivial
  std::optional<DecompositionWitness> witness;  // when non-trivial
};

/// Decides whether a degree-1 cocycle bounds at desk scale. Builds the
/// relation aRb <=> f(a,b) = 0 (an equivalence relation when delta f = 0);
/// a class with persistently bounded complement yields the potential
/// g(x) = f(x, a), otherwise the classes split into two deep unions and the
/// induced witness is returned.
///
/// Class grouping when several classes are unbounded: the basepoint's class
/// forms A when it is deep, otherwise the class holding the deepest point
/// does; all other classes form B.
inline TrivialityResult triviality_test(const Cochain& f,
                                        const FiltrationSpace& X,
                                        std::vector<double> scales, int depth,
                                        double margin = 1.0,
                                        const SupportProfile* profile = nullptr) {
  if (f.degree != 1) throw std::invalid_argument("triviality test needs degree 1");
  if (profile && profile->any_divergent())
    throw std::invalid_argument("support profile is divergence-flagged");
  std::sort(scales.begin(), scales.end());
  Truncation t = X.truncation(depth);
  const std::uint32_t n = static_cast<std::uint32_t>(t.size());
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b)
      for (std::uint32_t c = 0; c < n; ++c)
        if (f.at(b, c) - f.at(a, c) + f.at(a, b) != 0)
          throw std::invalid_argument("cocycle identity fails on (" +
                                      t.label(a) + "," + t.label(b) + "," +
                                      t.label(c) + ")");
  // classes of aRb <=> f(a,b) = 0
  UnionFind uf(n);
  for (std::uint32_t a = 0; a < n; ++a) {
    if (f.at(a, a) != 0) throw std::invalid_argument("relation not reflexive");
    for (std::uint32_t b = a + 1; b < n; ++b)
      if (f.at(a, b) == 0) {
        if (f.at(b, a) != 0)
          throw std::invalid_argument("relation not symmetric");
        uf.unite(a, b);
      }
  }
  const double deep = depth - margin;
  // complement of a class is bounded iff every deep point lies inside it
  std::vector<std::uint32_t> deep_roots;
  for (std::uint32_t i = 0; i < n; ++i)
    if (t.base_dist(i) >= deep) deep_roots.push_back(uf.find(i));
  if (deep_roots.empty())
    throw std::invalid_argument("truncation has no deep points at this margin");
  bool single_deep_class = true;
  for (std::uint32_t r : deep_roots)
    if (r != deep_roots.front()) single_deep_class = false;

  TrivialityResult res;
  if (single_deep_class) {
    // bounded-complement class: any member serves as the anchor a
    std::uint32_t anchor = 0;
    for (std::uint32_t i = 0; i < n; ++i)
      if (uf.find(i) == deep_roots.front()) { anchor = i; break; }
    res.trivial = true;
    res.potential.degree = 0;
    // g(x) = f(anchor, x) vanishes on the anchor class, so its support sits
    // inside the bounded complement; delta g = f by the cocycle identity
    for (std::uint32_t x = 0; x < n; ++x) {
      long long v = f.at(anchor, x);
      if (v != 0) res.potential.set(Cochain::key1(x), v);
    }
    for (std::uint32_t a = 0; a < n; ++a)
      for (std::uint32_t b = 0; b < n; ++b)
        if (res.potential.at(b) - res.potential.at(a) != f.at(a, b))
          throw std::logic_error("recovered potential does not bound f");
    return res;
  }
  // non-trivial: group classes into two deep unions
  std::uint32_t a_root = uf.find(0);
  bool base_deep = false;
  for (std::uint32_t r : deep_roots)
    if (r == a_root) base_deep = true;
  if (!base_deep) {
    std::uint32_t best = 0;
    for (std::uint32_t i = 0; i < n; ++i)
      if (t.base_dist(i) > t.base_dist(best)) best = i;
    a_root = uf.find(best);
  }
  DecompositionWitness w;
  w.depth = depth;
  w.margin = margin;
  w.in_A.assign(n, 0);
  for (std::uint32_t i = 0; i < n; ++i)
    if (uf.find(i) == a_root) w.in_A[i] = 1;
  // minimal separation radii from the cross pairs
  std::vector<double> worst(scales.size(),
                            -std::numeric_limits<double>::infinity());
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) {
      if (!w.in_A[i] || w.in_A[j]) continue;
      double d = t.dist(i, j);
      double mbd = std::min(t.base_dist(i), t.base_dist(j));
      auto it = std::upper_bound(scales.begin(), scales.end(), d);
      std::size_t k = static_cast<std::size_t>(it - scales.begin());
      if (k < scales.size()) worst[k] = std::max(worst[k], mbd);
    }
  for (std::size_t k = 1; k < scales.size(); ++k)
    worst[k] = std::max(worst[k], worst[k - 1]);
  for (std::size_t k = 0; k < scales.size(); ++k) {
    double r = detail::next_radius(worst[k], t.integer_valued());
    if (r > deep)
      throw std::invalid_argument(
          "support is not cocontrolled: classes do not separate at scale " +
          std::to_string(scales[k]));
    w.radii.emplace_back(scales[k], r);
  }
  if (auto v = witness_violation(t, w))
    throw std::logic_error("induced witness failed re-verification: " + *v);
  res.trivial = false;
  res.witness = std::move(w);
  return res;
}

}  // namespace cgeo

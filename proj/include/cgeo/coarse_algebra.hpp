#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgeo/metric_space.hpp"

namespace cgeo {

/// Binary relation on a ground set {0..n-1}, one bitset row per element.
struct Relation {
  std::size_t n = 0;
  std::vector<std::uint64_t> rows;

  Relation() = default;
  explicit Relation(std::size_t ground) : n(ground), rows(ground, 0) {
    if (ground > 64) throw std::invalid_argument("ground set too large (max 64)");
  }

  static Relation diagonal(std::size_t ground) {
    Relation d(ground);
    for (std::size_t i = 0; i < ground; ++i) d.rows[i] = 1ull << i;
    return d;
  }

  bool get(std::size_t a, std::size_t b) const {
    return (rows[a] >> b) & 1ull;
  }
  void set(std::size_t a, std::size_t b) {
    if (a >= n || b >= n) throw std::invalid_argument("pair outside ground x ground");
    rows[a] |= 1ull << b;
  }

  Relation inverse() const {
    Relation r(n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::uint64_t m = rows[a]; m; m &= m - 1)
        r.rows[static_cast<std::size_t>(__builtin_ctzll(m))] |= 1ull << a;
    return r;
  }

  /// (a,c) in R o S  iff  exists b with (a,b) in R and (b,c) in S.
  Relation compose(const Relation& s) const {
    Relation r(n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::uint64_t m = rows[a]; m; m &= m - 1)
        r.rows[a] |= s.rows[static_cast<std::size_t>(__builtin_ctzll(m))];
    return r;
  }

  Relation unite(const Relation& o) const {
    Relation r(n);
    for (std::size_t a = 0; a < n; ++a) r.rows[a] = rows[a] | o.rows[a];
    return r;
  }

  Relation with_diagonal() const { return unite(diagonal(n)); }

  bool subset_of(const Relation& o) const {
    for (std::size_t a = 0; a < n; ++a)
      if (rows[a] & ~o.rows[a]) return false;
    return true;
  }

  bool operator==(const Relation& o) const { return n == o.n && rows == o.rows; }
  bool operator<(const Relation& o) const { return rows < o.rows; }

  std::size_t pair_count() const {
    std::size_t c = 0;
    for (auto r : rows) c += static_cast<std::size_t>(__builtin_popcountll(r));
    return c;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (std::size_t a = 0; a < n; ++a)
      for (std::uint64_t m = rows[a]; m; m &= m - 1) {
        if (!first) os << ',';
        first = false;
        os << '(' << a << ',' << static_cast<std::size_t>(__builtin_ctzll(m)) << ')';
      }
    os << '}';
    return os.str();
  }
};

namespace detail {

/// Keep only inclusion-maximal relations, deduplicated and sorted.
inline std::vector<Relation> antichain(std::vector<Relation> rels) {
  std::sort(rels.begin(), rels.end());
  rels.erase(std::unique(rels.begin(), rels.end()), rels.end());
  std::vector<Relation> out;
  for (std::size_t i = 0; i < rels.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < rels.size() && !dominated; ++j)
      if (i != j && rels[i].subset_of(rels[j]) && !(rels[j] == rels[i]))
        dominated = true;
    if (!dominated) out.push_back(rels[i]);
  }
  return out;
}

}  // namespace detail

/// A coarse structure on a finite ground set, stored as the antichain of its
/// inclusion-maximal relations; a relation is a member iff contained in one
/// of them.
struct FiniteCoarseSpace {
  std::size_t ground = 0;
  std::vector<Relation> maximal;

  bool member(const Relation& e) const {
    if (e.n != ground) throw std::invalid_argument("relation on wrong ground set");
    for (const auto& m : maximal)
      if (e.subset_of(m)) return true;
    return false;
  }

  bool is_connected() const {
    Relation full(ground);
    for (std::size_t a = 0; a < ground; ++a)
      full.rows[a] = ground == 64 ? ~0ull : ((1ull << ground) - 1);
    return member(full);
  }

  /// A set B is bounded when B is contained in {a : a M x} for some maximal
  /// relation M and some x (column of M). Returned as bitmasks, ascending,
  /// including the empty set.
  std::vector<std::uint64_t> bounded_sets() const {
    if (ground > 20) throw std::invalid_argument("bounded-set enumeration capped at 20 points");
    std::vector<std::uint64_t> cols;
    for (const auto& m : maximal)
      for (std::size_t x = 0; x < ground; ++x) {
        std::uint64_t col = 0;
        for (std::size_t a = 0; a < ground; ++a)
          if (m.get(a, x)) col |= 1ull << a;
        cols.push_back(col);
      }
    std::vector<std::uint64_t> out;
    for (std::uint64_t b = 0; b < (1ull << ground); ++b)
      for (std::uint64_t c : cols)
        if ((b & ~c) == 0) {
          out.push_back(b);
          break;
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
};

/// Smallest coarse structure containing the generators: fixpoint of
/// {generators, Δ} under union, composition (both orders), and inverse,
/// reduced to maximal representatives each round.
inline FiniteCoarseSpace generate_structure(std::size_t ground,
                                            std::vector<Relation> generators) {
  for (const auto& g : generators)
    if (g.n != ground)
      throw std::invalid_argument("generator pair outside ground x ground");
  generators.push_back(Relation::diagonal(ground));
  std::vector<Relation> reps = detail::antichain(std::move(generators));
  for (;;) {
    std::vector<Relation> next = reps;
    for (const auto& m : reps) {
      next.push_back(m.inverse());
      for (const auto& m2 : reps) {
        next.push_back(m.unite(m2));
        next.push_back(m.compose(m2));
      }
    }
    next = detail::antichain(std::move(next));
    if (next == reps) break;
    reps = std::move(next);
  }
  FiniteCoarseSpace s;
  s.ground = ground;
  s.maximal = std::move(reps);
  return s;
}

struct MapPredicates {
  bool bornologous = false;
  bool close = false;  // meaningful only when a second map is supplied
};

inline Relation image_relation(const Relation& r, const std::vector<std::size_t>& f,
                               std::size_t dst_ground) {
  Relation out(dst_ground);
  for (std::size_t a = 0; a < r.n; ++a)
    for (std::uint64_t m = r.rows[a]; m; m &= m - 1) {
      std::size_t b = static_cast<std::size_t>(__builtin_ctzll(m));
      if (f[a] >= dst_ground || f[b] >= dst_ground)
        throw std::invalid_argument("map value outside destination ground");
      out.rows[f[a]] |= 1ull << f[b];
    }
  return out;
}

inline MapPredicates map_predicates(const std::vector<std::size_t>& f,
                                    const FiniteCoarseSpace& src,
                                    const FiniteCoarseSpace& dst,
                                    const std::vector<std::size_t>* g = nullptr) {
  if (f.size() != src.ground) throw std::invalid_argument("map is not total");
  MapPredicates out;
  out.bornologous = true;
  for (const auto& m : src.maximal)
    if (!dst.member(image_relation(m, f, dst.ground))) out.bornologous = false;
  if (g) {
    if (g->size() != src.ground) throw std::invalid_argument("second map is not total");
    Relation graph(dst.ground);
    for (std::size_t a = 0; a < src.ground; ++a) graph.set(f[a], (*g)[a]);
    out.close = dst.member(graph);
  }
  return out;
}

/// Coproduct coarse structure on the disjoint union X + Y (X indices first):
/// generated by both structures' maximal relations plus {(x0, y0)}.
inline FiniteCoarseSpace coproduct_structure(const FiniteCoarseSpace& Xs,
                                             const FiniteCoarseSpace& Ys,
                                             std::size_t x0, std::size_t y0) {
  if (x0 >= Xs.ground || y0 >= Ys.ground)
    throw std::invalid_argument("basepoint missing from its ground set");
  std::size_t n = Xs.ground + Ys.ground;
  std::vector<Relation> gens;
  for (const auto& m : Xs.maximal) {
    Relation e(n);
    for (std::size_t a = 0; a < m.n; ++a) e.rows[a] = m.rows[a];
    gens.push_back(std::move(e));
  }
  for (const auto& m : Ys.maximal) {
    Relation e(n);
    for (std::size_t a = 0; a < m.n; ++a) e.rows[Xs.ground + a] = m.rows[a] << Xs.ground;
    gens.push_back(std::move(e));
  }
  Relation bridge(n);
  bridge.set(x0, Xs.ground + y0);
  gens.push_back(std::move(bridge));
  return generate_structure(n, std::move(gens));
}

/// Bounded coarse structure of a finite metric space: generated by the
/// sublevel relations {(i,j) : d(i,j) <= k} for each distinct distance k.
inline FiniteCoarseSpace metric_coarse_structure(const FiniteMetricSpace& X) {
  std::size_t n = X.size();
  std::vector<double> levels;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) levels.push_back(X.dist(i, j));
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::vector<Relation> gens;
  for (double k : levels) {
    Relation r(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (X.dist(i, j) <= k) r.rows[i] |= 1ull << j;
    gens.push_back(std::move(r));
  }
  return generate_structure(n, std::move(gens));
}

// ---------------------------------------------------------------------------
// Exhaustive lemma verification
// ---------------------------------------------------------------------------

struct LemmaReport {
  bool passed = false;
  std::size_t closure_checks = 0;    // (generator set, map) instances
  std::size_t coproduct_checks = 0;  // (structure pair, basepoints) instances
  std::size_t idempotence_checks = 0;
  std::size_t closure_law_checks = 0;
  std::vector<std::string> counterexamples;
};

namespace detail {

inline Relation relation_from_mask(std::size_t n, std::uint32_t mask) {
  Relation r(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if ((mask >> (a * n + b)) & 1u) r.rows[a] |= 1ull << b;
  return r;
}

/// All generated structures on grounds 1..max_ground from <= max_gens
/// relations, deduplicated by antichain, with closure memoized per gen-set.
struct StructureEnumeration {
  // closures[ground] maps the sorted generator-mask key to the structure
  std::vector<std::map<std::vector<std::uint32_t>, FiniteCoarseSpace>> closures;
  // distinct structures per ground (for structure-level sweeps)
  std::vector<std::vector<FiniteCoarseSpace>> distinct;
};

inline const FiniteCoarseSpace& memo_closure(
    StructureEnumeration& en, std::size_t ground,
    std::vector<std::uint32_t> key) {
  std::sort(key.begin(), key.end());
  key.erase(std::unique(key.begin(), key.end()), key.end());
  auto it = en.closures[ground].find(key);
  if (it != en.closures[ground].end()) return it->second;
  std::vector<Relation> gens;
  for (auto m : key) gens.push_back(relation_from_mask(ground, m));
  auto [pos, inserted] = en.closures[ground].emplace(
      std::move(key), generate_structure(ground, std::move(gens)));
  return pos->second;
}

}  // namespace detail

/// Exhaustively verifies, over all coarse structures generated by at most
/// max_gens relations on grounds of size <= max_ground:
///   (i)  the image of a generated structure under any map f is contained in
///        the structure generated by the image generators;
///   (ii) every maximal relation of every coproduct structure is contained
///        in some (R_r o U o S_r) u (S_r o U o R_r) with R, S members of the
///        factors, U = {(x0,y0),(y0,x0)} u Δ, and R_r = R u Δ on the union;
/// plus fixpoint idempotence and the closure-law invariants.
inline LemmaReport verify_lemmas(std::size_t max_ground = 3,
                                 std::size_t max_gens = 2) {
  if (max_ground > 3 || max_gens > 2)
    throw std::invalid_argument(
        "verification budget exceeded: max ground 3, max generators 2");
  if (max_ground == 0) throw std::invalid_argument("need a non-empty ground bound");
  LemmaReport rep;
  detail::StructureEnumeration en;
  en.closures.resize(max_ground + 1);
  en.distinct.resize(max_ground + 1);

  // enumerate generator sets per ground and record distinct structures
  std::vector<std::vector<std::vector<std::uint32_t>>> gen_sets(max_ground + 1);
  for (std::size_t n = 1; n <= max_ground; ++n) {
    std::uint32_t total = 1u << (n * n);
    gen_sets[n].push_back({});
    for (std::uint32_t a = 0; a < total; ++a) {
      gen_sets[n].push_back({a});
      if (max_gens >= 2)
        for (std::uint32_t b = a + 1; b < total; ++b) gen_sets[n].push_back({a, b});
    }
    std::vector<std::vector<Relation>> seen;
    for (const auto& gs : gen_sets[n]) {
      const FiniteCoarseSpace& s = detail::memo_closure(en, n, gs);
      if (std::find(seen.begin(), seen.end(), s.maximal) == seen.end()) {
        seen.push_back(s.maximal);
        en.distinct[n].push_back(s);
      }
    }
  }

  // (i) image-of-closure containment, all maps between bounded grounds
  for (std::size_t nA = 1; nA <= max_ground; ++nA) {
    for (std::size_t nB = 1; nB <= max_ground; ++nB) {
      std::size_t map_count = 1;
      for (std::size_t i = 0; i < nA; ++i) map_count *= nB;
      std::vector<std::size_t> f(nA);
      for (std::size_t code = 0; code < map_count; ++code) {
        std::size_t c = code;
        for (std::size_t i = 0; i < nA; ++i) {
          f[i] = c % nB;
          c /= nB;
        }
        for (const auto& gs : gen_sets[nA]) {
          const FiniteCoarseSpace& closed = detail::memo_closure(en, nA, gs);
          std::vector<std::uint32_t> image_key;
          for (std::uint32_t m : gs) {
            Relation img =
                image_relation(detail::relation_from_mask(nA, m), f, nB);
            std::uint32_t im = 0;
            for (std::size_t a = 0; a < nB; ++a)
              for (std::size_t b = 0; b < nB; ++b)
                if (img.get(a, b)) im |= 1u << (a * nB + b);
            image_key.push_back(im);
          }
          const FiniteCoarseSpace& image_closed =
              detail::memo_closure(en, nB, image_key);
          ++rep.closure_checks;
          for (const auto& m : closed.maximal)
            if (!image_closed.member(image_relation(m, f, nB))) {
              std::ostringstream os;
              os << "image-of-closure violated: ground " << nA << "->" << nB
                 << ", maximal " << m.to_string() << " maps outside the image closure";
              rep.counterexamples.push_back(os.str());
            }
        }
      }
    }
  }

  // structure-level sweeps: idempotence, closure laws, coproduct containment
  for (std::size_t n = 1; n <= max_ground; ++n) {
    for (const auto& s : en.distinct[n]) {
      FiniteCoarseSpace again = generate_structure(n, s.maximal);
      ++rep.idempotence_checks;
      if (!(again.maximal == s.maximal))
        rep.counterexamples.push_back("fixpoint not idempotent on ground " +
                                      std::to_string(n));
      for (const auto& m : s.maximal)
        for (const auto& m2 : s.maximal) {
          ++rep.closure_law_checks;
          if (!s.member(m.inverse()) || !s.member(m.compose(m2)) ||
              !s.member(m.unite(m2)))
            rep.counterexamples.push_back("closure law violated on ground " +
                                          std::to_string(n));
        }
    }
  }

  for (std::size_t nX = 1; nX <= max_ground; ++nX)
    for (std::size_t nY = 1; nY <= max_ground; ++nY)
      for (const auto& Xs : en.distinct[nX])
        for (const auto& Ys : en.distinct[nY])
          for (std::size_t x0 = 0; x0 < nX; ++x0)
            for (std::size_t y0 = 0; y0 < nY; ++y0) {
              FiniteCoarseSpace cop = coproduct_structure(Xs, Ys, x0, y0);
              std::size_t n = nX + nY;
              Relation U = Relation::diagonal(n);
              U.set(x0, nX + y0);
              U.set(nX + y0, x0);
              ++rep.coproduct_checks;
              for (const auto& T : cop.maximal) {
                bool covered = false;
                // containment is monotone in R and S, so the maximal
                // factor relations suffice
                for (const auto& R : Xs.maximal) {
                  Relation Rr(n);
                  for (std::size_t a = 0; a < nX; ++a) Rr.rows[a] = R.rows[a];
                  Rr = Rr.with_diagonal();
                  for (const auto& S : Ys.maximal) {
                    Relation Sr(n);
                    for (std::size_t a = 0; a < nY; ++a)
                      Sr.rows[nX + a] = S.rows[a] << nX;
                    Sr = Sr.with_diagonal();
                    Relation form = Rr.compose(U).compose(Sr).unite(
                        Sr.compose(U).compose(Rr));
                    if (T.subset_of(form)) covered = true;
                  }
                }
                if (!covered) {
                  std::ostringstream os;
                  os << "coproduct containment violated: grounds " << nX << "+"
                     << nY << ", basepoints (" << x0 << "," << y0
                     << "), maximal " << T.to_string();
                  rep.counterexamples.push_back(os.str());
                }
              }
            }

  rep.passed = rep.counterexamples.empty();
  return rep;
}

}  // namespace cgeo

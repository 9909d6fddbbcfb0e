#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cgeo/maps.hpp"

namespace cgeo {

/// Coarse coproduct X + Y: disjoint union where cross distances are routed
/// through the chosen base points, d(a,b) = d_X(a,x0) + 1 + d_Y(y0,b).
/// Left points carry labels "L:<label>", right points "R:<label>".
struct CoproductSpace {
  FiltrationSpace space;
  std::shared_ptr<FiltrationSpace> left, right;
  std::size_t left_base = 0, right_base = 0;  // indices into left/right
};

inline CoproductSpace binary_coproduct(const FiltrationSpace& X,
                                       const FiltrationSpace& Y,
                                       const std::string& x0_label = "",
                                       const std::string& y0_label = "") {
  auto L = std::make_shared<FiltrationSpace>(X);
  auto R = std::make_shared<FiltrationSpace>(Y);
  std::size_t x0 = 0, y0 = 0;
  if (!x0_label.empty()) {
    auto i = L->index_of(x0_label);
    if (!i) throw std::invalid_argument("left basepoint not in component: " + x0_label);
    x0 = *i;
  }
  if (!y0_label.empty()) {
    auto i = R->index_of(y0_label);
    if (!i) throw std::invalid_argument("right basepoint not in component: " + y0_label);
    y0 = *i;
  }
  const std::size_t nL = L->total_points();
  std::vector<std::string> labels;
  labels.reserve(nL + R->total_points());
  for (std::size_t i = 0; i < nL; ++i) labels.push_back("L:" + L->label(i));
  for (std::size_t i = 0; i < R->total_points(); ++i)
    labels.push_back("R:" + R->label(i));
  // the filtration basepoint is point 0, so move x0 to the front
  std::swap(labels[0], labels[x0]);
  FiltrationSpace::Metric m = [L, R, nL, x0, y0](std::size_t i, std::size_t j) {
    if (i == 0 || i == x0) i ^= x0;  // undo the front swap
    if (j == 0 || j == x0) j ^= x0;
    bool li = i < nL, lj = j < nL;
    if (li && lj) return L->dist(i, j);
    if (!li && !lj) return R->dist(i - nL, j - nL);
    if (!li) std::swap(i, j);  // now i left, j right
    return L->dist(i, x0) + 1.0 + R->dist(y0, j - nL);
  };
  // levels are complete only while the component balls around the chosen
  // base points stay inside the stored truncations
  int max_level = std::min(
      X.max_level() - static_cast<int>(std::ceil(L->base_dist(x0))),
      Y.max_level() + 1 - static_cast<int>(std::ceil(R->base_dist(y0))));
  CoproductSpace c;
  c.space = FiltrationSpace("(" + X.name() + ")+(" + Y.name() + ")",
                            std::move(labels), std::move(m), max_level,
                            X.integer_valued() && Y.integer_valued());
  c.left = L;
  c.right = R;
  c.left_base = x0;
  c.right_base = y0;
  return c;
}

enum class CoproductMode { sum, box };

/// Desk-scale prefix of a countable coproduct. Component i (1-based) keeps
/// labels "<i>:<label>". In sum mode intra-component distances for a != b
/// get the +i offset; box mode drops it.
struct CountableCoproductSpace {
  FiltrationSpace space;
  std::vector<std::shared_ptr<FiltrationSpace>> components;
  std::vector<std::size_t> bases;
  CoproductMode mode = CoproductMode::sum;
};

inline CountableCoproductSpace countable_coproduct(
    const std::vector<FiltrationSpace>& components, CoproductMode mode) {
  if (components.empty())
    throw std::invalid_argument("countable coproduct needs at least one component");
  CountableCoproductSpace c;
  c.mode = mode;
  std::vector<std::size_t> offsets;
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < components.size(); ++k) {
    c.components.push_back(std::make_shared<FiltrationSpace>(components[k]));
    c.bases.push_back(0);  // component filtration basepoints
    offsets.push_back(labels.size());
    for (std::size_t i = 0; i < components[k].total_points(); ++i)
      labels.push_back(std::to_string(k + 1) + ":" + components[k].label(i));
  }
  auto comps = c.components;
  auto offs = std::make_shared<std::vector<std::size_t>>(offsets);
  FiltrationSpace::Metric m = [comps, offs, mode](std::size_t a, std::size_t b) {
    auto locate = [&](std::size_t x) {
      std::size_t k = offs->size() - 1;
      while ((*offs)[k] > x) --k;
      return std::pair<std::size_t, std::size_t>(k, x - (*offs)[k]);
    };
    if (a == b) return 0.0;
    auto [ka, ia] = locate(a);
    auto [kb, ib] = locate(b);
    double i = static_cast<double>(ka + 1), j = static_cast<double>(kb + 1);
    if (ka == kb) {
      double d = comps[ka]->dist(ia, ib);
      return mode == CoproductMode::sum ? d + i : d;
    }
    return comps[ka]->dist(ia, 0) + i + j + comps[kb]->dist(ib, 0);
  };
  int max_level = components[0].max_level() +
                  (mode == CoproductMode::sum ? 1 : 0);
  for (std::size_t k = 1; k < components.size(); ++k)
    max_level = std::min(max_level, components[k].max_level() + 1 +
                                        static_cast<int>(k + 1));
  c.space = FiltrationSpace("countable-coproduct", std::move(labels),
                            std::move(m), max_level, true);
  return c;
}

/// The fold map h of the coproduct universal property: h agrees with f on X
/// and with g on Y. basepoint_gap is r = d(f(x0), g(y0)); the universal
/// bound is rho_h(R) <= rho_f(R) + r + rho_g(R).
struct InducedMap {
  PointMap h;
  double basepoint_gap = 0;
};

inline InducedMap induced_map(const CoproductSpace& C, const PointMap& f,
                              const PointMap& g, int level) {
  if (!f.tgt.same_space(g.tgt))
    throw std::invalid_argument("induced map: f and g must share a target");
  f.validate();
  g.validate();
  Truncation ct = C.space.truncation(level);
  InducedMap out;
  out.h.src = ct;
  out.h.tgt = f.tgt;
  out.h.values.resize(ct.size());
  for (std::size_t i = 0; i < ct.size(); ++i) {
    const std::string& l = ct.label(i);
    bool is_left = l[0] == 'L';
    const FiltrationSpace& comp = is_left ? *C.left : *C.right;
    auto idx = comp.index_of(l.substr(2));
    if (!idx) throw std::logic_error("coproduct label missing in component");
    const PointMap& side = is_left ? f : g;
    if (*idx >= side.src.size())
      throw std::invalid_argument(
          "induced map: component map does not cover the requested level");
    out.h.values[i] = side.values[*idx];
  }
  out.basepoint_gap = f.tgt.dist(f.values[C.left_base], g.values[C.right_base]);
  return out;
}

/// Closeness constant between two maps on the same source into the same
/// target; the uniqueness half of the universal property compares any
/// candidate h' with the fold map this way.
inline double closeness_constant(const PointMap& a, const PointMap& b) {
  if (!a.src.same_space(b.src) || a.src.size() != b.src.size() ||
      !a.tgt.same_space(b.tgt))
    throw std::invalid_argument("closeness: mismatched maps");
  double c = 0;
  for (std::size_t i = 0; i < a.src.size(); ++i)
    c = std::max(c, a.tgt.dist(a.values[i], b.values[i]));
  return c;
}

}  // namespace cgeo

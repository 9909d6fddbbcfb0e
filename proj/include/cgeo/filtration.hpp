#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cgeo/metric_space.hpp"

namespace cgeo {

class FiltrationSpace;

/// A level-n truncation of a FiltrationSpace: the closed ball of radius
/// `level` around the basepoint. Points are a prefix of the filtration's
/// point list (which is sorted by distance to the basepoint), so a
/// truncation is just (space, count).
class Truncation {
public:
  Truncation() = default;
  Truncation(const FiltrationSpace* fs, std::size_t count, int level)
      : fs_(fs), count_(count), level_(level) {}

  std::size_t size() const { return count_; }
  int level() const { return level_; }
  const FiltrationSpace& space() const { return *fs_; }

  inline double dist(std::size_t i, std::size_t j) const;
  inline double base_dist(std::size_t i) const;
  inline const std::string& label(std::size_t i) const;
  inline bool integer_valued() const;

  inline FiniteMetricSpace materialize() const;

  bool same_space(const Truncation& other) const { return fs_ == other.fs_; }

private:
  const FiltrationSpace* fs_ = nullptr;
  std::size_t count_ = 0;
  int level_ = 0;
};

/// Desk-scale stand-in for an unbounded metric space: a nested family of
/// finite truncations with a stable basepoint. Point 0 is the basepoint and
/// points are sorted by increasing distance to it, so the level-n truncation
/// is a prefix of the point list.
class FiltrationSpace {
public:
  using Metric = std::function<double(std::size_t, std::size_t)>;
  /// Optional fast neighbour enumeration: all j != i with d(i,j) < R
  /// (strict). Used by scale sweeps on large spaces; when absent, callers
  /// fall back to pair scans.
  using NeighborFn =
      std::function<std::vector<std::size_t>(std::size_t, double)>;

  FiltrationSpace() = default;

  FiltrationSpace(std::string name, std::vector<std::string> labels,
                  Metric metric, int max_level, bool integer_valued)
      : name_(std::move(name)), labels_(std::move(labels)),
        metric_(std::move(metric)), max_level_(max_level),
        integer_valued_(integer_valued) {
    sort_by_base_dist();
  }

  const std::string& name() const { return name_; }
  std::size_t total_points() const { return labels_.size(); }
  int max_level() const { return max_level_; }
  bool integer_valued() const { return integer_valued_; }
  const std::string& label(std::size_t i) const { return labels_[i]; }

  double dist(std::size_t i, std::size_t j) const { return metric_(i, j); }
  double base_dist(std::size_t i) const { return base_dist_[i]; }

  void set_neighbor_fn(NeighborFn fn) { neighbors_ = std::move(fn); }
  bool has_neighbor_fn() const { return static_cast<bool>(neighbors_); }
  std::vector<std::size_t> neighbors(std::size_t i, double strict_radius) const {
    return neighbors_(i, strict_radius);
  }

  Truncation truncation(int level) const {
    if (level > max_level_)
      throw std::invalid_argument("level " + std::to_string(level) +
                                  " exceeds filtration capacity " +
                                  std::to_string(max_level_));
    // points with base distance <= level form a prefix
    auto it = std::upper_bound(base_dist_.begin(), base_dist_.end(),
                               static_cast<double>(level));
    return Truncation(this, static_cast<std::size_t>(it - base_dist_.begin()),
                      level);
  }

  std::optional<std::size_t> index_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

private:
  void sort_by_base_dist() {
    const std::size_t n = labels_.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> bd(n);
    for (std::size_t i = 0; i < n; ++i) bd[i] = metric_(0, i);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return bd[a] < bd[b]; });
    std::vector<std::string> new_labels(n);
    base_dist_.resize(n);
    std::vector<std::size_t> inv(n);
    for (std::size_t i = 0; i < n; ++i) {
      new_labels[i] = labels_[order[i]];
      base_dist_[i] = bd[order[i]];
      inv[order[i]] = i;
    }
    labels_ = std::move(new_labels);
    Metric old = std::move(metric_);
    metric_ = [old, order](std::size_t i, std::size_t j) {
      return old(order[i], order[j]);
    };
    for (std::size_t i = 0; i < n; ++i) index_[labels_[i]] = i;
  }

  std::string name_;
  std::vector<std::string> labels_;
  Metric metric_;
  NeighborFn neighbors_;
  std::vector<double> base_dist_;
  std::unordered_map<std::string, std::size_t> index_;
  int max_level_ = 0;
  bool integer_valued_ = true;
};

inline double Truncation::dist(std::size_t i, std::size_t j) const {
  return fs_->dist(i, j);
}
inline double Truncation::base_dist(std::size_t i) const {
  return fs_->base_dist(i);
}
inline const std::string& Truncation::label(std::size_t i) const {
  return fs_->label(i);
}
inline bool Truncation::integer_valued() const {
  return fs_->integer_valued();
}

inline FiniteMetricSpace Truncation::materialize() const {
  std::vector<std::string> labels(count_);
  std::vector<double> table(count_ * count_);
  for (std::size_t i = 0; i < count_; ++i) {
    labels[i] = label(i);
    for (std::size_t j = 0; j < count_; ++j) table[i * count_ + j] = dist(i, j);
  }
  return FiniteMetricSpace(std::move(labels), std::move(table), 0,
                           integer_valued());
}

// ---------------------------------------------------------------------------
// Builtin space catalog
// ---------------------------------------------------------------------------

namespace detail {

inline std::string int_label(long long v) { return std::to_string(v); }

inline FiltrationSpace line_space(std::string name,
                                  std::vector<long long> values,
                                  int max_level) {
  std::vector<std::string> labels;
  labels.reserve(values.size());
  for (long long v : values) labels.push_back(int_label(v));
  auto vals = std::make_shared<std::vector<long long>>(std::move(values));
  FiltrationSpace::Metric m = [vals](std::size_t i, std::size_t j) {
    return static_cast<double>(std::llabs((*vals)[i] - (*vals)[j]));
  };
  return FiltrationSpace(std::move(name), std::move(labels), std::move(m),
                         max_level, true);
}

inline std::string coord_label(const std::vector<int>& c) {
  std::string s = "(";
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (k) s += ',';
    s += std::to_string(c[k]);
  }
  s += ')';
  return s;
}

struct CoordHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (int x : v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

inline void enumerate_l1_ball(int dim, int radius,
                              std::vector<std::vector<int>>& out) {
  std::vector<int> cur(dim, 0);
  std::function<void(int, int)> rec = [&](int axis, int budget) {
    if (axis == dim) {
      out.push_back(cur);
      return;
    }
    for (int v = -budget; v <= budget; ++v) {
      cur[axis] = v;
      rec(axis + 1, budget - std::abs(v));
    }
    cur[axis] = 0;
  };
  rec(0, radius);
}

}  // namespace detail

/// Integer lattice Z^dim with the l1 metric, truncated to the l1 ball of
/// radius max_level around the origin. Carries a fast neighbour oracle.
inline FiltrationSpace grid_space(int dim, int max_level) {
  if (dim < 1) throw std::invalid_argument("grid dimension must be >= 1");
  std::vector<std::vector<int>> pts;
  detail::enumerate_l1_ball(dim, max_level, pts);
  // sort by norm so the filtration prefix order matches indices after the
  // FiltrationSpace constructor re-sorts (stable)
  std::stable_sort(pts.begin(), pts.end(),
                   [](const std::vector<int>& a, const std::vector<int>& b) {
                     long na = 0, nb = 0;
                     for (int x : a) na += std::abs(x);
                     for (int x : b) nb += std::abs(x);
                     if (na != nb) return na < nb;
                     return a < b;
                   });
  std::vector<std::string> labels;
  labels.reserve(pts.size());
  for (auto& p : pts) labels.push_back(detail::coord_label(p));
  auto coords = std::make_shared<std::vector<std::vector<int>>>(std::move(pts));
  FiltrationSpace::Metric m = [coords](std::size_t i, std::size_t j) {
    long d = 0;
    const auto& a = (*coords)[i];
    const auto& b = (*coords)[j];
    for (std::size_t k = 0; k < a.size(); ++k) d += std::abs(a[k] - b[k]);
    return static_cast<double>(d);
  };
  FiltrationSpace fs("grid(" + std::to_string(dim) + ")", std::move(labels),
                     std::move(m), max_level, true);
  // neighbour oracle: offsets with l1 norm < R, looked up in a coord index
  auto index = std::make_shared<
      std::unordered_map<std::vector<int>, std::size_t, detail::CoordHash>>();
  for (std::size_t i = 0; i < fs.total_points(); ++i) {
    // recover coords from the (re-sorted) labels
    std::vector<int> c;
    const std::string& l = fs.label(i);
    int v = 0, sign = 1;
    bool in_num = false;
    for (char ch : l) {
      if (ch == '-') { sign = -1; in_num = true; }
      else if (ch >= '0' && ch <= '9') { v = v * 10 + (ch - '0'); in_num = true; }
      else if (in_num) { c.push_back(sign * v); v = 0; sign = 1; in_num = false; }
    }
    (*index)[c] = i;
  }
  auto rev = std::make_shared<std::vector<std::vector<int>>>(fs.total_points());
  for (auto& [c, i] : *index) (*rev)[i] = c;
  int d = dim;
  fs.set_neighbor_fn([index, rev, d](std::size_t i, double strict_radius) {
    int r = static_cast<int>(std::ceil(strict_radius)) - 1;  // d <= r iff d < R
    std::vector<std::vector<int>> offsets;
    detail::enumerate_l1_ball(d, r, offsets);
    std::vector<std::size_t> out;
    const auto& c = (*rev)[i];
    std::vector<int> q(d);
    for (auto& off : offsets) {
      bool zero = true;
      for (int k = 0; k < d; ++k) {
        q[k] = c[k] + off[k];
        if (off[k] != 0) zero = false;
      }
      if (zero) continue;
      auto it = index->find(q);
      if (it != index->end()) out.push_back(it->second);
    }
    return out;
  });
  return fs;
}

inline FiltrationSpace filtration_from_finite(const FiniteMetricSpace& s,
                                              std::string name = "custom") {
  std::vector<std::string> labels = s.labels();
  // rotate basepoint to front; the constructor re-sorts by base distance
  std::size_t base = s.basepoint();
  std::vector<std::size_t> order(s.size());
  order[0] = base;
  std::size_t k = 1;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (i != base) order[k++] = i;
  std::vector<std::string> lab(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) lab[i] = labels[order[i]];
  auto table = std::make_shared<FiniteMetricSpace>(s);
  auto ord = std::make_shared<std::vector<std::size_t>>(std::move(order));
  FiltrationSpace::Metric m = [table, ord](std::size_t i, std::size_t j) {
    return table->dist((*ord)[i], (*ord)[j]);
  };
  double maxbd = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    maxbd = std::max(maxbd, s.base_dist(i));
  return FiltrationSpace(std::move(name), std::move(lab), std::move(m),
                         static_cast<int>(std::ceil(maxbd)),
                         s.integer_valued());
}

/// Builtin space catalog. Names: integers, naturals, squares, grid(d) /
/// grid:d, halfline-net, custom:<file>.
inline FiltrationSpace builtin_space(const std::string& name, int max_level,
                                     int param = 0) {
  if (max_level < 0) throw std::invalid_argument("max level must be >= 0");
  if (name == "integers") {
    std::vector<long long> vals;
    vals.push_back(0);
    for (long long v = 1; v <= max_level; ++v) {
      vals.push_back(v);
      vals.push_back(-v);
    }
    return detail::line_space("integers", std::move(vals), max_level);
  }
  if (name == "naturals" || name == "halfline-net") {
    std::vector<long long> vals;
    for (long long v = 0; v <= max_level; ++v) vals.push_back(v);
    return detail::line_space(name, std::move(vals), max_level);
  }
  if (name == "squares") {
    std::vector<long long> vals;
    for (long long k = 0; k * k <= max_level; ++k) vals.push_back(k * k);
    return detail::line_space("squares", std::move(vals), max_level);
  }
  if (name == "grid") {
    if (param < 1) throw std::invalid_argument("grid requires a dimension parameter >= 1");
    return grid_space(param, max_level);
  }
  if (name.rfind("grid:", 0) == 0)
    return grid_space(std::stoi(name.substr(5)), max_level);
  if (name.rfind("custom:", 0) == 0) {
    std::ifstream in(name.substr(7));
    if (!in) throw std::invalid_argument("cannot open custom space file: " + name.substr(7));
    return filtration_from_finite(load_custom_space(in), name);
  }
  throw std::invalid_argument("unknown space name: " + name);
}

inline std::vector<std::string> builtin_space_names() {
  return {"integers", "naturals", "squares", "grid:<d>", "halfline-net",
          "custom:<file>"};
}

}  // namespace cgeo

#pragma once

#include <cmath>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cgeo {

/// A finite metric space given by an explicit point list and a dense,
/// symmetric distance table. The basepoint anchors all ball computations.
///
/// Convention used throughout: B(A, R) is the *strict* R-neighbourhood
/// {x | d(x, A) < R}.
class FiniteMetricSpace {
public:
  FiniteMetricSpace() = default;

  FiniteMetricSpace(std::vector<std::string> labels, std::vector<double> table,
                    std::size_t basepoint = 0, bool integer_valued = false)
      : labels_(std::move(labels)), table_(std::move(table)),
        basepoint_(basepoint), integer_valued_(integer_valued) {
    if (table_.size() != labels_.size() * labels_.size())
      throw std::invalid_argument("distance table size does not match point count");
    if (basepoint_ >= labels_.size())
      throw std::invalid_argument("basepoint is not a member of the point set");
  }

  std::size_t size() const { return labels_.size(); }
  std::size_t basepoint() const { return basepoint_; }
  bool integer_valued() const { return integer_valued_; }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }

  double dist(std::size_t i, std::size_t j) const {
    return table_[i * labels_.size() + j];
  }

  double base_dist(std::size_t i) const { return dist(basepoint_, i); }

  std::optional<std::size_t> index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return i;
    return std::nullopt;
  }

  double diameter() const {
    double m = 0;
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = i + 1; j < size(); ++j) m = std::max(m, dist(i, j));
    return m;
  }

  /// Checks the metric axioms on the full table. Returns a diagnostic naming
  /// the violating pair/triple, or nullopt if all axioms hold.
  std::optional<std::string> metric_violation() const {
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
      if (dist(i, i) != 0)
        return "d(" + labels_[i] + "," + labels_[i] + ") != 0";
      for (std::size_t j = i + 1; j < n; ++j) {
        if (dist(i, j) != dist(j, i))
          return "asymmetric: d(" + labels_[i] + "," + labels_[j] + ") != d(" +
                 labels_[j] + "," + labels_[i] + ")";
        if (!(dist(i, j) > 0))
          return "non-positive: d(" + labels_[i] + "," + labels_[j] + ") <= 0";
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          if (dist(i, k) > dist(i, j) + dist(j, k))
            return "triangle violated on (" + labels_[i] + "," + labels_[j] +
                   "," + labels_[k] + ")";
    return std::nullopt;
  }

  void validate() const {
    if (auto v = metric_violation())
      throw std::invalid_argument("not a metric: " + *v);
  }

private:
  std::vector<std::string> labels_;
  std::vector<double> table_;  // row-major, size n*n
  std::size_t basepoint_ = 0;
  bool integer_valued_ = false;
};

/// Custom-space file format:
///
///   points a b c
///   basepoint a        (optional; defaults to the first point)
///   dist
///   0 1 2
///   1 0 1
///   2 1 0
///
/// Lines starting with '#' are comments. Non-metrics are rejected with a
/// diagnostic naming the violating triple.
inline FiniteMetricSpace load_custom_space(std::istream& in) {
  std::vector<std::string> labels;
  std::string base_label;
  std::vector<double> table;
  std::string line;
  bool in_dist = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (!in_dist) {
      std::string key;
      ls >> key;
      if (key == "points") {
        std::string tok;
        while (ls >> tok) labels.push_back(tok);
      } else if (key == "basepoint") {
        ls >> base_label;
      } else if (key == "dist") {
        in_dist = true;
      } else {
        throw std::invalid_argument("custom space: unknown field '" + key + "'");
      }
    } else {
      double v;
      while (ls >> v) table.push_back(v);
    }
  }
  if (labels.empty()) throw std::invalid_argument("custom space: no points");
  if (table.size() != labels.size() * labels.size())
    throw std::invalid_argument("custom space: dist table has wrong size");
  std::size_t base = 0;
  if (!base_label.empty()) {
    bool found = false;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == base_label) { base = i; found = true; }
    if (!found)
      throw std::invalid_argument("custom space: basepoint not in point list");
  }
  bool integral = true;
  for (double v : table)
    if (v != std::floor(v)) integral = false;
  FiniteMetricSpace space(std::move(labels), std::move(table), base, integral);
  space.validate();
  return space;
}

inline void save_custom_space(const FiniteMetricSpace& s, std::ostream& out) {
  out << "points";
  for (std::size_t i = 0; i < s.size(); ++i) out << ' ' << s.label(i);
  out << "\nbasepoint " << s.label(s.basepoint()) << "\ndist\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (j) out << ' ';
      double v = s.dist(i, j);
      if (s.integer_valued()) out << static_cast<long long>(v);
      else out << v;
    }
    out << '\n';
  }
}

}  // namespace cgeo

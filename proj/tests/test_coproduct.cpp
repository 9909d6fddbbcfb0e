#include <doctest.h>

#include <random>

#include "cgeo/coproduct.hpp"
#include "util.hpp"

using namespace cgeo;

namespace {

PointMap random_map(std::mt19937& rng, const Truncation& src,
                    const Truncation& tgt) {
  std::uniform_int_distribution<std::size_t> pick(0, tgt.size() - 1);
  PointMap f{src, tgt, {}};
  for (std::size_t i = 0; i < src.size(); ++i) f.values.push_back(pick(rng));
  return f;
}

}  // namespace

TEST_SUITE_BEGIN("coproduct");

TEST_CASE("binary coproduct metric formulas") {
  FiltrationSpace n1 = builtin_space("naturals", 20);
  CoproductSpace c = binary_coproduct(n1, n1);
  auto l3 = c.space.index_of("L:3");
  auto r5 = c.space.index_of("R:5");
  auto l7 = c.space.index_of("L:7");
  REQUIRE((l3 && r5 && l7));
  CHECK(c.space.dist(*l3, *r5) == 9);  // 3 + 1 + 5
  CHECK(c.space.dist(*l3, *l7) == 4);  // left side isometric
}

TEST_CASE("metric axioms exact on 100 randomized binary coproducts") {
  std::mt19937 rng(7u);
  std::uniform_int_distribution<std::size_t> size(2, 30);
  for (int it = 0; it < 100; ++it) {
    FiltrationSpace x =
        filtration_from_finite(testutil::random_metric(rng, size(rng)), "x");
    FiltrationSpace y =
        filtration_from_finite(testutil::random_metric(rng, size(rng)), "y");
    CoproductSpace c = binary_coproduct(x, y);
    FiniteMetricSpace m =
        c.space.truncation(c.space.max_level()).materialize();
    CHECK(m.metric_violation() == std::nullopt);
  }
}

TEST_CASE("basepoint independence up to coarse equivalence") {
  std::mt19937 rng(11u);
  for (int it = 0; it < 20; ++it) {
    FiltrationSpace x =
        filtration_from_finite(testutil::random_metric(rng, 12), "x");
    FiltrationSpace y =
        filtration_from_finite(testutil::random_metric(rng, 12), "y");
    CoproductSpace c0 = binary_coproduct(x, y);
    CoproductSpace c1 = binary_coproduct(x, y, x.label(3), y.label(5));
    double shift = x.dist(0, 3) + y.dist(0, 5);
    int lvl = std::min(c0.space.max_level(), c1.space.max_level());
    Truncation t0 = c0.space.truncation(lvl), t1 = c1.space.truncation(lvl);
    // identity as a set map between the two coproduct metrics
    PointMap id{t0, t1, {}};
    bool total = true;
    for (std::size_t i = 0; i < t0.size(); ++i) {
      auto j = c1.space.index_of(t0.label(i));
      if (!j || *j >= t1.size()) { total = false; break; }
      id.values.push_back(*j);
    }
    if (!total) continue;  // truncations can differ near the rim
    for (double R : {1.0, 5.0, 10.0})
      CHECK(control_at(id, R) <= R + shift);
  }
}

TEST_CASE("countable coproduct sum and box formulas") {
  FiltrationSpace n1 = builtin_space("naturals", 30);
  CountableCoproductSpace sum =
      countable_coproduct({n1, n1}, CoproductMode::sum);
  auto a = sum.space.index_of("1:2");
  auto b = sum.space.index_of("2:3");
  REQUIRE((a && b));
  CHECK(sum.space.dist(*a, *b) == 8);  // 2 + 1 + 2 + 3
  auto c = sum.space.index_of("2:7");
  REQUIRE(c);
  CHECK(sum.space.dist(*b, *c) == 6);  // |3-7| + 2
  CHECK(sum.space.dist(*b, *b) == 0);

  CountableCoproductSpace box =
      countable_coproduct({n1, n1}, CoproductMode::box);
  auto bb = box.space.index_of("2:3");
  auto bc = box.space.index_of("2:7");
  REQUIRE((bb && bc));
  CHECK(box.space.dist(*bb, *bc) == 4);  // no +i offset
}

TEST_CASE("sum mode: far components admit no close cross pairs") {
  std::vector<FiltrationSpace> comps(6, builtin_space("naturals", 10));
  CountableCoproductSpace sum = countable_coproduct(comps, CoproductMode::sum);
  double R = 6;
  // cross distance >= i + j, so components with i + j > R cannot interact
  for (std::size_t a = 0; a < sum.space.total_points(); ++a)
    for (std::size_t b = a + 1; b < sum.space.total_points(); ++b) {
      const std::string& la = sum.space.label(a);
      const std::string& lb = sum.space.label(b);
      int i = la[0] - '0', j = lb[0] - '0';
      if (i != j && i + j > R) CHECK(sum.space.dist(a, b) > R);
    }
}

TEST_CASE("induced map bound on randomized instances, zero tolerance") {
  std::mt19937 rng(23u);
  std::uniform_int_distribution<std::size_t> size(3, 20);
  std::vector<double> radii{1, 2, 4, 8, 16, 32};
  for (int it = 0; it < 100; ++it) {
    FiltrationSpace x =
        filtration_from_finite(testutil::random_metric(rng, size(rng)), "x");
    FiltrationSpace y =
        filtration_from_finite(testutil::random_metric(rng, size(rng)), "y");
    FiltrationSpace z =
        filtration_from_finite(testutil::random_metric(rng, size(rng)), "z");
    Truncation tz = z.truncation(z.max_level());
    PointMap f = random_map(rng, x.truncation(x.max_level()), tz);
    PointMap g = random_map(rng, y.truncation(y.max_level()), tz);
    CoproductSpace c = binary_coproduct(x, y);
    InducedMap ind = induced_map(c, f, g, c.space.max_level());
    ControlFunction rh = estimate_control(ind.h, radii);
    ControlFunction rf = estimate_control(f, radii);
    ControlFunction rg = estimate_control(g, radii);
    for (std::size_t k = 0; k < radii.size(); ++k)
      CHECK(rh.bounds[k] <= rf.bounds[k] + ind.basepoint_gap + rg.bounds[k]);
  }
}

TEST_CASE("induced map agrees with f and g; closeness of a perturbation") {
  FiltrationSpace n1 = builtin_space("naturals", 20);
  FiltrationSpace z = builtin_space("integers", 50);
  CoproductSpace c = binary_coproduct(n1, n1);
  Truncation tn = n1.truncation(20), tz = z.truncation(50);
  PointMap f{tn, tz, {}}, g{tn, tz, {}};
  for (std::size_t i = 0; i < tn.size(); ++i) {
    long long v = std::stoll(tn.label(i));
    f.values.push_back(*z.index_of(std::to_string(v)));
    g.values.push_back(*z.index_of(std::to_string(-v)));
  }
  InducedMap ind = induced_map(c, f, g, c.space.max_level());
  CHECK(ind.basepoint_gap == 0);
  Truncation tc = c.space.truncation(c.space.max_level());
  for (std::size_t i = 0; i < tc.size(); ++i) {
    const std::string& l = tc.label(i);
    long long v = std::stoll(l.substr(2));
    CHECK(static_cast<long long>(std::stoll(
              tz.label(ind.h.values[i]))) == (l[0] == 'L' ? v : -v));
  }
  // uniqueness up to closeness: a +1-shifted candidate stays close to h
  PointMap shifted = ind.h;
  for (auto& v : shifted.values) {
    long long w = std::stoll(tz.label(v));
    if (w < 50) v = *z.index_of(std::to_string(w + 1));
  }
  CHECK(closeness_constant(ind.h, shifted) <= 1);
}

TEST_CASE("fold map properness reflects both sides") {
  FiltrationSpace n1 = builtin_space("naturals", 30);
  CoproductSpace c = binary_coproduct(n1, n1);
  Truncation tn = n1.truncation(30);
  PointMap f = identity_map(tn);                // proper
  PointMap g = constant_map(tn, tn, 0);         // not proper
  InducedMap ind = induced_map(c, f, g, c.space.max_level());
  auto rep = check_proper_close(ind.h, nullptr, 1);
  CHECK(rep.properness.properness_failure);  // the g side collapses

  InducedMap both = induced_map(c, f, f, c.space.max_level());
  auto rep2 = check_proper_close(both.h, nullptr, 1);
  CHECK_FALSE(rep2.properness.properness_failure);
}

TEST_CASE("N + N is bijectively coarse equivalent to Z") {
  const int depth = 100;
  FiltrationSpace n1 = builtin_space("naturals", depth);
  FiltrationSpace z = builtin_space("integers", depth);
  CoproductSpace c = binary_coproduct(n1, n1);
  REQUIRE(c.space.max_level() >= depth);
  Truncation tc = c.space.truncation(depth);
  Truncation tz = z.truncation(depth);
  // u: L:n -> n, R:n -> -(n+1); v is its inverse
  PointMap u{tc, tz, {}};
  for (std::size_t i = 0; i < tc.size(); ++i) {
    const std::string& l = tc.label(i);
    long long n = std::stoll(l.substr(2));
    u.values.push_back(*z.index_of(std::to_string(l[0] == 'L' ? n : -(n + 1))));
  }
  PointMap v{tz, tc, {}};
  for (std::size_t i = 0; i < tz.size(); ++i) {
    long long n = std::stoll(tz.label(i));
    std::string target = n >= 0 ? "L:" + std::to_string(n)
                                : "R:" + std::to_string(-n - 1);
    v.values.push_back(*c.space.index_of(target));
  }
  u.validate();
  v.validate();
  for (double R : {1.0, 2.0, 5.0, 10.0}) {
    CHECK(control_at(u, R) <= 2 * R + 1);
    CHECK(control_at(v, R) <= 2 * R + 1);
  }
  CHECK(closeness_constant(compose(v, u), identity_map(tc)) <= 1);
  CHECK(closeness_constant(compose(u, v), identity_map(tz)) <= 1);
}

TEST_SUITE_END();

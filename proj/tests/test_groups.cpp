#include <doctest.h>

#include <sstream>

#include "cgeo/groups.hpp"

using namespace cgeo;

namespace {

std::vector<int> range(int a, int b) {
  std::vector<int> out;
  for (int k = a; k <= b; ++k) out.push_back(k);
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("groups");

TEST_CASE("cayley balls: Z path, F2 tree, Z^2 diamond") {
  CayleyBall z = cayley_ball(builtin_group("z"), 3);
  CHECK(z.vertices.size() == 7);
  CHECK(z.edges.size() == 6);

  CayleyBall f2 = cayley_ball(builtin_group("f2"), 3);
  CHECK(f2.vertices.size() == 53);  // 2 * 3^3 - 1

  CayleyBall z2 = cayley_ball(builtin_group("z2"), 2);
  CHECK(z2.vertices.size() == 13);
}

TEST_CASE("sphere sizes: Z, F2, Z^2") {
  CayleyBall z = cayley_ball(builtin_group("z"), 8);
  for (int n = 1; n <= 8; ++n) CHECK(z.sphere_size(n) == 2);

  CayleyBall f2 = cayley_ball(builtin_group("f2"), 6);
  std::size_t expect = 4;
  for (int n = 1; n <= 6; ++n) {
    CHECK(f2.sphere_size(n) == expect);
    expect *= 3;
  }

  CayleyBall z2 = cayley_ball(builtin_group("z2"), 6);
  for (int n = 1; n <= 6; ++n)
    CHECK(z2.sphere_size(n) == static_cast<std::size_t>(4 * n));
}

TEST_CASE("word metric space of Z is isometric to the builtin integers") {
  FiltrationSpace w = word_metric_space(builtin_group("z"), 12);
  FiltrationSpace z = builtin_space("integers", 12);
  Truncation tw = w.truncation(12), tz = z.truncation(12);
  REQUIRE(tw.size() == tz.size());
  for (std::size_t i = 0; i < tw.size(); ++i) {
    CHECK(tw.base_dist(i) == tz.base_dist(i));
    for (std::size_t j = 0; j < tw.size(); ++j) {
      long long a = std::stoll(tw.label(i).substr(1, tw.label(i).size() - 2));
      long long b = std::stoll(tw.label(j).substr(1, tw.label(j).size() - 2));
      CHECK(tw.dist(i, j) == std::llabs(a - b));
    }
  }
}

TEST_CASE("word lengths are graph distances to the identity") {
  for (const char* name : {"z", "z2", "dinf", "f2"}) {
    GroupOracle G = builtin_group(name);
    int n = std::string(name) == "f2" ? 5 : 6;
    CayleyBall ball = cayley_ball(G, n);
    FiltrationSpace w = word_metric_space(G, n);
    REQUIRE(w.total_points() == ball.vertices.size());
    // BFS order is preserved, so index i names the same element in both
    for (std::size_t i = 0; i < w.total_points(); ++i)
      CHECK(w.base_dist(i) == static_cast<double>(ball.word_length[i]));
  }
}

TEST_CASE("F2 adjacent words") {
  GroupOracle f2 = builtin_group("f2");
  FiltrationSpace w = word_metric_space(f2, 4);
  auto ab = w.index_of("ab");
  auto a = w.index_of("a");
  REQUIRE((ab && a));
  CHECK(w.dist(*ab, *a) == 1);
}

TEST_CASE("ends: Z = 2, Z^2 = 1, dinf = 2, F2 growing") {
  EndsEstimate z = ends_estimate(builtin_group("z"), range(1, 10), 30);
  for (auto [n, c] : z.counts) CHECK(c == 2);
  CHECK(z.verdict == EndsVerdict::two);

  EndsEstimate z2 = ends_estimate(builtin_group("z2"), range(1, 6), 20);
  for (auto [n, c] : z2.counts) CHECK(c == 1);
  CHECK(z2.verdict == EndsVerdict::one);

  EndsEstimate di = ends_estimate(builtin_group("dinf"), range(1, 6), 20);
  CHECK(di.verdict == EndsVerdict::two);

  EndsEstimate f2 = ends_estimate(builtin_group("f2"), range(1, 6), 10);
  std::size_t expect = 4;
  for (auto [n, c] : f2.counts) {
    CHECK(c == expect);  // 4 * 3^(n-1)
    expect *= 3;
  }
  CHECK(f2.verdict == EndsVerdict::growing);
}

TEST_CASE("ends counts are non-increasing in the outer radius") {
  for (const char* name : {"z", "z2", "dinf"}) {
    GroupOracle G = builtin_group(name);
    for (int n : {2, 3}) {
      std::size_t prev = SIZE_MAX;
      for (int N : {2 * n, 2 * n + 3, 2 * n + 6}) {
        EndsEstimate e = ends_estimate(G, {n}, N);
        CHECK(e.counts[0].second <= prev);
        prev = e.counts[0].second;
      }
    }
  }
}

TEST_CASE("finite groups have zero ends") {
  std::istringstream s3(
      "degree 3\ngen t 1 0 2\ngen c 1 2 0\n");
  GroupOracle G = finite_permutation_oracle(s3);
  EndsEstimate e = ends_estimate(G, range(1, 4), 8);
  for (auto [n, c] : e.counts)
    CHECK(c == 0);  // nothing reaches the outer sphere
  CHECK(e.verdict == EndsVerdict::zero);
}

TEST_CASE("Z x C2 keeps two ends") {
  EndsEstimate e = ends_estimate(builtin_group("zxc2"), range(1, 6), 20);
  CHECK(e.verdict == EndsVerdict::two);
}

TEST_CASE("corona verdicts cross-checked against the separation search") {
  auto scales = std::vector<double>{1, 2, 3};
  CoronaVerdict z = corona_verdict(builtin_group("z"), range(1, 8), 14, 6, scales);
  CHECK_FALSE(z.connected);
  CHECK(z.coherent);

  CoronaVerdict z2 =
      corona_verdict(builtin_group("z2"), range(1, 6), 14, 6, scales);
  CHECK(z2.connected);
  CHECK(z2.coherent);

  CoronaVerdict di =
      corona_verdict(builtin_group("dinf"), range(1, 6), 14, 6, scales);
  CHECK_FALSE(di.connected);
  CHECK(di.coherent);

  CoronaVerdict f2 =
      corona_verdict(builtin_group("f2"), range(1, 6), 10, 5, scales);
  CHECK_FALSE(f2.connected);
  CHECK(f2.coherent);
}

TEST_CASE("oracle validation and errors") {
  GroupOracle bad;
  bad.name = "bad";
  bad.identity = {0};
  bad.generators.emplace_back("s", GroupOracle::Elem{1});
  bad.mul = [](const GroupOracle::Elem& a, const GroupOracle::Elem& b) {
    return GroupOracle::Elem{a[0] + b[0]};
  };  // no inverse generator supplied
  CHECK_THROWS_WITH_AS(cayley_ball(bad, 2), doctest::Contains("inverse"),
                       std::invalid_argument);

  CHECK_THROWS_AS(builtin_group("nope"), std::invalid_argument);
  CHECK_THROWS_AS(ends_estimate(builtin_group("z"), {5}, 6),
                  std::invalid_argument);

  std::istringstream malformed("degree 3\ngen s 0 0 2\n");
  CHECK_THROWS_AS(finite_permutation_oracle(malformed), std::invalid_argument);
}

TEST_SUITE_END();

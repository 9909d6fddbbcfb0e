#include <doctest.h>

#include <random>

#include "cgeo/cohomology.hpp"
#include "util.hpp"

using namespace cgeo;

namespace {

std::vector<double> unit_scales(int n) {
  std::vector<double> s;
  for (int k = 1; k <= n; ++k) s.push_back(k);
  return s;
}

DecompositionWitness integer_witness(const FiltrationSpace& z, int depth,
                                     int max_scale) {
  Truncation t = z.truncation(depth);
  DecompositionWitness w;
  w.depth = depth;
  w.margin = 1;
  w.in_A.resize(t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    w.in_A[i] = std::stoll(t.label(i)) >= 0;
  for (int R = 1; R <= max_scale; ++R) w.radii.emplace_back(R, R);
  return w;
}

}  // namespace

TEST_SUITE_BEGIN("cohomology");

TEST_CASE("coboundary of a point indicator") {
  FiltrationSpace z = builtin_space("integers", 10);
  Truncation t = z.truncation(10);
  std::uint32_t p = static_cast<std::uint32_t>(*z.index_of("3"));
  Cochain g;
  g.degree = 0;
  g.set(Cochain::key1(p), 1);
  Cochain dg = coboundary(g, t);
  CHECK(dg.degree == 1);
  for (std::uint32_t x = 0; x < t.size(); ++x) {
    if (x == p) continue;
    CHECK(dg.at(p, x) == -1);
    CHECK(dg.at(x, p) == 1);
    for (std::uint32_t y = 0; y < t.size(); ++y)
      if (x != p && y != p) CHECK(dg.at(x, y) == 0);
  }
}

TEST_CASE("delta delta = 0 on 100 randomized degree-0 cochains") {
  FiltrationSpace z = builtin_space("integers", 15);
  Truncation t = z.truncation(15);
  std::mt19937 rng(101u);
  std::uniform_int_distribution<long long> val(-9, 9);
  std::uniform_int_distribution<std::uint32_t> pt(
      0, static_cast<std::uint32_t>(t.size() - 1));
  for (int it = 0; it < 100; ++it) {
    Cochain g;
    g.degree = 0;
    for (int k = 0; k < 12; ++k) g.set(Cochain::key1(pt(rng)), val(rng));
    Cochain ddg = coboundary(coboundary(g, t), t);
    CHECK(ddg.values.empty());
  }
  Cochain zero;
  zero.degree = 0;
  CHECK(coboundary(zero, t).values.empty());
  Cochain two;
  two.degree = 2;
  CHECK_THROWS_AS(coboundary(two, t), std::invalid_argument);
}

TEST_CASE("witness cocycle: values, delta f = 0 by triple scan, antisymmetry") {
  FiltrationSpace z = builtin_space("integers", 60);
  Truncation t = z.truncation(60);
  DecompositionWitness w = integer_witness(z, 60, 5);
  Cochain f = cocycle_from_decomposition(w, t);
  auto id = [&](const char* l) {
    return static_cast<std::uint32_t>(*z.index_of(l));
  };
  CHECK(f.at(id("3"), id("-4")) == 1);
  CHECK(f.at(id("-4"), id("3")) == -1);
  CHECK(f.at(id("3"), id("5")) == 0);

  Cochain df = coboundary(f, t);
  CHECK(df.values.empty());  // exhaustive triple scan inside coboundary
  for (std::uint32_t a = 0; a < t.size(); ++a) {
    CHECK(f.at(a, a) == 0);
    for (std::uint32_t b = 0; b < t.size(); ++b)
      CHECK(f.at(a, b) == -f.at(b, a));
  }
}

TEST_CASE("cocontrolled profiles: witness cocycle bounded, full cochain not") {
  FiltrationSpace z = builtin_space("integers", 120);
  Truncation t = z.truncation(120);
  DecompositionWitness w = integer_witness(z, 120, 5);
  Cochain f = cocycle_from_decomposition(w, t);
  SupportProfile p = cocontrolled_profile(f, z, {1, 5}, {60, 90, 120});
  CHECK_FALSE(p.any_divergent());
  // support pairs at distance <= 5 reach base distance 5, so the strict
  // exceptional ball needs radius 6
  CHECK(p.r_at(5, 120) <= 6);

  Cochain ones;
  ones.degree = 1;
  for (std::uint32_t a = 0; a < t.size(); ++a)
    for (std::uint32_t b = 0; b < t.size(); ++b)
      if (a != b) ones.set(Cochain::key2(a, b), 1);
  SupportProfile q = cocontrolled_profile(ones, z, {1}, {60, 90, 120});
  CHECK(q.any_divergent());

  // degree 0: the profile degenerates to a bounded-support check
  Cochain g;
  g.degree = 0;
  g.set(Cochain::key1(static_cast<std::uint32_t>(*z.index_of("7"))), 2);
  SupportProfile b = cocontrolled_profile(g, z, {1}, {60, 90, 120});
  CHECK_FALSE(b.any_divergent());
  CHECK(b.r_at(1, 120) == 8);  // support {7} needs radius just past 7
}

TEST_CASE("round trip: decomposition -> cocycle -> nontrivial, same partition") {
  FiltrationSpace z = builtin_space("integers", 60);
  Truncation t = z.truncation(60);
  DecompositionWitness w = integer_witness(z, 60, 5);
  Cochain f = cocycle_from_decomposition(w, t);
  SupportProfile p = cocontrolled_profile(f, z, unit_scales(5), {30, 45, 60});
  TrivialityResult res = triviality_test(f, z, unit_scales(5), 60, 1, &p);
  REQUIRE_FALSE(res.trivial);
  REQUIRE(res.witness);
  CHECK(res.witness->in_A == w.in_A);
  CHECK(witness_violation(t, *res.witness) == std::nullopt);
}

TEST_CASE("round trip: bounded potential -> coboundary -> trivial") {
  FiltrationSpace z = builtin_space("integers", 60);
  Truncation t = z.truncation(60);
  Cochain g;
  g.degree = 0;
  for (const char* l : {"0", "1", "2"})
    g.set(Cochain::key1(static_cast<std::uint32_t>(*z.index_of(l))), 1);
  Cochain f = coboundary(g, t);
  TrivialityResult res = triviality_test(f, z, unit_scales(5), 60);
  REQUIRE(res.trivial);
  // recovered potential differs from g by a constant
  long long shift = res.potential.at(0) - g.at(0);
  for (std::uint32_t x = 0; x < t.size(); ++x)
    CHECK(res.potential.at(x) - g.at(x) == shift);
}

TEST_CASE("zero cocycle is trivial with zero potential") {
  FiltrationSpace z = builtin_space("integers", 30);
  Cochain f;
  f.degree = 1;
  TrivialityResult res = triviality_test(f, z, {1, 2}, 30);
  CHECK(res.trivial);
  CHECK(res.potential.values.empty());
}

TEST_CASE("triviality test rejects bad inputs") {
  FiltrationSpace z = builtin_space("integers", 20);
  Cochain bad;
  bad.degree = 1;
  bad.set(Cochain::key2(0, 1), 1);  // not antisymmetric: violates the identity
  CHECK_THROWS_WITH_AS(triviality_test(bad, z, {1}, 20),
                       doctest::Contains("cocycle identity"),
                       std::invalid_argument);

  Cochain zero;
  zero.degree = 0;
  CHECK_THROWS_AS(triviality_test(zero, z, {1}, 20), std::invalid_argument);

  // divergence-flagged profile is refused up front
  Truncation t = z.truncation(20);
  DecompositionWitness w = integer_witness(z, 20, 2);
  Cochain f = cocycle_from_decomposition(w, t);
  SupportProfile p;
  p.scales = {1};
  p.depths = {10, 20};
  p.divergent = {1};
  CHECK_THROWS_WITH_AS(triviality_test(f, z, {1}, 20, 1, &p),
                       doctest::Contains("divergence"), std::invalid_argument);
}

TEST_CASE("corpus reflection: witness spaces have nontrivial cocycles") {
  // integers / squares: separation witness -> nontrivial class;
  // naturals / grid(2): no witness, and bounded potentials stay trivial
  FiltrationSpace z = builtin_space("integers", 60);
  SeparationVerdict vz = detect_decomposition(z, unit_scales(5), 60);
  REQUIRE(vz.outcome == SeparationOutcome::witness_found);
  Cochain fz = cocycle_from_decomposition(*vz.witness, z.truncation(60));
  CHECK_FALSE(triviality_test(fz, z, unit_scales(5), 60).trivial);

  FiltrationSpace sq = builtin_space("squares", 3600);
  SeparationVerdict vs = detect_decomposition(sq, unit_scales(10), 3600, 120);
  REQUIRE(vs.outcome == SeparationOutcome::witness_found);
  Cochain fs = cocycle_from_decomposition(*vs.witness, sq.truncation(3600));
  CHECK_FALSE(triviality_test(fs, sq, unit_scales(10), 3600, 120).trivial);

  for (const char* name : {"naturals", "grid"}) {
    FiltrationSpace s = std::string(name) == "grid"
                            ? builtin_space("grid", 8, 2)
                            : builtin_space(name, 60);
    int depth = std::string(name) == "grid" ? 8 : 60;
    CHECK(detect_decomposition(s, unit_scales(5), depth).outcome ==
          SeparationOutcome::no_witness);
    Truncation t = s.truncation(depth);
    Cochain g;
    g.degree = 0;
    g.set(Cochain::key1(0), 3);
    Cochain f = coboundary(g, t);
    CHECK(triviality_test(f, s, unit_scales(5), depth).trivial);
  }
}

TEST_SUITE_END();

// cgeo: command-line front end for the coarse-geometry toolkit.
//
// Exit codes: 0 = analysis completed (whatever the verdict), 1 = inconclusive
// within the configured budget, 2 = input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "cgeo/coarse_algebra.hpp"
#include "cgeo/cohomology.hpp"
#include "cgeo/connect.hpp"
#include "cgeo/coproduct.hpp"
#include "cgeo/excisive.hpp"
#include "cgeo/groups.hpp"

using json = nlohmann::ordered_json;
using namespace cgeo;

namespace {

struct Options {
  bool as_json = false;
  unsigned seed = 1u;
  double margin = 1.0;
};

std::vector<double> parse_range(const std::string& spec) {
  auto dots = spec.find("..");
  std::vector<double> out;
  if (dots == std::string::npos) {
    std::istringstream is(spec);
    std::string tok;
    while (std::getline(is, tok, ',')) out.push_back(std::stod(tok));
  } else {
    double a = std::stod(spec.substr(0, dots));
    double b = std::stod(spec.substr(dots + 2));
    for (double v = a; v <= b; v += 1.0) out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty range: " + spec);
  return out;
}

std::vector<int> parse_int_range(const std::string& spec) {
  std::vector<int> out;
  for (double v : parse_range(spec)) out.push_back(static_cast<int>(v));
  return out;
}

FiltrationSpace make_space(const std::string& spec, int depth) {
  if (spec.rfind("grid:", 0) == 0 || spec.rfind("custom:", 0) == 0)
    return builtin_space(spec, depth);
  return builtin_space(spec, depth);
}

// subset specs: nonneg | nonpos | even | odd | upper | lower | file:<path>
std::vector<char> parse_subset(const std::string& spec, const Truncation& t) {
  std::vector<char> out(t.size(), 0);
  if (spec.rfind("file:", 0) == 0) {
    std::ifstream in(spec.substr(5));
    if (!in) throw std::invalid_argument("cannot open subset file: " + spec.substr(5));
    std::string label;
    while (in >> label) {
      auto i = t.space().index_of(label);
      if (!i || *i >= t.size())
        throw std::invalid_argument("subset point not in truncation: " + label);
      out[*i] = 1;
    }
    return out;
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    const std::string& l = t.label(i);
    if (spec == "upper" || spec == "lower") {
      auto comma = l.rfind(',');
      if (comma == std::string::npos || l.back() != ')')
        throw std::invalid_argument("subset '" + spec + "' needs coordinate labels");
      int y = std::stoi(l.substr(comma + 1, l.size() - comma - 2));
      out[i] = spec == "upper" ? y >= 0 : y <= 0;
    } else {
      long long v = std::stoll(l);
      if (spec == "nonneg") out[i] = v >= 0;
      else if (spec == "nonpos") out[i] = v <= 0;
      else if (spec == "even") out[i] = v % 2 == 0;
      else if (spec == "odd") out[i] = v % 2 != 0;
      else throw std::invalid_argument("unknown subset spec: " + spec);
    }
  }
  return out;
}

Cochain load_cochain(const std::string& path, const FiltrationSpace& X) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open cochain file: " + path);
  Cochain c;
  c.degree = -1;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (c.degree < 0) {
      std::string key;
      ls >> key;
      if (key != "degree")
        throw std::invalid_argument("cochain file must start with a degree line");
      ls >> c.degree;
      if (c.degree < 0 || c.degree > 2)
        throw std::invalid_argument("cochain degree must be 0, 1 or 2");
      continue;
    }
    TupleKey key{NO_POINT, NO_POINT, NO_POINT};
    for (int k = 0; k <= c.degree; ++k) {
      std::string label;
      if (!(ls >> label))
        throw std::invalid_argument("cochain record is too short: " + line);
      auto idx = X.index_of(label);
      if (!idx) throw std::invalid_argument("cochain point not in space: " + label);
      key[k] = static_cast<std::uint32_t>(*idx);
    }
    long long v;
    if (!(ls >> v))
      throw std::invalid_argument("cochain record has no value: " + line);
    c.set(key, v);
  }
  if (c.degree < 0) throw std::invalid_argument("cochain file is empty");
  return c;
}

void emit(const Options& opt, const json& report, const std::string& text) {
  if (opt.as_json)
    std::cout << report.dump(2) << "\n";
  else
    std::cout << text;
}

json witness_json(const DecompositionWitness& w) {
  json radii = json::array();
  for (auto [R, r] : w.radii) radii.push_back({{"R", R}, {"r", r}});
  return {{"A_size", w.side_size(true)},
          {"B_size", w.side_size(false)},
          {"radii", radii}};
}

int run_connectivity(const Options& opt, const std::string& space,
                     const std::string& scales_spec, int depth) {
  FiltrationSpace X = make_space(space, depth);
  std::vector<double> scales = parse_range(scales_spec);
  SeparationVerdict v = detect_decomposition(X, scales, depth, opt.margin);
  bool found = v.outcome == SeparationOutcome::witness_found;
  json rep{{"subcommand", "analyze connectivity"},
           {"space", space},
           {"scales", scales},
           {"depth", depth},
           {"margin", opt.margin},
           {"outcome", found ? "witness-found" : "no-witness"}};
  std::ostringstream text;
  text << "space " << space << ", depth " << depth << ": "
       << (found ? "witness-found" : "no-witness at tested scales") << "\n";
  if (found) {
    rep["witness"] = witness_json(*v.witness);
    text << "  |A| = " << v.witness->side_size(true)
         << ", |B| = " << v.witness->side_size(false) << "\n";
    for (auto [R, r] : v.witness->radii)
      text << "  R = " << R << "  r(R) = " << r << "\n";
  }
  emit(opt, rep, text.str());
  return 0;
}

int run_coproduct(const Options& opt, const std::string& left,
                  const std::string& right, const std::string& mode,
                  int depth, int level) {
  FiltrationSpace X = make_space(left, depth);
  FiltrationSpace Y = make_space(right, depth);
  FiltrationSpace result;
  if (mode == "binary") {
    result = binary_coproduct(X, Y).space;
  } else {
    CoproductMode m = mode == "box" ? CoproductMode::box : CoproductMode::sum;
    result = countable_coproduct({X, Y}, m).space;
  }
  if (level < 0) level = result.max_level();
  FiniteMetricSpace table = result.truncation(level).materialize();
  if (opt.as_json) {
    json rep{{"subcommand", "coproduct"},
             {"left", left},
             {"right", right},
             {"mode", mode},
             {"level", level},
             {"points", table.size()}};
    std::cout << rep.dump(2) << "\n";
  }
  save_custom_space(table, std::cout);
  return 0;
}

int run_excisive(const Options& opt, const std::string& space,
                 const std::string& a_spec, const std::string& b_spec,
                 const std::string& radii_spec, const std::string& depths_spec) {
  std::vector<int> depths = parse_int_range(depths_spec);
  int max_depth = *std::max_element(depths.begin(), depths.end());
  FiltrationSpace X = make_space(space, max_depth);
  Truncation t = X.truncation(max_depth);
  CoverDecomposition D{parse_subset(a_spec, t), parse_subset(b_spec, t)};
  ExcisiveProfile p = excisive_profile(X, D, parse_range(radii_spec), depths);
  json table = json::array();
  std::ostringstream text;
  text << "space " << space << ", A = " << a_spec << ", B = " << b_spec << "\n";
  for (std::size_t di = 0; di < p.depths.size(); ++di) {
    for (std::size_t ri = 0; ri < p.radii.size(); ++ri) {
      table.push_back({{"depth", p.depths[di]},
                       {"R", p.radii[ri]},
                       {"S", p.S[di][ri]}});
      text << "  depth " << p.depths[di] << "  R = " << p.radii[ri]
           << "  S(R) = " << p.S[di][ri] << "\n";
    }
  }
  json divergent = json::array();
  for (std::size_t ri = 0; ri < p.radii.size(); ++ri)
    if (p.divergent[ri]) divergent.push_back(p.radii[ri]);
  text << (p.any_divergent() ? "verdict: divergent (not omega-excisive)\n"
                             : "verdict: bounded profile\n");
  json rep{{"subcommand", "excisive"}, {"space", space},
           {"A", a_spec},             {"B", b_spec},
           {"profile", table},        {"divergent_radii", divergent},
           {"verdict", p.any_divergent() ? "divergent" : "bounded"}};
  emit(opt, rep, text.str());
  return 0;
}

int run_cocycle(const Options& opt, const std::string& space,
                const std::string& scales_spec, int depth) {
  FiltrationSpace X = make_space(space, depth);
  std::vector<double> scales = parse_range(scales_spec);
  SeparationVerdict v = detect_decomposition(X, scales, depth, opt.margin);
  if (v.outcome != SeparationOutcome::witness_found) {
    std::cerr << "inconclusive: no separated decomposition at the tested "
                 "scales, no cocycle to emit\n";
    return 1;
  }
  Truncation t = X.truncation(depth);
  Cochain f = cocycle_from_decomposition(*v.witness, t);
  std::ostringstream body;
  body << "degree 1\n";
  std::vector<std::string> lines;
  for (const auto& [key, val] : f.values) {
    std::ostringstream ls;
    ls << t.label(key[0]) << ' ' << t.label(key[1]) << ' ' << val << '\n';
    lines.push_back(ls.str());
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& l : lines) body << l;
  json rep{{"subcommand", "cohomology cocycle"},
           {"space", space},
           {"depth", depth},
           {"support_size", f.values.size()},
           {"witness", witness_json(*v.witness)}};
  if (opt.as_json) {
    rep["cochain"] = body.str();
    std::cout << rep.dump(2) << "\n";
  } else {
    std::cout << body.str();
  }
  return 0;
}

int run_triviality(const Options& opt, const std::string& space,
                   const std::string& cochain_path,
                   const std::string& scales_spec, int depth) {
  FiltrationSpace X = make_space(space, depth);
  std::vector<double> scales = parse_range(scales_spec);
  Cochain f = load_cochain(cochain_path, X);
  TrivialityResult res = triviality_test(f, X, scales, depth, opt.margin);
  json rep{{"subcommand", "cohomology triviality"},
           {"space", space},
           {"depth", depth},
           {"trivial", res.trivial}};
  std::ostringstream text;
  if (res.trivial) {
    text << "trivial: a bounded potential g with delta g = f exists\n";
    rep["potential_support"] = res.potential.values.size();
  } else {
    text << "nontrivial: induces a separated decomposition\n";
    rep["witness"] = witness_json(*res.witness);
  }
  emit(opt, rep, text.str());
  return 0;
}

int run_ends(const Options& opt, const std::string& group,
             const std::string& inner_spec, int outer) {
  GroupOracle G = builtin_group(group);
  EndsEstimate e = ends_estimate(G, parse_int_range(inner_spec), outer);
  json counts = json::array();
  std::ostringstream text;
  text << "group " << group << ", outer radius " << outer << "\n";
  for (auto [n, c] : e.counts) {
    counts.push_back({{"inner", n}, {"components", c}});
    text << "  inner " << n << ": " << c << " components\n";
  }
  text << "verdict: " << to_string(e.verdict) << "\n";
  json rep{{"subcommand", "ends"},
           {"group", group},
           {"outer", outer},
           {"counts", counts},
           {"verdict", to_string(e.verdict)}};
  emit(opt, rep, text.str());
  return e.verdict == EndsVerdict::inconclusive ? 1 : 0;
}

int run_corona(const Options& opt, const std::string& group, int budget) {
  GroupOracle G = builtin_group(group);
  std::vector<int> inner;
  for (int k = 1; k <= budget; ++k) inner.push_back(k);
  int outer = budget + 4;
  int cross_depth = std::min(budget, 6);
  CoronaVerdict v =
      corona_verdict(G, inner, outer, cross_depth, {1, 2, 3}, opt.margin);
  json rep{{"subcommand", "corona"},
           {"group", group},
           {"budget", budget},
           {"outer", outer},
           {"ends_verdict", to_string(v.ends.verdict)},
           {"connected", v.connected},
           {"cross_check_depth", v.cross_check_depth},
           {"cross_check_agrees", v.coherent}};
  std::ostringstream text;
  text << "group " << group << ": corona "
       << (v.connected ? "connected" : "disconnected") << " (ends verdict "
       << to_string(v.ends.verdict) << ", separation cross-check "
       << (v.coherent ? "agrees" : "DISAGREES") << ")\n";
  emit(opt, rep, text.str());
  return v.coherent ? 0 : 1;
}

int run_verify(const Options& opt, int max_ground, int max_generators) {
  LemmaReport r = verify_lemmas(static_cast<std::size_t>(max_ground),
                                static_cast<std::size_t>(max_generators));
  json rep{{"subcommand", "coarse-algebra verify"},
           {"max_ground", max_ground},
           {"max_generators", max_generators},
           {"closure_checks", r.closure_checks},
           {"coproduct_checks", r.coproduct_checks},
           {"idempotence_checks", r.idempotence_checks},
           {"closure_law_checks", r.closure_law_checks},
           {"passed", r.passed},
           {"counterexamples", r.counterexamples}};
  std::ostringstream text;
  text << "image-closure checks: " << r.closure_checks << "\n"
       << "coproduct containment checks: " << r.coproduct_checks << "\n"
       << "idempotence checks: " << r.idempotence_checks << "\n"
       << "closure-law checks: " << r.closure_law_checks << "\n"
       << (r.passed ? "PASS: no counterexamples\n" : "FAIL:\n");
  for (const auto& c : r.counterexamples) text << "  " << c << "\n";
  emit(opt, rep, text.str());
  return r.passed ? 0 : 1;
}

int run_spaces(const Options& opt) {
  json rep{{"subcommand", "spaces"},
           {"spaces", builtin_space_names()},
           {"groups", builtin_group_names()}};
  std::ostringstream text;
  text << "spaces:\n";
  for (const auto& s : builtin_space_names()) text << "  " << s << "\n";
  text << "groups:\n";
  for (const auto& g : builtin_group_names()) text << "  " << g << "\n";
  emit(opt, rep, text.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coarse-geometry analysis toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // allow the global flags after a subcommand name
  Options opt;
  app.add_flag("--json", opt.as_json, "emit a JSON report");
  app.add_option("--seed", opt.seed, "seed for randomized corpora");
  app.add_option("--margin", opt.margin, "persistence margin (default 1)");

  auto* spaces = app.add_subcommand("spaces", "list builtin spaces and groups");

  auto* analyze = app.add_subcommand("analyze", "asymptotic analyses");
  auto* conn = analyze->add_subcommand("connectivity",
                                       "search for a separated decomposition");
  std::string conn_space, conn_scales = "1..10";
  int conn_depth = 100;
  conn->add_option("--space", conn_space, "space spec")->required();
  conn->add_option("--scales", conn_scales, "scale range a..b");
  conn->add_option("--depth", conn_depth, "truncation depth");
  analyze->require_subcommand(1);

  auto* cop = app.add_subcommand("coproduct", "emit a coarse coproduct");
  std::string cop_left, cop_right, cop_mode = "binary";
  int cop_depth = 30, cop_level = -1;
  cop->add_option("--left", cop_left, "left space spec")->required();
  cop->add_option("--right", cop_right, "right space spec")->required();
  cop->add_option("--mode", cop_mode, "binary | sum | box")
      ->check(CLI::IsMember({"binary", "sum", "box"}));
  cop->add_option("--depth", cop_depth, "component depth");
  cop->add_option("--level", cop_level, "emitted truncation level");

  auto* exc = app.add_subcommand("excisive", "omega-excisive profile");
  std::string exc_space, exc_a, exc_b, exc_radii = "1..10", exc_depths = "50,100";
  exc->add_option("--space", exc_space, "space spec")->required();
  exc->add_option("--A", exc_a, "subset spec for A")->required();
  exc->add_option("--B", exc_b, "subset spec for B")->required();
  exc->add_option("--radii", exc_radii, "radius range a..b");
  exc->add_option("--depths", exc_depths, "comma-separated depths");

  auto* coh = app.add_subcommand("cohomology", "degree-1 coarse cohomology");
  auto* coc = coh->add_subcommand("cocycle", "emit the witness cocycle");
  std::string coc_space, coc_scales = "1..5";
  int coc_depth = 60;
  coc->add_option("--space", coc_space, "space spec")->required();
  coc->add_option("--scales", coc_scales, "scale range a..b");
  coc->add_option("--depth", coc_depth, "truncation depth");
  auto* trv = coh->add_subcommand("triviality", "decide a supplied cocycle");
  std::string trv_space, trv_cochain, trv_scales = "1..5";
  int trv_depth = 60;
  trv->add_option("--space", trv_space, "space spec")->required();
  trv->add_option("--cochain", trv_cochain, "cochain file")->required();
  trv->add_option("--scales", trv_scales, "scale range a..b");
  trv->add_option("--depth", trv_depth, "truncation depth");
  coh->require_subcommand(1);

  auto* ends = app.add_subcommand("ends", "ends of a finitely generated group");
  std::string ends_group, ends_inner = "1..6";
  int ends_outer = 20;
  ends->add_option("--group", ends_group, "group name")->required();
  ends->add_option("--inner", ends_inner, "inner radius range a..b");
  ends->add_option("--outer", ends_outer, "outer radius");

  auto* corona = app.add_subcommand("corona", "corona connectedness verdict");
  std::string corona_group;
  int corona_budget = 6;
  corona->add_option("--group", corona_group, "group name")->required();
  corona->add_option("--budget", corona_budget, "inner radius budget");

  auto* alg = app.add_subcommand("coarse-algebra", "finite coarse structures");
  auto* ver = alg->add_subcommand("verify", "exhaustive lemma verification");
  int ver_ground = 3, ver_gens = 2;
  ver->add_option("--max-ground", ver_ground, "ground size bound");
  ver->add_option("--max-generators", ver_gens, "generator count bound");
  alg->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help exits 0, parse errors are input errors
  }

  try {
    if (*spaces) return run_spaces(opt);
    if (*conn) return run_connectivity(opt, conn_space, conn_scales, conn_depth);
    if (*cop)
      return run_coproduct(opt, cop_left, cop_right, cop_mode, cop_depth,
                           cop_level);
    if (*exc)
      return run_excisive(opt, exc_space, exc_a, exc_b, exc_radii, exc_depths);
    if (*coc) return run_cocycle(opt, coc_space, coc_scales, coc_depth);
    if (*trv)
      return run_triviality(opt, trv_space, trv_cochain, trv_scales, trv_depth);
    if (*ends) return run_ends(opt, ends_group, ends_inner, ends_outer);
    if (*corona) return run_corona(opt, corona_group, corona_budget);
    if (*ver) return run_verify(opt, ver_ground, ver_gens);
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 2;
}

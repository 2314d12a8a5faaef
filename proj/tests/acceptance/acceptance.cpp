// One PASS/FAIL line per acceptance criterion; nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "commands.hpp"
#include "support.hpp"
#include "ucqlab/extension.hpp"
#include "ucqlab/hyperclique.hpp"
#include "ucqlab/hypergraph.hpp"
#include "ucqlab/oracle.hpp"
#include "ucqlab/prepared.hpp"
#include "ucqlab/qc.hpp"
#include "ucqlab/reduction.hpp"
#include "ucqlab/structures.hpp"
#include "ucqlab/tripartite.hpp"
#include "ucqlab/union_eval.hpp"
#include "ucqlab/workload.hpp"

namespace fs = std::filesystem;
using namespace ucq;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      details.push_back("failed: " + what);
    }
  }
  void note(const std::string& what) { details.push_back(what); }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string data(const std::string& name) { return testing::source_path("tests/data/" + name); }

std::string fixed(double v, int digits) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

struct CliRun {
  int code;
  nlohmann::json report;
  double seconds;
};

CliRun classify_file(const std::string& path) {
  std::ostringstream out, err;
  auto t0 = Clock::now();
  int code = cli::cmd_classify(path, false, out, err);
  double secs = seconds_since(t0);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(out.str());
  } catch (const std::exception&) {
  }
  return {code, j, secs};
}

bool has_remaining_tetra(const nlohmann::json& j) {
  for (const auto& s : j.value("remaining_structures", nlohmann::json::array()))
    if (s.get<std::string>().rfind("Tetra", 0) == 0) return true;
  return false;
}

// 1. Golden classification through the CLI entry point.
Outcome criterion_golden() {
  Outcome o;
  auto timed = [&](const CliRun& r, const std::string& name) {
    o.check(r.seconds < 1.0, name + " took " + fixed(r.seconds, 3) + " s");
  };

  CliRun e35 = classify_file(data("free_path_union.ucq"));
  timed(e35, "free-path union");
  o.check(e35.code == cli::kIntractable && e35.report["verdict"] == "IntractableUnderVUTD", "free-path union verdict");
  o.check(e35.report["witness"]["source"] == "FreePath(x,z,y)", "free-path union structure");
  o.check(e35.report["witness"]["unprovided"] == "z", "free-path union unprovided variable");

  CliRun e33 = classify_file(data("cycle_union.ucq"));
  timed(e33, "cycle union");
  o.check(e33.code == cli::kIntractable && e33.report["verdict"] == "IntractableUnderVUTD", "cycle union verdict");
  o.check(e33.report["witness"]["source"] == "Cycle(x,y,z)", "cycle union structure");
  o.check(e33.report["witness"]["unprovided"] == "y", "cycle union unprovided variable");

  for (const char* file : {"tetra_union_k4.ucq", "tetra_union_k5.ucq"}) {
    CliRun r = classify_file(data(file));
    timed(r, file);
    const auto& res = r.report["resolution"];
    o.check(r.code == cli::kIntractable, std::string(file) + " verdict");
    o.check(res["steps"].get<int>() >= 1, std::string(file) + " adds a virtual atom");
    o.check(has_remaining_tetra(r.report), std::string(file) + " leaves a tetra");
    if (res["steps"].get<int>() >= 1) o.note(std::string(file) + ": virtual atom on " + res["virtual_atoms"][0]["motivation"].get<std::string>());
  }

  for (int c = 1; c <= 2; ++c) {
    const fs::path file = fs::temp_directory_path() / ("ucqlab_qc_" + std::to_string(c) + ".ucq");
    { std::ofstream(file) << print_query(generate_qc(c)) << "\n"; }
    CliRun r = classify_file(file.string());
    timed(r, "qc c=" + std::to_string(c));
    // Four disjuncts are outside the classifier's scope; the partial report still carries resolution.
    o.check(r.report.contains("resolution") && r.report["resolution"]["steps"] == 0,
            "qc c=" + std::to_string(c) + " admits no resolution step");
    o.check(resolve(generate_qc(c)).steps == 0, "qc c=" + std::to_string(c) + " resolve()");
    fs::remove(file);
  }
  o.note("free-path union alpha " + e35.report["witness"]["alpha"].get<std::string>() + ", cycle union alpha " +
         e33.report["witness"]["alpha"].get<std::string>());
  return o;
}

std::size_t max_atoms(const UnionQuery& u) {
  std::size_t m = 0;
  for (const auto& q : u.disjuncts()) m = std::max(m, q.body().size());
  return m;
}

// 2. Enumeration equals the oracle on random tractable unions.
Outcome criterion_enumeration() {
  Outcome o;
  auto t0 = Clock::now();
  testing::Rng rng(20240601);
  testing::CqShape plain;
  plain.max_atoms = 5;
  plain.max_arity = 3;
  plain.max_variables = 5;
  plain.relations = 5;
  plain.constant_rate = 0.05;
  plain.constants = 8;
  testing::CqShape provider = plain;
  provider.max_atoms = 3;
  provider.max_variables = 4;
  provider.constant_rate = 0;

  std::size_t instances = 0, with_steps = 0, mismatches = 0, duplicates = 0, literal_checked = 0, answers = 0;
  std::size_t attempts = 0;
  while (instances < 1200 && attempts < 200000) {
    ++attempts;
    UnionQuery u = attempts % 2 ? testing::random_provider_union(rng, provider) : testing::random_union(rng, plain, 2);
    if (max_atoms(u) > 5) continue;
    Classification c;
    try {
      c = classify_union(u);
    } catch (const UnsupportedScope&) {
      continue;
    }
    if (c.verdict != Verdict::kTractable) continue;
    ++instances;
    with_steps += c.resolved.steps > 0 ? 1 : 0;
    Database d = testing::random_database(rng, u, 2 + instances % 7, 4 + instances % 20);
    auto stream = enumerate_union(c.resolved, d);
    bool dup = false;
    auto rows = testing::drain_unique(*stream, d, &dup);
    answers += rows.size();
    if (dup) {
      if (duplicates++ == 0) o.note("duplicate on " + print_query(u));
    }
    const testing::RowSet got(rows.begin(), rows.end());
    const testing::RowSet expected = testing::decode_all(d, brute_force_answers(u, d));
    bool same = got == expected;
    std::size_t vars = 0;
    for (const auto& q : u.disjuncts()) vars = std::max(vars, q.num_variables());
    if (vars <= 5) {
      ++literal_checked;
      same = same && expected == testing::literal_answers(u, d);
    }
    if (!same && mismatches++ == 0) o.note("mismatch on " + print_query(u));
  }
  const double secs = seconds_since(t0);
  o.check(instances >= 1000, "only " + std::to_string(instances) + " tractable instances");
  o.check(mismatches == 0, std::to_string(mismatches) + " mismatches");
  o.check(duplicates == 0, std::to_string(duplicates) + " instances with duplicates");
  o.check(with_steps >= 200, "only " + std::to_string(with_steps) + " instances needed resolution");
  o.check(secs < 60, "took " + fixed(secs, 1) + " s");
  o.note(std::to_string(instances) + " instances (" + std::to_string(with_steps) + " resolved, " +
         std::to_string(literal_checked) + " also against literal semantics), " + std::to_string(answers) +
         " answers, " + fixed(secs, 1) + " s");
  return o;
}

TripartiteGraph mixed_graph(std::mt19937_64& rng, std::size_t max1, std::size_t max2, std::size_t max3, int i) {
  auto pick = [&](std::size_t hi) { return std::uniform_int_distribution<std::size_t>(1, hi)(rng); };
  const std::size_t n1 = pick(max1), n2 = pick(max2), n3 = pick(max3);
  const double p = std::uniform_real_distribution<double>(0.01, 0.25)(rng);
  switch (i % 3) {
    case 0: return planted_triangle_graph(n1, n2, n3, p, rng);
    case 1: return triangle_free_graph(n1, n2, n3, p, rng);
    default: return random_graph(n1, n2, n3, p, rng);
  }
}

struct ReductionCase {
  std::string name;
  UnionQuery query;
  std::size_t max1, max2, max3;
};

// 3. Triangle existence matches witness answers on the reduction databases.
Outcome criterion_reduction() {
  Outcome o;
  auto t0 = Clock::now();
  auto file = [](const std::string& name) {
    std::ifstream in(data(name));
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_query(ss.str());
  };
  std::vector<ReductionCase> cases = {
      {"free-path union", file("free_path_union.ucq"), 30, 30, 100},
      {"cycle union", file("cycle_union.ucq"), 30, 30, 100},
      {"free path, head connector", parse_query("Q(x,z) :- R(x,y), S(y,z)."), 30, 30, 100},
      {"long free path", parse_query("Q(x,w) :- R(x,y), S(y,z), T(z,w)."), 30, 30, 100},
      {"free path with tail", parse_query("Q(x,z,u) :- R(x,y), S(y,z), T(z,u)."), 30, 30, 100},
      {"boolean triangle", parse_query("Q() :- R(x,y), S(y,z), T(z,x)."), 30, 30, 100},
      {"full triangle", parse_query("Q(x,y,z) :- R(x,y), S(y,z), T(z,x)."), 30, 30, 100},
      {"four-cycle", parse_query("Q(a,b,c,d) :- R(a,b), S(b,c), T(c,d), U(d,a)."), 30, 30, 100},
      {"five-cycle", parse_query("Q() :- R(a,b), S(b,c), T(c,d), U(d,e), W(e,a)."), 30, 30, 100},
      {"tetra", parse_query("Q() :- R(a,b,c), S(a,b,d), T(a,c,d), U(b,c,d)."), 12, 12, 100},
      {"free path vs partner", parse_query("Q1(x,y) :- R(x,z), S(z,y).\nQ2(x,y) :- R(x,w), T(w,y)."), 30, 30, 100},
      {"tetra union k=4", file("tetra_union_k4.ucq"), 12, 12, 100},
      {"tetra union k=5", file("tetra_union_k5.ucq"), 5, 5, 40},
  };
  std::mt19937_64 rng(777);
  std::size_t total = 0, discrepancies = 0, positives = 0, post_checked = 0;
  for (const auto& rc : cases) {
    Classification c;
    try {
      c = classify_union(rc.query);
    } catch (const UnsupportedScope& e) {
      c = e.report();
    }
    if (!c.plan || !c.hard_disjunct || !c.normalized) {
      o.check(false, rc.name + ": no plan (" + c.reason + ")");
      continue;
    }
    const ConjunctiveQuery& q1 = (*c.normalized)[*c.hard_disjunct];
    const bool post = c.conditions && (c.conditions->post_check[0] || c.conditions->post_check[1] || c.conditions->post_check[2]);
    post_checked += post ? 1 : 0;
    std::size_t case_pos = 0, case_bad = 0;
    for (int i = 0; i < 200; ++i) {
      TripartiteGraph g = mixed_graph(rng, rc.max1, rc.max2, rc.max3, i);
      ReductionInstance inst = build_reduction_database(q1, *c.plan, g);
      bool witness = false;
      for (const auto& t : brute_force_answers(*c.normalized, inst.database))
        if (inst.is_witness(t)) {
          witness = true;
          break;
        }
      const bool triangle = triangle_brute_force(g).count > 0;
      case_pos += triangle ? 1 : 0;
      case_bad += witness != triangle ? 1 : 0;
      ++total;
    }
    positives += case_pos;
    discrepancies += case_bad;
    o.check(case_bad == 0, rc.name + ": " + std::to_string(case_bad) + " discrepancies");
    o.check(case_pos > 0 && case_pos < 200, rc.name + ": graphs not mixed");
  }
  o.check(cases.size() - 2 >= 10, "fewer than 10 synthetic queries");
  o.check(post_checked > 0, "no case exercised the free-connector post-check");
  o.note(std::to_string(cases.size()) + " queries x 200 graphs, " + std::to_string(positives) + " with triangles, " +
         std::to_string(post_checked) + " plans using the post-check, " + std::to_string(discrepancies) +
         " discrepancies, " + fixed(seconds_since(t0), 1) + " s");
  return o;
}

// 4. The qc pipeline reports the all-bottom answer exactly on graphs with a triangle.
Outcome criterion_qc() {
  Outcome o;
  std::mt19937_64 rng(4242);
  for (int c = 1; c <= 2; ++c) {
    std::size_t bad = 0, positives = 0;
    const auto bottom_text = qc_bottom_answer(c);
    for (int i = 0; i < 200; ++i) {
      TripartiteGraph g = mixed_graph(rng, 6, 6, c == 1 ? 60 : 200, i);
      Database d = qc_database_from_graph(c, g);
      auto stream = qc_evaluate(c, d);
      bool dup = false;
      auto rows = testing::drain_unique(*stream, d, &dup);
      const bool reported = std::find(rows.begin(), rows.end(), bottom_text) != rows.end();
      const bool triangle = triangle_brute_force(g).count > 0;
      positives += triangle ? 1 : 0;
      bad += (reported != triangle || dup) ? 1 : 0;
    }
    o.check(bad == 0, "c=" + std::to_string(c) + ": " + std::to_string(bad) + " discrepancies");
    o.check(positives > 0 && positives < 200, "c=" + std::to_string(c) + ": graphs not mixed");
    o.note("c=" + std::to_string(c) + ": 200 graphs, " + std::to_string(positives) + " with triangles");
  }
  // |Q2(D)| = (|V1||V2|)^c at |V1| = |V2| = 3.
  TripartiteGraph g = random_graph(3, 3, 5, 0.5, rng);
  for (int c = 1; c <= 2; ++c) {
    Database d = qc_database_from_graph(c, g);
    const std::size_t count = brute_force_answers(generate_qc(c)[1], d).size();
    const auto expected = static_cast<std::size_t>(std::pow(9.0, c));
    o.check(count == expected, "c=" + std::to_string(c) + ": |Q2(D)| = " + std::to_string(count));
    o.note("c=" + std::to_string(c) + ": |Q2(D)| = " + std::to_string(count) + " = (3*3)^" + std::to_string(c));
  }
  return o;
}

std::size_t block_triangles(const std::vector<GraphBlock>& blocks) {
  std::size_t n = 0;
  for (const auto& b : blocks) n += triangle_brute_force(b.graph).count;
  return n;
}

// 5. Splitting keeps every triangle exactly once.
Outcome criterion_splitting() {
  Outcome o;
  std::mt19937_64 rng(5150);
  std::size_t bad3 = 0, bad12 = 0, triangles = 0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
    const std::size_t n3 = std::uniform_int_distribution<std::size_t>(1, 150)(rng);
    TripartiteGraph g = random_graph(n, n, n3, std::uniform_real_distribution<double>(0.05, 0.5)(rng), rng);
    const std::size_t expected = triangle_brute_force(g).count;
    triangles += expected;
    const double beta = std::uniform_real_distribution<double>(0.3, 1.0)(rng);
    const double alpha = std::uniform_real_distribution<double>(0.05, beta)(rng);
    bad3 += block_triangles(split_v3(g, alpha, beta)) != expected ? 1 : 0;
  }
  for (int i = 0; i < 200; ++i) {
    TripartiteGraph g = mixed_graph(rng, 20, 20, 60, i);
    const std::size_t expected = triangle_brute_force(g).count;
    const std::size_t block = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    bad12 += block_triangles(split_v1v2(g, block)) != expected ? 1 : 0;
  }
  o.check(bad3 == 0, "split_v3: " + std::to_string(bad3) + " graphs changed count");
  o.check(bad12 == 0, "split_v1v2: " + std::to_string(bad12) + " graphs changed count");
  o.note("400 graphs, " + std::to_string(triangles) + " triangles through split_v3");
  return o;
}

// 6. Triangle count equals k-hyperclique count.
Outcome criterion_hyperclique() {
  Outcome o;
  std::mt19937_64 rng(6060);
  for (std::size_t k : {3u, 4u}) {
    std::size_t bad = 0, total = 0;
    for (int i = 0; i < 100; ++i) {
      const std::size_t side = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
      const std::size_t n3 = k == 4 ? side * side : std::uniform_int_distribution<std::size_t>(1, 25)(rng);
      TripartiteGraph g = random_graph(std::uniform_int_distribution<std::size_t>(1, 6)(rng),
                                       std::uniform_int_distribution<std::size_t>(1, 6)(rng), n3,
                                       std::uniform_real_distribution<double>(0.1, 0.6)(rng), rng);
      const std::size_t triangles = triangle_brute_force(g).count;
      total += triangles;
      bad += brute_force_hyperclique(hyperclique_encode(g, k), k).count != triangles ? 1 : 0;
    }
    o.check(bad == 0, "k=" + std::to_string(k) + ": " + std::to_string(bad) + " mismatches");
    o.note("k=" + std::to_string(k) + ": 100 graphs, " + std::to_string(total) + " triangles");
  }
  return o;
}

double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(ys.size());
  double num = 0, den = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  return num / den;
}

// 7. Linear preprocessing and flat delay over a 16x size sweep. Every size sits
// past the L2 cache so the sweep compares one memory regime; a sweep straddling
// it mostly times the cold first answer after an in-cache preparation.
Outcome criterion_delay() {
  Outcome o;
  const UnionQuery u = parse_query("Q(x,y) :- R(x,y), S(y,z).");
  std::vector<std::size_t> sizes;
  for (std::size_t size = std::size_t{1} << 17; size <= (std::size_t{1} << 21); size <<= 1) sizes.push_back(size);
  const std::vector<cli::BenchRow> rows = cli::bench_sweep(u, sizes, 7, 5);
  std::vector<double> log_size, log_pre;
  for (const auto& row : rows) {
    log_size.push_back(std::log(static_cast<double>(row.database_tuples)));
    log_pre.push_back(std::log(row.preprocessing_ns));
  }
  const double exponent = slope(log_size, log_pre);
  const double gap_ratio = rows.back().max_gap_ns / rows.front().max_gap_ns;
  const double raw_ratio = rows.back().raw_max_gap_ns / rows.front().raw_max_gap_ns;
  o.check(exponent >= 0.85 && exponent <= 1.2, "preprocessing exponent " + fixed(exponent, 3));
  o.check(gap_ratio <= 3.0, "max-gap ratio " + fixed(gap_ratio, 2));
  std::string doublings;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double r = rows[i].preprocessing_ns / rows[i - 1].preprocessing_ns;
    o.check(r >= 1.3 && r <= 2.7, "doubling " + std::to_string(i) + " scaled preprocessing by " + fixed(r, 2));
    doublings += (i > 1 ? " " : "") + fixed(r, 2);
  }
  std::size_t steps = 0;
  for (const auto& r : rows) steps = std::max(steps, r.max_steps_per_answer);
  o.check(steps <= 1, "more than one step per answer");
  o.note("preprocessing exponent " + fixed(exponent, 3) + " over " + std::to_string(rows.front().database_tuples) +
         ".." + std::to_string(rows.back().database_tuples) + " tuples, per-doubling factors " + doublings);
  o.note("max gap " + fixed(rows.front().max_gap_ns, 0) + " -> " + fixed(rows.back().max_gap_ns, 0) + " ns (ratio " +
         fixed(gap_ratio, 2) + ", per-answer minimum over 5 runs); single-run max gap ratio " + fixed(raw_ratio, 2) +
         "; median gap " + fixed(rows.back().median_gap_ns, 0) + " ns; max steps per answer " + std::to_string(steps));
  return o;
}

ConjunctiveQuery query_of(std::size_t n, const std::vector<VarMask>& edges, VarMask free) {
  std::vector<Atom> body;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    Atom a{"E" + std::to_string(e), {}};
    for (std::size_t v : members(edges[e])) a.args.push_back(Term::variable("v" + std::to_string(v)));
    body.push_back(a);
  }
  std::vector<std::string> head;
  for (std::size_t v = 0; v < n; ++v)
    if (contains(free, v)) head.push_back("v" + std::to_string(v));
  return ConjunctiveQuery("Q", head, body);
}

std::vector<std::set<int>> edge_sets(const std::vector<VarMask>& edges) {
  std::vector<std::set<int>> out;
  for (VarMask e : edges) {
    std::set<int> s;
    for (std::size_t v : members(e)) s.insert(static_cast<int>(v));
    out.push_back(s);
  }
  return out;
}

// 8. Acyclicity vs cycle/tetra definition, structures vs free-connexity.
Outcome criterion_structural() {
  Outcome o;
  std::size_t hypergraphs = 0, queries = 0, bad_acyclic = 0, bad_structures = 0, cyclic = 0;
  auto examine = [&](std::size_t n, const std::vector<VarMask>& edges, const std::vector<VarMask>& frees) {
    VarMask used = 0;
    for (VarMask e : edges) used |= e;
    if (used != (VarMask{1} << n) - 1) return;  // isolated vertices are not query variables
    ++hypergraphs;
    std::vector<std::string> names;
    for (std::size_t v = 0; v < n; ++v) names.push_back("v" + std::to_string(v));
    const Hypergraph h = make_hypergraph(names, edges);
    const bool acyclic = is_acyclic(h);
    cyclic += acyclic ? 0 : 1;
    if (acyclic == is_cyclic_by_definition(h) || acyclic != testing::naive_acyclic(edge_sets(edges))) ++bad_acyclic;
    for (VarMask free : frees) {
      ++queries;
      const ConjunctiveQuery q = query_of(n, edges, free);
      if (find_difficult_structures(q).empty() != is_free_connex(q)) ++bad_structures;
    }
  };
  // Exhaustive: every edge set on up to 4 vertices, every free set.
  for (std::size_t n = 1; n <= 4; ++n) {
    const std::size_t subsets = (std::size_t{1} << n) - 1;
    std::vector<VarMask> frees;
    for (VarMask f = 0; f <= subsets; ++f) frees.push_back(f);
    for (std::uint64_t pick = 1; pick < (std::uint64_t{1} << subsets); ++pick) {
      std::vector<VarMask> edges;
      for (std::size_t s = 0; s < subsets; ++s)
        if ((pick >> s) & 1U) edges.push_back(static_cast<VarMask>(s + 1));
      examine(n, edges, frees);
    }
  }
  const std::size_t exhaustive = hypergraphs;
  // Sampled: 5 to 7 vertices, a few edges of assorted sizes.
  std::mt19937_64 rng(8080);
  for (std::size_t n = 5; n <= 7; ++n) {
    for (int i = 0; i < 6000; ++i) {
      const std::size_t m = std::uniform_int_distribution<std::size_t>(2, n + 2)(rng);
      std::vector<VarMask> edges;
      for (std::size_t e = 0; e < m; ++e) {
        VarMask mask = 0;
        const std::size_t size = std::uniform_int_distribution<std::size_t>(2, std::min<std::size_t>(n - 1, 4))(rng);
        while (static_cast<std::size_t>(popcount(mask)) < size)
          mask |= bit(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
        edges.push_back(mask);
      }
      std::vector<VarMask> frees;
      for (int f = 0; f < 4; ++f) frees.push_back(std::uniform_int_distribution<VarMask>(0, (VarMask{1} << n) - 1)(rng));
      examine(n, edges, frees);
    }
  }
  o.check(bad_acyclic == 0, std::to_string(bad_acyclic) + " acyclicity disagreements");
  o.check(bad_structures == 0, std::to_string(bad_structures) + " structure/free-connex disagreements");
  o.note(std::to_string(exhaustive) + " hypergraphs on <=4 vertices exhaustively, " +
         std::to_string(hypergraphs - exhaustive) + " sampled on 5..7 vertices (" + std::to_string(cyclic) +
         " cyclic), " + std::to_string(queries) + " free-variable choices");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 golden classification", criterion_golden},
      {"2 enumeration matches oracle", criterion_enumeration},
      {"3 reduction soundness", criterion_reduction},
      {"4 qc family end-to-end", criterion_qc},
      {"5 splitting soundness", criterion_splitting},
      {"6 hyperclique correspondence", criterion_hyperclique},
      {"7 delay/preprocessing contract", criterion_delay},
      {"8 structural self-consistency", criterion_structural},
  };
  bool all = true;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    auto t0 = Clock::now();
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.details.push_back(std::string("exception: ") + e.what());
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << name << " (" << fixed(seconds_since(t0), 1) << " s)\n";
    for (const auto& d : o.details) std::cout << "     " << d << "\n";
    std::cout.flush();
  }
  return all ? 0 : 1;
}

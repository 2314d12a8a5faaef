#include <gtest/gtest.h>

#include "support.hpp"
#include "ucqlab/extension.hpp"
#include "ucqlab/oracle.hpp"
#include "ucqlab/reduction.hpp"

namespace ucq {
namespace {

const char* kFreePathUnion = "Q1(x,y,w) :- R1(x,z), R2(z,y), R3(y,w).\nQ2(x,y,w) :- R1(x,t1), R2(t2,y), R3(w,t3).";

bool has_witness(const UnionQuery& u, const ReductionInstance& inst) {
  for (const auto& t : brute_force_answers(u, inst.database))
    if (inst.is_witness(t)) return true;
  return false;
}

TEST(ReductionSets, FreePathAndCycle) {
  UnionQuery u = parse_query(kFreePathUnion);
  ReductionPlan p = choose_reduction_sets(u[0], &u[1], DifficultStructure{StructureKind::kFreePath, {"x", "z", "y"}}, "z");
  EXPECT_EQ(p.x_sets, (std::vector<std::vector<std::string>>{{"x"}, {"y"}, {"z"}}));
  EXPECT_EQ(p.alpha_den, 3u);
  const ConjunctiveQuery cyc = parse_query("Q(x,y,z,w) :- R(x,y), S(y,z), T(z,w), U(w,x).")[0];
  ReductionPlan c = choose_reduction_sets(cyc, nullptr, DifficultStructure{StructureKind::kChordlessCycle, {"x", "y", "z", "w"}}, "y");
  EXPECT_EQ(c.x_sets.back(), (std::vector<std::string>{"y"}));
  EXPECT_EQ(c.ell(), 3u);
}

TEST(ReductionSets, AlphaDenominator) {
  const ConjunctiveQuery two = parse_query("Q(a,b) :- R(a,b).")[0];
  EXPECT_EQ(alpha_denominator(nullptr, 3), 1u);
  EXPECT_EQ(alpha_denominator(&two, 3), 2u);
  EXPECT_EQ(alpha_denominator(&two, 5), 3u);
}

TEST(Conditions, DetectViolations) {
  UnionQuery u = parse_query(kFreePathUnion);
  ReductionPlan bad;
  bad.x_sets = {{"x"}, {"y"}, {"x"}};
  ConditionReport r = verify_reduction_conditions(u[0], &u[1], bad);
  EXPECT_FALSE(r.well_formed);
  EXPECT_FALSE(r.problem.empty());
  ReductionPlan covered;
  covered.x_sets = {{"x"}, {"z"}, {"y"}};
  covered.alpha_den = 3;
  EXPECT_FALSE(verify_reduction_conditions(u[0], &u[1], covered).all());
  // y is free in the partner, so the partner maps onto it.
  ReductionPlan provided;
  provided.x_sets = {{"x"}, {"z"}, {"y"}};
  EXPECT_FALSE(verify_reduction_conditions(u[0], &u[1], provided).partner_bounded);
}

TEST(Conditions, FreeConnectorNeedsPostCheck) {
  // The cycle's x–z edge is only realized through the head atom.
  const ConjunctiveQuery q = parse_query("Q(x,z) :- R(x,y), S(y,z).")[0];
  ReductionPlan p;
  p.x_sets = {{"x"}, {"z"}, {"y"}};
  ConditionReport r = verify_reduction_conditions(q, nullptr, p);
  EXPECT_TRUE(r.all());
  EXPECT_TRUE(r.free_connector_used);
  EXPECT_TRUE(r.post_check[kEdge12]);
}

TEST(Database, TaggedValuesAndBottom) {
  EXPECT_EQ(tagged_value("x", "3"), "x:3");
  UnionQuery u = parse_query(kFreePathUnion);
  Classification c = classify_union(u);
  TripartiteGraph g;
  g.n1 = g.n2 = 1;
  g.n3 = 2;
  g.e12 = {{0, 0}};
  g.e13 = {{0, 1}};
  g.e23 = {{0, 1}};
  ReductionInstance inst = build_reduction_database(u[0], *c.plan, g);
  EXPECT_TRUE(has_witness(u, inst));
  bool saw_bottom = false;
  for (const auto& [name, rel] : inst.database.relations())
    for (std::size_t i = 0; i < rel.size(); ++i)
      for (const auto& v : inst.database.decode(rel.tuple(i))) saw_bottom |= v == "w:" + std::string(kBottom);
  EXPECT_TRUE(saw_bottom);
  EXPECT_FALSE(inst.is_witness(std::vector<std::string>{"t1:0", "y:0", "w:⊥"}));
}

TEST(Database, SoundOnSmallGraphs) {
  std::mt19937_64 rng(91);
  for (const char* text : {kFreePathUnion,
                           "Q1(x,y,z) :- R1(x,y), R2(y,z), R3(z,x).\nQ2(x,y,z) :- R1(x,t1), R2(t2,y), R3(z,t3)."}) {
    UnionQuery u = parse_query(text);
    Classification c = classify_union(u);
    ASSERT_TRUE(c.plan.has_value()) << text;
    const auto& q1 = (*c.normalized)[*c.hard_disjunct];
    int positives = 0;
    for (int i = 0; i < 60; ++i) {
      TripartiteGraph g = random_graph(1 + i % 4, 1 + i % 3, 1 + i % 7, 0.35, rng);
      ReductionInstance inst = build_reduction_database(q1, *c.plan, g);
      const bool triangle = triangle_brute_force(g).count > 0;
      EXPECT_EQ(has_witness(*c.normalized, inst), triangle) << text << " graph " << i;
      positives += triangle ? 1 : 0;
    }
    EXPECT_GT(positives, 5);
  }
}

TEST(Database, DigitsCoverLargeThirdPart) {
  // ell = 4 spreads V3 over two digits.
  const ConjunctiveQuery q = parse_query("Q() :- R(a,b,c), S(a,b,d), T(a,c,d), U(b,c,d).")[0];
  ReductionPlan p;
  p.x_sets = {{"a"}, {"b"}, {"c"}, {"d"}};
  ASSERT_TRUE(verify_reduction_conditions(q, nullptr, p).all());
  std::mt19937_64 rng(92);
  for (int i = 0; i < 40; ++i) {
    TripartiteGraph g = random_graph(3, 3, 10, 0.3, rng);
    ReductionInstance inst = build_reduction_database(q, p, g);
    EXPECT_EQ(inst.radix, 3u);
    EXPECT_EQ(inst.top, 4u);  // ceil(10 / 3)
    const bool witness = !brute_force_answers(q, inst.database).empty();
    EXPECT_EQ(witness, triangle_brute_force(g).count > 0);
  }
}

}  // namespace
}  // namespace ucq

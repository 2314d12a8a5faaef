#include <gtest/gtest.h>

#include "support.hpp"
#include "ucqlab/cheater.hpp"
#include "ucqlab/extension.hpp"
#include "ucqlab/oracle.hpp"
#include "ucqlab/prepared.hpp"
#include "ucqlab/union_eval.hpp"

namespace ucq {
namespace {

TEST(UnionEval, TractableExample) {
  UnionQuery u = parse_query("Q1(x,y,w) :- R1(x,z), R2(z,y), R3(y,w).\nQ2(x,y,w) :- R1(x,w), R2(w,y).");
  Database d;
  for (auto [a, b] : {std::pair{"a", "b"}, {"a", "c"}, {"d", "b"}}) d.insert("R1", {a, b});
  for (auto [a, b] : {std::pair{"b", "e"}, {"c", "f"}, {"b", "g"}}) d.insert("R2", {a, b});
  for (auto [a, b] : {std::pair{"e", "h"}, {"f", "i"}, {"g", "g"}}) d.insert("R3", {a, b});
  Classification c = classify_union(u);
  ASSERT_EQ(c.verdict, Verdict::kTractable);
  auto stream = enumerate_union(c.resolved, d);
  bool dup = true;
  auto rows = testing::drain_unique(*stream, d, &dup);
  EXPECT_FALSE(dup);
  EXPECT_EQ(testing::RowSet(rows.begin(), rows.end()), testing::literal_answers(u, d));
  EXPECT_EQ(rows.size(), 10u);
}

TEST(UnionEval, RandomTractableUnions) {
  testing::Rng rng(71);
  testing::CqShape shape;
  shape.max_variables = 4;
  int checked = 0, resolved = 0;
  while (checked < 300) {
    UnionQuery u = checked % 2 ? testing::random_provider_union(rng, shape) : testing::random_union(rng, shape, 2);
    Classification c = classify_union(u);
    if (c.verdict != Verdict::kTractable) continue;
    ++checked;
    resolved += c.resolved.steps > 0 ? 1 : 0;
    Database d = testing::random_database(rng, u, 4, 12);
    auto stream = enumerate_union(c.resolved, d);
    bool dup = true;
    auto rows = testing::drain_unique(*stream, d, &dup);
    EXPECT_FALSE(dup) << print_query(u);
    EXPECT_EQ(testing::RowSet(rows.begin(), rows.end()), testing::literal_answers(u, d)) << print_query(u);
  }
  EXPECT_GT(resolved, 50);
}

TEST(UnionEval, WithoutDeduplicationStillCoversAnswers) {
  UnionQuery u = parse_query("Q1(x) :- R(x).\nQ2(x) :- S(x).");
  Database d;
  d.insert("R", {"a"});
  d.insert("S", {"a"});
  d.insert("S", {"b"});
  auto stream = enumerate_union(resolve(u), d, UnionEvalOptions{false});
  EXPECT_EQ(collect(*stream).size(), 3u);
  auto dedup = enumerate_union(resolve(u), d);
  EXPECT_EQ(collect(*dedup).size(), 2u);
}

TEST(UnionEval, RejectsIntractableUnion) {
  UnionQuery u = parse_query("Q1(x,y) :- R(x,z), S(z,y).\nQ2(x,y) :- T(x,y).");
  Database d;
  EXPECT_THROW(enumerate_union(resolve(u), d), EngineError);
}

}  // namespace
}  // namespace ucq

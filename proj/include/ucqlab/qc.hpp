#pragma once

#include <functional>
#include <optional>

#include "ucqlab/database.hpp"
#include "ucqlab/query.hpp"
#include "ucqlab/stream.hpp"
#include "ucqlab/tripartite.hpp"

namespace ucq {

// The four-disjunct family over R1..R4, R_X_i, R_Y_i with 2c head variables.
UnionQuery generate_qc(int c);

// R1 = E12, R2 = E23, R3 = E13, R4 = {(⊥,...,⊥)}, R_X_i = V1, R_Y_i = V2.
// Vertices are named a<i>, b<j>, c<k>.
Database qc_database_from_graph(int c, const TripartiteGraph& g);
std::vector<std::string> qc_bottom_answer(int c);

using TriangleDetector = std::function<std::optional<Triangle>(const TripartiteGraph&)>;

struct QcOptions {
  TriangleDetector detector;  // defaults to the 2-path join
};

// Streams Q2, Q3, Q4 while deciding the Boolean body of Q1 on the filtered edge
// relations, then streams R4 if that body holds. Deduplicated by the Cheater adapter.
StreamPtr qc_evaluate(int c, const Database& d, QcOptions options = {});

}  // namespace ucq

#pragma once

#include "ucqlab/cheater.hpp"
#include "ucqlab/database.hpp"
#include "ucqlab/extension.hpp"
#include "ucqlab/stream.hpp"

namespace ucq {

struct UnionEvalOptions {
  bool deduplicate = true;  // wrap in the Cheater adapter
};

// Streams the union of a resolved union whose extended disjuncts are all free-connex.
// Plain disjuncts are streamed first; their answers (or auxiliary streams over the
// providers) fill the virtual relations, after which the extended disjuncts are
// prepared and streamed. Answers follow the first disjunct's head order.
StreamPtr enumerate_union(const ResolvedUnion& r, const Database& d, UnionEvalOptions options = {});

}  // namespace ucq

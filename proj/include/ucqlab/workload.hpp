#pragma once

#include <cstdint>

#include "ucqlab/database.hpp"
#include "ucqlab/query.hpp"

namespace ucq {

// Random relations for every symbol of `u`: `tuples` draws per relation with values
// uniform over `domain` integers (named "0".."domain-1"); duplicates collapse.
Database random_database(const UnionQuery& u, std::size_t tuples, std::size_t domain, std::uint64_t seed);

}  // namespace ucq

#include "ucqlab/workload.hpp"

#include <map>
#include <random>

namespace ucq {

Database random_database(const UnionQuery& u, std::size_t tuples, std::size_t domain, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, domain == 0 ? 0 : domain - 1);
  std::map<std::string, std::size_t> arity;
  for (const auto& q : u.disjuncts())
    for (const auto& a : q.body()) arity.emplace(a.relation, a.arity());

  Database d;
  std::vector<Value> ids;
  for (std::size_t v = 0; v < domain; ++v) ids.push_back(d.pool().intern(std::to_string(v)));
  for (const auto& [name, k] : arity) {
    Relation& r = d.add_relation(name, k);
    if (domain == 0) continue;
    Tuple t(k);
    for (std::size_t i = 0; i < tuples; ++i) {
      for (auto& x : t) x = ids[pick(rng)];
      r.insert(t);
    }
  }
  // Constants of the query must be known to the pool to be matched at all.
  for (const auto& q : u.disjuncts())
    for (const auto& a : q.body())
      for (const auto& t : a.args)
        if (t.is_constant()) d.pool().intern(t.text);
  return d;
}

}  // namespace ucq

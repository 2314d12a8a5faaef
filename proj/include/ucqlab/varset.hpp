#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace ucq {

// Vertex sets over a query's variables, indexed by first-occurrence order.
// Queries are fixed-size under data complexity; 64 variables is the ceiling.
using VarMask = std::uint64_t;

inline constexpr std::size_t kMaxVariables = 64;

inline constexpr VarMask bit(std::size_t i) { return VarMask{1} << i; }

inline constexpr bool contains(VarMask set, std::size_t i) { return (set >> i) & 1U; }

inline constexpr bool is_subset(VarMask a, VarMask b) { return (a & ~b) == 0; }

inline int popcount(VarMask m) { return std::popcount(m); }

inline std::vector<std::size_t> members(VarMask m) {
  std::vector<std::size_t> out;
  while (m != 0) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
    m &= m - 1;
  }
  return out;
}

template <typename F>
void for_each_member(VarMask m, F&& f) {
  while (m != 0) {
    f(static_cast<std::size_t>(std::countr_zero(m)));
    m &= m - 1;
  }
}

}  // namespace ucq

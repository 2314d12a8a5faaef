#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ucqlab/hypergraph.hpp"
#include "ucqlab/query.hpp"

namespace ucq {

enum class StructureKind { kFreePath, kChordlessCycle, kTetra };

struct DifficultStructure {
  StructureKind kind;
  std::vector<std::string> variables;  // path order, cycle order, or sorted clique

  std::string to_string() const;
  friend bool operator==(const DifficultStructure&, const DifficultStructure&) = default;
};

enum class ExtendedKind { kHandFan, kFreeHandFan, kFlower, kAlmostTetra };

struct ExtendedStructure {
  ExtendedKind kind;
  std::optional<std::string> center;   // fans and flowers
  std::vector<std::string> variables;  // path/cycle u_1..u_k, or x_1..x_k with x_k last

  std::string to_string() const;
  friend bool operator==(const ExtendedStructure&, const ExtendedStructure&) = default;
};

const char* kind_name(StructureKind k);
const char* kind_name(ExtendedKind k);

// Index-level searches. Vertex names break ties for canonical orientation.
using VertexList = std::vector<std::size_t>;

// Chordless paths with both endpoints in `s`, at least one interior vertex,
// interior outside `s`; each reported once with the smaller-named endpoint first.
std::vector<VertexList> find_s_paths(const Hypergraph& h, VarMask s);
// Chordless cycles of length >= 3 not covered by an edge; rotated to start at the
// smallest name, direction chosen so the second name is below the last.
std::vector<VertexList> find_chordless_cycles(const Hypergraph& h);
// Tetras with at least `min_size` vertices (index order).
std::vector<VertexList> find_tetras(const Hypergraph& h, std::size_t min_size);
// Cyclicity straight from the definition: a chordless cycle or a tetra exists.
bool is_cyclic_by_definition(const Hypergraph& h);
// Acyclic and free of S-paths, decided without the added-edge trick.
bool is_s_connex_by_paths(const Hypergraph& h, VarMask s);

// All free-paths, chordless cycles and tetras, in canonical order. Tetras of size
// three are exactly the uncovered triangles and are reported as cycles.
std::vector<DifficultStructure> find_difficult_structures(const ConjunctiveQuery& q);

// Free-hand-fans and flowers centered at v, and almost-tetras whose last slot is v.
std::vector<ExtendedStructure> find_extended_structures(const ConjunctiveQuery& q,
                                                        const std::string& v);
// Hand-fans centered at v (chordless path, no free/existential requirement).
std::vector<ExtendedStructure> find_hand_fans(const ConjunctiveQuery& q, const std::string& v);

// Smallest first, then kind, then variable names.
bool canonical_less(const DifficultStructure& a, const DifficultStructure& b);

VarMask variable_mask(const ConjunctiveQuery& q, const DifficultStructure& s);
VarMask variable_mask(const ConjunctiveQuery& q, const ExtendedStructure& s);

// One line per structure, used by `classify --explain`.
std::string structure_report(const std::vector<DifficultStructure>& structures);

}  // namespace ucq

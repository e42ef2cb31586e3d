#pragma once

#include "schutz/finite.hpp"
#include "schutz/oracle.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace schutz {

// a^i a*^j with an adjoined zero; K = {a, a*, 0}.
OraclePtr bicyclic();
// The bicyclic monoid itself; K = {a, a*}, σ(a^i a*^j) = i - j in Z.
OraclePtr bicyclic_monoid();
// Polycyclic monoid P_n with zero; K = {a1, a1*, ..., an, an*, 0}.
OraclePtr polycyclic(int n);
// (N, min) and (N, max) with N = {1, 2, ...}; generator i is the number i + 1.
OraclePtr nat_min();
OraclePtr nat_max();

OraclePtr integers();
OraclePtr free_group(int rank);
OraclePtr cyclic_group(std::uint32_t n);
// `generators` are group element indices; inverses are appended when missing.
OraclePtr finite_group(FiniteGroupTable table, std::vector<std::uint32_t> generators,
                       std::string name = "group");

// Box space of Z over the moduli chain m1 | m2 | ...; generators q_i(+1), q_i(-1).
OraclePtr box_space(std::vector<std::int64_t> moduli);
// Box space of the free group of the given rank; levels[i][k] is the
// permutation image of x_k in the i-th quotient (0-based images).
OraclePtr box_space(int rank, std::vector<std::vector<std::vector<std::int32_t>>> levels);

// Inverse semigroup generated by partial bijections on {0..ground-1}.
OraclePtr partial_bijections(int ground, std::vector<PartialMap> generators,
                             std::string name = "pb", std::size_t cap = 1u << 16);
// Symmetric inverse monoid I_n.
OraclePtr symmetric_inverse(int n);
// The closure underlying a partial-bijection oracle.
const FinitePBSemigroup& pb_closure(const SemigroupOracle& oracle);

struct LoopGraph {
  std::uint32_t vertices = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // undirected, u != v
  std::vector<bool> loop;                                       // loop present per vertex
  std::uint32_t root = 0;
};
// Brandt realization: arrows (target <- source) and 0. Generators are the
// vertex loops, both orientations of every edge, then 0.
OraclePtr graph_realization(const LoopGraph& g);

// S x G for a finite group G, coordinatewise.
OraclePtr product_with_group(OraclePtr s, OraclePtr g);
// S with an adjoined identity "<1>" or zero "<0>".
OraclePtr adjoin_identity(OraclePtr s);
OraclePtr adjoin_zero(OraclePtr s);

}  // namespace schutz

#pragma once

#include "schutz/element.hpp"

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace schutz {

// Group given by its Cayley table; element 0 need not be the identity.
struct FiniteGroupTable {
  std::vector<std::vector<std::uint32_t>> table;
  std::vector<std::uint32_t> inverse;
  std::uint32_t identity = 0;

  std::size_t order() const { return table.size(); }
  // Throws InvalidInput unless the table satisfies the group axioms.
  void validate() const;
  static FiniteGroupTable cyclic(std::uint32_t n);
  // Completes `inverse` and `identity` from a bare table.
  static FiniteGroupTable from_table(std::vector<std::vector<std::uint32_t>> table);
};

// Closure of partial bijections on {0..ground-1} under product and star.
struct FinitePBSemigroup {
  int ground = 0;
  std::vector<PartialMap> elements;
  std::vector<std::vector<std::uint32_t>> table;  // table[a][b] = index of a∘b
  std::vector<std::uint32_t> star;
  std::unordered_map<std::string, std::uint32_t> index;

  std::size_t size() const { return elements.size(); }
  std::uint32_t index_of(const PartialMap& f) const;
  std::vector<std::uint32_t> idempotents() const;
  bool is_idempotent(std::uint32_t a) const { return table[a][a] == a; }
};

PartialMap compose(const PartialMap& a, const PartialMap& b);  // a after b
PartialMap inverse(const PartialMap& f);
std::string key_of(const PartialMap& f);
std::string format_partial_map(const PartialMap& f);           // "{1->3, 2->1}"
PartialMap parse_partial_map(std::string_view text, int ground);

FinitePBSemigroup closure(int ground, const std::vector<PartialMap>& generators,
                          std::size_t cap = 1u << 16);

struct GroupQuotient {
  FiniteGroupTable group;
  std::vector<std::uint32_t> sigma;  // element index -> group element
};

// σ-classes by exhaustive search for e with se = te.
GroupQuotient max_group_image(const FinitePBSemigroup& s);

}  // namespace schutz

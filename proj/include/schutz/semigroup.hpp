#pragma once

#include "schutz/oracle.hpp"

#include <cstddef>
#include <unordered_map>
#include <vector>

namespace schutz {

// x L y iff x*x = y*y.
bool l_related(const SemigroupOracle& s, const Element& x, const Element& y);
// x ∈ D_{s*s}, i.e. s*s·x = x.
bool in_domain(const SemigroupOracle& s, const Element& of, const Element& x);

// s ≤ t: exhaustive over E(S) when it is finite, otherwise the closed form
// s = t·(s*s), which holds in every inverse semigroup.
bool natural_leq(const SemigroupOracle& s, const Element& a, const Element& b);
bool natural_leq_exhaustive(const SemigroupOracle& s, const Element& a, const Element& b);
bool natural_leq_closed_form(const SemigroupOracle& s, const Element& a, const Element& b);

// s σ t. Uses the closed-form group image, else an exhaustive search over a
// finite E(S). Throws Unsupported when neither exists.
bool sigma_related(const SemigroupOracle& s, const Element& a, const Element& b);

struct WordBall {
  std::vector<Element> elements;   // BFS order
  std::vector<int> length;         // ℓ over the prefix
  std::unordered_map<Element, std::size_t, ElementHash> index;

  bool contains(const Element& x) const { return index.count(x) > 0; }
  std::size_t size() const { return elements.size(); }
};

// Products of at most r generators from the first m (r ≥ 1, m ≥ 1).
WordBall word_ball(const SemigroupOracle& s, int r, std::size_t m, std::size_t budget = 1u << 20);

}  // namespace schutz

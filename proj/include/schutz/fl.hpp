#pragma once

#include "schutz/oracle.hpp"
#include "schutz/semigroup.hpp"

#include <optional>
#include <string>
#include <vector>

namespace schutz {

enum class Verdict { Certified, Refuted, Inconclusive };
std::string to_string(Verdict v);

struct FLScope {
  int radius = 2;                  // word-ball radius for the vertices x
  std::size_t prefix = 0;          // generator prefix m
  std::size_t budget = 1u << 18;   // per-vertex reach-set budget
};

// Single-generator edges x --k--> kx of the scope, in deterministic order.
struct ScopeEdges {
  FLScope scope;
  WordBall ball;
  struct Item {
    std::size_t x;        // index into ball.elements
    std::size_t label;    // generator index
    Element y;
  };
  std::vector<Item> edges;
};
ScopeEdges collect_edges(const SemigroupOracle& s, const FLScope& scope);

struct FLWitness {
  Element x, y;
  std::size_t label = 0;
};

struct FLResult {
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::size_t> k1;
  int C = 1;
  FLScope scope;
  std::size_t edges_checked = 0;
  std::optional<FLWitness> witness;
  // Refutations: K1^p x within the L-class for p = 1..C (or until the union stops growing).
  std::vector<std::vector<Element>> transcript;
  std::string reason;
};

// Every scope edge must be labeled by a K1-word of length ≤ C. Words are
// explored inside the L-class of x: a word that leaves the class never returns.
FLResult check_fl(const SemigroupOracle& s, const std::vector<std::size_t>& k1, int C, const FLScope& scope);
FLResult check_fl(const SemigroupOracle& s, const ScopeEdges& edges, const std::vector<std::size_t>& k1, int C);

// Union of K1^p x ∩ L_x for p = 1..C, with the first p at which each element appears.
struct ReachSets {
  std::vector<std::vector<Element>> layers;
  bool stabilized = false;  // union stopped growing before C
};
ReachSets reach_layers(const SemigroupOracle& s, const Element& x, const std::vector<Element>& k1, int C,
                       std::size_t budget);

struct CoverResult {
  Verdict verdict = Verdict::Inconclusive;
  int R = 0;
  std::size_t word_length = 0;          // F = K1^1 ∪ ... ∪ K1^word_length
  std::vector<Element> cover;           // F as elements
  std::size_t cylinder_size = 0;        // explored s with d(s*s, s) ≤ R
  std::optional<Element> counterexample;
  std::string reason;
};

// Cover form: F built from K1-words of length ≤ max(R, 2)·C; every explored s
// with d(s*s, s) ≤ R needs some m ∈ F with m s*s = s.
CoverResult fl_cover_form(const SemigroupOracle& s, const std::vector<std::size_t>& k1, int C, int R,
                          const FLScope& scope);

// Re-check of a stored cover: every listed s is matched by a listed m.
bool cover_matches(const SemigroupOracle& s, const std::vector<Element>& cover, const Element& target);

}  // namespace schutz

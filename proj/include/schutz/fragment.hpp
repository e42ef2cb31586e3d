#pragma once

#include "schutz/oracle.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace schutz {

// Value of the extended path metric, or a lower bound when the fragment
// cannot certify the exact value.
struct Distance {
  enum class Kind { Finite, Infinite, AtLeast };
  Kind kind = Kind::Finite;
  std::uint64_t value = 0;

  static Distance finite(std::uint64_t v) { return {Kind::Finite, v}; }
  static Distance infinite() { return {Kind::Infinite, 0}; }
  static Distance at_least(std::uint64_t v) { return {Kind::AtLeast, v}; }

  bool exact() const { return kind != Kind::AtLeast; }
  bool is_finite() const { return kind == Kind::Finite; }
  bool operator==(const Distance&) const = default;
  std::string str() const;
};

struct Edge {
  std::size_t from = 0, label = 0, to = 0;  // to = generator(label) · from
  bool operator==(const Edge&) const = default;
};

struct FragmentOptions {
  int radius = 0;
  std::size_t prefix = 0;         // generator prefix m
  std::size_t cap = 8;            // labels stored per ordered vertex pair
  std::size_t budget = 1u << 20;  // vertex budget
};

// Radius-bounded ball of one left Schützenberger graph around `seed`.
class Fragment {
 public:
  OraclePtr oracle;
  Element seed;
  Element idempotent;  // seed* seed, shared by every vertex
  int radius = 0;
  std::size_t prefix = 0;
  std::size_t cap = 8;
  bool complete = false;

  std::vector<Element> vertices;
  std::vector<int> depth;  // BFS distance from the seed
  std::vector<Edge> edges;
  std::vector<std::vector<std::size_t>> neighbours;  // simple-graph quotient, loops dropped

  std::size_t size() const { return vertices.size(); }
  std::optional<std::size_t> find(const Element& x) const;
  std::size_t at(const Element& x) const;  // throws InvalidInput when absent

  // Fragment BFS distances from one vertex (unreachable = -1).
  std::vector<int> bfs(std::size_t from) const;
  // Extended distance with exactness bookkeeping.
  Distance distance(std::size_t x, std::size_t y) const;
  // distance(x, y) for every y, from one BFS.
  std::vector<Distance> distances_from(std::size_t x) const;
  // True when every path of length ≤ r from v stays inside the fragment.
  bool interior(std::size_t v, int r) const { return complete || depth[v] + r <= radius; }
  // |B_r(v)|, exact when interior(v, r).
  std::size_t ball_size(std::size_t v, int r) const;
  std::vector<std::size_t> ball(std::size_t v, int r) const;
  // Labels stored between an ordered pair.
  std::vector<std::size_t> labels(std::size_t from, std::size_t to) const;

  // Internal: filled by build_fragment / from_json.
  std::unordered_map<Element, std::size_t, ElementHash> index;
  void rebuild_adjacency();
};

Fragment build_fragment(OraclePtr oracle, const Element& seed, const FragmentOptions& options);

// d(x, y) in Λ_S: infinity across L-classes, otherwise the fragment metric.
Distance path_distance(const Fragment& f, const Element& x, const Element& y);

// Edge test in its two forms: kx stays in the L-class of x, or x lies in D_{k*k}.
bool edge_by_l_class(const SemigroupOracle& s, const Element& k, const Element& x);
bool edge_by_domain(const SemigroupOracle& s, const Element& k, const Element& x);

// Largest exact r-ball over the interior of the given fragments (0 if none).
std::size_t max_ball_size(const std::vector<Fragment>& fragments, int r);

struct GeometryReport {
  int r = 0;
  std::size_t prefix = 0;
  std::size_t max_ball = 0;        // largest interior ball over the seeds
  std::size_t interior_vertices = 0;
  double word_bound = 0;           // |K_m|^r
  std::optional<std::size_t> group_ball;  // |B_r(1)| in G(S) over σ(K_m)
};
GeometryReport bounded_geometry_probe(OraclePtr oracle, int r, std::size_t prefix,
                                      const std::vector<Element>& seeds);

// Ball of radius r around the identity of a group oracle over the given generators.
std::size_t group_ball_size(const SemigroupOracle& group, const std::vector<Element>& generators, int r,
                            std::size_t budget = 1u << 20);

// Word distance between a and b in a group oracle over the given generators,
// or nullopt beyond max_radius.
std::optional<std::uint64_t> group_distance(const SemigroupOracle& group, const std::vector<Element>& generators,
                                            const Element& a, const Element& b, int max_radius);

// The chain d_G(σx, σ(sx)) ≤ d(x, sx) ≤ d(s*s, s) ≤ ℓ(s) for x ∈ D_{s*s}.
struct DistanceChain {
  bool has_group = false;
  std::optional<std::uint64_t> group;  // d_G, absent if it exceeds ℓ(s)
  Distance moved;                      // d(x, sx)
  Distance base;                       // d(s*s, s)
  int length = 0;                      // ℓ(s) over the prefix
  bool exact() const { return moved.exact() && base.exact(); }
  bool holds() const;                  // every link, on exact values
  bool same_class_case = false;        // xx* = s*s
};
DistanceChain distance_chain(OraclePtr oracle, const Element& s, int length, const Element& x, int radius,
                             std::size_t prefix);

}  // namespace schutz

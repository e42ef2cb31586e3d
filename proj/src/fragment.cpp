#include "schutz/fragment.hpp"

#include "schutz/error.hpp"
#include "schutz/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <unordered_set>

namespace schutz {

std::string Distance::str() const {
  switch (kind) {
    case Kind::Finite: return std::to_string(value);
    case Kind::Infinite: return "inf";
    case Kind::AtLeast: return ">=" + std::to_string(value);
  }
  return "?";
}

std::optional<std::size_t> Fragment::find(const Element& x) const {
  auto it = index.find(x);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

std::size_t Fragment::at(const Element& x) const {
  auto v = find(x);
  if (!v) throw InvalidInput(oracle->format(x) + " is not a vertex of the fragment");
  return *v;
}

void Fragment::rebuild_adjacency() {
  neighbours.assign(vertices.size(), {});
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : edges) {
    if (e.from == e.to) continue;
    if (seen.insert({e.from, e.to}).second) neighbours[e.from].push_back(e.to);
    if (seen.insert({e.to, e.from}).second) neighbours[e.to].push_back(e.from);
  }
}

std::vector<int> Fragment::bfs(std::size_t from) const {
  std::vector<int> dist(vertices.size(), -1);
  std::deque<std::size_t> q{from};
  dist[from] = 0;
  while (!q.empty()) {
    auto x = q.front();
    q.pop_front();
    for (auto y : neighbours[x])
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        q.push_back(y);
      }
  }
  return dist;
}

namespace {

Distance classify(const Fragment& f, const std::vector<int>& dist, std::size_t x, std::size_t y) {
  if (f.complete) return dist[y] < 0 ? Distance::infinite() : Distance::finite(static_cast<std::uint64_t>(dist[y]));
  // A geodesic of length L between x and y never leaves B_{(dx+dy+L)/2}(seed).
  const long slack = 2L * f.radius - f.depth[x] - f.depth[y];
  if (dist[y] >= 0 && dist[y] <= slack) return Distance::finite(static_cast<std::uint64_t>(dist[y]));
  return Distance::at_least(static_cast<std::uint64_t>(std::max(0L, slack + 1)));
}

}  // namespace

Distance Fragment::distance(std::size_t x, std::size_t y) const { return classify(*this, bfs(x), x, y); }

std::vector<Distance> Fragment::distances_from(std::size_t x) const {
  auto dist = bfs(x);
  std::vector<Distance> out;
  out.reserve(vertices.size());
  for (std::size_t y = 0; y < vertices.size(); ++y) out.push_back(classify(*this, dist, x, y));
  return out;
}

std::vector<std::size_t> Fragment::ball(std::size_t v, int r) const {
  auto dist = bfs(v);
  std::vector<std::size_t> out;
  for (std::size_t u = 0; u < vertices.size(); ++u)
    if (dist[u] >= 0 && dist[u] <= r) out.push_back(u);
  return out;
}

std::size_t Fragment::ball_size(std::size_t v, int r) const { return ball(v, r).size(); }

std::vector<std::size_t> Fragment::labels(std::size_t from, std::size_t to) const {
  std::vector<std::size_t> out;
  for (const auto& e : edges)
    if (e.from == from && e.to == to) out.push_back(e.label);
  return out;
}

bool edge_by_l_class(const SemigroupOracle& s, const Element& k, const Element& x) {
  auto y = s.multiply(k, x);
  return s.multiply(s.star(y), y) == s.multiply(s.star(x), x);
}

bool edge_by_domain(const SemigroupOracle& s, const Element& k, const Element& x) {
  return s.multiply(s.multiply(s.star(k), k), x) == x;
}

Fragment build_fragment(OraclePtr oracle, const Element& seed, const FragmentOptions& opt) {
  if (opt.radius < 0) throw InvalidInput("radius must be non-negative");
  if (opt.prefix < 1) throw InvalidInput("generator prefix must be positive");
  if (opt.cap < 1) throw InvalidInput("multi-edge cap must be positive");
  oracle->check_family(seed);
  const auto& s = *oracle;
  auto gens = s.generator_prefix(opt.prefix);
  std::vector<std::size_t> star_of(gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i) star_of[i] = s.star_index(i);

  Fragment f;
  f.oracle = oracle;
  f.seed = seed;
  f.idempotent = s.multiply(s.star(seed), seed);
  f.radius = opt.radius;
  f.prefix = opt.prefix;
  f.cap = opt.cap;
  f.complete = true;

  auto add_vertex = [&](const Element& x, int d) {
    if (f.vertices.size() >= opt.budget)
      throw BudgetExhausted("fragment exceeded " + std::to_string(opt.budget) + " vertices");
    f.index.emplace(x, f.vertices.size());
    f.vertices.push_back(x);
    f.depth.push_back(d);
    return f.vertices.size() - 1;
  };
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> pair_count;
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> stored;
  auto add_edge = [&](std::size_t x, std::size_t label, std::size_t y) {
    if (stored.count({x, label, y})) return;
    auto& c = pair_count[{x, y}];
    if (c >= opt.cap) return;
    ++c;
    stored.insert({x, label, y});
    f.edges.push_back(Edge{x, label, y});
  };

  add_vertex(seed, 0);
  for (std::size_t i = 0; i < f.vertices.size(); ++i) {
    const Element x = f.vertices[i];
    const int d = f.depth[i];
    for (std::size_t k = 0; k < gens.size(); ++k) {
      if (!edge_by_domain(s, gens[k], x)) continue;
      auto y = s.multiply(gens[k], x);
      auto it = f.index.find(y);
      std::size_t j;
      if (it != f.index.end()) {
        j = it->second;
      } else if (d < opt.radius) {
        j = add_vertex(y, d + 1);
      } else {
        f.complete = false;
        continue;
      }
      add_edge(i, k, j);
      add_edge(j, star_of[k], i);
    }
  }
  f.rebuild_adjacency();
  return f;
}

Distance path_distance(const Fragment& f, const Element& x, const Element& y) {
  const auto& s = *f.oracle;
  s.check_family(x);
  s.check_family(y);
  auto ix = f.at(x);
  if (s.multiply(s.star(y), y) != f.idempotent) return Distance::infinite();
  auto iy = f.find(y);
  if (!iy) {
    // y lies outside B_R(seed), so d(x, y) ≥ R + 1 - d(seed, x).
    return Distance::at_least(static_cast<std::uint64_t>(std::max(0, f.radius + 1 - f.depth[ix])));
  }
  return f.distance(ix, *iy);
}

std::size_t max_ball_size(const std::vector<Fragment>& fragments, int r) {
  std::size_t best = 0;
  for (const auto& f : fragments)
    for (std::size_t v = 0; v < f.size(); ++v)
      if (f.interior(v, r)) best = std::max(best, f.ball_size(v, r));
  return best;
}

std::size_t group_ball_size(const SemigroupOracle& group, const std::vector<Element>& generators, int r,
                            std::size_t budget) {
  if (generators.empty()) throw InvalidInput("group ball needs generators");
  auto one = group.multiply(generators[0], group.star(generators[0]));
  std::unordered_set<Element, ElementHash> seen{one};
  std::vector<Element> frontier{one};
  for (int d = 0; d < r && !frontier.empty(); ++d) {
    std::vector<Element> next;
    for (const auto& x : frontier)
      for (const auto& g : generators) {
        auto y = group.multiply(g, x);
        if (seen.insert(y).second) {
          if (seen.size() > budget) throw BudgetExhausted("group ball exceeded budget");
          next.push_back(y);
        }
      }
    frontier = std::move(next);
  }
  return seen.size();
}

GeometryReport bounded_geometry_probe(OraclePtr oracle, int r, std::size_t prefix,
                                      const std::vector<Element>& seeds) {
  GeometryReport rep;
  rep.r = r;
  rep.prefix = prefix;
  rep.word_bound = std::pow(static_cast<double>(prefix), r);
  std::vector<Fragment> frags;
  for (const auto& seed : seeds) frags.push_back(build_fragment(oracle, seed, {2 * r, prefix}));
  rep.max_ball = max_ball_size(frags, r);
  for (const auto& f : frags)
    for (std::size_t v = 0; v < f.size(); ++v) rep.interior_vertices += f.interior(v, r) ? 1 : 0;
  if (auto img = oracle->group_image()) {
    std::vector<Element> gens;
    for (const auto& k : oracle->generator_prefix(prefix)) gens.push_back(img->project(k));
    rep.group_ball = group_ball_size(*img->group, gens, r);
  }
  return rep;
}

std::optional<std::uint64_t> group_distance(const SemigroupOracle& group, const std::vector<Element>& generators,
                                            const Element& a, const Element& b, int max_radius) {
  if (a == b) return 0;
  std::unordered_set<Element, ElementHash> seen{a};
  std::vector<Element> frontier{a};
  for (int d = 1; d <= max_radius && !frontier.empty(); ++d) {
    std::vector<Element> next;
    for (const auto& x : frontier)
      for (const auto& g : generators) {
        auto y = group.multiply(g, x);
        if (y == b) return static_cast<std::uint64_t>(d);
        if (seen.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  return std::nullopt;
}

bool DistanceChain::holds() const {
  if (!exact() || !moved.is_finite() || !base.is_finite()) return false;
  if (has_group && (!group || *group > moved.value)) return false;
  if (moved.value > base.value) return false;
  if (base.value > static_cast<std::uint64_t>(length)) return false;
  if (same_class_case && moved.value != base.value) return false;
  return true;
}

DistanceChain distance_chain(OraclePtr oracle, const Element& s, int length, const Element& x, int radius,
                             std::size_t prefix) {
  const auto& S = *oracle;
  if (!in_domain(S, s, x)) throw InvalidInput("x must lie in D_{s*s}");
  DistanceChain c;
  c.length = length;
  auto sx = S.multiply(s, x);
  auto fx = build_fragment(oracle, x, {radius, prefix});
  c.moved = path_distance(fx, x, sx);
  auto ss = S.multiply(S.star(s), s);
  auto fb = build_fragment(oracle, ss, {radius, prefix});
  c.base = path_distance(fb, ss, s);
  c.same_class_case = S.multiply(x, S.star(x)) == ss;
  if (auto img = S.group_image()) {
    std::vector<Element> gens;
    for (const auto& k : S.generator_prefix(prefix)) gens.push_back(img->project(k));
    c.has_group = true;
    c.group = group_distance(*img->group, gens, img->project(x), img->project(sx), length);
  }
  return c;
}

}  // namespace schutz

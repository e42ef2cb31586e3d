#include "schutz/graph_maps.hpp"

#include "schutz/error.hpp"

#include <map>
#include <set>
#include <tuple>

namespace schutz {

namespace {

using LabeledEdges = std::set<std::tuple<std::size_t, std::size_t, std::size_t>>;

LabeledEdges edge_set(const Fragment& f) {
  LabeledEdges out;
  for (const auto& e : f.edges) out.insert({e.from, e.label, e.to});
  return out;
}

// Compares mapped source edges with target edges in both directions.
void compare_edges(const Fragment& source, const Fragment& target, const std::vector<std::size_t>& map,
                   const std::function<std::size_t(std::size_t)>& relabel, std::vector<std::string>& violations) {
  auto target_edges = edge_set(target);
  LabeledEdges mapped;
  const auto& s = *source.oracle;
  for (const auto& e : source.edges) {
    std::tuple<std::size_t, std::size_t, std::size_t> m{map[e.from], relabel(e.label), map[e.to]};
    mapped.insert(m);
    if (!target_edges.count(m))
      violations.push_back("edge " + s.format(source.vertices[e.from]) + " --" + std::to_string(e.label) + "--> " +
                           s.format(source.vertices[e.to]) + " has no image");
  }
  for (const auto& t : target_edges)
    if (!mapped.count(t))
      violations.push_back("target edge " + s.format(target.vertices[std::get<0>(t)]) + " --" +
                           std::to_string(std::get<1>(t)) + "--> " + s.format(target.vertices[std::get<2>(t)]) +
                           " has no preimage");
}

void check_bijective(MapReport& rep, std::size_t source_size) {
  std::set<std::size_t> hit(rep.vertex_map.begin(), rep.vertex_map.end());
  rep.bijective = hit.size() == source_size && source_size == rep.image.size();
}

}  // namespace

MapReport rho_map(const Element& s, const Fragment& source) {
  const auto& S = *source.oracle;
  S.check_family(s);
  if (source.idempotent != S.multiply(S.star(s), s))
    throw InvalidInput("rho_map needs a fragment of the L-class of s*s");
  auto ss = S.star(s);
  MapReport rep;
  rep.image = build_fragment(source.oracle, S.multiply(source.seed, ss),
                             {source.radius, source.prefix, source.cap, source.size() * 4 + 16});
  for (std::size_t v = 0; v < source.size(); ++v) {
    auto img = S.multiply(source.vertices[v], ss);
    auto j = rep.image.find(img);
    if (!j) {
      rep.violations.push_back(S.format(source.vertices[v]) + " maps outside the image fragment");
      rep.vertex_map.push_back(0);
      continue;
    }
    rep.vertex_map.push_back(*j);
  }
  check_bijective(rep, source.size());
  if (rep.violations.empty())
    compare_edges(source, rep.image, rep.vertex_map, [](std::size_t k) { return k; }, rep.violations);
  return rep;
}

Fragment build_right_fragment(OraclePtr oracle, const Element& seed, const FragmentOptions& opt) {
  const auto& s = *oracle;
  auto gens = s.generator_prefix(opt.prefix);
  Fragment f;
  f.oracle = oracle;
  f.seed = seed;
  f.idempotent = s.multiply(seed, s.star(seed));
  f.radius = opt.radius;
  f.prefix = opt.prefix;
  f.cap = opt.cap;
  f.complete = true;
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
  f.index.emplace(seed, 0);
  f.vertices.push_back(seed);
  f.depth.push_back(0);
  for (std::size_t i = 0; i < f.vertices.size(); ++i) {
    const Element x = f.vertices[i];
    for (std::size_t k = 0; k < gens.size(); ++k) {
      auto y = s.multiply(x, gens[k]);
      if (s.multiply(y, s.star(y)) != f.idempotent) continue;
      auto it = f.index.find(y);
      std::size_t j;
      if (it != f.index.end()) {
        j = it->second;
      } else if (f.depth[i] < opt.radius) {
        if (f.vertices.size() >= opt.budget) throw BudgetExhausted("right fragment exceeded budget");
        j = f.vertices.size();
        f.index.emplace(y, j);
        f.vertices.push_back(y);
        f.depth.push_back(f.depth[i] + 1);
      } else {
        f.complete = false;
        continue;
      }
      add_edge(i, k, j);
      add_edge(j, s.star_index(k), i);
    }
  }
  f.rebuild_adjacency();
  return f;
}

MapReport involution_graph(const Fragment& source) {
  const auto& S = *source.oracle;
  MapReport rep;
  rep.image = build_right_fragment(source.oracle, S.star(source.seed),
                                   {source.radius, source.prefix, source.cap, source.size() * 4 + 16});
  for (std::size_t v = 0; v < source.size(); ++v) {
    auto j = rep.image.find(S.star(source.vertices[v]));
    if (!j) {
      rep.violations.push_back(S.format(source.vertices[v]) + " maps outside the right fragment");
      rep.vertex_map.push_back(0);
      continue;
    }
    rep.vertex_map.push_back(*j);
  }
  check_bijective(rep, source.size());
  if (rep.violations.empty()) {
    auto oracle = source.oracle;
    compare_edges(source, rep.image, rep.vertex_map, [oracle](std::size_t k) { return oracle->star_index(k); },
                  rep.violations);
  }
  return rep;
}

RealizationReport realize_graph(const LoopGraph& g) {
  RealizationReport rep;
  rep.oracle = graph_realization(g);
  const auto& s = *rep.oracle;
  auto root = s.generator(g.root);
  auto m = *s.generator_count();
  rep.fragment = build_fragment(rep.oracle, root, {static_cast<int>(g.vertices), m, 8, 4u * g.vertices + 16});
  const auto& f = rep.fragment;
  if (!f.complete) rep.violations.push_back("fragment did not close");
  if (f.size() != g.vertices)
    rep.violations.push_back("class has " + std::to_string(f.size()) + " vertices, input has " +
                             std::to_string(g.vertices));
  // Endpoint bijection: input vertex z <-> arrow z <- root.
  for (std::uint32_t z = 0; z < g.vertices; ++z) {
    auto v = f.find(Element{Family::GraphRealization, EndpointPair{z, g.root}});
    if (!v) {
      rep.violations.push_back("vertex " + std::to_string(z) + " missing from the class");
      rep.vertex_of.push_back(0);
    } else {
      rep.vertex_of.push_back(*v);
    }
  }
  if (rep.violations.empty()) {
    // Expected labeled edges: loop label z at z, edge e=(u,w) labeled u->w and w->u.
    std::set<std::tuple<std::size_t, std::size_t, std::size_t>> expected, actual;
    for (std::uint32_t z = 0; z < g.vertices; ++z) expected.insert({rep.vertex_of[z], z, rep.vertex_of[z]});
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      auto [u, w] = g.edges[i];
      expected.insert({rep.vertex_of[u], g.vertices + 2 * i, rep.vertex_of[w]});
      expected.insert({rep.vertex_of[w], g.vertices + 2 * i + 1, rep.vertex_of[u]});
    }
    for (const auto& e : f.edges) actual.insert({e.from, e.label, e.to});
    for (const auto& e : expected)
      if (!actual.count(e)) rep.violations.push_back("input edge missing in the class graph");
    for (const auto& e : actual)
      if (!expected.count(e)) rep.violations.push_back("class graph has an edge the input lacks");
  }
  rep.isomorphic = rep.violations.empty();
  return rep;
}

}  // namespace schutz

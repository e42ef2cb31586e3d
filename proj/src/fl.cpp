#include "schutz/fl.hpp"

#include "schutz/error.hpp"
#include "element_set.hpp"
#include "schutz/fragment.hpp"

#include <algorithm>
#include <unordered_set>

namespace schutz {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Certified: return "certified";
    case Verdict::Refuted: return "refuted";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

ScopeEdges collect_edges(const SemigroupOracle& s, const FLScope& scope) {
  ScopeEdges out;
  out.scope = scope;
  out.ball = word_ball(s, scope.radius, scope.prefix);
  auto gens = s.generator_prefix(scope.prefix);
  for (std::size_t i = 0; i < out.ball.size(); ++i) {
    const auto& x = out.ball.elements[i];
    for (std::size_t k = 0; k < gens.size(); ++k)
      if (edge_by_domain(s, gens[k], x)) out.edges.push_back({i, k, s.multiply(gens[k], x)});
  }
  return out;
}

namespace {

// Letters with their domain idempotents k*k precomputed.
struct Alphabet {
  std::vector<Element> letters, domains;
  Alphabet(const SemigroupOracle& s, std::vector<Element> ks) : letters(std::move(ks)) {
    for (const auto& k : letters) domains.push_back(s.multiply(s.star(k), k));
  }
};

ReachSets layers_from(const SemigroupOracle& s, const Element& x, const Alphabet& a, int C, std::size_t budget,
                      detail::ElementSet& seen) {
  ReachSets r;
  seen.clear();
  std::vector<Element> layer{x};
  detail::ElementSet in_layer;
  for (int p = 1; p <= C; ++p) {
    in_layer.clear();
    bool grew = false;
    for (const auto& z : layer)
      for (std::size_t i = 0; i < a.letters.size(); ++i) {
        // kz stays in L_x exactly when z ∈ D_{k*k}.
        if (s.multiply(a.domains[i], z) != z) continue;
        auto y = s.multiply(a.letters[i], z);
        if (!in_layer.insert(y)) continue;
        if (seen.insert(y)) grew = true;
        if (seen.size() > budget) throw BudgetExhausted("reach set exceeded budget");
      }
    r.layers.push_back(in_layer.items());
    // Once a layer adds nothing new, later layers stay inside the union.
    if (!grew) {
      r.stabilized = true;
      break;
    }
    layer = in_layer.items();
  }
  return r;
}

}  // namespace

ReachSets reach_layers(const SemigroupOracle& s, const Element& x, const std::vector<Element>& k1, int C,
                       std::size_t budget) {
  detail::ElementSet seen;
  return layers_from(s, x, Alphabet(s, k1), C, budget, seen);
}

FLResult check_fl(const SemigroupOracle& s, const ScopeEdges& scope_edges, const std::vector<std::size_t>& k1,
                  int C) {
  FLResult res;
  res.k1 = k1;
  res.C = C;
  res.scope = scope_edges.scope;
  if (C < 1) throw InvalidInput("C must be positive");
  if (k1.empty()) throw InvalidInput("K1 must be non-empty");
  for (auto k : k1)
    if (k >= scope_edges.scope.prefix) throw InvalidInput("K1 must lie inside the generator prefix");
  std::vector<Element> letters;
  for (auto k : k1) letters.push_back(s.generator(k));
  const Alphabet alphabet(s, letters);

  std::size_t cached_x = static_cast<std::size_t>(-1);
  detail::ElementSet reach;
  ReachSets layers;
  for (const auto& item : scope_edges.edges) {
    if (item.x != cached_x) {
      cached_x = item.x;
      try {
        layers = layers_from(s, scope_edges.ball.elements[item.x], alphabet, C, scope_edges.scope.budget, reach);
      } catch (const BudgetExhausted& e) {
        res.verdict = Verdict::Inconclusive;
        res.reason = e.what();
        return res;
      }
    }
    ++res.edges_checked;
    if (!reach.contains(item.y)) {
      res.verdict = Verdict::Refuted;
      res.witness = FLWitness{scope_edges.ball.elements[item.x], item.y, item.label};
      res.transcript = layers.layers;
      return res;
    }
  }
  res.verdict = Verdict::Certified;
  return res;
}

FLResult check_fl(const SemigroupOracle& s, const std::vector<std::size_t>& k1, int C, const FLScope& scope) {
  FLScope sc = scope;
  if (sc.prefix == 0) sc.prefix = s.default_prefix(*std::max_element(k1.begin(), k1.end()) + 2);
  ScopeEdges edges;
  try {
    edges = collect_edges(s, sc);
  } catch (const BudgetExhausted& e) {
    FLResult res;
    res.k1 = k1;
    res.C = C;
    res.scope = sc;
    res.reason = e.what();
    return res;
  }
  return check_fl(s, edges, k1, C);
}

bool cover_matches(const SemigroupOracle& s, const std::vector<Element>& cover, const Element& target) {
  auto e = s.multiply(s.star(target), target);
  return std::any_of(cover.begin(), cover.end(), [&](const Element& m) { return s.multiply(m, e) == target; });
}

CoverResult fl_cover_form(const SemigroupOracle& s, const std::vector<std::size_t>& k1, int C, int R,
                          const FLScope& scope) {
  CoverResult res;
  res.R = R;
  if (C < 1 || R < 0) throw InvalidInput("cover form needs C >= 1 and R >= 0");
  if (k1.empty()) throw InvalidInput("K1 must be non-empty");
  FLScope sc = scope;
  if (sc.prefix == 0) sc.prefix = s.default_prefix(*std::max_element(k1.begin(), k1.end()) + 2);
  for (auto k : k1)
    if (k >= sc.prefix) throw InvalidInput("K1 must lie inside the generator prefix");
  // Idempotents need a return trip, hence at least 2C letters.
  res.word_length = static_cast<std::size_t>(std::max(R, 2) * C);
  try {
    std::unordered_set<Element, ElementHash> seen;
    std::vector<Element> layer;
    for (auto k : k1) {
      auto g = s.generator(k);
      if (seen.insert(g).second) {
        layer.push_back(g);
        res.cover.push_back(g);
      }
    }
    for (std::size_t p = 2; p <= res.word_length && !layer.empty(); ++p) {
      std::vector<Element> next;
      for (const auto& z : layer)
        for (auto k : k1) {
          auto y = s.multiply(s.generator(k), z);
          if (seen.insert(y).second) {
            if (seen.size() > sc.budget) throw BudgetExhausted("cover set exceeded budget");
            next.push_back(y);
            res.cover.push_back(y);
          }
        }
      layer = std::move(next);
    }
    auto ball = word_ball(s, sc.radius, sc.prefix);
    for (const auto& x : ball.elements) {
      auto e = s.multiply(s.star(x), x);
      auto frag = build_fragment(s.shared_from_this(), e, {R, sc.prefix, 1, sc.budget});
      if (!frag.find(x)) continue;  // d(s*s, s) > R
      ++res.cylinder_size;
      if (!cover_matches(s, res.cover, x)) {
        res.verdict = Verdict::Refuted;
        res.counterexample = x;
        return res;
      }
    }
  } catch (const BudgetExhausted& e) {
    res.verdict = Verdict::Inconclusive;
    res.reason = e.what();
    return res;
  }
  res.verdict = Verdict::Certified;
  return res;
}

}  // namespace schutz

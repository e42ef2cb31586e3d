#include "schutz/property_a.hpp"

#include "schutz/error.hpp"
#include "schutz/semigroup.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

namespace schutz {

using Vector = std::vector<std::pair<std::size_t, Rational>>;

Rational l1_distance(const Vector& a, const Vector& b) {
  std::map<std::size_t, Rational> diff;
  for (const auto& [v, w] : a) diff[v] += w;
  for (const auto& [v, w] : b) diff[v] -= w;
  Rational total = 0;
  for (const auto& [v, w] : diff) total += abs(w);
  return total;
}

std::vector<bool> interior_vertices(const Fragment& f, int C) {
  std::vector<bool> out(f.size());
  for (std::size_t v = 0; v < f.size(); ++v) out[v] = f.interior(v, C);
  return out;
}

WitnessReport check_witness(const Fragment& f, const PropertyAWitness& w) {
  WitnessReport rep;
  rep.achieved = 0;
  if (w.interior.size() != f.size() || w.xi.size() != f.size())
    throw InvalidInput("witness does not match the fragment's vertex count");
  auto name = [&](std::size_t v) { return f.oracle->format(f.vertices[v]); };
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (!w.interior[x]) continue;
    const auto& xi = w.xi[x];
    auto dist = f.bfs(x);
    Rational total = 0;
    std::set<std::size_t> seen;
    for (const auto& [z, weight] : xi) {
      if (z >= f.size()) throw InvalidInput("support vertex outside the fragment");
      if (!seen.insert(z).second) rep.violations.push_back("xi(" + name(x) + ") repeats " + name(z));
      if (weight < 0) rep.violations.push_back("xi(" + name(x) + ") is negative at " + name(z));
      // Fragment paths bound the true distance from above.
      if (dist[z] < 0 || dist[z] > w.C)
        rep.violations.push_back("support of xi(" + name(x) + ") leaves B_C at " + name(z));
      total += weight;
    }
    if (total != 1) rep.violations.push_back("xi(" + name(x) + ") has norm " + total.str());
  }
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (!w.interior[x]) continue;
    auto row = f.distances_from(x);
    for (std::size_t y = x + 1; y < f.size(); ++y) {
      if (!w.interior[y]) continue;
      const auto& d = row[y];
      if (!d.exact()) {
        if (d.value <= static_cast<std::uint64_t>(w.R)) ++rep.pairs_censored;
        continue;
      }
      if (!d.is_finite() || d.value > static_cast<std::uint64_t>(w.R)) continue;
      ++rep.pairs_checked;
      auto gap = l1_distance(w.xi[x], w.xi[y]);
      rep.achieved = std::max(rep.achieved, gap);
      if (gap > w.eps)
        rep.violations.push_back("|xi(" + name(x) + ") - xi(" + name(y) + ")| = " + gap.str() + " exceeds eps");
    }
  }
  rep.ok = rep.violations.empty();
  return rep;
}

namespace {

PropertyAWitness empty_witness(const Fragment& f, int C, int R) {
  PropertyAWitness w;
  w.R = R;
  w.C = C;
  w.interior = interior_vertices(f, C);
  w.xi.assign(f.size(), {});
  if (std::none_of(w.interior.begin(), w.interior.end(), [](bool b) { return b; }))
    throw InvalidInput("fragment has no interior vertex for C = " + std::to_string(C));
  return w;
}

void settle_eps(const Fragment& f, PropertyAWitness& w) {
  // Any positive placeholder; the achieved value replaces it.
  w.eps = 2;
  w.eps = check_witness(f, w).achieved;
}

}  // namespace

PropertyAWitness point_mass_witness(const Fragment& f, int R) {
  auto w = empty_witness(f, 0, R);
  for (std::size_t x = 0; x < f.size(); ++x)
    if (w.interior[x]) w.xi[x] = {{x, Rational(1)}};
  settle_eps(f, w);
  return w;
}

PropertyAWitness ball_average_witness(const Fragment& f, int C, int R) {
  if (C < 0) throw InvalidInput("C must be non-negative");
  auto w = empty_witness(f, C, R);
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (!w.interior[x]) continue;
    auto ball = f.ball(x, C);
    Rational each(1, static_cast<long>(ball.size()));
    for (auto z : ball) w.xi[x].emplace_back(z, each);
  }
  settle_eps(f, w);
  return w;
}

PropertyAWitness tree_ray_witness(const Fragment& f, int C, int R, std::size_t root) {
  if (C < 1) throw InvalidInput("tree-ray witness needs C >= 1");
  if (root >= f.size()) throw InvalidInput("root outside the fragment");
  std::size_t degree_sum = 0;
  for (const auto& n : f.neighbours) degree_sum += n.size();
  auto dist = f.bfs(root);
  bool connected = std::all_of(dist.begin(), dist.end(), [](int d) { return d >= 0; });
  if (!connected || degree_sum != 2 * (f.size() - 1)) throw InvalidInput("fragment is not a tree");
  std::vector<std::size_t> parent(f.size(), root);
  for (std::size_t v = 0; v < f.size(); ++v)
    for (auto u : f.neighbours[v])
      if (dist[u] == dist[v] - 1) parent[v] = u;

  PropertyAWitness w;
  w.R = R;
  w.C = C;
  w.interior.assign(f.size(), true);  // supports lie on the path to the root
  w.xi.assign(f.size(), {});
  Rational each(1, C);
  for (std::size_t x = 0; x < f.size(); ++x) {
    std::size_t v = x;
    int placed = 0;
    while (placed < C) {
      w.xi[x].emplace_back(v, each);
      ++placed;
      if (v == root) break;
      v = parent[v];
    }
    if (placed < C) w.xi[x].back().second += Rational(C - placed, C);
  }
  settle_eps(f, w);
  return w;
}

Rational cycle_window_eps(std::size_t n, int C, int R) {
  const long w = 2L * C + 1;
  const long N = static_cast<long>(n);
  if (w >= N) return 0;
  Rational worst = 0;
  for (long d = 1; d <= R; ++d) {
    long s = std::min(d % N, N - d % N);
    long overlap = std::max(0L, w - s) + std::max(0L, w - (N - s));
    worst = std::max(worst, Rational(2 * (w - std::min(w, overlap)), w));
  }
  return worst;
}

LPWitness lp_optimal_witness(const Fragment& f, int R, int C, const LPOptions& opt) {
  if (R < 0 || C < 0) throw InvalidInput("R and C must be non-negative");
  LPWitness out;
  auto w = empty_witness(f, C, R);
  std::vector<std::size_t> inner;
  for (std::size_t x = 0; x < f.size(); ++x)
    if (w.interior[x]) inner.push_back(x);

  LinearProgram lp;
  std::vector<std::vector<std::size_t>> support(f.size());
  std::vector<std::unordered_map<std::size_t, std::size_t>> var(f.size());  // (x, z) -> column
  auto add_var = [&](double cost) {
    lp.objective.push_back(cost);
    return lp.variables++;
  };
  const std::size_t t = add_var(1.0);
  for (auto x : inner) {
    support[x] = f.ball(x, C);
    LinearProgram::Row norm;
    norm.sense = LinearProgram::Sense::Eq;
    norm.rhs = 1;
    for (auto z : support[x]) {
      auto j = add_var(0);
      var[x][z] = j;
      norm.terms.emplace_back(j, 1.0);
    }
    lp.rows.push_back(std::move(norm));
  }
  for (std::size_t a = 0; a < inner.size(); ++a) {
    auto x = inner[a];
    auto row = f.distances_from(x);
    for (std::size_t b = a + 1; b < inner.size(); ++b) {
      auto y = inner[b];
      const auto& d = row[y];
      if (!d.is_finite() || d.value > static_cast<std::uint64_t>(R)) continue;
      std::set<std::size_t> zs(support[x].begin(), support[x].end());
      zs.insert(support[y].begin(), support[y].end());
      LinearProgram::Row sum;
      sum.sense = LinearProgram::Sense::Le;
      sum.terms.emplace_back(t, -1.0);
      for (auto z : zs) {
        auto p = add_var(0), q = add_var(0);
        LinearProgram::Row diff;
        diff.sense = LinearProgram::Sense::Eq;
        if (auto it = var[x].find(z); it != var[x].end()) diff.terms.emplace_back(it->second, 1.0);
        if (auto it = var[y].find(z); it != var[y].end()) diff.terms.emplace_back(it->second, -1.0);
        diff.terms.emplace_back(p, -1.0);
        diff.terms.emplace_back(q, 1.0);
        lp.rows.push_back(std::move(diff));
        sum.terms.emplace_back(p, 1.0);
        sum.terms.emplace_back(q, 1.0);
      }
      lp.rows.push_back(std::move(sum));
    }
  }
  out.variables = lp.variables;
  out.rows = lp.rows.size();
  auto res = solve_lp(lp, opt);
  out.iterations = res.iterations;
  if (res.status != LPResult::Status::Optimal) throw Error("witness LP did not reach an optimum");
  out.eps_lp = res.objective;

  // Round to denominators ≤ 10^6 and renormalize exactly.
  for (auto x : inner) {
    Rational total = 0;
    for (auto z : support[x]) {
      double v = std::max(0.0, res.x[var[x][z]]);
      Rational q = best_approximation(v, 1000000);
      if (q > 0) {
        w.xi[x].emplace_back(z, q);
        total += q;
      }
    }
    if (total == 0) {
      w.xi[x] = {{x, Rational(1)}};
      continue;
    }
    for (auto& [z, q] : w.xi[x]) q /= total;
  }
  settle_eps(f, w);
  out.eps_exact = w.eps;
  out.witness = std::move(w);
  return out;
}

UniformAReport uniform_property_a(OraclePtr oracle, const std::vector<Element>& seeds, const UniformAOptions& opt) {
  if (opt.eps <= 0) throw InvalidInput("epsilon must be positive");
  UniformAReport rep;
  rep.R = opt.R;
  rep.eps = opt.eps;
  rep.max_C = opt.max_C;
  std::size_t prefix = opt.prefix ? opt.prefix : oracle->default_prefix(4);
  rep.scope = "C<=" + std::to_string(opt.max_C) + ", fragment radius " + std::to_string(opt.fragment_radius) +
              ", prefix " + std::to_string(prefix) + ", " + std::to_string(seeds.size()) + " components";
  bool all = true;
  int sup = 0;
  for (const auto& seed : seeds) {
    auto f = build_fragment(oracle, seed, {opt.fragment_radius, prefix});
    ComponentA c;
    c.seed = oracle->format(seed);
    c.vertices = f.size();
    for (int C = 0; C <= opt.max_C && !c.C; ++C) {
      if (std::none_of(f.depth.begin(), f.depth.end(), [&](int d) { return d + C <= f.radius; }) && !f.complete)
        break;
      auto w = ball_average_witness(f, C, opt.R);
      if (w.eps <= opt.eps) {
        c.C = C;
        c.method = "ball-average";
        c.achieved = w.eps;
        break;
      }
      if (opt.use_lp) {
        auto l = lp_optimal_witness(f, opt.R, C);
        if (l.eps_exact <= opt.eps) {
          c.C = C;
          c.method = "lp";
          c.achieved = l.eps_exact;
        }
      }
    }
    if (c.C)
      sup = std::max(sup, *c.C);
    else
      all = false;
    rep.components.push_back(std::move(c));
  }
  if (all) rep.sup_C = sup;
  return rep;
}

std::vector<Element> projection_chain(const SemigroupOracle& s, std::vector<Element> idempotents) {
  if (idempotents.empty()) {
    auto all = s.idempotents();
    if (!all) throw Unsupported(s.name() + " has no enumerable idempotent set");
    idempotents = std::move(*all);
  }
  std::vector<Element> chain;
  for (const auto& f : idempotents) {
    if (!s.is_idempotent(f)) throw InvalidInput(s.format(f) + " is not idempotent");
    chain.push_back(chain.empty() ? f : s.multiply(chain.back(), f));
  }
  return chain;
}

Pushforward push_witness_to_group_image(OraclePtr sp, const Fragment& source, const PropertyAWitness& w,
                                        const Fragment& group) {
  const auto& s = *sp;
  auto all = s.idempotents();
  if (!all) throw Unsupported(s.name() + " is not finite");
  auto chain = projection_chain(s, *all);
  Pushforward out;
  out.minimum = chain.back();
  const auto& e = out.minimum;
  for (const auto& f : *all)
    if (s.multiply(e, f) != e) throw InvalidInput("chain end is not below " + s.format(f));
  if (source.idempotent != e) throw InvalidInput("source fragment is not the L-class of the minimum idempotent");
  if (!source.complete || !group.complete) throw InvalidInput("pushforward needs complete fragments");
  auto image = s.group_image();
  if (!image) throw Unsupported(s.name() + " has no group image");
  // σ restricted to Se = L_e must be a bijection onto G(S).
  std::vector<std::size_t> to_group(source.size());
  std::vector<int> hits(group.size(), 0);
  for (std::size_t x = 0; x < source.size(); ++x) {
    auto g = group.find(image->project(source.vertices[x]));
    if (!g) throw InvalidInput("sigma maps " + s.format(source.vertices[x]) + " outside the group fragment");
    to_group[x] = *g;
    ++hits[*g];
  }
  for (std::size_t g = 0; g < group.size(); ++g)
    if (hits[g] != 1) throw InvalidInput("sigma restricted to Se is not bijective");

  out.source = check_witness(source, w);
  PropertyAWitness p;
  p.R = w.R;
  p.eps = w.eps;
  p.C = w.C;
  p.interior.assign(group.size(), false);
  p.xi.assign(group.size(), {});
  for (std::size_t x = 0; x < source.size(); ++x) {
    auto g = to_group[x];
    p.interior[g] = w.interior[x];
    for (const auto& [z, q] : w.xi[x]) p.xi[g].emplace_back(to_group[z], q);
  }
  out.pushed = check_witness(group, p);
  out.witness = std::move(p);
  return out;
}

nlohmann::json witness_to_json(const Fragment& f, const PropertyAWitness& w) {
  nlohmann::json j;
  j["params"] = {{"R", w.R}, {"eps", to_string(w.eps)}, {"C", w.C}};
  auto& vectors = j["vectors"] = nlohmann::json::object();
  auto& interior = j["interior"] = nlohmann::json::array();
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (!w.interior[x]) continue;
    auto name = f.oracle->format(f.vertices[x]);
    interior.push_back(name);
    auto& list = vectors[name] = nlohmann::json::array();
    for (const auto& [z, q] : w.xi[x]) list.push_back({f.oracle->format(f.vertices[z]), to_string(q)});
  }
  return j;
}

PropertyAWitness witness_from_json(const nlohmann::json& j, const Fragment& f) {
  try {
    PropertyAWitness w;
    const auto& p = j.at("params");
    w.R = p.at("R").get<int>();
    w.C = p.at("C").get<int>();
    w.eps = parse_rational(p.at("eps").get<std::string>());
    w.interior.assign(f.size(), false);
    w.xi.assign(f.size(), {});
    for (const auto& name : j.at("interior")) {
      auto x = f.at(f.oracle->parse(name.get<std::string>()));
      w.interior[x] = true;
      for (const auto& entry : j.at("vectors").at(name.get<std::string>())) {
        auto z = f.at(f.oracle->parse(entry.at(0).get<std::string>()));
        w.xi[x].emplace_back(z, parse_rational(entry.at(1).get<std::string>()));
      }
    }
    return w;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("witness JSON: ") + e.what());
  }
}

}  // namespace schutz

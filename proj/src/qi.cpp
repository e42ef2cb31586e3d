#include "schutz/qi.hpp"

#include "schutz/error.hpp"
#include "schutz/folner.hpp"

#include <algorithm>
#include <set>

namespace schutz {

namespace {

std::vector<std::vector<Distance>> table(const Fragment& f) {
  std::vector<std::vector<Distance>> t;
  t.reserve(f.size());
  for (std::size_t v = 0; v < f.size(); ++v) t.push_back(f.distances_from(v));
  return t;
}

// Least R with every certifiable target within R of the image; counts the undecidable ones.
int density_radius(const Fragment& Y, const VertexMap& phi, std::size_t& censored) {
  std::set<std::size_t> image(phi.begin(), phi.end());
  int R = 0;
  censored = 0;
  for (std::size_t y = 0; y < Y.size(); ++y) {
    auto d = Y.bfs(y);
    int best = -1;
    for (auto v : image)
      if (d[v] >= 0 && (best < 0 || d[v] < best)) best = d[v];
    // A fragment path is an upper bound; it is exact only if the ball is interior.
    if (best >= 0 && Y.interior(y, best)) {
      R = std::max(R, best);
    } else {
      ++censored;
    }
  }
  return R;
}

}  // namespace

VertexMap map_vertices(const Fragment& X, const Fragment& Y, const std::function<Element(const Element&)>& phi) {
  VertexMap out;
  out.reserve(X.size());
  for (const auto& x : X.vertices) {
    auto y = phi(x);
    auto v = Y.find(y);
    if (!v) throw InvalidInput("image " + Y.oracle->format(y) + " of " + X.oracle->format(x) + " is outside Y");
    out.push_back(*v);
  }
  return out;
}

QIWitness check_qi(const Fragment& X, const Fragment& Y, const VertexMap& phi, const Rational& M, const Rational& C,
                   int R) {
  if (phi.size() != X.size()) throw InvalidInput("vertex map must be total on X");
  if (M < 1 || C < 0 || R < 0) throw InvalidInput("QI constants need M >= 1, C >= 0, R >= 0");
  QIWitness w;
  w.phi = phi;
  w.M = M;
  w.C = C;
  w.R = R;
  auto dy = table(Y);
  for (std::size_t a = 0; a < X.size(); ++a) {
    auto dx = X.distances_from(a);
    for (std::size_t b = a + 1; b < X.size(); ++b) {
      const auto& p = dx[b];
      const auto& q = dy[phi[a]][phi[b]];
      if (!p.exact() || !q.exact()) {
        ++w.pairs_censored;
        continue;
      }
      if (!p.is_finite() || !q.is_finite()) {
        if (p.is_finite() != q.is_finite())
          w.violations.push_back(X.oracle->format(X.vertices[a]) + ", " + X.oracle->format(X.vertices[b]) +
                                 ": finite and infinite distance mixed");
        continue;
      }
      ++w.pairs_checked;
      Rational u(static_cast<long>(p.value)), v(static_cast<long>(q.value));
      if (u / M - C > v || v > M * u + C)
        w.violations.push_back(X.oracle->format(X.vertices[a]) + ", " + X.oracle->format(X.vertices[b]) +
                               ": dX=" + p.str() + " dY=" + q.str());
    }
  }
  if (w.pairs_checked == 0 && X.size() > 1) throw InvalidInput("insufficient exact pairs");
  std::set<std::size_t> image(phi.begin(), phi.end());
  for (std::size_t y = 0; y < Y.size(); ++y) {
    auto ball = Y.ball(y, R);
    bool hit = std::any_of(ball.begin(), ball.end(), [&](std::size_t v) { return image.count(v) > 0; });
    if (hit) continue;
    if (Y.interior(y, R))
      w.violations.push_back(Y.oracle->format(Y.vertices[y]) + " is farther than " + std::to_string(R) +
                             " from the image");
    else
      ++w.targets_censored;
  }
  return w;
}

QIConstants estimate_qi_constants(const Fragment& X, const Fragment& Y, const VertexMap& phi, int max_M) {
  if (phi.size() != X.size()) throw InvalidInput("vertex map must be total on X");
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  auto dy = table(Y);
  for (std::size_t a = 0; a < X.size(); ++a) {
    auto dx = X.distances_from(a);
    for (std::size_t b = a + 1; b < X.size(); ++b) {
      const auto& p = dx[b];
      const auto& q = dy[phi[a]][phi[b]];
      if (p.is_finite() && q.is_finite()) pairs.emplace_back(p.value, q.value);
    }
  }
  if (pairs.empty() && X.size() > 1) throw InvalidInput("insufficient exact pairs");
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  QIConstants best;
  bool have = false;
  for (int m = 1; m <= max_M; ++m) {
    Rational M(m), C(0);
    for (auto [u, v] : pairs) {
      Rational U(static_cast<long>(u)), V(static_cast<long>(v));
      C = std::max({C, U / M - V, V - M * U});
    }
    if (!have || M + C < best.M + best.C) {
      best.M = M;
      best.C = C;
      have = true;
    }
  }
  std::size_t censored = 0;
  best.R = density_radius(Y, phi, censored);
  best.pairs = pairs.size();
  return best;
}

QIConstants compose_constants(const QIConstants& phi, const QIConstants& psi) {
  QIConstants out;
  out.M = phi.M * psi.M;
  out.C = psi.M * phi.C + psi.C;
  // Any z is within R_ψ of ψ(y), y within R_φ of φ(x), and ψ moves that by ≤ M_ψ R_φ + C_ψ.
  Rational r = Rational(psi.R) + psi.M * Rational(phi.R) + psi.C;
  out.R = static_cast<int>(ceil_to_long(r));
  return out;
}

PullbackReport pullback_folner(const Fragment& X, const Fragment& Y, const VertexMap& phi, const QIConstants& qi,
                               const std::vector<std::size_t>& F_T, int R_S) {
  if (F_T.empty()) throw InvalidInput("empty target Folner set");
  PullbackReport rep;
  rep.R_S = R_S;
  rep.R_T = static_cast<int>(ceil_to_long(qi.M * Rational(R_S) + qi.C));
  std::set<std::size_t> target(F_T.begin(), F_T.end());
  std::vector<std::size_t> fibers(Y.size(), 0);
  for (std::size_t x = 0; x < X.size(); ++x) {
    ++fibers[phi[x]];
    if (target.count(phi[x])) rep.F_S.push_back(x);
  }
  if (rep.F_S.empty()) throw InvalidInput("phi misses the target set");
  rep.source_ratio = neighborhood_ratio(X, rep.F_S, R_S);
  rep.target_ratio = neighborhood_ratio(Y, F_T, rep.R_T);
  std::set<std::size_t> nbhd;
  for (auto t : target)
    for (auto u : Y.ball(t, rep.R_T)) nbhd.insert(u);
  std::size_t pre = 0;
  for (std::size_t x = 0; x < X.size(); ++x)
    if (nbhd.count(phi[x])) ++pre;
  rep.preimage_bound = Rational(static_cast<long>(pre)) / Rational(static_cast<long>(rep.F_S.size()));
  rep.fiber_min = SIZE_MAX;
  for (auto u : nbhd) {
    rep.fiber_min = std::min(rep.fiber_min, fibers[u]);
    rep.fiber_max = std::max(rep.fiber_max, fibers[u]);
  }
  if (rep.fiber_min == 0) throw InvalidInput("phi is not surjective onto the target neighborhood");
  rep.fiber_bound = Rational(static_cast<long>(rep.fiber_max)) / Rational(static_cast<long>(rep.fiber_min)) *
                    rep.target_ratio;
  return rep;
}

ExtensionReport surjective_qi_extension(const Fragment& X, const Fragment& Y, const VertexMap& phi,
                                        const QIConstants& qi, std::size_t group_order) {
  if (phi.size() != X.size()) throw InvalidInput("vertex map must be total on X");
  if (group_order == 0) throw InvalidInput("group order must be positive");
  ExtensionReport rep;
  rep.group_order = group_order;
  rep.assigned.assign(X.size(), {});
  std::vector<std::size_t> owner_of_image(Y.size(), SIZE_MAX);
  for (std::size_t x = 0; x < X.size(); ++x)
    if (owner_of_image[phi[x]] == SIZE_MAX) owner_of_image[phi[x]] = x;
  for (std::size_t y = 0; y < Y.size(); ++y)
    if (owner_of_image[y] != SIZE_MAX) rep.assigned[owner_of_image[y]].push_back(y);
  for (std::size_t y = 0; y < Y.size(); ++y) {
    if (owner_of_image[y] != SIZE_MAX) continue;
    // Nearest image point within R, least loaded first, then first in order.
    auto d = Y.bfs(y);
    std::size_t pick = SIZE_MAX;
    for (std::size_t x = 0; x < X.size(); ++x) {
      int dx = d[phi[x]];
      if (dx < 0 || dx > qi.R) continue;
      if (pick == SIZE_MAX || dx < d[phi[pick]] ||
          (dx == d[phi[pick]] && rep.assigned[x].size() < rep.assigned[pick].size()))
        pick = x;
    }
    if (pick != SIZE_MAX) rep.assigned[pick].push_back(y);
  }
  for (auto& a : rep.assigned) {
    std::sort(a.begin(), a.end());
    rep.multiplicity = std::max(rep.multiplicity, a.size());
  }
  if (rep.multiplicity > group_order)
    throw InvalidInput("group of order " + std::to_string(group_order) + " is smaller than the assignment multiplicity " +
                       std::to_string(rep.multiplicity));
  rep.psi.assign(X.size(), {});
  std::set<std::size_t> image;
  for (std::size_t x = 0; x < X.size(); ++x) {
    for (std::size_t g = 0; g < group_order; ++g) {
      std::size_t y = g < rep.assigned[x].size() ? rep.assigned[x][g] : phi[x];
      rep.psi[x].push_back(y);
      image.insert(y);
    }
  }
  rep.covered = image.size();
  for (std::size_t y = 0; y < Y.size(); ++y) {
    if (Y.interior(y, qi.R)) {
      ++rep.certified_targets;
      if (!image.count(y)) rep.violations.push_back(Y.oracle->format(Y.vertices[y]) + " is not covered");
    } else {
      ++rep.censored_targets;
    }
  }
  if (rep.certified_targets == 0) throw InvalidInput("fragment too small to certify density");
  rep.surjective = rep.violations.empty();

  // ψ stays within R of φ, so (M, C + 2R + M) bounds it against d_X + [g ≠ g']; check on exact pairs.
  QIConstants k;
  k.M = qi.M;
  k.C = qi.C + Rational(2 * qi.R) + qi.M;
  k.R = 0;
  auto dy = table(Y);
  for (std::size_t a = 0; a < X.size(); ++a) {
    auto dx = X.distances_from(a);
    for (std::size_t b = a; b < X.size(); ++b) {
      if (!dx[b].is_finite()) continue;
      for (std::size_t g = 0; g < group_order; ++g)
        for (std::size_t h = 0; h < group_order; ++h) {
          if (a == b && g >= h) continue;
          const auto& q = dy[rep.psi[a][g]][rep.psi[b][h]];
          if (!q.is_finite()) continue;
          Rational u(static_cast<long>(dx[b].value + (g != h ? 1 : 0))), v(static_cast<long>(q.value));
          ++k.pairs;
          if (u / k.M - k.C > v || v > k.M * u + k.C)
            rep.violations.push_back("extension breaks the QI bound at " + X.oracle->format(X.vertices[a]) + ", " +
                                     X.oracle->format(X.vertices[b]));
        }
    }
  }
  rep.constants = k;
  return rep;
}

}  // namespace schutz

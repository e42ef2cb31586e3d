#include "schutz/folner.hpp"

#include "schutz/error.hpp"
#include "schutz/semigroup.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace schutz {

std::string to_string(FolnerMode m) {
  switch (m) {
    case FolnerMode::DomainMeasurable: return "domain-measurable";
    case FolnerMode::Amenable: return "amenable";
    case FolnerMode::Neighborhood: return "neighborhood";
  }
  return "?";
}

FolnerMode parse_folner_mode(std::string_view text) {
  if (text == "domain-measurable" || text == "domain") return FolnerMode::DomainMeasurable;
  if (text == "amenable") return FolnerMode::Amenable;
  if (text == "neighborhood") return FolnerMode::Neighborhood;
  throw ParseError("unknown Folner mode '" + std::string(text) + "'");
}

Rational domain_ratio(const SemigroupOracle& s, const std::vector<Element>& F, const Element& t) {
  if (F.empty()) throw InvalidInput("empty Folner candidate");
  std::unordered_set<Element, ElementHash> in_f(F.begin(), F.end());
  std::unordered_set<Element, ElementHash> outside;
  auto dom = s.multiply(s.star(t), t);
  for (const auto& x : F) {
    if (s.multiply(dom, x) != x) continue;
    auto y = s.multiply(t, x);
    if (!in_f.count(y)) outside.insert(y);
  }
  return Rational(static_cast<long>(outside.size())) / Rational(static_cast<long>(in_f.size()));
}

bool inside_domain(const SemigroupOracle& s, const std::vector<Element>& F, const Element& t) {
  auto dom = s.multiply(s.star(t), t);
  return std::all_of(F.begin(), F.end(), [&](const Element& x) { return s.multiply(dom, x) == x; });
}

Rational neighborhood_ratio(const Fragment& f, const std::vector<std::size_t>& F, int R) {
  if (F.empty()) throw InvalidInput("empty Folner candidate");
  std::set<std::size_t> in_f(F.begin(), F.end());
  std::set<std::size_t> nbhd;
  for (auto v : in_f) {
    if (!f.interior(v, R))
      throw Censored("N_" + std::to_string(R) + " of " + f.oracle->format(f.vertices[v]) +
                     " reaches the fragment boundary");
    for (auto u : f.ball(v, R)) nbhd.insert(u);
  }
  return Rational(static_cast<long>(nbhd.size())) / Rational(static_cast<long>(in_f.size()));
}

namespace {

struct Candidate {
  std::vector<Element> F;
  std::vector<Rational> ratios;
  Rational worst;
  std::vector<std::string> key;  // sorted normal forms, for tie-breaking
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.F.size() != b.F.size()) return a.F.size() < b.F.size();
  return a.key < b.key;
}

// Ratios of a candidate; nullopt if it violates a hard constraint or is censored.
std::optional<Candidate> evaluate(const SemigroupOracle& s, const Fragment& frag, const std::vector<std::size_t>& idx,
                                  const std::vector<Element>& tests, FolnerMode mode, int R) {
  Candidate c;
  for (auto i : idx) c.F.push_back(frag.vertices[i]);
  for (const auto& x : c.F) c.key.push_back(s.format(x));
  std::sort(c.key.begin(), c.key.end());
  c.worst = 0;
  if (mode == FolnerMode::Neighborhood) {
    try {
      c.ratios.push_back(neighborhood_ratio(frag, idx, R));
    } catch (const Censored&) {
      return std::nullopt;
    }
    c.worst = c.ratios.back() - 1;  // excess over 1, compared against ε
    return c;
  }
  for (const auto& t : tests) {
    if (mode == FolnerMode::Amenable && !inside_domain(s, c.F, t)) return std::nullopt;
    c.ratios.push_back(domain_ratio(s, c.F, t));
    c.worst = std::max(c.worst, c.ratios.back());
  }
  return c;
}

Rational boundary_ratio(const Fragment& f, const std::vector<std::size_t>& idx) {
  std::set<std::size_t> in_f(idx.begin(), idx.end()), outer;
  for (auto v : idx)
    for (auto u : f.neighbours[v])
      if (!in_f.count(u)) outer.insert(u);
  return Rational(static_cast<long>(outer.size())) / Rational(static_cast<long>(in_f.size()));
}

}  // namespace

FolnerSearchResult folner_search(OraclePtr oracle, const std::vector<Element>& tests, const Rational& eps,
                                 FolnerMode mode, const FolnerSearchOptions& opt) {
  const auto& s = *oracle;
  if (eps <= 0) throw InvalidInput("epsilon must be positive");
  if (mode != FolnerMode::Neighborhood && tests.empty()) throw InvalidInput("test set is empty");
  std::size_t prefix = opt.prefix ? opt.prefix : s.default_prefix(4);
  std::vector<Element> centers = opt.centers;
  if (centers.empty()) centers = s.generator_prefix(std::min<std::size_t>(prefix, 4));
  const int frag_radius = opt.max_radius + (mode == FolnerMode::Neighborhood ? opt.R : 0);

  FolnerSearchResult res;
  res.scope = "balls r<=" + std::to_string(opt.max_radius) + ", subsets<=" + std::to_string(opt.max_subset) +
              " of " + std::to_string(opt.subset_pool) + " pool vertices, prefix " + std::to_string(prefix);
  std::vector<Fragment> frags;
  for (const auto& c : centers) frags.push_back(build_fragment(oracle, c, {frag_radius, prefix}));

  std::optional<Candidate> best;
  auto consider = [&](Candidate&& c) {
    if (c.worst > eps) return;
    if (!best || better(c, *best)) best = std::move(c);
  };

  // Balls first.
  for (std::size_t ci = 0; ci < frags.size(); ++ci) {
    const auto& f = frags[ci];
    std::size_t previous = 0;
    for (int r = 0; r <= opt.max_radius; ++r) {
      auto idx = f.ball(0, r);
      if (r > 0 && idx.size() == previous) break;  // the class closed
      previous = idx.size();
      auto c = evaluate(s, f, idx, tests, mode, opt.R);
      if (!c) continue;
      BallEvidence ev{s.format(centers[ci]), r, idx.size(), c->worst, boundary_ratio(f, idx)};
      res.evidence.push_back(ev);
      bool passed = c->worst <= eps;
      consider(std::move(*c));
      if (passed) break;
    }
  }
  if (!best) {
    // Exhaustive subsets by increasing size.
    for (std::size_t k = 1; k <= opt.max_subset && !best; ++k) {
      for (const auto& f : frags) {
        std::size_t n = std::min(opt.subset_pool, f.size());
        if (k > n) continue;
        std::vector<std::size_t> comb(k);
        for (std::size_t i = 0; i < k; ++i) comb[i] = i;
        while (true) {
          if (++res.subsets_tried > opt.subset_budget) {
            res.scope += " (subset budget exhausted)";
            goto done;
          }
          if (auto c = evaluate(s, f, comb, tests, mode, opt.R)) consider(std::move(*c));
          std::size_t i = k;
          while (i > 0 && comb[i - 1] == n - k + i - 1) --i;
          if (i == 0) break;
          ++comb[i - 1];
          for (std::size_t j = i; j < k; ++j) comb[j] = comb[j - 1] + 1;
        }
      }
    }
  }
done:
  if (best) {
    FolnerCertificate cert;
    cert.mode = mode;
    cert.eps = eps;
    cert.R = opt.R;
    cert.F = best->F;
    cert.tests = mode == FolnerMode::Neighborhood ? std::vector<Element>{} : tests;
    cert.ratios = best->ratios;
    cert.localized = true;
    res.certificate = std::move(cert);
  }
  return res;
}

FolnerRecheck verify_folner(OraclePtr oracle, const FolnerCertificate& cert, const FolnerSearchOptions& opt) {
  const auto& s = *oracle;
  FolnerRecheck out;
  if (cert.F.empty()) {
    out.problems.push_back("F is empty");
    return out;
  }
  // Recount on printed normal forms, independent of the hashing path.
  std::set<std::string> F;
  for (const auto& x : cert.F) F.insert(s.format(x));
  if (F.size() != cert.F.size()) out.problems.push_back("F lists a repeated element");
  if (cert.localized) {
    auto e = s.multiply(s.star(cert.F[0]), cert.F[0]);
    for (const auto& x : cert.F)
      if (s.multiply(s.star(x), x) != e) out.problems.push_back("F is not inside one L-class");
  }
  if (cert.mode == FolnerMode::Neighborhood) {
    if (cert.ratios.size() != 1) {
      out.problems.push_back("neighborhood certificate needs one ratio");
      return out;
    }
    std::size_t prefix = opt.prefix ? opt.prefix : s.default_prefix(4);
    int radius = 0;
    // Grow the fragment around F until every R-ball around F is interior.
    Fragment frag;
    for (radius = cert.R + 1;; radius *= 2) {
      frag = build_fragment(oracle, cert.F[0], {radius, prefix});
      bool ok = true;
      for (const auto& x : cert.F) {
        auto v = frag.find(x);
        if (!v || !frag.interior(*v, cert.R)) ok = false;
      }
      if (ok || radius > 1 << 14) break;
    }
    std::set<std::string> nbhd;
    for (const auto& x : cert.F) {
      auto v = frag.find(x);
      if (!v || !frag.interior(*v, cert.R)) {
        out.problems.push_back("neighborhood of " + s.format(x) + " could not be certified");
        return out;
      }
      auto dist = frag.bfs(*v);
      for (std::size_t u = 0; u < frag.size(); ++u)
        if (dist[u] >= 0 && dist[u] <= cert.R) nbhd.insert(s.format(frag.vertices[u]));
    }
    Rational ratio = Rational(static_cast<long>(nbhd.size())) / Rational(static_cast<long>(F.size()));
    if (ratio != cert.ratios[0]) out.problems.push_back("recounted ratio " + ratio.str() + " differs");
    if (ratio > 1 + cert.eps) out.problems.push_back("ratio exceeds 1 + eps");
  } else {
    if (cert.ratios.size() != cert.tests.size()) {
      out.problems.push_back("one ratio per test element expected");
      return out;
    }
    for (std::size_t i = 0; i < cert.tests.size(); ++i) {
      const auto& t = cert.tests[i];
      auto dom = s.multiply(s.star(t), t);
      std::set<std::string> escaped;
      for (const auto& x : cert.F) {
        bool in_dom = s.multiply(dom, x) == x;
        if (cert.mode == FolnerMode::Amenable && !in_dom)
          out.problems.push_back(s.format(x) + " is outside D for " + s.format(t));
        if (!in_dom) continue;
        auto y = s.format(s.multiply(t, x));
        if (!F.count(y)) escaped.insert(y);
      }
      Rational ratio = Rational(static_cast<long>(escaped.size())) / Rational(static_cast<long>(F.size()));
      if (ratio != cert.ratios[i]) out.problems.push_back("recounted ratio for " + s.format(t) + " differs");
      if (ratio > cert.eps) out.problems.push_back("ratio for " + s.format(t) + " exceeds eps");
    }
  }
  out.ok = out.problems.empty();
  return out;
}

FolnerCertificate project_certificate(const SemigroupOracle& s, const FolnerCertificate& pc, const Rational& eps) {
  if (pc.mode == FolnerMode::Neighborhood) throw InvalidInput("projection applies to test-set certificates");
  FolnerCertificate out;
  out.mode = pc.mode;
  out.eps = eps;
  out.R = pc.R;
  std::unordered_set<Element, ElementHash> seen;
  for (const auto& x : pc.F) {
    const auto& first = *x.as<Pair>().first;
    if (seen.insert(first).second) out.F.push_back(first);
  }
  seen.clear();
  for (const auto& t : pc.tests) {
    const auto& first = *t.as<Pair>().first;
    if (seen.insert(first).second) out.tests.push_back(first);
  }
  for (const auto& t : out.tests) out.ratios.push_back(domain_ratio(s, out.F, t));
  auto e = s.multiply(s.star(out.F[0]), out.F[0]);
  out.localized = std::all_of(out.F.begin(), out.F.end(),
                              [&](const Element& x) { return s.multiply(s.star(x), x) == e; });
  return out;
}

}  // namespace schutz

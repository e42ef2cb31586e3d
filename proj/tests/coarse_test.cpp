#include <doctest.h>

#include "schutz/catalogue.hpp"
#include "schutz/error.hpp"
#include "schutz/fl.hpp"
#include "schutz/folner.hpp"
#include "schutz/qi.hpp"

#include <map>
#include <numeric>
#include <set>

using namespace schutz;

namespace {

std::vector<std::size_t> iota_k1(std::size_t n) {
  std::vector<std::size_t> k(n);
  std::iota(k.begin(), k.end(), 0);
  return k;
}

std::vector<std::size_t> vertices_of(const Fragment& f, const std::vector<std::string>& names) {
  std::vector<std::size_t> out;
  for (const auto& n : names) out.push_back(f.at(f.oracle->parse(n)));
  return out;
}

// Reduced words over x1^±1, x2^±1 as letters ±1, ±2.
using Word = std::vector<int>;

Word reduce_mul(const Word& a, const Word& b) {
  Word out = a;
  for (int l : b) {
    if (!out.empty() && out.back() == -l)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

std::set<Word> free_ball(int r) {
  std::set<Word> ball{{}};
  std::vector<Word> layer{{}};
  for (int d = 0; d < r; ++d) {
    std::vector<Word> next;
    for (const auto& w : layer)
      for (int l : {1, -1, 2, -2}) {
        auto v = reduce_mul(w, {l});
        if (ball.insert(v).second) next.push_back(v);
      }
    layer = next;
  }
  return ball;
}

// Bicyclic shift model: (i, j) = a^i a*^j.
std::pair<long, long> bic_mul(std::pair<long, long> x, std::pair<long, long> y) {
  long m = std::max(x.second, y.first);
  return {x.first - x.second + m, y.second - y.first + m};
}

}  // namespace

TEST_CASE("FL on the two semilattice structures of N") {
  auto mx = nat_max();
  auto cert = check_fl(*mx, {0}, 1, {3, 0});
  CHECK(cert.verdict == Verdict::Certified);
  CHECK(cert.edges_checked > 0);

  auto mn = nat_min();
  auto ref = check_fl(*mn, iota_k1(20), 20, {1, 21});
  REQUIRE(ref.verdict == Verdict::Refuted);
  REQUIRE(ref.witness);
  CHECK(mn->format(ref.witness->x) == "21");
  CHECK(mn->format(ref.witness->y) == "21");
  CHECK(ref.witness->label == 20);
  // Transcript: no listed word reaches y.
  for (const auto& layer : ref.transcript)
    for (const auto& z : layer) CHECK(z != ref.witness->y);
}

TEST_CASE("min-N refutations sit at max(K1) + 1") {
  auto mn = nat_min();
  auto edges = collect_edges(*mn, {1, 12});
  for (std::uint32_t mask = 1; mask < (1u << 10); mask += 37) {
    std::vector<std::size_t> k1;
    for (std::size_t i = 0; i < 10; ++i)
      if (mask & (1u << i)) k1.push_back(i);
    for (int C : {1, 3, 10}) {
      auto r = check_fl(*mn, edges, k1, C);
      REQUIRE(r.verdict == Verdict::Refuted);
      CHECK(mn->format(r.witness->x) == std::to_string(k1.back() + 2));
    }
  }
}

TEST_CASE("K1 = K with C = 1 certifies every finitely generated family") {
  for (const auto* spec : {"bicyclic", "bicyclic-monoid", "polycyclic:2", "sym-inverse:3", "box:Z:2,4", "free:2",
                           "Z", "cyclic:5", "product:sym-inverse:2*cyclic:2"}) {
    auto s = make_oracle(spec);
    auto n = *s->generator_count();
    auto r = check_fl(*s, iota_k1(n), 1, {2, n});
    INFO(spec);
    CHECK(r.verdict == Verdict::Certified);
  }
}

TEST_CASE("check_fl over precomputed edges matches the scope form") {
  auto s = make_oracle("polycyclic:2");
  FLScope scope{3, 5};
  auto edges = collect_edges(*s, scope);
  for (auto k1 : std::vector<std::vector<std::size_t>>{{0, 1}, {0, 2}, {0, 1, 2, 3}}) {
    auto a = check_fl(*s, k1, 2, scope);
    auto b = check_fl(*s, edges, k1, 2);
    CHECK(a.verdict == b.verdict);
    CHECK(a.edges_checked == b.edges_checked);
  }
}

TEST_CASE("cover form on the bicyclic monoid with zero") {
  auto s = bicyclic();
  auto res = fl_cover_form(*s, {0, 1, 2}, 1, 2, {4, 3});
  REQUIRE(res.verdict == Verdict::Certified);
  CHECK(res.word_length == 2);
  // Model check: the cylinder {|i - j| <= 2} of the radius-4 ball is covered.
  std::vector<std::pair<long, long>> cover;
  bool has_zero = false;
  for (const auto& m : res.cover) {
    if (m.is_zero()) {
      has_zero = true;
      continue;
    }
    auto f = m.as<BicyclicForm>();
    cover.emplace_back(f.i, f.j);
  }
  CHECK(has_zero);
  std::size_t cylinder = 0;
  for (long i = 0; i <= 4; ++i)
    for (long j = 0; i + j <= 4; ++j) {
      if (std::abs(i - j) > 2) continue;
      ++cylinder;
      bool hit = std::any_of(cover.begin(), cover.end(),
                             [&](auto m) { return bic_mul(m, {j, j}) == std::make_pair(i, j); });
      CHECK(hit);
    }
  // The zero class adds one more element.
  CHECK(res.cylinder_size == cylinder + 1);
}

TEST_CASE("cover form for a group is the R-ball") {
  auto z = integers();
  auto res = fl_cover_form(*z, {0, 1}, 1, 2, {3, 2});
  REQUIRE(res.verdict == Verdict::Certified);
  std::set<std::string> got;
  for (const auto& m : res.cover) got.insert(z->format(m));
  CHECK(got == std::set<std::string>{"-2", "-1", "0", "1", "2"});
}

TEST_CASE("cover form refutes min-N with the same witness") {
  auto mn = nat_min();
  auto res = fl_cover_form(*mn, iota_k1(20), 20, 0, {1, 21});
  REQUIRE(res.verdict == Verdict::Refuted);
  CHECK(mn->format(*res.counterexample) == "21");
}

TEST_CASE("FL gives a cover, and a cover at R = 1 gives FL") {
  for (const auto* spec : {"bicyclic", "polycyclic:2", "nat-max", "nat-min", "sym-inverse:3"}) {
    auto s = make_oracle(spec);
    const auto m = s->default_prefix(4);
    for (auto k1 : std::vector<std::vector<std::size_t>>{{0}, {0, 1}, {0, 1, 2}})
      for (int R = 1; R <= 2; ++R) {
        INFO(spec << " R=" << R << " |K1|=" << k1.size());
        auto b = fl_cover_form(*s, k1, 2, R, {1, m});
        if (check_fl(*s, k1, 2, {2 + R, m}).verdict == Verdict::Certified) CHECK(b.verdict == Verdict::Certified);
        auto c = fl_cover_form(*s, k1, 2, 1, {3, m});
        if (c.verdict == Verdict::Certified)
          CHECK(check_fl(*s, k1, static_cast<int>(c.word_length), {1, m}).verdict == Verdict::Certified);
      }
  }
}

TEST_CASE("a fixed (K1, C) can split the two forms") {
  // In I_3 the inverse 3-cycle needs the word c^2 over {c, t}.
  auto s = make_oracle("sym-inverse:3");
  auto fl = check_fl(*s, {0, 1}, 1, {2, 4});
  REQUIRE(fl.verdict == Verdict::Refuted);
  CHECK(fl.witness->label == s->star_index(0));
  CHECK(fl_cover_form(*s, {0, 1}, 1, 1, {2, 4}).verdict == Verdict::Certified);
  CHECK(check_fl(*s, {0, 1}, 2, {2, 4}).verdict == Verdict::Certified);
}

TEST_CASE("Folner ratios on Z") {
  auto z = integers();
  std::vector<Element> tests{z->parse("1"), z->parse("-1")};
  std::vector<Element> F;
  for (int i = 0; i < 20; ++i) F.push_back(z->parse(std::to_string(i)));
  for (const auto& t : tests) CHECK(domain_ratio(*z, F, t) == Rational(1, 20));

  auto res = folner_search(z, tests, Rational(1, 10), FolnerMode::DomainMeasurable, {{z->parse("0")}});
  REQUIRE(res.certificate);
  // Smallest ball: [-5, 5] with ratio 1/11.
  CHECK(res.certificate->F.size() == 11);
  for (const auto& q : res.certificate->ratios) CHECK(q == Rational(1, 11));
  CHECK(verify_folner(z, *res.certificate, {}).ok);

  FolnerCertificate tampered = *res.certificate;
  tampered.ratios[0] = Rational(1, 12);
  CHECK_FALSE(verify_folner(z, tampered, {}).ok);
}

TEST_CASE("neighborhood-mode search on Z and on a box space") {
  auto z = integers();
  FolnerSearchOptions opt{{z->parse("0")}};
  opt.max_radius = 10;
  opt.max_subset = 0;
  auto res = folner_search(z, {}, Rational(1, 10), FolnerMode::Neighborhood, opt);
  REQUIRE(res.certificate);
  // (2r + 3) / (2r + 1) ≤ 11/10 first at r = 10.
  CHECK(res.certificate->F.size() == 21);
  CHECK(res.certificate->ratios[0] == Rational(23, 21));
  CHECK(verify_folner(z, *res.certificate, opt).ok);

  // On the 16-cycle a ball of 15 vertices has N_1 equal to the cycle.
  auto box = make_oracle("box:Z:2,4,8,16");
  FolnerSearchOptions bo{{box->parse("q[4](0)")}};
  bo.max_radius = 8;
  bo.max_subset = 0;
  auto cyc = folner_search(box, {}, Rational(1, 10), FolnerMode::Neighborhood, bo);
  REQUIRE(cyc.certificate);
  CHECK(cyc.certificate->F.size() == 15);
  CHECK(cyc.certificate->ratios[0] == Rational(16, 15));
  CHECK(verify_folner(box, *cyc.certificate, bo).ok);
}

TEST_CASE("neighborhood ratios match closed forms") {
  auto z = integers();
  auto f = build_fragment(z, z->parse("0"), {60, 2});
  for (int N : {10, 20, 40})
    for (int R : {1, 2}) {
      std::vector<std::size_t> F;
      for (int i = 0; i < N; ++i) F.push_back(f.at(z->parse(std::to_string(i - N / 2))));
      CHECK(neighborhood_ratio(f, F, R) == Rational(N + 2 * R, N));
    }
  // Censored at the boundary.
  CHECK_THROWS_AS(neighborhood_ratio(f, {f.at(z->parse("60"))}, 1), Censored);

  auto b = bicyclic();
  auto ray = build_fragment(b, b->parse("a^0 a*^2"), {20, 3});
  std::vector<std::string> names;
  for (int i = 0; i < 10; ++i) names.push_back("a^" + std::to_string(i) + " a*^2");
  CHECK(neighborhood_ratio(ray, vertices_of(ray, names), 1) == Rational(11, 10));

  auto box = make_oracle("box:Z:2,4,8,16,32");
  auto cyc = build_fragment(box, box->parse("q[5](0)"), {40, box->default_prefix(10)});
  REQUIRE(cyc.complete);
  REQUIRE(cyc.size() == 32);
  std::vector<std::string> arc;
  for (int i = 0; i < 16; ++i) arc.push_back("q[5](" + std::to_string(i) + ")");
  CHECK(neighborhood_ratio(cyc, vertices_of(cyc, arc), 2) == Rational(20, 16));
  std::vector<std::size_t> all(cyc.size());
  std::iota(all.begin(), all.end(), 0);
  CHECK(neighborhood_ratio(cyc, all, 3) == 1);
}

TEST_CASE("Folner set {1} for the free group with an identity adjoined") {
  auto s = make_oracle("unit+free:2");
  std::vector<Element> tests = s->generator_prefix(*s->generator_count());
  auto res = folner_search(s, tests, Rational(1, 100), FolnerMode::DomainMeasurable, {{s->generator(0)}});
  REQUIRE(res.certificate);
  REQUIRE(res.certificate->F.size() == 1);
  CHECK(s->format(res.certificate->F[0]) == "<1>");
  CHECK(verify_folner(s, *res.certificate, {}).ok);
}

TEST_CASE("free group: no Folner set at budget, ball ratios above 1/2") {
  auto s = free_group(2);
  std::vector<Element> tests = s->generator_prefix(4);
  FolnerSearchOptions opt;
  opt.centers = {s->parse("1")};
  opt.max_radius = 6;
  opt.subset_pool = 13;
  auto res = folner_search(s, tests, Rational(1, 2), FolnerMode::Amenable, opt);
  CHECK_FALSE(res.certificate);
  REQUIRE(res.evidence.size() == 7);
  for (const auto& ev : res.evidence) {
    // Brute-force count on reduced words.
    auto ball = free_ball(ev.radius);
    std::size_t worst = 0;
    for (int l : {1, -1, 2, -2}) {
      std::size_t out = 0;
      for (const auto& w : ball)
        if (!ball.count(reduce_mul({l}, w))) ++out;
      worst = std::max(worst, out);
    }
    CHECK(ev.size == ball.size());
    CHECK(ev.worst == Rational(static_cast<long>(worst), static_cast<long>(ball.size())));
    CHECK(ev.worst > Rational(1, 2));
    if (ev.radius < 6) CHECK(ev.boundary >= 1);
  }
}

TEST_CASE("amenable mode requires F inside every domain") {
  auto b = bicyclic_monoid();
  std::vector<Element> tests{b->parse("a^1 a*^0"), b->parse("a^0 a*^1")};
  auto res = folner_search(b, tests, Rational(1, 4), FolnerMode::Amenable, {{b->parse("a^0 a*^0")}});
  REQUIRE(res.certificate);
  for (const auto& t : tests) CHECK(inside_domain(*b, res.certificate->F, t));
  CHECK(verify_folner(b, *res.certificate, {}).ok);
}

TEST_CASE("projection of a product certificate") {
  auto s = symmetric_inverse(2);
  auto p = product_with_group(s, cyclic_group(2));
  auto tests = p->generator_prefix(*p->generator_count());
  Rational eps(1, 2);
  auto res = folner_search(p, tests, eps / 2, FolnerMode::DomainMeasurable, {});
  REQUIRE(res.certificate);
  CHECK(verify_folner(p, *res.certificate, {}).ok);
  auto proj = project_certificate(*s, *res.certificate, eps);
  CHECK(verify_folner(s, proj, {}).ok);
  CHECK(res.certificate->F.size() <= 2 * proj.F.size());
}

TEST_CASE("quasi-isometry checks and estimates") {
  auto z = integers();
  auto X = build_fragment(z, z->parse("0"), {40, 2});
  auto Y = build_fragment(z, z->parse("0"), {20, 2});
  auto half = map_vertices(X, Y, [&](const Element& x) {
    auto n = x.as<Integer>().n;
    return Element{Family::Integers, Integer{n >= 0 ? n / 2 : -((-n + 1) / 2)}};
  });
  auto k = estimate_qi_constants(X, Y, half);
  CHECK(k.M == 2);
  CHECK(k.C == Rational(1, 2));
  CHECK(k.R == 0);
  CHECK(check_qi(X, Y, half, k.M, k.C, k.R).ok());
  CHECK_FALSE(check_qi(X, Y, half, 1, 0, 0).ok());

  // Composition with y -> 3y.
  auto Z = build_fragment(z, z->parse("0"), {60, 2});
  auto triple = map_vertices(Y, Z, [&](const Element& y) {
    return Element{Family::Integers, Integer{3 * y.as<Integer>().n}};
  });
  auto k2 = estimate_qi_constants(Y, Z, triple);
  CHECK(k2.R == 1);
  VertexMap both;
  for (auto v : half) both.push_back(triple[v]);
  auto kc = compose_constants(k, k2);
  CHECK(check_qi(X, Z, both, kc.M, kc.C, kc.R).ok());
  auto direct = estimate_qi_constants(X, Z, both);
  CHECK(direct.M + direct.C <= kc.M + kc.C);

  // Bounded spaces: a constant map is a QI.
  auto s3 = symmetric_inverse(3);
  auto cls = build_fragment(s3, s3->parse("{1->1, 2->2, 3->3}"), {10, 3});
  auto pt = build_fragment(s3, s3->parse("{}"), {1, 3});
  VertexMap constant(cls.size(), 0);
  auto kb = estimate_qi_constants(cls, pt, constant);
  CHECK(check_qi(cls, pt, constant, kb.M, kb.C, kb.R).ok());
}

TEST_CASE("identity across generating prefixes is a QI with M from generator lengths") {
  auto s = symmetric_inverse(3);
  auto idempotents = *s->idempotents();
  for (const auto& seed : idempotents) {
    auto f3 = build_fragment(s, seed, {40, 3});
    auto f4 = build_fragment(s, seed, {40, 4});
    auto id = map_vertices(f4, f3, [](const Element& x) { return x; });
    auto k = estimate_qi_constants(f4, f3, id);
    std::uint64_t m = 1;
    for (std::size_t i = 0; i < 4; ++i) {
      auto g = s->generator(i);
      auto gg = s->multiply(s->star(g), g);
      auto fg = build_fragment(s, gg, {40, 3});
      m = std::max(m, path_distance(fg, gg, g).value);
    }
    CHECK(check_qi(f4, f3, id, Rational(static_cast<long>(m)), 0, 0).ok());
    CHECK(k.M + k.C <= Rational(static_cast<long>(m)));
  }
}

TEST_CASE("Folner pullback along a surjective QI") {
  auto z = integers();
  auto X = build_fragment(z, z->parse("0"), {60, 2});
  auto Y = build_fragment(z, z->parse("0"), {30, 2});
  auto half = map_vertices(X, Y, [&](const Element& x) {
    auto n = x.as<Integer>().n;
    return Element{Family::Integers, Integer{n >= 0 ? n / 2 : -((-n + 1) / 2)}};
  });
  QIConstants k{2, Rational(1, 2), 0, 0};
  std::vector<std::size_t> FT;
  for (int i = 0; i < 10; ++i) FT.push_back(Y.at(z->parse(std::to_string(i))));
  auto rep = pullback_folner(X, Y, half, k, FT, 1);
  CHECK(rep.F_S.size() == 20);
  CHECK(rep.R_T == 3);
  CHECK(rep.source_ratio == Rational(22, 20));
  CHECK(rep.target_ratio == Rational(16, 10));
  CHECK(rep.fiber_min == 2);
  CHECK(rep.fiber_max == 2);
  CHECK(rep.holds());

  // Z onto the 16-cycle of a box space.
  auto box = make_oracle("box:Z:2,4,8,16");
  auto cyc = build_fragment(box, box->parse("q[4](0)"), {20, box->default_prefix(8)});
  auto W = build_fragment(z, z->parse("0"), {24, 2});
  auto mod = map_vertices(W, cyc, [&](const Element& x) {
    auto n = ((x.as<Integer>().n % 16) + 16) % 16;
    return box->parse("q[4](" + std::to_string(n) + ")");
  });
  auto kq = estimate_qi_constants(W, cyc, mod);
  CHECK(check_qi(W, cyc, mod, kq.M, kq.C, kq.R).ok());
  std::vector<std::size_t> arc;
  for (int i = 0; i < 4; ++i) arc.push_back(cyc.at(box->parse("q[4](" + std::to_string(i) + ")")));
  auto rq = pullback_folner(W, cyc, mod, kq, arc, 1);
  CHECK(rq.F_S.size() == 12);
  CHECK(rq.source_ratio == Rational(18, 12));
  CHECK(rq.holds());
}

TEST_CASE("surjective extension over a finite group") {
  auto z = integers();
  auto X = build_fragment(z, z->parse("0"), {20, 2});
  // Already surjective, trivial group.
  auto id = map_vertices(X, X, [](const Element& x) { return x; });
  auto same = surjective_qi_extension(X, X, id, {1, 0, 0, 0}, 1);
  CHECK(same.surjective);
  for (std::size_t x = 0; x < X.size(); ++x) CHECK(same.psi[x][0] == id[x]);

  // x -> 2x hits the evens; Z/2 picks up the odd integers.
  auto Y = build_fragment(z, z->parse("0"), {40, 2});
  auto dbl = map_vertices(X, Y, [](const Element& x) {
    return Element{Family::Integers, Integer{2 * x.as<Integer>().n}};
  });
  auto k = estimate_qi_constants(X, Y, dbl);
  CHECK(k.R == 1);
  auto ext = surjective_qi_extension(X, Y, dbl, k, 2);
  CHECK(ext.multiplicity == 2);
  CHECK(ext.surjective);
  CHECK(ext.violations.empty());
  std::set<long> hit;
  for (const auto& row : ext.psi)
    for (auto y : row) hit.insert(Y.vertices[y].as<Integer>().n);
  for (long y = -39; y <= 39; ++y) CHECK(hit.count(y));
  CHECK_THROWS_AS(surjective_qi_extension(X, Y, dbl, k, 1), InvalidInput);

  // Bicyclic ray onto its odd positions.
  auto b = bicyclic();
  auto rx = build_fragment(b, b->parse("a^0 a*^0"), {15, 2});
  auto ry = build_fragment(b, b->parse("a^0 a*^0"), {31, 2});
  auto odd = map_vertices(rx, ry, [&](const Element& x) {
    return b->parse("a^" + std::to_string(2 * x.as<BicyclicForm>().i + 1) + " a*^0");
  });
  auto kb = estimate_qi_constants(rx, ry, odd);
  auto eb = surjective_qi_extension(rx, ry, odd, kb, 2);
  CHECK(eb.surjective);
  CHECK(eb.violations.empty());
  CHECK(eb.covered == ry.size());
}

#include "schutz/semigroup.hpp"

#include "schutz/error.hpp"

namespace schutz {

bool l_related(const SemigroupOracle& s, const Element& x, const Element& y) {
  return s.multiply(s.star(x), x) == s.multiply(s.star(y), y);
}

bool in_domain(const SemigroupOracle& s, const Element& of, const Element& x) {
  return s.multiply(s.multiply(s.star(of), of), x) == x;
}

bool natural_leq_exhaustive(const SemigroupOracle& s, const Element& a, const Element& b) {
  auto es = s.idempotents();
  if (!es) throw Unsupported(s.name() + " has no enumerable idempotent set");
  for (const auto& e : *es)
    if (s.multiply(b, e) == a) return true;
  return false;
}

bool natural_leq_closed_form(const SemigroupOracle& s, const Element& a, const Element& b) {
  return s.multiply(b, s.multiply(s.star(a), a)) == a;
}

bool natural_leq(const SemigroupOracle& s, const Element& a, const Element& b) {
  s.check_family(a);
  s.check_family(b);
  if (s.idempotents()) return natural_leq_exhaustive(s, a, b);
  return natural_leq_closed_form(s, a, b);
}

bool sigma_related(const SemigroupOracle& s, const Element& a, const Element& b) {
  s.check_family(a);
  s.check_family(b);
  if (auto g = s.group_image()) return g->project(a) == g->project(b);
  if (auto es = s.idempotents()) {
    for (const auto& e : *es)
      if (s.multiply(a, e) == s.multiply(b, e)) return true;
    return false;
  }
  throw Unsupported(s.name() + " has neither a closed-form group image nor a finite E(S)");
}

WordBall word_ball(const SemigroupOracle& s, int r, std::size_t m, std::size_t budget) {
  if (r < 1 || m < 1) throw InvalidInput("word_ball needs r >= 1 and m >= 1");
  auto gens = s.generator_prefix(m);
  WordBall ball;
  auto add = [&](const Element& x, int len) {
    if (ball.index.count(x)) return false;
    if (ball.elements.size() >= budget) throw BudgetExhausted("word ball exceeded " + std::to_string(budget) + " elements");
    ball.index.emplace(x, ball.elements.size());
    ball.elements.push_back(x);
    ball.length.push_back(len);
    return true;
  };
  for (const auto& g : gens) add(g, 1);
  std::size_t begin = 0;
  for (int len = 2; len <= r; ++len) {
    std::size_t end = ball.elements.size();
    for (std::size_t i = begin; i < end; ++i)
      for (const auto& g : gens) add(s.multiply(g, ball.elements[i]), len);
    begin = end;
    if (begin == ball.elements.size()) break;
  }
  return ball;
}

}  // namespace schutz

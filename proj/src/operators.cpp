#include "schutz/operators.hpp"

#include "schutz/error.hpp"
#include "schutz/semigroup.hpp"

#include <map>
#include <set>

namespace schutz {

using Triplet = Eigen::Triplet<Rational>;

Window::Window(OraclePtr o, std::vector<Fragment> frags) : oracle(std::move(o)), fragments(std::move(frags)) {
  for (const auto& f : fragments)
    for (const auto& x : f.vertices) add(x);
}

Window::Window(OraclePtr o, std::vector<Fragment> frags, int basis_radius)
    : oracle(std::move(o)), fragments(std::move(frags)) {
  for (const auto& f : fragments)
    for (std::size_t v = 0; v < f.size(); ++v)
      if (f.depth[v] <= basis_radius) add(f.vertices[v]);
}

Window::Window(OraclePtr o, std::vector<Element> elements) : oracle(std::move(o)) {
  for (const auto& x : elements) add(x);
}

Window Window::full(OraclePtr s) {
  auto elems = s->elements();
  auto idem = s->idempotents();
  if (!elems || !idem) throw Unsupported(s->name() + " is not finite");
  std::vector<Fragment> frags;
  int radius = static_cast<int>(elems->size());
  for (const auto& e : *idem) frags.push_back(build_fragment(s, e, {radius, *s->generator_count()}));
  Window w(s, std::move(frags));
  if (w.size() != elems->size()) throw Error("L-class fragments do not cover " + s->name());
  return w;
}

void Window::add(const Element& x) {
  if (index_.emplace(x, basis.size()).second) basis.push_back(x);
}

std::optional<std::size_t> Window::find(const Element& x) const {
  auto it = index_.find(x);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Window::at(const Element& x) const {
  auto i = find(x);
  if (!i) throw InvalidInput(oracle->format(x) + " is outside the window");
  return *i;
}

Distance Window::distance(std::size_t i, std::size_t j) const {
  const auto& s = *oracle;
  const auto& x = basis[i];
  const auto& y = basis[j];
  if (!l_related(s, x, y)) return Distance::infinite();
  for (const auto& f : fragments) {
    auto a = f.find(x), b = f.find(y);
    if (!a || !b) continue;
    auto d = f.distance(*a, *b);
    if (d.exact()) return d;
  }
  throw Censored("distance between " + s.format(x) + " and " + s.format(y) + " is not certified by the window");
}

namespace {

RationalMatrix from_triplets(Eigen::Index n, const std::vector<Triplet>& t) {
  RationalMatrix m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  m.prune(Rational(0));
  return m;
}

}  // namespace

FragmentOperator rep_V(const Window& w, const Element& s) {
  const auto& S = *w.oracle;
  const auto n = static_cast<Eigen::Index>(w.size());
  FragmentOperator op;
  op.label = "V[" + S.format(s) + "]";
  op.safe.assign(w.size(), true);
  auto dom = S.multiply(S.star(s), s);
  std::vector<Triplet> t;
  for (std::size_t x = 0; x < w.size(); ++x) {
    if (S.multiply(dom, w.basis[x]) != w.basis[x]) continue;
    auto y = w.find(S.multiply(s, w.basis[x]));
    if (!y) {
      op.safe[x] = false;
      continue;
    }
    t.emplace_back(static_cast<Eigen::Index>(*y), static_cast<Eigen::Index>(x), Rational(1));
  }
  op.matrix = from_triplets(n, t);
  return op;
}

FragmentOperator rep_diag(const Window& w, const Function& f) {
  const auto n = static_cast<Eigen::Index>(w.size());
  FragmentOperator op;
  op.label = "diag";
  op.safe.assign(w.size(), true);
  std::vector<Triplet> t;
  for (std::size_t x = 0; x < w.size(); ++x) {
    auto v = f(w.basis[x]);
    if (v != 0) t.emplace_back(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x), v);
  }
  op.matrix = from_triplets(n, t);
  return op;
}

FragmentOperator identity_operator(Eigen::Index n) {
  FragmentOperator op;
  op.label = "1";
  op.safe.assign(static_cast<std::size_t>(n), true);
  std::vector<Triplet> t;
  for (Eigen::Index i = 0; i < n; ++i) t.emplace_back(i, i, Rational(1));
  op.matrix = from_triplets(n, t);
  return op;
}

FragmentOperator operator*(const FragmentOperator& a, const FragmentOperator& b) {
  if (a.size() != b.size()) throw InvalidInput("operator sizes differ");
  FragmentOperator c;
  c.label = a.label + b.label;
  c.matrix = a.matrix * b.matrix;
  c.matrix.prune(Rational(0));
  c.safe.assign(b.safe.size(), true);
  for (Eigen::Index col = 0; col < b.size(); ++col) {
    bool ok = b.safe[static_cast<std::size_t>(col)];
    for (RationalMatrix::InnerIterator it(b.matrix, col); it && ok; ++it)
      ok = a.safe[static_cast<std::size_t>(it.row())];
    c.safe[static_cast<std::size_t>(col)] = ok;
  }
  return c;
}

FragmentOperator transpose(const FragmentOperator& a) {
  FragmentOperator t;
  t.label = a.label + "^T";
  t.matrix = RationalMatrix(a.matrix.transpose());
  // A row of a truncated operator can miss preimages outside the window, so no column is known exact.
  t.safe.assign(a.safe.size(), false);
  return t;
}

FragmentOperator transpose(const FragmentOperator& a, std::vector<bool> safe) {
  if (safe.size() != a.safe.size()) throw InvalidInput("safe set size differs");
  auto t = transpose(a);
  t.safe = std::move(safe);
  return t;
}

IdentityCheck compare_operators(const std::string& name, const FragmentOperator& a, const FragmentOperator& b,
                                const std::vector<bool>* mask,
                                const std::function<std::string(Eigen::Index)>& column_name) {
  if (a.size() != b.size()) throw InvalidInput("operator sizes differ");
  IdentityCheck chk;
  chk.name = name;
  for (Eigen::Index col = 0; col < a.size(); ++col) {
    auto c = static_cast<std::size_t>(col);
    if (mask && !(*mask)[c]) continue;
    if (!a.safe[c] || !b.safe[c]) {
      ++chk.columns_censored;
      continue;
    }
    ++chk.columns_checked;
    std::map<Eigen::Index, Rational> diff;
    for (RationalMatrix::InnerIterator it(a.matrix, col); it; ++it) diff[it.row()] += it.value();
    for (RationalMatrix::InnerIterator it(b.matrix, col); it; ++it) diff[it.row()] -= it.value();
    for (const auto& [row, v] : diff)
      if (v != 0) {
        if (chk.mismatches.size() < 16)
          chk.mismatches.push_back("column " + (column_name ? column_name(col) : std::to_string(col)));
        else if (chk.mismatches.size() == 16)
          chk.mismatches.push_back("...");
        break;
      }
  }
  return chk;
}

Distance propagation(const Window& w, const FragmentOperator& t) {
  Distance best = Distance::finite(0);
  for (Eigen::Index col = 0; col < t.matrix.outerSize(); ++col)
    for (RationalMatrix::InnerIterator it(t.matrix, col); it; ++it) {
      auto d = w.distance(static_cast<std::size_t>(it.row()), static_cast<std::size_t>(col));
      if (!d.is_finite()) return Distance::infinite();
      if (d.value > best.value) best = d;
    }
  return best;
}

Rational evaluate_gap(const Window& w, const std::map<std::size_t, Rational>& column, const Combo& combo,
                      const Element& x) {
  const auto& S = *w.oracle;
  std::map<std::size_t, Rational> v = column;
  for (const auto& term : combo.terms) {
    auto dom = S.multiply(S.star(term.s), term.s);
    if (S.multiply(dom, x) != x) continue;
    auto sx = S.multiply(term.s, x);
    auto j = w.find(sx);
    if (!j) throw Censored("V[" + S.format(term.s) + "] moves " + S.format(x) + " outside the window");
    v[*j] -= term.f(sx);
  }
  Rational total = 0;
  for (const auto& [i, q] : v) total += q * q;
  return total;
}

Separation matrix_unit_separation(const Window& w, const Element& x, const Element& y, const Combo& combo) {
  const auto& S = *w.oracle;
  if (l_related(S, x, y)) throw InvalidInput("matrix unit separation needs x*x != y*y");
  w.at(x);
  return Separation{evaluate_gap(w, {{w.at(y), Rational(1)}}, combo, x)};
}

GapOperator non_fl_gap_operator(const Window& w, const std::vector<FLWitness>& witnesses) {
  if (witnesses.empty()) throw InvalidInput("no refutation witnesses at this scope");
  GapOperator g;
  const auto n = static_cast<Eigen::Index>(w.size());
  std::vector<Triplet> t;
  std::set<std::size_t> columns;
  for (const auto& wit : witnesses) {
    auto x = w.at(wit.x), y = w.at(wit.y);
    if (!columns.insert(x).second) throw InvalidInput("two witnesses share a source vertex");
    g.x.push_back(x);
    g.y.push_back(y);
    t.emplace_back(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x), Rational(1));
  }
  g.T.label = "T";
  g.T.matrix = from_triplets(n, t);
  g.T.safe.assign(w.size(), true);
  g.propagation = propagation(w, g.T);
  return g;
}

Rational gap_at_level(const Window& w, const GapOperator& g, std::size_t level, const Combo& combo) {
  if (level >= g.x.size()) throw InvalidInput("level beyond the witness list");
  return evaluate_gap(w, {{g.y[level], Rational(1)}}, combo, w.basis[g.x[level]]);
}

bool CrossedProductReport::ok() const {
  for (const auto& c : checks)
    if (!c.ok()) return false;
  return true;
}

namespace {

// Operator on ℓ²(window) ⊗ ℓ²(window) sending δ_x ⊗ δ_y to coeff · δ_x' ⊗ δ_y'.
struct TensorImage {
  Element x, y;
  Rational coeff;
};

FragmentOperator tensor_operator(const Window& w, const std::string& label,
                                 const std::function<std::optional<TensorImage>(const Element&, const Element&)>& fn) {
  const std::size_t n = w.size();
  FragmentOperator op;
  op.label = label;
  op.safe.assign(n * n, true);
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      auto img = fn(w.basis[i], w.basis[j]);
      if (!img || img->coeff == 0) continue;
      auto a = w.find(img->x), b = w.find(img->y);
      const auto col = static_cast<Eigen::Index>(i * n + j);
      if (!a || !b) {
        op.safe[i * n + j] = false;
        continue;
      }
      t.emplace_back(static_cast<Eigen::Index>(*a * n + *b), col, img->coeff);
    }
  op.matrix = from_triplets(static_cast<Eigen::Index>(n * n), t);
  return op;
}

}  // namespace

CrossedProductReport crossed_product_check(const Window& w, const std::vector<Element>& s_list,
                                           const std::vector<Function>& f_list) {
  if (w.size() > 4096) throw BudgetExhausted("tensor window capped at 4096 basis vectors per factor");
  const auto& S = *w.oracle;
  const std::size_t n = w.size();
  CrossedProductReport rep;
  rep.basis = n * n;
  auto name = [&](Eigen::Index c) {
    auto i = static_cast<std::size_t>(c) / n, j = static_cast<std::size_t>(c) % n;
    return "d(" + S.format(w.basis[i]) + ") x d(" + S.format(w.basis[j]) + ")";
  };
  auto star = [&](const Element& a) { return S.star(a); };
  auto mul = [&](const Element& a, const Element& b) { return S.multiply(a, b); };
  auto in_dom = [&](const Element& e, const Element& x) { return mul(e, x) == x; };

  auto W = tensor_operator(w, "W", [&](const Element& x, const Element& y) -> std::optional<TensorImage> {
    if (mul(x, star(x)) != mul(star(y), y)) return std::nullopt;
    return TensorImage{x, mul(y, x), Rational(1)};
  });
  auto Ws = tensor_operator(w, "W*", [&](const Element& u, const Element& v) -> std::optional<TensorImage> {
    if (mul(star(u), u) != mul(star(v), v)) return std::nullopt;
    return TensorImage{u, mul(v, star(u)), Rational(1)};
  });
  auto P_init = tensor_operator(w, "P", [&](const Element& x, const Element& y) -> std::optional<TensorImage> {
    if (mul(x, star(x)) != mul(star(y), y)) return std::nullopt;
    return TensorImage{x, y, Rational(1)};
  });
  auto P_fin = tensor_operator(w, "Q", [&](const Element& u, const Element& v) -> std::optional<TensorImage> {
    if (mul(star(u), u) != mul(star(v), v)) return std::nullopt;
    return TensorImage{u, v, Rational(1)};
  });
  std::vector<bool> initial(n * n, false);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      initial[i * n + j] = mul(w.basis[i], star(w.basis[i])) == mul(star(w.basis[j]), w.basis[j]);

  rep.checks.push_back(compare_operators("W*W = initial projection", Ws * W, P_init, nullptr, name));
  rep.checks.push_back(compare_operators("WW* = final projection", W * Ws, P_fin, nullptr, name));
  rep.checks.push_back(compare_operators("WW*W = W", W * Ws * W, W, nullptr, name));
  // The only preimage of (u, v) under W is (u, vu*), so W^T column (u, v) is exact where W* is.
  auto Wt = transpose(W, Ws.safe);
  rep.checks.push_back(compare_operators("W* = W^T", Ws, Wt, nullptr, name));

  IdentityCheck intertwine{"W(1xV_s) = (1xV_s)W", 0, 0, {}};
  IdentityCheck cov_full{"covariance, full basis", 0, 0, {}};
  IdentityCheck cov_init{"covariance, initial space of W", 0, 0, {}};
  auto merge = [&](IdentityCheck& into, const IdentityCheck& c, const std::string& tag) {
    into.columns_checked += c.columns_checked;
    into.columns_censored += c.columns_censored;
    for (const auto& m : c.mismatches)
      if (into.mismatches.size() < 16) into.mismatches.push_back(tag + ": " + m);
  };
  for (const auto& s : s_list) {
    auto V = [&](const Element& t) {
      return tensor_operator(w, "1xV", [&, t](const Element& x, const Element& y) -> std::optional<TensorImage> {
        if (!in_dom(mul(star(t), t), y)) return std::nullopt;
        return TensorImage{x, mul(t, y), Rational(1)};
      });
    };
    auto Vs = V(s), Vss = V(star(s));
    merge(intertwine, compare_operators("", W * Vs, Vs * W, nullptr, name), "s=" + S.format(s));
    for (std::size_t k = 0; k < f_list.size(); ++k) {
      const auto& f0 = f_list[k];
      auto dom = mul(star(s), s), ran = mul(s, star(s));
      // f restricted to D_{s*s}, and its translate sf supported on D_{ss*}.
      Function f = [&, dom](const Element& x) { return in_dom(dom, x) ? f0(x) : Rational(0); };
      Function sf = [&, ran, s](const Element& x) { return in_dom(ran, x) ? f(mul(star(s), x)) : Rational(0); };
      auto pi = [&](const Function& g) {
        return tensor_operator(w, "pi", [&](const Element& x, const Element& y) -> std::optional<TensorImage> {
          if (!in_dom(mul(star(y), y), x)) return std::nullopt;
          return TensorImage{x, y, g(mul(y, x))};
        });
      };
      auto lhs = Vs * pi(f) * Vss;
      auto rhs = pi(sf);
      auto tag = "s=" + S.format(s) + ", f#" + std::to_string(k);
      merge(cov_full, compare_operators("", lhs, rhs, nullptr, name), tag);
      merge(cov_init, compare_operators("", lhs, rhs, &initial, name), tag);
    }
  }
  rep.checks.push_back(std::move(intertwine));
  IdentityCheck left{"W pi(f) W* = (1xf)WW*", 0, 0, {}};
  IdentityCheck right{"W pi(f) W* = WW*(1xf)", 0, 0, {}};
  const auto WWs = W * Ws;
  for (std::size_t k = 0; k < f_list.size(); ++k) {
    const auto& f = f_list[k];
    auto pi = tensor_operator(w, "pi", [&](const Element& x, const Element& y) -> std::optional<TensorImage> {
      if (!in_dom(mul(star(y), y), x)) return std::nullopt;
      return TensorImage{x, y, f(mul(y, x))};
    });
    auto one_f = tensor_operator(w, "1xf", [&](const Element& x, const Element& y) -> std::optional<TensorImage> {
      return TensorImage{x, y, f(y)};
    });
    auto conj = W * pi * Ws;
    auto tag = "f#" + std::to_string(k);
    merge(left, compare_operators("", conj, one_f * WWs, nullptr, name), tag);
    merge(right, compare_operators("", conj, WWs * one_f, nullptr, name), tag);
  }
  rep.checks.push_back(std::move(left));
  rep.checks.push_back(std::move(right));
  rep.checks.push_back(std::move(cov_full));
  rep.checks.push_back(std::move(cov_init));
  return rep;
}

nlohmann::json operator_to_json(const Window& w, const FragmentOperator& t) {
  nlohmann::json j;
  j["label"] = t.label;
  j["family"] = w.oracle->name();
  auto& basis = j["basis"] = nlohmann::json::array();
  for (const auto& x : w.basis) basis.push_back(w.oracle->format(x));
  auto& entries = j["entries"] = nlohmann::json::array();
  for (Eigen::Index col = 0; col < t.matrix.outerSize(); ++col)
    for (RationalMatrix::InnerIterator it(t.matrix, col); it; ++it)
      entries.push_back({w.oracle->format(w.basis[static_cast<std::size_t>(it.row())]),
                         w.oracle->format(w.basis[static_cast<std::size_t>(col)]), to_string(it.value())});
  auto& censored = j["censored_columns"] = nlohmann::json::array();
  for (std::size_t c = 0; c < t.safe.size(); ++c)
    if (!t.safe[c]) censored.push_back(w.oracle->format(w.basis[c]));
  return j;
}

}  // namespace schutz

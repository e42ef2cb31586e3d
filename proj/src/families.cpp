#include "schutz/families.hpp"

#include "schutz/error.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <sstream>
#include <unordered_map>

namespace schutz {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::int64_t parse_int(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) throw ParseError("expected an integer");
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw ParseError("expected an integer: " + s);
  }
  if (used != s.size()) throw ParseError("expected an integer: " + s);
  return v;
}

std::int64_t mod(std::int64_t a, std::int64_t m) {
  auto r = a % m;
  return r < 0 ? r + m : r;
}

// Scanner for words such as "a^2 a*^3" or "a1 a2* x1^-1".
class Scanner {
 public:
  explicit Scanner(std::string_view s) : s_(s) {}
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool done() {
    skip();
    return pos_ >= s_.size();
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool has_digit() const { return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])); }
  std::int64_t number() {
    bool neg = false;
    if (pos_ < s_.size() && s_[pos_] == '-') {
      neg = true;
      ++pos_;
    }
    if (!has_digit()) throw ParseError("expected digits in '" + std::string(s_) + "'");
    std::int64_t v = 0;
    while (has_digit()) v = v * 10 + (s_[pos_++] - '0');
    return neg ? -v : v;
  }
  // Optional "^k" immediately after a token.
  std::int64_t exponent() {
    if (pos_ < s_.size() && s_[pos_] == '^') {
      ++pos_;
      return number();
    }
    return 1;
  }
  [[noreturn]] void fail() const { throw ParseError("cannot parse '" + std::string(s_) + "'"); }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

// Splits "(x, y)" at its top-level comma.
std::pair<std::string, std::string> split_pair(std::string_view text) {
  std::string s = trim(text);
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') throw ParseError("expected (x, y): " + s);
  int depth = 0;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    char c = s[i];
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') --depth;
    if (c == ',' && depth == 0) return {s.substr(1, i - 1), s.substr(i + 1, s.size() - i - 2)};
  }
  throw ParseError("expected (x, y): " + s);
}

// ---------------------------------------------------------------- groups

class GroupBase : public SemigroupOracle {
 public:
  bool is_group() const override { return true; }
  std::optional<GroupImage> group_image() const override {
    return GroupImage{shared_from_this(), [](const Element& x) { return x; }};
  }
};

class IntegersOracle final : public GroupBase {
 public:
  std::string name() const override { return "Z"; }
  Family family() const override { return Family::Integers; }
  Element multiply(const Element& a, const Element& b) const override {
    check_family(a);
    check_family(b);
    return make(a.as<Integer>().n + b.as<Integer>().n);
  }
  Element star(const Element& a) const override {
    check_family(a);
    return make(-a.as<Integer>().n);
  }
  std::optional<std::size_t> generator_count() const override { return 2; }
  Element generator(std::size_t i) const override { return make(i == 0 ? 1 : -1); }
  std::size_t star_index(std::size_t i) const override { return 1 - i; }
  std::string format(const Element& a) const override { return std::to_string(a.as<Integer>().n); }
  Element parse(std::string_view t) const override { return make(parse_int(t)); }
  static Element make(std::int64_t n) { return Element{Family::Integers, Integer{n}}; }
};

class FreeGroupOracle final : public GroupBase {
 public:
  explicit FreeGroupOracle(int rank) : rank_(rank) {
    if (rank < 1) throw InvalidInput("free group rank must be positive");
  }
  std::string name() const override { return "free:" + std::to_string(rank_); }
  Family family() const override { return Family::FreeGroup; }
  Element multiply(const Element& a, const Element& b) const override {
    check_family(a);
    check_family(b);
    auto w = a.as<FreeWord>().letters;
    for (auto l : b.as<FreeWord>().letters) push(w, l);
    return Element{Family::FreeGroup, FreeWord{std::move(w)}};
  }
  Element star(const Element& a) const override {
    check_family(a);
    auto w = a.as<FreeWord>().letters;
    std::reverse(w.begin(), w.end());
    for (auto& l : w) l = -l;
    return Element{Family::FreeGroup, FreeWord{std::move(w)}};
  }
  std::optional<std::size_t> generator_count() const override { return 2 * static_cast<std::size_t>(rank_); }
  Element generator(std::size_t i) const override {
    auto letter = static_cast<std::int32_t>(i / 2 + 1);
    return Element{Family::FreeGroup, FreeWord{{i % 2 == 0 ? letter : -letter}}};
  }
  std::size_t star_index(std::size_t i) const override { return i ^ 1u; }
  std::string format(const Element& a) const override {
    const auto& w = a.as<FreeWord>().letters;
    if (w.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) out += ' ';
      out += "x" + std::to_string(std::abs(w[i]));
      if (w[i] < 0) out += "^-1";
    }
    return out;
  }
  Element parse(std::string_view t) const override {
    Scanner sc(t);
    std::vector<std::int32_t> w;
    while (!sc.done()) {
      if (sc.eat('1')) continue;
      if (!sc.eat('x')) sc.fail();
      auto i = sc.number();
      if (i < 1 || i > rank_) throw ParseError("free generator out of range in " + std::string(t));
      auto e = sc.exponent();
      auto l = static_cast<std::int32_t>(e < 0 ? -i : i);
      for (std::int64_t k = 0; k < std::abs(e); ++k) push(w, l);
    }
    return Element{Family::FreeGroup, FreeWord{std::move(w)}};
  }

 private:
  static void push(std::vector<std::int32_t>& w, std::int32_t l) {
    if (!w.empty() && w.back() == -l)
      w.pop_back();
    else
      w.push_back(l);
  }
  int rank_;
};

class FiniteGroupOracle final : public GroupBase {
 public:
  FiniteGroupOracle(FiniteGroupTable t, std::vector<std::uint32_t> gens, std::string name, bool numeric)
      : t_(std::move(t)), name_(std::move(name)), numeric_(numeric) {
    t_.validate();
    for (auto g : gens)
      if (g >= t_.order()) throw InvalidInput("group generator out of range");
    gens_ = gens;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      auto inv = t_.inverse[gens[i]];
      auto it = std::find(gens_.begin(), gens_.end(), inv);
      if (it == gens_.end()) gens_.push_back(inv);
    }
    stars_.resize(gens_.size());
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      auto inv = t_.inverse[gens_[i]];
      // Prefer the mirrored slot so that paired generators point at each other.
      std::size_t pick = gens_.size();
      for (std::size_t j = 0; j < gens_.size(); ++j)
        if (gens_[j] == inv && (pick == gens_.size() || j == (i ^ 1u))) pick = j;
      stars_[i] = pick;
    }
  }
  std::string name() const override { return name_; }
  Family family() const override { return Family::FiniteGroup; }
  Element multiply(const Element& a, const Element& b) const override {
    check_family(a);
    check_family(b);
    return make(t_.table[idx(a)][idx(b)]);
  }
  Element star(const Element& a) const override {
    check_family(a);
    return make(t_.inverse[idx(a)]);
  }
  std::optional<std::size_t> generator_count() const override { return gens_.size(); }
  Element generator(std::size_t i) const override { return make(gens_.at(i)); }
  std::size_t star_index(std::size_t i) const override { return stars_.at(i); }
  std::string format(const Element& a) const override {
    return (numeric_ ? "" : "g") + std::to_string(a.as<Integer>().n);
  }
  Element parse(std::string_view text) const override {
    std::string s = trim(text);
    if (!numeric_) {
      if (s.empty() || s[0] != 'g') throw ParseError("group element must look like g3: " + s);
      s = s.substr(1);
    }
    auto v = parse_int(s);
    if (numeric_) v = mod(v, static_cast<std::int64_t>(t_.order()));
    if (v < 0 || v >= static_cast<std::int64_t>(t_.order())) throw ParseError("group element out of range: " + s);
    return make(static_cast<std::uint32_t>(v));
  }
  std::optional<std::vector<Element>> idempotents() const override {
    return std::vector<Element>{make(t_.identity)};
  }
  std::optional<std::vector<Element>> elements() const override {
    std::vector<Element> out;
    for (std::uint32_t i = 0; i < t_.order(); ++i) out.push_back(make(i));
    return out;
  }

 private:
  static Element make(std::uint32_t i) { return Element{Family::FiniteGroup, Integer{i}}; }
  std::uint32_t idx(const Element& a) const {
    auto v = a.as<Integer>().n;
    if (v < 0 || static_cast<std::size_t>(v) >= t_.order()) throw FamilyMismatch("group element out of range");
    return static_cast<std::uint32_t>(v);
  }
  FiniteGroupTable t_;
  std::vector<std::uint32_t> gens_;
  std::vector<std::size_t> stars_;
  std::string name_;
  bool numeric_;
};

OraclePtr trivial_group() {
  static const OraclePtr g = cyclic_group(1);
  return g;
}

GroupImage trivial_image() {
  auto g = trivial_group();
  auto id = g->multiply(g->generator(0), g->star(g->generator(0)));
  return GroupImage{g, [id](const Element&) { return id; }};
}

// ---------------------------------------------------------------- bicyclic

class BicyclicOracle final : public SemigroupOracle {
 public:
  explicit BicyclicOracle(bool with_zero) : zero_(with_zero) {}
  std::string name() const override { return zero_ ? "bicyclic" : "bicyclic-monoid"; }
  Family family() const override { return Family::Bicyclic; }
  Element multiply(const Element& a, const Element& b) const override {
    check_family(a);
    check_family(b);
    if (a.is_zero() || b.is_zero()) return zero();
    const auto& x = a.as<BicyclicForm>();
    const auto& y = b.as<BicyclicForm>();
    if (x.j >= y.i) return make(x.i, y.j + x.j - y.i);
    return make(x.i + y.i - x.j, y.j);
  }
  Element star(const Element& a) const override {
    check_family(a);
    if (a.is_zero()) return a;
    const auto& x = a.as<BicyclicForm>();
    return make(x.j, x.i);
  }
  std::optional<std::size_t> generator_count() const override { return zero_ ? 3 : 2; }
  Element generator(std::size_t i) const override {
    if (i == 0) return make(1, 0);
    if (i == 1) return make(0, 1);
    if (i == 2 && zero_) return zero();
    throw InvalidInput("bicyclic generator index out of range");
  }
  std::size_t star_index(std::size_t i) const override { return i < 2 ? 1 - i : i; }
  std::string format(const Element& a) const override {
    if (a.is_zero()) return "0";
    const auto& x = a.as<BicyclicForm>();
    return "a^" + std::to_string(x.i) + " a*^" + std::to_string(x.j);
  }
  Element parse(std::string_view t) const override {
    Scanner sc(t);
    Element acc = make(0, 0);
    bool any = false;
    while (!sc.done()) {
      any = true;
      if (sc.eat('0')) {
        if (!zero_) throw ParseError("bicyclic monoid has no zero");
        acc = zero();
        continue;
      }
      if (sc.eat('1')) continue;
      if (!sc.eat('a')) sc.fail();
      bool starred = sc.eat('*');
      auto e = sc.exponent();
      if (e < 0) sc.fail();
      auto k = static_cast<std::uint32_t>(e);
      acc = multiply(acc, starred ? make(0, k) : make(k, 0));
    }
    if (!any) sc.fail();
    return acc;
  }
  std::optional<GroupImage> group_image() const override {
    if (zero_) return trivial_image();
    auto z = integers();
    return GroupImage{z, [](const Element& x) {
                        const auto& f = x.as<BicyclicForm>();
                        return IntegersOracle::make(static_cast<std::int64_t>(f.i) - f.j);
                      }};
  }

 private:
  static Element make(std::uint32_t i, std::uint32_t j) { return Element{Family::Bicyclic, BicyclicForm{i, j}}; }
  static Element zero() { return Element{Family::Bicyclic, Zero{}}; }
  bool zero_;
};

// ---------------------------------------------------------------- polycyclic

class PolycyclicOracle final : public SemigroupOracle {
 public:
  explicit PolycyclicOracle(int n) : n_(n) {
    if (n < 1 || n > 255) throw InvalidInput("polycyclic rank must be in 1..255");
  }
  std::string name() const override { return "polycyclic:" + std::to_string(n_); }
  Family family() const override { return Family::Polycyclic; }
  Element multiply(const Element& a, const Element& b) const override {
    check_family(a);
    check_family(b);
    if (a.is_zero() || b.is_zero()) return zero();
    const auto& x = a.as<WordPair>();
    const auto& y = b.as<WordPair>();
    const auto& v1 = x.v;
    const auto& u2 = y.u;
    std::size_t k = std::min(v1.size(), u2.size());
    if (!std::equal(v1.begin(), v1.begin() + static_cast<std::ptrdiff_t>(k), u2.begin())) return zero();
    WordPair out;
    if (v1.size() <= u2.size()) {
      out.u = x.u;
      out.u.insert(out.u.end(), u2.begin() + static_cast<std::ptrdiff_t>(k), u2.end());
      out.v = y.v;
    } else {
      out.u = x.u;
      out.v = y.v;
      out.v.insert(out.v.end(), v1.begin() + static_cast<std::ptrdiff_t>(k), v1.end());
    }
    return Element{Family::Polycyclic, std::move(out)};
  }
  Element star(const Element& a) const override {
    check_family(a);
    if (a.is_zero()) return a;
    const auto& x = a.as<WordPair>();
    return Element{Family::Polycyclic, WordPair{x.v, x.u}};
  }
  std::optional<std::size_t> generator_count() const override { return 2 * static_cast<std::size_t>(n_) + 1; }
  Element generator(std::size_t i) const override {
    if (i == 2 * static_cast<std::size_t>(n_)) return zero();
    if (i > 2 * static_cast<std::size_t>(n_)) throw InvalidInput("polycyclic generator index out of range");
    auto letter = static_cast<std::uint8_t>(i / 2);
    if (i % 2 == 0) return Element{Family::Polycyclic, WordPair{{letter}, {}}};
    return Element{Family::Polycyclic, WordPair{{}, {letter}}};
  }
  std::size_t star_index(std::size_t i) const override {
    return i == 2 * static_cast<std::size_t>(n_) ? i : (i ^ 1u);
  }
  std::string format(const Element& a) const override {
    if (a.is_zero()) return "0";
    const auto& x = a.as<WordPair>();
    if (x.u.empty() && x.v.empty()) return "1";
    std::string out;
    for (auto l : x.u) out += (out.empty() ? "a" : " a") + std::to_string(l + 1);
    for (auto it = x.v.rbegin(); it != x.v.rend(); ++it) out += (out.empty() ? "a" : " a") + std::to_string(*it + 1) + "*";
    return out;
  }
  Element parse(std::string_view t) const override {
    Scanner sc(t);
    Element acc{Family::Polycyclic, WordPair{}};
    bool any = false;
    while (!sc.done()) {
      any = true;
      if (sc.eat('0')) {
        acc = zero();
        continue;
      }
      if (sc.eat('1')) continue;
      if (!sc.eat('a')) sc.fail();
      auto i = sc.number();
      if (i < 1 || i > n_) throw ParseError("polycyclic letter out of range in " + std::string(t));
      bool starred = sc.eat('*');
      auto e = sc.exponent();
      if (e < 0) sc.fail();
      for (std::int64_t r = 0; r < e; ++r)
        acc = multiply(acc, generator(2 * static_cast<std::size_t>(i - 1) + (starred ? 1 : 0)));
    }
    if (!any) sc.fail();
    return acc;
  }
  std::optional<GroupImage> group_image() const override { return trivial_image(); }

 private:
  static Element zero() { return Element{Family::Polycyclic, Zero{}}; }
  int n_;
};

// ---------------------------------------------------------------- (N, min), (N, max)

class NatOracle final : public SemigroupOracle {
 public:
  explicit NatOracle(bool use_min) : min_(use_min) {}
  std::string name() const override { return min_ ? "nat-min" : "nat-max"; }
  Family family() const override { return min_ ? Family::NatMin : Family::NatMax; }
  Element multiply(const Element& a, const Element& b) const override {
    check_family(a);
    check_family(b);
    auto x = a.as<Integer>().n, y = b.as<Integer>().n;
    return make(min_ ? std::min(x, y) : std::max(x, y));
  }
  Element star(const Element& a) const override {
    check_family(a);
    return a;
  }
  bool is_idempotent(const Element&) const override { return true; }
  std::optional<std::size_t> generator_count() const override { return std::nullopt; }
  Element generator(std::size_t i) const override { return make(static_cast<std::int64_t>(i) + 1); }
  std::size_t star_index(std::size_t i) const override { return i; }
  std::string format(const Element& a) const override { return std::to_string(a.as<Integer>().n); }
  Element parse(std::string_view t) const override {
    auto v = parse_int(t);
    if (v < 1) throw ParseError("natural numbers start at 1: " + std::string(t));
    return make(v);
  }
  std::optional<GroupImage> group_image() const override { return trivial_image(); }

 private:
  Element make(std::int64_t n) const { return Element{family(), Integer{n}}; }
  bool min_;
};

// ---------------------------------------------------------------- box spaces

class BoxCyclicOracle final : public SemigroupOracle {
 public:
  explicit BoxCyclicOracle(std::vector<std::int64_t> m) : m_(std::move(m)) {
    if (m_.empty()) throw InvalidInput("box space needs at least one level");
    for (std::size_t i = 0; i < m_.size(); ++i) {
      if (m_[i] < 1) throw InvalidInput("box space moduli must be positive");
      if (i > 0 && m_[i] % m_[i - 1] != 0)
        throw InvalidInput("box space chain must satisfy m_i | m_(i+1)");
    }
    std::vector<std::uint32_t> gens{1 % static_cast<std::uint32_t>(m_[0])};
    image_ = finite_group(FiniteGroupTable::cyclic(static_cast<std::uint32_t>(m_[0])), gens,
                          "cyclic:" + std::to_string(m_[0]));
  }
  std::string name() const override {
    std::string s = "box:Z:";
    for (std::size_t i = 0; i < m_.size(); ++i) s += (i ? "," : "") + std::to_string(m_[i]);
    return s;
  }
  Family family() const override { return Family::Box; }
  Element multiply(const Element& a, const Element& b) const override {
    check_family(a);
    check_family(b);
    const auto& x = a.as<BoxForm>();
    const auto& y = b.as<BoxForm>();
    auto level = std::min(x.level, y.level);
    return make(level, x.code[0] + y.code[0]);
  }
  Element star(const Element& a) const override {
    check_family(a);
    const auto& x = a.as<BoxForm>();
    return make(x.level, -x.code[0]);
  }
  std::optional<std::size_t> generator_count() const override { return 2 * m_.size(); }
  Element generator(std::size_t i) const override {
    if (i >= 2 * m_.size()) throw InvalidInput("box generator index out of range");
    return make(static_cast<std::uint32_t>(i / 2 + 1), i % 2 == 0 ? 1 : -1);
  }
  std::size_t star_index(std::size_t i) const override { return i ^ 1u; }
  std::string format(const Element& a) const override {
    const auto& x = a.as<BoxForm>();
    return "q[" + std::to_string(x.level) + "](" + std::to_string(x.code[0]) + ")";
  }
  Element parse(std::string_view t) const override {
    Scanner sc(t);
    if (!sc.eat('q') || !sc.eat('[')) sc.fail();
    sc.skip();
    auto level = sc.number();
    if (!sc.eat(']') || !sc.eat('(')) sc.fail();
    sc.skip();
    auto g = sc.number();
    if (!sc.eat(')') || !sc.done()) sc.fail();
    if (level < 1 || level > static_cast<std::int64_t>(m_.size()))
      throw ParseError("box level out of range in " + std::string(t));
    return make(static_cast<std::uint32_t>(level), g);
  }
  std::optional<GroupImage> group_image() const override {
    auto m1 = m_[0];
    return GroupImage{image_, [m1](const Element& x) {
                        return Element{Family::FiniteGroup, Integer{mod(x.as<BoxForm>().code[0], m1)}};
                      }};
  }
  std::int64_t modulus(std::uint32_t level) const { return m_.at(level - 1); }

 private:
  Element make(std::uint32_t level, std::int64_t g) const {
    return Element{Family::Box, BoxForm{level, {mod(g, m_[level - 1])}}};
  }
  std::vector<std::int64_t> m_;
  OraclePtr image_;
};

using Perm = std::vector<std::int32_t>;

Perm perm_compose(const Perm& a, const Perm& b) {  // a after b
  Perm out(b.size());
  for (std::size_t p = 0; p < b.size(); ++p) out[p] = a[static_cast<std::size_t>(b[p])];
  return out;
}

Perm perm_inverse(const Perm& a) {
  Perm out(a.size());
  for (std::size_t p = 0; p < a.size(); ++p) out[static_cast<std::size_t>(a[p])] = static_cast<std::int32_t>(p);
  return out;
}

class BoxPermOracle final : public SemigroupOracle {
 public:
  BoxPermOracle(int rank, std::vector<std::vector<Perm>> levels) : rank_(rank), levels_(std::move(levels)) {
    if (rank < 1) throw InvalidInput("box space rank must be positive");
    if (levels_.empty()) throw InvalidInput("box space needs at least one level");
    for (const auto& lv : levels_) {
      if (static_cast<int>(lv.size()) != rank) throw InvalidInput("each level needs one permutation per generator");
      auto d = lv[0].size();
      if (d == 0) throw InvalidInput("empty permutation");
      for (const auto& p : lv) {
        if (p.size() != d) throw InvalidInput("permutations of one level must share a degree");
        std::vector<bool> seen(d, false);
        for (auto v : p) {
          if (v < 0 || static_cast<std::size_t>(v) >= d || seen[static_cast<std::size_t>(v)])
            throw InvalidInput("not a permutation");
          seen[static_cast<std::size_t>(v)] = true;
        }
      }
      degree_.push_back(d);
    }
    // Level-one quotient as an explicit group for σ.
    std::map<Perm, std::uint32_t> id;
    std::vector<Perm> elems;
    std::deque<std::uint32_t> q;
    Perm e(degree_[0]);
    for (std::size_t p = 0; p < e.size(); ++p) e[p] = static_cast<std::int32_t>(p);
    auto add = [&](const Perm& p) {
      if (id.emplace(p, static_cast<std::uint32_t>(elems.size())).second) {
        elems.push_back(p);
        q.push_back(static_cast<std::uint32_t>(elems.size() - 1));
      }
    };
    add(e);
    while (!q.empty()) {
      auto x = q.front();
      q.pop_front();
      for (const auto& g : levels_[0]) {
        add(perm_compose(g, elems[x]));
        add(perm_compose(perm_inverse(g), elems[x]));
      }
    }
    std::vector<std::vector<std::uint32_t>> table(elems.size(), std::vector<std::uint32_t>(elems.size()));
    for (std::size_t a = 0; a < elems.size(); ++a)
      for (std::size_t b = 0; b < elems.size(); ++b) table[a][b] = id.at(perm_compose(elems[a], elems[b]));
    std::vector<std::uint32_t> gens;
    for (const auto& g : levels_[0]) gens.push_back(id.at(g));
    level_one_ = std::move(id);
    image_ = finite_group(FiniteGroupTable::from_table(std::move(table)), gens, "quotient-1");
  }
  std::string name() const override { return "box:perm(rank " + std::to_string(rank_) + ")"; }
  Family family() const override { return Family::Box; }
  Element multiply(const Element& a, const Element& b) const override {
    check_family(a);
    check_family(b);
    const auto& x = a.as<BoxForm>();
    const auto& y = b.as<BoxForm>();
    auto level = std::min(x.level, y.level);
    BoxForm out{level, {}};
    std::size_t off = 0;
    for (std::uint32_t j = 0; j < level; ++j) {
      auto d = degree_[j];
      for (std::size_t p = 0; p < d; ++p)
        out.code.push_back(x.code[off + static_cast<std::size_t>(y.code[off + p])]);
      off += d;
    }
    return Element{Family::Box, std::move(out)};
  }
  Element star(const Element& a) const override {
    check_family(a);
    const auto& x = a.as<BoxForm>();
    BoxForm out{x.level, x.code};
    std::size_t off = 0;
    for (std::uint32_t j = 0; j < x.level; ++j) {
      for (std::size_t p = 0; p < degree_[j]; ++p)
        out.code[off + static_cast<std::size_t>(x.code[off + p])] = static_cast<std::int64_t>(p);
      off += degree_[j];
    }
    return Element{Family::Box, std::move(out)};
  }
  std::optional<std::size_t> generator_count() const override {
    return levels_.size() * 2 * static_cast<std::size_t>(rank_);
  }
  Element generator(std::size_t i) const override {
    if (i >= *generator_count()) throw InvalidInput("box generator index out of range");
    auto level = static_cast<std::uint32_t>(i / (2 * static_cast<std::size_t>(rank_)) + 1);
    auto r = i % (2 * static_cast<std::size_t>(rank_));
    BoxForm out{level, {}};
    for (std::uint32_t j = 0; j < level; ++j) {
      Perm p = levels_[j][r / 2];
      if (r % 2) p = perm_inverse(p);
      out.code.insert(out.code.end(), p.begin(), p.end());
    }
    return Element{Family::Box, std::move(out)};
  }
  std::size_t star_index(std::size_t i) const override { return i ^ 1u; }
  std::string format(const Element& a) const override {
    const auto& x = a.as<BoxForm>();
    std::string s = "q[" + std::to_string(x.level) + "](";
    std::size_t off = 0;
    for (std::uint32_t j = 0; j < x.level; ++j) {
      s += j ? ";[" : "[";
      for (std::size_t p = 0; p < degree_[j]; ++p) s += (p ? " " : "") + std::to_string(x.code[off + p] + 1);
      s += "]";
      off += degree_[j];
    }
    return s + ")";
  }
  Element parse(std::string_view t) const override {
    Scanner sc(t);
    if (!sc.eat('q') || !sc.eat('[')) sc.fail();
    sc.skip();
    auto level = sc.number();
    if (level < 1 || level > static_cast<std::int64_t>(levels_.size())) sc.fail();
    if (!sc.eat(']') || !sc.eat('(')) sc.fail();
    BoxForm out{static_cast<std::uint32_t>(level), {}};
    for (std::int64_t j = 0; j < level; ++j) {
      if (j && !sc.eat(';')) sc.fail();
      if (!sc.eat('[')) sc.fail();
      Perm p;
      for (std::size_t k = 0; k < degree_[static_cast<std::size_t>(j)]; ++k) {
        sc.skip();
        p.push_back(static_cast<std::int32_t>(sc.number() - 1));
      }
      if (!sc.eat(']')) sc.fail();
      std::vector<bool> seen(p.size(), false);
      for (auto v : p) {
        if (v < 0 || static_cast<std::size_t>(v) >= p.size() || seen[static_cast<std::size_t>(v)]) sc.fail();
        seen[static_cast<std::size_t>(v)] = true;
      }
      out.code.insert(out.code.end(), p.begin(), p.end());
    }
    if (!sc.eat(')') || !sc.done()) sc.fail();
    return Element{Family::Box, std::move(out)};
  }
  std::optional<GroupImage> group_image() const override {
    auto d = degree_[0];
    auto table = level_one_;
    return GroupImage{image_, [d, table](const Element& x) {
                        const auto& c = x.as<BoxForm>().code;
                        Perm p(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(d));
                        auto it = table.find(p);
                        if (it == table.end()) throw InvalidInput("element outside the generated quotient");
                        return Element{Family::FiniteGroup, Integer{it->second}};
                      }};
  }

 private:
  int rank_;
  std::vector<std::vector<Perm>> levels_;
  std::vector<std::size_t> degree_;
  std::map<Perm, std::uint32_t> level_one_;
  OraclePtr image_;
};

// ---------------------------------------------------------------- partial bijections

class PartialBijectionOracle final : public SemigroupOracle {
 public:
  PartialBijectionOracle(int ground, std::vector<PartialMap> gens, std::string name, std::size_t cap)
      : ground_(ground), name_(std::move(name)) {
    if (ground < 0) throw InvalidInput("negative ground set");
    for (auto& g : gens) {
      if (static_cast<int>(g.image.size()) != ground) throw InvalidInput("generator on a different ground set");
      if (std::find(gens_.begin(), gens_.end(), g) == gens_.end()) gens_.push_back(g);
    }
    if (gens_.empty()) throw InvalidInput("partial-bijection family needs a generator");
    const auto given = gens_.size();
    for (std::size_t i = 0; i < given; ++i) {
      auto inv = inverse(gens_[i]);
      if (std::find(gens_.begin(), gens_.end(), inv) == gens_.end()) gens_.push_back(inv);
    }
    for (const auto& g : gens_)
      stars_.push_back(static_cast<std::size_t>(std::find(gens_.begin(), gens_.end(), inverse(g)) - gens_.begin()));
    closure_ = closure(ground, gens_, cap);
    auto q = max_group_image(closure_);
    sigma_ = q.sigma;
    std::vector<std::uint32_t> group_gens;
    for (const auto& g : gens_) group_gens.push_back(sigma_[closure_.index_of(g)]);
    image_ = finite_group(q.group, group_gens, "G(" + name_ + ")");
  }
  std::string name() const override { return name_; }
  Family family() const override { return Family::PartialBijection; }
  Element multiply(const Element& a, const Element& b) const override {
    check_family(a);
    check_family(b);
    return Element{Family::PartialBijection, compose(a.as<PartialMap>(), b.as<PartialMap>())};
  }
  Element star(const Element& a) const override {
    check_family(a);
    return Element{Family::PartialBijection, inverse(a.as<PartialMap>())};
  }
  std::optional<std::size_t> generator_count() const override { return gens_.size(); }
  Element generator(std::size_t i) const override { return Element{Family::PartialBijection, gens_.at(i)}; }
  std::size_t star_index(std::size_t i) const override { return stars_.at(i); }
  std::string format(const Element& a) const override { return format_partial_map(a.as<PartialMap>()); }
  Element parse(std::string_view t) const override {
    Element e{Family::PartialBijection, parse_partial_map(t, ground_)};
    if (!closure_.index.count(key_of(e.as<PartialMap>())))
      throw ParseError("partial map is not in " + name_ + ": " + std::string(t));
    return e;
  }
  std::optional<GroupImage> group_image() const override {
    auto self = std::static_pointer_cast<const PartialBijectionOracle>(shared_from_this());
    return GroupImage{image_, [self](const Element& x) {
                        auto i = self->closure_.index_of(x.as<PartialMap>());
                        return Element{Family::FiniteGroup, Integer{self->sigma_[i]}};
                      }};
  }
  std::optional<std::vector<Element>> idempotents() const override {
    std::vector<Element> out;
    for (auto i : closure_.idempotents()) out.push_back(Element{Family::PartialBijection, closure_.elements[i]});
    return out;
  }
  std::optional<std::vector<Element>> elements() const override {
    std::vector<Element> out;
    for (const auto& f : closure_.elements) out.push_back(Element{Family::PartialBijection, f});
    return out;
  }
  const FinitePBSemigroup& closure_data() const { return closure_; }

 private:
  int ground_;
  std::string name_;
  std::vector<PartialMap> gens_;
  std::vector<std::size_t> stars_;
  FinitePBSemigroup closure_;
  std::vector<std::uint32_t> sigma_;
  OraclePtr image_;
};

// ---------------------------------------------------------------- graph realization

class GraphOracle final : public SemigroupOracle {
 public:
  explicit GraphOracle(const LoopGraph& g) : g_(g) {
    if (g.vertices == 0) throw InvalidInput("graph has no vertices");
    if (g.loop.size() != g.vertices) throw InvalidInput("loop list does not match vertex count");
    for (std::uint32_t v = 0; v < g.vertices; ++v)
      if (!g.loop[v]) throw InvalidInput("vertex " + std::to_string(v) + " has no loop");
    if (g.root >= g.vertices) throw InvalidInput("root out of range");
    std::vector<std::vector<std::uint32_t>> adj(g.vertices);
    for (auto [u, v] : g.edges) {
      if (u >= g.vertices || v >= g.vertices) throw InvalidInput("edge endpoint out of range");
      if (u == v) throw InvalidInput("non-loop edge expected; loops are listed per vertex");
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    std::vector<bool> seen(g.vertices, false);
    std::deque<std::uint32_t> q{g.root};
    seen[g.root] = true;
    std::uint32_t count = 1;
    while (!q.empty()) {
      auto x = q.front();
      q.pop_front();
      for (auto y : adj[x])
        if (!seen[y]) {
          seen[y] = true;
          ++count;
          q.push_back(y);
        }
    }
    if (count != g.vertices) throw InvalidInput("graph is disconnected");
  }
  std::string name() const override { return "graph(" + std::to_string(g_.vertices) + ")"; }
  Family family() const override { return Family::GraphRealization; }
  Element multiply(const Element& a, const Element& b) const override {
    check_family(a);
    check_family(b);
    if (a.is_zero() || b.is_zero()) return zero();
    const auto& x = a.as<EndpointPair>();
    const auto& y = b.as<EndpointPair>();
    if (x.source != y.target) return zero();
    return arrow(x.target, y.source);
  }
  Element star(const Element& a) const override {
    check_family(a);
    if (a.is_zero()) return a;
    const auto& x = a.as<EndpointPair>();
    return arrow(x.source, x.target);
  }
  std::optional<std::size_t> generator_count() const override { return g_.vertices + 2 * g_.edges.size() + 1; }
  Element generator(std::size_t i) const override {
    if (i < g_.vertices) return arrow(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i));
    i -= g_.vertices;
    if (i < 2 * g_.edges.size()) {
      auto [u, v] = g_.edges[i / 2];
      return i % 2 == 0 ? arrow(v, u) : arrow(u, v);
    }
    if (i == 2 * g_.edges.size()) return zero();
    throw InvalidInput("graph generator index out of range");
  }
  std::size_t star_index(std::size_t i) const override {
    if (i < g_.vertices) return i;
    auto j = i - g_.vertices;
    if (j < 2 * g_.edges.size()) return g_.vertices + (j ^ 1u);
    return i;
  }
  std::string format(const Element& a) const override {
    if (a.is_zero()) return "0";
    const auto& x = a.as<EndpointPair>();
    return "v" + std::to_string(x.target) + "<-v" + std::to_string(x.source);
  }
  Element parse(std::string_view t) const override {
    Scanner sc(t);
    if (sc.eat('0')) {
      if (!sc.done()) sc.fail();
      return zero();
    }
    if (!sc.eat('v')) sc.fail();
    auto a = sc.number();
    if (!sc.eat('<') || !sc.eat('-') || !sc.eat('v')) sc.fail();
    auto b = sc.number();
    if (!sc.done()) sc.fail();
    if (a < 0 || b < 0 || a >= g_.vertices || b >= g_.vertices) throw ParseError("vertex out of range");
    return arrow(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
  }
  std::optional<GroupImage> group_image() const override { return trivial_image(); }
  std::optional<std::vector<Element>> idempotents() const override {
    std::vector<Element> out{zero()};
    for (std::uint32_t v = 0; v < g_.vertices; ++v) out.push_back(arrow(v, v));
    return out;
  }

 private:
  static Element arrow(std::uint32_t target, std::uint32_t source) {
    return Element{Family::GraphRealization, EndpointPair{target, source}};
  }
  static Element zero() { return Element{Family::GraphRealization, Zero{}}; }
  LoopGraph g_;
};

// ---------------------------------------------------------------- products and adjunctions

class ProductOracle final : public SemigroupOracle {
 public:
  ProductOracle(OraclePtr s, OraclePtr g) : s_(std::move(s)), g_(std::move(g)) {
    if (!g_->is_group()) throw InvalidInput("second factor must be a group");
    auto elems = g_->elements();
    if (!elems) throw InvalidInput("second factor must be a finite group");
    gelems_ = *elems;
    for (std::size_t i = 0; i < gelems_.size(); ++i) gindex_.emplace(gelems_[i], i);
  }
  std::string name() const override { return "product:" + s_->name() + "*" + g_->name(); }
  Family family() const override { return Family::Product; }
  Element multiply(const Element& a, const Element& b) const override {
    check_family(a);
    check_family(b);
    const auto& x = a.as<Pair>();
    const auto& y = b.as<Pair>();
    return make_pair(s_->multiply(*x.first, *y.first), g_->multiply(*x.second, *y.second));
  }
  Element star(const Element& a) const override {
    check_family(a);
    const auto& x = a.as<Pair>();
    return make_pair(s_->star(*x.first), g_->star(*x.second));
  }
  std::optional<std::size_t> generator_count() const override {
    auto c = s_->generator_count();
    if (!c) return std::nullopt;
    return *c * gelems_.size();
  }
  Element generator(std::size_t i) const override {
    return make_pair(s_->generator(i / gelems_.size()), gelems_[i % gelems_.size()]);
  }
  std::size_t star_index(std::size_t i) const override {
    auto k = i / gelems_.size();
    const auto& g = gelems_[i % gelems_.size()];
    return s_->star_index(k) * gelems_.size() + gindex_.at(g_->star(g));
  }
  std::string format(const Element& a) const override {
    const auto& x = a.as<Pair>();
    return "(" + s_->format(*x.first) + ", " + g_->format(*x.second) + ")";
  }
  Element parse(std::string_view t) const override {
    auto [l, r] = split_pair(t);
    return make_pair(s_->parse(l), g_->parse(r));
  }
  std::optional<GroupImage> group_image() const override {
    auto inner = s_->group_image();
    if (!inner) return std::nullopt;
    auto h = product_with_group(inner->group, g_);
    auto project = inner->project;
    return GroupImage{h, [project](const Element& x) {
                        const auto& p = x.as<Pair>();
                        return make_pair(project(*p.first), *p.second);
                      }};
  }
  std::optional<std::vector<Element>> idempotents() const override {
    auto e = s_->idempotents();
    if (!e) return std::nullopt;
    auto one = g_->multiply(gelems_[0], g_->star(gelems_[0]));
    std::vector<Element> out;
    for (const auto& x : *e) out.push_back(make_pair(x, one));
    return out;
  }
  std::optional<std::vector<Element>> elements() const override {
    auto e = s_->elements();
    if (!e) return std::nullopt;
    std::vector<Element> out;
    for (const auto& x : *e)
      for (const auto& g : gelems_) out.push_back(make_pair(x, g));
    return out;
  }
  bool is_group() const override { return s_->is_group(); }

 private:
  OraclePtr s_, g_;
  std::vector<Element> gelems_;
  std::unordered_map<Element, std::size_t, ElementHash> gindex_;
};

class AdjoinedOracle final : public SemigroupOracle {
 public:
  AdjoinedOracle(OraclePtr s, bool identity) : s_(std::move(s)), identity_(identity) {}
  std::string name() const override { return (identity_ ? "unit+" : "zero+") + s_->name(); }
  Family family() const override { return Family::Adjoined; }
  Element multiply(const Element& a, const Element& b) const override {
    check_family(a);
    check_family(b);
    if (a.is_zero() || b.is_zero()) return Element{Family::Adjoined, Zero{}};
    if (a.is_unit()) return b;
    if (b.is_unit()) return a;
    return make_wrapped(Family::Adjoined, s_->multiply(*a.as<Wrapped>().inner, *b.as<Wrapped>().inner));
  }
  Element star(const Element& a) const override {
    check_family(a);
    if (a.is_zero() || a.is_unit()) return a;
    return make_wrapped(Family::Adjoined, s_->star(*a.as<Wrapped>().inner));
  }
  std::optional<std::size_t> generator_count() const override {
    auto c = s_->generator_count();
    if (!c) return std::nullopt;
    return *c + 1;
  }
  Element generator(std::size_t i) const override {
    if (i == 0) return adjoined();
    return make_wrapped(Family::Adjoined, s_->generator(i - 1));
  }
  std::size_t star_index(std::size_t i) const override { return i == 0 ? 0 : s_->star_index(i - 1) + 1; }
  std::string format(const Element& a) const override {
    if (a.is_unit()) return "<1>";
    if (a.is_zero()) return "<0>";
    return s_->format(*a.as<Wrapped>().inner);
  }
  Element parse(std::string_view t) const override {
    auto s = trim(t);
    if (s == "<1>" && identity_) return adjoined();
    if (s == "<0>" && !identity_) return adjoined();
    return make_wrapped(Family::Adjoined, s_->parse(s));
  }
  std::optional<GroupImage> group_image() const override {
    if (!identity_) return trivial_image();
    auto inner = s_->group_image();
    if (!inner) return std::nullopt;
    auto h = inner->group;
    auto g0 = h->generator(0);
    auto one = h->multiply(g0, h->star(g0));
    auto project = inner->project;
    return GroupImage{h, [project, one](const Element& x) {
                        if (x.is_unit()) return one;
                        return project(*x.as<Wrapped>().inner);
                      }};
  }
  std::optional<std::vector<Element>> idempotents() const override {
    auto e = s_->idempotents();
    if (!e) return std::nullopt;
    std::vector<Element> out{adjoined()};
    for (const auto& x : *e) out.push_back(make_wrapped(Family::Adjoined, x));
    return out;
  }
  std::optional<std::vector<Element>> elements() const override {
    auto e = s_->elements();
    if (!e) return std::nullopt;
    std::vector<Element> out{adjoined()};
    for (const auto& x : *e) out.push_back(make_wrapped(Family::Adjoined, x));
    return out;
  }

 private:
  Element adjoined() const {
    if (identity_) return Element{Family::Adjoined, Unit{}};
    return Element{Family::Adjoined, Zero{}};
  }
  OraclePtr s_;
  bool identity_;
};

}  // namespace

OraclePtr bicyclic() { return std::make_shared<BicyclicOracle>(true); }
OraclePtr bicyclic_monoid() { return std::make_shared<BicyclicOracle>(false); }
OraclePtr polycyclic(int n) { return std::make_shared<PolycyclicOracle>(n); }
OraclePtr nat_min() { return std::make_shared<NatOracle>(true); }
OraclePtr nat_max() { return std::make_shared<NatOracle>(false); }
OraclePtr integers() { return std::make_shared<IntegersOracle>(); }
OraclePtr free_group(int rank) { return std::make_shared<FreeGroupOracle>(rank); }

OraclePtr cyclic_group(std::uint32_t n) {
  return std::make_shared<FiniteGroupOracle>(FiniteGroupTable::cyclic(n), std::vector<std::uint32_t>{1 % n},
                                             "cyclic:" + std::to_string(n), true);
}

OraclePtr finite_group(FiniteGroupTable table, std::vector<std::uint32_t> generators, std::string name) {
  bool numeric = name.rfind("cyclic:", 0) == 0;
  return std::make_shared<FiniteGroupOracle>(std::move(table), std::move(generators), std::move(name), numeric);
}

OraclePtr box_space(std::vector<std::int64_t> moduli) { return std::make_shared<BoxCyclicOracle>(std::move(moduli)); }

OraclePtr box_space(int rank, std::vector<std::vector<std::vector<std::int32_t>>> levels) {
  return std::make_shared<BoxPermOracle>(rank, std::move(levels));
}

OraclePtr partial_bijections(int ground, std::vector<PartialMap> generators, std::string name, std::size_t cap) {
  return std::make_shared<PartialBijectionOracle>(ground, std::move(generators), std::move(name), cap);
}

OraclePtr symmetric_inverse(int n) {
  if (n < 1) throw InvalidInput("I_n needs n >= 1");
  std::vector<PartialMap> gens;
  PartialMap cycle, drop;
  cycle.image.resize(static_cast<std::size_t>(n));
  drop.image.resize(static_cast<std::size_t>(n));
  for (int p = 0; p < n; ++p) {
    cycle.image[static_cast<std::size_t>(p)] = (p + 1) % n;
    drop.image[static_cast<std::size_t>(p)] = p == 0 ? -1 : p;
  }
  gens.push_back(cycle);
  if (n > 2) {
    PartialMap swap = drop;
    for (int p = 0; p < n; ++p) swap.image[static_cast<std::size_t>(p)] = p;
    std::swap(swap.image[0], swap.image[1]);
    gens.push_back(swap);
  }
  gens.push_back(drop);
  return partial_bijections(n, gens, "sym-inverse:" + std::to_string(n));
}

const FinitePBSemigroup& pb_closure(const SemigroupOracle& oracle) {
  const auto* pb = dynamic_cast<const PartialBijectionOracle*>(&oracle);
  if (!pb) throw InvalidInput(oracle.name() + " is not a partial-bijection family");
  return pb->closure_data();
}

OraclePtr graph_realization(const LoopGraph& g) { return std::make_shared<GraphOracle>(g); }

OraclePtr product_with_group(OraclePtr s, OraclePtr g) {
  return std::make_shared<ProductOracle>(std::move(s), std::move(g));
}

OraclePtr adjoin_identity(OraclePtr s) { return std::make_shared<AdjoinedOracle>(std::move(s), true); }
OraclePtr adjoin_zero(OraclePtr s) { return std::make_shared<AdjoinedOracle>(std::move(s), false); }

}  // namespace schutz

#include "schutz/finite.hpp"

#include "schutz/error.hpp"

#include <cctype>
#include <deque>
#include <numeric>
#include <sstream>

namespace schutz {

void FiniteGroupTable::validate() const {
  const std::size_t n = table.size();
  if (n == 0) throw InvalidInput("empty group");
  if (inverse.size() != n || identity >= n) throw InvalidInput("group metadata malformed");
  for (const auto& row : table) {
    if (row.size() != n) throw InvalidInput("group table not square");
    for (auto v : row)
      if (v >= n) throw InvalidInput("group table entry out of range");
  }
  for (std::uint32_t a = 0; a < n; ++a) {
    if (table[identity][a] != a || table[a][identity] != a)
      throw InvalidInput("identity axiom fails");
    if (table[a][inverse[a]] != identity || table[inverse[a]][a] != identity)
      throw InvalidInput("inverse axiom fails");
    for (std::uint32_t b = 0; b < n; ++b)
      for (std::uint32_t c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]])
          throw InvalidInput("group table is not associative");
  }
}

FiniteGroupTable FiniteGroupTable::cyclic(std::uint32_t n) {
  if (n == 0) throw InvalidInput("cyclic group of order 0");
  FiniteGroupTable g;
  g.table.assign(n, std::vector<std::uint32_t>(n));
  g.inverse.resize(n);
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = 0; b < n; ++b) g.table[a][b] = (a + b) % n;
    g.inverse[a] = (n - a) % n;
  }
  g.identity = 0;
  return g;
}

FiniteGroupTable FiniteGroupTable::from_table(std::vector<std::vector<std::uint32_t>> table) {
  FiniteGroupTable g;
  g.table = std::move(table);
  const auto n = static_cast<std::uint32_t>(g.table.size());
  if (n == 0) throw InvalidInput("empty group");
  bool found = false;
  for (std::uint32_t e = 0; e < n && !found; ++e) {
    if (g.table[e].size() != n) throw InvalidInput("group table not square");
    bool ok = true;
    for (std::uint32_t a = 0; a < n && ok; ++a) ok = g.table[e][a] == a && g.table[a][e] == a;
    if (ok) {
      g.identity = e;
      found = true;
    }
  }
  if (!found) throw InvalidInput("group table has no identity");
  g.inverse.assign(n, n);
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b)
      if (g.table[a][b] == g.identity) g.inverse[a] = b;
  for (auto v : g.inverse)
    if (v == n) throw InvalidInput("group table element without inverse");
  g.validate();
  return g;
}

PartialMap compose(const PartialMap& a, const PartialMap& b) {
  if (a.image.size() != b.image.size()) throw FamilyMismatch("partial maps on different ground sets");
  PartialMap out;
  out.image.resize(b.image.size(), -1);
  for (std::size_t p = 0; p < b.image.size(); ++p) {
    auto q = b.image[p];
    if (q >= 0) out.image[p] = a.image[static_cast<std::size_t>(q)];
  }
  return out;
}

PartialMap inverse(const PartialMap& f) {
  PartialMap out;
  out.image.assign(f.image.size(), -1);
  for (std::size_t p = 0; p < f.image.size(); ++p)
    if (f.image[p] >= 0) out.image[static_cast<std::size_t>(f.image[p])] = static_cast<std::int32_t>(p);
  return out;
}

std::string key_of(const PartialMap& f) {
  std::string k;
  k.reserve(f.image.size());
  for (auto v : f.image) k.push_back(static_cast<char>(v + 1));
  return k;
}

std::string format_partial_map(const PartialMap& f) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (std::size_t p = 0; p < f.image.size(); ++p) {
    if (f.image[p] < 0) continue;
    if (!first) os << ", ";
    first = false;
    os << p + 1 << "->" << f.image[p] + 1;
  }
  os << '}';
  return os.str();
}

PartialMap parse_partial_map(std::string_view text, int ground) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.size() < 2 || s.front() != '{' || s.back() != '}')
    throw ParseError("partial map must look like {1->3, 2->1}: " + std::string(text));
  PartialMap f;
  f.image.assign(static_cast<std::size_t>(ground), -1);
  std::vector<bool> hit(static_cast<std::size_t>(ground), false);
  std::string body = s.substr(1, s.size() - 2);
  std::size_t pos = 0;
  while (pos < body.size()) {
    auto comma = body.find(',', pos);
    std::string item = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    auto arrow = item.find("->");
    if (arrow == std::string::npos) throw ParseError("missing '->' in " + item);
    int p = 0, q = 0;
    try {
      p = std::stoi(item.substr(0, arrow));
      q = std::stoi(item.substr(arrow + 2));
    } catch (const std::exception&) {
      throw ParseError("bad point in " + item);
    }
    if (p < 1 || p > ground || q < 1 || q > ground) throw ParseError("point out of range in " + item);
    if (f.image[static_cast<std::size_t>(p - 1)] >= 0 || hit[static_cast<std::size_t>(q - 1)])
      throw ParseError("not a partial bijection: " + std::string(text));
    f.image[static_cast<std::size_t>(p - 1)] = q - 1;
    hit[static_cast<std::size_t>(q - 1)] = true;
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return f;
}

std::uint32_t FinitePBSemigroup::index_of(const PartialMap& f) const {
  auto it = index.find(key_of(f));
  if (it == index.end()) throw InvalidInput("partial map outside the semigroup: " + format_partial_map(f));
  return it->second;
}

std::vector<std::uint32_t> FinitePBSemigroup::idempotents() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t a = 0; a < elements.size(); ++a)
    if (is_idempotent(a)) out.push_back(a);
  return out;
}

FinitePBSemigroup closure(int ground, const std::vector<PartialMap>& generators, std::size_t cap) {
  FinitePBSemigroup s;
  s.ground = ground;
  std::vector<PartialMap> gens;
  for (const auto& g : generators) {
    if (static_cast<int>(g.image.size()) != ground)
      throw InvalidInput("generator on a different ground set");
    gens.push_back(g);
  }
  for (const auto& g : generators) gens.push_back(inverse(g));

  std::deque<std::uint32_t> queue;
  auto add = [&](PartialMap f) {
    auto key = key_of(f);
    if (s.index.count(key)) return;
    if (s.elements.size() >= cap) throw BudgetExhausted("closure exceeded " + std::to_string(cap) + " elements");
    auto id = static_cast<std::uint32_t>(s.elements.size());
    s.index.emplace(std::move(key), id);
    s.elements.push_back(std::move(f));
    queue.push_back(id);
  };
  for (const auto& g : gens) add(g);
  while (!queue.empty()) {
    auto x = queue.front();
    queue.pop_front();
    for (const auto& g : gens) add(compose(g, s.elements[x]));
  }
  const auto n = s.elements.size();
  s.table.assign(n, std::vector<std::uint32_t>(n));
  s.star.resize(n);
  for (std::uint32_t a = 0; a < n; ++a) {
    s.star[a] = s.index_of(inverse(s.elements[a]));
    for (std::uint32_t b = 0; b < n; ++b) s.table[a][b] = s.index_of(compose(s.elements[a], s.elements[b]));
  }
  return s;
}

GroupQuotient max_group_image(const FinitePBSemigroup& s) {
  const auto n = static_cast<std::uint32_t>(s.size());
  std::vector<std::uint32_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto e : s.idempotents()) {
    std::unordered_map<std::uint32_t, std::uint32_t> by_product;
    for (std::uint32_t a = 0; a < n; ++a) {
      auto [it, fresh] = by_product.emplace(s.table[a][e], a);
      if (!fresh) parent[find(a)] = find(it->second);
    }
  }
  GroupQuotient q;
  std::unordered_map<std::uint32_t, std::uint32_t> label;
  q.sigma.resize(n);
  std::vector<std::uint32_t> rep;
  for (std::uint32_t a = 0; a < n; ++a) {
    auto root = find(a);
    auto [it, fresh] = label.emplace(root, static_cast<std::uint32_t>(rep.size()));
    if (fresh) rep.push_back(a);
    q.sigma[a] = it->second;
  }
  const auto k = rep.size();
  q.group.table.assign(k, std::vector<std::uint32_t>(k));
  q.group.inverse.resize(k);
  for (std::uint32_t i = 0; i < k; ++i) {
    q.group.inverse[i] = q.sigma[s.star[rep[i]]];
    for (std::uint32_t j = 0; j < k; ++j) q.group.table[i][j] = q.sigma[s.table[rep[i]][rep[j]]];
  }
  q.group.identity = q.sigma[s.idempotents().front()];
  q.group.validate();
  return q;
}

}  // namespace schutz

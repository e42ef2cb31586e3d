#include "schutz/catalogue.hpp"

#include "schutz/error.hpp"

#include <json.hpp>

#include <fstream>
#include <set>

namespace schutz {

namespace {

using nlohmann::json;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::int64_t to_int(std::string_view s) {
  try {
    std::size_t used = 0;
    auto v = std::stoll(std::string(s), &used);
    if (used != s.size()) throw ParseError("bad integer '" + std::string(s) + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("bad integer '" + std::string(s) + "'");
  }
}

}  // namespace

OraclePtr load_partial_bijections(const std::string& path) {
  auto j = read_json(path);
  try {
    int ground = j.at("ground").get<int>();
    std::vector<PartialMap> gens;
    for (const auto& g : j.at("generators")) gens.push_back(parse_partial_map(g.get<std::string>(), ground));
    return partial_bijections(ground, gens, "pb:" + path);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

LoopGraph load_loop_graph(const std::string& path) {
  auto j = read_json(path);
  try {
    LoopGraph g;
    g.vertices = j.at("vertices").get<std::uint32_t>();
    g.loop.assign(g.vertices, false);
    g.root = j.value("root", 0u);
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (const auto& e : j.at("edges")) {
      auto u = e.at(0).get<std::uint32_t>(), v = e.at(1).get<std::uint32_t>();
      if (u >= g.vertices || v >= g.vertices) throw InvalidInput("edge endpoint out of range in " + path);
      if (u == v) {
        g.loop[u] = true;
        continue;
      }
      if (seen.insert({std::min(u, v), std::max(u, v)}).second) g.edges.emplace_back(u, v);
    }
    return g;
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

OraclePtr load_box_permutations(const std::string& path) {
  auto j = read_json(path);
  try {
    int rank = j.at("rank").get<int>();
    std::vector<std::vector<std::vector<std::int32_t>>> levels;
    for (const auto& lv : j.at("levels")) {
      std::vector<std::vector<std::int32_t>> perms;
      for (const auto& p : lv) {
        std::vector<std::int32_t> perm;
        for (const auto& v : p) perm.push_back(v.get<std::int32_t>() - 1);
        perms.push_back(std::move(perm));
      }
      levels.push_back(std::move(perms));
    }
    return box_space(rank, std::move(levels));
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

OraclePtr make_oracle(std::string_view text) {
  std::string spec(text);
  auto after = [&](std::string_view prefix) { return spec.substr(prefix.size()); };
  auto starts = [&](std::string_view prefix) { return spec.rfind(prefix, 0) == 0; };

  if (spec == "bicyclic") return bicyclic();
  if (spec == "bicyclic-monoid") return bicyclic_monoid();
  if (spec == "nat-min") return nat_min();
  if (spec == "nat-max") return nat_max();
  if (spec == "Z") return integers();
  if (starts("polycyclic:")) return polycyclic(static_cast<int>(to_int(after("polycyclic:"))));
  if (starts("free:")) return free_group(static_cast<int>(to_int(after("free:"))));
  if (starts("cyclic:")) {
    auto n = to_int(after("cyclic:"));
    if (n < 1) throw ParseError("cyclic group order must be positive");
    return cyclic_group(static_cast<std::uint32_t>(n));
  }
  if (starts("sym-inverse:")) return symmetric_inverse(static_cast<int>(to_int(after("sym-inverse:"))));
  if (starts("box:Z:")) {
    std::vector<std::int64_t> moduli;
    std::string rest = after("box:Z:");
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      auto comma = rest.find(',', pos);
      moduli.push_back(to_int(rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos)));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return box_space(moduli);
  }
  if (starts("box:perm:")) return load_box_permutations(after("box:perm:"));
  if (starts("pb:")) return load_partial_bijections(after("pb:"));
  if (starts("graph:")) return graph_realization(load_loop_graph(after("graph:")));
  if (starts("unit+")) return adjoin_identity(make_oracle(after("unit+")));
  if (starts("zero+")) return adjoin_zero(make_oracle(after("zero+")));
  if (starts("product:")) {
    std::string rest = after("product:");
    auto star = rest.rfind('*');
    if (star == std::string::npos) throw ParseError("product needs <S>*<G>: " + spec);
    return product_with_group(make_oracle(rest.substr(0, star)), make_oracle(rest.substr(star + 1)));
  }
  throw ParseError("unknown family '" + spec + "'");
}

std::vector<CatalogueEntry> catalogue() {
  return {
      {"bicyclic", "a^i a*^j with a zero; K = {a, a*, 0}"},
      {"bicyclic-monoid", "a^i a*^j without zero; K = {a, a*}; G(S) = Z"},
      {"polycyclic:n", "polycyclic monoid P_n with zero"},
      {"nat-min", "(N, min), N = {1, 2, ...}; infinite K, generator i is i+1"},
      {"nat-max", "(N, max), N = {1, 2, ...}; infinite K, generator i is i+1"},
      {"Z", "the integers, K = {+1, -1}"},
      {"free:n", "free group of rank n"},
      {"cyclic:n", "cyclic group of order n"},
      {"sym-inverse:n", "symmetric inverse monoid I_n"},
      {"box:Z:m1,m2,...", "box space of Z over m1 | m2 | ..."},
      {"box:perm:file", "box space of a free group from permutation quotients (JSON)"},
      {"pb:file", "inverse semigroup generated by partial bijections (JSON)"},
      {"graph:file", "Brandt realization of a connected loop-decorated graph (JSON)"},
      {"product:S*G", "S x G for a finite group G"},
      {"unit+S", "S with an adjoined identity <1>"},
      {"zero+S", "S with an adjoined zero <0>"},
  };
}

}  // namespace schutz

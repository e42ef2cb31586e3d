#include "schutz/graph_io.hpp"

#include "schutz/error.hpp"

#include <sstream>

namespace schutz {

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string to_dot(const std::vector<Fragment>& fragments) {
  std::ostringstream os;
  for (std::size_t n = 0; n < fragments.size(); ++n) {
    const auto& f = fragments[n];
    const auto& s = *f.oracle;
    os << "digraph fragment" << n << " {\n";
    os << "  label=\"" << dot_escape(s.name() + " seed " + s.format(f.seed) + " radius " + std::to_string(f.radius) +
                                     (f.complete ? " (complete)" : ""))
       << "\";\n";
    for (std::size_t v = 0; v < f.size(); ++v)
      os << "  v" << v << " [label=\"" << dot_escape(s.format(f.vertices[v])) << "\"];\n";
    for (const auto& e : f.edges)
      os << "  v" << e.from << " -> v" << e.to << " [label=\"" << dot_escape(s.generator_label(e.label)) << "\"];\n";
    os << "}\n";
  }
  return os.str();
}

nlohmann::json to_json(const Fragment& f) {
  const auto& s = *f.oracle;
  nlohmann::json j;
  j["family"] = s.name();
  j["seed"] = s.format(f.seed);
  j["radius"] = f.radius;
  j["prefix"] = f.prefix;
  j["cap"] = f.cap;
  j["complete"] = f.complete;
  auto& vs = j["vertices"] = nlohmann::json::array();
  for (const auto& v : f.vertices) vs.push_back(s.format(v));
  auto& es = j["edges"] = nlohmann::json::array();
  for (const auto& e : f.edges) es.push_back({{"x", e.from}, {"label", e.label}, {"y", e.to}});
  j["distances"] = f.depth;
  return j;
}

Fragment fragment_from_json(const nlohmann::json& j, OraclePtr oracle) {
  try {
    const auto& s = *oracle;
    if (j.at("family").get<std::string>() != s.name())
      throw InvalidInput("fragment family " + j.at("family").get<std::string>() + " does not match " + s.name());
    Fragment f;
    f.oracle = oracle;
    f.seed = s.parse(j.at("seed").get<std::string>());
    f.idempotent = s.multiply(s.star(f.seed), f.seed);
    f.radius = j.at("radius").get<int>();
    f.prefix = j.at("prefix").get<std::size_t>();
    f.cap = j.value("cap", std::size_t{8});
    f.complete = j.at("complete").get<bool>();
    for (const auto& v : j.at("vertices")) {
      auto x = s.parse(v.get<std::string>());
      if (s.multiply(s.star(x), x) != f.idempotent)
        throw InvalidInput("vertex " + v.get<std::string>() + " is not L-related to the seed");
      if (!f.index.emplace(x, f.vertices.size()).second) throw InvalidInput("duplicate vertex");
      f.vertices.push_back(x);
    }
    f.depth = j.at("distances").get<std::vector<int>>();
    if (f.depth.size() != f.vertices.size()) throw InvalidInput("distances do not match vertices");
    for (const auto& e : j.at("edges")) {
      Edge edge{e.at("x").get<std::size_t>(), e.at("label").get<std::size_t>(), e.at("y").get<std::size_t>()};
      if (edge.from >= f.size() || edge.to >= f.size()) throw InvalidInput("edge endpoint out of range");
      if (s.multiply(s.generator(edge.label), f.vertices[edge.from]) != f.vertices[edge.to])
        throw InvalidInput("edge label does not map x to y");
      f.edges.push_back(edge);
    }
    f.rebuild_adjacency();
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("fragment JSON: ") + e.what());
  }
}

}  // namespace schutz

// schutz: fragments, FL and Følner certificates, property A witnesses, operator checks.
#include "schutz/catalogue.hpp"
#include "schutz/certificate.hpp"
#include "schutz/error.hpp"
#include "schutz/graph_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace schutz;
using nlohmann::json;

namespace {

struct RunConfig {
  std::string command;
  std::string family;
  std::vector<std::string> seeds;
  std::size_t prefix = 0;
  std::optional<int> radius;
  std::optional<std::size_t> budget;
  std::string output;
  std::string format = "json";
  // graph
  std::size_t cap = 8;
  // fl
  std::string k1 = "1";
  int C = 1;
  // folner
  std::string eps;
  std::string mode = "domain-measurable";
  int R = 1;
  std::vector<std::string> tests;
  int max_radius = 6;
  std::size_t max_subset = 12;
  std::size_t subset_pool = 16;
  // propa
  int max_C = 8;
  std::string method = "ball";
  // oplab
  std::vector<std::string> s_list;
  std::size_t max_functions = 8;
  // verify
  std::string certificate;
};

json effective(const RunConfig& c) {
  json j = {{"command", c.command}, {"family", c.family}, {"seeds", c.seeds}, {"prefix", c.prefix},
            {"output", c.output}, {"format", c.format}};
  j["radius"] = c.radius ? json(*c.radius) : json(nullptr);
  j["budget"] = c.budget ? json(*c.budget) : json(nullptr);
  if (c.command == "graph") j["cap"] = c.cap;
  if (c.command == "fl") j.update({{"k1", c.k1}, {"C", c.C}});
  if (c.command == "folner")
    j.update({{"eps", c.eps}, {"mode", c.mode}, {"R", c.R}, {"tests", c.tests}, {"max_radius", c.max_radius},
              {"max_subset", c.max_subset}, {"subset_pool", c.subset_pool}});
  if (c.command == "propa") j.update({{"eps", c.eps}, {"R", c.R}, {"max_C", c.max_C}, {"method", c.method}});
  if (c.command == "oplab") j.update({{"s", c.s_list}, {"max_functions", c.max_functions}});
  return j;
}

// Writes through a temporary file in the same directory, then renames.
void write_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << text;
    if (!out) throw Error("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

// Artifact to --output (summary on stdout), or artifact to stdout (summary on stderr).
void emit(const RunConfig& c, const std::string& artifact, const std::string& summary) {
  if (c.output.empty()) {
    std::cout << artifact;
    std::cerr << summary << "\n";
  } else {
    write_atomic(c.output, artifact);
    std::cout << summary << "\n";
  }
}

// "1..20", "1,3,5" or a mix; 1-based positions in the generator stream.
std::vector<std::size_t> parse_k1(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string part;
  auto number = [](const std::string& t) -> std::size_t {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(t, &pos);
    } catch (const std::exception&) {
      throw ParseError("bad K1 entry '" + t + "'");
    }
    if (pos != t.size() || v == 0) throw ParseError("bad K1 entry '" + t + "'");
    return v;
  };
  while (std::getline(ss, part, ',')) {
    auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(number(part) - 1);
      continue;
    }
    auto lo = number(part.substr(0, dots)), hi = number(part.substr(dots + 2));
    if (hi < lo) throw ParseError("empty K1 range '" + part + "'");
    for (auto k = lo; k <= hi; ++k) out.push_back(k - 1);
  }
  if (out.empty()) throw ParseError("K1 is empty");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::size_t prefix_of(const RunConfig& c, const SemigroupOracle& s, std::size_t fallback) {
  return c.prefix ? c.prefix : s.default_prefix(fallback);
}

int cmd_families() {
  for (const auto& e : catalogue()) std::cout << e.pattern << "\t" << e.summary << "\n";
  return kCertified;
}

int cmd_graph(const RunConfig& c) {
  auto s = make_oracle(c.family);
  if (c.seeds.empty()) throw InvalidInput("graph needs at least one --seed");
  FragmentOptions opt;
  opt.radius = c.radius.value_or(4);
  opt.prefix = prefix_of(c, *s, 8);
  opt.cap = c.cap;
  if (c.budget) opt.budget = *c.budget;
  std::vector<Fragment> frags;
  for (const auto& seed : c.seeds) frags.push_back(build_fragment(s, s->parse(seed), opt));
  std::string artifact;
  if (c.format == "dot") {
    artifact = "// config: " + effective(c).dump() + "\n" + to_dot(frags);
  } else {
    json j = {{"config", effective(c)}, {"fragments", json::array()}};
    for (const auto& f : frags) j["fragments"].push_back(to_json(f));
    artifact = j.dump(2) + "\n";
  }
  std::ostringstream sum;
  for (const auto& f : frags)
    sum << s->format(f.seed) << ": " << f.size() << " vertices, " << f.edges.size() << " edges"
        << (f.complete ? ", complete" : "") << "\n";
  auto text = sum.str();
  text.pop_back();
  emit(c, artifact, text);
  return kCertified;
}

int cmd_fl(const RunConfig& c) {
  auto s = make_oracle(c.family);
  auto k1 = parse_k1(c.k1);
  if (c.C < 1) throw InvalidInput("C must be positive");
  FLScope scope;
  scope.radius = c.radius.value_or(2);
  scope.prefix = c.prefix;
  if (c.budget) scope.budget = *c.budget;
  auto r = check_fl(*s, k1, c.C, scope);
  auto cert = fl_certificate(c.family, *s, r, effective(c));
  if (!cert) {
    emit(c, json{{"kind", "fl-inconclusive"}, {"reason", r.reason}, {"config", effective(c)}}.dump(2) + "\n",
         "inconclusive at scope: " + r.reason);
    return kInconclusive;
  }
  std::string summary;
  if (r.verdict == Verdict::Certified) {
    summary = "certified: " + std::to_string(r.edges_checked) + " edges labeled by K1-words of length <= " +
              std::to_string(c.C);
  } else {
    summary = "refuted: edge " + s->format(r.witness->x) + " --" + s->generator_label(r.witness->label) + "--> " +
              s->format(r.witness->y) + " has no K1-word of length <= " + std::to_string(c.C);
  }
  emit(c, cert->dump(2) + "\n", summary);
  return r.verdict == Verdict::Certified ? kCertified : kRefuted;
}

int cmd_folner(const RunConfig& c) {
  auto s = make_oracle(c.family);
  if (c.eps.empty()) throw InvalidInput("folner needs --eps");
  auto eps = parse_rational(c.eps);
  if (eps <= 0) throw InvalidInput("epsilon must be positive");
  auto mode = parse_folner_mode(c.mode);
  FolnerSearchOptions opt;
  opt.prefix = prefix_of(c, *s, 4);
  for (const auto& seed : c.seeds) opt.centers.push_back(s->parse(seed));
  if (opt.centers.empty()) opt.centers = s->generator_prefix(std::min<std::size_t>(opt.prefix, 4));
  opt.max_radius = c.radius.value_or(c.max_radius);
  opt.max_subset = c.max_subset;
  opt.subset_pool = c.subset_pool;
  opt.R = c.R;
  if (c.budget) opt.subset_budget = *c.budget;
  std::vector<Element> tests;
  for (const auto& t : c.tests) tests.push_back(s->parse(t));
  if (tests.empty() && mode != FolnerMode::Neighborhood) tests = s->generator_prefix(opt.prefix);
  auto r = folner_search(s, tests, eps, mode, opt);
  auto cert = folner_certificate(c.family, *s, r, tests, eps, mode, opt, effective(c));
  if (r.certificate) {
    std::string ratios;
    for (const auto& q : r.certificate->ratios) ratios += (ratios.empty() ? "" : ", ") + to_string(q);
    emit(c, cert.dump(2) + "\n",
         "certified: |F| = " + std::to_string(r.certificate->F.size()) + ", ratios " + ratios);
    return kCertified;
  }
  emit(c, cert.dump(2) + "\n",
       "not found at budget (" + r.scope + "); " + std::to_string(r.evidence.size()) + " balls recorded");
  return kInconclusive;
}

int cmd_propa(const RunConfig& c) {
  auto s = make_oracle(c.family);
  auto eps = parse_rational(c.eps.empty() ? "1/2" : c.eps);
  if (eps <= 0) throw InvalidInput("epsilon must be positive");
  const auto prefix = prefix_of(c, *s, 4);
  FragmentOptions fo;
  fo.radius = c.radius.value_or(16);
  fo.prefix = prefix;
  if (c.budget) fo.budget = *c.budget;
  std::vector<Element> seeds;
  for (const auto& seed : c.seeds) seeds.push_back(s->parse(seed));
  if (seeds.empty()) throw InvalidInput("propa needs at least one --seed");
  std::vector<Fragment> frags;
  for (const auto& seed : seeds) frags.push_back(build_fragment(s, seed, fo));
  LPOptions lp;
  if (c.budget) lp.max_variables = *c.budget;

  for (int C = 0; C <= c.max_C; ++C) {
    std::vector<WitnessComponent> comps;
    bool all = true;
    for (const auto& f : frags) {
      PropertyAWitness w;
      if (c.method == "ball")
        w = ball_average_witness(f, C, c.R);
      else if (c.method == "tree")
        w = tree_ray_witness(f, C, c.R);
      else if (c.method == "lp")
        w = lp_optimal_witness(f, c.R, C, lp).witness;
      else
        throw InvalidInput("unknown method '" + c.method + "' (ball, tree, lp)");
      w.eps = eps;
      auto rep = check_witness(f, w);
      if (!rep.ok) {
        all = false;
        break;
      }
      comps.push_back({s->format(f.seed), fo.radius, prefix, witness_to_json(f, w)});
    }
    if (!all) continue;
    auto cert = witness_certificate(c.family, c.method, comps, effective(c));
    emit(c, cert.dump(2) + "\n",
         "certified: one C = " + std::to_string(C) + " serves " + std::to_string(comps.size()) +
             " components at R = " + std::to_string(c.R) + ", eps = " + to_string(eps));
    return kCertified;
  }
  emit(c, json{{"kind", "witness-inconclusive"}, {"config", effective(c)}}.dump(2) + "\n",
       "no C <= " + std::to_string(c.max_C) + " works for every component");
  return kInconclusive;
}

int cmd_oplab(const RunConfig& c) {
  OplabScope sc;
  sc.seeds = c.seeds;
  sc.radius = c.radius.value_or(2);
  sc.prefix = c.prefix;
  sc.s_list = c.s_list;
  sc.max_functions = c.max_functions;
  auto rep = operator_report(c.family, sc, effective(c));
  std::ostringstream sum;
  for (const auto& p : rep["data"]["propagation"])
    sum << "p(V[" << p["s"].get<std::string>() << "]) = " << p["p"].get<std::string>()
        << ", d(s*s, s) = " << p["d"].get<std::string>() << "\n";
  for (const auto& chk : rep["data"]["checks"]) {
    sum << (chk["ok"].get<bool>() ? "ok   " : "FAIL ") << chk["name"].get<std::string>() << " ("
        << chk["columns_checked"] << " columns, " << chk["columns_censored"] << " censored)";
    if (!chk["mismatches"].empty()) sum << "; first mismatch " << chk["mismatches"][0].get<std::string>();
    sum << "\n";
  }
  auto text = sum.str();
  text.pop_back();
  emit(c, rep.dump(2) + "\n", text);
  return operator_report_ok(rep) ? kCertified : kRefuted;
}

int cmd_verify(const RunConfig& c) {
  std::ifstream in(c.certificate);
  if (!in) throw InvalidInput("cannot read " + c.certificate);
  json cert;
  try {
    in >> cert;
  } catch (const json::exception& e) {
    std::cerr << "schema: " << e.what() << "\n";
    return kSchema;
  }
  auto out = verify_certificate(cert);
  for (const auto& p : out.problems) std::cerr << p << "\n";
  std::cout << (out.code == kCertified ? "verified " : "rejected ") << (out.kind.empty() ? "?" : out.kind) << "\n";
  return out.code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schützenberger graph toolkit: fragments, FL, Følner sets, property A, operators"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file; flags override it")->check(CLI::ExistingFile);
  app.fallthrough();
  RunConfig cfg;
  app.add_option("--family", cfg.family, "catalogue name (see `families`)");
  app.add_option("--seed", cfg.seeds, "seed element(s) in normal form");
  app.add_option("--prefix,-m", cfg.prefix, "generator prefix (0 = family default)");
  app.add_option("--radius", cfg.radius, "fragment / scope radius");
  app.add_option("--budget", cfg.budget, "budget override for vertices, subsets and LP size")
      ->envname("SCHUTZ_BUDGET")
      ->check(CLI::PositiveNumber);
  app.add_option("--output,-o", cfg.output, "artifact path (default stdout)");
  app.add_option("--format", cfg.format, "dot or json")->check(CLI::IsMember({"dot", "json"}));

  auto* families = app.add_subcommand("families", "list catalogue names");
  auto* graph = app.add_subcommand("graph", "build Schützenberger graph fragments");
  graph->add_option("--cap", cfg.cap, "labels stored per vertex pair")->check(CLI::PositiveNumber);
  auto* fl = app.add_subcommand("fl", "check or refute finite labeling at a scope");
  fl->add_option("--k1", cfg.k1, "generator positions, e.g. 1..20 or 1,3");
  fl->add_option("--C", cfg.C, "word length bound");
  auto* folner = app.add_subcommand("folner", "search for a Følner set");
  folner->add_option("--eps", cfg.eps, "epsilon as p/q")->required();
  folner->add_option("--mode", cfg.mode, "domain-measurable, amenable or neighborhood");
  folner->add_option("--R", cfg.R, "neighborhood radius");
  folner->add_option("--test", cfg.tests, "test elements (default: the generator prefix)");
  folner->add_option("--max-radius", cfg.max_radius, "largest ball radius");
  folner->add_option("--max-subset", cfg.max_subset, "largest exhaustive subset");
  folner->add_option("--subset-pool", cfg.subset_pool, "vertices the exhaustive subsets draw from");
  auto* propa = app.add_subcommand("propa", "property A witnesses with one C across components");
  propa->add_option("--eps", cfg.eps, "epsilon as p/q (default 1/2)");
  propa->add_option("--R", cfg.R, "pair distance bound");
  propa->add_option("--max-C", cfg.max_C, "largest support radius tried");
  propa->add_option("--method", cfg.method, "ball, tree or lp")->check(CLI::IsMember({"ball", "tree", "lp"}));
  auto* oplab = app.add_subcommand("oplab", "operator identities on a window of L-classes");
  oplab->add_option("--s", cfg.s_list, "elements s for V_s (default: the generator prefix)");
  oplab->add_option("--max-functions", cfg.max_functions, "indicator functions used for π(f)");
  auto* verify = app.add_subcommand("verify", "recheck a certificate file");
  verify->add_option("certificate", cfg.certificate, "certificate JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParseError;
  }

  try {
    if (families->parsed()) return cmd_families();
    for (auto* sub : {graph, fl, folner, propa, oplab})
      if (sub->parsed()) {
        cfg.command = sub->get_name();
        if (cfg.family.empty()) throw InvalidInput("--family is required");
      }
    if (graph->parsed()) return cmd_graph(cfg);
    if (fl->parsed()) return cmd_fl(cfg);
    if (folner->parsed()) return cmd_folner(cfg);
    if (propa->parsed()) return cmd_propa(cfg);
    if (oplab->parsed()) return cmd_oplab(cfg);
    if (verify->parsed()) {
      cfg.command = "verify";
      return cmd_verify(cfg);
    }
  } catch (const BudgetExhausted& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return kBudget;
  } catch (const Censored& e) {
    std::cerr << "inconclusive at scope: " << e.what() << "\n";
    return kInconclusive;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParseError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParseError;
  }
  return kParseError;
}

#include "schutz/certificate.hpp"

#include "schutz/catalogue.hpp"
#include "schutz/error.hpp"
#include "schutz/operators.hpp"
#include "schutz/semigroup.hpp"

#include <openssl/evp.h>

#include <iomanip>
#include <set>
#include <sstream>

namespace schutz {

using nlohmann::json;

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 failed");
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

namespace {

std::string input_digest(const json& cert) {
  json inputs = {{"kind", cert.at("kind")}, {"family", cert.at("family")}, {"scope", cert.at("scope")}};
  return sha256_hex(inputs.dump());
}

json formatted(const SemigroupOracle& s, const std::vector<Element>& xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(s.format(x));
  return out;
}

std::vector<Element> parsed(const SemigroupOracle& s, const json& names) {
  std::vector<Element> out;
  for (const auto& n : names) out.push_back(s.parse(n.get<std::string>()));
  return out;
}

json rationals(const std::vector<Rational>& qs) {
  json out = json::array();
  for (const auto& q : qs) out.push_back(to_string(q));
  return out;
}

}  // namespace

json make_certificate(const std::string& kind, const std::string& family, json scope, json data, json config) {
  json cert = {{"kind", kind}, {"family", family}, {"scope", std::move(scope)}, {"data", std::move(data)},
               {"config", std::move(config)}};
  cert["recheck"] = input_digest(cert);
  return cert;
}

std::optional<json> fl_certificate(const std::string& family, const SemigroupOracle& s, const FLResult& r,
                                   const json& config) {
  json scope = {{"radius", r.scope.radius}, {"prefix", r.scope.prefix}, {"budget", r.scope.budget}};
  json k1 = r.k1;
  if (r.verdict == Verdict::Certified)
    return make_certificate("fl", family, scope, {{"k1", k1}, {"C", r.C}, {"edges_checked", r.edges_checked}},
                            config);
  if (r.verdict == Verdict::Refuted) {
    json transcript = json::array();
    for (const auto& layer : r.transcript) transcript.push_back(formatted(s, layer));
    json witness = {{"x", s.format(r.witness->x)}, {"label", r.witness->label}, {"y", s.format(r.witness->y)}};
    return make_certificate("fl-refutation", family, scope,
                            {{"k1", k1}, {"C", r.C}, {"witness", witness}, {"transcript", transcript}}, config);
  }
  return std::nullopt;
}

json folner_certificate(const std::string& family, const SemigroupOracle& s, const FolnerSearchResult& r,
                        const std::vector<Element>& tests, const Rational& eps, FolnerMode mode,
                        const FolnerSearchOptions& opt, const json& config) {
  json scope = {{"centers", formatted(s, opt.centers)}, {"prefix", opt.prefix},  {"max_radius", opt.max_radius},
                {"subset_pool", opt.subset_pool},       {"max_subset", opt.max_subset}, {"R", opt.R}};
  if (r.certificate) {
    const auto& c = *r.certificate;
    json data = {{"mode", to_string(c.mode)}, {"eps", to_string(c.eps)},  {"R", c.R},
                 {"F", formatted(s, c.F)},    {"tests", formatted(s, c.tests)}, {"ratios", rationals(c.ratios)},
                 {"localized", c.localized}};
    return make_certificate("folner", family, scope, data, config);
  }
  json evidence = json::array();
  for (const auto& ev : r.evidence)
    evidence.push_back({{"center", ev.center},
                        {"radius", ev.radius},
                        {"size", ev.size},
                        {"worst", to_string(ev.worst)},
                        {"boundary", to_string(ev.boundary)}});
  json data = {{"mode", to_string(mode)},        {"eps", to_string(eps)},      {"tests", formatted(s, tests)},
               {"evidence", evidence},          {"subsets_tried", r.subsets_tried}, {"search", r.scope}};
  return make_certificate("folner-evidence", family, scope, data, config);
}

json witness_certificate(const std::string& family, const std::string& method,
                         const std::vector<WitnessComponent>& components, const json& config) {
  json scope = json::array(), list = json::array();
  for (const auto& c : components) {
    scope.push_back({{"seed", c.seed}, {"fragment_radius", c.fragment_radius}, {"prefix", c.prefix}});
    list.push_back({{"seed", c.seed}, {"witness", c.witness}});
  }
  return make_certificate("witness", family, {{"components", scope}}, {{"method", method}, {"components", list}},
                          config);
}

namespace {

Window oplab_window(OraclePtr s, const OplabScope& sc, std::size_t prefix) {
  if (sc.seeds.empty()) return Window::full(s);
  std::vector<Fragment> frags;
  for (const auto& seed : sc.seeds) frags.push_back(build_fragment(s, s->parse(seed), {2 * sc.radius, prefix}));
  return Window(s, std::move(frags), sc.radius);
}

}  // namespace

json operator_report(const std::string& family, const OplabScope& sc, const json& config) {
  auto s = make_oracle(family);
  const std::size_t prefix = sc.prefix ? sc.prefix : s->default_prefix(4);
  auto w = oplab_window(s, sc, prefix);
  std::vector<Element> s_list;
  if (sc.s_list.empty())
    s_list = s->generator_prefix(prefix);
  else
    for (const auto& t : sc.s_list) s_list.push_back(s->parse(t));

  json prop = json::array();
  for (const auto& t : s_list) {
    auto e = s->multiply(s->star(t), t);
    auto frag = build_fragment(s, e, {2 * sc.radius, prefix});
    json row = {{"s", s->format(t)}, {"d", path_distance(frag, e, t).str()}};
    try {
      row["p"] = propagation(w, rep_V(w, t)).str();
    } catch (const Censored& c) {
      row["p"] = std::string("censored: ") + c.what();
    }
    prop.push_back(row);
  }
  std::vector<Function> fs;
  for (std::size_t i = 0; i < std::min(sc.max_functions, w.size()); ++i) {
    auto x = w.basis[i];
    fs.push_back([x](const Element& z) { return z == x ? Rational(1) : Rational(0); });
  }
  auto cp = crossed_product_check(w, s_list, fs);
  json checks = json::array();
  for (const auto& c : cp.checks)
    checks.push_back({{"name", c.name},
                      {"columns_checked", c.columns_checked},
                      {"columns_censored", c.columns_censored},
                      {"mismatches", c.mismatches},
                      {"ok", c.ok()}});
  json scope = {{"seeds", sc.seeds},   {"radius", sc.radius},       {"prefix", prefix},
                {"s", formatted(*s, s_list)}, {"max_functions", sc.max_functions}};
  json data = {{"basis", formatted(*s, w.basis)}, {"tensor_basis", cp.basis}, {"propagation", prop},
               {"checks", checks}};
  return make_certificate("operator-report", family, scope, data, config);
}

bool operator_report_ok(const json& report) {
  for (const auto& c : report.at("data").at("checks"))
    if (!c.at("ok").get<bool>()) return false;
  for (const auto& p : report.at("data").at("propagation"))
    if (p.at("p") != p.at("d")) return false;
  return true;
}

namespace {

void verify_fl(const json& cert, VerifyOutcome& out) {
  auto s = make_oracle(cert.at("family").get<std::string>());
  const auto& sc = cert.at("scope");
  const auto& d = cert.at("data");
  FLScope scope{sc.at("radius").get<int>(), sc.at("prefix").get<std::size_t>(), sc.at("budget").get<std::size_t>()};
  auto k1 = d.at("k1").get<std::vector<std::size_t>>();
  int C = d.at("C").get<int>();
  if (k1.empty() || C < 1) throw InvalidInput("K1 and C must be non-empty and positive");
  auto r = check_fl(*s, k1, C, scope);
  if (cert.at("kind") == "fl") {
    if (r.verdict != Verdict::Certified) out.problems.push_back("recheck verdict is " + to_string(r.verdict));
    if (r.edges_checked != d.at("edges_checked").get<std::size_t>())
      out.problems.push_back("edge count " + std::to_string(r.edges_checked) + " differs");
    return;
  }
  const auto& wj = d.at("witness");
  auto x = s->parse(wj.at("x").get<std::string>());
  auto y = s->parse(wj.at("y").get<std::string>());
  auto label = wj.at("label").get<std::size_t>();
  if (label >= scope.prefix) out.problems.push_back("witness label outside the prefix");
  if (!word_ball(*s, scope.radius, scope.prefix).contains(x)) out.problems.push_back("x outside the scope ball");
  if (s->multiply(s->generator(label), x) != y) out.problems.push_back("y is not label·x");
  if (!l_related(*s, x, y)) out.problems.push_back("y leaves the L-class of x");
  std::vector<Element> letters;
  for (auto k : k1) letters.push_back(s->generator(k));
  auto reach = reach_layers(*s, x, letters, C, scope.budget);
  json transcript = json::array();
  for (const auto& layer : reach.layers) {
    transcript.push_back(formatted(*s, layer));
    for (const auto& z : layer)
      if (z == y) out.problems.push_back("y is reached by a K1-word");
  }
  if (transcript != d.at("transcript")) out.problems.push_back("transcript differs from the recomputed reach sets");
}

FolnerSearchOptions folner_options(const SemigroupOracle& s, const json& sc) {
  FolnerSearchOptions opt;
  opt.centers = parsed(s, sc.at("centers"));
  opt.prefix = sc.at("prefix").get<std::size_t>();
  opt.max_radius = sc.at("max_radius").get<int>();
  opt.subset_pool = sc.at("subset_pool").get<std::size_t>();
  opt.max_subset = sc.at("max_subset").get<std::size_t>();
  opt.R = sc.at("R").get<int>();
  return opt;
}

void verify_folner_cert(const json& cert, VerifyOutcome& out) {
  auto s = make_oracle(cert.at("family").get<std::string>());
  const auto& d = cert.at("data");
  auto opt = folner_options(*s, cert.at("scope"));
  FolnerCertificate c;
  c.mode = parse_folner_mode(d.at("mode").get<std::string>());
  c.eps = parse_rational(d.at("eps").get<std::string>());
  c.R = d.at("R").get<int>();
  c.F = parsed(*s, d.at("F"));
  c.tests = parsed(*s, d.at("tests"));
  for (const auto& q : d.at("ratios")) c.ratios.push_back(parse_rational(q.get<std::string>()));
  c.localized = d.at("localized").get<bool>();
  if (c.eps <= 0) throw InvalidInput("epsilon must be positive");
  auto r = verify_folner(s, c, opt);
  out.problems.insert(out.problems.end(), r.problems.begin(), r.problems.end());
  if (!r.ok && r.problems.empty()) out.problems.push_back("Folner recheck failed");
}

void verify_folner_evidence(const json& cert, VerifyOutcome& out) {
  auto s = make_oracle(cert.at("family").get<std::string>());
  const auto& d = cert.at("data");
  auto opt = folner_options(*s, cert.at("scope"));
  auto mode = parse_folner_mode(d.at("mode").get<std::string>());
  auto eps = parse_rational(d.at("eps").get<std::string>());
  auto tests = parsed(*s, d.at("tests"));
  const std::size_t prefix = opt.prefix ? opt.prefix : s->default_prefix(4);
  const int frag_radius = opt.max_radius + (mode == FolnerMode::Neighborhood ? opt.R : 0);
  for (const auto& ev : d.at("evidence")) {
    auto center = s->parse(ev.at("center").get<std::string>());
    int r = ev.at("radius").get<int>();
    auto f = build_fragment(s, center, {frag_radius, prefix});
    auto idx = f.ball(0, r);
    std::vector<Element> F;
    for (auto i : idx) F.push_back(f.vertices[i]);
    Rational worst = 0;
    if (mode == FolnerMode::Neighborhood) {
      worst = neighborhood_ratio(f, idx, opt.R) - 1;
    } else {
      for (const auto& t : tests) worst = std::max(worst, domain_ratio(*s, F, t));
    }
    auto tag = ev.at("center").get<std::string>() + " r=" + std::to_string(r);
    if (F.size() != ev.at("size").get<std::size_t>()) out.problems.push_back(tag + ": ball size differs");
    if (to_string(worst) != ev.at("worst").get<std::string>()) out.problems.push_back(tag + ": ratio differs");
    if (mode == FolnerMode::Amenable)
      for (const auto& t : tests)
        if (!inside_domain(*s, F, t)) out.problems.push_back(tag + ": ball leaves D_{t*t}");
    if (worst <= eps) out.problems.push_back(tag + ": ball passes the test");
  }
}

void verify_witness_cert(const json& cert, VerifyOutcome& out) {
  auto s = make_oracle(cert.at("family").get<std::string>());
  const auto& scope = cert.at("scope").at("components");
  const auto& comps = cert.at("data").at("components");
  if (scope.size() != comps.size() || comps.empty()) throw InvalidInput("component lists differ");
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const auto& sc = scope[i];
    auto seed = sc.at("seed").get<std::string>();
    if (comps[i].at("seed").get<std::string>() != seed) throw InvalidInput("component seeds differ");
    auto f = build_fragment(s, s->parse(seed), {sc.at("fragment_radius").get<int>(), sc.at("prefix").get<std::size_t>()});
    auto w = witness_from_json(comps[i].at("witness"), f);
    auto rep = check_witness(f, w);
    for (const auto& v : rep.violations) out.problems.push_back(seed + ": " + v);
    if (!rep.ok && rep.violations.empty()) out.problems.push_back(seed + ": witness rejected");
  }
}

void verify_operator_report(const json& cert, VerifyOutcome& out) {
  const auto& sc = cert.at("scope");
  OplabScope scope;
  scope.seeds = sc.at("seeds").get<std::vector<std::string>>();
  scope.radius = sc.at("radius").get<int>();
  scope.prefix = sc.at("prefix").get<std::size_t>();
  scope.s_list = sc.at("s").get<std::vector<std::string>>();
  scope.max_functions = sc.at("max_functions").get<std::size_t>();
  auto again = operator_report(cert.at("family").get<std::string>(), scope, cert.at("config"));
  if (again.at("data") != cert.at("data")) out.problems.push_back("recomputed operator report differs");
}

}  // namespace

VerifyOutcome verify_certificate(const json& cert) {
  VerifyOutcome out;
  try {
    out.kind = cert.at("kind").get<std::string>();
    cert.at("data");
    cert.at("config");
    if (cert.at("recheck").get<std::string>() != input_digest(cert))
      out.problems.push_back("input digest does not match kind, family and scope");
    if (out.kind == "fl" || out.kind == "fl-refutation")
      verify_fl(cert, out);
    else if (out.kind == "folner")
      verify_folner_cert(cert, out);
    else if (out.kind == "folner-evidence")
      verify_folner_evidence(cert, out);
    else if (out.kind == "witness")
      verify_witness_cert(cert, out);
    else if (out.kind == "operator-report")
      verify_operator_report(cert, out);
    else
      throw InvalidInput("unknown certificate kind '" + out.kind + "'");
  } catch (const json::exception& e) {
    out.code = kSchema;
    out.problems.push_back(std::string("schema: ") + e.what());
    return out;
  } catch (const BudgetExhausted& e) {
    out.code = kBudget;
    out.problems.push_back(e.what());
    return out;
  } catch (const Censored& e) {
    out.code = kRefuted;
    out.problems.push_back(e.what());
    return out;
  } catch (const Error& e) {
    out.code = kSchema;
    out.problems.push_back(std::string("schema: ") + e.what());
    return out;
  }
  out.code = out.problems.empty() ? kCertified : kRefuted;
  return out;
}

}  // namespace schutz

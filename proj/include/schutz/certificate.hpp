#pragma once

#include "schutz/fl.hpp"
#include "schutz/folner.hpp"
#include "schutz/property_a.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace schutz {

// Exit-code contract shared by the CLI and verify.
enum ExitCode : int {
  kCertified = 0,
  kRefuted = 1,
  kParseError = 2,
  kBudget = 3,
  kInconclusive = 4,
  kSchema = 5,
};

std::string sha256_hex(const std::string& bytes);

// {kind, family, scope, data, config, recheck}; recheck is the SHA-256 of the
// canonical dump of {kind, family, scope}.
nlohmann::json make_certificate(const std::string& kind, const std::string& family, nlohmann::json scope,
                                nlohmann::json data, nlohmann::json config);

// kind "fl" or "fl-refutation"; nullopt for an inconclusive result.
std::optional<nlohmann::json> fl_certificate(const std::string& family, const SemigroupOracle& s,
                                             const FLResult& r, const nlohmann::json& config);

// kind "folner", or "folner-evidence" when the search found nothing.
nlohmann::json folner_certificate(const std::string& family, const SemigroupOracle& s, const FolnerSearchResult& r,
                                  const std::vector<Element>& tests, const Rational& eps, FolnerMode mode,
                                  const FolnerSearchOptions& options, const nlohmann::json& config);

struct WitnessComponent {
  std::string seed;
  int fragment_radius = 0;
  std::size_t prefix = 0;
  nlohmann::json witness;  // witness_to_json
};
nlohmann::json witness_certificate(const std::string& family, const std::string& method,
                                   const std::vector<WitnessComponent>& components, const nlohmann::json& config);

// Operator experiment on a window of L-class fragments; the report is reproducible from its scope.
struct OplabScope {
  std::vector<std::string> seeds;   // empty: every L-class of a finite S
  int radius = 4;                   // window depth; fragments are built at 2·radius
  std::size_t prefix = 0;
  std::vector<std::string> s_list;  // empty: the generator prefix
  std::size_t max_functions = 8;    // indicator functions of the first basis elements
};
nlohmann::json operator_report(const std::string& family, const OplabScope& scope, const nlohmann::json& config);
bool operator_report_ok(const nlohmann::json& report);

struct VerifyOutcome {
  int code = kSchema;
  std::string kind;
  std::vector<std::string> problems;
};
// Recomputes every asserted quantity from the family and scope.
VerifyOutcome verify_certificate(const nlohmann::json& cert);

}  // namespace schutz

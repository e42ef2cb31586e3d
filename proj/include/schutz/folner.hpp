#pragma once

#include "schutz/fragment.hpp"
#include "schutz/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace schutz {

enum class FolnerMode { DomainMeasurable, Amenable, Neighborhood };
std::string to_string(FolnerMode m);
FolnerMode parse_folner_mode(std::string_view text);

struct FolnerCertificate {
  FolnerMode mode = FolnerMode::DomainMeasurable;
  Rational eps;
  int R = 1;                          // neighborhood radius
  std::vector<Element> F;
  std::vector<Element> tests;         // the test set 𝓕 (unused in neighborhood mode)
  std::vector<Rational> ratios;       // one per test element, or |N_R F|/|F|
  bool localized = false;             // F inside one L-class
};

// |s(F ∩ D_{s*s}) \ F| / |F|.
Rational domain_ratio(const SemigroupOracle& s, const std::vector<Element>& F, const Element& t);
// F ⊆ D_{t*t}.
bool inside_domain(const SemigroupOracle& s, const std::vector<Element>& F, const Element& t);
// |N_R F| / |F| for F given by fragment vertices; Censored if N_R F reaches the truncation.
Rational neighborhood_ratio(const Fragment& f, const std::vector<std::size_t>& F, int R);

struct FolnerSearchOptions {
  std::vector<Element> centers;   // seeds of the candidate L-classes
  std::size_t prefix = 0;         // generator prefix for the fragments
  int max_radius = 6;             // ball candidates B_r(center), r ≤ max_radius
  std::size_t subset_pool = 16;   // exhaustive subsets drawn from the first pool vertices
  std::size_t max_subset = 12;    // exhaustive subsets of size ≤ max_subset
  std::size_t subset_budget = 1u << 20;
  int R = 1;                      // neighborhood radius
};

struct BallEvidence {
  std::string center;
  int radius = 0;
  std::size_t size = 0;
  Rational worst;       // largest ratio over the test set, or |N_R F|/|F| − 1
  Rational boundary;    // |N_1 F \ F| / |F| in the fragment, when exact
};

struct FolnerSearchResult {
  std::optional<FolnerCertificate> certificate;
  std::vector<BallEvidence> evidence;  // per evaluated ball
  std::size_t subsets_tried = 0;
  std::string scope;
};

FolnerSearchResult folner_search(OraclePtr oracle, const std::vector<Element>& tests, const Rational& eps,
                                 FolnerMode mode, const FolnerSearchOptions& options);

// Independent recount of every ratio from scratch; true iff all match and stay ≤ ε.
struct FolnerRecheck {
  bool ok = false;
  std::vector<std::string> problems;
};
FolnerRecheck verify_folner(OraclePtr oracle, const FolnerCertificate& cert, const FolnerSearchOptions& options);

// Projection of a certificate on S×G to S: F = {s : (s, g) ∈ F_G}, tests likewise.
FolnerCertificate project_certificate(const SemigroupOracle& s, const FolnerCertificate& product_cert,
                                      const Rational& eps);

}  // namespace schutz

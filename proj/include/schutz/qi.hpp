#pragma once

#include "schutz/fragment.hpp"
#include "schutz/rational.hpp"

#include <functional>
#include <string>
#include <vector>

namespace schutz {

// Vertex map X -> Y as indices into Y.vertices.
using VertexMap = std::vector<std::size_t>;

// Index map induced by an element map; throws InvalidInput when an image is missing from Y.
VertexMap map_vertices(const Fragment& X, const Fragment& Y, const std::function<Element(const Element&)>& phi);

struct QIWitness {
  VertexMap phi;
  Rational M = 1, C = 0;
  int R = 0;                            // density radius
  std::size_t pairs_checked = 0;
  std::size_t pairs_censored = 0;       // at least one distance inexact
  std::size_t targets_censored = 0;     // density not decidable inside Y
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// (1/M) dX - C ≤ dY ≤ M dX + C on every exact pair, and every Y vertex within R of the image.
QIWitness check_qi(const Fragment& X, const Fragment& Y, const VertexMap& phi, const Rational& M, const Rational& C,
                   int R);

struct QIConstants {
  Rational M = 1, C = 0;
  int R = 0;
  std::size_t pairs = 0;
};

// Integer M ≤ max_M minimizing M + C(M) (ties: smaller M), least C for it, least R.
QIConstants estimate_qi_constants(const Fragment& X, const Fragment& Y, const VertexMap& phi, int max_M = 8);

// Constants of ψ∘φ from those of φ and ψ.
QIConstants compose_constants(const QIConstants& phi, const QIConstants& psi);

struct PullbackReport {
  std::vector<std::size_t> F_S;         // φ⁻¹(F_T), read off X
  int R_S = 1, R_T = 1;                 // R_T = ⌈M R_S + C⌉
  Rational source_ratio;                // |N_{R_S} F_S| / |F_S|
  Rational target_ratio;                // |N_{R_T} F_T| / |F_T|
  Rational preimage_bound;              // |φ⁻¹(N_{R_T} F_T)| / |F_S|
  std::size_t fiber_min = 0, fiber_max = 0;
  Rational fiber_bound;                 // (fiber_max / fiber_min) · target_ratio
  bool holds() const { return source_ratio <= preimage_bound && source_ratio <= fiber_bound; }
};

// Følner transfer along a quasi-isometry. X must contain every preimage of
// N_{R_T} F_T (true for complete X); neighborhoods must be interior (else Censored).
PullbackReport pullback_folner(const Fragment& X, const Fragment& Y, const VertexMap& phi, const QIConstants& qi,
                               const std::vector<std::size_t>& F_T, int R_S);

struct ExtensionReport {
  std::size_t group_order = 0;
  std::vector<std::vector<std::size_t>> assigned;  // x -> targets it covers, sorted
  std::size_t multiplicity = 0;                    // max |assigned[x]|
  // ψ(x, g) for g < group_order, as Y indices.
  std::vector<std::vector<std::size_t>> psi;
  std::size_t covered = 0, certified_targets = 0, censored_targets = 0;
  bool surjective = false;                         // onto every certified target
  QIConstants constants;                           // of ψ against d_X(x, x') + [g ≠ g']
  std::vector<std::string> violations;
};

// Local-perturbation extension to X × G with |G| = group_order: each target y
// is assigned to one x with d(φx, y) ≤ R, and (x, g_j) ↦ j-th target of x.
ExtensionReport surjective_qi_extension(const Fragment& X, const Fragment& Y, const VertexMap& phi,
                                        const QIConstants& qi, std::size_t group_order);

}  // namespace schutz

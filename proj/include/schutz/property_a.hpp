#pragma once

#include "schutz/fragment.hpp"
#include "schutz/lp.hpp"
#include "schutz/rational.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace schutz {

// ξ_x for the interior vertices of one fragment, as sparse (vertex, weight) lists.
struct PropertyAWitness {
  int R = 1;
  Rational eps;
  int C = 0;
  std::vector<bool> interior;
  std::vector<std::vector<std::pair<std::size_t, Rational>>> xi;
};

struct WitnessReport {
  bool ok = false;
  std::vector<std::string> violations;
  std::size_t pairs_checked = 0;
  std::size_t pairs_censored = 0;  // distance not certified by the fragment
  Rational achieved;               // max ‖ξ_x − ξ_y‖₁ over checked pairs
};

WitnessReport check_witness(const Fragment& f, const PropertyAWitness& w);

// ‖ξ_x − ξ_y‖₁ exactly.
Rational l1_distance(const std::vector<std::pair<std::size_t, Rational>>& a,
                     const std::vector<std::pair<std::size_t, Rational>>& b);

// Interior marker shared by the constructions: B_C(x) is exact in the fragment.
std::vector<bool> interior_vertices(const Fragment& f, int C);

PropertyAWitness point_mass_witness(const Fragment& f, int R);
// ξ_x uniform on B_C(x); eps is set to the achieved value.
PropertyAWitness ball_average_witness(const Fragment& f, int C, int R);
// ξ_x uniform on the C vertices from x toward the root, the remainder on the root.
PropertyAWitness tree_ray_witness(const Fragment& f, int C, int R, std::size_t root = 0);

struct LPWitness {
  double eps_lp = 0;        // optimum of the floating LP
  Rational eps_exact;       // achieved by the rounded, renormalized witness
  PropertyAWitness witness;
  std::size_t variables = 0, rows = 0, iterations = 0;
};

LPWitness lp_optimal_witness(const Fragment& f, int R, int C, const LPOptions& options = {});

// Achieved ε of uniform windows of size 2C+1 on an n-cycle, over shifts 1..R.
Rational cycle_window_eps(std::size_t n, int C, int R);

struct ComponentA {
  std::string seed;
  std::size_t vertices = 0;
  std::optional<int> C;     // least C found
  std::string method;       // "ball-average" or "lp"
  Rational achieved;
};

struct UniformAReport {
  int R = 1;
  Rational eps;
  int max_C = 0;
  std::vector<ComponentA> components;
  std::optional<int> sup_C;  // set iff every component succeeded
  std::string scope;
  bool uniform() const { return sup_C.has_value(); }
};

struct UniformAOptions {
  int R = 1;
  Rational eps{1, 2};
  int max_C = 8;
  int fragment_radius = 64;
  std::size_t prefix = 0;
  bool use_lp = false;
};

UniformAReport uniform_property_a(OraclePtr oracle, const std::vector<Element>& seeds, const UniformAOptions& options);

// e_n = f_1 ⋯ f_n over the given idempotents (all of E(S) when empty).
std::vector<Element> projection_chain(const SemigroupOracle& s, std::vector<Element> idempotents = {});

struct Pushforward {
  Element minimum;                     // e = last element of the projection chain
  PropertyAWitness witness;            // on the group fragment
  WitnessReport source, pushed;
};

// ξ_{σ(s)}(σ(t)) := ξ_{se}(te). The source fragment must be the complete
// L-class of e; σ restricted to it must be a bijection onto the group fragment.
Pushforward push_witness_to_group_image(OraclePtr s, const Fragment& source, const PropertyAWitness& w,
                                        const Fragment& group);

nlohmann::json witness_to_json(const Fragment& f, const PropertyAWitness& w);
PropertyAWitness witness_from_json(const nlohmann::json& j, const Fragment& f);

}  // namespace schutz

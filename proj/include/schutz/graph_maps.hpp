#pragma once

#include "schutz/families.hpp"
#include "schutz/fragment.hpp"

#include <string>
#include <vector>

namespace schutz {

struct MapReport {
  Fragment image;
  std::vector<std::size_t> vertex_map;  // source vertex -> image vertex
  bool bijective = false;
  std::vector<std::string> violations;  // empty iff the map is a labeled isomorphism
  bool isomorphic() const { return bijective && violations.empty(); }
};

// x ↦ x s* from the fragment of Λ_{s*s} onto the same-radius fragment of Λ_{ss*}
// seeded at s*; checks bijectivity and label-preserving adjacency both ways.
MapReport rho_map(const Element& s, const Fragment& source);

// Right Schützenberger graph around seed*, built by right multiplication.
Fragment build_right_fragment(OraclePtr oracle, const Element& seed, const FragmentOptions& options);

// x ↦ x*, (x, k, y) ↦ (x*, k*, y*) onto the independently built right fragment.
MapReport involution_graph(const Fragment& source);

struct RealizationReport {
  OraclePtr oracle;
  Fragment fragment;
  std::vector<std::size_t> vertex_of;  // input vertex -> fragment vertex
  bool isomorphic = false;
  std::vector<std::string> violations;
};

// Brandt realization of a connected loop-decorated graph and the check that
// the Schützenberger graph of the root's L-class reproduces it with labels.
RealizationReport realize_graph(const LoopGraph& g);

}  // namespace schutz

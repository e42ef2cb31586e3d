#pragma once

#include "schutz/families.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace schutz {

// Builds an oracle from a catalogue name such as "polycyclic:2",
// "box:Z:2,4,8", "pb:gens.json", "product:sym-inverse:2*cyclic:2" or "unit+free:2".
OraclePtr make_oracle(std::string_view spec);

struct CatalogueEntry {
  std::string pattern;
  std::string summary;
};
std::vector<CatalogueEntry> catalogue();

// JSON loaders behind pb:, graph: and box:perm:.
OraclePtr load_partial_bijections(const std::string& path);
LoopGraph load_loop_graph(const std::string& path);
OraclePtr load_box_permutations(const std::string& path);

}  // namespace schutz

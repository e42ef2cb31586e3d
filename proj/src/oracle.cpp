#include "schutz/oracle.hpp"

#include "schutz/error.hpp"

namespace schutz {

void SemigroupOracle::throw_mismatch(const Element& a) const {
  throw FamilyMismatch("element of family " + family_name(a.family) + " given to " + name());
}

std::vector<Element> SemigroupOracle::generator_prefix(std::size_t m) const {
  auto count = generator_count();
  if (count && m > *count)
    throw InvalidInput("prefix " + std::to_string(m) + " exceeds the " + std::to_string(*count) +
                       " generators of " + name());
  std::vector<Element> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) out.push_back(generator(i));
  return out;
}

std::size_t SemigroupOracle::default_prefix(std::size_t fallback) const {
  auto count = generator_count();
  return count ? *count : fallback;
}

}  // namespace schutz

#include "schutz/element.hpp"

namespace schutz {

namespace {

inline void mix(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

template <class Range>
void mix_range(std::size_t& seed, const Range& r) {
  mix(seed, r.size());
  for (auto x : r) mix(seed, static_cast<std::size_t>(static_cast<std::int64_t>(x)));
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::Bicyclic: return "bicyclic";
    case Family::Polycyclic: return "polycyclic";
    case Family::NatMin: return "nat-min";
    case Family::NatMax: return "nat-max";
    case Family::Box: return "box";
    case Family::Integers: return "Z";
    case Family::FreeGroup: return "free";
    case Family::FiniteGroup: return "finite-group";
    case Family::PartialBijection: return "pb";
    case Family::GraphRealization: return "graph";
    case Family::Product: return "product";
    case Family::Adjoined: return "adjoined";
  }
  return "?";
}

bool Pair::operator==(const Pair& o) const {
  return *first == *o.first && *second == *o.second;
}

bool Wrapped::operator==(const Wrapped& o) const { return *inner == *o.inner; }

Element make_pair(Element a, Element b) {
  return Element{Family::Product, Pair{std::make_shared<const Element>(std::move(a)),
                                       std::make_shared<const Element>(std::move(b))}};
}

Element make_wrapped(Family f, Element inner) {
  return Element{f, Wrapped{std::make_shared<const Element>(std::move(inner))}};
}

std::size_t hash_value(const Element& e) {
  std::size_t seed = static_cast<std::size_t>(e.family) * 0x100000001b3ULL;
  mix(seed, e.payload.index());
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, BicyclicForm>) {
          mix(seed, p.i);
          mix(seed, p.j);
        } else if constexpr (std::is_same_v<T, WordPair>) {
          mix_range(seed, p.u);
          mix_range(seed, p.v);
        } else if constexpr (std::is_same_v<T, Integer>) {
          mix(seed, static_cast<std::size_t>(p.n));
        } else if constexpr (std::is_same_v<T, BoxForm>) {
          mix(seed, p.level);
          mix_range(seed, p.code);
        } else if constexpr (std::is_same_v<T, FreeWord>) {
          mix_range(seed, p.letters);
        } else if constexpr (std::is_same_v<T, PartialMap>) {
          mix_range(seed, p.image);
        } else if constexpr (std::is_same_v<T, EndpointPair>) {
          mix(seed, p.target);
          mix(seed, p.source);
        } else if constexpr (std::is_same_v<T, Pair>) {
          mix(seed, hash_value(*p.first));
          mix(seed, hash_value(*p.second));
        } else if constexpr (std::is_same_v<T, Wrapped>) {
          mix(seed, hash_value(*p.inner));
        }
      },
      e.payload);
  return seed;
}

}  // namespace schutz

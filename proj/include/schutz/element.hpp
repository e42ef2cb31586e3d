#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace schutz {

enum class Family : std::uint8_t {
  Bicyclic,
  Polycyclic,
  NatMin,
  NatMax,
  Box,
  Integers,
  FreeGroup,
  FiniteGroup,
  PartialBijection,
  GraphRealization,
  Product,
  Adjoined,
};

std::string family_name(Family f);

struct Element;

// Payloads. Each family uses a fixed subset and keeps it canonical.
struct Zero {
  bool operator==(const Zero&) const = default;
};
struct Unit {
  bool operator==(const Unit&) const = default;
};
// a^i a*^j
struct BicyclicForm {
  std::uint32_t i = 0, j = 0;
  bool operator==(const BicyclicForm&) const = default;
};
// u v* with letters 0..n-1; u and v share no forced cancellation
struct WordPair {
  std::vector<std::uint8_t> u, v;
  bool operator==(const WordPair&) const = default;
};
// Positive integer, integer, group index, all in one slot.
struct Integer {
  std::int64_t n = 0;
  bool operator==(const Integer&) const = default;
};
// Level of a box space and a code: one residue for cyclic chains, or
// concatenated permutation images for every level up to `level`.
struct BoxForm {
  std::uint32_t level = 1;
  std::vector<std::int64_t> code;
  bool operator==(const BoxForm&) const = default;
};
// Reduced word, letter +(i+1) for x_i and -(i+1) for its inverse.
struct FreeWord {
  std::vector<std::int32_t> letters;
  bool operator==(const FreeWord&) const = default;
};
// image[p] = q, or -1 where undefined. Points are 0-based internally.
struct PartialMap {
  std::vector<std::int32_t> image;
  bool operator==(const PartialMap&) const = default;
};
// Brandt arrow from `source` to `target`.
struct EndpointPair {
  std::uint32_t target = 0, source = 0;
  bool operator==(const EndpointPair&) const = default;
};
struct Pair {
  std::shared_ptr<const Element> first, second;
  bool operator==(const Pair& o) const;
};
struct Wrapped {
  std::shared_ptr<const Element> inner;
  bool operator==(const Wrapped& o) const;
};

using Payload = std::variant<Zero, Unit, BicyclicForm, WordPair, Integer, BoxForm, FreeWord,
                             PartialMap, EndpointPair, Pair, Wrapped>;

struct Element {
  Family family = Family::Integers;
  Payload payload;

  bool operator==(const Element& o) const { return family == o.family && payload == o.payload; }
  bool is_zero() const { return std::holds_alternative<Zero>(payload); }
  bool is_unit() const { return std::holds_alternative<Unit>(payload); }

  template <class T>
  const T& as() const {
    return std::get<T>(payload);
  }
};

Element make_pair(Element a, Element b);
Element make_wrapped(Family f, Element inner);

std::size_t hash_value(const Element& e);

struct ElementHash {
  std::size_t operator()(const Element& e) const { return hash_value(e); }
};

}  // namespace schutz

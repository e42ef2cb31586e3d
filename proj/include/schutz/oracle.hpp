#pragma once

#include "schutz/element.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace schutz {

class SemigroupOracle;
using OraclePtr = std::shared_ptr<const SemigroupOracle>;

// Closed form of the maximal group image: a group oracle and the projection σ.
struct GroupImage {
  OraclePtr group;
  std::function<Element(const Element&)> project;
};

// Multiply/star/equality contract shared by every family. Generators form an
// indexed stream closed under star; infinite streams are read through prefixes.
class SemigroupOracle : public std::enable_shared_from_this<SemigroupOracle> {
 public:
  virtual ~SemigroupOracle() = default;

  // Catalogue name, e.g. "polycyclic:2".
  virtual std::string name() const = 0;
  virtual Family family() const = 0;

  virtual Element multiply(const Element& a, const Element& b) const = 0;
  virtual Element star(const Element& a) const = 0;

  // nullopt for an infinite generator stream.
  virtual std::optional<std::size_t> generator_count() const = 0;
  virtual Element generator(std::size_t index) const = 0;
  virtual std::size_t star_index(std::size_t index) const = 0;

  virtual std::string format(const Element& a) const = 0;
  virtual Element parse(std::string_view text) const = 0;

  virtual bool is_idempotent(const Element& a) const { return multiply(a, a) == a; }
  virtual std::optional<GroupImage> group_image() const { return std::nullopt; }
  // All of E(S) when it is finite and enumerable.
  virtual std::optional<std::vector<Element>> idempotents() const { return std::nullopt; }
  // All of S when it is finite and enumerable.
  virtual std::optional<std::vector<Element>> elements() const { return std::nullopt; }
  virtual bool is_group() const { return false; }

  // Throws FamilyMismatch when `a` was not produced by this family.
  void check_family(const Element& a) const {
    if (a.family != family()) [[unlikely]]
      throw_mismatch(a);
  }
  // First `m` generators; throws InvalidInput if the stream is shorter.
  std::vector<Element> generator_prefix(std::size_t m) const;
  // Prefix size used when the caller gives none: the whole stream if finite.
  std::size_t default_prefix(std::size_t fallback) const;
  std::string generator_label(std::size_t index) const { return format(generator(index)); }

 private:
  [[noreturn]] void throw_mismatch(const Element& a) const;
};

}  // namespace schutz

#pragma once

#include "schutz/element.hpp"

#include <unordered_set>
#include <vector>

namespace schutz::detail {

// Insertion-ordered set: linear probing while small, hashed once it grows.
class ElementSet {
 public:
  bool insert(const Element& x) {
    if (hashed_.empty() && items_.size() < kSmall) {
      for (const auto& y : items_)
        if (y == x) return false;
      items_.push_back(x);
      if (items_.size() == kSmall) hashed_.insert(items_.begin(), items_.end());
      return true;
    }
    if (!hashed_.insert(x).second) return false;
    items_.push_back(x);
    return true;
  }
  bool contains(const Element& x) const {
    if (hashed_.empty()) {
      for (const auto& y : items_)
        if (y == x) return true;
      return false;
    }
    return hashed_.count(x) > 0;
  }
  void clear() {
    items_.clear();
    hashed_.clear();
  }
  std::size_t size() const { return items_.size(); }
  const std::vector<Element>& items() const { return items_; }

 private:
  static constexpr std::size_t kSmall = 24;
  std::vector<Element> items_;
  std::unordered_set<Element, ElementHash> hashed_;
};

}  // namespace schutz::detail

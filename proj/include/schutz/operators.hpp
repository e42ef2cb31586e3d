#pragma once

#include "schutz/fl.hpp"
#include "schutz/fragment.hpp"
#include "schutz/rational.hpp"

#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Sparse>
#include <json.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace schutz {

using RationalMatrix = Eigen::SparseMatrix<Rational>;
using Function = std::function<Rational(const Element&)>;

// Finite basis of ℓ²(S): one or more L-class fragments, or a bare element list.
class Window {
 public:
  Window(OraclePtr oracle, std::vector<Fragment> fragments);
  // Basis = vertices at depth ≤ basis_radius; distances are exact when 2·basis_radius ≤ radius.
  Window(OraclePtr oracle, std::vector<Fragment> fragments, int basis_radius);
  Window(OraclePtr oracle, std::vector<Element> elements);
  static Window full(OraclePtr finite);  // every L-class of a finite S, complete

  OraclePtr oracle;
  std::vector<Fragment> fragments;
  std::vector<Element> basis;
  std::size_t size() const { return basis.size(); }
  std::optional<std::size_t> find(const Element& x) const;
  std::size_t at(const Element& x) const;
  // Extended metric: infinite across L-classes; Censored when no fragment certifies it.
  Distance distance(std::size_t i, std::size_t j) const;

 private:
  std::unordered_map<Element, std::size_t, ElementHash> index_;
  void add(const Element& x);
};

// Matrix on a basis with the set of columns whose true image lies inside the basis.
struct FragmentOperator {
  RationalMatrix matrix;
  std::vector<bool> safe;
  std::string label;
  Eigen::Index size() const { return matrix.cols(); }
};

FragmentOperator rep_V(const Window& w, const Element& s);
FragmentOperator rep_diag(const Window& w, const Function& f);
FragmentOperator identity_operator(Eigen::Index n);
// Product with safety propagation: column c of AB is exact when c is safe for B
// and every row reached in B's column c is a safe column of A.
FragmentOperator operator*(const FragmentOperator& a, const FragmentOperator& b);
// Transpose with no column known exact, or with a caller-supplied safe set.
FragmentOperator transpose(const FragmentOperator& a);
FragmentOperator transpose(const FragmentOperator& a, std::vector<bool> safe);

struct IdentityCheck {
  std::string name;
  std::size_t columns_checked = 0;
  std::size_t columns_censored = 0;
  std::vector<std::string> mismatches;
  bool ok() const { return mismatches.empty() && columns_checked > 0; }
};

// Compares columns that are safe on both sides (and inside `mask` when given).
IdentityCheck compare_operators(const std::string& name, const FragmentOperator& a, const FragmentOperator& b,
                                const std::vector<bool>* mask = nullptr,
                                const std::function<std::string(Eigen::Index)>& column_name = {});

// max d(x, y) over nonzero T_{y,x}.
Distance propagation(const Window& w, const FragmentOperator& t);

struct Combo {
  struct Term {
    Element s;
    Function f;
  };
  std::vector<Term> terms;
};

// ‖(A − Σ f_i V_{s_i}) δ_x‖² computed exactly; A is given by its column at x.
Rational evaluate_gap(const Window& w, const std::map<std::size_t, Rational>& column, const Combo& combo,
                      const Element& x);

struct Separation {
  Rational value;  // squared norm
  bool holds() const { return value >= 1; }
};
// M_{x,y} against a combination; requires x*x ≠ y*y.
Separation matrix_unit_separation(const Window& w, const Element& x, const Element& y, const Combo& combo);

struct GapOperator {
  FragmentOperator T;      // T δ_{x_k} = δ_{y_k}
  Distance propagation;
  std::vector<std::size_t> x, y;  // witness basis indices per level
};
GapOperator non_fl_gap_operator(const Window& w, const std::vector<FLWitness>& witnesses);
// ‖(T − Σ f_i V_{s_i}) δ_{x_level}‖².
Rational gap_at_level(const Window& w, const GapOperator& g, std::size_t level, const Combo& combo);

struct CrossedProductReport {
  std::size_t basis = 0;        // tensor basis size
  std::vector<IdentityCheck> checks;
  bool ok() const;
};

// Identities of W, π and 1⊗V on the tensor window; covariance is checked on the
// full basis and on the initial space of W separately.
CrossedProductReport crossed_product_check(const Window& w, const std::vector<Element>& s_list,
                                           const std::vector<Function>& f_list);

nlohmann::json operator_to_json(const Window& w, const FragmentOperator& t);

}  // namespace schutz

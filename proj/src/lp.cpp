#include "schutz/lp.hpp"

#include "schutz/error.hpp"

#include <cmath>
#include <limits>

namespace schutz {

namespace {

using Tableau = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class Simplex {
 public:
  Simplex(Tableau t, std::vector<std::size_t> basis, const LPOptions& opt)
      : T(std::move(t)), basis(std::move(basis)), opt_(opt) {
    m = static_cast<Eigen::Index>(this->basis.size());
    rhs = T.cols() - 1;
  }

  Tableau T;  // rows 0..m-1 constraints, row m reduced costs; last column rhs
  std::vector<std::size_t> basis;
  Eigen::Index m = 0, rhs = 0;
  std::size_t iterations = 0, bland = 0;

  void pivot(Eigen::Index r, Eigen::Index e) {
    T.row(r) /= T(r, e);
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i == r) continue;
      double f = T(i, e);
      if (f != 0) T.row(i) -= f * T.row(r);
    }
    basis[static_cast<std::size_t>(r)] = static_cast<std::size_t>(e);
    ++iterations;
  }

  // Runs to optimality over columns < allowed; false when unbounded.
  LPResult::Status run(Eigen::Index allowed) {
    const double tol = opt_.tolerance;
    double best = std::numeric_limits<double>::infinity();
    std::size_t stalled = 0;
    while (true) {
      if (iterations >= opt_.max_iterations) return LPResult::Status::IterationLimit;
      bool use_bland = stalled >= opt_.degenerate_switch;
      Eigen::Index enter = -1;
      double most = -tol;
      for (Eigen::Index j = 0; j < allowed; ++j) {
        double r = T(m, j);
        if (r < most) {
          enter = j;
          if (use_bland) break;
          most = r;
        }
      }
      if (enter < 0) return LPResult::Status::Optimal;
      Eigen::Index leave = -1;
      double ratio = 0;
      for (Eigen::Index i = 0; i < m; ++i) {
        double a = T(i, enter);
        if (a <= tol) continue;
        double q = T(i, rhs) / a;
        if (leave < 0 || q < ratio - tol || (q <= ratio + tol && basis[i] < basis[leave])) {
          leave = i;
          ratio = q;
        }
      }
      if (leave < 0) return LPResult::Status::Unbounded;
      if (use_bland) ++bland;
      pivot(leave, enter);
      // The tableau stores -objective in the rhs corner.
      double value = -T(m, rhs);
      if (value < best - tol) {
        best = value;
        stalled = 0;
      } else {
        ++stalled;
      }
    }
  }

 private:
  LPOptions opt_;
};

}  // namespace

LPResult solve_lp(const LinearProgram& lp, const LPOptions& opt) {
  const std::size_t n = lp.variables;
  if (lp.objective.size() != n) throw InvalidInput("objective size differs from the variable count");
  const std::size_t m = lp.rows.size();
  std::size_t slacks = 0, artificials = 0;
  std::vector<int> sign(m, 1);
  for (std::size_t i = 0; i < m; ++i) {
    auto sense = lp.rows[i].sense;
    if (lp.rows[i].rhs < 0) {
      sign[i] = -1;
      if (sense == LinearProgram::Sense::Le) sense = LinearProgram::Sense::Ge;
      else if (sense == LinearProgram::Sense::Ge) sense = LinearProgram::Sense::Le;
    }
    if (sense != LinearProgram::Sense::Eq) ++slacks;
    if (sense != LinearProgram::Sense::Le) ++artificials;
  }
  const std::size_t cols = n + slacks + artificials;
  if (cols > opt.max_variables)
    throw BudgetExhausted("LP has " + std::to_string(cols) + " columns, cap " + std::to_string(opt.max_variables));

  Tableau T = Tableau::Zero(static_cast<Eigen::Index>(m + 1), static_cast<Eigen::Index>(cols + 1));
  std::vector<std::size_t> basis(m);
  std::size_t slack = n, art = n + slacks;
  const auto rhs = static_cast<Eigen::Index>(cols);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = lp.rows[i];
    const auto r = static_cast<Eigen::Index>(i);
    for (auto [j, a] : row.terms) {
      if (j >= n) throw InvalidInput("LP row references an unknown variable");
      T(r, static_cast<Eigen::Index>(j)) += sign[i] * a;
    }
    T(r, rhs) = sign[i] * row.rhs;
    auto sense = row.sense;
    if (sign[i] < 0 && sense != LinearProgram::Sense::Eq)
      sense = sense == LinearProgram::Sense::Le ? LinearProgram::Sense::Ge : LinearProgram::Sense::Le;
    if (sense == LinearProgram::Sense::Le) {
      T(r, static_cast<Eigen::Index>(slack)) = 1;
      basis[i] = slack++;
    } else {
      if (sense == LinearProgram::Sense::Ge) T(r, static_cast<Eigen::Index>(slack++)) = -1;
      T(r, static_cast<Eigen::Index>(art)) = 1;
      basis[i] = art++;
    }
  }
  const auto M = static_cast<Eigen::Index>(m);
  // Phase I: minimize the sum of artificials.
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] >= n + slacks) T.row(M) -= T.row(static_cast<Eigen::Index>(i));
  for (std::size_t a = n + slacks; a < cols; ++a) T(M, static_cast<Eigen::Index>(a)) = 0;

  Simplex sx(std::move(T), std::move(basis), opt);
  LPResult res;
  auto status = sx.run(static_cast<Eigen::Index>(cols));
  if (status == LPResult::Status::IterationLimit) {
    res.status = status;
    res.iterations = sx.iterations;
    return res;
  }
  if (-sx.T(M, rhs) > std::sqrt(opt.tolerance)) {
    res.status = LPResult::Status::Infeasible;
    res.iterations = sx.iterations;
    return res;
  }
  // Drive zero-level artificials out of the basis where possible.
  const auto first_art = static_cast<Eigen::Index>(n + slacks);
  for (Eigen::Index i = 0; i < M; ++i) {
    if (static_cast<Eigen::Index>(sx.basis[i]) < first_art) continue;
    for (Eigen::Index j = 0; j < first_art; ++j)
      if (std::abs(sx.T(i, j)) > opt.tolerance) {
        sx.pivot(i, j);
        break;
      }
  }
  // Phase II reduced costs.
  sx.T.row(M).setZero();
  for (std::size_t j = 0; j < n; ++j) sx.T(M, static_cast<Eigen::Index>(j)) = lp.objective[j];
  for (Eigen::Index i = 0; i < M; ++i) {
    auto b = static_cast<Eigen::Index>(sx.basis[i]);
    double c = sx.T(M, b);
    if (c != 0) sx.T.row(M) -= c * sx.T.row(i);
  }
  status = sx.run(first_art);
  res.status = status;
  res.iterations = sx.iterations;
  res.bland_pivots = sx.bland;
  if (status != LPResult::Status::Optimal) return res;
  res.x.assign(n, 0.0);
  for (Eigen::Index i = 0; i < M; ++i)
    if (sx.basis[i] < n) res.x[sx.basis[i]] = sx.T(i, rhs);
  res.objective = 0;
  for (std::size_t j = 0; j < n; ++j) res.objective += lp.objective[j] * res.x[j];
  return res;
}

}  // namespace schutz

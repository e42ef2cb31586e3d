#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace schutz {

// minimize c·x subject to rows (≤, =, ≥) and x ≥ 0.
struct LinearProgram {
  enum class Sense { Le, Eq, Ge };
  struct Row {
    std::vector<std::pair<std::size_t, double>> terms;
    Sense sense = Sense::Le;
    double rhs = 0;
  };
  std::size_t variables = 0;
  std::vector<double> objective;  // size = variables
  std::vector<Row> rows;
};

struct LPOptions {
  double tolerance = 1e-9;
  std::size_t max_variables = 20000;      // structural plus slack plus artificial columns
  std::size_t max_iterations = 200000;
  std::size_t degenerate_switch = 50;     // Bland's rule after this many non-improving pivots
};

struct LPResult {
  enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };
  Status status = Status::IterationLimit;
  std::vector<double> x;
  double objective = 0;
  std::size_t iterations = 0;
  std::size_t bland_pivots = 0;
};

// Two-phase dense tableau simplex; deterministic pivoting (Dantzig pricing,
// Bland's rule on degenerate stretches, lowest-index ties).
LPResult solve_lp(const LinearProgram& lp, const LPOptions& options = {});

}  // namespace schutz

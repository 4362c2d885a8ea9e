#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "ifd/error.hpp"

namespace ifd {

/// min c^T x subject to A x = b, x >= 0, with A stored by sparse columns.
struct LinearProgram {
  using Column = std::vector<std::pair<std::size_t, double>>;

  std::size_t rows = 0;
  std::vector<Column> columns;
  std::vector<double> cost;
  std::vector<double> rhs;

  std::size_t cols() const noexcept { return columns.size(); }
  std::size_t add_column(Column col, double c);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Optimal;
  double objective = 0.0;
  std::vector<double> x;
  /// Basic variable for each row at termination.
  std::vector<std::size_t> basis;
  std::size_t iterations = 0;
  bool used_phase_one = false;
};

struct SimplexOptions {
  /// 0 picks 50 * (rows + cols) + 1000.
  std::size_t max_iterations = 0;
  std::size_t refactor_every = 50;
  double tol = 1e-9;
};

/// Thrown when the iteration cap is hit; carries the last pivots.
class SolverError : public DomainError {
 public:
  SolverError(const std::string& what, std::vector<std::string> trace)
      : DomainError(what), trace_(std::move(trace)) {}
  const std::vector<std::string>& trace() const noexcept { return trace_; }

 private:
  std::vector<std::string> trace_;
};

/// Dense revised simplex with Bland's rule. If `initial_basis` is given and
/// primal feasible it is used directly; otherwise a phase-one problem with
/// artificial variables finds a feasible basis.
LpSolution solve_simplex(const LinearProgram& lp,
                         const std::optional<std::vector<std::size_t>>& initial_basis = {},
                         const SimplexOptions& options = {});

/// Basic solution of `basis` computed exactly in rational arithmetic (every
/// double entry of A and b is converted exactly). Returns nullopt when the
/// basis matrix is singular.
std::optional<std::vector<mpq_class>> basic_solution_exact(const LinearProgram& lp,
                                                           const std::vector<std::size_t>& basis);

}  // namespace ifd

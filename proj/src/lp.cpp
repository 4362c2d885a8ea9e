#include "ifd/lp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include <Eigen/Dense>

namespace ifd {

std::size_t LinearProgram::add_column(Column col, double c) {
  columns.push_back(std::move(col));
  cost.push_back(c);
  return columns.size() - 1;
}

namespace {

class RevisedSimplex {
 public:
  RevisedSimplex(const LinearProgram& lp, const std::vector<double>& cost,
                 std::vector<std::size_t> basis, const std::vector<bool>& may_enter,
                 const SimplexOptions& opt, std::size_t cap)
      : lp_(lp), cost_(cost), basis_(std::move(basis)), may_enter_(may_enter), opt_(opt),
        cap_(cap) {
    in_basis_.assign(lp_.cols(), false);
    for (auto j : basis_) in_basis_[j] = true;
    refactor();
  }

  bool feasible() const {
    for (Eigen::Index i = 0; i < xb_.size(); ++i)
      if (xb_(i) < -opt_.tol) return false;
    return true;
  }

  // Returns false on unboundedness.
  bool run(std::size_t& iterations) {
    const std::size_t m = lp_.rows;
    Eigen::VectorXd y(m);
    Eigen::VectorXd alpha(m);
    for (;;) {
      if (iterations >= cap_) {
        std::vector<std::string> t(trace_.begin(), trace_.end());
        throw SolverError("simplex iteration cap of " + std::to_string(cap_) +
                              " reached (possible cycling or numerical breakdown)",
                          std::move(t));
      }
      if (since_refactor_ >= opt_.refactor_every) refactor();

      Eigen::VectorXd cb(m);
      for (std::size_t i = 0; i < m; ++i) cb(i) = cost_[basis_[i]];
      y = binv_.transpose() * cb;

      std::size_t enter = lp_.cols();
      for (std::size_t j = 0; j < lp_.cols(); ++j) {
        if (in_basis_[j] || !may_enter_[j]) continue;
        double d = cost_[j];
        for (const auto& [r, a] : lp_.columns[j]) d -= y(r) * a;
        if (d < -opt_.tol) {
          enter = j;
          break;
        }
      }
      if (enter == lp_.cols()) return true;

      alpha.setZero();
      for (const auto& [r, a] : lp_.columns[enter]) alpha += a * binv_.col(r);

      std::size_t leave = m;
      double best = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        if (alpha(i) <= opt_.tol) continue;
        double ratio = std::max(0.0, xb_(i)) / alpha(i);
        if (leave == m || ratio < best - 1e-12) {
          best = ratio;
          leave = i;
        } else if (ratio <= best + 1e-12 && basis_[i] < basis_[leave]) {
          leave = i;
        }
      }
      if (leave == m) return false;

      pivot(leave, enter, alpha);
      ++iterations;
      std::ostringstream os;
      os << "iter " << iterations << ": enter " << enter << ", leave " << basis_[leave]
         << " (row " << leave << "), step " << best;
      trace_.push_back(os.str());
      if (trace_.size() > 32) trace_.pop_front();
      basis_[leave] = enter;
    }
  }

  // Degenerate pivot of row p onto column j; used to expel artificials.
  bool try_pivot_row(std::size_t p, std::size_t j) {
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(lp_.rows);
    for (const auto& [r, a] : lp_.columns[j]) alpha += a * binv_.col(r);
    if (std::abs(alpha(p)) <= 1e-7) return false;
    pivot(p, j, alpha);
    basis_[p] = j;
    return true;
  }

  double row_entry(std::size_t p, std::size_t j) const {
    double s = 0.0;
    for (const auto& [r, a] : lp_.columns[j]) s += binv_(p, r) * a;
    return s;
  }

  const std::vector<std::size_t>& basis() const { return basis_; }
  const Eigen::VectorXd& xb() const { return xb_; }

  void refactor() {
    const std::size_t m = lp_.rows;
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (const auto& [r, a] : lp_.columns[basis_[i]]) b(r, i) = a;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);
    binv_ = lu.inverse();
    Eigen::VectorXd rhs(m);
    for (std::size_t i = 0; i < m; ++i) rhs(i) = lp_.rhs[i];
    xb_ = binv_ * rhs;
    since_refactor_ = 0;
  }

 private:
  void pivot(std::size_t p, std::size_t enter, const Eigen::VectorXd& alpha) {
    const double piv = alpha(p);
    binv_.row(p) /= piv;
    xb_(p) /= piv;
    for (Eigen::Index i = 0; i < alpha.size(); ++i) {
      if (static_cast<std::size_t>(i) == p || alpha(i) == 0.0) continue;
      binv_.row(i) -= alpha(i) * binv_.row(p);
      xb_(i) -= alpha(i) * xb_(p);
    }
    in_basis_[basis_[p]] = false;
    in_basis_[enter] = true;
    ++since_refactor_;
  }

  const LinearProgram& lp_;
  const std::vector<double>& cost_;
  std::vector<std::size_t> basis_;
  const std::vector<bool>& may_enter_;
  const SimplexOptions& opt_;
  std::size_t cap_;
  std::vector<bool> in_basis_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
  std::size_t since_refactor_ = 0;
  std::deque<std::string> trace_;
};

LpSolution finish(const LinearProgram& lp, const RevisedSimplex& s, std::size_t n_real) {
  LpSolution sol;
  sol.x.assign(n_real, 0.0);
  sol.basis = s.basis();
  for (std::size_t i = 0; i < lp.rows; ++i) {
    if (sol.basis[i] < n_real) sol.x[sol.basis[i]] = std::max(0.0, s.xb()(i));
  }
  for (std::size_t j = 0; j < n_real; ++j) sol.objective += lp.cost[j] * sol.x[j];
  return sol;
}

}  // namespace

LpSolution solve_simplex(const LinearProgram& lp,
                         const std::optional<std::vector<std::size_t>>& initial_basis,
                         const SimplexOptions& options) {
  if (lp.cost.size() != lp.cols() || lp.rhs.size() != lp.rows) {
    throw DomainError("linear program has inconsistent dimensions");
  }
  const std::size_t n = lp.cols();
  const std::size_t m = lp.rows;
  const std::size_t cap =
      options.max_iterations ? options.max_iterations : 50 * (m + n) + 1000;
  std::size_t iterations = 0;

  if (m == 0) {
    LpSolution sol;
    sol.x.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (lp.cost[j] < 0) {
        sol.status = LpStatus::Unbounded;
        return sol;
      }
    }
    return sol;
  }

  if (initial_basis && initial_basis->size() == m) {
    std::vector<bool> all(n, true);
    RevisedSimplex s(lp, lp.cost, *initial_basis, all, options, cap);
    if (s.feasible()) {
      bool bounded = s.run(iterations);
      LpSolution sol = finish(lp, s, n);
      sol.iterations = iterations;
      if (!bounded) sol.status = LpStatus::Unbounded;
      return sol;
    }
  }

  // Phase one on a copy with sign-normalized rows and one artificial per row.
  LinearProgram aux = lp;
  std::vector<double> flip(m, 1.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (aux.rhs[i] < 0) {
      aux.rhs[i] = -aux.rhs[i];
      flip[i] = -1.0;
    }
  }
  for (auto& col : aux.columns)
    for (auto& [r, a] : col) a *= flip[r];
  std::vector<double> phase1(n + m, 0.0);
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    aux.add_column({{i, 1.0}}, 0.0);
    phase1[n + i] = 1.0;
    basis[i] = n + i;
  }
  std::vector<bool> may_enter(n + m, true);
  RevisedSimplex s1(aux, phase1, basis, may_enter, options, cap);
  s1.run(iterations);
  double infeas = 0.0;
  double scale = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    scale = std::max(scale, std::abs(aux.rhs[i]));
    if (s1.basis()[i] >= n) infeas += std::max(0.0, s1.xb()(i));
  }
  if (infeas > options.tol * scale * static_cast<double>(m)) {
    LpSolution sol;
    sol.status = LpStatus::Infeasible;
    sol.iterations = iterations;
    sol.used_phase_one = true;
    return sol;
  }
  for (std::size_t p = 0; p < m; ++p) {
    if (s1.basis()[p] < n) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::find(s1.basis().begin(), s1.basis().end(), j) != s1.basis().end()) continue;
      if (std::abs(s1.row_entry(p, j)) > 1e-7 && s1.try_pivot_row(p, j)) break;
    }
  }
  // Artificials left in the basis sit on redundant rows at level zero.
  std::fill(may_enter.begin() + static_cast<std::ptrdiff_t>(n), may_enter.end(), false);
  std::vector<double> phase2(n + m, 0.0);
  std::copy(aux.cost.begin(), aux.cost.begin() + static_cast<std::ptrdiff_t>(n), phase2.begin());
  RevisedSimplex s2(aux, phase2, s1.basis(), may_enter, options, cap);
  bool bounded = s2.run(iterations);
  LpSolution sol = finish(aux, s2, n);
  sol.iterations = iterations;
  sol.used_phase_one = true;
  if (!bounded) sol.status = LpStatus::Unbounded;
  return sol;
}

std::optional<std::vector<mpq_class>> basic_solution_exact(const LinearProgram& lp,
                                                           const std::vector<std::size_t>& basis) {
  const std::size_t m = lp.rows;
  if (basis.size() != m) return std::nullopt;
  std::vector<std::vector<mpq_class>> a(m, std::vector<mpq_class>(m + 1, 0));
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] >= lp.cols()) return std::nullopt;
    for (const auto& [r, v] : lp.columns[basis[i]]) a[r][i] = mpq_class(v);
  }
  for (std::size_t r = 0; r < m; ++r) a[r][m] = mpq_class(lp.rhs[r]);
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t p = c;
    while (p < m && a[p][c] == 0) ++p;
    if (p == m) return std::nullopt;
    std::swap(a[p], a[c]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == c || a[r][c] == 0) continue;
      mpq_class f = a[r][c] / a[c][c];
      for (std::size_t k = c; k <= m; ++k) a[r][k] -= f * a[c][k];
    }
  }
  std::vector<mpq_class> x(lp.cols(), 0);
  for (std::size_t i = 0; i < m; ++i) x[basis[i]] = a[i][m] / a[i][i];
  return x;
}

}  // namespace ifd

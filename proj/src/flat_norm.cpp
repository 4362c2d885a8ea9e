#include "ifd/flat_norm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ifd/error.hpp"

namespace ifd {

FlatProblem make_flat_problem(const IntegralChain& t) {
  const auto& c = t.complex();
  const int m = t.dim();
  if (!c.has_dim(m + 1)) {
    throw DomainError("complex has no dimension " + std::to_string(m + 1) + " slot for fillings");
  }
  FlatProblem p{t.complex_ptr(), t, {}, {}};
  for (std::size_t i = 0; i < c.count(m); ++i) p.v.push_back(c.volume(m, i));
  for (std::size_t j = 0; j < c.count(m + 1); ++j) p.w.push_back(c.volume(m + 1, j));
  return p;
}

std::vector<std::vector<int>> incidence_matrix(const FlatProblem& p) {
  std::vector<std::vector<int>> a(p.rows(), std::vector<int>(p.cols(), 0));
  for (std::size_t j = 0; j < p.cols(); ++j)
    for (const auto& f : p.complex->faces(p.m() + 1, j)) a[f.index][j] += f.sign;
  return a;
}

std::string to_string(FlatMethod m) {
  switch (m) {
    case FlatMethod::Exact:
      return "exact";
    case FlatMethod::Lp:
      return "lp";
    case FlatMethod::LpIntegral:
      return "lp-integral";
  }
  return "?";
}

namespace {

double decomposition_value(const FlatProblem& p, const std::vector<double>& u,
                           const std::vector<double>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += p.v[i] * std::abs(u[i]);
  for (std::size_t j = 0; j < v.size(); ++j) s += p.w[j] * std::abs(v[j]);
  return s;
}

bool integral_identity_holds(const FlatProblem& p, const IntegralChain& u, const IntegralChain& v) {
  if (p.cols() == 0) return u == p.target;
  return u + boundary(v) == p.target;
}

struct ExactSearch {
  const FlatProblem& p;
  std::int64_t bound;
  // Column j touches rows rows_of[j] with signs.
  std::vector<std::vector<FaceRef>> cols;
  // remaining[k][i]: how many of the columns k.. touch row i.
  std::vector<std::vector<int>> remaining;
  std::vector<std::int64_t> residual;
  std::vector<std::int64_t> current;
  std::vector<std::int64_t> best_v;
  double best = std::numeric_limits<double>::infinity();

  double lower_bound(std::size_t k, double spent) const {
    double lb = spent;
    for (std::size_t i = 0; i < residual.size(); ++i) {
      std::int64_t slack = bound * remaining[k][i];
      std::int64_t r = residual[i] < 0 ? -residual[i] : residual[i];
      if (r > slack) lb += p.v[i] * static_cast<double>(r - slack);
    }
    return lb;
  }

  void dfs(std::size_t k, double spent) {
    if (lower_bound(k, spent) >= best - 1e-12) return;
    if (k == cols.size()) {
      double total = spent;
      for (std::size_t i = 0; i < residual.size(); ++i)
        total += p.v[i] * static_cast<double>(std::llabs(residual[i]));
      if (total < best - 1e-12) {
        best = total;
        best_v = current;
      }
      return;
    }
    // Try 0 first, then +-1, +-2, ... so small fillings are found early.
    for (std::int64_t mag = 0; mag <= bound; ++mag) {
      for (int sgn : {1, -1}) {
        if (mag == 0 && sgn < 0) continue;
        std::int64_t c = sgn * mag;
        for (const auto& f : cols[k]) residual[f.index] -= f.sign * c;
        current[k] = c;
        dfs(k + 1, spent + p.w[k] * static_cast<double>(mag));
        for (const auto& f : cols[k]) residual[f.index] += f.sign * c;
      }
    }
    current[k] = 0;
  }
};

}  // namespace

FlatDecomposition flat_norm_exact(const FlatProblem& p, std::optional<std::int64_t> coeff_bound,
                                  std::size_t max_simplices) {
  if (p.cols() > max_simplices) {
    throw SizeError("exact flat norm limited to " + std::to_string(max_simplices) + " (m+1)-simplices, instance has " +
                    std::to_string(p.cols()));
  }
  const std::int64_t bound = coeff_bound.value_or(p.target.max_abs());
  if (bound < 0) throw DomainError("coefficient bound must be nonnegative");

  ExactSearch s{p, bound, {}, {}, {}, {}, {}};
  s.cols.resize(p.cols());
  for (std::size_t j = 0; j < p.cols(); ++j) s.cols[j] = p.complex->faces(p.m() + 1, j);
  s.remaining.assign(p.cols() + 1, std::vector<int>(p.rows(), 0));
  for (std::size_t k = p.cols(); k-- > 0;) {
    s.remaining[k] = s.remaining[k + 1];
    for (const auto& f : s.cols[k]) ++s.remaining[k][f.index];
  }
  s.residual = p.target.coefficients();
  s.current.assign(p.cols(), 0);
  s.best_v = s.current;
  s.best = mass(p.target);
  s.dfs(0, 0.0);

  FlatDecomposition d;
  d.method = FlatMethod::Exact;
  IntegralChain v(p.complex, p.m() + 1, s.best_v);
  IntegralChain u = p.cols() ? p.target - boundary(v) : p.target;
  d.value = mass(u) + mass(v);
  d.certified = integral_identity_holds(p, u, v);
  for (auto c : u.coefficients()) d.u_values.push_back(static_cast<double>(c));
  for (auto c : v.coefficients()) d.v_values.push_back(static_cast<double>(c));
  d.U = std::move(u);
  d.V = std::move(v);
  return d;
}

bool ghouila_houri_unimodular(const std::vector<std::vector<int>>& a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  for (const auto& r : a)
    for (int x : r)
      if (x < -1 || x > 1) return false;
  if (cols > 30) throw SizeError("Ghouila-Houri test limited to 30 columns");
  std::vector<int> sum(rows);
  for (std::uint64_t subset = 1; subset < (std::uint64_t{1} << cols); ++subset) {
    std::vector<std::size_t> members;
    for (std::size_t j = 0; j < cols; ++j)
      if (subset >> j & 1) members.push_back(j);
    bool found = false;
    // The first member's sign can be fixed: negating a signing keeps it valid.
    const std::uint64_t signings = std::uint64_t{1} << (members.size() - 1);
    for (std::uint64_t sg = 0; sg < signings && !found; ++sg) {
      std::fill(sum.begin(), sum.end(), 0);
      for (std::size_t t = 0; t < members.size(); ++t) {
        int s = (t > 0 && (sg >> (t - 1) & 1)) ? -1 : 1;
        for (std::size_t r = 0; r < rows; ++r) sum[r] += s * a[r][members[t]];
      }
      found = std::all_of(sum.begin(), sum.end(), [](int x) { return x >= -1 && x <= 1; });
    }
    if (!found) return false;
  }
  return true;
}

FlatDecomposition flat_norm_lp(const FlatProblem& p, const SimplexOptions& options) {
  const std::size_t nr = p.rows(), nc = p.cols();
  LinearProgram lp;
  lp.rows = nr;
  lp.rhs.resize(nr);
  for (std::size_t i = 0; i < nr; ++i) lp.rhs[i] = static_cast<double>(p.target[i]);
  for (std::size_t i = 0; i < nr; ++i) lp.add_column({{i, 1.0}}, p.v[i]);
  for (std::size_t i = 0; i < nr; ++i) lp.add_column({{i, -1.0}}, p.v[i]);
  std::vector<LinearProgram::Column> bcols(nc);
  for (std::size_t j = 0; j < nc; ++j)
    for (const auto& f : p.complex->faces(p.m() + 1, j))
      bcols[j].emplace_back(f.index, static_cast<double>(f.sign));
  for (std::size_t j = 0; j < nc; ++j) lp.add_column(bcols[j], p.w[j]);
  for (std::size_t j = 0; j < nc; ++j) {
    auto neg = bcols[j];
    for (auto& e : neg) e.second = -e.second;
    lp.add_column(std::move(neg), p.w[j]);
  }
  std::vector<std::size_t> basis(nr);
  for (std::size_t i = 0; i < nr; ++i) basis[i] = p.target[i] >= 0 ? i : nr + i;

  LpSolution sol = solve_simplex(lp, basis, options);
  if (sol.status != LpStatus::Optimal) {
    throw DomainError("flat norm LP did not reach an optimum (status " +
                      std::string(sol.status == LpStatus::Unbounded ? "unbounded" : "infeasible") +
                      ")");
  }
  FlatDecomposition d;
  d.iterations = sol.iterations;
  d.u_values.resize(nr);
  d.v_values.resize(nc);
  for (std::size_t i = 0; i < nr; ++i) d.u_values[i] = sol.x[i] - sol.x[nr + i];
  for (std::size_t j = 0; j < nc; ++j) d.v_values[j] = sol.x[2 * nr + j] - sol.x[2 * nr + nc + j];
  d.value = decomposition_value(p, d.u_values, d.v_values);

  bool integral = true;
  for (double x : sol.x) integral = integral && std::abs(x - std::round(x)) <= 1e-9;
  if (integral) {
    std::vector<std::int64_t> u(nr), v(nc);
    for (std::size_t i = 0; i < nr; ++i) u[i] = std::llround(d.u_values[i]);
    for (std::size_t j = 0; j < nc; ++j) v[j] = std::llround(d.v_values[j]);
    IntegralChain uc(p.complex, p.m(), std::move(u));
    IntegralChain vc(p.complex, p.m() + 1, std::move(v));
    d.certified = integral_identity_holds(p, uc, vc);
    if (d.certified) {
      d.method = FlatMethod::LpIntegral;
      d.value = mass(uc) + mass(vc);
      for (std::size_t i = 0; i < nr; ++i) d.u_values[i] = static_cast<double>(uc[i]);
      for (std::size_t j = 0; j < nc; ++j) d.v_values[j] = static_cast<double>(vc[j]);
      d.U = std::move(uc);
      d.V = std::move(vc);
    }
  }
  if (!d.U) {
    d.method = FlatMethod::Lp;
    auto exact = basic_solution_exact(lp, sol.basis);
    if (exact) {
      bool ok = true;
      for (const auto& q : *exact) ok = ok && q >= 0;
      std::vector<mpq_class> lhs(nr, 0);
      for (std::size_t j = 0; j < lp.cols(); ++j) {
        if ((*exact)[j] == 0) continue;
        for (const auto& [r, a] : lp.columns[j]) lhs[r] += mpq_class(a) * (*exact)[j];
      }
      for (std::size_t i = 0; i < nr; ++i) ok = ok && lhs[i] == mpq_class(lp.rhs[i]);
      d.certified = ok;
    }
  }
  TotalUnimodularity tu;
  if (nc <= kGhouilaHouriLimit) {
    tu.test = "ghouila-houri";
    tu.unimodular = ghouila_houri_unimodular(incidence_matrix(p));
  } else {
    tu.test = "vertex-integrality";
    tu.unimodular = d.method == FlatMethod::LpIntegral;
  }
  d.tu = tu;
  return d;
}

FlatDecomposition flat_distance(const IntegralChain& t1, const IntegralChain& t2,
                                const FlatDistanceOptions& options) {
  if (t1.dim() != t2.dim()) {
    throw DomainError("flat distance needs chains of equal dimension (" + std::to_string(t1.dim()) +
                      " vs " + std::to_string(t2.dim()) + ")");
  }
  if (t1.complex_ptr() != t2.complex_ptr()) throw DomainError("flat distance needs a common complex");
  FlatProblem p = make_flat_problem(t1 - t2);
  if (options.method == FlatMethod::Exact) {
    return flat_norm_exact(p, options.coeff_bound, options.max_simplices);
  }
  return flat_norm_lp(p);
}

SemicontinuityReport semicontinuity_harness(const std::vector<IntegralChain>& sequence,
                                            const IntegralChain& limit,
                                            const FlatDistanceOptions& options,
                                            double distance_tol, double mass_tol) {
  SemicontinuityReport r;
  r.limit_mass = mass(limit);
  for (const auto& t : sequence) {
    r.distances.push_back(flat_distance(t, limit, options).value);
    r.masses.push_back(mass(t));
  }
  r.tail_start = r.distances.size();
  while (r.tail_start > 0 && r.distances[r.tail_start - 1] <= distance_tol) --r.tail_start;
  r.converged = r.tail_start < r.distances.size();
  r.tail_min_mass = std::numeric_limits<double>::infinity();
  for (std::size_t j = r.tail_start; j < r.masses.size(); ++j)
    r.tail_min_mass = std::min(r.tail_min_mass, r.masses[j]);
  r.holds = !r.converged || r.tail_min_mass >= r.limit_mass - mass_tol;
  return r;
}

nlohmann::json to_json(const FlatDecomposition& d) {
  nlohmann::json j = {{"value", d.value},
                      {"method", to_string(d.method)},
                      {"certified", d.certified}};
  auto sparse = [](const std::vector<double>& x) {
    nlohmann::json o = nlohmann::json::object();
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0.0) continue;
      double r = std::round(x[i]);
      if (r == x[i] && std::abs(r) < 9e15) {
        o[std::to_string(i)] = static_cast<std::int64_t>(r);
      } else {
        o[std::to_string(i)] = x[i];
      }
    }
    return o;
  };
  j["U"] = sparse(d.u_values);
  j["V"] = sparse(d.v_values);
  if (d.tu) j["total_unimodularity"] = {{"unimodular", d.tu->unimodular}, {"test", d.tu->test}};
  return j;
}

}  // namespace ifd

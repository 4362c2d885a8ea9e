#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ifd/current.hpp"
#include "ifd/lp.hpp"

namespace ifd {

/// min M(U) + M(V) subject to T = U + boundary(V) on one complex.
struct FlatProblem {
  ComplexPtr complex;
  IntegralChain target;
  /// Masses of the m-simplices and (m+1)-simplices.
  std::vector<double> v;
  std::vector<double> w;

  int m() const noexcept { return target.dim(); }
  std::size_t rows() const noexcept { return v.size(); }
  std::size_t cols() const noexcept { return w.size(); }
};

FlatProblem make_flat_problem(const IntegralChain& t);

/// Dense signed incidence matrix of the boundary map from (m+1)- to m-chains.
std::vector<std::vector<int>> incidence_matrix(const FlatProblem& p);

enum class FlatMethod { Exact, Lp, LpIntegral };
std::string to_string(FlatMethod m);

struct TotalUnimodularity {
  bool unimodular = false;
  /// "ghouila-houri" (column-signing test) or "vertex-integrality".
  std::string test;
};

struct FlatDecomposition {
  double value = 0.0;
  FlatMethod method = FlatMethod::Exact;
  /// T = U + boundary(V) checked in integer or rational arithmetic.
  bool certified = false;
  /// Present whenever the decomposition is integral.
  std::optional<IntegralChain> U;
  std::optional<IntegralChain> V;
  std::vector<double> u_values;
  std::vector<double> v_values;
  std::optional<TotalUnimodularity> tu;
  std::size_t iterations = 0;
};

inline constexpr std::size_t kExactMaxSimplices = 12;

/// Global optimum over integer V with |V| <= coeff_bound (default max|theta_T|).
FlatDecomposition flat_norm_exact(const FlatProblem& p, std::optional<std::int64_t> coeff_bound = {},
                                  std::size_t max_simplices = kExactMaxSimplices);

/// LP relaxation with absolute values split into nonnegative pairs.
FlatDecomposition flat_norm_lp(const FlatProblem& p, const SimplexOptions& options = {});

/// Column count up to which the Ghouila-Houri test is run exhaustively.
inline constexpr std::size_t kGhouilaHouriLimit = 12;

/// Ghouila-Houri criterion: every column subset admits a signing whose row
/// sums lie in {-1,0,1}. Exponential; intended for small matrices.
bool ghouila_houri_unimodular(const std::vector<std::vector<int>>& a);

struct FlatDistanceOptions {
  FlatMethod method = FlatMethod::Lp;
  std::optional<std::int64_t> coeff_bound;
  std::size_t max_simplices = kExactMaxSimplices;
};

FlatDecomposition flat_distance(const IntegralChain& t1, const IntegralChain& t2,
                                const FlatDistanceOptions& options = {});

struct SemicontinuityReport {
  std::vector<double> distances;
  std::vector<double> masses;
  double limit_mass = 0.0;
  /// First index from which every distance is <= distance_tol (size() if none).
  std::size_t tail_start = 0;
  double tail_min_mass = 0.0;
  bool converged = false;
  /// Every mass on the converged tail is >= limit mass - mass_tol.
  bool holds = true;
};

SemicontinuityReport semicontinuity_harness(const std::vector<IntegralChain>& sequence,
                                            const IntegralChain& limit,
                                            const FlatDistanceOptions& options,
                                            double distance_tol, double mass_tol = 1e-9);

nlohmann::json to_json(const FlatDecomposition& d);

}  // namespace ifd

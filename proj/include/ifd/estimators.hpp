#pragma once

#include <utility>
#include <vector>

#include "ifd/bound_report.hpp"
#include "ifd/current.hpp"
#include "ifd/flat_norm.hpp"
#include "ifd/metric_space.hpp"

namespace ifd {

/// d_F(M1, M2) <= Vol(M1) + Vol(M2). With vol2 = 0 this is d_F(M, 0) <= M(M).
BoundReport trivial_bound(double vol1, double vol2);

/// k_{lambda,m} = (m+1)/2 * lambda^(m-1) * (lambda - 1).
double k_constant(double lambda, int m);

/// d_F(T, phi# T) <= k_{lambda,m} max{diam spt T, diam phi(spt T)} N(T) for a
/// lambda-bi-Lipschitz phi; N(T) is the total mass M(T) + M(boundary T).
BoundReport bilipschitz_bound(double total_mass, int m, double lambda, double diam_source,
                              double diam_image);
/// Same bound with N(T) and m taken from the chain.
BoundReport bilipschitz_bound(const CurrentSpace& t, double lambda, double diam_source,
                              double diam_image);

/// d_F(M, N) <= k_{lambda,m} max{diam M, diam N} (Vol M + Vol boundary M) with
/// lambda = exp(d_L(M, N)). The d_L supplied is an upper bound from a
/// concrete map, so the report is an upper bound built on an upper bound.
BoundReport lipschitz_convergence_bound(double diam_m, double diam_n, double vol_m,
                                        double vol_boundary_m, int m, double d_lipschitz);
/// d_L from lipschitz_distance of a bijective point map; diameters from the
/// two metric spaces.
BoundReport lipschitz_convergence_bound(const PointMap& f, double vol_m, double vol_boundary_m,
                                        int m);

struct BridgeFillingInputs {
  double vol_u1 = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
  double mass_b1 = 0.0;
  double mass_b2 = 0.0;
  double mass_a1 = 0.0;
  double mass_a2 = 0.0;
  double diam_v1 = 0.0;
  double diam_v2 = 0.0;
};

/// d_F <= Vol(U1)(h1 + h2) + M(B1) + M(B2) + M(A1) + M(A2) and
/// d_GH <= (h1 + h2) + diam(V1) + diam(V2). Passing B = 0 and A = Vol(V)
/// gives the variant without extra filling spaces.
std::pair<BoundReport, BoundReport> bridge_filling_bound(const BridgeFillingInputs& in);

/// For phi a lambda-bi-Lipschitz embedding into R^N:
///   (sqrt(N) lambda)^-(m+1) F_e <= F(T) <= lambda^(m+1) F_e.
std::pair<BoundReport, BoundReport> flat_sandwich(double flat_euclidean, double lambda, int ambient_dim,
                                                  int m);

struct InjectiveFlatCheck {
  bool equal = true;
  /// Flat norm on the given metric, then on each Kuratowski re-embedding.
  std::vector<double> values;
  double tol = 0.0;
};

/// Flat norm of T on its ambient metric compared with the flat norm after
/// re-embedding the ambient in sup-norm coordinates: once with basepoint 0
/// and once with the coordinates of two basepoints appended. Ambient
/// enlargements of this kind must not lower the value.
InjectiveFlatCheck injective_flat_identity_check(const IntegralChain& t,
                                                 const FlatDistanceOptions& options = {},
                                                 double tol = 1e-9);

}  // namespace ifd

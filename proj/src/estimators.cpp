#include "ifd/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "ifd/error.hpp"

namespace ifd {

namespace {

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0) || !std::isfinite(v)) {
    throw DomainError(std::string(name) + " must be finite and nonnegative");
  }
}

void require_lambda(double lambda) {
  if (!(lambda >= 1.0) || !std::isfinite(lambda)) throw DomainError("lambda must be finite and >= 1");
}

BoundReport upper(Quantity q, double value, std::string formula, std::vector<NamedValue> inputs,
                  std::string anchor) {
  BoundReport r;
  r.quantity = q;
  r.direction = Direction::Upper;
  r.value = value;
  r.formula = std::move(formula);
  r.inputs = std::move(inputs);
  r.anchor = std::move(anchor);
  return r;
}

FiniteMetricSpace sup_norm_space(const std::vector<std::vector<double>>& coords) {
  const std::size_t n = coords.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = d[j * n + i] = sup_norm_distance(coords[i], coords[j]);
  return FiniteMetricSpace::trusted(n, std::move(d));
}

IntegralChain rebuild(const IntegralChain& t, const FiniteMetricSpace& ambient) {
  const auto& c = t.complex();
  std::map<int, std::vector<Simplex>> simplices;
  for (int k = 0; k <= c.top_dim(); ++k) {
    if (c.has_dim(k)) simplices[k] = c.simplices(k);
  }
  auto nc = SimplicialComplex::create(ambient, c.m(), std::move(simplices), c.positions());
  return IntegralChain(nc, t.dim(), t.coefficients());
}

}  // namespace

BoundReport trivial_bound(double vol1, double vol2) {
  require_nonnegative(vol1, "vol1");
  require_nonnegative(vol2, "vol2");
  return upper(Quantity::FlatDistance, vol1 + vol2, "Vol(M1) + Vol(M2)",
               {{"vol1", vol1, "volume"}, {"vol2", vol2, "volume"}}, "trivial-filling");
}

double k_constant(double lambda, int m) {
  require_lambda(lambda);
  if (m < 1) throw DomainError("m must be >= 1");
  return 0.5 * (m + 1) * std::pow(lambda, m - 1) * (lambda - 1.0);
}

BoundReport bilipschitz_bound(double total_mass, int m, double lambda, double diam_source,
                              double diam_image) {
  require_nonnegative(total_mass, "N(T)");
  require_nonnegative(diam_source, "diam_source");
  require_nonnegative(diam_image, "diam_image");
  const double k = k_constant(lambda, m);
  const double value = k * std::max(diam_source, diam_image) * total_mass;
  return upper(Quantity::FlatDistance, value, "k_{lambda,m} * max(diam_source, diam_image) * N(T)",
               {{"lambda", lambda, ""},
                {"m", static_cast<double>(m), ""},
                {"k", k, ""},
                {"diam_source", diam_source, "length"},
                {"diam_image", diam_image, "length"},
                {"N", total_mass, "volume"}},
               "bilipschitz-pushforward");
}

BoundReport bilipschitz_bound(const CurrentSpace& t, double lambda, double diam_source,
                              double diam_image) {
  return bilipschitz_bound(total_mass(t.chain), t.chain.dim(), lambda, diam_source, diam_image);
}

BoundReport lipschitz_convergence_bound(double diam_m, double diam_n, double vol_m,
                                        double vol_boundary_m, int m, double d_lipschitz) {
  require_nonnegative(d_lipschitz, "d_L");
  require_nonnegative(vol_m, "Vol(M)");
  require_nonnegative(vol_boundary_m, "Vol(boundary M)");
  require_nonnegative(diam_m, "diam(M)");
  require_nonnegative(diam_n, "diam(N)");
  const double lambda = std::exp(d_lipschitz);
  const double k = k_constant(lambda, m);
  BoundReport r = upper(Quantity::FlatDistance, k * std::max(diam_m, diam_n) * (vol_m + vol_boundary_m),
                        "k_{exp(d_L),m} * max(diam M, diam N) * (Vol M + Vol boundary M)",
                        {{"d_L", d_lipschitz, ""},
                         {"lambda", lambda, ""},
                         {"m", static_cast<double>(m), ""},
                         {"k", k, ""},
                         {"diam_M", diam_m, "length"},
                         {"diam_N", diam_n, "length"},
                         {"vol_M", vol_m, "volume"},
                         {"vol_boundary_M", vol_boundary_m, "volume"}},
                        "lipschitz-convergence");
  r.note = "d_L is an upper bound from a concrete map";
  return r;
}

BoundReport lipschitz_convergence_bound(const PointMap& f, double vol_m, double vol_boundary_m,
                                        int m) {
  return lipschitz_convergence_bound(diameter(f.source), diameter(f.target), vol_m, vol_boundary_m, m,
                                     lipschitz_distance(f));
}

std::pair<BoundReport, BoundReport> bridge_filling_bound(const BridgeFillingInputs& in) {
  for (auto [v, name] : {std::pair{in.vol_u1, "Vol(U1)"}, {in.h1, "h1"}, {in.h2, "h2"},
                         {in.mass_b1, "M(B1)"}, {in.mass_b2, "M(B2)"}, {in.mass_a1, "M(A1)"},
                         {in.mass_a2, "M(A2)"}, {in.diam_v1, "diam(V1)"}, {in.diam_v2, "diam(V2)"}}) {
    require_nonnegative(v, name);
  }
  std::vector<NamedValue> inputs = {{"vol_U1", in.vol_u1, "volume"}, {"h1", in.h1, "length"},
                                    {"h2", in.h2, "length"},         {"mass_B1", in.mass_b1, "volume"},
                                    {"mass_B2", in.mass_b2, "volume"}, {"mass_A1", in.mass_a1, "volume"},
                                    {"mass_A2", in.mass_a2, "volume"}, {"diam_V1", in.diam_v1, "length"},
                                    {"diam_V2", in.diam_v2, "length"}};
  auto flat = upper(Quantity::FlatDistance,
                    in.vol_u1 * (in.h1 + in.h2) + in.mass_b1 + in.mass_b2 + in.mass_a1 + in.mass_a2,
                    "Vol(U1)*(h1+h2) + M(B1) + M(B2) + M(A1) + M(A2)", inputs, "bridge-filling");
  auto gh = upper(Quantity::GromovHausdorff, (in.h1 + in.h2) + in.diam_v1 + in.diam_v2,
                  "(h1+h2) + diam(V1) + diam(V2)", inputs, "bridge-filling");
  return {flat, gh};
}

std::pair<BoundReport, BoundReport> flat_sandwich(double flat_euclidean, double lambda, int ambient_dim,
                                                  int m) {
  require_nonnegative(flat_euclidean, "F_e");
  require_lambda(lambda);
  if (m < 0) throw DomainError("m must be nonnegative");
  if (ambient_dim < m + 1) throw DomainError("ambient dimension must be at least m + 1");
  std::vector<NamedValue> inputs = {{"F_e", flat_euclidean, "volume"},
                                    {"lambda", lambda, ""},
                                    {"N", static_cast<double>(ambient_dim), ""},
                                    {"m", static_cast<double>(m), ""}};
  BoundReport lo;
  lo.quantity = Quantity::FlatDistance;
  lo.direction = Direction::Lower;
  lo.value = std::pow(std::sqrt(static_cast<double>(ambient_dim)) * lambda, -(m + 1)) * flat_euclidean;
  lo.formula = "(sqrt(N)*lambda)^-(m+1) * F_e";
  lo.inputs = inputs;
  lo.anchor = "euclidean-flat-lower";
  auto hi = upper(Quantity::FlatDistance, std::pow(lambda, m + 1) * flat_euclidean,
                  "lambda^(m+1) * F_e", inputs, "euclidean-flat-upper");
  return {lo, hi};
}

InjectiveFlatCheck injective_flat_identity_check(const IntegralChain& t,
                                                 const FlatDistanceOptions& options, double tol) {
  InjectiveFlatCheck out;
  out.tol = tol;
  const auto& ambient = t.complex().ambient();
  auto solve = [&](const IntegralChain& c) {
    if (c.is_zero()) return 0.0;
    IntegralChain zero(c.complex_ptr(), c.dim());
    return flat_distance(c, zero, options).value;
  };
  out.values.push_back(solve(t));
  if (ambient.size() == 0) return out;
  auto k0 = kuratowski_embed(ambient, 0);
  out.values.push_back(solve(rebuild(t, sup_norm_space(k0))));
  auto k1 = kuratowski_embed(ambient, ambient.size() - 1);
  for (std::size_t i = 0; i < k0.size(); ++i) k0[i].insert(k0[i].end(), k1[i].begin(), k1[i].end());
  out.values.push_back(solve(rebuild(t, sup_norm_space(k0))));
  const double ref = out.values.front();
  for (double v : out.values) {
    if (std::abs(v - ref) > tol * std::max(1.0, std::abs(ref))) out.equal = false;
  }
  return out;
}

}  // namespace ifd

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "ifd/metric_space.hpp"

namespace ifd {

/// Ordered vertex tuple; the order fixes the orientation up to even permutations.
using Simplex = std::vector<std::size_t>;

/// +1 or -1: parity of the permutation that sorts `s`. Throws on repeated vertices.
int orientation_sign(const Simplex& s);

/// Volume of the k-simplex whose (k+1)x(k+1) vertex distance matrix is given
/// row-major. Degenerate simplices give 0; a Cayley-Menger determinant of the
/// wrong sign beyond `rel_tol` throws InvariantError.
double simplex_volume(std::span<const double> distances, std::size_t k, double rel_tol = 1e-9);
double simplex_volume(const FiniteMetricSpace& space, const Simplex& s, double rel_tol = 1e-9);

/// Volume of the unit ball in R^m.
double unit_ball_volume(int m);

struct FaceRef {
  std::size_t index;
  int sign;
};

/// A finite oriented simplicial complex with metric data on its vertices.
///
/// Dimensions are stored densely from 0 to top_dim(); a dimension may be
/// absent (no simplices listed), in which case chains of that dimension are
/// unavailable and boundaries into it throw.
class SimplicialComplex {
 public:
  /// Validates closure for every dimension >= max(m-1, 0) and for any lower
  /// dimension that is listed, rejects duplicates and non-embeddable simplices.
  static std::shared_ptr<const SimplicialComplex> create(
      FiniteMetricSpace ambient, int m, std::map<int, std::vector<Simplex>> simplices,
      std::vector<std::vector<double>> positions = {});

  /// Adds every missing face of the given simplices (down to vertices). Faces
  /// that are generated take the orientation of the sorted tuple.
  static std::shared_ptr<const SimplicialComplex> closure(
      FiniteMetricSpace ambient, int m, std::map<int, std::vector<Simplex>> simplices,
      std::vector<std::vector<double>> positions = {});

  /// Convenience: Euclidean distances between the given positions, then closure().
  static std::shared_ptr<const SimplicialComplex> from_positions(
      std::vector<std::vector<double>> positions, int m,
      std::map<int, std::vector<Simplex>> simplices);

  int m() const noexcept { return m_; }
  int top_dim() const noexcept { return static_cast<int>(simplices_.size()) - 1; }
  std::size_t vertex_count() const noexcept { return ambient_.size(); }
  const FiniteMetricSpace& ambient() const noexcept { return ambient_; }
  bool has_positions() const noexcept { return !positions_.empty(); }
  const std::vector<std::vector<double>>& positions() const noexcept { return positions_; }

  bool has_dim(int k) const noexcept;
  std::size_t count(int k) const noexcept;
  const Simplex& simplex(int k, std::size_t i) const { return simplices_.at(k).at(i); }
  const std::vector<Simplex>& simplices(int k) const;
  double volume(int k, std::size_t i) const { return volumes_.at(k).at(i); }

  /// Index of the stored simplex with the same vertex set, and +1/-1 for
  /// whether `s` agrees with the stored orientation.
  std::optional<FaceRef> find(const Simplex& s) const;

  /// Signed faces of simplex (k, i) in dimension k-1. Throws InvariantError if
  /// dimension k-1 is not part of the complex.
  const std::vector<FaceRef>& faces(int k, std::size_t i) const;

  /// Cofaces of (k, i) in dimension k+1, as signed incidences.
  std::vector<std::vector<FaceRef>> cofaces(int k) const;

 private:
  SimplicialComplex() = default;
  void build_index();

  FiniteMetricSpace ambient_;
  int m_ = 0;
  std::vector<std::vector<Simplex>> simplices_;
  std::vector<std::vector<double>> volumes_;
  std::vector<std::vector<std::vector<FaceRef>>> faces_;
  std::vector<std::map<Simplex, std::size_t>> index_;
  std::vector<std::vector<double>> positions_;
};

using ComplexPtr = std::shared_ptr<const SimplicialComplex>;

/// Integer multiplicities on the k-simplices of a complex.
class IntegralChain {
 public:
  IntegralChain(ComplexPtr complex, int k);
  IntegralChain(ComplexPtr complex, int k, std::vector<std::int64_t> coefficients);
  static IntegralChain unit(ComplexPtr complex, int k, std::size_t i, std::int64_t coeff = 1);
  /// Multiplicity 1 on every listed k-simplex.
  static IntegralChain fundamental(ComplexPtr complex, int k);

  int dim() const noexcept { return k_; }
  const SimplicialComplex& complex() const noexcept { return *complex_; }
  const ComplexPtr& complex_ptr() const noexcept { return complex_; }
  std::size_t size() const noexcept { return coeff_.size(); }
  std::int64_t operator[](std::size_t i) const { return coeff_[i]; }
  const std::vector<std::int64_t>& coefficients() const noexcept { return coeff_; }

  bool is_zero() const;
  std::vector<std::size_t> support() const;
  std::int64_t max_abs() const;

  IntegralChain operator+(const IntegralChain& other) const;
  IntegralChain operator-(const IntegralChain& other) const;
  IntegralChain operator-() const;
  IntegralChain operator*(std::int64_t s) const;
  bool operator==(const IntegralChain& other) const;

 private:
  void require_compatible(const IntegralChain& other) const;

  ComplexPtr complex_;
  int k_;
  std::vector<std::int64_t> coeff_;
};

double mass(const IntegralChain& t);
IntegralChain boundary(const IntegralChain& t);
/// M(T) + M(boundary T); for 0-chains the boundary term is 0.
double total_mass(const IntegralChain& t);
/// Sum of theta * vol; throws DomainError on negative multiplicities.
double weighted_volume(const IntegralChain& t);

/// A vertex map between two complexes, extended simplexwise.
struct SimplicialMap {
  ComplexPtr source;
  ComplexPtr target;
  std::vector<std::size_t> vertex_map;
};

IntegralChain push_forward(const IntegralChain& t, const SimplicialMap& f);

/// Lipschitz constant of the simplexwise-affine extension of f, over all
/// simplices of the source up to dimension `max_dim`: the largest operator
/// norm of the affine map on any simplex (computed from edge lengths) and
/// the largest vertex-pair ratio. Infinite if a degenerate simplex is mapped
/// onto a nondegenerate one.
double dilatation(const SimplicialMap& f, int max_dim);

struct MassBounds {
  bool ok = true;
  double lower = 0.0;
  double mass = 0.0;
  double upper = 0.0;
  double volume = 0.0;
};

/// m^{-m/2} Vol <= M(T) <= (2^m / omega_m) Vol, with Vol the weighted volume.
MassBounds mass_bounds_check(const IntegralChain& t, double rel_tol = 1e-12);

/// Adjacent top simplices in the support induce opposite orientations on
/// every shared face. Requires |theta| = 1 on the support; throws
/// InvariantError on a face with more than two cofaces.
bool orientation_consistent(const IntegralChain& t);

struct DensityRow {
  std::size_t vertex = 0;
  /// ||T||(B_p(r)) / (omega_m r^m), one entry per radius.
  std::vector<double> ratios;
};

struct CanonicalSet {
  /// Vertices lying in some simplex of nonzero multiplicity.
  std::vector<std::size_t> vertices;
  /// Indices of the simplices of nonzero multiplicity.
  std::vector<std::size_t> simplices;
  std::vector<double> radii;
  /// Approximate lower-density diagnostics (barycentric sampling).
  std::vector<DensityRow> density;
};

/// Exact support plus sampled density ratios at decreasing radii for the
/// given query vertices (all support vertices when empty). Needs vertex
/// positions when radii are supplied.
CanonicalSet canonical_set(const IntegralChain& t, std::span<const double> radii,
                           std::span<const std::size_t> query = {});

/// The support of a chain with the ambient metric restricted to its vertices.
struct CurrentSpace {
  IntegralChain chain;
  std::vector<std::size_t> vertices;
  FiniteMetricSpace metric;
};

CurrentSpace current_space(const IntegralChain& t);

/// Mesh + chain JSON (see README for the format).
struct MeshDocument {
  ComplexPtr complex;
  std::vector<std::string> vertex_ids;
  std::map<int, IntegralChain> chains;
};

MeshDocument mesh_from_json(const nlohmann::json& j);
nlohmann::json mesh_to_json(const SimplicialComplex& c, const std::vector<IntegralChain>& chains);
nlohmann::json chain_to_json(const IntegralChain& t);

}  // namespace ifd

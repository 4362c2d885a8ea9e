#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "ifd/bound_report.hpp"

namespace ifd {

/// Absolute tolerance used by metric-axiom checks unless a caller overrides it.
inline constexpr double kMetricTol = 1e-9;

/// A finite metric space: n points and a full symmetric distance matrix.
///
/// Instances are immutable and share their storage, so copies are cheap.
/// Construction through `from_matrix` validates the metric axioms; the
/// `trusted` factory skips validation for matrices produced by algorithms
/// that guarantee them (shortest paths, gluing formulas).
class FiniteMetricSpace {
 public:
  FiniteMetricSpace();

  static FiniteMetricSpace from_matrix(const std::vector<std::vector<double>>& d,
                                       std::vector<std::string> labels = {},
                                       double tol = kMetricTol);
  static FiniteMetricSpace trusted(std::size_t n, std::vector<double> row_major,
                                   std::vector<std::string> labels = {});

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return (*d_)[i * n_ + j];
  }
  std::span<const double> row(std::size_t i) const noexcept {
    return {d_->data() + i * n_, n_};
  }
  const std::vector<double>& data() const noexcept { return *d_; }

  /// Label of point i; defaults to its decimal index.
  std::string label(std::size_t i) const;
  bool has_labels() const noexcept { return labels_ && !labels_->empty(); }

  /// Restriction of the metric to the listed points (in the listed order).
  FiniteMetricSpace subspace(std::span<const std::size_t> points) const;

  /// Every distance multiplied by `factor` (> 0).
  FiniteMetricSpace scaled(double factor) const;

 private:
  std::size_t n_ = 0;
  std::shared_ptr<const std::vector<double>> d_;
  std::shared_ptr<const std::vector<std::string>> labels_;
};

/// First metric-axiom violation found, if any.
struct MetricViolation {
  enum class Kind { NonzeroDiagonal, Negative, Asymmetric, Triangle, NotFinite };
  Kind kind;
  std::size_t i = 0, j = 0, k = 0;
  double excess = 0.0;
  std::string describe() const;
};

std::optional<MetricViolation> find_metric_violation(std::size_t n, std::span<const double> d,
                                                     double tol = kMetricTol);
std::optional<MetricViolation> find_metric_violation(const FiniteMetricSpace& space,
                                                     double tol = kMetricTol);

struct GraphEdge {
  std::size_t u = 0;
  std::size_t v = 0;
  double length = 0.0;
};

/// Undirected graph with strictly positive edge lengths.
class MetricGraph {
 public:
  MetricGraph() = default;
  explicit MetricGraph(std::size_t vertex_count, std::vector<std::string> labels = {});

  std::size_t add_vertex(std::string label = {});
  void add_edge(std::size_t u, std::size_t v, double length);

  std::size_t vertex_count() const noexcept { return vertex_count_; }
  const std::vector<GraphEdge>& edges() const noexcept { return edges_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Subgraph induced on `vertices`, renumbered in the listed order.
  MetricGraph induced(std::span<const std::size_t> vertices) const;

 private:
  std::size_t vertex_count_ = 0;
  std::vector<std::string> labels_;
  std::vector<GraphEdge> edges_;
};

/// Connected components, each sorted ascending; components ordered by smallest vertex.
std::vector<std::vector<std::size_t>> connected_components(const MetricGraph& g);

/// All-pairs shortest path lengths (row-major), +inf between components.
std::vector<double> shortest_path_lengths(const MetricGraph& g);

/// Induced length metric of a connected graph. Throws InvariantError naming the
/// components when the graph is disconnected.
FiniteMetricSpace length_metric(const MetricGraph& g);

double diameter(const FiniteMetricSpace& space);
double diameter(const FiniteMetricSpace& space, std::span<const std::size_t> subset);

struct PackingResult {
  std::size_t count = 0;
  /// Indices of a witnessing set with pairwise distances > 2r.
  std::vector<std::size_t> centers;
  /// True when the result came from the greedy fallback (n > exact limit).
  bool is_lower_bound = false;
};

inline constexpr std::size_t kExactPackingLimit = 30;

/// Maximum number of points with pairwise distance strictly greater than 2r.
PackingResult packing_number(const FiniteMetricSpace& space, double r);

/// Hausdorff distance between two nonempty point subsets of `space`.
double hausdorff_distance(std::span<const std::size_t> a, std::span<const std::size_t> b,
                          const FiniteMetricSpace& space);

/// A total map between the points of two finite metric spaces.
struct PointMap {
  FiniteMetricSpace source;
  FiniteMetricSpace target;
  std::vector<std::size_t> assignment;

  /// Throws InvariantError if the assignment is not total or out of range.
  void validate() const;
  bool is_injective() const;
  bool is_bijective() const;
  /// Image of the source as a list of target indices (with repeats removed, sorted).
  std::vector<std::size_t> image() const;
};

PointMap identity_map(const FiniteMetricSpace& space);
/// `second` after `first`; requires first.target and second.source to have equal size.
PointMap compose(const PointMap& first, const PointMap& second);

struct IsometryAudit {
  bool isometric = true;
  double worst_error = 0.0;
  std::size_t worst_i = 0;
  std::size_t worst_j = 0;
  double tolerance = 0.0;
};

IsometryAudit is_isometric_embedding(const PointMap& f, double tol);

struct LipschitzConstants {
  double dil = 0.0;
  /// Present only when the map is bijective.
  std::optional<double> dil_inverse;
};

LipschitzConstants lipschitz_constants(const PointMap& f);

/// |log dil f| + |log dil f^-1| for a bijective map (an upper bound on d_L).
double lipschitz_distance(const PointMap& f);

/// Kuratowski coordinates z -> d(z0, .) - d(z, .), one row per point.
std::vector<std::vector<double>> kuratowski_embed(const FiniteMetricSpace& space,
                                                  std::size_t basepoint);

double sup_norm_distance(std::span<const double> a, std::span<const double> b);

/// Hausdorff distance of the two images in the common target plus the
/// embedding tolerance. Throws IsometryError if either map is not isometric
/// at `tol`.
BoundReport gh_upper_bound(const PointMap& phi, const PointMap& psi, double tol = kMetricTol);

/// 1/2 |diam X - diam Y|, a standard lower bound on d_GH.
BoundReport gh_lower_bound(const FiniteMetricSpace& x, const FiniteMetricSpace& y);

// JSON text formats:
//   {"points":[...], "matrix":[[...]]}
//   {"vertices":[...], "edges":[[i,j,len],...]}
nlohmann::json to_json(const FiniteMetricSpace& space);
FiniteMetricSpace metric_space_from_json(const nlohmann::json& j, double tol = kMetricTol);
nlohmann::json to_json(const MetricGraph& g);
MetricGraph metric_graph_from_json(const nlohmann::json& j);

}  // namespace ifd

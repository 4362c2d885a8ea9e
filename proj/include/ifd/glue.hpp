#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ifd/bound_report.hpp"
#include "ifd/metric_space.hpp"

namespace ifd {

/// One constituent of a glued space and its map into the result.
struct GluedEmbedding {
  std::string name;
  PointMap map;
  /// Audit tolerance the construction promises for this map.
  double tolerance = 0.0;
  /// False for maps that are injective but need not preserve distances
  /// (the attached side of `attach`).
  bool claimed_isometric = true;
};

struct GluedSpace {
  FiniteMetricSpace result;
  std::vector<GluedEmbedding> embeddings;
  std::string construction;
  std::vector<NamedValue> parameters;

  const GluedEmbedding& embedding(const std::string& name) const;
  double parameter(const std::string& name) const;
};

/// Isometry audit of every recorded embedding at its own tolerance.
std::vector<IsometryAudit> audit(const GluedSpace& g);
/// True when the result is a metric and every claimed embedding passes.
bool audit_passes(const GluedSpace& g, double metric_tol = kMetricTol);

/// Z1 and Z2 glued along the images of X. Result points are Z1 followed by
/// the points of Z2 outside phi2(X); cross distances are
/// min_x d1(z, phi1 x) + d2(phi2 x, z').
GluedSpace glue_two(const PointMap& phi1, const PointMap& phi2, double tol = kMetricTol);

struct TreeEdge {
  std::size_t a = 0;
  std::size_t b = 0;
  FiniteMetricSpace space;
  /// X_a -> space and X_b -> space.
  PointMap phi_a;
  PointMap phi_b;
};

/// Edge spaces of a finite tree glued along the images of the vertex spaces.
/// Distances between points of different edge spaces are minimized over the
/// vertex spaces met along the unique edge path; points at distance zero are
/// then identified. Throws InvariantError on a cycle or a disconnected edge set.
GluedSpace glue_tree(const std::vector<FiniteMetricSpace>& vertex_spaces,
                     const std::vector<TreeEdge>& edges, double tol = kMetricTol);

/// Y attached to Z along X, where X is a vertex subset of Z and psi sends it
/// into Y. X carries the length metric of the subgraph of Z it induces; psi
/// must preserve it (pairs in different components of X are not compared).
/// The result is the length metric of the merged graph.
GluedSpace attach(const MetricGraph& z, const MetricGraph& y, const std::vector<std::size_t>& x,
                  const std::vector<std::size_t>& psi, double tol);

struct BridgeOptions {
  /// Boundary vertices of U1 and U2. When empty, the vertices of U adjacent
  /// to a vertex outside U.
  std::vector<std::size_t> boundary1;
  std::vector<std::size_t> boundary2;
  /// Spacing of the levels in U1 x [-h1, h2]; 0 means the longest edge of U1.
  double level_spacing = 0.0;
  /// Tolerance for psi and for the recorded embeddings; 0 means 10 times the
  /// longest edge of M1 and M2.
  double tol = 0.0;
};

/// h = sqrt(diam(dU) (2 diam(U) + diam(dU))).
double bridge_height(double diam_boundary, double diam_domain);

/// M1 and M2 joined through the product U1 x [-h1, h2] whose bottom is U1 and
/// whose top is psi(U1) = U2. Diameters in the heights are taken in the
/// length metric of M_i; the product uses the length metric of U1. The
/// result is the length metric of the three pieces glued along U1 and U2.
GluedSpace bridge(const MetricGraph& m1, const MetricGraph& m2, const std::vector<std::size_t>& u1,
                  const std::vector<std::size_t>& u2, const BridgeOptions& options = {});

struct PipeTube {
  double radius = 0.0;
  double length = 0.0;
  std::size_t from = 0;
  std::size_t to = 0;
};

struct PipeFill {
  double h = 0.0;
  BoundReport flat;
  BoundReport gh;
};

/// Bounds for spheres of the given radii joined by tubes, against the same
/// spheres joined by segments. With r the largest tube radius, R the largest
/// sphere radius, V the total sphere volume and L the total tube length:
///   h  = sqrt(pi r R + (pi r / 2)^2)
///   dF <= V (r + h) + Vol_m(S^m_r) L / 2 + Vol_{m-1}(S^{m-1}_r) L h
///   dGH <= pi r + h
PipeFill pipe_fill(int m, const std::vector<double>& sphere_radii,
                   const std::vector<PipeTube>& tubes);

/// k-dimensional volume of the round sphere S^k_r.
double sphere_volume(int k, double r);

nlohmann::json to_json(const GluedSpace& g);

}  // namespace ifd

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "ifd/current.hpp"
#include "ifd/metric_space.hpp"

namespace ifd {

/// Vertex positions plus top-dimensional cells, each an oriented vertex tuple.
struct Mesh {
  std::vector<std::vector<double>> positions;
  std::vector<Simplex> cells;
  int dim = 0;

  std::size_t vertex_count() const noexcept { return positions.size(); }
};

/// Closed simplicial complex of the mesh (all faces), chain dimension m.
ComplexPtr make_complex(const Mesh& mesh, int m);
ComplexPtr make_complex(const Mesh& mesh);

/// Multiplicity `coeff` on every cell, oriented as listed in the mesh.
IntegralChain cell_chain(const ComplexPtr& complex, const Mesh& mesh, std::int64_t coeff = 1);

/// 1-skeleton with Euclidean edge lengths.
MetricGraph edge_graph(const Mesh& mesh);

/// Longest edge of the mesh.
double max_edge_length(const Mesh& mesh);

/// Regular n-gon inscribed in the circle of the given radius (1-cells).
Mesh circle_polygon(std::size_t n, double radius = 1.0);

/// Refined icosahedron projected to the sphere; outward orientation.
Mesh icosphere(int level, double radius = 1.0);

/// Flat disk in the z = 0 plane: center, then `rings` rings of `boundary_points`
/// vertices each; the last ring is the boundary. Counterclockwise orientation.
Mesh flat_disk(std::size_t boundary_points, std::size_t rings, double radius = 1.0);

/// Upper hemisphere with the same index layout as flat_disk: the pole sits
/// in slot 0 and the equator is the last ring.
Mesh hemisphere(std::size_t boundary_points, std::size_t rings, double radius = 1.0);

/// Indices of the boundary ring shared by flat_disk and hemisphere.
std::vector<std::size_t> disk_boundary(std::size_t boundary_points, std::size_t rings);

/// Surface of revolution x^2 + y^2 = rho(z)^2 over [z0, z1]. A ring with
/// rho = 0 collapses to a single apex vertex.
Mesh surface_of_revolution(const std::function<double(double)>& rho, double z0, double z1,
                           std::size_t rings, std::size_t sectors);

/// Rectangle [0,w] x [0,h] split into nx * ny squares, two triangles each.
Mesh square_grid(std::size_t nx, std::size_t ny, double w = 1.0, double h = 1.0);

/// Base triangle mesh in the plane extruded through the given heights and
/// split into conforming tetrahedra.
Mesh extrude(const Mesh& base, const std::vector<double>& heights);

/// Five-triangle Moebius band.
Mesh moebius_band();

}  // namespace ifd

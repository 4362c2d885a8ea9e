#pragma once

#include <cmath>
#include <limits>
#include <cstdint>
#include <random>
#include <algorithm>
#include <map>
#include <vector>

#include "ifd/metric_space.hpp"

namespace fixtures {

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

/// Shortest-path metric of a complete graph with random edge weights in [lo, hi].
inline ifd::FiniteMetricSpace random_metric(std::mt19937_64& g, std::size_t n, double lo = 0.5,
                                            double hi = 3.0) {
  std::uniform_real_distribution<double> w(lo, hi);
  ifd::MetricGraph graph(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) graph.add_edge(i, j, w(g));
  return ifd::length_metric(graph);
}

/// Integer-valued metric: shortest paths over integer edge weights, so every
/// sum is exact in floating point.
inline ifd::FiniteMetricSpace random_integer_metric(std::mt19937_64& g, std::size_t n) {
  std::uniform_int_distribution<int> w(1, 9);
  ifd::MetricGraph graph(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) graph.add_edge(i, j, w(g));
  return ifd::length_metric(graph);
}

inline ifd::FiniteMetricSpace cycle_metric(std::size_t n, double edge = 1.0) {
  ifd::MetricGraph g(n);
  for (std::size_t i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n, edge);
  return ifd::length_metric(g);
}

inline ifd::FiniteMetricSpace points_metric(const std::vector<std::vector<double>>& pts) {
  std::vector<std::vector<double>> d(pts.size(), std::vector<double>(pts.size(), 0.0));
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) {
      double s = 0;
      for (std::size_t a = 0; a < pts[i].size(); ++a) s += (pts[i][a] - pts[j][a]) * (pts[i][a] - pts[j][a]);
      d[i][j] = std::sqrt(s);
    }
  return ifd::FiniteMetricSpace::from_matrix(d);
}

}  // namespace fixtures

#include "ifd/current.hpp"
#include "ifd/mesh.hpp"

namespace fixtures {

/// A random orientable 2-complex with at most 8 triangles: a random subset
/// of a jittered 3x3-vertex grid or of an octahedron, with all faces.
inline ifd::ComplexPtr random_small_surface(std::mt19937_64& g, int m = 1) {
  std::uniform_real_distribution<double> jitter(-0.15, 0.15);
  std::bernoulli_distribution coin(0.5);
  ifd::Mesh mesh;
  if (coin(g)) {
    mesh = ifd::square_grid(2, 2, 2.0, 2.0);
    for (auto& p : mesh.positions) {
      p[0] += jitter(g);
      p[1] += jitter(g);
    }
  } else {
    mesh.dim = 2;
    mesh.positions = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    for (auto& p : mesh.positions)
      for (auto& x : p) x *= 1.0 + jitter(g);
    mesh.cells = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                  {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
  }
  std::vector<ifd::Simplex> keep;
  for (const auto& c : mesh.cells)
    if (coin(g) || keep.empty()) keep.push_back(c);
  std::map<int, std::vector<ifd::Simplex>> s;
  s[2] = keep;
  // Edges of every kept triangle plus all grid edges, so 1-chains can live
  // outside the filled region too.
  std::vector<ifd::Simplex> edges;
  for (const auto& c : mesh.cells)
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = a + 1; b < 3; ++b)
        edges.push_back({std::min(c[a], c[b]), std::max(c[a], c[b])});
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  s[1] = edges;
  return ifd::SimplicialComplex::closure(points_metric(mesh.positions), m, std::move(s),
                                         mesh.positions);
}

inline ifd::IntegralChain random_chain(std::mt19937_64& g, const ifd::ComplexPtr& c, int k,
                                       int bound = 2, double density = 0.5) {
  std::uniform_int_distribution<int> coeff(-bound, bound);
  std::bernoulli_distribution on(density);
  std::vector<std::int64_t> x(c->count(k), 0);
  for (auto& v : x)
    if (on(g)) v = coeff(g);
  return ifd::IntegralChain(c, k, std::move(x));
}

}  // namespace fixtures

#include "ifd/glue.hpp"

namespace fixtures {

/// An integer metric containing isometric copies of each part (in order,
/// starting at offset 0) plus `extra` new points. Edges leaving a part weigh
/// at least the largest part diameter, so no detour shortens a part.
inline ifd::FiniteMetricSpace random_extension(std::mt19937_64& g,
                                               const std::vector<ifd::FiniteMetricSpace>& parts,
                                               std::size_t extra) {
  double big = 1.0;
  std::size_t n = extra;
  for (const auto& p : parts) {
    big = std::max(big, p.size() ? ifd::diameter(p) : 0.0);
    n += p.size();
  }
  std::vector<int> owner(n, -1);
  std::vector<std::size_t> local(n, 0);
  std::size_t at = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    for (std::size_t i = 0; i < parts[k].size(); ++i, ++at) {
      owner[at] = static_cast<int>(k);
      local[at] = i;
    }
  }
  std::uniform_int_distribution<int> w(static_cast<int>(big), 2 * static_cast<int>(big) + 3);
  ifd::MetricGraph graph(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (owner[i] >= 0 && owner[i] == owner[j]) {
        graph.add_edge(i, j, parts[owner[i]](local[i], local[j]));
      } else {
        graph.add_edge(i, j, w(g));
      }
    }
  return ifd::length_metric(graph);
}

inline std::vector<std::size_t> range_map(std::size_t start, std::size_t count) {
  std::vector<std::size_t> a(count);
  for (std::size_t i = 0; i < count; ++i) a[i] = start + i;
  return a;
}

struct TreeInstance {
  std::vector<ifd::FiniteMetricSpace> vertices;
  std::vector<ifd::TreeEdge> edges;
};

/// Random tree of integer metric spaces; vertex v > 0 hangs off a random
/// earlier vertex.
inline TreeInstance random_tree_instance(std::mt19937_64& g, std::size_t nv) {
  std::uniform_int_distribution<std::size_t> size(1, 3), extra(0, 3);
  TreeInstance t;
  for (std::size_t v = 0; v < nv; ++v) t.vertices.push_back(random_integer_metric(g, size(g)));
  for (std::size_t v = 1; v < nv; ++v) {
    std::size_t p = std::uniform_int_distribution<std::size_t>(0, v - 1)(g);
    const auto& xp = t.vertices[p];
    const auto& xv = t.vertices[v];
    auto z = random_extension(g, {xp, xv}, extra(g));
    t.edges.push_back({p, v, z, {xp, z, range_map(0, xp.size())},
                       {xv, z, range_map(xp.size(), xv.size())}});
  }
  return t;
}

/// Shortest paths over the union of the edge spaces with the vertex-space
/// images identified, indexed by (edge, point).
inline std::vector<std::vector<std::vector<double>>> tree_graph_oracle(const TreeInstance& t) {
  std::vector<std::size_t> off(t.edges.size() + 1, 0);
  for (std::size_t e = 0; e < t.edges.size(); ++e) off[e + 1] = off[e] + t.edges[e].space.size();
  const std::size_t n = off.back();
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x];
    return x;
  };
  // First edge touching each vertex carries the reference copy.
  std::vector<std::pair<std::size_t, const ifd::PointMap*>> first(t.vertices.size(), {SIZE_MAX, nullptr});
  for (std::size_t e = 0; e < t.edges.size(); ++e) {
    for (auto [v, phi] : {std::pair{t.edges[e].a, &t.edges[e].phi_a}, std::pair{t.edges[e].b, &t.edges[e].phi_b}}) {
      if (first[v].second == nullptr) {
        first[v] = {e, phi};
        continue;
      }
      for (std::size_t y = 0; y < t.vertices[v].size(); ++y) {
        std::size_t a = find(off[first[v].first] + first[v].second->assignment[y]);
        std::size_t b = find(off[e] + phi->assignment[y]);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (std::size_t e = 0; e < t.edges.size(); ++e)
    for (std::size_t i = 0; i < t.edges[e].space.size(); ++i)
      for (std::size_t j = 0; j < t.edges[e].space.size(); ++j) {
        std::size_t a = find(off[e] + i), b = find(off[e] + j);
        d[a][b] = std::min(d[a][b], t.edges[e].space(i, j));
      }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  std::vector<std::vector<std::vector<double>>> out(t.edges.size());
  for (std::size_t e = 0; e < t.edges.size(); ++e) {
    out[e].resize(t.edges[e].space.size());
    for (std::size_t i = 0; i < t.edges[e].space.size(); ++i) {
      out[e][i].resize(n);
      for (std::size_t f = 0; f < t.edges.size(); ++f)
        for (std::size_t j = 0; j < t.edges[f].space.size(); ++j)
          out[e][i][off[f] + j] = d[find(off[e] + i)][find(off[f] + j)];
    }
  }
  return out;
}

}  // namespace fixtures

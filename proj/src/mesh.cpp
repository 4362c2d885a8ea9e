#include "ifd/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "ifd/error.hpp"

namespace ifd {

namespace {

using Vec = std::vector<double>;

Vec sub(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec cross(const Vec& a, const Vec& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double dot(const Vec& a, const Vec& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// Orient a triangle so that its normal points away from `center`.
void orient_outward(Simplex& t, const std::vector<Vec>& p, const Vec& center) {
  Vec n = cross(sub(p[t[1]], p[t[0]]), sub(p[t[2]], p[t[0]]));
  Vec c = {(p[t[0]][0] + p[t[1]][0] + p[t[2]][0]) / 3 - center[0],
           (p[t[0]][1] + p[t[1]][1] + p[t[2]][1]) / 3 - center[1],
           (p[t[0]][2] + p[t[1]][2] + p[t[2]][2]) / 3 - center[2]};
  if (dot(n, c) < 0) std::swap(t[1], t[2]);
}

// Orient a planar or surface triangle so that its normal has positive z.
void orient_up(Simplex& t, const std::vector<Vec>& p) {
  Vec n = cross(sub(p[t[1]], p[t[0]]), sub(p[t[2]], p[t[0]]));
  if (n[2] < 0) std::swap(t[1], t[2]);
}

// Triangulate the band between two rings of equal size (or a ring and an apex).
void ring_band(std::vector<Simplex>& cells, const std::vector<std::size_t>& lower,
               const std::vector<std::size_t>& upper) {
  const std::size_t n = std::max(lower.size(), upper.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t i1 = (i + 1) % n;
    if (lower.size() == 1) {
      cells.push_back({lower[0], upper[i], upper[i1]});
    } else if (upper.size() == 1) {
      cells.push_back({lower[i], lower[i1], upper[0]});
    } else {
      cells.push_back({lower[i], lower[i1], upper[i1]});
      cells.push_back({lower[i], upper[i1], upper[i]});
    }
  }
}

}  // namespace

ComplexPtr make_complex(const Mesh& mesh, int m) {
  std::map<int, std::vector<Simplex>> s;
  s[mesh.dim] = mesh.cells;
  return SimplicialComplex::from_positions(mesh.positions, m, std::move(s));
}

ComplexPtr make_complex(const Mesh& mesh) { return make_complex(mesh, mesh.dim); }

IntegralChain cell_chain(const ComplexPtr& complex, const Mesh& mesh, std::int64_t coeff) {
  std::vector<std::int64_t> c(complex->count(mesh.dim), 0);
  for (const auto& cell : mesh.cells) {
    auto ref = complex->find(cell);
    if (!ref) throw InvariantError("mesh cell missing from complex");
    c[ref->index] += ref->sign * coeff;
  }
  return IntegralChain(complex, mesh.dim, std::move(c));
}

MetricGraph edge_graph(const Mesh& mesh) {
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& c : mesh.cells)
    for (std::size_t a = 0; a < c.size(); ++a)
      for (std::size_t b = a + 1; b < c.size(); ++b)
        edges.emplace(std::min(c[a], c[b]), std::max(c[a], c[b]));
  MetricGraph g(mesh.vertex_count());
  for (auto [u, v] : edges) g.add_edge(u, v, dist(mesh.positions[u], mesh.positions[v]));
  return g;
}

double max_edge_length(const Mesh& mesh) {
  double best = 0.0;
  const MetricGraph g = edge_graph(mesh);
  for (const auto& e : g.edges()) best = std::max(best, e.length);
  return best;
}

Mesh circle_polygon(std::size_t n, double radius) {
  if (n < 3) throw DomainError("a circle polygon needs at least 3 vertices");
  Mesh m;
  m.dim = 1;
  for (std::size_t i = 0; i < n; ++i) {
    double t = 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    m.positions.push_back({radius * std::cos(t), radius * std::sin(t), 0.0});
    m.cells.push_back({i, (i + 1) % n});
  }
  return m;
}

Mesh icosphere(int level, double radius) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec> p = {{-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
                        {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
                        {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  std::vector<std::array<std::size_t, 3>> f = {
      {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8}, {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8},
      {3, 8, 9}, {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
  auto normalize = [](Vec v) {
    double n = std::sqrt(dot(v, v));
    for (auto& x : v) x /= n;
    return v;
  };
  for (auto& v : p) v = normalize(v);
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> mid;
    auto midpoint = [&](std::size_t a, std::size_t b) {
      auto key = std::make_pair(std::min(a, b), std::max(a, b));
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      Vec m = {(p[a][0] + p[b][0]) / 2, (p[a][1] + p[b][1]) / 2, (p[a][2] + p[b][2]) / 2};
      p.push_back(normalize(m));
      mid.emplace(key, p.size() - 1);
      return p.size() - 1;
    };
    std::vector<std::array<std::size_t, 3>> next;
    for (auto [a, b, c] : f) {
      auto ab = midpoint(a, b), bc = midpoint(b, c), ca = midpoint(c, a);
      next.push_back({a, ab, ca});
      next.push_back({b, bc, ab});
      next.push_back({c, ca, bc});
      next.push_back({ab, bc, ca});
    }
    f = std::move(next);
  }
  Mesh m;
  m.dim = 2;
  for (auto& v : p) {
    for (auto& x : v) x *= radius;
    m.positions.push_back(v);
  }
  const Vec origin = {0, 0, 0};
  for (auto [a, b, c] : f) {
    Simplex t = {a, b, c};
    orient_outward(t, m.positions, origin);
    m.cells.push_back(t);
  }
  return m;
}

std::vector<std::size_t> disk_boundary(std::size_t boundary_points, std::size_t rings) {
  std::vector<std::size_t> b;
  std::size_t start = 1 + (rings - 1) * boundary_points;
  for (std::size_t i = 0; i < boundary_points; ++i) b.push_back(start + i);
  return b;
}

Mesh flat_disk(std::size_t n, std::size_t rings, double radius) {
  if (n < 3 || rings < 1) throw DomainError("disk needs n >= 3 and at least one ring");
  Mesh m;
  m.dim = 2;
  m.positions.push_back({0, 0, 0});
  std::vector<std::size_t> prev = {0};
  for (std::size_t k = 1; k <= rings; ++k) {
    double r = radius * static_cast<double>(k) / static_cast<double>(rings);
    std::vector<std::size_t> ring;
    for (std::size_t i = 0; i < n; ++i) {
      double t = 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
      ring.push_back(m.positions.size());
      m.positions.push_back({r * std::cos(t), r * std::sin(t), 0.0});
    }
    ring_band(m.cells, prev, ring);
    prev = std::move(ring);
  }
  for (auto& c : m.cells) orient_up(c, m.positions);
  return m;
}

Mesh hemisphere(std::size_t n, std::size_t rings, double radius) {
  if (n < 3 || rings < 1) throw DomainError("hemisphere needs n >= 3 and at least one ring");
  Mesh m;
  m.dim = 2;
  // Index layout matches flat_disk: slot 0 is unused by the hemisphere
  // interior, so it holds the pole; rings 1..rings go from near the pole to
  // the equator.
  m.positions.push_back({0, 0, radius});
  std::vector<std::size_t> prev = {0};
  for (std::size_t k = 1; k <= rings; ++k) {
    double polar = 0.5 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(rings);
    std::vector<std::size_t> ring;
    for (std::size_t i = 0; i < n; ++i) {
      double t = 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
      ring.push_back(m.positions.size());
      m.positions.push_back({radius * std::sin(polar) * std::cos(t),
                             radius * std::sin(polar) * std::sin(t), radius * std::cos(polar)});
    }
    ring_band(m.cells, prev, ring);
    prev = std::move(ring);
  }
  for (auto& c : m.cells) orient_outward(c, m.positions, {0, 0, 0});
  return m;
}

Mesh surface_of_revolution(const std::function<double(double)>& rho, double z0, double z1,
                           std::size_t rings, std::size_t sectors) {
  if (rings < 1 || sectors < 3) throw DomainError("surface of revolution needs rings >= 1, sectors >= 3");
  Mesh m;
  m.dim = 2;
  std::vector<std::vector<std::size_t>> levels;
  for (std::size_t k = 0; k <= rings; ++k) {
    double z = z0 + (z1 - z0) * static_cast<double>(k) / static_cast<double>(rings);
    double r = rho(z);
    std::vector<std::size_t> ring;
    if (r <= 0.0) {
      ring.push_back(m.positions.size());
      m.positions.push_back({0, 0, z});
    } else {
      for (std::size_t i = 0; i < sectors; ++i) {
        double t = 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(sectors);
        ring.push_back(m.positions.size());
        m.positions.push_back({r * std::cos(t), r * std::sin(t), z});
      }
    }
    if (!levels.empty() && !(levels.back().size() == 1 && ring.size() == 1)) {
      ring_band(m.cells, levels.back(), ring);
    }
    levels.push_back(std::move(ring));
  }
  // Outward from the axis at the cell's height.
  for (auto& t : m.cells) {
    double zc = (m.positions[t[0]][2] + m.positions[t[1]][2] + m.positions[t[2]][2]) / 3;
    orient_outward(t, m.positions, {0, 0, zc});
  }
  return m;
}

Mesh square_grid(std::size_t nx, std::size_t ny, double w, double h) {
  Mesh m;
  m.dim = 2;
  for (std::size_t j = 0; j <= ny; ++j)
    for (std::size_t i = 0; i <= nx; ++i)
      m.positions.push_back({w * static_cast<double>(i) / static_cast<double>(nx),
                             h * static_cast<double>(j) / static_cast<double>(ny), 0.0});
  auto id = [&](std::size_t i, std::size_t j) { return j * (nx + 1) + i; };
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      m.cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return m;
}

Mesh extrude(const Mesh& base, const std::vector<double>& heights) {
  if (base.dim != 2 || heights.size() < 2) throw DomainError("extrude needs a triangle mesh and two heights");
  Mesh m;
  m.dim = 3;
  const std::size_t n = base.vertex_count();
  for (double z : heights)
    for (const auto& p : base.positions) m.positions.push_back({p[0], p[1], p[2] + z});
  for (std::size_t l = 0; l + 1 < heights.size(); ++l) {
    for (auto t : base.cells) {
      std::sort(t.begin(), t.end());
      const std::size_t a = l * n + t[0], b = l * n + t[1], c = l * n + t[2];
      const std::size_t a2 = a + n, b2 = b + n, c2 = c + n;
      // Staircase split keyed on sorted vertex order: conforming across prisms.
      for (Simplex tet : {Simplex{a, b, c, c2}, Simplex{a, b, b2, c2}, Simplex{a, a2, b2, c2}}) {
        Vec e1 = sub(m.positions[tet[1]], m.positions[tet[0]]);
        Vec e2 = sub(m.positions[tet[2]], m.positions[tet[0]]);
        Vec e3 = sub(m.positions[tet[3]], m.positions[tet[0]]);
        if (dot(cross(e1, e2), e3) < 0) std::swap(tet[0], tet[1]);
        m.cells.push_back(tet);
      }
    }
  }
  return m;
}

Mesh moebius_band() {
  // Strip of five triangles on vertices 0..4 with the ends glued with a twist.
  Mesh m;
  m.dim = 2;
  for (std::size_t i = 0; i < 5; ++i) {
    double t = 2 * std::numbers::pi * static_cast<double>(i) / 5.0;
    double s = (i % 2 == 0) ? 0.3 : -0.3;
    m.positions.push_back({(1 + s * std::cos(t / 2)) * std::cos(t),
                           (1 + s * std::cos(t / 2)) * std::sin(t), s * std::sin(t / 2)});
  }
  for (std::size_t i = 0; i < 5; ++i) m.cells.push_back({i, (i + 1) % 5, (i + 2) % 5});
  return m;
}

}  // namespace ifd

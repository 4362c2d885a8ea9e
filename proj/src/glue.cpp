#include "ifd/glue.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <thread>

#include "ifd/current.hpp"
#include "ifd/error.hpp"

namespace ifd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) { return format_double(v); }

void require_isometric(const PointMap& f, double tol, const std::string& what) {
  auto a = is_isometric_embedding(f, tol);
  if (!a.isometric) {
    throw IsometryError(what + " is not an isometric embedding: pair (" + std::to_string(a.worst_i) +
                            "," + std::to_string(a.worst_j) + ") distorted by " +
                            fmt(a.worst_error) + " > tol " + fmt(tol),
                        a.worst_i, a.worst_j, a.worst_error);
  }
}

void require_distinct(const std::vector<std::size_t>& v, std::size_t bound, const std::string& what) {
  std::vector<std::size_t> s = v;
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
    throw InvariantError(what + " lists a vertex twice");
  }
  if (!s.empty() && s.back() >= bound) throw InvariantError(what + " names a vertex out of range");
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent[b] = a;
    return true;
  }
};

template <class F>
void parallel_rows(std::size_t n, F&& body) {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  std::size_t workers = std::min<std::size_t>(hw, std::max<std::size_t>(1, n / 64));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

double max_edge(const MetricGraph& g) {
  double m = 0.0;
  for (const auto& e : g.edges()) m = std::max(m, e.length);
  return m;
}

// Pieces with their own metrics, overlapping in portal points; the result is
// the length metric of their union.
struct Piece {
  std::vector<std::size_t> ids;
  std::function<double(std::size_t, std::size_t)> dist;
};

std::vector<double> glue_pieces(std::size_t n, const std::vector<Piece>& pieces) {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> member(n);
  for (std::size_t c = 0; c < pieces.size(); ++c) {
    for (std::size_t a = 0; a < pieces[c].ids.size(); ++a) member[pieces[c].ids[a]].push_back({c, a});
  }
  std::vector<std::size_t> portal_of(n, SIZE_MAX), portals;
  for (std::size_t i = 0; i < n; ++i) {
    if (member[i].empty()) throw InvariantError("glued point " + std::to_string(i) + " lies in no piece");
    if (member[i].size() > 1) {
      portal_of[i] = portals.size();
      portals.push_back(i);
    }
  }
  const std::size_t np = portals.size();

  // Portals of each piece as (local index, portal index), and their distances
  // to every point of the piece.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> piece_portals(pieces.size());
  std::vector<std::vector<double>> pd(pieces.size());
  for (std::size_t c = 0; c < pieces.size(); ++c) {
    const auto& ids = pieces[c].ids;
    for (std::size_t a = 0; a < ids.size(); ++a) {
      if (portal_of[ids[a]] != SIZE_MAX) piece_portals[c].push_back({a, portal_of[ids[a]]});
    }
    pd[c].resize(piece_portals[c].size() * ids.size());
    for (std::size_t q = 0; q < piece_portals[c].size(); ++q) {
      for (std::size_t b = 0; b < ids.size(); ++b) {
        pd[c][q * ids.size() + b] = pieces[c].dist(piece_portals[c][q].first, b);
      }
    }
  }

  std::vector<double> dp(np * np, kInf);
  for (std::size_t p = 0; p < np; ++p) dp[p * np + p] = 0.0;
  for (std::size_t c = 0; c < pieces.size(); ++c) {
    const auto& pp = piece_portals[c];
    const std::size_t sz = pieces[c].ids.size();
    for (std::size_t q = 0; q < pp.size(); ++q) {
      for (const auto& [b, pb] : pp) {
        double& cell = dp[pp[q].second * np + pb];
        cell = std::min(cell, pd[c][q * sz + b]);
      }
    }
  }
  for (std::size_t k = 0; k < np; ++k) {
    for (std::size_t i = 0; i < np; ++i) {
      const double dik = dp[i * np + k];
      if (dik == kInf) continue;
      for (std::size_t j = 0; j < np; ++j) {
        double via = dik + dp[k * np + j];
        if (via < dp[i * np + j]) dp[i * np + j] = via;
      }
    }
  }

  std::vector<double> d(n * n, kInf);
  parallel_rows(n, [&](std::size_t i) {
    // e[q]: shortest distance from i to portal q.
    std::vector<double> e(np, kInf);
    double* row = d.data() + i * n;
    for (const auto& [c, a] : member[i]) {
      const auto& ids = pieces[c].ids;
      for (std::size_t b = 0; b < ids.size(); ++b) {
        row[ids[b]] = std::min(row[ids[b]], pieces[c].dist(a, b));
      }
      const std::size_t sz = ids.size();
      for (std::size_t q = 0; q < piece_portals[c].size(); ++q) {
        double to_p = pd[c][q * sz + a];
        const double* dprow = dp.data() + piece_portals[c][q].second * np;
        for (std::size_t r = 0; r < np; ++r) e[r] = std::min(e[r], to_p + dprow[r]);
      }
    }
    std::vector<double> acc;
    for (std::size_t c = 0; c < pieces.size(); ++c) {
      const auto& ids = pieces[c].ids;
      const std::size_t sz = ids.size();
      acc.assign(sz, kInf);
      for (std::size_t q = 0; q < piece_portals[c].size(); ++q) {
        const double eq = e[piece_portals[c][q].second];
        if (eq == kInf) continue;
        const double* src = pd[c].data() + q * sz;
        for (std::size_t b = 0; b < sz; ++b) acc[b] = std::min(acc[b], eq + src[b]);
      }
      for (std::size_t b = 0; b < sz; ++b) row[ids[b]] = std::min(row[ids[b]], acc[b]);
    }
    row[i] = 0.0;
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = std::min(d[i * n + j], d[j * n + i]);
      if (v == kInf) throw InvariantError("glued pieces are not connected");
      d[i * n + j] = d[j * n + i] = v;
    }
  }
  return d;
}

std::vector<std::size_t> default_boundary(const MetricGraph& g, const std::vector<std::size_t>& u) {
  std::vector<char> in(g.vertex_count(), 0);
  for (auto v : u) in[v] = 1;
  std::vector<char> on(g.vertex_count(), 0);
  for (const auto& e : g.edges()) {
    if (in[e.u] && !in[e.v]) on[e.u] = 1;
    if (in[e.v] && !in[e.u]) on[e.v] = 1;
  }
  std::vector<std::size_t> b;
  for (auto v : u) {
    if (on[v]) b.push_back(v);
  }
  return b;
}

}  // namespace

const GluedEmbedding& GluedSpace::embedding(const std::string& name) const {
  for (const auto& e : embeddings) {
    if (e.name == name) return e;
  }
  throw std::out_of_range("no embedding named " + name);
}

double GluedSpace::parameter(const std::string& name) const {
  for (const auto& p : parameters) {
    if (p.name == name) return p.value;
  }
  throw std::out_of_range("no parameter named " + name);
}

std::vector<IsometryAudit> audit(const GluedSpace& g) {
  std::vector<IsometryAudit> out;
  for (const auto& e : g.embeddings) out.push_back(is_isometric_embedding(e.map, e.tolerance));
  return out;
}

bool audit_passes(const GluedSpace& g, double metric_tol) {
  if (find_metric_violation(g.result, metric_tol)) return false;
  auto audits = audit(g);
  for (std::size_t k = 0; k < audits.size(); ++k) {
    if (g.embeddings[k].claimed_isometric && !audits[k].isometric) return false;
  }
  return true;
}

GluedSpace glue_two(const PointMap& phi1, const PointMap& phi2, double tol) {
  phi1.validate();
  phi2.validate();
  const std::size_t nx = phi1.source.size();
  if (phi2.source.size() != nx) throw InvariantError("the two gluing maps have different sources");
  if (nx == 0) throw InvariantError("cannot glue along an empty space");
  require_isometric(phi1, tol, "phi1");
  require_isometric(phi2, tol, "phi2");
  if (!phi1.is_injective() || !phi2.is_injective()) {
    throw InvariantError("gluing maps must be injective");
  }
  const FiniteMetricSpace& z1 = phi1.target;
  const FiniteMetricSpace& z2 = phi2.target;
  const std::size_t n1 = z1.size(), n2 = z2.size();

  std::vector<std::size_t> where(n2, SIZE_MAX);
  for (std::size_t x = 0; x < nx; ++x) where[phi2.assignment[x]] = phi1.assignment[x];
  std::vector<std::size_t> fresh;
  for (std::size_t q = 0; q < n2; ++q) {
    if (where[q] == SIZE_MAX) {
      where[q] = n1 + fresh.size();
      fresh.push_back(q);
    }
  }
  const std::size_t n = n1 + fresh.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n1; ++j) d[i * n + j] = z1(i, j);
  }
  for (std::size_t a = 0; a < fresh.size(); ++a) {
    for (std::size_t b = 0; b < fresh.size(); ++b) d[(n1 + a) * n + n1 + b] = z2(fresh[a], fresh[b]);
  }
  for (std::size_t p = 0; p < n1; ++p) {
    for (std::size_t a = 0; a < fresh.size(); ++a) {
      double best = kInf;
      for (std::size_t x = 0; x < nx; ++x) {
        best = std::min(best, z1(p, phi1.assignment[x]) + z2(phi2.assignment[x], fresh[a]));
      }
      d[p * n + n1 + a] = d[(n1 + a) * n + p] = best;
    }
  }

  GluedSpace g;
  g.result = FiniteMetricSpace::trusted(n, std::move(d));
  g.construction = "glue_two";
  g.parameters = {{"points_x", static_cast<double>(nx), ""},
                  {"points_z1", static_cast<double>(n1), ""},
                  {"points_z2", static_cast<double>(n2), ""},
                  {"tol", tol, ""}};
  std::vector<std::size_t> id1(n1);
  std::iota(id1.begin(), id1.end(), 0);
  g.embeddings.push_back({"Z1", {z1, g.result, std::move(id1)}, tol, true});
  g.embeddings.push_back({"Z2", {z2, g.result, std::move(where)}, tol, true});
  return g;
}

GluedSpace glue_tree(const std::vector<FiniteMetricSpace>& vertex_spaces,
                     const std::vector<TreeEdge>& edges, double tol) {
  const std::size_t nv = vertex_spaces.size();
  if (edges.empty()) throw InvariantError("tree gluing needs at least one edge");
  UnionFind uf(nv);
  std::vector<std::vector<std::size_t>> incident(nv);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& ed = edges[e];
    if (ed.a >= nv || ed.b >= nv) throw InvariantError("tree edge names a missing vertex");
    if (ed.a == ed.b) throw InvariantError("tree edge is a loop at vertex " + std::to_string(ed.a));
    if (!uf.unite(ed.a, ed.b)) {
      throw InvariantError("edge set has a cycle through edge " + std::to_string(ed.a) + "-" +
                           std::to_string(ed.b));
    }
    incident[ed.a].push_back(e);
    incident[ed.b].push_back(e);
  }
  if (edges.size() + 1 != nv) throw InvariantError("edge set does not connect every vertex");
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& ed = edges[e];
    const std::string tag = "edge " + std::to_string(ed.a) + "-" + std::to_string(ed.b);
    for (int side = 0; side < 2; ++side) {
      const PointMap& phi = side == 0 ? ed.phi_a : ed.phi_b;
      const std::size_t v = side == 0 ? ed.a : ed.b;
      if (phi.assignment.size() != vertex_spaces[v].size() || phi.target.size() != ed.space.size()) {
        throw InvariantError(tag + ": map of X_" + std::to_string(v) + " has the wrong shape");
      }
      PointMap check{vertex_spaces[v], ed.space, phi.assignment};
      require_isometric(check, tol, tag + " map of X_" + std::to_string(v));
    }
  }
  for (std::size_t v = 0; v < nv; ++v) {
    if (incident[v].size() > 1 && vertex_spaces[v].size() == 0) {
      throw InvariantError("interior vertex " + std::to_string(v) + " carries an empty space");
    }
  }

  std::vector<std::size_t> off(edges.size() + 1, 0);
  for (std::size_t e = 0; e < edges.size(); ++e) off[e + 1] = off[e] + edges[e].space.size();
  const std::size_t total = off.back();
  auto map_at = [&](std::size_t e, std::size_t v) -> const PointMap& {
    return edges[e].a == v ? edges[e].phi_a : edges[e].phi_b;
  };
  auto other = [&](std::size_t e, std::size_t v) { return edges[e].a == v ? edges[e].b : edges[e].a; };

  std::vector<double> raw(total * total, kInf);
  parallel_rows(edges.size(), [&](std::size_t e) {
    const auto& ze = edges[e].space;
    for (std::size_t z = 0; z < ze.size(); ++z) {
      double* row = raw.data() + (off[e] + z) * total;
      for (std::size_t w = 0; w < ze.size(); ++w) row[off[e] + w] = ze(z, w);
      struct Frame {
        std::size_t vertex, from;
        std::vector<double> dist;
      };
      std::vector<Frame> stack;
      for (std::size_t v : {edges[e].a, edges[e].b}) {
        const auto& phi = map_at(e, v);
        std::vector<double> dist(phi.assignment.size());
        for (std::size_t y = 0; y < dist.size(); ++y) dist[y] = ze(z, phi.assignment[y]);
        stack.push_back({v, e, std::move(dist)});
      }
      while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        for (std::size_t e2 : incident[f.vertex]) {
          if (e2 == f.from) continue;
          const auto& z2 = edges[e2].space;
          const auto& in = map_at(e2, f.vertex).assignment;
          std::vector<double> val(z2.size(), kInf);
          for (std::size_t w = 0; w < z2.size(); ++w) {
            for (std::size_t y = 0; y < in.size(); ++y) {
              val[w] = std::min(val[w], f.dist[y] + z2(in[y], w));
            }
            row[off[e2] + w] = val[w];
          }
          const std::size_t u = other(e2, f.vertex);
          const auto& out = map_at(e2, u).assignment;
          std::vector<double> next(out.size());
          for (std::size_t y = 0; y < out.size(); ++y) next[y] = val[out[y]];
          stack.push_back({u, e2, std::move(next)});
        }
      }
    }
  });

  UnionFind classes(total);
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = i + 1; j < total; ++j) {
      if (std::min(raw[i * total + j], raw[j * total + i]) <= 0.0) classes.unite(i, j);
    }
  }
  std::vector<std::size_t> cls(total), reps;
  std::vector<std::size_t> rep_index(total, SIZE_MAX);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t r = classes.find(i);
    if (rep_index[r] == SIZE_MAX) {
      rep_index[r] = reps.size();
      reps.push_back(r);
    }
    cls[i] = rep_index[r];
  }
  const std::size_t n = reps.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const std::size_t i = reps[a], j = reps[b];
      double v = std::min(raw[i * total + j], raw[j * total + i]);
      d[a * n + b] = d[b * n + a] = v;
    }
  }

  GluedSpace g;
  g.result = FiniteMetricSpace::trusted(n, std::move(d));
  g.construction = "glue_tree";
  g.parameters = {{"vertices", static_cast<double>(nv), ""},
                  {"edges", static_cast<double>(edges.size()), ""},
                  {"tol", tol, ""}};
  for (std::size_t e = 0; e < edges.size(); ++e) {
    std::vector<std::size_t> f(edges[e].space.size());
    for (std::size_t z = 0; z < f.size(); ++z) f[z] = cls[off[e] + z];
    g.embeddings.push_back({"Z_" + std::to_string(edges[e].a) + "_" + std::to_string(edges[e].b),
                            {edges[e].space, g.result, std::move(f)},
                            tol,
                            true});
  }
  // Composite embeddings of each shared vertex space must agree.
  for (std::size_t v = 0; v < nv; ++v) {
    for (std::size_t k = 1; k < incident[v].size(); ++k) {
      const std::size_t e0 = incident[v][0], e1 = incident[v][k];
      for (std::size_t y = 0; y < vertex_spaces[v].size(); ++y) {
        if (g.embeddings[e0].map.assignment[map_at(e0, v).assignment[y]] !=
            g.embeddings[e1].map.assignment[map_at(e1, v).assignment[y]]) {
          throw InvariantError("images of X_" + std::to_string(v) + " point " + std::to_string(y) +
                               " were not identified");
        }
      }
    }
  }
  return g;
}

GluedSpace attach(const MetricGraph& z, const MetricGraph& y, const std::vector<std::size_t>& x,
                  const std::vector<std::size_t>& psi, double tol) {
  if (x.size() != psi.size()) throw InvariantError("attaching map must assign every point of X");
  if (x.empty()) throw InvariantError("cannot attach along an empty set");
  require_distinct(x, z.vertex_count(), "X");
  require_distinct(psi, y.vertex_count(), "psi");
  FiniteMetricSpace dz = length_metric(z);
  FiniteMetricSpace dy = length_metric(y);
  auto dx = shortest_path_lengths(z.induced(x));
  const std::size_t nx = x.size();
  IsometryAudit worst;
  for (std::size_t a = 0; a < nx; ++a) {
    for (std::size_t b = a + 1; b < nx; ++b) {
      double da = dx[a * nx + b];
      if (da == kInf) continue;
      double err = std::abs(dy(psi[a], psi[b]) - da);
      if (err > worst.worst_error) worst = {false, err, a, b, tol};
    }
  }
  if (worst.worst_error > tol) {
    throw IsometryError("psi does not preserve the length metric of X: pair (" +
                            std::to_string(worst.worst_i) + "," + std::to_string(worst.worst_j) +
                            ") distorted by " + fmt(worst.worst_error) + " > tol " + fmt(tol),
                        worst.worst_i, worst.worst_j, worst.worst_error);
  }

  const std::size_t nz = z.vertex_count();
  std::vector<std::size_t> where(y.vertex_count(), SIZE_MAX);
  for (std::size_t k = 0; k < nx; ++k) where[psi[k]] = x[k];
  MetricGraph merged(nz, z.labels());
  for (std::size_t v = 0; v < y.vertex_count(); ++v) {
    if (where[v] == SIZE_MAX) where[v] = merged.add_vertex();
  }
  for (const auto& e : z.edges()) merged.add_edge(e.u, e.v, e.length);
  for (const auto& e : y.edges()) merged.add_edge(where[e.u], where[e.v], e.length);

  GluedSpace g;
  g.result = length_metric(merged);
  g.construction = "attach";
  g.parameters = {{"points_z", static_cast<double>(nz), ""},
                  {"points_y", static_cast<double>(y.vertex_count()), ""},
                  {"points_x", static_cast<double>(nx), ""},
                  {"tol", tol, ""}};
  std::vector<std::size_t> idz(nz);
  std::iota(idz.begin(), idz.end(), 0);
  g.embeddings.push_back({"Z", {dz, g.result, std::move(idz)}, tol, true});
  g.embeddings.push_back({"Y", {dy, g.result, std::move(where)}, tol, false});
  return g;
}

double bridge_height(double diam_boundary, double diam_domain) {
  if (diam_boundary < 0 || diam_domain < 0) throw DomainError("diameters must be nonnegative");
  return std::sqrt(diam_boundary * (2.0 * diam_domain + diam_boundary));
}

GluedSpace bridge(const MetricGraph& m1, const MetricGraph& m2, const std::vector<std::size_t>& u1,
                  const std::vector<std::size_t>& u2, const BridgeOptions& options) {
  if (u1.empty() || u1.size() != u2.size()) {
    throw InvariantError("bridge domains must be nonempty and matched point for point");
  }
  require_distinct(u1, m1.vertex_count(), "U1");
  require_distinct(u2, m2.vertex_count(), "U2");
  const double mesh = std::max(max_edge(m1), max_edge(m2));
  const double tol = options.tol > 0 ? options.tol : 10.0 * mesh;

  FiniteMetricSpace d1 = length_metric(m1);
  FiniteMetricSpace d2 = length_metric(m2);
  MetricGraph g1 = m1.induced(u1);
  FiniteMetricSpace du1 = length_metric(g1);
  FiniteMetricSpace du2 = length_metric(m2.induced(u2));
  std::vector<std::size_t> psi(u1.size());
  std::iota(psi.begin(), psi.end(), 0);
  require_isometric(PointMap{du1, du2, std::move(psi)}, tol, "psi: U1 -> U2");

  auto b1 = options.boundary1.empty() ? default_boundary(m1, u1) : options.boundary1;
  auto b2 = options.boundary2.empty() ? default_boundary(m2, u2) : options.boundary2;
  for (auto v : b1) {
    if (std::find(u1.begin(), u1.end(), v) == u1.end()) throw InvariantError("boundary1 leaves U1");
  }
  for (auto v : b2) {
    if (std::find(u2.begin(), u2.end(), v) == u2.end()) throw InvariantError("boundary2 leaves U2");
  }
  const double diam_b1 = b1.empty() ? 0.0 : diameter(d1, b1);
  const double diam_b2 = b2.empty() ? 0.0 : diameter(d2, b2);
  const double diam_u1 = diameter(d1, u1);
  const double diam_u2 = diameter(d2, u2);
  const double h1 = bridge_height(diam_b1, diam_u1);
  const double h2 = bridge_height(diam_b2, diam_u2);

  double spacing = options.level_spacing;
  if (spacing <= 0) spacing = max_edge(g1) > 0 ? max_edge(g1) : mesh;
  const double height = h1 + h2;
  std::size_t levels = 0;
  if (height > 0) levels = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(height / spacing - 1e-12)));
  std::vector<double> t(levels + 1);
  for (std::size_t k = 0; k <= levels; ++k) {
    t[k] = levels == 0 ? 0.0 : -h1 + height * static_cast<double>(k) / static_cast<double>(levels);
  }

  const std::size_t n1 = m1.vertex_count(), n2 = m2.vertex_count(), nu = u1.size();
  std::size_t next = n1;
  std::vector<std::size_t> bridge_ids((levels + 1) * nu);
  for (std::size_t a = 0; a < nu; ++a) bridge_ids[a] = u1[a];
  for (std::size_t k = 1; k < levels; ++k) {
    for (std::size_t a = 0; a < nu; ++a) bridge_ids[k * nu + a] = next++;
  }
  std::vector<std::size_t> m2_ids(n2, SIZE_MAX);
  if (levels > 0) {
    for (std::size_t a = 0; a < nu; ++a) bridge_ids[levels * nu + a] = next++;
  }
  for (std::size_t a = 0; a < nu; ++a) m2_ids[u2[a]] = bridge_ids[levels * nu + a];
  for (std::size_t v = 0; v < n2; ++v) {
    if (m2_ids[v] == SIZE_MAX) m2_ids[v] = next++;
  }
  const std::size_t n = next;

  std::vector<std::size_t> m1_ids(n1);
  std::iota(m1_ids.begin(), m1_ids.end(), 0);
  std::vector<Piece> pieces;
  pieces.push_back({m1_ids, [&](std::size_t a, std::size_t b) { return d1(a, b); }});
  pieces.push_back({bridge_ids, [&](std::size_t a, std::size_t b) {
                      return std::hypot(du1(a % nu, b % nu), t[a / nu] - t[b / nu]);
                    }});
  pieces.push_back({m2_ids, [&](std::size_t a, std::size_t b) { return d2(a, b); }});

  GluedSpace g;
  g.result = FiniteMetricSpace::trusted(n, glue_pieces(n, pieces));
  g.construction = "bridge";
  g.parameters = {{"h1", h1, "length"},
                  {"h2", h2, "length"},
                  {"diam_boundary1", diam_b1, "length"},
                  {"diam_domain1", diam_u1, "length"},
                  {"diam_boundary2", diam_b2, "length"},
                  {"diam_domain2", diam_u2, "length"},
                  {"levels", static_cast<double>(levels), ""},
                  {"level_spacing", spacing, "length"},
                  {"mesh_edge", mesh, "length"},
                  {"tol", tol, "length"}};
  g.embeddings.push_back({"M1", {d1, g.result, std::move(m1_ids)}, tol, true});
  g.embeddings.push_back({"M2", {d2, g.result, std::move(m2_ids)}, tol, true});
  return g;
}

double sphere_volume(int k, double r) {
  if (k < 0) throw DomainError("sphere dimension must be nonnegative");
  return (k + 1) * unit_ball_volume(k + 1) * std::pow(r, k);
}

PipeFill pipe_fill(int m, const std::vector<double>& sphere_radii, const std::vector<PipeTube>& tubes) {
  if (m < 1) throw DomainError("pipe filling needs m >= 1");
  if (sphere_radii.empty()) throw DomainError("pipe filling needs at least one sphere");
  double big_r = 0.0, v = 0.0;
  for (double rj : sphere_radii) {
    if (!(rj > 0)) throw DomainError("sphere radii must be positive");
    big_r = std::max(big_r, rj);
    v += sphere_volume(m, rj);
  }
  UnionFind uf(sphere_radii.size());
  double r = 0.0, len = 0.0;
  for (const auto& tube : tubes) {
    if (tube.radius < 0 || tube.length < 0) throw DomainError("tube radius and length must be nonnegative");
    if (tube.from >= sphere_radii.size() || tube.to >= sphere_radii.size()) {
      throw DomainError("tube joins a missing sphere");
    }
    uf.unite(tube.from, tube.to);
    r = std::max(r, tube.radius);
    len += tube.length;
  }
  for (std::size_t j = 1; j < sphere_radii.size(); ++j) {
    if (uf.find(j) != uf.find(0)) throw DomainError("tubes do not connect every sphere");
  }

  PipeFill out;
  const double pi = std::numbers::pi;
  out.h = std::sqrt(pi * r * big_r + std::pow(pi * r / 2, 2));
  const double fill = sphere_volume(m, r) * len / 2;
  const double side = sphere_volume(m - 1, r) * len * out.h;
  std::vector<NamedValue> inputs = {{"m", static_cast<double>(m), ""}, {"r", r, "length"},
                                    {"R", big_r, "length"},          {"V", v, "volume"},
                                    {"L", len, "length"},            {"h", out.h, "length"}};
  out.flat.quantity = Quantity::FlatDistance;
  out.flat.direction = Direction::Upper;
  out.flat.value = v * (r + out.h) + fill + side;
  out.flat.formula = "V*(r+h) + Vol_m(S^m_r)*L/2 + Vol_{m-1}(S^{m-1}_r)*L*h";
  out.flat.inputs = inputs;
  out.flat.anchor = "pipe-filling";
  out.gh.quantity = Quantity::GromovHausdorff;
  out.gh.direction = Direction::Upper;
  out.gh.value = pi * r + out.h;
  out.gh.formula = "pi*r + h";
  out.gh.inputs = inputs;
  out.gh.anchor = "pipe-filling";
  return out;
}

nlohmann::json to_json(const GluedSpace& g) {
  nlohmann::json j;
  j["construction"] = g.construction;
  j["result"] = to_json(g.result);
  nlohmann::json params = nlohmann::json::object();
  for (const auto& p : g.parameters) params[p.name] = p.value;
  j["parameters"] = params;
  nlohmann::json embs = nlohmann::json::array();
  auto audits = audit(g);
  for (std::size_t k = 0; k < g.embeddings.size(); ++k) {
    const auto& e = g.embeddings[k];
    embs.push_back({{"name", e.name},
                    {"assignment", e.map.assignment},
                    {"tolerance", e.tolerance},
                    {"claimed_isometric", e.claimed_isometric},
                    {"audit",
                     {{"isometric", audits[k].isometric},
                      {"worst_error", audits[k].worst_error},
                      {"worst_pair", {audits[k].worst_i, audits[k].worst_j}}}}});
  }
  j["embeddings"] = embs;
  return j;
}

}  // namespace ifd

#include <cmath>
#include <numbers>

#include "doctest.h"

#include "fixtures.hpp"
#include "ifd/error.hpp"
#include "ifd/glue.hpp"
#include "ifd/mesh.hpp"

using namespace ifd;

namespace {

FiniteMetricSpace segment(double len) {
  return FiniteMetricSpace::from_matrix({{0, len}, {len, 0}});
}

FiniteMetricSpace point() { return FiniteMetricSpace::from_matrix({{0}}); }

MetricGraph path_graph(std::size_t n, double edge) {
  MetricGraph g(n);
  for (std::size_t i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1, edge);
  return g;
}

MetricGraph cycle_graph(std::size_t n, double edge) {
  MetricGraph g(n);
  for (std::size_t i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n, edge);
  return g;
}

std::vector<double> floyd(std::size_t n, const std::vector<GraphEdge>& edges) {
  std::vector<double> d(n * n, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0;
  for (const auto& e : edges) {
    d[e.u * n + e.v] = std::min(d[e.u * n + e.v], e.length);
    d[e.v * n + e.u] = std::min(d[e.v * n + e.u], e.length);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i * n + j] = std::min(d[i * n + j], d[i * n + k] + d[k * n + j]);
  return d;
}

}  // namespace

TEST_CASE("glue_two: two segments at an endpoint make a path of diameter 2") {
  auto s = segment(1.0);
  PointMap phi1{point(), s, {1}};
  PointMap phi2{point(), s, {0}};
  auto g = glue_two(phi1, phi2);
  CHECK(g.result.size() == 3);
  CHECK(diameter(g.result) == doctest::Approx(2.0));
  CHECK(audit_passes(g));
}

TEST_CASE("glue_two: gluing along all of Z2 returns Z1") {
  auto rng = fixtures::rng(3);
  auto x = fixtures::random_integer_metric(rng, 4);
  auto z1 = fixtures::random_extension(rng, {x}, 3);
  PointMap phi1{x, z1, fixtures::range_map(0, 4)};
  auto g = glue_two(phi1, identity_map(x));
  REQUIRE(g.result.size() == z1.size());
  CHECK(g.result.data() == z1.data());
}

TEST_CASE("glue_two: two unit 4-cycles along adjacent vertices match shortest paths") {
  auto c4 = fixtures::cycle_metric(4, 1.0);
  auto x = segment(1.0);
  auto g = glue_two({x, c4, {0, 1}}, {x, c4, {0, 1}});
  REQUIRE(g.result.size() == 6);
  // Merged graph: first cycle 0-1-2-3, second cycle's 2,3 become 4,5.
  std::vector<GraphEdge> edges = {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1},
                                  {1, 4, 1}, {4, 5, 1}, {5, 0, 1}};
  auto oracle = floyd(6, edges);
  CHECK(g.result.data() == oracle);
  CHECK(audit_passes(g, 0.0));
  CHECK(g.embedding("Z2").map.assignment == std::vector<std::size_t>{0, 1, 4, 5});
}

TEST_CASE("glue_two rejects a non-isometric map") {
  auto x = segment(1.0);
  auto z = segment(2.0);
  CHECK_THROWS_AS(glue_two({x, z, {0, 1}}, identity_map(x)), IsometryError);
}

TEST_CASE("glue_tree: single edge returns the edge space") {
  auto z = fixtures::cycle_metric(5, 1.0);
  auto g = glue_tree({point(), point()}, {{0, 1, z, {point(), z, {0}}, {point(), z, {2}}}});
  CHECK(g.result.data() == z.data());
}

TEST_CASE("glue_tree: a path of segments concatenates") {
  auto s1 = segment(1.0), s2 = segment(2.0);
  auto p = point();
  auto g = glue_tree({p, p, p}, {{0, 1, s1, {p, s1, {0}}, {p, s1, {1}}},
                                 {1, 2, s2, {p, s2, {0}}, {p, s2, {1}}}});
  REQUIRE(g.result.size() == 3);
  std::size_t a = g.embeddings[0].map.assignment[0];
  std::size_t b = g.embeddings[0].map.assignment[1];
  std::size_t c = g.embeddings[1].map.assignment[1];
  CHECK(g.embeddings[1].map.assignment[0] == b);
  CHECK(g.result(a, b) == 1.0);
  CHECK(g.result(b, c) == 2.0);
  CHECK(g.result(a, c) == 3.0);
}

TEST_CASE("glue_tree: star of segments is a metric tree") {
  const std::vector<double> len = {1.0, 2.0, 5.0};
  auto p = point();
  std::vector<FiniteMetricSpace> verts(4, p);
  std::vector<TreeEdge> edges;
  for (std::size_t i = 0; i < 3; ++i) {
    auto s = segment(len[i]);
    edges.push_back({0, i + 1, s, {p, s, {0}}, {p, s, {1}}});
  }
  auto g = glue_tree(verts, edges);
  REQUIRE(g.result.size() == 4);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      if (i == j) continue;
      CHECK(g.result(g.embeddings[i].map.assignment[1], g.embeddings[j].map.assignment[1]) ==
            len[i] + len[j]);
    }
}

TEST_CASE("glue_tree: random trees match the merged-graph oracle") {
  auto rng = fixtures::rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    auto t = fixtures::random_tree_instance(rng, 2 + trial % 5);
    auto g = glue_tree(t.vertices, t.edges);
    CHECK(!find_metric_violation(g.result, 0.0));
    CHECK(audit_passes(g, 0.0));
    auto oracle = fixtures::tree_graph_oracle(t);
    std::size_t off_f = 0;
    bool same = true;
    for (std::size_t e = 0; e < t.edges.size(); ++e)
      for (std::size_t i = 0; i < t.edges[e].space.size(); ++i) {
        off_f = 0;
        for (std::size_t f = 0; f < t.edges.size(); ++f) {
          for (std::size_t j = 0; j < t.edges[f].space.size(); ++j) {
            double got = g.result(g.embeddings[e].map.assignment[i], g.embeddings[f].map.assignment[j]);
            same = same && got == oracle[e][i][off_f + j];
          }
          off_f += t.edges[f].space.size();
        }
      }
    CHECK(same);
  }
}

TEST_CASE("glue_tree: a two-edge path through X reproduces glue_two") {
  auto rng = fixtures::rng(5);
  auto x = fixtures::random_integer_metric(rng, 3);
  auto z1 = fixtures::random_extension(rng, {x}, 2);
  auto z2 = fixtures::random_extension(rng, {x}, 4);
  FiniteMetricSpace empty;
  auto phi1 = PointMap{x, z1, fixtures::range_map(0, 3)};
  auto phi2 = PointMap{x, z2, fixtures::range_map(0, 3)};
  auto two = glue_two(phi1, phi2);
  auto tree = glue_tree({empty, x, empty}, {{0, 1, z1, {empty, z1, {}}, phi1},
                                            {1, 2, z2, phi2, {empty, z2, {}}}});
  REQUIRE(tree.result.size() == two.result.size());
  for (std::size_t i = 0; i < z1.size(); ++i)
    for (std::size_t j = 0; j < z2.size(); ++j)
      CHECK(tree.result(tree.embeddings[0].map.assignment[i], tree.embeddings[1].map.assignment[j]) ==
            two.result(two.embeddings[0].map.assignment[i], two.embeddings[1].map.assignment[j]));
}

TEST_CASE("glue_tree rejects cycles and non-isometric maps") {
  auto p = point();
  auto s = segment(1.0);
  std::vector<TreeEdge> cyc = {{0, 1, s, {p, s, {0}}, {p, s, {1}}},
                               {1, 2, s, {p, s, {0}}, {p, s, {1}}},
                               {2, 0, s, {p, s, {0}}, {p, s, {1}}}};
  CHECK_THROWS_AS(glue_tree({p, p, p}, cyc), InvariantError);
  auto x = segment(3.0);
  CHECK_THROWS_AS(glue_tree({x, p}, {{0, 1, s, {x, s, {0, 1}}, {p, s, {0}}}}), IsometryError);
}

TEST_CASE("attach: a point leaves Z unchanged") {
  auto z = cycle_graph(6, 1.0);
  MetricGraph y(1);
  auto g = attach(z, y, {2}, {0}, 1e-12);
  CHECK(g.result.data() == length_metric(z).data());
  CHECK(audit_passes(g));
}

TEST_CASE("attach: a segment on both endpoints of a segment makes a circle") {
  auto z = path_graph(3, 0.5);
  auto y = path_graph(5, 0.25);
  auto g = attach(z, y, {0, 2}, {0, 4}, 1e-12);
  REQUIRE(g.result.size() == 6);
  CHECK(diameter(g.result) == doctest::Approx(1.0));
  CHECK(g.result(0, 2) == doctest::Approx(1.0));
  // Both halves of the circle keep their lengths.
  CHECK(audit(g)[0].isometric);
  CHECK(audit(g)[1].isometric);
}

TEST_CASE("attach rejects psi that distorts X") {
  auto z = path_graph(3, 1.0);
  auto y = path_graph(3, 2.0);
  CHECK_THROWS_AS(attach(z, y, {0, 1}, {0, 1}, 1e-9), IsometryError);
}

TEST_CASE("attach: hemisphere on a flat disk") {
  const std::size_t n = 64, rings = 16;
  auto disk = flat_disk(n, rings);
  auto hemi = hemisphere(n, rings);
  auto boundary = disk_boundary(n, rings);
  const double ell = std::max(max_edge_length(disk), max_edge_length(hemi));
  auto g = attach(edge_graph(disk), edge_graph(hemi), boundary, boundary, 2 * ell);
  auto audits = audit(g);
  MESSAGE("ell=", ell, " z_err=", audits[0].worst_error, " y_err=", audits[1].worst_error);
  CHECK(audits[0].isometric);
  CHECK(!audits[1].isometric);
}

TEST_CASE("bridge_height") {
  CHECK(bridge_height(0.0, 3.0) == 0.0);
  const double pi = std::numbers::pi;
  CHECK(bridge_height(pi / 8, pi) == doctest::Approx(std::sqrt(pi / 8 * (2 * pi + pi / 8))));
  CHECK(bridge_height(pi / 8, pi) == doctest::Approx(1.6191).epsilon(1e-4));
}

TEST_CASE("bridge along a single point is a point gluing") {
  auto m1 = cycle_graph(5, 1.0);
  auto m2 = path_graph(4, 2.0);
  auto g = bridge(m1, m2, {3}, {1});
  CHECK(g.parameter("h1") == 0.0);
  CHECK(g.parameter("h2") == 0.0);
  auto pt = point();
  auto two = glue_two({pt, length_metric(m1), {3}}, {pt, length_metric(m2), {1}});
  REQUIRE(g.result.size() == two.result.size());
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(g.result(g.embedding("M1").map.assignment[i], g.embedding("M2").map.assignment[j]) ==
            doctest::Approx(two.result(two.embeddings[0].map.assignment[i],
                                       two.embeddings[1].map.assignment[j])));
  CHECK(audit_passes(g));
}

TEST_CASE("bridge between circles with different arcs outside U") {
  const std::size_t n = 48;
  auto circle = circle_polygon(n);
  auto m1 = edge_graph(circle);
  // Same arc U; outside U the second circle detours through extra vertices.
  MetricGraph m2(n);
  for (std::size_t i = 0; i + 1 < n; ++i) m2.add_edge(i, i + 1, m1.edges()[i].length);
  std::size_t prev = n - 1;
  for (int k = 0; k < 5; ++k) {
    std::size_t v = m2.add_vertex();
    m2.add_edge(prev, v, 0.1);
    prev = v;
  }
  m2.add_edge(prev, 0, 0.1);
  std::vector<std::size_t> u;
  for (std::size_t i = 0; i < n; ++i) u.push_back(i);
  u.resize(n - 4);
  auto g = bridge(m1, m2, u, u);
  auto audits = audit(g);
  const double ell = g.parameter("mesh_edge");
  MESSAGE("h1=", g.parameter("h1"), " h2=", g.parameter("h2"), " err1=", audits[0].worst_error,
          " err2=", audits[1].worst_error, " size=", g.result.size());
  CHECK(audits[0].worst_error <= 10 * ell);
  CHECK(audits[1].worst_error <= 10 * ell);
  std::vector<std::size_t> sample;
  for (std::size_t i = 0; i < g.result.size(); i += 7) sample.push_back(i);
  CHECK(!find_metric_violation(g.result.subspace(sample), 1e-9));
}

TEST_CASE("bridge between spheres with different caps") {
  auto s1 = icosphere(2);
  auto s2 = s1;
  for (auto& p : s2.positions) {
    if (p[2] > 0.7)
      for (auto& c : p) c *= 1.2;
  }
  std::vector<std::size_t> u;
  for (std::size_t v = 0; v < s1.vertex_count(); ++v)
    if (s1.positions[v][2] <= 0.7) u.push_back(v);
  BridgeOptions opt;
  opt.level_spacing = 2 * max_edge_length(s1);
  auto g = bridge(edge_graph(s1), edge_graph(s2), u, u, opt);
  auto audits = audit(g);
  const double ell = g.parameter("mesh_edge");
  MESSAGE("h1=", g.parameter("h1"), " h2=", g.parameter("h2"), " err1=", audits[0].worst_error,
          " err2=", audits[1].worst_error, " size=", g.result.size(), " ell=", ell);
  CHECK(audits[0].worst_error <= 10 * ell);
  CHECK(audits[1].worst_error <= 10 * ell);
}

TEST_CASE("bridge rejects a non-isometric psi") {
  auto m1 = path_graph(4, 1.0);
  auto m2 = path_graph(4, 2.0);
  CHECK_THROWS_AS(bridge(m1, m2, {0, 1, 2}, {0, 1, 2}, {.tol = 0.1}), IsometryError);
}

TEST_CASE("pipe_fill") {
  const double pi = std::numbers::pi;
  SUBCASE("r = 0 gives zero bounds") {
    auto p = pipe_fill(2, {1.0, 1.0}, {{0.0, 2.0, 0, 1}});
    CHECK(p.flat.value == 0.0);
    CHECK(p.gh.value == 0.0);
  }
  SUBCASE("two unit spheres joined by a thin tube") {
    auto p = pipe_fill(2, {1.0, 1.0}, {{0.01, 2.0, 0, 1}});
    const double h = std::sqrt(pi * 0.01 + std::pow(pi * 0.005, 2));
    CHECK(p.h == doctest::Approx(h));
    CHECK(p.h == doctest::Approx(0.17794).epsilon(1e-4));
    const double expect = 8 * pi * (0.01 + h) + 4 * pi * 1e-4 * 2 / 2 + 2 * pi * 0.01 * 2 * h;
    CHECK(p.flat.value == doctest::Approx(expect).epsilon(1e-14));
    CHECK(p.gh.value == doctest::Approx(pi * 0.01 + h));
    CHECK(p.flat.input("V") == doctest::Approx(8 * pi));
  }
  SUBCASE("two-spheres sequence decreases to zero") {
    double last = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= 100; ++j) {
      const double r = 1.0 / j;
      auto p = pipe_fill(2, {1.0, 1.0}, {{r, 2.0, 0, 1}});
      const double h = std::sqrt(pi / j + std::pow(pi / (2 * j), 2));
      // Volume of the filling written out for this geometry.
      const double vol = 2 * 4 * pi * (h + r) + 0.5 * 4 * pi * r * r * 2 + 2 * pi * r * 2 * h;
      CHECK(p.flat.value == doctest::Approx(vol).epsilon(1e-13));
      CHECK(p.flat.value < last);
      last = p.flat.value;
    }
    // The height term decays like j^(-1/2), so the tail is still above 4.
    CHECK(last < 0.3 * pipe_fill(2, {1.0, 1.0}, {{1.0, 2.0, 0, 1}}).flat.value);
  }
  SUBCASE("disconnected configuration is rejected") {
    CHECK_THROWS_AS(pipe_fill(2, {1.0, 1.0, 1.0}, {{0.1, 1.0, 0, 1}}), DomainError);
  }
}

TEST_CASE("sphere_volume") {
  const double pi = std::numbers::pi;
  CHECK(sphere_volume(1, 2.0) == doctest::Approx(4 * pi));
  CHECK(sphere_volume(2, 1.0) == doctest::Approx(4 * pi));
  CHECK(sphere_volume(3, 1.0) == doctest::Approx(2 * pi * pi));
}

TEST_CASE("GluedSpace json") {
  auto s = segment(1.0);
  auto g = glue_two({point(), s, {1}}, {point(), s, {0}});
  auto j = to_json(g);
  CHECK(j["construction"] == "glue_two");
  CHECK(j["embeddings"].size() == 2);
  CHECK(j["embeddings"][1]["audit"]["isometric"] == true);
}

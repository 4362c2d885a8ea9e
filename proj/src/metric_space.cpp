#include "ifd/metric_space.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

#include "ifd/error.hpp"

namespace ifd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) { return format_double(v); }

}  // namespace

FiniteMetricSpace::FiniteMetricSpace()
    : d_(std::make_shared<const std::vector<double>>()),
      labels_(std::make_shared<const std::vector<std::string>>()) {}

FiniteMetricSpace FiniteMetricSpace::from_matrix(const std::vector<std::vector<double>>& d,
                                                 std::vector<std::string> labels, double tol) {
  const std::size_t n = d.size();
  std::vector<double> flat;
  flat.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i].size() != n) {
      throw InvariantError("distance matrix row " + std::to_string(i) + " has " +
                           std::to_string(d[i].size()) + " entries, expected " +
                           std::to_string(n));
    }
    flat.insert(flat.end(), d[i].begin(), d[i].end());
  }
  if (!labels.empty() && labels.size() != n) {
    throw InvariantError("label count " + std::to_string(labels.size()) +
                         " does not match point count " + std::to_string(n));
  }
  if (auto v = find_metric_violation(n, flat, tol)) {
    auto name = [&](std::size_t i) { return labels.empty() ? std::to_string(i) : labels[i]; };
    std::string msg = v->describe();
    if (!labels.empty()) {
      msg += " [points " + name(v->i) + ", " + name(v->j);
      if (v->kind == MetricViolation::Kind::Triangle) msg += ", " + name(v->k);
      msg += "]";
    }
    throw InvariantError(msg);
  }
  // Symmetrize exactly so downstream code never sees d(i,j) != d(j,i).
  for (std::size_t i = 0; i < n; ++i) {
    flat[i * n + i] = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) flat[j * n + i] = flat[i * n + j];
  }
  return trusted(n, std::move(flat), std::move(labels));
}

FiniteMetricSpace FiniteMetricSpace::trusted(std::size_t n, std::vector<double> row_major,
                                             std::vector<std::string> labels) {
  if (row_major.size() != n * n) throw InvariantError("distance data has wrong size");
  FiniteMetricSpace s;
  s.n_ = n;
  s.d_ = std::make_shared<const std::vector<double>>(std::move(row_major));
  s.labels_ = std::make_shared<const std::vector<std::string>>(std::move(labels));
  return s;
}

std::string FiniteMetricSpace::label(std::size_t i) const {
  if (labels_ && i < labels_->size()) return (*labels_)[i];
  return std::to_string(i);
}

FiniteMetricSpace FiniteMetricSpace::subspace(std::span<const std::size_t> points) const {
  const std::size_t m = points.size();
  std::vector<double> out(m * m);
  std::vector<std::string> labels;
  for (std::size_t a = 0; a < m; ++a) {
    if (points[a] >= n_) throw InvariantError("subspace index out of range");
    for (std::size_t b = 0; b < m; ++b) out[a * m + b] = (*this)(points[a], points[b]);
  }
  if (has_labels()) {
    for (auto p : points) labels.push_back((*labels_)[p]);
  }
  return trusted(m, std::move(out), std::move(labels));
}

FiniteMetricSpace FiniteMetricSpace::scaled(double factor) const {
  if (!(factor > 0)) throw DomainError("scale factor must be positive");
  std::vector<double> out = *d_;
  for (auto& x : out) x *= factor;
  return trusted(n_, std::move(out), labels_ ? *labels_ : std::vector<std::string>{});
}

std::string MetricViolation::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::NotFinite:
      os << "distance d(" << i << "," << j << ") is not finite";
      break;
    case Kind::NonzeroDiagonal:
      os << "diagonal entry d(" << i << "," << i << ") = " << fmt(excess) << " is not zero";
      break;
    case Kind::Negative:
      os << "negative distance d(" << i << "," << j << ") = " << fmt(-excess);
      break;
    case Kind::Asymmetric:
      os << "asymmetric distances d(" << i << "," << j << ") and d(" << j << "," << i
         << ") differ by " << fmt(excess);
      break;
    case Kind::Triangle:
      os << "triangle inequality fails for triple (" << i << "," << j << "," << k << "): d("
         << i << "," << k << ") exceeds d(" << i << "," << j << ") + d(" << j << "," << k
         << ") by " << fmt(excess);
      break;
  }
  return os.str();
}

std::optional<MetricViolation> find_metric_violation(std::size_t n, std::span<const double> d,
                                                     double tol) {
  using K = MetricViolation::Kind;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double x = d[i * n + j];
      if (!std::isfinite(x)) return MetricViolation{K::NotFinite, i, j, 0, 0.0};
      if (i == j && std::abs(x) > tol) return MetricViolation{K::NonzeroDiagonal, i, i, 0, x};
      if (x < -tol) return MetricViolation{K::Negative, i, j, 0, -x};
      double diff = std::abs(x - d[j * n + i]);
      if (diff > tol) return MetricViolation{K::Asymmetric, i, j, 0, diff};
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double dij = d[i * n + j];
      for (std::size_t k = 0; k < n; ++k) {
        double excess = d[i * n + k] - dij - d[j * n + k];
        if (excess > tol) return MetricViolation{K::Triangle, i, j, k, excess};
      }
    }
  }
  return std::nullopt;
}

std::optional<MetricViolation> find_metric_violation(const FiniteMetricSpace& space, double tol) {
  return find_metric_violation(space.size(), space.data(), tol);
}

MetricGraph::MetricGraph(std::size_t vertex_count, std::vector<std::string> labels)
    : vertex_count_(vertex_count), labels_(std::move(labels)) {
  if (!labels_.empty() && labels_.size() != vertex_count_) {
    throw InvariantError("graph label count does not match vertex count");
  }
}

std::size_t MetricGraph::add_vertex(std::string label) {
  if (!label.empty() && labels_.empty() && vertex_count_ > 0) {
    for (std::size_t i = 0; i < vertex_count_; ++i) labels_.push_back(std::to_string(i));
  }
  if (!label.empty() || !labels_.empty()) {
    labels_.push_back(label.empty() ? std::to_string(vertex_count_) : std::move(label));
  }
  return vertex_count_++;
}

void MetricGraph::add_edge(std::size_t u, std::size_t v, double length) {
  if (u >= vertex_count_ || v >= vertex_count_) {
    throw InvariantError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                         ") references a missing vertex");
  }
  if (!(length > 0) || !std::isfinite(length)) {
    throw InvariantError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                         ") has non-positive length " + fmt(length));
  }
  edges_.push_back({u, v, length});
}

MetricGraph MetricGraph::induced(std::span<const std::size_t> vertices) const {
  std::vector<std::size_t> where(vertex_count_, static_cast<std::size_t>(-1));
  std::vector<std::string> labels;
  for (std::size_t a = 0; a < vertices.size(); ++a) {
    where[vertices[a]] = a;
    if (!labels_.empty()) labels.push_back(labels_[vertices[a]]);
  }
  MetricGraph g(vertices.size(), std::move(labels));
  for (const auto& e : edges_) {
    if (where[e.u] != static_cast<std::size_t>(-1) && where[e.v] != static_cast<std::size_t>(-1)) {
      g.add_edge(where[e.u], where[e.v], e.length);
    }
  }
  return g;
}

std::vector<std::vector<std::size_t>> connected_components(const MetricGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : g.edges()) {
    auto a = find(e.u), b = find(e.v);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::vector<std::size_t>> comps;
  std::vector<std::size_t> slot(n, static_cast<std::size_t>(-1));
  for (std::size_t v = 0; v < n; ++v) {
    auto r = find(v);
    if (slot[r] == static_cast<std::size_t>(-1)) {
      slot[r] = comps.size();
      comps.emplace_back();
    }
    comps[slot[r]].push_back(v);
  }
  return comps;
}

std::vector<double> shortest_path_lengths(const MetricGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
  for (const auto& e : g.edges()) {
    adj[e.u].emplace_back(e.v, e.length);
    adj[e.v].emplace_back(e.u, e.length);
  }
  std::vector<double> out(n * n, kInf);
  using Item = std::pair<double, std::size_t>;
  for (std::size_t s = 0; s < n; ++s) {
    double* dist = out.data() + s * n;
    dist[s] = 0.0;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.emplace(0.0, s);
    while (!pq.empty()) {
      auto [du, u] = pq.top();
      pq.pop();
      if (du > dist[u]) continue;
      for (auto [v, w] : adj[u]) {
        double nd = du + w;
        if (nd < dist[v]) {
          dist[v] = nd;
          pq.emplace(nd, v);
        }
      }
    }
  }
  // Dijkstra from each side can differ in the last bit; keep the smaller.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double m = std::min(out[i * n + j], out[j * n + i]);
      out[i * n + j] = out[j * n + i] = m;
    }
  }
  return out;
}

FiniteMetricSpace length_metric(const MetricGraph& g) {
  auto comps = connected_components(g);
  if (comps.size() > 1) {
    std::ostringstream os;
    os << "graph is disconnected: " << comps.size() << " components";
    for (const auto& c : comps) {
      os << " {";
      for (std::size_t a = 0; a < c.size(); ++a) {
        if (a) os << ",";
        if (a == 8 && c.size() > 9) {
          os << "... " << c.size() << " vertices";
          break;
        }
        os << (g.labels().empty() ? std::to_string(c[a]) : g.labels()[c[a]]);
      }
      os << "}";
    }
    throw InvariantError(os.str());
  }
  return FiniteMetricSpace::trusted(g.vertex_count(), shortest_path_lengths(g), g.labels());
}

double diameter(const FiniteMetricSpace& space) {
  if (space.size() == 0) throw DomainError("diameter of an empty space");
  const auto& d = space.data();
  return *std::max_element(d.begin(), d.end());
}

double diameter(const FiniteMetricSpace& space, std::span<const std::size_t> subset) {
  if (subset.empty()) throw DomainError("diameter of an empty subset");
  double best = 0.0;
  for (auto a : subset)
    for (auto b : subset) best = std::max(best, space(a, b));
  return best;
}

namespace {

// Maximum independent set on at most 64 vertices, bitmask branch and bound.
struct MisSearch {
  std::vector<std::uint64_t> conflict;
  std::uint64_t best_set = 0;
  int best = 0;

  void run(std::uint64_t cand, std::uint64_t chosen, int size) {
    if (cand == 0) {
      if (size > best) {
        best = size;
        best_set = chosen;
      }
      return;
    }
    if (size + std::popcount(cand) <= best) return;
    // Branch on the candidate with the most conflicts among candidates.
    int v = -1, deg = -1;
    for (std::uint64_t c = cand; c; c &= c - 1) {
      int u = std::countr_zero(c);
      int du = std::popcount(conflict[u] & cand);
      if (du > deg) {
        deg = du;
        v = u;
      }
    }
    const std::uint64_t bit = std::uint64_t{1} << v;
    if (deg == 0) {
      run(0, chosen | cand, size + std::popcount(cand));
      return;
    }
    run(cand & ~bit & ~conflict[v], chosen | bit, size + 1);
    run(cand & ~bit, chosen, size);
  }
};

}  // namespace

PackingResult packing_number(const FiniteMetricSpace& space, double r) {
  if (!(r > 0)) throw DomainError("packing radius must be positive");
  const std::size_t n = space.size();
  PackingResult res;
  if (n == 0) return res;
  const double two_r = 2.0 * r;
  if (n <= kExactPackingLimit) {
    MisSearch s;
    s.conflict.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && !(space(i, j) > two_r)) s.conflict[i] |= std::uint64_t{1} << j;
    s.run((n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1), 0, 0);
    for (std::size_t i = 0; i < n; ++i)
      if (s.best_set >> i & 1) res.centers.push_back(i);
    res.count = res.centers.size();
    return res;
  }
  // Greedy in index order: any separated set is a valid lower bound.
  for (std::size_t i = 0; i < n; ++i) {
    bool ok = true;
    for (auto c : res.centers) {
      if (!(space(i, c) > two_r)) {
        ok = false;
        break;
      }
    }
    if (ok) res.centers.push_back(i);
  }
  res.count = res.centers.size();
  res.is_lower_bound = true;
  return res;
}

double hausdorff_distance(std::span<const std::size_t> a, std::span<const std::size_t> b,
                          const FiniteMetricSpace& space) {
  if (a.empty() || b.empty()) throw DomainError("Hausdorff distance needs nonempty subsets");
  auto directed = [&](std::span<const std::size_t> from, std::span<const std::size_t> to) {
    double worst = 0.0;
    for (auto x : from) {
      if (x >= space.size()) throw DomainError("subset index out of range");
      double nearest = kInf;
      for (auto y : to) nearest = std::min(nearest, space(x, y));
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

void PointMap::validate() const {
  if (assignment.size() != source.size()) {
    throw InvariantError("point map assigns " + std::to_string(assignment.size()) +
                         " points but the source has " + std::to_string(source.size()));
  }
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] >= target.size()) {
      throw InvariantError("point map sends " + std::to_string(i) + " outside the target");
    }
  }
}

bool PointMap::is_injective() const {
  std::vector<std::size_t> img = assignment;
  std::sort(img.begin(), img.end());
  return std::adjacent_find(img.begin(), img.end()) == img.end();
}

bool PointMap::is_bijective() const {
  return source.size() == target.size() && is_injective();
}

std::vector<std::size_t> PointMap::image() const {
  std::vector<std::size_t> img = assignment;
  std::sort(img.begin(), img.end());
  img.erase(std::unique(img.begin(), img.end()), img.end());
  return img;
}

PointMap identity_map(const FiniteMetricSpace& space) {
  std::vector<std::size_t> a(space.size());
  std::iota(a.begin(), a.end(), 0);
  return {space, space, std::move(a)};
}

PointMap compose(const PointMap& first, const PointMap& second) {
  if (first.target.size() != second.source.size()) {
    throw DomainError("cannot compose maps: intermediate spaces differ in size");
  }
  std::vector<std::size_t> a(first.assignment.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = second.assignment[first.assignment[i]];
  return {first.source, second.target, std::move(a)};
}

IsometryAudit is_isometric_embedding(const PointMap& f, double tol) {
  f.validate();
  IsometryAudit audit;
  audit.tolerance = tol;
  const std::size_t n = f.source.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double err = std::abs(f.target(f.assignment[i], f.assignment[j]) - f.source(i, j));
      if (err > audit.worst_error) {
        audit.worst_error = err;
        audit.worst_i = i;
        audit.worst_j = j;
      }
    }
  }
  audit.isometric = audit.worst_error <= tol;
  return audit;
}

LipschitzConstants lipschitz_constants(const PointMap& f) {
  f.validate();
  const std::size_t n = f.source.size();
  if (n < 2) throw DomainError("Lipschitz constants need at least two source points");
  LipschitzConstants out;
  const bool bij = f.is_bijective();
  double inv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double ds = f.source(i, j);
      double dt = f.target(f.assignment[i], f.assignment[j]);
      if (ds > 0) out.dil = std::max(out.dil, dt / ds);
      if (bij && dt > 0) inv = std::max(inv, ds / dt);
    }
  }
  if (bij) out.dil_inverse = inv;
  return out;
}

double lipschitz_distance(const PointMap& f) {
  if (!f.is_bijective()) throw DomainError("Lipschitz distance needs a bijective map");
  auto c = lipschitz_constants(f);
  return std::abs(std::log(c.dil)) + std::abs(std::log(*c.dil_inverse));
}

std::vector<std::vector<double>> kuratowski_embed(const FiniteMetricSpace& space,
                                                  std::size_t basepoint) {
  const std::size_t n = space.size();
  if (basepoint >= n) throw DomainError("Kuratowski basepoint out of range");
  std::vector<std::vector<double>> out(n, std::vector<double>(n));
  for (std::size_t z = 0; z < n; ++z)
    for (std::size_t w = 0; w < n; ++w) out[z][w] = space(basepoint, w) - space(z, w);
  return out;
}

double sup_norm_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DomainError("sup-norm vectors differ in length");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

BoundReport gh_upper_bound(const PointMap& phi, const PointMap& psi, double tol) {
  if (phi.target.size() != psi.target.size() || phi.target.data() != psi.target.data()) {
    throw DomainError("embeddings must share a common target space");
  }
  for (const PointMap* f : {&phi, &psi}) {
    auto audit = is_isometric_embedding(*f, tol);
    if (!audit.isometric) {
      throw IsometryError("map is not an isometric embedding: pair (" +
                              std::to_string(audit.worst_i) + "," +
                              std::to_string(audit.worst_j) + ") distorted by " +
                              fmt(audit.worst_error) + " > tol " + fmt(tol),
                          audit.worst_i, audit.worst_j, audit.worst_error);
    }
  }
  auto a = phi.image();
  auto b = psi.image();
  double h = hausdorff_distance(a, b, phi.target);
  BoundReport r;
  r.quantity = Quantity::GromovHausdorff;
  r.direction = Direction::Upper;
  r.value = h + tol;
  r.formula = "d_H(phi(X), psi(Y)) + tol";
  r.inputs = {{"hausdorff", h, "length"}, {"tol", tol, "length"}};
  r.anchor = "gromov-hausdorff-definition";
  return r;
}

BoundReport gh_lower_bound(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
  double dx = diameter(x), dy = diameter(y);
  BoundReport r;
  r.quantity = Quantity::GromovHausdorff;
  r.direction = Direction::Lower;
  r.value = 0.5 * std::abs(dx - dy);
  r.formula = "|diam X - diam Y| / 2";
  r.inputs = {{"diam_X", dx, "length"}, {"diam_Y", dy, "length"}};
  r.anchor = "diameter-difference";
  r.note = "standard fact, not one of the construction bounds";
  return r;
}

namespace {

std::string json_label(const nlohmann::json& v) {
  return v.is_string() ? v.get<std::string>() : v.dump();
}

double json_number(const nlohmann::json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(where + ": expected a number, got " + v.dump());
  return v.get<double>();
}

}  // namespace

nlohmann::json to_json(const FiniteMetricSpace& space) {
  nlohmann::json points = nlohmann::json::array();
  nlohmann::json matrix = nlohmann::json::array();
  for (std::size_t i = 0; i < space.size(); ++i) {
    points.push_back(space.label(i));
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < space.size(); ++j) row.push_back(space(i, j));
    matrix.push_back(std::move(row));
  }
  return {{"points", points}, {"matrix", matrix}};
}

FiniteMetricSpace metric_space_from_json(const nlohmann::json& j, double tol) {
  if (!j.is_object() || !j.contains("matrix") || !j["matrix"].is_array()) {
    throw ParseError("metric space JSON needs a \"matrix\" array");
  }
  const auto& m = j["matrix"];
  std::vector<std::vector<double>> d(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!m[i].is_array()) throw ParseError("matrix[" + std::to_string(i) + "] is not an array");
    for (std::size_t k = 0; k < m[i].size(); ++k) {
      d[i].push_back(json_number(m[i][k], "matrix[" + std::to_string(i) + "][" +
                                              std::to_string(k) + "]"));
    }
  }
  std::vector<std::string> labels;
  if (j.contains("points")) {
    if (!j["points"].is_array()) throw ParseError("\"points\" must be an array");
    for (const auto& p : j["points"]) labels.push_back(json_label(p));
  }
  return FiniteMetricSpace::from_matrix(d, std::move(labels), tol);
}

nlohmann::json to_json(const MetricGraph& g) {
  nlohmann::json verts = nlohmann::json::array();
  for (std::size_t i = 0; i < g.vertex_count(); ++i) {
    if (g.labels().empty()) {
      verts.push_back(i);
    } else {
      verts.push_back(g.labels()[i]);
    }
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u, e.v, e.length});
  return {{"vertices", verts}, {"edges", edges}};
}

MetricGraph metric_graph_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array()) {
    throw ParseError("graph JSON needs a \"vertices\" array");
  }
  std::vector<std::string> labels;
  for (const auto& v : j["vertices"]) labels.push_back(json_label(v));
  const std::size_t n = labels.size();
  MetricGraph g(n, std::move(labels));
  if (j.contains("edges")) {
    const auto& edges = j["edges"];
    if (!edges.is_array()) throw ParseError("\"edges\" must be an array");
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const auto& e = edges[k];
      const std::string where = "edges[" + std::to_string(k) + "]";
      if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() ||
          !e[1].is_number_integer()) {
        throw ParseError(where + ": expected [i, j, length]");
      }
      g.add_edge(e[0].get<std::size_t>(), e[1].get<std::size_t>(), json_number(e[2], where));
    }
  }
  return g;
}

}  // namespace ifd

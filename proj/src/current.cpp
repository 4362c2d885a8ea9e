#include "ifd/current.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include <Eigen/Dense>

#include "ifd/error.hpp"

namespace ifd {

namespace {

std::string tuple_text(const Simplex& s, const FiniteMetricSpace* space = nullptr) {
  std::ostringstream os;
  os << "(";
  for (std::size_t a = 0; a < s.size(); ++a) {
    if (a) os << ",";
    if (space && s[a] < space->size()) {
      os << space->label(s[a]);
    } else {
      os << s[a];
    }
  }
  os << ")";
  return os.str();
}

Simplex sorted(Simplex s) {
  std::sort(s.begin(), s.end());
  return s;
}

Simplex drop(const Simplex& s, std::size_t r) {
  Simplex f;
  f.reserve(s.size() - 1);
  for (std::size_t a = 0; a < s.size(); ++a)
    if (a != r) f.push_back(s[a]);
  return f;
}

double factorial(std::size_t k) {
  double f = 1.0;
  for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
  return f;
}

// Gram matrix of the edge vectors v_a - v_0 computed from squared distances.
Eigen::MatrixXd gram_from_distances(const FiniteMetricSpace& space, const Simplex& s) {
  const std::size_t k = s.size() - 1;
  Eigen::MatrixXd g(k, k);
  for (std::size_t a = 1; a <= k; ++a) {
    for (std::size_t b = 1; b <= k; ++b) {
      double d0a = space(s[0], s[a]), d0b = space(s[0], s[b]), dab = space(s[a], s[b]);
      g(a - 1, b - 1) = 0.5 * (d0a * d0a + d0b * d0b - dab * dab);
    }
  }
  return g;
}

}  // namespace

int orientation_sign(const Simplex& s) {
  int inversions = 0;
  for (std::size_t a = 0; a < s.size(); ++a) {
    for (std::size_t b = a + 1; b < s.size(); ++b) {
      if (s[a] == s[b]) throw InvariantError("simplex " + tuple_text(s) + " repeats a vertex");
      if (s[a] > s[b]) ++inversions;
    }
  }
  return inversions % 2 == 0 ? 1 : -1;
}

double simplex_volume(std::span<const double> d, std::size_t k, double rel_tol) {
  if (d.size() != (k + 1) * (k + 1)) throw DomainError("simplex distance matrix has wrong size");
  if (k == 0) return 1.0;
  if (k == 1) return d[1];
  // Bordered Cayley-Menger determinant reduced to the Gram determinant of
  // the edge vectors at vertex 0: det(CM) = (-1)^{k+1} 2^k det(G).
  Eigen::MatrixXd g(k, k);
  double scale = 0.0;
  for (std::size_t a = 1; a <= k; ++a) {
    for (std::size_t b = 1; b <= k; ++b) {
      double d0a = d[a], d0b = d[b], dab = d[a * (k + 1) + b];
      g(a - 1, b - 1) = 0.5 * (d0a * d0a + d0b * d0b - dab * dab);
      scale = std::max(scale, dab * dab);
    }
    scale = std::max(scale, d[a] * d[a]);
  }
  double det = g.determinant();
  double floor = rel_tol * std::pow(scale, static_cast<double>(k));
  if (det < -floor) {
    throw InvariantError("simplex is not embeddable in Euclidean space (Cayley-Menger volume^2 = " +
                         format_double(det / (factorial(k) * factorial(k))) + ")");
  }
  if (det <= floor * 1e-3) return 0.0;
  return std::sqrt(det) / factorial(k);
}

double simplex_volume(const FiniteMetricSpace& space, const Simplex& s, double rel_tol) {
  const std::size_t n = s.size();
  std::vector<double> d(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) d[a * n + b] = space(s[a], s[b]);
  try {
    return simplex_volume(d, n - 1, rel_tol);
  } catch (const InvariantError& e) {
    throw InvariantError(std::string(e.what()) + " for simplex " + tuple_text(s, &space));
  }
}

double unit_ball_volume(int m) {
  return std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
}

std::shared_ptr<const SimplicialComplex> SimplicialComplex::create(
    FiniteMetricSpace ambient, int m, std::map<int, std::vector<Simplex>> simplices,
    std::vector<std::vector<double>> positions) {
  if (m < 0) throw InvariantError("complex dimension m must be nonnegative");
  int top = m + 1;
  for (const auto& [k, list] : simplices) {
    if (k < 0) throw InvariantError("negative simplex dimension");
    if (!list.empty()) top = std::max(top, k);
  }
  if (!positions.empty() && positions.size() != ambient.size()) {
    throw InvariantError("position count does not match vertex count");
  }
  std::shared_ptr<SimplicialComplex> c(new SimplicialComplex());
  c->ambient_ = std::move(ambient);
  c->m_ = m;
  c->positions_ = std::move(positions);
  c->simplices_.resize(top + 1);
  c->index_.resize(top + 1);
  for (auto& [k, list] : simplices) {
    if (k > top) continue;
    c->simplices_[k] = std::move(list);
  }
  const auto& amb = c->ambient_;
  for (int k = 0; k <= top; ++k) {
    for (std::size_t i = 0; i < c->simplices_[k].size(); ++i) {
      const Simplex& s = c->simplices_[k][i];
      if (s.size() != static_cast<std::size_t>(k + 1)) {
        throw InvariantError("simplex " + tuple_text(s) + " listed in dimension " +
                             std::to_string(k) + " has " + std::to_string(s.size()) + " vertices");
      }
      for (auto v : s) {
        if (v >= amb.size()) {
          throw InvariantError("simplex " + tuple_text(s) + " references missing vertex " +
                               std::to_string(v));
        }
      }
      orientation_sign(s);
      auto [it, inserted] = c->index_[k].emplace(sorted(s), i);
      if (!inserted) {
        throw InvariantError("duplicate simplex " + tuple_text(s, &amb) + " in dimension " +
                             std::to_string(k));
      }
    }
  }
  c->build_index();
  return c;
}

void SimplicialComplex::build_index() {
  const int top = top_dim();
  volumes_.assign(top + 1, {});
  faces_.assign(top + 1, {});
  for (int k = 0; k <= top; ++k) {
    volumes_[k].reserve(simplices_[k].size());
    for (const auto& s : simplices_[k]) volumes_[k].push_back(simplex_volume(ambient_, s));
  }
  for (int k = top; k >= 1; --k) {
    if (!has_dim(k - 1)) continue;
    faces_[k].resize(simplices_[k].size());
    for (std::size_t i = 0; i < simplices_[k].size(); ++i) {
      const Simplex& s = simplices_[k][i];
      for (std::size_t r = 0; r < s.size(); ++r) {
        Simplex f = drop(s, r);
        auto ref = find(f);
        if (!ref) {
          throw InvariantError("closure violation: face " + tuple_text(f, &ambient_) +
                               " of simplex " + tuple_text(s, &ambient_) + " is not listed");
        }
        int geometric = (r % 2 == 0) ? 1 : -1;
        faces_[k][i].push_back({ref->index, geometric * ref->sign});
      }
    }
  }
}

std::shared_ptr<const SimplicialComplex> SimplicialComplex::closure(
    FiniteMetricSpace ambient, int m, std::map<int, std::vector<Simplex>> simplices,
    std::vector<std::vector<double>> positions) {
  int top = 0;
  for (const auto& [k, list] : simplices)
    if (!list.empty()) top = std::max(top, k);
  std::vector<std::map<Simplex, bool>> seen(top + 1);
  for (auto& [k, list] : simplices)
    if (k <= top)
      for (const auto& s : list) seen[k].emplace(sorted(s), true);
  for (int k = top; k >= 1; --k) {
    auto it = simplices.find(k);
    if (it == simplices.end()) continue;
    auto& lower = simplices[k - 1];
    for (std::size_t i = 0; i < simplices[k].size(); ++i) {
      const Simplex s = simplices[k][i];
      for (std::size_t r = 0; r < s.size(); ++r) {
        Simplex f = sorted(drop(s, r));
        if (seen[k - 1].emplace(f, true).second) lower.push_back(std::move(f));
      }
    }
  }
  return create(std::move(ambient), m, std::move(simplices), std::move(positions));
}

std::shared_ptr<const SimplicialComplex> SimplicialComplex::from_positions(
    std::vector<std::vector<double>> positions, int m,
    std::map<int, std::vector<Simplex>> simplices) {
  const std::size_t n = positions.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (positions[i].size() != positions[j].size()) {
        throw InvariantError("vertex positions have inconsistent dimensions");
      }
      double s = 0.0;
      for (std::size_t a = 0; a < positions[i].size(); ++a) {
        double t = positions[i][a] - positions[j][a];
        s += t * t;
      }
      d[i * n + j] = d[j * n + i] = std::sqrt(s);
    }
  }
  return closure(FiniteMetricSpace::trusted(n, std::move(d)), m, std::move(simplices),
                 std::move(positions));
}

bool SimplicialComplex::has_dim(int k) const noexcept {
  if (k < 0 || k > top_dim()) return false;
  return k >= m_ - 1 || !simplices_[k].empty();
}

std::size_t SimplicialComplex::count(int k) const noexcept {
  if (k < 0 || k > top_dim()) return 0;
  return simplices_[k].size();
}

const std::vector<Simplex>& SimplicialComplex::simplices(int k) const {
  static const std::vector<Simplex> empty;
  if (k < 0 || k > top_dim()) return empty;
  return simplices_[k];
}

std::optional<FaceRef> SimplicialComplex::find(const Simplex& s) const {
  if (s.empty()) return std::nullopt;
  const int k = static_cast<int>(s.size()) - 1;
  if (k > top_dim()) return std::nullopt;
  auto it = index_[k].find(sorted(s));
  if (it == index_[k].end()) return std::nullopt;
  int sign = orientation_sign(s) * orientation_sign(simplices_[k][it->second]);
  return FaceRef{it->second, sign};
}

const std::vector<FaceRef>& SimplicialComplex::faces(int k, std::size_t i) const {
  if (k < 1 || k > top_dim() || faces_[k].empty()) {
    if (k >= 1 && k <= top_dim() && simplices_[k].empty()) {
      static const std::vector<FaceRef> none;
      return none;
    }
    throw InvariantError("closure violation: dimension " + std::to_string(k - 1) +
                         " is not part of the complex, boundary of a " + std::to_string(k) +
                         "-chain is undefined");
  }
  return faces_[k].at(i);
}

std::vector<std::vector<FaceRef>> SimplicialComplex::cofaces(int k) const {
  std::vector<std::vector<FaceRef>> out(count(k));
  if (k + 1 > top_dim()) return out;
  for (std::size_t i = 0; i < count(k + 1); ++i)
    for (const auto& f : faces(k + 1, i)) out[f.index].push_back({i, f.sign});
  return out;
}

IntegralChain::IntegralChain(ComplexPtr complex, int k)
    : complex_(std::move(complex)), k_(k) {
  if (!complex_) throw DomainError("chain needs a complex");
  if (!complex_->has_dim(k)) {
    throw DomainError("complex has no simplices of dimension " + std::to_string(k));
  }
  coeff_.assign(complex_->count(k), 0);
}

IntegralChain::IntegralChain(ComplexPtr complex, int k, std::vector<std::int64_t> coefficients)
    : IntegralChain(std::move(complex), k) {
  if (coefficients.size() != coeff_.size()) {
    throw DomainError("chain has " + std::to_string(coefficients.size()) +
                      " coefficients for " + std::to_string(coeff_.size()) + " simplices");
  }
  coeff_ = std::move(coefficients);
}

IntegralChain IntegralChain::unit(ComplexPtr complex, int k, std::size_t i, std::int64_t coeff) {
  IntegralChain t(std::move(complex), k);
  t.coeff_.at(i) = coeff;
  return t;
}

IntegralChain IntegralChain::fundamental(ComplexPtr complex, int k) {
  IntegralChain t(std::move(complex), k);
  std::fill(t.coeff_.begin(), t.coeff_.end(), 1);
  return t;
}

bool IntegralChain::is_zero() const {
  return std::all_of(coeff_.begin(), coeff_.end(), [](auto c) { return c == 0; });
}

std::vector<std::size_t> IntegralChain::support() const {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < coeff_.size(); ++i)
    if (coeff_[i] != 0) s.push_back(i);
  return s;
}

std::int64_t IntegralChain::max_abs() const {
  std::int64_t m = 0;
  for (auto c : coeff_) m = std::max<std::int64_t>(m, c < 0 ? -c : c);
  return m;
}

void IntegralChain::require_compatible(const IntegralChain& other) const {
  if (complex_ != other.complex_) throw DomainError("chains live on different complexes");
  if (k_ != other.k_) {
    throw DomainError("dimension mismatch: " + std::to_string(k_) + "-chain vs " +
                      std::to_string(other.k_) + "-chain");
  }
}

IntegralChain IntegralChain::operator+(const IntegralChain& other) const {
  require_compatible(other);
  IntegralChain r = *this;
  for (std::size_t i = 0; i < coeff_.size(); ++i) r.coeff_[i] += other.coeff_[i];
  return r;
}

IntegralChain IntegralChain::operator-(const IntegralChain& other) const {
  require_compatible(other);
  IntegralChain r = *this;
  for (std::size_t i = 0; i < coeff_.size(); ++i) r.coeff_[i] -= other.coeff_[i];
  return r;
}

IntegralChain IntegralChain::operator-() const { return *this * -1; }

IntegralChain IntegralChain::operator*(std::int64_t s) const {
  IntegralChain r = *this;
  for (auto& c : r.coeff_) c *= s;
  return r;
}

bool IntegralChain::operator==(const IntegralChain& other) const {
  return complex_ == other.complex_ && k_ == other.k_ && coeff_ == other.coeff_;
}

double mass(const IntegralChain& t) {
  double m = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] != 0) m += static_cast<double>(t[i] < 0 ? -t[i] : t[i]) * t.complex().volume(t.dim(), i);
  }
  return m;
}

IntegralChain boundary(const IntegralChain& t) {
  if (t.dim() == 0) throw DomainError("the boundary of a 0-chain is not a chain here");
  IntegralChain out(t.complex_ptr(), t.dim() - 1);
  std::vector<std::int64_t> c(out.size(), 0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] == 0) continue;
    for (const auto& f : t.complex().faces(t.dim(), i)) c[f.index] += f.sign * t[i];
  }
  return IntegralChain(t.complex_ptr(), t.dim() - 1, std::move(c));
}

double total_mass(const IntegralChain& t) {
  if (t.dim() == 0) return mass(t);
  return mass(t) + mass(boundary(t));
}

double weighted_volume(const IntegralChain& t) {
  double v = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < 0) {
      throw DomainError("weighted volume needs nonnegative weights; simplex " +
                        std::to_string(i) + " has " + std::to_string(t[i]));
    }
    v += static_cast<double>(t[i]) * t.complex().volume(t.dim(), i);
  }
  return v;
}

IntegralChain push_forward(const IntegralChain& t, const SimplicialMap& f) {
  if (f.source != t.complex_ptr()) throw DomainError("map source is not the chain's complex");
  if (f.vertex_map.size() != f.source->vertex_count()) {
    throw DomainError("vertex map is not total on the source complex");
  }
  std::vector<std::int64_t> c(f.target->count(t.dim()), 0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] == 0) continue;
    Simplex img;
    for (auto v : t.complex().simplex(t.dim(), i)) {
      if (f.vertex_map[v] >= f.target->vertex_count()) {
        throw DomainError("vertex map sends " + std::to_string(v) + " outside the target");
      }
      img.push_back(f.vertex_map[v]);
    }
    if (std::set<std::size_t>(img.begin(), img.end()).size() != img.size()) continue;
    auto ref = f.target->find(img);
    if (!ref) {
      throw InvariantError("image simplex " + tuple_text(img, &f.target->ambient()) +
                           " is absent from the target complex");
    }
    c[ref->index] += ref->sign * t[i];
  }
  return IntegralChain(f.target, t.dim(), std::move(c));
}

double dilatation(const SimplicialMap& f, int max_dim) {
  const auto& src = f.source->ambient();
  const auto& dst = f.target->ambient();
  double dil = 0.0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    for (std::size_t j = i + 1; j < src.size(); ++j) {
      double ds = src(i, j);
      if (ds > 0) dil = std::max(dil, dst(f.vertex_map[i], f.vertex_map[j]) / ds);
    }
  }
  for (int k = 2; k <= std::min(max_dim, f.source->top_dim()); ++k) {
    for (const auto& s : f.source->simplices(k)) {
      Simplex img;
      for (auto v : s) img.push_back(f.vertex_map[v]);
      Eigen::MatrixXd ge = gram_from_distances(src, s);
      Eigen::MatrixXd gf = gram_from_distances(dst, img);
      Eigen::LLT<Eigen::MatrixXd> llt(ge);
      if (llt.info() != Eigen::Success || simplex_volume(src, s) <= 0.0) {
        if (gf.determinant() > 1e-12 * std::pow(gf.norm(), static_cast<double>(k))) {
          return std::numeric_limits<double>::infinity();
        }
        continue;
      }
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(gf, ge);
      double top = ges.eigenvalues().maxCoeff();
      dil = std::max(dil, std::sqrt(std::max(0.0, top)));
    }
  }
  return dil;
}

MassBounds mass_bounds_check(const IntegralChain& t, double rel_tol) {
  MassBounds b;
  const int m = t.dim();
  b.volume = weighted_volume(t);
  b.mass = mass(t);
  b.lower = (m == 0 ? 1.0 : std::pow(static_cast<double>(m), -0.5 * m)) * b.volume;
  b.upper = std::pow(2.0, m) / unit_ball_volume(m) * b.volume;
  const double slack = rel_tol * std::max(1.0, b.volume);
  b.ok = b.lower <= b.mass + slack && b.mass <= b.upper + slack;
  return b;
}

bool orientation_consistent(const IntegralChain& t) {
  if (t.dim() < 1) throw DomainError("orientation check needs a chain of dimension >= 1");
  const auto& c = t.complex();
  std::vector<int> count(c.count(t.dim() - 1), 0);
  std::vector<std::int64_t> induced(c.count(t.dim() - 1), 0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] == 0) continue;
    if (t[i] != 1 && t[i] != -1) {
      throw DomainError("orientation check needs multiplicities of absolute value 1");
    }
    for (const auto& f : c.faces(t.dim(), i)) {
      ++count[f.index];
      induced[f.index] += f.sign * t[i];
    }
  }
  bool ok = true;
  for (std::size_t f = 0; f < count.size(); ++f) {
    if (count[f] > 2) {
      throw InvariantError("non-manifold face " +
                           tuple_text(c.simplex(t.dim() - 1, f), &c.ambient()) + " has " +
                           std::to_string(count[f]) + " cofaces");
    }
    if (count[f] == 2 && induced[f] != 0) ok = false;
  }
  return ok;
}

namespace {

// Centroids (as barycentric weights) of the pieces of an iterated
// barycentric subdivision of the standard k-simplex.
std::vector<std::vector<double>> subdivision_samples(std::size_t k, int levels) {
  using Piece = std::vector<std::vector<double>>;
  std::vector<Piece> pieces(1);
  for (std::size_t a = 0; a <= k; ++a) {
    std::vector<double> e(k + 1, 0.0);
    e[a] = 1.0;
    pieces[0].push_back(e);
  }
  std::vector<std::size_t> perm(k + 1);
  for (int l = 0; l < levels; ++l) {
    std::vector<Piece> next;
    for (const auto& p : pieces) {
      std::iota(perm.begin(), perm.end(), 0);
      do {
        Piece q;
        std::vector<double> acc(k + 1, 0.0);
        for (std::size_t j = 0; j <= k; ++j) {
          for (std::size_t a = 0; a <= k; ++a) acc[a] += p[perm[j]][a];
          std::vector<double> b(k + 1);
          for (std::size_t a = 0; a <= k; ++a) b[a] = acc[a] / static_cast<double>(j + 1);
          q.push_back(std::move(b));
        }
        next.push_back(std::move(q));
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
    pieces = std::move(next);
  }
  std::vector<std::vector<double>> out;
  out.reserve(pieces.size());
  for (const auto& p : pieces) {
    std::vector<double> c(k + 1, 0.0);
    for (const auto& v : p)
      for (std::size_t a = 0; a <= k; ++a) c[a] += v[a] / static_cast<double>(k + 1);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

CanonicalSet canonical_set(const IntegralChain& t, std::span<const double> radii,
                           std::span<const std::size_t> query) {
  CanonicalSet out;
  const auto& c = t.complex();
  out.simplices = t.support();
  std::vector<bool> in(c.vertex_count(), false);
  for (auto i : out.simplices)
    for (auto v : c.simplex(t.dim(), i)) in[v] = true;
  for (std::size_t v = 0; v < in.size(); ++v)
    if (in[v]) out.vertices.push_back(v);
  out.radii.assign(radii.begin(), radii.end());
  if (radii.empty()) return out;
  for (std::size_t a = 0; a < radii.size(); ++a) {
    if (!(radii[a] > 0)) throw DomainError("density radii must be positive");
    if (a > 0 && !(radii[a] < radii[a - 1])) throw DomainError("density radii must decrease");
  }
  if (!c.has_positions()) throw DomainError("density diagnostics need vertex positions");

  const std::size_t k = static_cast<std::size_t>(t.dim());
  const auto weights = subdivision_samples(k, 3);
  const std::size_t dim = c.positions().front().size();
  std::vector<double> points;
  std::vector<double> point_mass;
  for (auto i : out.simplices) {
    const auto& s = c.simplex(t.dim(), i);
    double w = static_cast<double>(std::llabs(t[i])) * c.volume(t.dim(), i) /
               static_cast<double>(weights.size());
    for (const auto& b : weights) {
      for (std::size_t x = 0; x < dim; ++x) {
        double p = 0.0;
        for (std::size_t a = 0; a <= k; ++a) p += b[a] * c.positions()[s[a]][x];
        points.push_back(p);
      }
      point_mass.push_back(w);
    }
  }
  std::vector<std::size_t> targets(query.begin(), query.end());
  if (targets.empty()) targets = out.vertices;
  const double omega = unit_ball_volume(t.dim());
  for (auto p : targets) {
    DensityRow row;
    row.vertex = p;
    const auto& pos = c.positions().at(p);
    std::vector<double> dist(point_mass.size());
    for (std::size_t q = 0; q < point_mass.size(); ++q) {
      double s = 0.0;
      for (std::size_t x = 0; x < dim; ++x) {
        double d = points[q * dim + x] - pos[x];
        s += d * d;
      }
      dist[q] = std::sqrt(s);
    }
    for (double r : radii) {
      double ball = 0.0;
      for (std::size_t q = 0; q < dist.size(); ++q)
        if (dist[q] <= r) ball += point_mass[q];
      row.ratios.push_back(ball / (omega * std::pow(r, t.dim())));
    }
    out.density.push_back(std::move(row));
  }
  return out;
}

CurrentSpace current_space(const IntegralChain& t) {
  auto cs = canonical_set(t, {});
  auto metric = t.complex().ambient().subspace(cs.vertices);
  return CurrentSpace{t, std::move(cs.vertices), std::move(metric)};
}

namespace {

std::string id_text(const nlohmann::json& v) {
  return v.is_string() ? v.get<std::string>() : v.dump();
}

}  // namespace

MeshDocument mesh_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("mesh JSON must be an object");
  if (!j.contains("m") || !j["m"].is_number_integer()) {
    throw ParseError("mesh JSON needs an integer field \"m\"");
  }
  const int m = j["m"].get<int>();
  if (!j.contains("vertices") || !j["vertices"].is_array()) {
    throw ParseError("mesh JSON needs a \"vertices\" array");
  }
  MeshDocument doc;
  std::map<std::string, std::size_t> by_id;
  std::vector<std::vector<double>> positions;
  bool all_pos = true;
  const auto& verts = j["vertices"];
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const auto& v = verts[i];
    std::string id = std::to_string(i);
    if (v.is_object()) {
      if (v.contains("id")) id = id_text(v["id"]);
      if (v.contains("pos")) {
        if (!v["pos"].is_array()) throw ParseError("vertices[" + std::to_string(i) + "].pos must be an array");
        std::vector<double> p;
        for (const auto& x : v["pos"]) {
          if (!x.is_number()) throw ParseError("vertices[" + std::to_string(i) + "].pos has a non-number");
          p.push_back(x.get<double>());
        }
        positions.push_back(std::move(p));
      } else {
        all_pos = false;
      }
    } else {
      id = id_text(v);
      all_pos = false;
    }
    if (!by_id.emplace(id, i).second) throw ParseError("duplicate vertex id " + id);
    doc.vertex_ids.push_back(id);
  }
  auto resolve = [&](const nlohmann::json& ref, const std::string& where) {
    auto it = by_id.find(id_text(ref));
    if (it == by_id.end()) throw ParseError(where + ": unknown vertex id " + id_text(ref));
    return it->second;
  };

  FiniteMetricSpace ambient;
  const std::size_t n = verts.size();
  if (all_pos && n > 0) {
    std::vector<double> d(n * n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        if (positions[a].size() != positions[b].size()) {
          throw ParseError("vertex positions have inconsistent dimensions");
        }
        double s = 0.0;
        for (std::size_t x = 0; x < positions[a].size(); ++x) {
          double t = positions[a][x] - positions[b][x];
          s += t * t;
        }
        d[a * n + b] = d[b * n + a] = std::sqrt(s);
      }
    }
    ambient = FiniteMetricSpace::trusted(n, std::move(d), doc.vertex_ids);
  } else if (j.contains("edges")) {
    positions.clear();
    MetricGraph g(n, doc.vertex_ids);
    const auto& edges = j["edges"];
    if (!edges.is_array()) throw ParseError("\"edges\" must be an array");
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const std::string where = "edges[" + std::to_string(e) + "]";
      if (!edges[e].is_array() || edges[e].size() != 3 || !edges[e][2].is_number()) {
        throw ParseError(where + ": expected [i, j, length]");
      }
      g.add_edge(resolve(edges[e][0], where), resolve(edges[e][1], where),
                 edges[e][2].get<double>());
    }
    ambient = length_metric(g);
  } else {
    throw ParseError("mesh needs positions on every vertex or an \"edges\" list");
  }

  std::map<int, std::vector<Simplex>> simplices;
  if (j.contains("simplices")) {
    if (!j["simplices"].is_object()) throw ParseError("\"simplices\" must be an object");
    for (const auto& [key, list] : j["simplices"].items()) {
      int k = 0;
      try {
        k = std::stoi(key);
      } catch (const std::exception&) {
        throw ParseError("simplices key \"" + key + "\" is not a dimension");
      }
      if (!list.is_array()) throw ParseError("simplices[" + key + "] must be an array");
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string where = "simplices[" + key + "][" + std::to_string(i) + "]";
        if (!list[i].is_array()) throw ParseError(where + " must be an array");
        Simplex s;
        for (const auto& v : list[i]) s.push_back(resolve(v, where));
        simplices[k].push_back(std::move(s));
      }
    }
  }
  if (!simplices.count(0)) {
    for (std::size_t v = 0; v < n; ++v) simplices[0].push_back({v});
  }
  doc.complex = SimplicialComplex::create(std::move(ambient), m, std::move(simplices),
                                          std::move(positions));
  if (j.contains("chain")) {
    if (!j["chain"].is_object()) throw ParseError("\"chain\" must be an object");
    for (const auto& [key, entries] : j["chain"].items()) {
      int k = 0;
      try {
        k = std::stoi(key);
      } catch (const std::exception&) {
        throw ParseError("chain key \"" + key + "\" is not a dimension");
      }
      if (!doc.complex->has_dim(k)) throw ParseError("chain of dimension " + key + " has no simplices");
      std::vector<std::int64_t> c(doc.complex->count(k), 0);
      if (!entries.is_object()) throw ParseError("chain[" + key + "] must be an object");
      for (const auto& [idx, mult] : entries.items()) {
        std::size_t i = 0;
        try {
          i = std::stoul(idx);
        } catch (const std::exception&) {
          throw ParseError("chain[" + key + "] key \"" + idx + "\" is not a simplex index");
        }
        if (i >= c.size()) throw ParseError("chain[" + key + "][" + idx + "] is out of range");
        if (!mult.is_number_integer()) {
          throw ParseError("chain[" + key + "][" + idx + "] must be an integer multiplicity");
        }
        c[i] = mult.get<std::int64_t>();
      }
      doc.chains.emplace(k, IntegralChain(doc.complex, k, std::move(c)));
    }
  }
  return doc;
}

nlohmann::json chain_to_json(const IntegralChain& t) {
  nlohmann::json out = nlohmann::json::object();
  for (auto i : t.support()) out[std::to_string(i)] = t[i];
  return out;
}

nlohmann::json mesh_to_json(const SimplicialComplex& c, const std::vector<IntegralChain>& chains) {
  nlohmann::json verts = nlohmann::json::array();
  for (std::size_t v = 0; v < c.vertex_count(); ++v) {
    nlohmann::json e = {{"id", c.ambient().label(v)}};
    if (c.has_positions()) e["pos"] = c.positions()[v];
    verts.push_back(std::move(e));
  }
  nlohmann::json simplices = nlohmann::json::object();
  for (int k = 0; k <= c.top_dim(); ++k) {
    if (c.count(k) == 0) continue;
    nlohmann::json list = nlohmann::json::array();
    for (const auto& s : c.simplices(k)) {
      nlohmann::json ids = nlohmann::json::array();
      for (auto v : s) ids.push_back(c.ambient().label(v));
      list.push_back(std::move(ids));
    }
    simplices[std::to_string(k)] = std::move(list);
  }
  nlohmann::json out = {{"m", c.m()}, {"vertices", verts}, {"simplices", simplices}};
  if (!c.has_positions()) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& s : c.simplices(1)) {
      edges.push_back({c.ambient().label(s[0]), c.ambient().label(s[1]), c.ambient()(s[0], s[1])});
    }
    out["edges"] = std::move(edges);
  }
  if (!chains.empty()) {
    nlohmann::json ch = nlohmann::json::object();
    for (const auto& t : chains) ch[std::to_string(t.dim())] = chain_to_json(t);
    out["chain"] = std::move(ch);
  }
  return out;
}

}  // namespace ifd

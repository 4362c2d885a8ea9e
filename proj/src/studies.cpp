#include "ifd/studies.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "ifd/error.hpp"
#include "ifd/estimators.hpp"
#include "ifd/glue.hpp"
#include "ifd/metric_space.hpp"

namespace ifd {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Area of the spherical cap of geodesic radius r on the unit sphere,
// 2 pi (1 - cos r) written to keep precision for tiny r.
double cap_area(double r) {
  const double s = std::sin(r / 2);
  return 4 * pi * s * s;
}

class Params {
 public:
  Params(const std::string& study, const StudyParams& user, StudyParams defaults)
      : values_(std::move(defaults)) {
    for (const auto& [k, v] : user) {
      if (!values_.count(k)) throw DomainError("study " + study + " has no parameter '" + k + "'");
      if (!std::isfinite(v)) throw DomainError("parameter '" + k + "' must be finite");
      values_[k] = v;
    }
  }
  double operator[](const std::string& k) const { return values_.at(k); }
  std::vector<NamedValue> list() const {
    std::vector<NamedValue> out;
    for (const auto& [k, v] : values_) out.push_back({k, v, ""});
    return out;
  }

 private:
  StudyParams values_;
};

void require(ExampleStudy& s, std::string name, std::string condition, bool holds) {
  s.hypotheses.push_back({name, condition, holds});
  if (!holds) throw HypothesisError(s.name + ": hypothesis " + name + " fails (" + condition + ")");
}

BoundReport report(Quantity q, double value, std::string formula, std::vector<NamedValue> inputs,
                   std::string anchor) {
  BoundReport r;
  r.quantity = q;
  r.direction = Direction::Upper;
  r.value = value;
  r.formula = std::move(formula);
  r.inputs = std::move(inputs);
  r.anchor = std::move(anchor);
  return r;
}

void run_rows(ExampleStudy& s, const StudyRange& range, const std::function<StudyRow(int)>& row) {
  if (range.jmin < 1 || range.jmax < range.jmin) throw DomainError("study range needs 1 <= jmin <= jmax");
  const std::size_t n = static_cast<std::size_t>(range.jmax - range.jmin + 1);
  s.rows.assign(n, {});
  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(1, range.jobs)), 1, n);
  std::exception_ptr failure;
  std::mutex m;
  auto work = [&](std::size_t w) {
    for (std::size_t i = w; i < n; i += workers) {
      try {
        s.rows[i] = row(range.jmin + static_cast<int>(i));
      } catch (...) {
        std::lock_guard lock(m);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

StudyRow make_row(int j, const BoundReport& flat, const BoundReport& gh, double mass,
                  std::vector<NamedValue> aux = {}, bool ok = true) {
  StudyRow r;
  r.j = j;
  r.flat = flat;
  r.gh = gh;
  r.dF_bound = flat.value;
  r.dGH_bound = gh.value;
  r.mass = mass;
  r.aux = std::move(aux);
  r.hypothesis_ok = ok;
  return r;
}

BoundReport no_bound(Quantity q, double value, std::string why) {
  BoundReport r = report(q, value, "none", {}, "none");
  r.note = std::move(why);
  return r;
}

BoundReport no_gh(double value, std::string why) { return no_bound(Quantity::GromovHausdorff, value, std::move(why)); }

// ---- quadrature on surfaces of revolution ----

struct Profile {
  double rho;
  double rho_drho;  // rho * rho', finite where rho' is not
};

// Taper on [j, j + 1/j]: rho = cos(pi t / 2) g(z) with t = j (z - j).
Profile taper(double z, int j, double g, double dg) {
  const double t = j * (z - j);
  const double c = std::cos(pi * t / 2), sn = std::sin(pi * t / 2);
  const double rho = c * g;
  const double drho = -(pi * j / 2) * sn * g + c * dg;
  return {rho, rho * drho};
}

Profile horn_at(double z, int j) {
  const double g = 1.0 / ((1 + z) * (1 + z));
  const double dg = -2.0 / std::pow(1 + z, 3);
  if (j == 0 || z <= j) return {g, g * dg};
  if (z >= j + 1.0 / j) return {0.0, 0.0};
  return taper(z, j, g, dg);
}

Profile gabriel_at(double z, int j) {
  if (z < 1) {
    const double s = std::sin(z);
    const double rho = std::sqrt(s) / (1 + z);
    return {rho, std::cos(z) / (2 * (1 + z) * (1 + z)) - s / std::pow(1 + z, 3)};
  }
  const double g = 1.0 / (1 + z);
  const double dg = -1.0 / ((1 + z) * (1 + z));
  if (j == 0 || z <= j) return {g, g * dg};
  if (z >= j + 1.0 / j) return {0.0, 0.0};
  return taper(z, j, g, dg);
}

using ProfileFn = Profile (*)(double, int);

// 2 pi int rho sqrt(1 + rho'^2) dz = 2 pi int sqrt(rho^2 + (rho rho')^2) dz.
double area(ProfileFn f, int j, double a, double b) {
  if (!(b > a)) return 0.0;
  auto integrand = [&](double z) {
    const Profile p = f(z, j);
    return std::hypot(p.rho, p.rho_drho);
  };
  boost::math::quadrature::tanh_sinh<double> q;
  // Long intervals are cut at doubling points so each piece stays well resolved.
  double total = 0.0, lo = a;
  while (lo < b) {
    const double hi = std::min(b, std::max(lo + 1.0, 2 * lo));
    total += q.integrate(integrand, lo, hi, 1e-13);
    lo = hi;
  }
  return 2 * pi * total;
}

// Area over the taper [j, j + 1/j], integrated in t = j(z - j) so that large j
// does not lose the offset z - j to rounding.
double taper_area(ProfileFn f, int j) {
  const double jj = j;
  auto integrand = [&](double t) {
    const double z = jj + t / jj;
    const Profile base = f(z, 0);
    const double g = base.rho, dg = base.rho_drho / base.rho;
    const double c = std::cos(pi * t / 2), sn = std::sin(pi * t / 2);
    const double rho = c * g;
    const double drho = -(pi * jj / 2) * sn * g + c * dg;
    return std::hypot(rho, rho * drho) / jj;
  };
  boost::math::quadrature::tanh_sinh<double> q;
  return 2 * pi * q.integrate(integrand, 0.0, 1.0);
}

double area_to_infinity(ProfileFn f, double a) {
  auto integrand = [&](double s) {
    const Profile p = f(a + s, 0);
    return std::hypot(p.rho, p.rho_drho);
  };
  boost::math::quadrature::exp_sinh<double> q;
  return 2 * pi * q.integrate(integrand, 1e-13);
}

// ---- shared pieces of the cancelling and doubling sequences ----

struct CancelTerms {
  double n_points = 1;
  double r = 0, delta = 0, eps_bar = 0, diam = 0, eps = 0, bound = 0, mass = 0, boundary_length = 0;
};

CancelTerms cancel_terms(double vol, double diam0, double injrad, double cover, int j) {
  CancelTerms c;
  const double side = std::max(1, j / 4);
  c.n_points = side * side;
  c.r = std::min({1.0 / (static_cast<double>(j) * j), 1.0 / j, injrad / 2});
  c.boundary_length = c.n_points * 2 * pi * c.r;
  c.delta = 0.5 * std::min(1.0 / c.boundary_length, 1.0 / j);
  c.eps_bar = cover / j + c.delta + cover / j;
  c.diam = diam0 + c.eps_bar;
  c.eps = 2 * std::sqrt(c.eps_bar * c.eps_bar + c.eps_bar * c.diam);
  c.bound = (2 * vol + 2) * c.eps + vol * c.delta;
  const double holes = c.n_points * pi * c.r * c.r;
  c.mass = 2 * (vol - holes) + c.boundary_length * c.delta;
  return c;
}

// Pipe-filling bound for tubes of radius r and total length L joining
// spheres of total volume V, with D in place of pi R in the height.
double pipe_bound_d(double v, double r, double len, double d, double* h_out = nullptr) {
  const double h = std::sqrt(r * d + std::pow(pi * r / 2, 2));
  if (h_out) *h_out = h;
  return v * (r + h) + sphere_volume(2, r) * len / 2 + sphere_volume(1, r) * len * h;
}

}  // namespace

// ---------------------------------------------------------------------------

StudyParams parse_study_params(const std::string& text) {
  StudyParams out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError("parameter '" + item + "' is not of the form k=v");
    const std::string key = item.substr(0, eq), val = item.substr(eq + 1);
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(val, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != val.size()) throw ParseError("parameter '" + key + "' has non-numeric value '" + val + "'");
    out[key] = v;
  }
  return out;
}

std::string to_string(LimitBehavior b) {
  switch (b) {
    case LimitBehavior::ToZero: return "to_zero";
    case LimitBehavior::BoundedBelow: return "bounded_below";
    case LimitBehavior::Diverges: return "diverges";
    case LimitBehavior::Constant: return "constant";
    case LimitBehavior::Unspecified: return "unspecified";
  }
  return "unspecified";
}

double StudyRow::aux_value(const std::string& name) const {
  for (const auto& a : aux) {
    if (a.name == name) return a.value;
  }
  throw std::out_of_range("no aux column " + name);
}

double ExampleStudy::parameter(const std::string& n) const {
  for (const auto& p : parameters) {
    if (p.name == n) return p.value;
  }
  throw std::out_of_range("no parameter " + n);
}

bool ExampleStudy::hypotheses_hold() const {
  return std::all_of(hypotheses.begin(), hypotheses.end(), [](const Hypothesis& h) { return h.holds; });
}

// ---------------------------------------------------------------------------

ExampleStudy one_hair(const StudyParams& user, const StudyRange& range) {
  Params p("one-hair", user, {{"r_exp", 6.0}, {"vol_coef", 2.0}, {"hair_length", 1.0}});
  ExampleStudy s;
  s.name = "one-hair";
  s.parameters = p.list();
  s.dF_limit = LimitBehavior::ToZero;
  s.mass_limit = LimitBehavior::BoundedBelow;
  s.documented_j = 25;
  s.note = "M_0 unit round sphere, r_j = j^-r_exp, Vol(V_j) = vol_coef/j^2; the GH column keeps the hair";
  require(s, "r_j->0", "r_exp > 0", p["r_exp"] > 0);
  require(s, "Vol(V_j)->0", "vol_coef >= 0", p["vol_coef"] >= 0);
  require(s, "hair", "hair_length >= 0", p["hair_length"] >= 0);
  const double re = p["r_exp"], vc = p["vol_coef"], hair = p["hair_length"];
  run_rows(s, range, [=](int j) {
    const double r = std::pow(static_cast<double>(j), -re);
    const double vol_u = 4 * pi - cap_area(r);
    const double vv = vc / (static_cast<double>(j) * j);
    const double vv0 = cap_area(r);
    const double h = bridge_height(pi * std::sin(r), pi + pi * std::sin(r));
    const double h0 = bridge_height(2 * r, pi);
    auto [flat, gh] = bridge_filling_bound({.vol_u1 = vol_u, .h1 = h, .h2 = h0, .mass_a1 = vv, .mass_a2 = vv0,
                                            .diam_v1 = 2 * hair + pi * std::sin(r), .diam_v2 = 2 * r});
    return make_row(j, flat, gh, vol_u + vv,
                    {{"r", r, "length"}, {"h", h, "length"}, {"h_prime", h0, "length"},
                     {"vol_U", vol_u, "volume"}, {"vol_V", vv, "volume"}, {"vol_V_prime", vv0, "volume"}},
                    r < pi);
  });
  return s;
}

ExampleStudy bumpy_hair(const StudyParams& user, const StudyRange& range) {
  Params p("bumpy-hair", user, {{"r_exp", 6.0}, {"v0", 1.0}, {"tube_radius_coef", 1.0}});
  ExampleStudy s;
  s.name = "bumpy-hair";
  s.parameters = p.list();
  s.dF_limit = LimitBehavior::ToZero;
  s.mass_limit = LimitBehavior::BoundedBelow;
  s.note = "V_j lies within distance rho_j = tube_radius_coef/j of a unit segment with Vol(V_j) = v0 (1 + 1/j); "
           "its filling is the straight-line homotopy to the segment";
  require(s, "r_j->0", "r_exp > 0", p["r_exp"] > 0);
  require(s, "Vol(V_j)>=V_0>0", "v0 > 0", p["v0"] > 0);
  require(s, "V_j->segment", "tube_radius_coef > 0", p["tube_radius_coef"] > 0);
  const double re = p["r_exp"], v0 = p["v0"], tc = p["tube_radius_coef"];
  run_rows(s, range, [=](int j) {
    const double r = std::pow(static_cast<double>(j), -re);
    const double rho = tc / j;
    const double vol_u = 4 * pi - cap_area(r);
    const double vv = v0 * (1 + 1.0 / j);
    const double h = bridge_height(pi * std::sin(r), pi + pi * std::sin(r));
    const double h0 = bridge_height(2 * r, pi);
    const double mb = rho * vv;
    const double ma = rho * 2 * pi * std::sin(r);
    auto [flat, gh] = bridge_filling_bound(
        {.vol_u1 = vol_u, .h1 = h, .h2 = h0, .mass_b1 = mb, .mass_a1 = ma, .mass_a2 = cap_area(r)});
    flat.note = "B_j, A_j from the homotopy to the segment: M(B_j) <= rho Vol(V_j), M(A_j) <= rho L(boundary V_j)";
    return make_row(j, flat, no_gh(kNaN, "GH limit is the sphere with a segment"), vol_u + vv,
                    {{"r", r, "length"}, {"rho", rho, "length"}, {"h", h, "length"}, {"h_prime", h0, "length"},
                     {"mass_B", mb, "volume"}, {"mass_A", ma, "volume"}});
  });
  return s;
}

ExampleStudy hairy_sphere(const StudyParams& user, const StudyRange& range) {
  Params p("hairy-sphere", user,
           {{"a_N", 1.0}, {"p_N", 1.0}, {"a_R", 1.0}, {"p_R", -3.0}, {"a_v", 1.0}, {"p_v", -1.0},
            {"diam", pi + 2}});
  ExampleStudy s;
  s.name = "hairy-sphere";
  s.parameters = p.list();
  s.dF_limit = LimitBehavior::ToZero;
  s.mass_limit = LimitBehavior::BoundedBelow;
  s.documented_j = 0;
  s.note = "N_j = round(a_N j^p_N), R_j = a_R j^p_R, v_j = a_v j^p_v; dF_bound sums the per-bump bounds, "
           "aux 'displayed' is the summed form without the factor N_j";
  require(s, "N_j*sqrt(R_j)->0", "p_N + p_R/2 < 0", p["p_N"] + p["p_R"] / 2 < 0);
  require(s, "R_j->0", "p_R < 0", p["p_R"] < 0);
  require(s, "v_j->0", "p_v < 0", p["p_v"] < 0);
  require(s, "positive coefficients", "a_N, a_R, a_v, diam > 0",
          p["a_N"] > 0 && p["a_R"] > 0 && p["a_v"] > 0 && p["diam"] > 0);
  const double an = p["a_N"], pn = p["p_N"], ar = p["a_R"], pr = p["p_R"], av = p["a_v"], pv = p["p_v"],
               d = p["diam"];
  run_rows(s, range, [=](int j) {
    const double jj = j;
    const double n = std::max(1.0, std::round(an * std::pow(jj, pn)));
    const double r = ar * std::pow(jj, pr);
    const double v = av * std::pow(jj, pv);
    const double h = std::sqrt(pi * r * (d + pi * r));
    const double vol_u = 4 * pi - n * cap_area(r);
    const double step = 4 * pi * 2 * h + 2 * v / n;
    BoundReport flat = report(Quantity::FlatDistance, n * step, "N_j * (4 pi * 2 h_j + 2 v_j / N_j)",
                              {{"N", n, ""}, {"R", r, "length"}, {"v", v, "volume"}, {"h", h, "length"},
                               {"diam", d, "length"}},
                              "hairy-sphere-telescoped");
    const double displayed = vol_u * 2 * h + 2 * v;
    const bool ok = r < pi && n * cap_area(r) <= 4 * pi && cap_area(r) <= v / n;
    return make_row(j, flat, no_gh(kNaN, "hairs keep the GH distance away from zero"), vol_u + v,
                    {{"N", n, ""}, {"R", r, "length"}, {"v", v, "volume"}, {"h", h, "length"},
                     {"N_sqrt_R", n * std::sqrt(r), ""}, {"displayed", displayed, "volume"}},
                    ok);
  });
  return s;
}

ExampleStudy cone(const StudyParams& user, const StudyRange& range) {
  Params p("cone", user, {{"lip_coef", 1.0}});
  ExampleStudy s;
  s.name = "cone";
  s.parameters = p.list();
  s.dF_limit = LimitBehavior::ToZero;
  s.mass_limit = LimitBehavior::BoundedBelow;
  s.note = "M_0 = unit-radius, unit-height cone with its base disk; M_j smooths the tip with d_L <= ln(1 + lip_coef/j); "
           "mass column is the upper bound lambda^2 Vol(M_0)";
  require(s, "d_L->0", "lip_coef > 0", p["lip_coef"] > 0);
  const double a = p["lip_coef"];
  const double vol0 = pi + pi * std::sqrt(2.0);
  const double diam0 = 2 + std::sqrt(2.0);
  run_rows(s, range, [=](int j) {
    const double dl = std::log1p(a / j);
    const double lambda = 1 + a / j;
    BoundReport flat = lipschitz_convergence_bound(diam0, lambda * diam0, vol0, 0.0, 2, dl);
    BoundReport gh = report(Quantity::GromovHausdorff, (lambda - 1) * lambda * diam0 / 2,
                            "(lambda - 1) lambda diam / 2", {{"lambda", lambda, ""}, {"diam", diam0, "length"}},
                            "bilipschitz-gh");
    return make_row(j, flat, gh, lambda * lambda * vol0, {{"d_L", dl, ""}, {"lambda", lambda, ""}});
  });
  return s;
}

ExampleStudy cusp(const StudyParams& user, const StudyRange& range) {
  Params p("cusp", user, {{"cusp_power", 2.0}});
  ExampleStudy s;
  s.name = "cusp";
  s.parameters = p.list();
  s.dF_limit = LimitBehavior::ToZero;
  s.mass_limit = LimitBehavior::BoundedBelow;
  s.note = "M_inf: radius z^cusp_power for z in [0,1] closed by the unit disk at z = 1; M_j replaces z < 1/j by a "
           "flat disk; the cusp point has zero density and is not in the limit space";
  require(s, "cusp", "cusp_power > 1", p["cusp_power"] > 1);
  const double k = p["cusp_power"];
  auto rho = [k](double z) { return std::pow(z, k); };
  auto band = [k](double a, double b) {
    boost::math::quadrature::tanh_sinh<double> q;
    return 2 * pi * q.integrate([k](double z) {
      const double r = std::pow(z, k);
      return r * std::sqrt(1 + std::pow(k * std::pow(z, k - 1), 2));
    }, a, b, 1e-13);
  };
  boost::math::quadrature::tanh_sinh<double> q;
  const double meridian = q.integrate([k](double z) { return std::sqrt(1 + std::pow(k * std::pow(z, k - 1), 2)); },
                                      0.0, 1.0, 1e-13);
  const double diam = 2 * (meridian + 1);
  run_rows(s, range, [=](int j) {
    const double z = 1.0 / j;
    const double vol_u = (j == 1 ? 0.0 : band(z, 1.0)) + pi;
    const double vol_inf = j == 1 ? band(1e-300, 1.0) : band(1e-300, z);
    const double vol_vj = pi * rho(z) * rho(z);
    const double dd = pi * rho(z);
    const double h = std::sqrt(dd * (diam + dd));
    BoundReport flat = report(Quantity::FlatDistance, vol_u * h + vol_vj + vol_inf,
                              "Vol(U_j) h_j + Vol(V_j) + Vol(V_inf)",
                              {{"vol_U", vol_u, "volume"}, {"h", h, "length"}, {"vol_V", vol_vj, "volume"},
                               {"vol_V_inf", vol_inf, "volume"}, {"diam", diam, "length"}},
                              "cusp-bridge");
    const double diam_vj = 2 * rho(z), diam_vinf = 2 * z * std::sqrt(1 + k * k);
    BoundReport gh = report(Quantity::GromovHausdorff, h + diam_vj + diam_vinf, "h_j + diam(V_j) + diam(V_inf)",
                            {{"h", h, "length"}, {"diam_V", diam_vj, "length"}, {"diam_V_inf", diam_vinf, "length"}},
                            "bridge-filling");
    return make_row(j, flat, gh, vol_u + vol_vj, {{"h", h, "length"}, {"vol_V_inf", vol_inf, "volume"}});
  });
  return s;
}

ExampleStudy horn_unbounded(const StudyParams& user, const StudyRange& range) {
  Params p("horn-unbounded", user, {});
  ExampleStudy s;
  s.name = "horn-unbounded";
  s.parameters = p.list();
  s.dF_limit = LimitBehavior::ToZero;
  s.mass_limit = LimitBehavior::BoundedBelow;
  s.note = "radius 1/(1+z)^2 for z >= 0, truncated by a cosine taper on [j, j+1/j]; diam(M_j) -> inf so the GH "
           "column is inf";
  const double vol0 = area_to_infinity(&horn_at, 0.0);
  run_rows(s, range, [=](int j) {
    const double vol_u = area(&horn_at, j, 0.0, j);
    const double vol_v = taper_area(&horn_at, j);
    const double vol_v0 = area_to_infinity(&horn_at, j);
    const double rj = horn_profile(j, 0);
    const double h = bridge_height(pi * rj, 2.0 * (j + 1) + pi);
    auto [flat, gh] = bridge_filling_bound({.vol_u1 = vol_u, .h1 = h, .h2 = h, .mass_a1 = vol_v, .mass_a2 = vol_v0});
    const double displayed = std::sqrt(pi / std::pow(1.0 + j, 4) * (2 * (2.0 * j) + pi / std::pow(1.0 + j, 4)));
    return make_row(j, flat, no_gh(kInf, "diam(M_j) -> inf"), vol_u + vol_v,
                    {{"h", h, "length"}, {"h_displayed", displayed, "length"}, {"vol_U", vol_u, "volume"},
                     {"vol_V", vol_v, "volume"}, {"vol_V_prime", vol_v0, "volume"}, {"vol_M0", vol0, "volume"}});
  });
  return s;
}

ExampleStudy many_tips(const StudyParams& user, const StudyRange& range) {
  Params p("many-tips", user, {{"eps0", pi / 4}, {"tip_height", 1.0}});
  ExampleStudy s;
  s.name = "many-tips";
  s.parameters = p.list();
  s.dF_limit = LimitBehavior::ToZero;
  s.mass_limit = LimitBehavior::BoundedBelow;
  s.note = "eps_i = eps0 2^-i, r_i = eps_i/4, Vol(N_i) = 2^-i; aux packing_half is the exact packing number at r = 1/2 "
           "of the tip ends of the limit graph (j <= 29)";
  require(s, "disjoint balls", "0 < eps0 <= pi/2", p["eps0"] > 0 && p["eps0"] <= pi / 2);
  require(s, "diam(N_i)<=2", "0 < tip_height <= 1", p["tip_height"] > 0 && p["tip_height"] <= 1);
  const double e0 = p["eps0"], th = p["tip_height"];
  run_rows(s, range, [=](int j) {
    const double eps = e0 * std::ldexp(1.0, -j);
    const double sr = 0.75 * eps;
    double mass = 4 * pi, tips = 0.0;
    for (int i = 1; i <= j; ++i) {
      mass -= cap_area(e0 * std::ldexp(1.0, -i) / 4);
      tips += std::ldexp(1.0, -i);
    }
    mass += tips;
    const double h = bridge_height(pi * std::sin(sr), pi + 2);
    const double vol_v = pi * sr * sr;
    const double tail = std::ldexp(1.0, -j);
    auto [flat, gh] = bridge_filling_bound({.vol_u1 = mass, .h1 = h, .h2 = h, .mass_a1 = vol_v, .mass_a2 = tail});
    double packing = kNaN;
    if (j <= 29) {
      // Tip ends over the points p_i on one geodesic, joined through the sphere.
      MetricGraph g;
      std::vector<std::size_t> base, ends;
      for (int i = 1; i <= j; ++i) {
        base.push_back(g.add_vertex());
        ends.push_back(g.add_vertex());
        g.add_edge(base.back(), ends.back(), th);
      }
      for (int i = 1; i < j; ++i) g.add_edge(base[i - 1], base[i], e0 * std::ldexp(1.0, -(i + 1)));
      auto sub = length_metric(g).subspace(ends);
      packing = static_cast<double>(packing_number(sub, 0.5 * th).count);
    }
    return make_row(j, flat, no_gh(kNaN, "limit is not precompact"), mass,
                    {{"eps", eps, "length"}, {"h", h, "length"}, {"tail", tail, "volume"},
                     {"packing_half", packing, ""}});
  });
  return s;
}

ExampleStudy two_spheres_pipe(const StudyParams& user, const StudyRange& range) {
  Params p("two-spheres-pipe", user, {});
  ExampleStudy s;
  s.name = "two-spheres-pipe";
  s.parameters = p.list();
  s.dF_limit = LimitBehavior::ToZero;
  s.mass_limit = LimitBehavior::BoundedBelow;
  s.documented_j = 0;
  s.note = "unit spheres joined by a pipe of radius 1/j and length 2; bound is Vol(Z'_j)";
  run_rows(s, range, [=](int j) {
    const double r = 1.0 / j;
    PipeFill pf = pipe_fill(2, {1.0, 1.0}, {{r, 2.0, 0, 1}});
    pf.gh.value = pi / (2.0 * j) + pf.h;
    pf.gh.formula = "pi/(2j) + h_j";
    const double c = std::sqrt(1 - r * r);
    const double mass = 2 * (4 * pi - 2 * pi * (1 - c)) + 2 * pi * r * (4 - 2 * c);
    return make_row(j, pf.flat, pf.gh, mass, {{"h", pf.h, "length"}});
  });
  return s;
}

ExampleStudy sphere_fractal(const StudyParams& user, const StudyRange& range) {
  Params p("sphere-fractal", user, {{"R0", 0.1}, {"L0", 1.0}, {"eps_L_fraction", 0.5}});
  ExampleStudy s;
  s.name = "sphere-fractal";
  s.parameters = p.list();
  s.dF_limit = LimitBehavior::ToZero;
  s.mass_limit = LimitBehavior::BoundedBelow;
  s.note = "N_0 = four spheres of radius R0; n_j = 5^(j+1) - 1 spheres, L_j = (n_j - 1) L0, eps_j L_j = "
           "eps_L_fraction / j; dF_bound = pipe filling to N_j plus the tail mass to N_inf";
  require(s, "eps_j L_j < 1/j", "0 < eps_L_fraction < 1", p["eps_L_fraction"] > 0 && p["eps_L_fraction"] < 1);
  require(s, "R0 <= 1", "0 < R0 <= 1", p["R0"] > 0 && p["R0"] <= 1);
  require(s, "L0 > 0", "L0 > 0", p["L0"] > 0);
  const double r0 = p["R0"], l0 = p["L0"], frac = p["eps_L_fraction"];
  const double v0 = 4 * sphere_volume(2, r0);
  run_rows(s, range, [=](int j) {
    double vol_n = 0.0;
    for (int i = 0; i <= j; ++i) vol_n += std::pow(5.0 / 9.0, i) * v0;
    const double n = std::pow(5.0, j + 1) - 1;
    const double len = (n - 1) * l0;
    const double eps = frac / (j * len);
    const double vbig = 9.0 / 4.0 * v0;
    const double h = std::sqrt(pi * eps + std::pow(pi * eps / 2, 2));
    const double pipe = vbig * (eps + h) + sphere_volume(2, eps) * len / 2 + sphere_volume(1, eps) * len * h;
    const double tail = std::pow(5.0 / 9.0, j + 1) * 9.0 / 4.0 * v0;
    BoundReport flat = report(Quantity::FlatDistance, pipe + tail,
                              "V(r+h) + Vol_2(S^2_r) L/2 + Vol_1(S^1_r) L h + (5/9)^(j+1) (9/4) Vol(N_0)",
                              {{"r", eps, "length"}, {"L", len, "length"}, {"V", vbig, "volume"}, {"h", h, "length"}},
                              "pipe-filling");
    BoundReport gh = report(Quantity::GromovHausdorff, pi * eps + h + r0 / std::pow(3.0, j), "pi r + h + R_0/3^j",
                            {{"r", eps, "length"}, {"h", h, "length"}}, "pipe-filling");
    return make_row(j, flat, gh, vol_n + 2 * pi * eps * len,
                    {{"vol_N", vol_n, "volume"}, {"eps", eps, "length"}, {"L", len, "length"}, {"tail", tail, "volume"}});
  });
  return s;
}

ExampleStudy tori_collapse(const StudyParams& user, const StudyRange& range) {
  Params p("tori-collapse", user, {{"L1_coef", pi}, {"L2", 1.0}});
  ExampleStudy s;
  s.name = "tori-collapse";
  s.parameters = p.list();
  s.dF_limit = LimitBehavior::ToZero;
  s.mass_limit = LimitBehavior::ToZero;
  s.documented_j = 315;
  s.note = "circumferences L1_j = L1_coef/j and L2; dF(M_j, 0) <= Vol(M_j)";
  require(s, "collapse", "L1_coef > 0 and L2 > 0", p["L1_coef"] > 0 && p["L2"] > 0);
  const double a = p["L1_coef"], l2 = p["L2"];
  run_rows(s, range, [=](int j) {
    const double l1 = a / j;
    BoundReport flat = trivial_bound(l1 * l2, 0.0);
    BoundReport gh = report(Quantity::GromovHausdorff, a / (2.0 * j), "L1_j / 2", {{"L1", l1, "length"}}, "torus-collapse");
    return make_row(j, flat, gh, l1 * l2, {{"L1", l1, "length"}});
  });
  return s;
}

ExampleStudy jungle_gym(const StudyParams& user, const StudyRange& range) {
  Params p("jungle-gym", user, {{"A0", 1.0}});
  ExampleStudy s;
  s.name = "jungle-gym";
  s.parameters = p.list();
  s.dF_limit = LimitBehavior::ToZero;
  s.mass_limit = LimitBehavior::Constant;
  s.documented_j = 4;
  s.note = "R_j chosen with equality 2^(3j) (4/3) pi R_j^2 = A0; sphere area stays 3 A0";
  require(s, "A0 > 0", "A0 > 0", p["A0"] > 0);
  const double a0 = p["A0"];
  run_rows(s, range, [=](int j) {
    const double log_count = 3 * j * std::log(2.0);
    const double log_r = 0.5 * (std::log(a0) - log_count - std::log(4.0 / 3.0 * pi));
    const double r = std::exp(log_r);
    const double bound = std::exp(std::log(5.0 / 8.0 * pi) + log_count + 3 * log_r);
    BoundReport flat = report(Quantity::FlatDistance, bound, "sum over 2^(3j) spheres of (5/8) pi R_j^3",
                              {{"R", r, "length"}, {"A0", a0, "volume"}}, "hemisphere-filling");
    const double mass = std::exp(log_count + std::log(4 * pi) + 2 * log_r);
    return make_row(j, flat, no_gh(kNaN, "GH limit is the taxicab cube"), mass,
                    {{"R", r, "length"}, {"A0_R", a0 * r, "volume"}}, bound <= a0 * r);
  });
  return s;
}

namespace {
StudyParams torus_defaults() {
  return {{"vol", 1.0}, {"diam", std::sqrt(2.0) / 2}, {"injrad", 0.5}, {"cover", 10.0}};
}
}  // namespace

ExampleStudy cancellation(const StudyParams& user, const StudyRange& range) {
  Params p("cancellation", user, torus_defaults());
  ExampleStudy s;
  s.name = "cancellation";
  s.parameters = p.list();
  s.dF_limit = LimitBehavior::ToZero;
  s.mass_limit = LimitBehavior::BoundedBelow;
  s.note = "M_0 = flat unit torus; p_i on a floor(j/4)^2 square grid, r_j = 1/j^2, delta_j half its upper limit";
  require(s, "M_0 data", "vol, diam, injrad, cover > 0",
          p["vol"] > 0 && p["diam"] > 0 && p["injrad"] > 0 && p["cover"] > 0);
  const double vol = p["vol"], diam = p["diam"], inj = p["injrad"], cover = p["cover"];
  run_rows(s, range, [=](int j) {
    const CancelTerms c = cancel_terms(vol, diam, inj, cover, j);
    BoundReport flat = report(Quantity::FlatDistance, c.bound, "(2 Vol(M_0) + 2) eps_j + Vol(M_0) delta_j",
                              {{"eps", c.eps, "length"}, {"eps_bar", c.eps_bar, "length"}, {"delta", c.delta, "length"},
                               {"vol", vol, "volume"}, {"diam_Mj", c.diam, "length"}},
                              "cancellation-filling");
    BoundReport gh = report(Quantity::GromovHausdorff, c.eps_bar, "eps_bar_j", {{"eps_bar", c.eps_bar, "length"}},
                            "cancellation-sheets");
    return make_row(j, flat, gh, c.mass,
                    {{"N", c.n_points, ""}, {"r", c.r, "length"}, {"delta", c.delta, "length"},
                     {"eps_bar", c.eps_bar, "length"}, {"eps", c.eps, "length"}});
  });
  return s;
}

ExampleStudy doubling(const StudyParams& user, const StudyRange& range) {
  Params p("doubling", user, torus_defaults());
  ExampleStudy s;
  s.name = "doubling";
  s.parameters = p.list();
  s.dF_limit = LimitBehavior::ToZero;
  s.mass_limit = LimitBehavior::BoundedBelow;
  s.note = "same data as cancellation with the tubes reglued; dF_bound = pipe(N_j) + pipe(M_j) + cancellation bound, "
           "limit is (M_0, d_0, 2 T_0)";
  require(s, "M_0 data", "vol, diam, injrad, cover > 0",
          p["vol"] > 0 && p["diam"] > 0 && p["injrad"] > 0 && p["cover"] > 0);
  const double vol = p["vol"], diam = p["diam"], inj = p["injrad"], cover = p["cover"];
  const double limit_mass = mass(doubling_limit(4)) * vol;
  run_rows(s, range, [=](int j) {
    const CancelTerms c = cancel_terms(vol, diam, inj, cover, j);
    double h = 0.0;
    const double pipe = pipe_bound_d(2 * vol, c.r, c.n_points * c.delta, c.diam, &h);
    BoundReport flat = report(Quantity::FlatDistance, 2 * pipe + c.bound,
                              "dF(N_j, X_j T_j) + dF(M_j, X_j S_j) + dF(M_j, 0)",
                              {{"pipe", pipe, "volume"}, {"cancel", c.bound, "volume"}, {"h", h, "length"}},
                              "doubling-chain");
    BoundReport gh = report(Quantity::GromovHausdorff, pi * c.r + h + c.delta, "pi r + h + delta_j",
                            {{"r", c.r, "length"}, {"h", h, "length"}}, "pipe-filling");
    return make_row(j, flat, gh, c.mass,
                    {{"pipe", pipe, "volume"}, {"cancel", c.bound, "volume"}, {"limit_mass", limit_mass, "volume"}});
  });
  return s;
}

ExampleStudy taxicab(const StudyParams& user, const StudyRange& range) {
  Params p("taxicab", user, {});
  ExampleStudy s;
  s.name = "taxicab";
  s.parameters = p.list();
  s.dF_limit = LimitBehavior::ToZero;
  s.mass_limit = LimitBehavior::Constant;
  s.note = "X_j: five-sided cubes over the 1/2^j grid; M_0 from flat_norm_exact on the unit cluster; "
           "dF_bound sums the Cauchy column from j on";
  const double m0 = taxicab_filling_constant();
  run_rows(s, range, [=](int j) {
    const double cauchy = m0 / std::ldexp(1.0, j);
    BoundReport flat = report(Quantity::FlatDistance, 2 * cauchy, "sum_{i>=j} M_0/2^i",
                              {{"M0", m0, "volume"}}, "taxicab-cauchy");
    BoundReport gh = report(Quantity::GromovHausdorff, 3 / std::ldexp(1.0, j), "2/2^j + 1/2^j", {}, "taxicab-grid");
    return make_row(j, flat, gh, 5.0, {{"cauchy", cauchy, "volume"}, {"M0", m0, "volume"}});
  });
  return s;
}

ExampleStudy dense_support(const StudyParams& user, const StudyRange& range) {
  Params p("dense-support", user, {{"shrink", 0.5}});
  ExampleStudy s;
  s.name = "dense-support";
  s.parameters = p.list();
  s.dF_limit = LimitBehavior::Unspecified;
  s.mass_limit = LimitBehavior::BoundedBelow;
  s.note = "level-j centres are the new points of the 2^-(j+1) lattice in (0,1)^3; radii take 'shrink' times the "
           "largest value meeting the area, diameter and disjointness budgets; the closure of the limit is the "
           "solid cube (dimension 3), which is documented, not computed; no dF bound is computed";
  require(s, "strict budgets", "0 < shrink < 1", p["shrink"] > 0 && p["shrink"] < 1);
  const double shrink = p["shrink"];
  run_rows(s, range, [=](int j) {
    double total_area = 0.0;
    double nj = 0.0, rj = 0.0, diam_sum = 0.0;
    bool ok = true;
    for (int i = 1; i <= j; ++i) {
      const double a = std::ldexp(1.0, i + 1) - 1, b = std::ldexp(1.0, i) - 1;
      nj = a * a * a - b * b * b;
      rj = shrink * std::min({std::sqrt(std::ldexp(1.0, -(i + 1)) / (4 * pi * nj)), std::ldexp(1.0, -i) / (pi * nj),
                              std::ldexp(1.0, -(i + 3))});
      total_area += nj * 4 * pi * rj * rj;
      diam_sum = nj * pi * rj;
      ok = ok && diam_sum < std::ldexp(1.0, -i) && total_area < 1;
    }
    return make_row(j, no_bound(Quantity::FlatDistance, kNaN, "not computed"), no_gh(kNaN, "not computed"), total_area,
                    {{"n", nj, ""}, {"r", rj, "length"}, {"diam_sum", diam_sum, "length"},
                     {"closure_dimension", 3.0, ""}},
                    ok);
  });
  return s;
}

ExampleStudy gabriels_horn(const StudyParams& user, const StudyRange& range) {
  Params p("gabriels-horn", user, {{"i_factor", 2.0}});
  ExampleStudy s;
  s.name = "gabriels-horn";
  s.parameters = p.list();
  s.dF_limit = LimitBehavior::ToZero;
  s.mass_limit = LimitBehavior::Diverges;
  s.note = "radius sqrt(f_j(z))/(1+z), f_j = sin z on [0,1], 1 on [1,j], cosine taper on [j, j+1/j]; row j bounds "
           "dF(M_i, M_j) with i = ceil(i_factor j) by the constant form; aux h_geometric is the bridge height from "
           "the real diameters, which does not go to zero";
  require(s, "i >= j", "i_factor >= 1", p["i_factor"] >= 1);
  const double fi = p["i_factor"];
  const GabrielConstants c = gabriel_constants();
  run_rows(s, range, [=](int j) {
    const double jj = j;
    const int i = static_cast<int>(std::ceil(fi * jj));
    const double lnj = std::log(std::max(jj, 2.0));
    const double bound = c.c5 * lnj * 2 * c.c4 / jj + c.c3 / jj + (c.c1 + c.c2) / (jj * jj);
    BoundReport flat = report(Quantity::FlatDistance, bound,
                              "C5 ln j (2 C4 / j) + C3/j + C1/j^2 + C2/j^2",
                              {{"C1", c.c1, ""}, {"C2", c.c2, ""}, {"C3", c.c3, ""}, {"C4", c.c4, ""},
                               {"C5", c.c5, ""}, {"i", static_cast<double>(i), ""}},
                              "gabriel-cauchy");
    const double rj = gabriel_profile(jj, 0);
    const double vol_u = area(&gabriel_at, j, 0.0, std::min(1.0, jj)) + pi * (1 - std::sin(1.0)) / 4 +
                         area(&gabriel_at, j, 1.0, jj);
    const double h_geo = bridge_height(pi * rj, 2 * jj);
    const double mass = vol_u + taper_area(&gabriel_at, j);
    return make_row(j, flat, no_gh(kNaN, "no GH bound"), mass,
                    {{"i", static_cast<double>(i), ""}, {"vol_U1", vol_u, "volume"},
                     {"h_chain", pi / ((1 + jj) * (1 + jj)) * (2 * (2 * jj) + pi / ((1 + jj) * (1 + jj))), "length"},
                     {"h_geometric", h_geo, "length"}});
  });
  return s;
}

// ---------------------------------------------------------------------------

double gabriel_profile(double z, int j) { return gabriel_at(z, j).rho; }
double horn_profile(double z, int j) { return horn_at(z, j).rho; }

GabrielConstants gabriel_scaled(int j) {
  if (j < 1) throw DomainError("j must be >= 1");
  const double jj = j;
  GabrielConstants s;
  s.c1 = jj * jj * taper_area(&gabriel_at, j);
  const double rj = 1 / (1 + jj);
  s.c2 = jj * jj * 2 * pi * rj * rj;
  // Vol_3 of the half-solid over [j, inf) plus the largest possible taper piece.
  boost::math::quadrature::exp_sinh<double> q;
  const double body = 2 * pi * q.integrate([jj](double t) {
    const double z = jj + t;
    const double r = 1 / (1 + z);
    return r * r * std::sqrt(1 + r * r * r * r);
  }, 1e-13);
  const double taper_piece = 2 * pi * rj * rj / jj * std::sqrt(1 + std::pow(1 + pi / 2, 2));
  s.c3 = jj * (body + taper_piece);
  s.c4 = jj * (pi / ((1 + jj) * (1 + jj))) * (2 * (2 * jj) + pi / ((1 + jj) * (1 + jj)));
  if (j >= 2) {
    const double vol_u = area(&gabriel_at, j, 0.0, 1.0) + pi * (1 - std::sin(1.0)) / 4 + area(&gabriel_at, j, 1.0, jj);
    s.c5 = vol_u / std::log(jj);
  }
  return s;
}

GabrielConstants gabriel_constants() {
  static const GabrielConstants cached = [] {
    GabrielConstants c;
    std::vector<int> js;
    for (int j = 1; j <= kGabrielSupRange; ++j) js.push_back(j);
    for (int e = 11; e <= 20; ++e) js.push_back(1 << e);
    for (int j : js) {
      const GabrielConstants s = gabriel_scaled(j);
      c.c1 = std::max(c.c1, s.c1);
      c.c2 = std::max(c.c2, s.c2);
      c.c3 = std::max(c.c3, s.c3);
      c.c4 = std::max(c.c4, s.c4);
      c.c5 = std::max(c.c5, s.c5);
    }
    return c;
  }();
  return cached;
}

// ---- taxicab cluster ----

namespace {

using P3 = std::array<double, 3>;

struct ClusterBuilder {
  std::vector<std::vector<double>> positions;
  std::map<std::array<long, 3>, std::size_t> index;
  std::map<Simplex, std::int64_t> chain;

  std::size_t vertex(const P3& p) {
    std::array<long, 3> key{std::lround(p[0] * 4), std::lround(p[1] * 4), std::lround(p[2] * 4)};
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    positions.push_back({p[0], p[1], p[2]});
    return index[key] = positions.size() - 1;
  }

  // Triangle oriented so that its normal points away from `inside`, added with `sign`.
  void triangle(P3 a, P3 b, P3 c, const P3& inside, int sign) {
    P3 u{b[0] - a[0], b[1] - a[1], b[2] - a[2]}, v{c[0] - a[0], c[1] - a[1], c[2] - a[2]};
    P3 n{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
    const double dot = n[0] * (a[0] - inside[0]) + n[1] * (a[1] - inside[1]) + n[2] * (a[2] - inside[2]);
    if (dot < 0) std::swap(b, c);
    Simplex s{vertex(a), vertex(b), vertex(c)};
    const int o = orientation_sign(s);
    std::sort(s.begin(), s.end());
    chain[s] += o * sign;
  }

  // Axis-aligned square split along the diagonal through the corner nearest the cluster centre.
  void square(const std::array<P3, 4>& q, const P3& inside, int sign) {
    const P3 centre{0.5, 0.5, 0.5};
    auto d2 = [&](const P3& p) {
      return std::pow(p[0] - centre[0], 2) + std::pow(p[1] - centre[1], 2) + std::pow(p[2] - centre[2], 2);
    };
    std::size_t best = 0;
    for (std::size_t k = 1; k < 4; ++k) {
      if (d2(q[k]) < d2(q[best]) - 1e-12 || (std::abs(d2(q[k]) - d2(q[best])) <= 1e-12 && q[k] < q[best])) best = k;
    }
    const P3& a = q[best];
    const P3& b = q[(best + 1) % 4];
    const P3& c = q[(best + 2) % 4];
    const P3& d = q[(best + 3) % 4];
    triangle(a, b, c, inside, sign);
    triangle(a, c, d, inside, sign);
  }

  // Walls and top of the cube [x0, x0+s] x [y0, y0+s] x [0, s]. With `split` each
  // wall is cut at half height and its lower half at the midpoint of the base edge.
  void open_box(double x0, double y0, double s, int sign, bool split) {
    const P3 inside{x0 + s / 2, y0 + s / 2, s / 2};
    const double h = s;
    square({P3{x0, y0, h}, P3{x0 + s, y0, h}, P3{x0 + s, y0 + s, h}, P3{x0, y0 + s, h}}, inside, sign);
    const std::array<std::array<P3, 2>, 4> sides = {{{P3{x0, y0, 0}, P3{x0 + s, y0, 0}},
                                                    {P3{x0 + s, y0, 0}, P3{x0 + s, y0 + s, 0}},
                                                    {P3{x0 + s, y0 + s, 0}, P3{x0, y0 + s, 0}},
                                                    {P3{x0, y0 + s, 0}, P3{x0, y0, 0}}}};
    for (const auto& side : sides) {
      const P3 a = side[0], b = side[1];
      const P3 m{(a[0] + b[0]) / 2, (a[1] + b[1]) / 2, 0};
      auto up = [](P3 p, double z) { return P3{p[0], p[1], z}; };
      if (!split) {
        square({a, b, up(b, h), up(a, h)}, inside, sign);
        continue;
      }
      // lower half as two squares, upper half as a pentagon (three triangles)
      square({a, m, up(m, h / 2), up(a, h / 2)}, inside, sign);
      square({m, b, up(b, h / 2), up(m, h / 2)}, inside, sign);
      triangle(up(a, h / 2), up(m, h / 2), up(a, h), inside, sign);
      triangle(up(m, h / 2), up(b, h), up(a, h), inside, sign);
      triangle(up(m, h / 2), up(b, h / 2), up(b, h), inside, sign);
    }
  }
};

}  // namespace

IntegralChain taxicab_cluster_cycle() {
  ClusterBuilder b;
  b.open_box(0, 0, 1, +1, true);
  for (double x : {0.0, 0.5}) {
    for (double y : {0.0, 0.5}) b.open_box(x, y, 0.5, -1, false);
  }
  std::vector<Simplex> tris;
  std::vector<std::int64_t> coeffs;
  for (const auto& [s, c] : b.chain) {
    tris.push_back(s);
    coeffs.push_back(c);
  }
  // Cone from the centre of the base of the slab over its top and upper walls.
  const std::size_t apex = b.vertex({0.5, 0.5, 0.5});
  std::vector<Simplex> tets;
  for (std::size_t k = 0; k < tris.size(); ++k) {
    if (coeffs[k] == 0) continue;
    const auto& t = tris[k];
    if (std::find(t.begin(), t.end(), apex) != t.end()) continue;
    Simplex tet{apex, t[0], t[1], t[2]};
    std::sort(tet.begin(), tet.end());
    tets.push_back(tet);
  }
  auto complex = SimplicialComplex::from_positions(b.positions, 2, {{2, tris}, {3, tets}});
  IntegralChain out(complex, 2);
  std::vector<std::int64_t> full(complex->count(2), 0);
  for (std::size_t k = 0; k < tris.size(); ++k) {
    auto ref = complex->find(tris[k]);
    full[ref->index] += ref->sign * coeffs[k];
  }
  return IntegralChain(complex, 2, full);
}

double taxicab_filling_constant() {
  static const double cached = [] {
    const IntegralChain t = taxicab_cluster_cycle();
    const FlatProblem p = make_flat_problem(t);
    return flat_norm_exact(p, 1, p.cols() + p.rows()).value;
  }();
  return cached;
}

IntegralChain doubling_limit(std::size_t n) {
  if (n < 3) throw DomainError("torus grid needs n >= 3");
  const std::size_t nv = n * n;
  std::vector<double> d(nv * nv, 0.0);
  auto wrap = [n](long a) { return static_cast<double>(std::min<long>(a, static_cast<long>(n) - a)); };
  for (std::size_t a = 0; a < nv; ++a) {
    for (std::size_t b = 0; b < nv; ++b) {
      const long dx = std::labs(static_cast<long>(a % n) - static_cast<long>(b % n));
      const long dy = std::labs(static_cast<long>(a / n) - static_cast<long>(b / n));
      d[a * nv + b] = std::hypot(wrap(dx), wrap(dy)) / static_cast<double>(n);
    }
  }
  auto id = [n](std::size_t x, std::size_t y) { return (y % n) * n + (x % n); };
  std::vector<Simplex> tris;
  for (std::size_t y = 0; y < n; ++y) {
    for (std::size_t x = 0; x < n; ++x) {
      tris.push_back({id(x, y), id(x + 1, y), id(x + 1, y + 1)});
      tris.push_back({id(x, y), id(x + 1, y + 1), id(x, y + 1)});
    }
  }
  auto c = SimplicialComplex::closure(FiniteMetricSpace::trusted(nv, std::move(d)), 2, {{2, tris}});
  std::vector<std::int64_t> coeff(c->count(2), 0);
  for (const auto& t : tris) {
    auto ref = c->find(t);
    coeff[ref->index] = 2 * ref->sign;
  }
  return IntegralChain(c, 2, coeff);
}

// ---------------------------------------------------------------------------

namespace {

using Generator = ExampleStudy (*)(const StudyParams&, const StudyRange&);

const std::vector<std::pair<std::string, Generator>>& registry() {
  static const std::vector<std::pair<std::string, Generator>> r = {
      {"one-hair", &one_hair},
      {"bumpy-hair", &bumpy_hair},
      {"hairy-sphere", &hairy_sphere},
      {"cone", &cone},
      {"cusp", &cusp},
      {"horn-unbounded", &horn_unbounded},
      {"many-tips", &many_tips},
      {"two-spheres-pipe", &two_spheres_pipe},
      {"sphere-fractal", &sphere_fractal},
      {"tori-collapse", &tori_collapse},
      {"jungle-gym", &jungle_gym},
      {"cancellation", &cancellation},
      {"doubling", &doubling},
      {"taxicab", &taxicab},
      {"dense-support", &dense_support},
      {"gabriels-horn", &gabriels_horn},
  };
  return r;
}

Generator find_generator(const std::string& name) {
  const std::string c = canonical_study_name(name);
  for (const auto& [n, g] : registry()) {
    if (n == c) return g;
  }
  throw DomainError("unknown study '" + name + "'");
}

}  // namespace

std::vector<std::string> study_names() {
  std::vector<std::string> out;
  for (const auto& [n, g] : registry()) out.push_back(n);
  return out;
}

std::string canonical_study_name(const std::string& name) {
  std::string c;
  for (char ch : name) c += ch == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (c == "cone-and-cusp") return "cusp";
  if (c == "tori") return "tori-collapse";
  return c;
}

StudyParams study_defaults(const std::string& name) {
  const ExampleStudy s = find_generator(name)({}, {1, 1, 1});
  StudyParams out;
  for (const auto& p : s.parameters) out[p.name] = p.value;
  return out;
}

ExampleStudy convergence_study(const std::string& name, const StudyParams& params, const StudyRange& range) {
  return find_generator(name)(params, range);
}

LimitCheck check_limits(const ExampleStudy& s) {
  LimitCheck out;
  if (s.rows.size() < 2) return out;
  auto check = [&](LimitBehavior b, auto get, const char* col, bool& ok) {
    const double first = get(s.rows.front()), last = get(s.rows.back());
    double lo = kInf, hi = -kInf;
    for (const auto& r : s.rows) {
      lo = std::min(lo, get(r));
      hi = std::max(hi, get(r));
    }
    switch (b) {
      case LimitBehavior::ToZero: ok = last < first && last >= 0; break;
      case LimitBehavior::BoundedBelow: ok = last > 0 && lo >= 0.5 * last; break;
      case LimitBehavior::Diverges: ok = last > first; break;
      case LimitBehavior::Constant: ok = hi - lo <= 1e-9 * std::max(1.0, std::abs(first)); break;
      case LimitBehavior::Unspecified: ok = true; break;
    }
    if (!ok) out.detail += std::string(col) + " does not show " + to_string(b) + "; ";
  };
  check(s.dF_limit, [](const StudyRow& r) { return r.dF_bound; }, "dF_bound", out.dF_ok);
  check(s.mass_limit, [](const StudyRow& r) { return r.mass; }, "mass", out.mass_ok);
  return out;
}

std::string study_csv(const ExampleStudy& s) {
  std::ostringstream os;
  os << "j,dF_bound,dGH_bound,mass,hypothesis_ok";
  if (!s.rows.empty()) {
    for (const auto& a : s.rows.front().aux) os << ',' << a.name;
  }
  os << '\n';
  for (const auto& r : s.rows) {
    os << r.j << ',' << format_double(r.dF_bound) << ',' << format_double(r.dGH_bound) << ','
       << format_double(r.mass) << ',' << (r.hypothesis_ok ? 1 : 0);
    for (const auto& a : r.aux) os << ',' << format_double(a.value);
    os << '\n';
  }
  return os.str();
}

nlohmann::json to_json(const ExampleStudy& s) {
  auto num = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return format_double(v);
  };
  nlohmann::json j;
  j["name"] = s.name;
  nlohmann::json params = nlohmann::json::object();
  for (const auto& p : s.parameters) params[p.name] = p.value;
  j["parameters"] = params;
  nlohmann::json hyps = nlohmann::json::array();
  for (const auto& h : s.hypotheses) hyps.push_back({{"name", h.name}, {"condition", h.condition}, {"holds", h.holds}});
  j["hypotheses"] = hyps;
  j["dF_limit"] = to_string(s.dF_limit);
  j["mass_limit"] = to_string(s.mass_limit);
  j["documented_j"] = s.documented_j;
  j["note"] = s.note;
  const LimitCheck lc = check_limits(s);
  j["limit_check"] = {{"dF_ok", lc.dF_ok}, {"mass_ok", lc.mass_ok}, {"detail", lc.detail}};
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : s.rows) {
    nlohmann::json row;
    row["j"] = r.j;
    row["dF_bound"] = num(r.dF_bound);
    row["dGH_bound"] = num(r.dGH_bound);
    row["mass"] = num(r.mass);
    row["hypothesis_ok"] = r.hypothesis_ok;
    nlohmann::json aux = nlohmann::json::object();
    for (const auto& a : r.aux) aux[a.name] = num(a.value);
    row["aux"] = aux;
    row["flat"] = to_json(r.flat);
    row["gh"] = to_json(r.gh);
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j;
}

}  // namespace ifd

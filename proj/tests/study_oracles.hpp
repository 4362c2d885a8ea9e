#pragma once

#include <cmath>
#include <limits>
#include <numbers>

// Closed forms of the preset columns, written out independently of the
// generators so the two can be compared term by term.
namespace oracle {

inline constexpr double pi = std::numbers::pi;

// 1 - cos r by series for small r, directly otherwise.
inline double one_minus_cos(double r) {
  if (r < 1e-3) {
    const double r2 = r * r;
    return r2 / 2 - r2 * r2 / 24 + r2 * r2 * r2 / 720;
  }
  return 1 - std::cos(r);
}

inline double cap(double r) { return 2 * pi * one_minus_cos(r); }

inline double height(double db, double du) { return std::sqrt(db * (2 * du + db)); }

struct Columns {
  double dF = 0.0;
  double gh = std::numeric_limits<double>::quiet_NaN();
  double mass = 0.0;
};

inline Columns one_hair(int j) {
  const double jj = j, r = std::pow(jj, -6.0);
  const double vu = 4 * pi - cap(r);
  const double h = height(pi * std::sin(r), pi + pi * std::sin(r));
  const double h0 = height(2 * r, pi);
  return {vu * (h + h0) + 2 / (jj * jj) + cap(r), h + h0 + 2 + pi * std::sin(r) + 2 * r, vu + 2 / (jj * jj)};
}

inline Columns hairy_sphere(int j) {
  const double n = j, r = std::pow(static_cast<double>(j), -3.0), v = 1.0 / j;
  const double h = std::sqrt(pi * r * (pi + 2 + pi * r));
  return {8 * pi * n * h + 2 * v, std::numeric_limits<double>::quiet_NaN(), 4 * pi - n * cap(r) + v};
}

inline Columns two_spheres_pipe(int j) {
  const double r = 1.0 / j;
  const double h = std::sqrt(pi * r + pi * pi * r * r / 4);
  const double c = std::sqrt(1 - r * r);
  return {8 * pi * (r + h) + 4 * pi * r * r + 4 * pi * r * h, pi * r / 2 + h,
          8 * pi - 4 * pi * (1 - c) + 2 * pi * r * (4 - 2 * c)};
}

inline Columns tori_collapse(int j) { return {pi / j, pi / (2.0 * j), pi / j}; }

inline Columns jungle_gym(int j) {
  const double r = std::sqrt(3.0 / (4 * pi)) * std::pow(2.0, -1.5 * j);
  return {15.0 / 32.0 * r, std::numeric_limits<double>::quiet_NaN(), 3.0};
}

inline bool rel_close(double a, double b, double tol = 1e-12) {
  if (std::isnan(a) && std::isnan(b)) return true;
  if (a == b) return true;
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace oracle

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "ifd/bound_report.hpp"
#include "ifd/current.hpp"
#include "ifd/flat_norm.hpp"

namespace ifd {

using StudyParams = std::map<std::string, double>;

/// Parses "k=v,k=v". Throws ParseError naming the offending field.
StudyParams parse_study_params(const std::string& text);

struct Hypothesis {
  std::string name;
  std::string condition;
  bool holds = true;
};

enum class LimitBehavior { ToZero, BoundedBelow, Diverges, Constant, Unspecified };
std::string to_string(LimitBehavior b);

struct StudyRow {
  int j = 0;
  double dF_bound = 0.0;
  /// NaN when the example gives no GH bound, +inf when GH fails to converge.
  double dGH_bound = 0.0;
  double mass = 0.0;
  bool hypothesis_ok = true;
  /// Values shown next to the main columns, in a fixed order shared by all rows.
  std::vector<NamedValue> aux;
  BoundReport flat;
  BoundReport gh;

  double aux_value(const std::string& name) const;
};

struct ExampleStudy {
  std::string name;
  std::vector<NamedValue> parameters;
  std::vector<Hypothesis> hypotheses;
  LimitBehavior dF_limit = LimitBehavior::Unspecified;
  LimitBehavior mass_limit = LimitBehavior::Unspecified;
  /// Smallest j at which the preset's dF bound is documented to drop below
  /// 1e-2, or 0 when that does not happen in the range the preset targets.
  int documented_j = 0;
  std::string note;
  std::vector<StudyRow> rows;

  double parameter(const std::string& name) const;
  bool hypotheses_hold() const;
};

struct StudyRange {
  int jmin = 1;
  int jmax = 50;
  int jobs = 1;
};

/// Canonical names: one-hair, bumpy-hair, hairy-sphere, cone, cusp, horn-unbounded,
/// many-tips, two-spheres-pipe, sphere-fractal, tori-collapse, jungle-gym,
/// cancellation, doubling, taxicab, dense-support, gabriels-horn.
std::vector<std::string> study_names();
/// Lower case with '_' mapped to '-'; "cone-and-cusp" maps to "cusp".
std::string canonical_study_name(const std::string& name);

/// Default parameters of a study; unknown names throw DomainError.
StudyParams study_defaults(const std::string& name);

/// Runs the named generator over j in [jmin, jmax]. Parameters not given take
/// the preset values; unknown parameter names and failed hypotheses throw.
ExampleStudy convergence_study(const std::string& name, const StudyParams& params,
                               const StudyRange& range);

ExampleStudy one_hair(const StudyParams& params, const StudyRange& range);
ExampleStudy bumpy_hair(const StudyParams& params, const StudyRange& range);
ExampleStudy hairy_sphere(const StudyParams& params, const StudyRange& range);
ExampleStudy cone(const StudyParams& params, const StudyRange& range);
ExampleStudy cusp(const StudyParams& params, const StudyRange& range);
ExampleStudy horn_unbounded(const StudyParams& params, const StudyRange& range);
ExampleStudy many_tips(const StudyParams& params, const StudyRange& range);
ExampleStudy two_spheres_pipe(const StudyParams& params, const StudyRange& range);
ExampleStudy sphere_fractal(const StudyParams& params, const StudyRange& range);
ExampleStudy tori_collapse(const StudyParams& params, const StudyRange& range);
ExampleStudy jungle_gym(const StudyParams& params, const StudyRange& range);
ExampleStudy cancellation(const StudyParams& params, const StudyRange& range);
ExampleStudy doubling(const StudyParams& params, const StudyRange& range);
ExampleStudy taxicab(const StudyParams& params, const StudyRange& range);
ExampleStudy dense_support(const StudyParams& params, const StudyRange& range);
ExampleStudy gabriels_horn(const StudyParams& params, const StudyRange& range);

/// Limit-behavior checks of a finished study against its declared metadata.
struct LimitCheck {
  bool dF_ok = true;
  bool mass_ok = true;
  std::string detail;
};
LimitCheck check_limits(const ExampleStudy& study);

/// Columns j, dF_bound, dGH_bound, mass, hypothesis_ok, then the aux names.
std::string study_csv(const ExampleStudy& study);
nlohmann::json to_json(const ExampleStudy& study);

// Derived constants and the discrete objects they come from.

/// Cycle T_j - T_{j+1} on one five-sided unit cube and the four half-size
/// five-sided cubes over its base, realized in R^3 with the filling complex
/// (a cone from the centre of the base over the slab above the small cubes).
IntegralChain taxicab_cluster_cycle();
/// Filling constant of the unit cluster: flat_norm_exact of the cycle.
double taxicab_filling_constant();

struct GabrielConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
  double c5 = 0.0;
};

/// Radius of the surface of revolution of M_j at height z (j = 0 means the
/// untruncated profile).
double gabriel_profile(double z, int j);
double horn_profile(double z, int j);

/// Scaled quantities whose supremum over j defines each constant:
///   s1 = j^2 M(A1), s2 = j^2 M(A2), s3 = j Vol(V2), s4 = j h_chain, s5 = Vol(U1)/ln j.
GabrielConstants gabriel_scaled(int j);
/// Maximum of the scaled quantities over j in [1, kGabrielSupRange] (j >= 2 for c5).
inline constexpr int kGabrielSupRange = 1024;
GabrielConstants gabriel_constants();

/// Weight-2 limit current on a flat square torus grid (n x n cells).
IntegralChain doubling_limit(std::size_t n);

}  // namespace ifd

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ifd/error.hpp"
#include "ifd/estimators.hpp"
#include "ifd/flat_norm.hpp"
#include "ifd/glue.hpp"
#include "ifd/metric_space.hpp"
#include "ifd/studies.hpp"

using nlohmann::json;
using namespace ifd;

namespace {

struct Options {
  std::string input;
  std::string out;
  std::string csv;
  std::string method = "lp";
  std::optional<std::int64_t> coeff_bound;
  double tol = 1e-9;
  int jobs = 1;
  std::optional<std::uint64_t> seed;
  std::string name;
  int jmin = 1;
  int jmax = 50;
  std::string params;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

FiniteMetricSpace load_space(const json& j, double tol) {
  if (j.is_object() && j.contains("matrix")) return metric_space_from_json(j, tol);
  return length_metric(metric_graph_from_json(j));
}

std::vector<std::size_t> index_list(const json& j, const std::string& field) {
  if (!j.contains(field) || !j[field].is_array()) throw ParseError("plan needs an index array \"" + field + "\"");
  std::vector<std::size_t> out;
  for (const auto& v : j[field]) {
    if (!v.is_number_unsigned()) throw ParseError("\"" + field + "\" must hold nonnegative integers");
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

const json& field(const json& j, const std::string& name) {
  if (!j.is_object() || !j.contains(name)) throw ParseError("missing field \"" + name + "\"");
  return j[name];
}

FlatMethod parse_method(const std::string& m) { return m == "exact" ? FlatMethod::Exact : FlatMethod::Lp; }

// The chain of top dimension m, or the only chain present.
IntegralChain target_chain(const MeshDocument& doc) {
  const int m = doc.complex->m();
  if (auto it = doc.chains.find(m); it != doc.chains.end()) return it->second;
  if (doc.chains.size() == 1) return doc.chains.begin()->second;
  if (doc.chains.empty()) throw ParseError("mesh has no \"chain\"");
  throw ParseError("mesh has several chains and none of dimension m = " + std::to_string(m));
}

json solve_one(const json& mesh, const Options& o) {
  MeshDocument doc = mesh_from_json(mesh);
  IntegralChain t = target_chain(doc);
  FlatProblem p = make_flat_problem(t);
  FlatDecomposition d;
  if (parse_method(o.method) == FlatMethod::Exact) {
    d = flat_norm_exact(p, o.coeff_bound, std::max<std::size_t>(kExactMaxSimplices, p.rows() + p.cols()));
  } else {
    SimplexOptions so;
    so.tol = o.tol;
    d = flat_norm_lp(p, so);
  }
  json r = to_json(d);
  r["dim"] = t.dim();
  r["mass"] = mass(t);
  return r;
}

// Random orientable fixture: some triangles of a jittered octahedron and a
// 1-chain with coefficients in [-2, 2] on its edges.
json random_fixture(std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> jitter(-0.15, 0.15);
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<int> coeff(-2, 2);
  std::vector<std::vector<double>> pos = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  for (auto& p : pos)
    for (auto& x : p) x *= 1.0 + jitter(g);
  const std::vector<std::vector<int>> all = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                                             {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
  json tris = json::array();
  for (const auto& t : all)
    if (coin(g) || tris.empty()) tris.push_back(t);
  json verts = json::array();
  for (std::size_t i = 0; i < pos.size(); ++i) verts.push_back({{"id", i}, {"pos", pos[i]}});
  std::set<std::pair<int, int>> edge_set;
  for (const auto& t : tris)
    for (int x = 0; x < 3; ++x)
      for (int y = x + 1; y < 3; ++y) edge_set.insert(std::minmax(t[x].get<int>(), t[y].get<int>()));
  json edges = json::array();
  json chain = json::object();
  for (const auto& [a, b] : edge_set) {
    const int c = coin(g) ? coeff(g) : 0;
    if (c != 0) chain[std::to_string(edges.size())] = c;
    edges.push_back({a, b});
  }
  json doc = {{"m", 1}, {"vertices", verts}, {"simplices", {{"1", edges}, {"2", tris}}}};
  doc["chain"] = {{"1", chain}};
  return doc;
}

int cmd_flatnorm(const Options& o) {
  json input;
  if (!o.input.empty()) {
    input = read_json(o.input);
  } else if (o.seed) {
    input = random_fixture(*o.seed);
  } else {
    throw ParseError("flatnorm needs --input or --seed");
  }
  json result;
  if (input.is_array()) {
    std::vector<json> out(input.size());
    std::vector<std::exception_ptr> errors(input.size());
    const int jobs = std::max(1, o.jobs);
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < input.size(); i += jobs) {
          try {
            out[i] = solve_one(input[i], o);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    result = json(out);
  } else {
    result = solve_one(input, o);
    if (o.input.empty()) result["fixture"] = input;
  }
  write_text(o.out, dump(result));
  return 0;
}

json audit_json(const IsometryAudit& a, const std::string& name) {
  return {{"name", name},           {"isometric", a.isometric}, {"worst_error", a.worst_error},
          {"worst_pair", {a.worst_i, a.worst_j}}, {"tolerance", a.tolerance}};
}

int cmd_distance(const Options& o) {
  const json in = read_json(o.input);
  json result = json::object();
  json reports = json::array();
  if (in.contains("mesh")) {
    MeshDocument doc = mesh_from_json(in["mesh"]);
    const json& chains = field(in, "chains");
    if (!chains.is_array() || chains.size() != 2) throw ParseError("\"chains\" must hold two chain objects");
    const int k = in.contains("dim") ? in["dim"].get<int>() : doc.complex->m();
    std::vector<IntegralChain> t;
    for (std::size_t c = 0; c < 2; ++c) {
      json wrapped = in["mesh"];
      wrapped["chain"] = {{std::to_string(k), chains[c]}};
      t.push_back(mesh_from_json(wrapped).chains.at(k));
    }
    // Both loads rebuild the same complex; rebase the second chain on the first.
    IntegralChain t2(t[0].complex_ptr(), k, t[1].coefficients());
    FlatDistanceOptions fo;
    fo.method = parse_method(o.method);
    fo.coeff_bound = o.coeff_bound;
    FlatDecomposition d = flat_distance(t[0], t2, fo);
    result["flat"] = to_json(d);
    reports.push_back(to_json(trivial_bound(mass(t[0]), mass(t2))));
  } else {
    FiniteMetricSpace x = load_space(field(in, "X"), o.tol);
    FiniteMetricSpace y = load_space(field(in, "Y"), o.tol);
    reports.push_back(to_json(gh_lower_bound(x, y)));
    if (in.contains("Z")) {
      FiniteMetricSpace z = load_space(in["Z"], o.tol);
      PointMap phi{x, z, index_list(in, "phi")};
      PointMap psi{y, z, index_list(in, "psi")};
      phi.validate();
      psi.validate();
      reports.push_back(to_json(gh_upper_bound(phi, psi, o.tol)));
    }
  }
  result["reports"] = reports;
  write_text(o.out, dump(result));
  return 0;
}

int cmd_glue(const Options& o) {
  const json plan = read_json(o.input);
  const std::string kind = field(plan, "construction").get<std::string>();
  const double tol = plan.value("tol", o.tol);
  GluedSpace g;
  if (kind == "glue_two") {
    FiniteMetricSpace x = load_space(field(plan, "X"), o.tol);
    PointMap p1{x, load_space(field(plan, "Z1"), o.tol), index_list(plan, "phi1")};
    PointMap p2{x, load_space(field(plan, "Z2"), o.tol), index_list(plan, "phi2")};
    g = glue_two(p1, p2, tol);
  } else if (kind == "glue_tree") {
    std::vector<FiniteMetricSpace> vs;
    for (const auto& s : field(plan, "vertex_spaces")) vs.push_back(load_space(s, o.tol));
    std::vector<TreeEdge> edges;
    for (const auto& e : field(plan, "edges")) {
      TreeEdge t;
      t.a = field(e, "a").get<std::size_t>();
      t.b = field(e, "b").get<std::size_t>();
      if (t.a >= vs.size() || t.b >= vs.size()) throw ParseError("tree edge names a missing vertex space");
      t.space = load_space(field(e, "space"), o.tol);
      t.phi_a = PointMap{vs[t.a], t.space, index_list(e, "phi_a")};
      t.phi_b = PointMap{vs[t.b], t.space, index_list(e, "phi_b")};
      edges.push_back(std::move(t));
    }
    g = glue_tree(vs, edges, tol);
  } else if (kind == "attach") {
    g = attach(metric_graph_from_json(field(plan, "Z")), metric_graph_from_json(field(plan, "Y")),
               index_list(plan, "x"), index_list(plan, "psi"), tol);
  } else if (kind == "bridge") {
    BridgeOptions bo;
    if (plan.contains("boundary1")) bo.boundary1 = index_list(plan, "boundary1");
    if (plan.contains("boundary2")) bo.boundary2 = index_list(plan, "boundary2");
    bo.level_spacing = plan.value("level_spacing", 0.0);
    bo.tol = plan.value("tol", 0.0);
    g = bridge(metric_graph_from_json(field(plan, "M1")), metric_graph_from_json(field(plan, "M2")),
               index_list(plan, "U1"), index_list(plan, "U2"), bo);
  } else {
    throw ParseError("unknown construction \"" + kind + "\"");
  }
  json audits = json::array();
  const auto a = audit(g);
  for (std::size_t i = 0; i < a.size(); ++i) {
    json e = audit_json(a[i], g.embeddings[i].name);
    e["claimed_isometric"] = g.embeddings[i].claimed_isometric;
    audits.push_back(std::move(e));
  }
  json result = {{"glued", to_json(g)}, {"audit", audits}, {"passes", audit_passes(g)}};
  write_text(o.out, dump(result));
  return 0;
}

int cmd_study(const Options& o) {
  if (o.name.empty()) throw ParseError("study needs --name");
  ExampleStudy s = convergence_study(o.name, parse_study_params(o.params), {o.jmin, o.jmax, o.jobs});
  if (!o.csv.empty()) write_text(o.csv, study_csv(s));
  if (!o.out.empty()) write_text(o.out, dump(to_json(s)));
  if (o.csv.empty() && o.out.empty()) std::cout << study_csv(s);
  return 0;
}

int cmd_validate(const Options& o) {
  const json in = read_json(o.input);
  json result = {{"valid", true}};
  if (in.is_object() && in.contains("m")) {
    MeshDocument doc = mesh_from_json(in);
    result["kind"] = "mesh";
    json counts = json::object();
    for (int k = 0; k <= doc.complex->top_dim(); ++k) counts[std::to_string(k)] = doc.complex->count(k);
    result["simplices"] = counts;
    for (const auto& [k, t] : doc.chains) {
      if (k > 1 && !boundary(boundary(t)).is_zero()) {
        throw InvariantError("boundary of boundary is nonzero on the chain of dimension " + std::to_string(k));
      }
      result["chains"][std::to_string(k)] = {{"mass", mass(t)}, {"cycle", k == 0 || boundary(t).is_zero()}};
    }
  } else if (in.is_object() && in.contains("matrix")) {
    FiniteMetricSpace x = metric_space_from_json(in, o.tol);
    result["kind"] = "metric_space";
    result["points"] = x.size();
  } else {
    MetricGraph g = metric_graph_from_json(in);
    FiniteMetricSpace x = length_metric(g);
    result["kind"] = "metric_graph";
    result["points"] = x.size();
  }
  write_text(o.out, dump(result));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Intrinsic flat distance toolkit"};
  app.require_subcommand(1);
  Options o;

  auto add_io = [&](CLI::App* c, bool input_required) {
    auto* in = c->add_option("--input", o.input, "Input JSON file");
    if (input_required) in->required()->check(CLI::ExistingFile);
    c->add_option("--out", o.out, "Output file (stdout when absent)");
    c->add_option("--tol", o.tol, "Numeric tolerance")->check(CLI::PositiveNumber);
  };
  auto add_method = [&](CLI::App* c) {
    c->add_option("--method", o.method, "Flat norm method")->check(CLI::IsMember({"lp", "exact"}));
    c->add_option("--coeff-bound", o.coeff_bound, "Bound on |V| coefficients for the exact method")
        ->check(CLI::NonNegativeNumber);
  };

  auto* flat = app.add_subcommand("flatnorm", "Flat norm of the chain in a mesh file");
  add_io(flat, false);
  flat->get_option("--input")->check(CLI::ExistingFile);
  add_method(flat);
  flat->add_option("--jobs", o.jobs, "Parallel solves for a batch input")->check(CLI::PositiveNumber);
  flat->add_option("--seed", o.seed, "Solve a random fixture generated from this seed");

  auto* dist = app.add_subcommand("distance", "Flat distance between two chains or GH bounds between two spaces");
  add_io(dist, true);
  add_method(dist);

  auto* glue = app.add_subcommand("glue", "Run a gluing plan and audit its embeddings");
  add_io(glue, true);

  auto* study = app.add_subcommand("study", "Convergence study of a named example");
  study->add_option("--name", o.name, "Example name")->required();
  study->add_option("--jmin", o.jmin, "First j")->check(CLI::PositiveNumber);
  study->add_option("--jmax", o.jmax, "Last j")->check(CLI::PositiveNumber);
  study->add_option("--params", o.params, "Parameter overrides k=v,...");
  study->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  study->add_option("--csv", o.csv, "CSV output file");
  study->add_option("--out", o.out, "JSON output file");

  auto* validate = app.add_subcommand("validate", "Check a mesh, metric space or graph file");
  add_io(validate, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (flat->parsed()) return cmd_flatnorm(o);
    if (dist->parsed()) return cmd_distance(o);
    if (glue->parsed()) return cmd_glue(o);
    if (study->parsed()) return cmd_study(o);
    if (validate->parsed()) return cmd_validate(o);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

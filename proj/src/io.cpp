#include "smav/io.hpp"

#include "smav/regularized.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace smav {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

// ---- parsing -------------------------------------------------------------

struct Parser {
  std::vector<std::string> errors;

  void fail(const std::string& path, const std::string& msg) {
    errors.push_back(path + ": " + msg);
  }

  void check_keys(const json& obj, const std::string& path,
                  std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
      bool known = false;
      for (const char* a : allowed)
        if (key == a) known = true;
      if (!known) fail(path + "." + key, "unknown key");
    }
  }

  double number(const json& obj, const std::string& path, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) {
      fail(path + "." + key, "expected a number");
      return fallback;
    }
    return obj[key].get<double>();
  }

  int integer(const json& obj, const std::string& path, const char* key, int fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer()) {
      fail(path + "." + key, "expected an integer");
      return fallback;
    }
    return obj[key].get<int>();
  }

  Profile profile(const json& node, const std::string& path) {
    Profile p;
    if (node.is_number()) {
      p.kind = Profile::Kind::Constant;
      p.value = node.get<double>();
      return p;
    }
    if (!node.is_object()) {
      fail(path, "expected a number or a profile object");
      return p;
    }
    const std::string kind = node.contains("kind") && node["kind"].is_string()
                                 ? node["kind"].get<std::string>()
                                 : "";
    if (kind == "constant") {
      check_keys(node, path, {"kind", "value"});
      p.kind = Profile::Kind::Constant;
      p.value = number(node, path, "value", 0.0);
    } else if (kind == "cosine") {
      check_keys(node, path, {"kind", "mean", "amplitude", "mode"});
      p.kind = Profile::Kind::Cosine;
      p.mean = number(node, path, "mean", 0.0);
      p.amplitude = number(node, path, "amplitude", 0.0);
      p.mode = integer(node, path, "mode", 1);
    } else if (kind == "nodes") {
      check_keys(node, path, {"kind", "values"});
      p.kind = Profile::Kind::Nodes;
      if (!node.contains("values") || !node["values"].is_array()) {
        fail(path + ".values", "expected an array of nodal values");
      } else {
        for (const auto& v : node["values"]) {
          if (!v.is_number()) {
            fail(path + ".values", "expected numbers");
            break;
          }
          p.nodes.push_back(v.get<double>());
        }
      }
    } else {
      fail(path + ".kind", "expected one of \"constant\", \"cosine\", \"nodes\"");
    }
    return p;
  }

  TimeSeries time_series(const json& node, const std::string& path) {
    TimeSeries ts;
    if (node.is_number()) {
      ts.points.emplace_back(0.0, node.get<double>());
      return ts;
    }
    if (!node.is_array()) {
      fail(path, "expected a number or an array of [t, value] breakpoints");
      return ts;
    }
    double last_t = -std::numeric_limits<double>::infinity();
    for (const auto& entry : node) {
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number()) {
        fail(path, "each breakpoint must be a [t, value] pair");
        return ts;
      }
      const double t = entry[0].get<double>();
      if (t < last_t) {
        fail(path, "breakpoint times must be nondecreasing");
        return ts;
      }
      last_t = t;
      ts.points.emplace_back(t, entry[1].get<double>());
    }
    return ts;
  }
};

json profile_to_json(const Profile& p) {
  json out;
  switch (p.kind) {
    case Profile::Kind::Constant:
      out["kind"] = "constant";
      out["value"] = p.value;
      break;
    case Profile::Kind::Cosine:
      out["kind"] = "cosine";
      out["mean"] = p.mean;
      out["amplitude"] = p.amplitude;
      out["mode"] = p.mode;
      break;
    case Profile::Kind::Nodes:
      out["kind"] = "nodes";
      out["values"] = p.nodes;
      break;
  }
  return out;
}

json time_series_to_json(const TimeSeries& ts) {
  json out = json::array();
  for (const auto& [t, v] : ts.points) out.push_back(json::array({t, v}));
  return out;
}

}  // namespace

ParseResult parse_scenario(const std::string& text) {
  ParseResult result;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    result.errors.push_back(std::string("parse error: ") + e.what());
    return result;
  }
  if (!doc.is_object()) {
    result.errors.push_back("document root must be an object");
    return result;
  }

  Parser p;
  p.check_keys(doc, "$", {"mesh", "material", "initial", "sources", "time", "solver"});

  Scenario sc;

  if (!doc.contains("mesh") || !doc["mesh"].is_object()) {
    p.fail("$.mesh", "required object missing");
  } else {
    const json& mesh = doc["mesh"];
    p.check_keys(mesh, "$.mesh", {"length", "elements", "gamma0_side"});
    sc.mesh.length = p.number(mesh, "$.mesh", "length", 1.0);
    sc.mesh.n_elements = p.integer(mesh, "$.mesh", "elements", 0);
    if (!mesh.contains("elements")) p.fail("$.mesh.elements", "required key missing");
    if (mesh.contains("gamma0_side")) {
      const auto& side = mesh["gamma0_side"];
      if (side.is_string() && side.get<std::string>() == "left")
        sc.mesh.gamma0_side = Side::Left;
      else if (side.is_string() && side.get<std::string>() == "right")
        sc.mesh.gamma0_side = Side::Right;
      else
        p.fail("$.mesh.gamma0_side", "expected \"left\" or \"right\"");
    }
  }

  if (doc.contains("material")) {
    const json& mat = doc["material"];
    if (!mat.is_object()) {
      p.fail("$.material", "expected an object");
    } else {
      p.check_keys(mat, "$.material",
                   {"K", "C_bar", "l_a", "theta_0", "theta_c", "tau_bar", "c_visc", "k_grad",
                    "upsilon", "lambda"});
      MaterialParams& m = sc.material;
      m.K = p.number(mat, "$.material", "K", m.K);
      m.C_bar = p.number(mat, "$.material", "C_bar", m.C_bar);
      m.l_a = p.number(mat, "$.material", "l_a", m.l_a);
      m.theta_0 = p.number(mat, "$.material", "theta_0", m.theta_0);
      m.theta_c = p.number(mat, "$.material", "theta_c", m.theta_c);
      m.tau_bar = p.number(mat, "$.material", "tau_bar", m.tau_bar);
      m.c_visc = p.number(mat, "$.material", "c_visc", m.c_visc);
      m.k_grad = p.number(mat, "$.material", "k_grad", m.k_grad);
      m.upsilon = p.number(mat, "$.material", "upsilon", m.upsilon);
      m.lambda = p.number(mat, "$.material", "lambda", m.lambda);
    }
  }

  // Defaults: rest state at the equilibrium temperature, equal fractions.
  sc.u0 = Profile{};
  sc.theta0 = Profile{};
  sc.theta0.value = sc.material.theta_0;
  for (int i = 0; i < 3; ++i) {
    sc.beta0[i] = Profile{};
    sc.beta0[i].value = 1.0 / 3.0;
  }

  if (doc.contains("initial")) {
    const json& init = doc["initial"];
    if (!init.is_object()) {
      p.fail("$.initial", "expected an object");
    } else {
      p.check_keys(init, "$.initial", {"u", "theta", "beta1", "beta2", "beta3"});
      if (init.contains("u")) sc.u0 = p.profile(init["u"], "$.initial.u");
      if (init.contains("theta")) sc.theta0 = p.profile(init["theta"], "$.initial.theta");
      if (init.contains("beta1")) sc.beta0[0] = p.profile(init["beta1"], "$.initial.beta1");
      if (init.contains("beta2")) sc.beta0[1] = p.profile(init["beta2"], "$.initial.beta2");
      if (init.contains("beta3")) sc.beta0[2] = p.profile(init["beta3"], "$.initial.beta3");
    }
  }

  if (doc.contains("sources")) {
    const json& src = doc["sources"];
    if (!src.is_object()) {
      p.fail("$.sources", "expected an object");
    } else {
      p.check_keys(src, "$.sources", {"f", "g", "R", "Pi_left", "Pi_right"});
      if (src.contains("f")) sc.f = p.time_series(src["f"], "$.sources.f");
      if (src.contains("g")) sc.g = p.time_series(src["g"], "$.sources.g");
      if (src.contains("R")) sc.R = p.time_series(src["R"], "$.sources.R");
      if (src.contains("Pi_left")) sc.Pi_left = p.time_series(src["Pi_left"], "$.sources.Pi_left");
      if (src.contains("Pi_right"))
        sc.Pi_right = p.time_series(src["Pi_right"], "$.sources.Pi_right");
    }
  }

  if (!doc.contains("time") || !doc["time"].is_object()) {
    p.fail("$.time", "required object missing");
  } else {
    const json& time = doc["time"];
    p.check_keys(time, "$.time", {"dt", "t_end", "stride"});
    sc.config.dt = p.number(time, "$.time", "dt", sc.config.dt);
    sc.config.t_end = p.number(time, "$.time", "t_end", 0.0);
    if (!time.contains("t_end")) p.fail("$.time.t_end", "required key missing");
    sc.config.snapshot_stride = p.integer(time, "$.time", "stride", 1);
  }

  if (doc.contains("solver")) {
    const json& solver = doc["solver"];
    if (!solver.is_object()) {
      p.fail("$.solver", "expected an object");
    } else {
      p.check_keys(solver, "$.solver",
                   {"epsilon", "fp_tol", "fp_max_iter", "picard_relaxation"});
      sc.config.epsilon = p.number(solver, "$.solver", "epsilon", sc.config.epsilon);
      sc.config.fp_tol = p.number(solver, "$.solver", "fp_tol", sc.config.fp_tol);
      sc.config.fp_max_iter = p.integer(solver, "$.solver", "fp_max_iter", sc.config.fp_max_iter);
      sc.config.picard_relaxation =
          p.number(solver, "$.solver", "picard_relaxation", sc.config.picard_relaxation);
    }
  }

  if (!p.errors.empty()) {
    result.errors = std::move(p.errors);
    return result;
  }

  const ValidationReport report = validate_scenario(sc);
  if (!report.ok()) {
    result.errors = report.errors;
    return result;
  }
  result.scenario = std::move(sc);
  return result;
}

ParseResult load_scenario(const fs::path& file) {
  std::ifstream in(file);
  if (!in) {
    ParseResult r;
    r.errors.push_back("cannot open scenario file: " + file.string());
    return r;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

std::string serialize_scenario(const Scenario& sc) {
  json doc;
  doc["mesh"] = {{"length", sc.mesh.length},
                 {"elements", sc.mesh.n_elements},
                 {"gamma0_side", sc.mesh.gamma0_side == Side::Left ? "left" : "right"}};
  const MaterialParams& m = sc.material;
  doc["material"] = {{"K", m.K},           {"C_bar", m.C_bar},     {"l_a", m.l_a},
                     {"theta_0", m.theta_0}, {"theta_c", m.theta_c}, {"tau_bar", m.tau_bar},
                     {"c_visc", m.c_visc},   {"k_grad", m.k_grad},   {"upsilon", m.upsilon},
                     {"lambda", m.lambda}};
  doc["initial"] = {{"u", profile_to_json(sc.u0)},
                    {"theta", profile_to_json(sc.theta0)},
                    {"beta1", profile_to_json(sc.beta0[0])},
                    {"beta2", profile_to_json(sc.beta0[1])},
                    {"beta3", profile_to_json(sc.beta0[2])}};
  doc["sources"] = {{"f", time_series_to_json(sc.f)},
                    {"g", time_series_to_json(sc.g)},
                    {"R", time_series_to_json(sc.R)},
                    {"Pi_left", time_series_to_json(sc.Pi_left)},
                    {"Pi_right", time_series_to_json(sc.Pi_right)}};
  doc["time"] = {{"dt", sc.config.dt},
                 {"t_end", sc.config.t_end},
                 {"stride", sc.config.snapshot_stride}};
  doc["solver"] = {{"epsilon", sc.config.epsilon},
                   {"fp_tol", sc.config.fp_tol},
                   {"fp_max_iter", sc.config.fp_max_iter},
                   {"picard_relaxation", sc.config.picard_relaxation}};
  return doc.dump(2) + "\n";
}

namespace {

constexpr const char* kTimeseriesHeader =
    "t\tfp_iterations\tfp_residual\tlyapunov\tdissipation\twork\tviolation\t"
    "constraint_residual\tmass_residual\tmax_abs_w\tu_end\tw_mid\tbeta1_mid\tbeta2_mid\tbeta3_mid";

}  // namespace

std::vector<fs::path> write_trajectory(const Trajectory& traj, const Scenario& sc,
                                       const fs::path& dir, int stride) {
  if (stride < 1) throw std::invalid_argument("write_trajectory: stride must be at least 1");
  fs::create_directories(dir / "snapshots");

  {
    std::ofstream out(dir / "scenario.json");
    if (!out) throw std::runtime_error("cannot write " + (dir / "scenario.json").string());
    out << serialize_scenario(sc);
  }

  const Mesh1D mesh = build_mesh(sc.mesh.length, sc.mesh.n_elements, sc.mesh.gamma0_side);
  const int mid = mesh.n_nodes() / 2;
  const int end = mesh.gamma1_nodes[0];

  {
    std::ofstream out(dir / "timeseries.tsv");
    if (!out) throw std::runtime_error("cannot write " + (dir / "timeseries.tsv").string());
    out << kTimeseriesHeader << "\n";
    double diss = 0.0, work = 0.0;
    for (std::size_t n = 0; n < traj.reports.size(); ++n) {
      const StepReport& rep = traj.reports[n];
      const StateSnapshot& s = traj.states[n + 1];
      diss += rep.ledger.dissipation_inc;
      work += rep.ledger.work_inc;
      out << fmt17(s.t) << '\t' << rep.fp_iterations << '\t' << fmt17(rep.fp_final_residual)
          << '\t' << fmt17(rep.ledger.lyapunov) << '\t' << fmt17(diss) << '\t' << fmt17(work)
          << '\t' << fmt17(rep.ledger.violation) << '\t' << fmt17(rep.constraint_residual) << '\t'
          << fmt17(rep.mass_residual) << '\t' << fmt17(s.w.cwiseAbs().maxCoeff()) << '\t'
          << fmt17(s.u[end]) << '\t' << fmt17(s.w[mid]) << '\t' << fmt17(s.beta[0][mid]) << '\t'
          << fmt17(s.beta[1][mid]) << '\t' << fmt17(s.beta[2][mid]) << '\n';
    }
  }

  std::vector<fs::path> written;
  for (std::size_t n = 0; n < traj.states.size(); ++n) {
    if (n % static_cast<std::size_t>(stride) != 0) continue;
    char name[40];
    std::snprintf(name, sizeof(name), "snapshot_%06zu.tsv", n);
    const fs::path file = dir / "snapshots" / name;
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write snapshot file: " + file.string());
    const StateSnapshot& s = traj.states[n];
    out << "# t = " << fmt17(s.t) << "\n";
    out << "x\tu\tw\ttheta\tbeta1\tbeta2\tbeta3\tp\n";
    const RegularizationParams reg{sc.config.epsilon};
    for (int j = 0; j < mesh.n_nodes(); ++j) {
      const int elem = j == 0 ? 0 : j - 1;
      out << fmt17(mesh.nodes[j]) << '\t' << fmt17(s.u[j]) << '\t' << fmt17(s.w[j]) << '\t'
          << fmt17(reg_exp(s.w[j], reg)) << '\t' << fmt17(s.beta[0][j]) << '\t'
          << fmt17(s.beta[1][j]) << '\t' << fmt17(s.beta[2][j]) << '\t' << fmt17(s.p[elem])
          << '\n';
    }
    written.push_back(file);
  }
  return written;
}

StateSnapshot read_snapshot(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open snapshot file: " + file.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("# t = ", 0) != 0)
    throw std::runtime_error("malformed snapshot header in " + file.string());
  StateSnapshot s;
  s.t = std::strtod(line.c_str() + 6, nullptr);
  std::getline(in, line);  // column header

  std::vector<double> u, w, b1, b2, b3, p;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    double x, uu, ww, theta, v1, v2, v3, pp;
    if (!(row >> x >> uu >> ww >> theta >> v1 >> v2 >> v3 >> pp))
      throw std::runtime_error("malformed snapshot row in " + file.string());
    u.push_back(uu);
    w.push_back(ww);
    b1.push_back(v1);
    b2.push_back(v2);
    b3.push_back(v3);
    p.push_back(pp);
  }
  const int n = static_cast<int>(u.size());
  s.u = Eigen::Map<Vec>(u.data(), n);
  s.w = Eigen::Map<Vec>(w.data(), n);
  s.beta[0] = Eigen::Map<Vec>(b1.data(), n);
  s.beta[1] = Eigen::Map<Vec>(b2.data(), n);
  s.beta[2] = Eigen::Map<Vec>(b3.data(), n);
  s.p = Eigen::Map<Vec>(p.data() + 1, n - 1);  // left-element attribution
  return s;
}

StoredTrajectory read_trajectory(const fs::path& dir) {
  StoredTrajectory stored;
  const ParseResult parsed = load_scenario(dir / "scenario.json");
  if (!parsed.ok()) {
    std::string msg = "cannot load " + (dir / "scenario.json").string();
    for (const auto& e : parsed.errors) msg += "\n  " + e;
    throw std::runtime_error(msg);
  }
  stored.scenario = *parsed.scenario;

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir / "snapshots")) {
    if (entry.path().extension() == ".tsv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) stored.states.push_back(read_snapshot(f));

  std::ifstream ts(dir / "timeseries.tsv");
  if (ts) {
    std::string line;
    std::getline(ts, line);
    while (std::getline(ts, line))
      if (!line.empty()) ++stored.timeseries_rows;
  }
  return stored;
}

}  // namespace smav

#include "loopwalk/config.hpp"

#include "loopwalk/dispersion.hpp"
#include "loopwalk/synthesis.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace lw {

using json = nlohmann::json;

const char* kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::line: return "line";
    case ExperimentKind::circle: return "circle";
    case ExperimentKind::figure_eight: return "figure-eight";
    case ExperimentKind::dispersion: return "dispersion";
    case ExperimentKind::decompose: return "decompose";
    case ExperimentKind::errorbars: return "errorbars";
  }
  return "?";
}

Unitary4 CoinSpec::realize() const {
  if (matrix) return *matrix;
  if (setting) return setting->realize();
  return CoinSetting{arm({qwp(45)}), arm({qwp(45)}), {hwp(22.5)}}.realize();
}

CoinProgram CoinSpec::program() const {
  if (matrix) return CoinProgram::uniform(*matrix);
  if (setting) return CoinProgram::uniform(*setting);
  return CoinProgram::uniform(CoinSetting{arm({qwp(45)}), arm({qwp(45)}), {hwp(22.5)}});
}

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config: " + (path.empty() ? std::string("<root>") : path) + ": " + what);
}

void only(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) fail(path.empty() ? it.key() : path + "." + it.key(), "unknown field");
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "non-finite number");
  return v;
}

long long integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long long>();
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

bool boolean(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

OpticalElement parse_element(const json& j, const std::string& path) {
  only(j, path, {"type", "angle", "phase", "label"});
  if (!j.contains("type")) fail(join(path, "type"), "missing");
  std::string t = text(j["type"], join(path, "type"));
  OpticalElement e;
  if (t == "QWP") e.kind = ElementKind::QWP;
  else if (t == "HWP") e.kind = ElementKind::HWP;
  else if (t == "EOM") e.kind = ElementKind::EOM;
  else fail(join(path, "type"), "unknown element type '" + t + "'");
  const char* key = e.kind == ElementKind::EOM ? "phase" : "angle";
  const char* other = e.kind == ElementKind::EOM ? "angle" : "phase";
  if (j.contains(other)) fail(join(path, other), std::string("not valid for ") + t);
  if (!j.contains(key)) fail(join(path, key), "missing");
  e.setting = Degrees{number(j[key], join(path, key))};
  if (j.contains("label")) e.label = text(j["label"], join(path, "label"));
  return e;
}

std::vector<OpticalElement> parse_elements(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected a list of elements");
  std::vector<OpticalElement> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_element(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

ArmSetting parse_arm(const json& j, const std::string& path) {
  only(j, path, {"plates", "eom", "eom_label"});
  ArmSetting a;
  if (j.contains("plates")) {
    a.plates = parse_elements(j["plates"], join(path, "plates"));
    for (std::size_t i = 0; i < a.plates.size(); ++i)
      if (a.plates[i].kind == ElementKind::EOM) fail(join(path, "plates"), "EOMs go in 'eom', not among the plates");
  }
  if (j.contains("eom")) a.eom_phase = Degrees{number(j["eom"], join(path, "eom"))};
  if (j.contains("eom_label")) a.eom_label = text(j["eom_label"], join(path, "eom_label"));
  return a;
}

Mat4 parse_matrix4(const json& j, const std::string& path) {
  only(j, path, {"re", "im"});
  Mat4 m = Mat4::Zero();
  for (const char* part : {"re", "im"}) {
    const std::string p = join(path, part);
    if (!j.contains(part)) fail(p, "missing");
    const json& a = j[part];
    if (!a.is_array() || a.size() != 4) fail(p, "expected 4 rows");
    for (int r = 0; r < 4; ++r) {
      if (!a[r].is_array() || a[r].size() != 4) fail(p + "[" + std::to_string(r) + "]", "expected 4 entries");
      for (int c = 0; c < 4; ++c) {
        double v = number(a[r][c], p + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
        if (std::string(part) == "re")
          m(r, c) += v;
        else
          m(r, c) += cd(0, v);
      }
    }
  }
  return m;
}

Unitary4 certified(const Mat4& m, const std::string& path) {
  double err = unitarity_error(m);
  if (err > kTolUnitary) fail(path, "matrix is not unitary (max |U^dag U - 1| = " + format_number(err) + ")");
  return Unitary4(m);
}

CoinSpec parse_coin(const json& j, const std::string& path) {
  only(j, path, {"arm_a", "arm_b", "loop", "eom_first", "matrix"});
  CoinSpec c;
  if (j.contains("matrix")) {
    for (const char* k : {"arm_a", "arm_b", "loop", "eom_first"})
      if (j.contains(k)) fail(join(path, k), "cannot be combined with 'matrix'");
    c.matrix = certified(parse_matrix4(j["matrix"], join(path, "matrix")), join(path, "matrix"));
    return c;
  }
  CoinSetting s;
  if (j.contains("arm_a")) s.arm_a = parse_arm(j["arm_a"], join(path, "arm_a"));
  if (j.contains("arm_b")) s.arm_b = parse_arm(j["arm_b"], join(path, "arm_b"));
  if (j.contains("loop")) s.loop = parse_elements(j["loop"], join(path, "loop"));
  if (j.contains("eom_first") && boolean(j["eom_first"], join(path, "eom_first"))) s.order = ArmOrder::EomThenPlates;
  c.setting = s;
  return c;
}

Flavor parse_flavor(const json& j, const std::string& path) {
  std::string f = text(j, path);
  if (f == "non-mixing") return Flavor::NonMixing;
  if (f == "hadamard-like") return Flavor::HadamardLike;
  fail(path, "unknown flavor '" + f + "' (non-mixing | hadamard-like)");
}

ExperimentKind parse_kind(const std::string& s, const std::string& path) {
  for (auto k : {ExperimentKind::line, ExperimentKind::circle, ExperimentKind::figure_eight, ExperimentKind::dispersion,
                 ExperimentKind::decompose, ExperimentKind::errorbars})
    if (s == kind_name(k)) return k;
  fail(path, "unknown experiment kind '" + s + "'");
}

Unitary4 parse_target(const json& j, const std::string& path) {
  only(j, path, {"named", "matrix", "coin"});
  if (j.size() != 1) fail(path, "give exactly one of 'named', 'matrix', 'coin'");
  if (j.contains("matrix")) return certified(parse_matrix4(j["matrix"], join(path, "matrix")), join(path, "matrix"));
  if (j.contains("coin")) return parse_coin(j["coin"], join(path, "coin")).realize();
  std::string n = text(j["named"], join(path, "named"));
  if (n == "grover") return grover_coin();
  if (n == "fourier") return fourier_coin();
  if (n == "identity") return Unitary4::identity();
  if (n == "balanced") return full_coin(h_prime(), h_prime(), h_prime());
  fail(join(path, "named"), "unknown coin '" + n + "' (grover | fourier | identity | balanced)");
}

}  // namespace

RunConfig parse_config(const std::string& text_in) {
  json j;
  try {
    j = json::parse(text_in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: malformed document: ") + e.what());
  }
  only(j, "",
       {"description", "experiment", "steps", "seed", "trace", "coin", "initial", "circle", "figure_eight", "dispersion",
        "target", "rank_tol", "errorbars", "revivals", "output"});
  RunConfig c;
  if (!j.contains("experiment")) fail("experiment", "missing");
  c.kind = parse_kind(text(j["experiment"], "experiment"), "experiment");
  if (j.contains("description")) text(j["description"], "description");
  if (j.contains("steps")) {
    long long s = integer(j["steps"], "steps");
    if (s < 0 || s > 100000) fail("steps", "must be between 0 and 100000");
    c.steps = static_cast<int>(s);
  }
  if (j.contains("seed")) {
    long long s = integer(j["seed"], "seed");
    if (s < 0) fail("seed", "must be nonnegative");
    c.seed = static_cast<std::uint64_t>(s);
  }
  if (j.contains("trace")) {
    std::string t = text(j["trace"], "trace");
    if (t == "full") c.trace = Trace::full;
    else if (t == "sum_polarization") c.trace = Trace::sum_polarization;
    else if (t == "sum_direction") c.trace = Trace::sum_direction;
    else if (t == "sum_all") c.trace = Trace::sum_all;
    else fail("trace", "unknown trace mode '" + t + "'");
  }
  if (j.contains("coin")) c.coin = parse_coin(j["coin"], "coin");
  if (j.contains("initial")) {
    const json& s = j["initial"];
    only(s, "initial", {"direction", "polarization", "position"});
    if (s.contains("direction")) {
      std::string d = text(s["direction"], "initial.direction");
      if (d == "cw") c.initial.direction = Direction::cw;
      else if (d == "ccw") c.initial.direction = Direction::ccw;
      else fail("initial.direction", "expected cw or ccw");
    }
    if (s.contains("polarization")) {
      std::string p = text(s["polarization"], "initial.polarization");
      if (p == "H") c.initial.polarization = Polarization::H;
      else if (p == "V") c.initial.polarization = Polarization::V;
      else if (p == "D") c.initial.polarization = Polarization::D;
      else if (p == "A") c.initial.polarization = Polarization::A;
      else fail("initial.polarization", "expected H, V, D or A");
    }
    if (s.contains("position")) c.initial.position = static_cast<int>(integer(s["position"], "initial.position"));
  }
  if (j.contains("circle")) {
    const json& s = j["circle"];
    only(s, "circle", {"num_sites", "left_end", "flavor"});
    if (s.contains("num_sites")) c.circle.num_sites = static_cast<int>(integer(s["num_sites"], "circle.num_sites"));
    if (s.contains("left_end")) c.circle.left_end = static_cast<int>(integer(s["left_end"], "circle.left_end"));
    if (s.contains("flavor")) c.circle.flavor = parse_flavor(s["flavor"], "circle.flavor");
    if (c.circle.num_sites % 2 != 0) fail("circle.num_sites", "even size required");
    if (c.circle.num_sites < 4) fail("circle.num_sites", "at least 4 sites required");
  }
  if (j.contains("figure_eight")) {
    const json& s = j["figure_eight"];
    only(s, "figure_eight", {"left_end", "center", "right_end", "flavor"});
    if (s.contains("left_end")) c.figure_eight.left_end = static_cast<int>(integer(s["left_end"], "figure_eight.left_end"));
    if (s.contains("center")) c.figure_eight.center = static_cast<int>(integer(s["center"], "figure_eight.center"));
    if (s.contains("right_end"))
      c.figure_eight.right_end = static_cast<int>(integer(s["right_end"], "figure_eight.right_end"));
    if (s.contains("flavor")) c.figure_eight.flavor = parse_flavor(s["flavor"], "figure_eight.flavor");
    const auto& f = c.figure_eight;
    if (!(f.left_end + 1 < f.center && f.center + 1 < f.right_end))
      fail("figure_eight", "need left_end < center < right_end with at least one inner site per arc");
  }
  if (j.contains("dispersion")) {
    const json& s = j["dispersion"];
    only(s, "dispersion", {"n_k", "merge_tol", "gap_tol"});
    if (s.contains("n_k")) {
      long long n = integer(s["n_k"], "dispersion.n_k");
      if (n < 64 || n > (1 << 20)) fail("dispersion.n_k", "must be between 64 and 2^20");
      c.n_k = static_cast<int>(n);
    }
    if (s.contains("merge_tol")) c.merge_tol = number(s["merge_tol"], "dispersion.merge_tol");
    if (s.contains("gap_tol")) c.gap_tol = number(s["gap_tol"], "dispersion.gap_tol");
  }
  if (j.contains("target")) c.target = parse_target(j["target"], "target");
  if (j.contains("rank_tol")) c.rank_tol = number(j["rank_tol"], "rank_tol");
  if (j.contains("errorbars")) {
    const json& s = j["errorbars"];
    only(s, "errorbars", {"geometry", "samples", "efficiency_error", "angle_error_deg", "law", "renormalize"});
    auto& m = c.monte_carlo;
    if (s.contains("geometry")) {
      c.geometry = parse_kind(text(s["geometry"], "errorbars.geometry"), "errorbars.geometry");
      if (c.geometry != ExperimentKind::line && c.geometry != ExperimentKind::circle &&
          c.geometry != ExperimentKind::figure_eight)
        fail("errorbars.geometry", "expected line, circle or figure-eight");
    }
    if (s.contains("samples")) {
      long long n = integer(s["samples"], "errorbars.samples");
      if (n <= 0) fail("errorbars.samples", "must be positive");
      m.samples = static_cast<int>(n);
    }
    if (s.contains("efficiency_error")) m.efficiency_error = number(s["efficiency_error"], "errorbars.efficiency_error");
    if (s.contains("angle_error_deg")) m.angle_error_deg = number(s["angle_error_deg"], "errorbars.angle_error_deg");
    if (m.efficiency_error < 0 || m.angle_error_deg < 0) fail("errorbars", "perturbation ranges must be nonnegative");
    if (s.contains("law")) {
      std::string l = text(s["law"], "errorbars.law");
      if (l == "uniform") m.law = PerturbationLaw::uniform;
      else if (l == "truncated_normal") m.law = PerturbationLaw::truncated_normal;
      else fail("errorbars.law", "expected uniform or truncated_normal");
    }
    if (s.contains("renormalize")) m.renormalize = boolean(s["renormalize"], "errorbars.renormalize");
  }
  if (j.contains("revivals")) {
    const json& s = j["revivals"];
    only(s, "revivals", {"tol"});
    if (s.contains("tol")) c.revival_tol = number(s["tol"], "revivals.tol");
  }
  if (j.contains("output")) {
    const json& s = j["output"];
    only(s, "output", {"path", "format"});
    if (s.contains("path")) c.out_path = text(s["path"], "output.path");
    if (s.contains("format")) c.format = text(s["format"], "output.format");
  }
  if (c.format != "csv" && c.format != "table") fail("output.format", "expected csv or table");
  if (c.kind == ExperimentKind::decompose && !c.target) fail("target", "required for decompose");
  c.monte_carlo.seed = c.seed;
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void emit(const Table& t, const std::string& format, std::ostream& out) {
  if (format == "csv") {
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
      out << '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
    return;
  }
  std::vector<std::size_t> w(t.header.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = t.header[i].size();
  for (const auto& r : t.rows)
    for (std::size_t i = 0; i < r.size(); ++i) w[i] = std::max(w[i], r[i].size());
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "  " : "") << std::setw(static_cast<int>(w[i])) << r[i];
    out << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
}

void section(const std::string& title, std::ostream& out) { out << "\n# " << title << '\n'; }

std::string num(double v) { return format_number(v); }
std::string num(int v) { return std::to_string(v); }

GraphProgram graph_for(const RunConfig& c, ExperimentKind k) {
  if (k == ExperimentKind::circle) return circle_program(c.circle);
  return figure_eight_program(c.figure_eight);
}

CoinProgram program_for(const RunConfig& c, ExperimentKind k) {
  if (k == ExperimentKind::circle || k == ExperimentKind::figure_eight) return graph_for(c, k).program;
  return c.coin.program();
}

void require(bool ok, const std::string& command, const RunConfig& c) {
  if (!ok)
    throw ConfigError("config: experiment kind '" + std::string(kind_name(c.kind)) + "' cannot be run by '" + command +
                      "'");
}

int cmd_simulate(const RunConfig& c, std::ostream& out) {
  IntensityRecord rec = evolve(c.initial.state(), program_for(c, c.kind), c.steps);
  TracedTable tt = trace_intensities(rec, c.trace);
  Table t;
  t.header = {"step", "x"};
  t.header.insert(t.header.end(), tt.columns.begin(), tt.columns.end());
  for (const auto& r : tt.rows) {
    std::vector<std::string> row{num(r.step), num(r.x)};
    for (double v : r.values) row.push_back(num(v));
    t.rows.push_back(std::move(row));
  }
  emit(t, c.format, out);
  return kExitOk;
}

SiteRecord graph_record(const RunConfig& c, std::ostream& err) {
  GraphProgram g = graph_for(c, c.kind);
  IntensityRecord rec = evolve(c.initial.state(), g.program, c.steps);
  SiteRecord sr = map_sites(g.sites, rec);
  for (const auto& w : sr.warnings) err << "warning: " << w << '\n';
  return sr;
}

int cmd_graph(const RunConfig& c, std::ostream& out, std::ostream& err) {
  SiteRecord sr = graph_record(c, err);
  Table t;
  t.header = {"step", "m", "intensity"};
  for (int s = 0; s < sr.steps(); ++s)
    for (int m = 0; m < sr.nodes(); ++m) t.rows.push_back({num(s), num(m), num(sr.p[s][m])});
  emit(t, c.format, out);
  return kExitOk;
}

int cmd_revivals(const RunConfig& c, std::ostream& out, std::ostream& err) {
  SiteRecord sr = graph_record(c, err);
  Table t;
  t.header = {"step", "shift", "kind"};
  for (const auto& r : find_revivals(sr, c.revival_tol))
    t.rows.push_back({num(r.step), num(r.shift), r.kind == RevivalKind::perfect ? "perfect" : "shifted"});
  emit(t, c.format, out);
  return kExitOk;
}

int cmd_dispersion(const RunConfig& c, std::ostream& out) {
  DispersionSpectrum spec = band_structure(c.coin.realize(), c.n_k);
  auto v = group_velocities(spec);
  Table bands;
  bands.header = {"k", "branch", "omega", "v_g"};
  for (int i = 0; i < spec.n_k(); ++i)
    for (int j = 0; j < spec.dim(); ++j)
      bands.rows.push_back({num(spec.k(i)), num(j), num(wrap_phase(spec.omega(j, i))), num(v[j][i])});
  emit(bands, c.format, out);

  WavefrontSet w = wavefront_speeds(spec, c.merge_tol);
  section("wavefront speeds", out);
  Table ws;
  ws.header = {"speed", "multiplicity"};
  for (std::size_t i = 0; i < w.speeds.size(); ++i) ws.rows.push_back({num(w.speeds[i]), num(w.multiplicity[i])});
  emit(ws, c.format, out);

  section("gap minima", out);
  Table gm;
  gm.header = {"k", "branch_a", "branch_b", "gap", "kind", "continuum"};
  auto gaps = classify_crossings(spec, c.gap_tol);
  std::sort(gaps.begin(), gaps.end(), [](const GapMinimum& a, const GapMinimum& b) {
    return std::tie(a.k, a.branch_a, a.branch_b) < std::tie(b.k, b.branch_a, b.branch_b);
  });
  for (const auto& g : gaps)
    gm.rows.push_back({num(g.k), num(g.branch_a), num(g.branch_b), num(g.gap),
                       g.kind == CrossingKind::crossing ? "crossing" : "avoided", g.continuum ? "yes" : "no"});
  emit(gm, c.format, out);
  return kExitOk;
}

json matrix_json(const MatX& m) {
  json re = json::array(), im = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json a = json::array(), b = json::array();
    for (int k = 0; k < m.cols(); ++k) {
      a.push_back(m(r, k).real());
      b.push_back(m(r, k).imag());
    }
    re.push_back(a);
    im.push_back(b);
  }
  return {{"re", re}, {"im", im}};
}

json factors_json(const OneTripFactors& f) {
  return {{"arm_a", matrix_json(f.arm_a.matrix())},
          {"arm_b", matrix_json(f.arm_b.matrix())},
          {"loop_cw", matrix_json(f.loop_cw.matrix())},
          {"loop_ccw", matrix_json(f.loop_ccw.matrix())}};
}

double max_det_error(const UniversalFactorization& f) {
  double e = 0;
  for (const OneTripFactors* g : {&f.first, &f.second})
    for (const Unitary2* u : {&g->arm_a, &g->arm_b, &g->loop_cw, &g->loop_ccw})
      e = std::max(e, std::abs(u->matrix().determinant() - 1.0));
  return e;
}

int cmd_decompose(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const Unitary4& target = *c.target;
  constexpr double kResidualTol = 1e-9;
  bool certified = true;

  OneTripResult t = one_trip_test(target, c.rank_tol);
  json doc;
  doc["target"] = matrix_json(target.matrix());
  json one;
  one["decomposable"] = t.decomposable;
  one["singular_values_1"] = {t.witness.sigma1(0), t.witness.sigma1(1)};
  one["singular_values_2"] = {t.witness.sigma2(0), t.witness.sigma2(1)};
  double one_res = -1;
  if (t.decomposable) {
    OneTripFactors f = one_trip_reconstruct(target, c.rank_tol);
    one_res = max_abs_diff(f.compose().matrix(), target.matrix());
    one["factors"] = factors_json(f);
    one["residual"] = one_res;
    certified = certified && one_res <= kResidualTol;
  }
  doc["one_trip"] = one;
  doc["one_trip_independent_loops"] = one_trip_test_independent(target, c.rank_tol);

  UniversalFactorization u = factor_universal(target);
  UniversalFactorization n = su2_normalize(u);
  const double u_res = u.residual(target), n_res = n.residual(target);
  certified = certified && u_res <= kResidualTol && n_res <= kResidualTol;
  auto uf = [&](const UniversalFactorization& f, double res) {
    return json{{"branch", branch_name(f.branch)},
                {"first", factors_json(f.first)},
                {"second", factors_json(f.second)},
                {"phase", {f.phase.real(), f.phase.imag()}},
                {"residual", res},
                {"max_det_error", max_det_error(f)}};
  };
  doc["universal"] = uf(u, u_res);
  doc["universal_su2"] = uf(n, n_res);

  if (c.format == "csv") {
    out << doc.dump(2) << '\n';
  } else {
    out << "one-trip: " << (t.decomposable ? "yes" : "no") << '\n';
    out << "singular values (test 1): " << num(t.witness.sigma1(0)) << " " << num(t.witness.sigma1(1)) << '\n';
    out << "singular values (test 2): " << num(t.witness.sigma2(0)) << " " << num(t.witness.sigma2(1)) << '\n';
    if (t.decomposable) out << "one-trip residual: " << num(one_res) << '\n';
    out << "independent loops: " << (doc["one_trip_independent_loops"].get<bool>() ? "yes" : "no") << '\n';
    out << "two-factor branch: " << branch_name(u.branch) << '\n';
    out << "two-factor residual: " << num(u_res) << '\n';
    out << "unimodular residual: " << num(n_res) << "  max |det - 1|: " << num(max_det_error(n)) << '\n';
  }
  if (!certified) {
    err << "error: coin_synthesis: residual above " << kResidualTol << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_errorbars(const RunConfig& c, std::ostream& out) {
  Experiment e;
  e.id = std::string(kind_name(c.geometry)) + ":" + std::to_string(c.steps) + " steps";
  e.initial = c.initial.state();
  e.program = program_for(c, c.geometry);
  e.steps = c.steps;
  ErrorBarReport r = monte_carlo_error_bars(e, c.monte_carlo);
  Table t;
  t.header = {"step", "x", "mode", "reference", "sigma"};
  for (int s = 0; s < r.reference.size(); ++s)
    for (int x = r.reference.min_x(s); x <= r.reference.max_x(s); ++x)
      for (int m = 0; m < kModes; ++m)
        t.rows.push_back({num(s), num(x), mode_name(m), num(r.reference.at(s, x, m)), num(r.sigma.at(s, x, m))});
  emit(t, c.format, out);
  section("similarity error", out);
  Table st;
  st.header = {"step", "sigma"};
  for (std::size_t s = 0; s < r.similarity_sigma.size(); ++s)
    st.rows.push_back({num(static_cast<int>(s)), num(r.similarity_sigma[s])});
  emit(st, c.format, out);
  return kExitOk;
}

}  // namespace

int run(const std::string& command, const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    using K = ExperimentKind;
    if (command == "simulate") {
      require(c.kind == K::line || c.kind == K::circle || c.kind == K::figure_eight, command, c);
      return cmd_simulate(c, out);
    }
    if (command == "circle") {
      require(c.kind == K::circle, command, c);
      return cmd_graph(c, out, err);
    }
    if (command == "figure-eight") {
      require(c.kind == K::figure_eight, command, c);
      return cmd_graph(c, out, err);
    }
    if (command == "revivals") {
      require(c.kind == K::circle || c.kind == K::figure_eight, command, c);
      return cmd_revivals(c, out, err);
    }
    if (command == "dispersion") {
      require(c.kind == K::dispersion || c.kind == K::line, command, c);
      return cmd_dispersion(c, out);
    }
    if (command == "decompose") {
      require(c.kind == K::decompose, command, c);
      return cmd_decompose(c, out, err);
    }
    if (command == "errorbars") {
      require(c.kind == K::errorbars, command, c);
      return cmd_errorbars(c, out);
    }
    err << "error: unknown subcommand '" << command << "'\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace lw

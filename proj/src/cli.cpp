#include "wvgeom/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "wvgeom/experiments.hpp"
#include "wvgeom/io.hpp"
#include "wvgeom/scene.hpp"
#include "wvgeom/svg.hpp"

namespace wvgeom::cli {

namespace {

using io::Json;

struct Options {
  std::vector<std::string> tol;
  std::string output;
  std::string observable, pre, post, state, config;
  std::string mode = "stars";
  std::string gauge = "auto";
  std::string scene_json, scene_svg, scene_dir;
  std::string case_name;
  std::string format = "svg";
  std::string view = "1,0,0";
  double theta = kPi / 2.0;
  double xi = kPi / 2.0 + 1e-3;
  int theta_count = 181;
  int xi_count = 360;
  double locus_step = 1e-3;
  std::string csv, svg, locus_csv;
};

int exit_code(ErrorCode code) {
  switch (error_category(code)) {
    case ErrorCategory::kMathDomain: return kExitMathDomain;
    case ErrorCategory::kPartialGeometry: return kExitPartialGeometry;
    case ErrorCategory::kParse: return kExitParse;
    case ErrorCategory::kValidation: return kExitValidation;
  }
  return kExitMathDomain;
}

int report_error(std::ostream& err, std::string_view name, const std::string& message, int code) {
  err << io::dump(Json{{"error", std::string(name)}, {"message", message}, {"exit_code", code}});
  return code;
}

int report_error(std::ostream& err, const Error& e) {
  return report_error(err, e.name(), e.what(), exit_code(e.code()));
}

void set_tolerance(Tolerances& tol, const std::string& key, double value) {
  if (!std::isfinite(value) || !(value > 0.0)) {
    throw Error(ErrorCode::kValidation, "tolerance '" + key + "' must be positive");
  }
  if (key == "unit_norm") tol.unit_norm = value;
  else if (key == "hermitian") tol.hermitian = value;
  else if (key == "unitary") tol.unitary = value;
  else if (key == "orthogonal_pre_post") tol.orthogonal_pre_post = value;
  else if (key == "vanishing_expectation") tol.vanishing_expectation = value;
  else if (key == "nil_image") tol.nil_image = value;
  else if (key == "divergence_flag") tol.divergence_flag = value;
  else throw Error(ErrorCode::kValidation, "unknown tolerance '" + key + "'");
}

Tolerances build_tolerances(const Options& opt, std::ostream& err) {
  Tolerances tol;
  if (const char* env = std::getenv("WV_TOL_OVERRIDE"); env != nullptr && *env != '\0') {
    const Json j = io::parse(env);
    if (!j.is_object()) throw Error(ErrorCode::kValidation, "WV_TOL_OVERRIDE must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (!value.is_number()) {
        throw Error(ErrorCode::kValidation, "WV_TOL_OVERRIDE." + key + " must be a number");
      }
      set_tolerance(tol, key, value.get<double>());
      err << "warning: tolerance " << key << " overridden to " << io::format_g17(value.get<double>())
          << " by WV_TOL_OVERRIDE\n";
    }
  }
  for (const auto& kv : opt.tol) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kValidation, "--tol expects key=value");
    char* end = nullptr;
    const std::string text = kv.substr(eq + 1);
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || *end != '\0') {
      throw Error(ErrorCode::kValidation, "--tol value '" + text + "' is not a number");
    }
    set_tolerance(tol, kv.substr(0, eq), v);
  }
  return tol;
}

Eigen::Vector3d parse_view(const std::string& text) {
  std::stringstream ss(text);
  std::string part;
  std::vector<double> v;
  while (std::getline(ss, part, ',')) {
    char* end = nullptr;
    v.push_back(std::strtod(part.c_str(), &end));
    if (part.empty() || *end != '\0') break;
  }
  const Eigen::Vector3d axis = v.size() == 3 ? Eigen::Vector3d(v[0], v[1], v[2])
                                             : Eigen::Vector3d::Zero();
  if (v.size() != 3 || !(axis.norm() > 0.0) || !axis.allFinite()) {
    throw Error(ErrorCode::kValidation, "--view expects a nonzero vector x,y,z");
  }
  return axis;
}

void write_text(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kValidation, "cannot write '" + path + "'");
  f << text;
}

majorana::MappingGauge parse_gauge(const std::string& g) {
  if (g == "auto") return majorana::MappingGauge::kAuto;
  if (g == "reflection") return majorana::MappingGauge::kReflection;
  return majorana::MappingGauge::kQutritClosedForm;
}

struct Inputs {
  Observable a;
  PureState pre;
  PureState post;
};

Inputs load_inputs(const Options& opt, const Tolerances& tol) {
  Observable a = io::decode_observable(io::read_file(opt.observable), tol);
  PureState pre = io::decode_state(io::read_file(opt.pre), tol);
  PureState post = io::decode_state(io::read_file(opt.post), tol);
  if (a.dim() != pre.dim() || pre.dim() != post.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "observable and states must share one dimension");
  }
  return {a, pre, post};
}

struct Decomposed {
  Json json;
  blochgeo::SceneGraph scene;
};

// Decomposition in the requested mode; the reduced mode also reports the
// reduction it used.
Decomposed decompose(const Inputs& in, const Options& opt, const Tolerances& tol) {
  if (opt.mode == "stars") {
    const auto d = majorana::decompose_argument(in.a, in.pre, in.post, parse_gauge(opt.gauge), tol);
    Json j = io::encode(d);
    j["mode"] = "stars";
    return {j, scene::build_scene(d)};
  }
  const PureState eff = weakval::effective_state(in.a, in.pre, tol);
  const auto red = majorana::qutrit_reduction(in.pre, eff, in.post);
  const auto d = majorana::decompose_argument(red.reduce(in.a), red.pre, red.post,
                                              majorana::MappingGauge::kAuto, tol);
  Json j = io::encode(d);
  j["mode"] = "reduced";
  j["reduction"] = io::encode(red);
  return {j, scene::build_scene(d)};
}

std::string render(const blochgeo::SceneGraph& g, const Options& opt) {
  if (opt.format == "json") return io::dump(io::encode(g));
  return svg::render_scene(g, parse_view(opt.view));
}

int cmd_compute(const Options& opt, const Tolerances& tol, std::ostream& out) {
  const Inputs in = load_inputs(opt, tol);
  write_text(io::dump(io::encode(weakval::weak_value(in.a, in.pre, in.post, tol))), opt.output, out);
  return kExitOk;
}

int cmd_decompose(const Options& opt, const Tolerances& tol, std::ostream& out, std::ostream& err) {
  const Inputs in = load_inputs(opt, tol);
  try {
    const Decomposed d = decompose(in, opt, tol);
    write_text(io::dump(d.json), opt.output, out);
    if (!opt.scene_json.empty()) write_text(io::dump(io::encode(d.scene)), opt.scene_json, out);
    if (!opt.scene_svg.empty()) {
      write_text(svg::render_scene(d.scene, parse_view(opt.view)), opt.scene_svg, out);
    }
    return kExitOk;
  } catch (const majorana::DegenerateStarTriangle& e) {
    Json j = io::encode(e.partial());
    j["mode"] = opt.mode;
    j["partial"] = true;
    write_text(io::dump(j), opt.output, out);
    return report_error(err, e);
  }
}

int cmd_stars(const Options& opt, const Tolerances& tol, std::ostream& out) {
  const PureState s = io::decode_state(io::read_file(opt.state), tol);
  Json j = io::encode(majorana::stars(s));
  j["round_trip_fidelity"] = fidelity(s, majorana::stars_to_state(majorana::stars(s)));
  write_text(io::dump(j), opt.output, out);
  return kExitOk;
}

int cmd_reduce(const Options& opt, const Tolerances& tol, std::ostream& out) {
  const Inputs in = load_inputs(opt, tol);
  const PureState eff = weakval::effective_state(in.a, in.pre, tol);
  const auto red = majorana::qutrit_reduction(in.pre, eff, in.post);
  Json j = io::encode(red);
  j["observable"] = io::encode(red.reduce(in.a));
  write_text(io::dump(j), opt.output, out);
  return kExitOk;
}

int cmd_sweep(const Options& opt, const Tolerances& tol, std::ostream& out) {
  const auto config = io::decode_sweep_config(io::read_file(opt.config));
  write_text(experiments::sweep_csv(experiments::sweep(config, tol), config.outputs), opt.output,
             out);
  return kExitOk;
}

int cmd_scene(const Options& opt, const Tolerances& tol, std::ostream& out, std::ostream& err) {
  parse_view(opt.view);
  if (opt.case_name.empty()) {
    if (opt.observable.empty() || opt.pre.empty() || opt.post.empty()) {
      throw Error(ErrorCode::kValidation, "scene needs --case or --observable, --pre and --post");
    }
    const Inputs in = load_inputs(opt, tol);
    try {
      write_text(render(decompose(in, opt, tol).scene, opt), opt.output, out);
      return kExitOk;
    } catch (const majorana::DegenerateStarTriangle& e) {
      write_text(render(scene::build_scene(e.partial()), opt), opt.output, out);
      return report_error(err, e);
    }
  }

  blochgeo::SceneGraph g;
  if (opt.case_name.rfind("cnot", 0) == 0) {
    const auto report = experiments::cnot_case(tol);
    g = opt.case_name == "cnot"           ? report.full_scene
        : opt.case_name == "cnot-reduced" ? report.reduced_scene
                                          : report.cp2_scene;
  } else {
    const experiments::Spin1Family family(tol);
    if (opt.case_name == "spin1") {
      g = scene::build_scene(family.decompose(opt.theta, opt.xi));
    } else {
      g = scene::build_scene(majorana::decompose_argument(
          family.observable(), family.pre(), family.pre(), family.mapping(), tol));
    }
  }
  write_text(render(g, opt), opt.output, out);
  return kExitOk;
}

int cmd_cnot(const Options& opt, const Tolerances& tol, std::ostream& out) {
  const auto report = experiments::cnot_case(tol);
  write_text(io::dump(io::encode(report)), opt.output, out);
  if (!opt.scene_dir.empty()) {
    const Eigen::Vector3d view = parse_view(opt.view);
    const std::pair<const char*, const blochgeo::SceneGraph*> scenes[] = {
        {"cnot_full", &report.full_scene},
        {"cnot_reduced", &report.reduced_scene},
        {"cnot_cp2", &report.cp2_scene}};
    for (const auto& [name, g] : scenes) {
      const std::string base = opt.scene_dir + "/" + name;
      write_text(io::dump(io::encode(*g)), base + ".json", out);
      write_text(svg::render_scene(*g, view), base + ".svg", out);
    }
  }
  return kExitOk;
}

int cmd_spin1_map(const Options& opt, const Tolerances& tol, std::ostream& out) {
  if (opt.theta_count < 2 || opt.xi_count < 1) {
    throw Error(ErrorCode::kValidation, "spin1-map needs theta-count >= 2 and xi-count >= 1");
  }
  std::vector<double> thetas, xis;
  for (int k = 0; k < opt.theta_count; ++k) thetas.push_back(kPi * k / (opt.theta_count - 1));
  for (int k = 0; k < opt.xi_count; ++k) xis.push_back(2.0 * kPi * k / opt.xi_count);
  const auto map = experiments::star_angle_map(thetas, xis, opt.locus_step, tol);

  if (!opt.csv.empty()) write_text(experiments::star_angle_csv(map), opt.csv, out);
  if (!opt.svg.empty()) write_text(experiments::star_angle_svg(map), opt.svg, out);
  if (!opt.locus_csv.empty()) write_text(experiments::locus_csv(map.locus), opt.locus_csv, out);

  Json j = {{"theta_count", opt.theta_count},
            {"xi_count", opt.xi_count},
            {"locus", io::encode(map.locus)},
            {"column_min_deg", map.column_min},
            {"column_argmin_theta", map.column_argmin},
            {"angle_at_theta_max_deg", map.angle_at_theta_max}};
  write_text(io::dump(j), opt.output, out);
  return kExitOk;
}

void add_triple(CLI::App* cmd, Options& opt) {
  cmd->add_option("--observable", opt.observable, "observable JSON file")->required();
  cmd->add_option("--pre", opt.pre, "pre-selected state JSON file")->required();
  cmd->add_option("--post", opt.post, "post-selected state JSON file")->required();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Weak values and their geometric decomposition on the Bloch sphere", "wvgeom"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--tol", opt.tol, "tolerance override key=value (repeatable)");
  app.add_option("-o,--output", opt.output, "write the main result here instead of stdout");

  auto* compute = app.add_subcommand("compute", "weak value of an observable");
  add_triple(compute, opt);

  auto* dec = app.add_subcommand("decompose", "argument as a sum of solid angles");
  add_triple(dec, opt);
  dec->add_option("--mode", opt.mode)->check(CLI::IsMember({"stars", "reduced"}));
  dec->add_option("--gauge", opt.gauge)->check(CLI::IsMember({"auto", "reflection", "closed-form"}));
  dec->add_option("--scene-json", opt.scene_json, "also write the scene as JSON");
  dec->add_option("--scene-svg", opt.scene_svg, "also write the scene as SVG");
  dec->add_option("--view", opt.view, "view axis x,y,z toward the viewer");

  auto* st = app.add_subcommand("stars", "Majorana stars of a state");
  st->add_option("--state", opt.state, "state JSON file")->required();

  auto* red = app.add_subcommand("reduce", "three-level reduction of an N-level instance");
  add_triple(red, opt);

  auto* sw = app.add_subcommand("sweep", "spin-1 family sweep as CSV");
  sw->add_option("--config", opt.config, "sweep configuration JSON file")->required();

  auto* sc = app.add_subcommand("scene", "Bloch-sphere scene as SVG or JSON");
  sc->add_option("--case", opt.case_name)
      ->check(CLI::IsMember({"cnot", "cnot-reduced", "cnot-cp2", "spin1", "spin1-degenerate"}));
  sc->add_option("--observable", opt.observable);
  sc->add_option("--pre", opt.pre);
  sc->add_option("--post", opt.post);
  sc->add_option("--mode", opt.mode)->check(CLI::IsMember({"stars", "reduced"}));
  sc->add_option("--format", opt.format)->check(CLI::IsMember({"svg", "json"}));
  sc->add_option("--view", opt.view, "view axis x,y,z toward the viewer");
  sc->add_option("--theta", opt.theta, "spin1 case: post-state theta");
  sc->add_option("--xi", opt.xi, "spin1 case: post-state xi");

  auto* cn = app.add_subcommand("cnot", "CNOT report");
  cn->add_option("--scene-dir", opt.scene_dir, "write scene JSON and SVG files here");
  cn->add_option("--view", opt.view, "view axis x,y,z toward the viewer");

  auto* map = app.add_subcommand("spin1-map", "star-angle map and extrema loci");
  map->add_option("--theta-count", opt.theta_count);
  map->add_option("--xi-count", opt.xi_count);
  map->add_option("--locus-step", opt.locus_step, "theta scan step for the loci");
  map->add_option("--csv", opt.csv, "star-angle matrix CSV");
  map->add_option("--svg", opt.svg, "heatmap SVG");
  map->add_option("--locus-csv", opt.locus_csv, "extrema loci CSV");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return report_error(err, "usage-error", e.what(), kExitParse);
  }

  try {
    const Tolerances tol = build_tolerances(opt, err);
    if (*compute) return cmd_compute(opt, tol, out);
    if (*dec) return cmd_decompose(opt, tol, out, err);
    if (*st) return cmd_stars(opt, tol, out);
    if (*red) return cmd_reduce(opt, tol, out);
    if (*sw) return cmd_sweep(opt, tol, out);
    if (*sc) return cmd_scene(opt, tol, out, err);
    if (*cn) return cmd_cnot(opt, tol, out);
    return cmd_spin1_map(opt, tol, out);
  } catch (const Error& e) {
    return report_error(err, e);
  } catch (const std::exception& e) {
    return report_error(err, "internal-error", e.what(), kExitMathDomain);
  }
}

}  // namespace wvgeom::cli

#include "wvgeom/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace wvgeom::io {

namespace {

bool is_scalar(const Json& j) { return !j.is_array() && !j.is_object(); }

void emit(const Json& j, std::string& out, int depth) {
  const std::string pad(2 * depth + 2, ' ');
  const std::string close_pad(2 * depth, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(key).dump() + ": ";
        emit(value, out, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(), is_scalar);
      out += flat ? "[" : "[\n";
      bool first = true;
      for (const auto& value : j) {
        if (!first) out += flat ? ", " : ",\n";
        first = false;
        if (!flat) out += pad;
        emit(value, out, depth + 1);
      }
      out += flat ? "]" : "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_g17(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::kParse, what); }
[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::kValidation, what); }

Json nullable(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json encode_vec3(const Eigen::Vector3d& v) { return Json::array({v.x(), v.y(), v.z()}); }

std::string gauge_name(majorana::MappingGauge g) {
  switch (g) {
    case majorana::MappingGauge::kAuto: return "auto";
    case majorana::MappingGauge::kReflection: return "reflection";
    case majorana::MappingGauge::kQutritClosedForm: return "qutrit-closed-form";
  }
  return "auto";
}

std::vector<double> decode_grid(const Json& j, const char* name) {
  std::vector<double> grid;
  if (j.is_array()) {
    for (const auto& v : j) {
      if (!v.is_number()) invalid(std::string(name) + " entries must be numbers");
      grid.push_back(v.get<double>());
    }
    return grid;
  }
  if (!j.is_object()) invalid(std::string(name) + " must be an array or a range object");
  auto field = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_number()) {
      invalid(std::string(name) + "." + key + " must be a number");
    }
    return j[key].get<double>();
  };
  if (!j.contains("count") || !j["count"].is_number_integer() || j["count"].get<long>() < 0) {
    invalid(std::string(name) + ".count must be a nonnegative integer");
  }
  const long count = j["count"].get<long>();
  const double start = field("start");
  if (j.contains("step") == j.contains("stop")) {
    invalid(std::string(name) + " range needs exactly one of step or stop");
  }
  if (j.contains("step")) {
    const double step = field("step");
    for (long k = 0; k < count; ++k) grid.push_back(start + step * static_cast<double>(k));
  } else {
    const double stop = field("stop");
    for (long k = 0; k < count; ++k) {
      grid.push_back(count == 1 ? start
                                : start + (stop - start) * static_cast<double>(k) /
                                              static_cast<double>(count - 1));
    }
  }
  return grid;
}

}  // namespace

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump(const Json& j) {
  std::string out;
  emit(j, out, 0);
  out += '\n';
  return out;
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    parse_error(std::string("malformed JSON: ") + e.what());
  }
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_error("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

Json encode(Complex z) { return Json::array({z.real(), z.imag()}); }

Json encode(const PureState& s) {
  Json amps = Json::array();
  for (int k = 0; k < s.dim(); ++k) amps.push_back(encode(s[k]));
  return {{"dim", s.dim()}, {"amps", amps}};
}

Json encode(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(encode(m(r, c)));
    rows.push_back(row);
  }
  Json out = {{"dim", m.rows()}, {"rows", rows}};
  if (m.rows() != m.cols()) out["cols"] = m.cols();
  return out;
}

Json encode(const Observable& a) { return encode(a.mat()); }

Json encode(const weakval::WeakValueResult& r) {
  Json j = {{"value", encode(r.value)}, {"modulus", r.modulus}, {"argument", r.argument},
            {"exp_a", r.exp_a},         {"exp_a2", r.exp_a2}};
  j["prop_const"] = r.prop_const ? Json(*r.prop_const) : Json(nullptr);
  j["effective_state"] = r.effective_state ? encode(*r.effective_state) : Json(nullptr);
  return j;
}

Json encode(const majorana::MajoranaStar& s) {
  return {{"theta", s.theta}, {"phi", s.phi}, {"xyz", encode_vec3(s.bloch().vec())}};
}

Json encode(const majorana::StarSet& s) {
  Json stars = Json::array();
  for (const auto& star : s.stars) stars.push_back(encode(star));
  Json roots = Json::array();
  for (const auto& z : s.finite_roots) roots.push_back(encode(z));
  return {{"dim", s.dim},
          {"stars", stars},
          {"multiplicity", s.multiplicity},
          {"finite_roots", roots},
          {"infinity_count", s.infinity_count}};
}

Json encode(const majorana::CoherentMapping& m) {
  Json j = {{"u1", encode(m.u1.mat())},
            {"u2", encode(m.u2.mat())},
            {"phi_i", encode(m.phi_i)},
            {"phi_iprime", encode(m.phi_iprime)},
            {"mapped_pre", encode(m.mapped_pre)},
            {"mapped_eff", encode(m.mapped_eff)},
            {"gauge", gauge_name(m.gauge)},
            {"ill_conditioned", m.ill_conditioned}};
  j["mapped_post"] = m.mapped_post ? encode(*m.mapped_post) : Json(nullptr);
  j["alpha"] = m.alpha ? Json(*m.alpha) : Json(nullptr);
  return j;
}

Json encode(const majorana::ArgumentDecomposition& d) {
  Json pis = Json::array();
  for (const auto& z : d.qubit_wvs) pis.push_back(encode(z));
  Json omegas = Json::array();
  for (double w : d.solid_angles) omegas.push_back(nullable(w));
  return {{"weak_value", encode(d.weak_value)},
          {"exp_a", d.exp_a},
          {"exp_a2", d.exp_a2},
          {"prop_const", d.prop_const},
          {"qubit_weak_values", pis},
          {"solid_angles", omegas},
          {"arg_exp_a", d.arg_exp_a},
          {"total_arg", nullable(d.total_arg)},
          {"direct_arg", d.direct_arg},
          {"difference", nullable(d.difference)},
          {"modulus_product", nullable(d.modulus_product)},
          {"normalization_m", d.normalization_m},
          {"post_stars", encode(d.post_stars)},
          {"mapping", encode(d.mapping)}};
}

Json encode(const majorana::QutritReduction& r) {
  return {{"pre", encode(r.pre)},
          {"eff", encode(r.eff)},
          {"post", encode(r.post)},
          {"coords", encode(r.coords)},
          {"rank", r.rank}};
}

Json encode(const blochgeo::SceneGraph& g) {
  Json points = Json::array();
  for (const auto& p : g.points) points.push_back({{"label", p.label}, {"xyz", encode_vec3(p.xyz)}});
  Json arcs = Json::array();
  for (const auto& a : g.arcs) {
    Json samples = Json::array();
    for (const auto& s : a.samples) samples.push_back(encode_vec3(s));
    arcs.push_back({{"from", a.from},
                    {"to", a.to},
                    {"kind", blochgeo::arc_kind_name(a.kind)},
                    {"samples", samples}});
  }
  Json tris = Json::array();
  for (const auto& t : g.triangles) {
    tris.push_back({{"verts", Json::array({t.verts[0], t.verts[1], t.verts[2]})},
                    {"omega", nullable(t.omega)}});
  }
  return {{"points", points}, {"arcs", arcs}, {"triangles", tris}, {"caption", g.caption}};
}

Json encode(const experiments::CnotReport& r) {
  return {{"weak_value", encode(r.weak_value)},
          {"full", encode(r.full)},
          {"reduction", encode(r.reduction)},
          {"reduced", encode(r.reduced)},
          {"cp2_scene", encode(r.cp2_scene)}};
}

Json encode(const experiments::ExtremaLocus& l) {
  Json maxmod = Json::array();
  for (double v : l.max_modulus) maxmod.push_back(nullable(v));
  return {{"xi", l.xi},
          {"theta_max", l.theta_max},
          {"theta_min", l.theta_min},
          {"max_modulus", maxmod},
          {"min_modulus", l.min_modulus},
          {"divergent", std::vector<bool>(l.divergent.begin(), l.divergent.end())}};
}

Complex decode_complex(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  parse_error("complex number must be a real or [re, im]; got " + j.dump());
}

PureState decode_state(const Json& j, const Tolerances& tol) {
  if (!j.is_object() || !j.contains("amps") || !j["amps"].is_array()) {
    parse_error("state must be an object with an \"amps\" array");
  }
  const Json& amps = j["amps"];
  CVector v(static_cast<Eigen::Index>(amps.size()));
  for (size_t k = 0; k < amps.size(); ++k) v(static_cast<Eigen::Index>(k)) = decode_complex(amps[k]);
  if (j.contains("dim")) {
    if (!j["dim"].is_number_integer()) parse_error("state \"dim\" must be an integer");
    if (j["dim"].get<long>() != static_cast<long>(amps.size())) {
      invalid("state dim " + j["dim"].dump() + " disagrees with " + std::to_string(amps.size()) +
              " amplitudes");
    }
  }
  return PureState(v, tol.unit_norm);
}

Observable decode_observable(const Json& j, const Tolerances& tol) {
  if (!j.is_object() || !j.contains("rows") || !j["rows"].is_array()) {
    parse_error("operator must be an object with a \"rows\" array");
  }
  const Json& rows = j["rows"];
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (n == 0) invalid("operator has no rows");
  CMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Json& row = rows[static_cast<size_t>(r)];
    if (!row.is_array()) parse_error("operator rows must be arrays");
    if (static_cast<Eigen::Index>(row.size()) != n) invalid("operator must be square");
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = decode_complex(row[static_cast<size_t>(c)]);
  }
  if (j.contains("dim")) {
    if (!j["dim"].is_number_integer()) parse_error("operator \"dim\" must be an integer");
    if (j["dim"].get<long>() != static_cast<long>(n)) invalid("operator dim disagrees with rows");
  }
  return Observable(m, tol.hermitian);
}

experiments::SweepConfig decode_sweep_config(const Json& j) {
  if (!j.is_object()) invalid("sweep config must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "theta_grid" && key != "xi_grid" && key != "track_stars" && key != "unwrap" &&
        key != "outputs") {
      invalid("unknown sweep config key '" + key + "'");
    }
  }
  if (!j.contains("theta_grid") || !j.contains("xi_grid")) {
    invalid("sweep config needs theta_grid and xi_grid");
  }
  experiments::SweepConfig c;
  c.theta_grid = decode_grid(j["theta_grid"], "theta_grid");
  c.xi_grid = decode_grid(j["xi_grid"], "xi_grid");
  for (const char* flag : {"track_stars", "unwrap"}) {
    if (!j.contains(flag)) continue;
    if (!j[flag].is_boolean()) invalid(std::string(flag) + " must be a boolean");
    (std::string(flag) == "unwrap" ? c.unwrap : c.track_stars) = j[flag].get<bool>();
  }
  if (j.contains("outputs")) {
    if (!j["outputs"].is_array()) invalid("outputs must be an array of column names");
    for (const auto& o : j["outputs"]) {
      if (!o.is_string()) invalid("outputs must be an array of column names");
      c.outputs.push_back(o.get<std::string>());
    }
  }
  experiments::validate(c);
  return c;
}

}  // namespace wvgeom::io

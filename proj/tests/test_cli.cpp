#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "wvgeom/cli.hpp"
#include "wvgeom/experiments.hpp"
#include "wvgeom/io.hpp"

using namespace wvgeom;

namespace {

const std::string kFixtures = WVGEOM_FIXTURES;

std::string fx(const std::string& name) { return kFixtures + "/" + name; }

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> triple(const std::string& cmd, const std::string& obs, const std::string& pre,
                                const std::string& post) {
  return {cmd, "--observable", fx(obs), "--pre", fx(pre), "--post", fx(post)};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("wvgeom_cli_" + name)).string();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
}

std::string read_all(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("compute") {
  const auto r = run(triple("compute", "cnot_observable.json", "cnot_pre.json", "cnot_post.json"));
  REQUIRE(r.code == cli::kExitOk);
  const auto j = io::parse(r.out);
  CHECK(j["value"][0].get<double>() == doctest::Approx(-1.0));
  CHECK(j["value"][1].get<double>() == doctest::Approx(-2.0));
  CHECK(r.err.empty());
}

TEST_CASE("decompose in both modes") {
  auto args = triple("decompose", "cnot_observable.json", "cnot_pre.json", "cnot_post.json");
  const auto stars = run(args);
  REQUIRE(stars.code == 0);
  const auto js = io::parse(stars.out);
  CHECK(js["mode"] == "stars");
  CHECK(js["solid_angles"].size() == 3);
  CHECK(std::abs(js["difference"].get<double>()) < 1e-9);

  args.insert(args.end(), {"--mode", "reduced"});
  const auto reduced = run(args);
  REQUIRE(reduced.code == 0);
  const auto jr = io::parse(reduced.out);
  CHECK(jr["solid_angles"].size() == 2);
  CHECK(jr["reduction"]["rank"] == 3);
  CHECK(testsupport::angle_distance(jr["total_arg"].get<double>(), js["total_arg"].get<double>()) < 1e-9);
}

TEST_CASE("decompose writes scene files") {
  const std::string json_path = temp_path("scene.json"), svg_path = temp_path("scene.svg");
  auto args = triple("decompose", "spin1_sz.json", "spin1_pre.json", "spin1_post_generic.json");
  args.insert(args.end(), {"--scene-json", json_path, "--scene-svg", svg_path, "--view", "1,1,0.5"});
  const auto r = run(args);
  REQUIRE(r.code == 0);
  const auto scene = io::parse(read_all(json_path));
  CHECK(scene["triangles"].size() == 2);
  CHECK(read_all(svg_path).find("<svg") != std::string::npos);
  std::filesystem::remove(json_path);
  std::filesystem::remove(svg_path);
}

TEST_CASE("stars") {
  const auto r = run({"stars", "--state", fx("five_level_state.json")});
  REQUIRE(r.code == 0);
  const auto j = io::parse(r.out);
  CHECK(j["stars"].size() == 4);
  CHECK(j["infinity_count"] == 2);
  CHECK(j["round_trip_fidelity"].get<double>() > 1.0 - 1e-10);
}

TEST_CASE("reduce") {
  const auto r = run(triple("reduce", "cnot_observable.json", "cnot_pre.json", "cnot_post.json"));
  REQUIRE(r.code == 0);
  const auto j = io::parse(r.out);
  CHECK(j["observable"]["dim"] == 3);
  CHECK(j["rank"] == 3);
}

TEST_CASE("sweep") {
  const auto r = run({"sweep", "--config", fx("sweep_small.json")});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string header;
  std::getline(in, header);
  CHECK(header == "theta,xi,wv_mod,wv_arg,omega1,omega2,divergent");
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 10);
  CHECK(run({"sweep", "--config", fx("sweep_empty_grid.json")}).code == cli::kExitValidation);
  CHECK(run({"sweep", "--config", fx("sweep_unknown_column.json")}).code == cli::kExitValidation);
}

TEST_CASE("scenes by case") {
  for (const char* name : {"cnot", "cnot-reduced", "cnot-cp2", "spin1", "spin1-degenerate"}) {
    const auto svg = run({"scene", "--case", name});
    CHECK_MESSAGE(svg.code == 0, name);
    CHECK(svg.out.find("</svg>") != std::string::npos);
    const auto json = run({"scene", "--case", name, "--format", "json"});
    CHECK(json.code == 0);
    CHECK(io::parse(json.out).contains("triangles"));
  }
  const auto spin = io::parse(run({"scene", "--case", "spin1", "--format", "json"}).out);
  CHECK(spin["caption"].get<std::string>().find("near-coplanar") != std::string::npos);
  CHECK(run({"scene", "--case", "spin1", "--view", "0,0,0"}).code == cli::kExitValidation);
  CHECK(run({"scene", "--case", "bogus"}).code == cli::kExitParse);
  CHECK(run({"scene"}).code == cli::kExitValidation);
}

TEST_CASE("cnot report") {
  const std::string dir = temp_path("scenes");
  std::filesystem::create_directories(dir);
  const auto r = run({"cnot", "--scene-dir", dir});
  REQUIRE(r.code == 0);
  const auto j = io::parse(r.out);
  CHECK(j["weak_value"]["value"][1].get<double>() == doctest::Approx(-2.0));
  for (const char* f : {"cnot_full.json", "cnot_full.svg", "cnot_reduced.json", "cnot_reduced.svg",
                        "cnot_cp2.json", "cnot_cp2.svg"}) {
    CHECK_MESSAGE(std::filesystem::exists(dir + "/" + f), f);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("spin1-map") {
  const std::string csv = temp_path("map.csv"), locus = temp_path("locus.csv");
  const auto r = run({"spin1-map", "--theta-count", "5", "--xi-count", "4", "--locus-step", "0.01", "--csv",
                      csv, "--locus-csv", locus});
  REQUIRE(r.code == 0);
  const auto j = io::parse(r.out);
  CHECK(j["column_min_deg"].size() == 4);
  CHECK(j["locus"]["divergent"].size() == 4);
  const std::string text = read_all(csv);
  CHECK(std::count(text.begin(), text.end(), '\n') == 21);
  CHECK(read_all(locus).rfind("xi,theta_max", 0) == 0);
  CHECK(run({"spin1-map", "--theta-count", "1"}).code == cli::kExitValidation);
  std::filesystem::remove(csv);
  std::filesystem::remove(locus);
}

TEST_CASE("error exit codes and payloads") {
  SUBCASE("orthogonal pre and post is a math-domain error") {
    const auto r = run(triple("compute", "spin1_sz.json", "spin1_pre.json", "spin1_post_divergent.json"));
    CHECK(r.code == cli::kExitMathDomain);
    CHECK(r.out.empty());
    const auto j = io::parse(r.err);
    CHECK(j["error"] == "orthogonal-pre-post");
    CHECK(j["exit_code"] == 2);
    CHECK(j["message"].is_string());
  }
  SUBCASE("malformed JSON") {
    const auto r = run({"stars", "--state", fx("malformed.json")});
    CHECK(r.code == cli::kExitParse);
    CHECK(io::parse(r.err)["error"] == "parse-error");
  }
  SUBCASE("missing file") {
    CHECK(run({"stars", "--state", fx("nope.json")}).code == cli::kExitParse);
  }
  SUBCASE("usage errors") {
    const auto r = run({});
    CHECK(r.code == cli::kExitParse);
    CHECK(io::parse(r.err)["error"] == "usage-error");
    CHECK(run({"frobnicate"}).code == cli::kExitParse);
    CHECK(run({"compute", "--pre", fx("spin1_pre.json")}).code == cli::kExitParse);
    CHECK(run({"decompose", "--mode", "sideways"}).code == cli::kExitParse);
  }
  SUBCASE("validation failures") {
    CHECK(run(triple("compute", "not_hermitian.json", "qubit_pre.json", "qubit_pre.json")).code ==
          cli::kExitValidation);
    CHECK(run({"stars", "--state", fx("state_bad_norm.json")}).code == cli::kExitValidation);
    CHECK(run({"stars", "--state", fx("state_dim_mismatch.json")}).code == cli::kExitValidation);
    CHECK(run(triple("compute", "cnot_observable.json", "spin1_pre.json", "spin1_pre.json")).code ==
          cli::kExitValidation);
    CHECK(run({"--tol", "bogus=1", "cnot"}).code == cli::kExitValidation);
    CHECK(run({"--tol", "unit_norm=-1", "cnot"}).code == cli::kExitValidation);
  }
  SUBCASE("help") {
    const auto r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("decompose") != std::string::npos);
  }
}

TEST_CASE("degenerate star triangle gives partial output") {
  // Post-state with one star antipodal to the effective-state star.
  const experiments::Spin1Family family;
  const auto& m = family.mapping();
  const std::vector<majorana::MajoranaStar> stars{
      majorana::MajoranaStar::from_angles(kPi - m.phi_iprime.theta, kPi),
      majorana::MajoranaStar::from_angles(1.0, 0.3)};
  const PureState post(m.total().mat().adjoint() * majorana::stars_to_state(stars).amps());
  const std::string path = temp_path("degenerate_post.json");
  write_file(path, io::dump(io::encode(post)));

  std::vector<std::string> args{"decompose", "--observable", fx("spin1_sz.json"), "--pre",
                                fx("spin1_pre.json"), "--post", path};
  const auto r = run(args);
  CHECK(r.code == cli::kExitPartialGeometry);
  const auto j = io::parse(r.out);
  CHECK(j["partial"] == true);
  int nulls = 0;
  for (const auto& w : j["solid_angles"]) nulls += w.is_null();
  CHECK(nulls == 1);
  CHECK(io::parse(r.err)["error"] == "degenerate-star-triangle");

  const auto scene = run({"scene", "--observable", fx("spin1_sz.json"), "--pre", fx("spin1_pre.json"), "--post",
                          path});
  CHECK(scene.code == cli::kExitPartialGeometry);
  CHECK(scene.out.find("undefined") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("tolerance overrides") {
  setenv("WV_TOL_OVERRIDE", R"({"unit_norm": 2})", 1);
  const auto r = run({"stars", "--state", fx("state_bad_norm.json")});
  unsetenv("WV_TOL_OVERRIDE");
  CHECK(r.code == 0);
  CHECK(r.err.find("warning: tolerance unit_norm overridden to 2 by WV_TOL_OVERRIDE") != std::string::npos);

  // Identical states count as orthogonal once the threshold exceeds 1.
  CHECK(run({"--tol", "orthogonal_pre_post=1.5", "compute", "--observable", fx("spin1_sz.json"), "--pre",
             fx("spin1_pre.json"), "--post", fx("spin1_pre.json")})
            .code == cli::kExitMathDomain);

  setenv("WV_TOL_OVERRIDE", "[1]", 1);
  CHECK(run({"cnot"}).code == cli::kExitValidation);
  unsetenv("WV_TOL_OVERRIDE");
}

TEST_CASE("output is deterministic") {
  const auto args = triple("decompose", "cnot_observable.json", "cnot_pre.json", "cnot_post.json");
  CHECK(run(args).out == run(args).out);
  const std::string path = temp_path("out.json");
  auto with_file = args;
  with_file.insert(with_file.begin(), {"-o", path});
  REQUIRE(run(with_file).code == 0);
  CHECK(read_all(path) == run(args).out);
  std::filesystem::remove(path);
}

}  // TEST_SUITE

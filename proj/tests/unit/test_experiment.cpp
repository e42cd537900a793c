#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cmclab/errors.hpp"
#include "config.hpp"
#include "render.hpp"
#include "scenarios.hpp"

using namespace cmclab;
using namespace cmclab::experiment;
namespace fs = std::filesystem;

namespace {

bool has_error(const std::vector<std::string>& errors, const std::string& prefix) {
  return std::any_of(errors.begin(), errors.end(), [&](const std::string& e) { return e.rfind(prefix, 0) == 0; });
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json small_ramp() {
  return json::parse(R"({
    "scenario": "spruck-ramp",
    "H": 0.5,
    "h": 0.03125,
    "domain": {"shape": "lens", "left": [-0.4, 0], "right": [0.4, 0], "r_top": 0.5, "r_bottom": 0.5},
    "boundary_data": {
      "top": {"type": "ramp", "profile": {"kind": "constant", "value": 1.0}},
      "bottom": {"type": "finite", "profile": {"kind": "constant", "value": 0.0}}
    },
    "sequence": {"n_list": [1, 2, 4]},
    "detector": {"tau": 20, "boundary_trim": 2},
    "shift": 0.5
  })");
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("cmclab_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("shipped configurations are valid") {
  for (const auto& name : scenario_names()) {
    const fs::path file = fs::path(CMCLAB_CONFIG_DIR) / (name + ".json");
    INFO(file.string());
    const auto errors = validate_config(read_json_file(file));
    CHECK(errors.empty());
    CHECK(load_config(file).scenario == name);
  }
}

TEST_CASE("schema errors carry field paths") {
  json doc = small_ramp();
  doc["H"] = -1;
  doc["domain"].erase("r_bottom");
  doc["domain"]["colour"] = "red";
  doc["sequence"]["n_list"] = {1, 2};
  doc["boundary_data"]["top"]["profile"]["kind"] = "spline";
  doc["detector"]["tau"] = 0.5;
  doc["seed"] = -3;
  const auto errors = validate_config(doc);
  CHECK(has_error(errors, "H: must be positive"));
  CHECK(has_error(errors, "domain.r_bottom: required field is missing"));
  CHECK(has_error(errors, "domain.colour: unknown field"));
  CHECK(has_error(errors, "sequence.n_list: needs at least three members"));
  CHECK(has_error(errors, "boundary_data.top.profile.kind: unknown profile"));
  CHECK(has_error(errors, "detector.tau: must exceed 1"));
  CHECK(has_error(errors, "seed: expected a non-negative integer"));
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
}

TEST_CASE("missing data tags and scenarios are rejected") {
  json doc = small_ramp();
  doc["boundary_data"].erase("bottom");
  CHECK(has_error(validate_config(doc), "boundary_data: no data for tag 'bottom'"));
  doc = small_ramp();
  doc["scenario"] = "everything";
  CHECK(has_error(validate_config(doc), "scenario: unknown scenario"));
  CHECK(has_error(validate_config(json::array()), "$"));
  doc = small_ramp();
  doc["boundary_data"]["top"] = {{"type", "capped"}, {"level", 1.0}, {"level_per_n", 2.0}};
  CHECK(has_error(validate_config(doc), "boundary_data.top: exactly one of"));
}

TEST_CASE("configurations accept comments") {
  const fs::path dir = scratch("comments");
  fs::create_directories(dir);
  std::ofstream(dir / "c.json") << "// header\n" << small_ramp().dump(2) << "\n/* trailing */\n";
  CHECK(load_config(dir / "c.json").n_list.size() == 3);
  std::ofstream(dir / "bad.json") << "{ \"scenario\": ";
  CHECK_THROWS_AS(load_config(dir / "bad.json"), ConfigError);
}

TEST_CASE("boundary data built from descriptors") {
  json doc = small_ramp();
  doc["boundary_data"]["bottom"] = {{"type", "capped"}, {"level_per_n", "-diameter"}};
  doc["boundary_data"]["top"]["profile"] = {{"kind", "tanh_step"}, {"axis", {1, 0}}, {"width", 0.2},
                                            {"amplitude", 2.0}, {"sharpen", true}};
  doc["boundary_data"]["top"]["type"] = "finite";
  const ExperimentConfig cfg = parse_config(doc);
  const BoundaryData d = make_boundary_data(cfg, *cfg.domain, 3.0);
  CHECK(std::get<CappedData>(d.at("bottom")).level == doctest::Approx(-3.0 * cfg.domain->diameter()));
  const auto& top = std::get<FiniteData>(d.at("top"));
  CHECK(top.value({0.1, 0.2}, 0.0) == doctest::Approx(2.0 * std::tanh(3.0 * 0.1 / 0.2)));
  // Resolved domain in the echo.
  CHECK(cfg.echo["domain"].contains("loops"));
  CHECK(cfg.echo["detector"]["fit_tol"].get<double>() == doctest::Approx(2 * 0.03125));
}

TEST_CASE("unduloid scenario derives its annulus") {
  const json doc = json::parse(R"({"scenario": "unduloid-sequence", "H": 0.5, "h": 0.01,
                                   "t_fractions": [0.8, 0.9, 0.95]})");
  const ExperimentConfig cfg = parse_config(doc);
  REQUIRE(cfg.domain);
  CHECK(cfg.domain->loop_count() == 2);
  json thin = doc;
  thin["h"] = 0.1;
  CHECK(has_error(validate_config(thin), "t_fractions: common annulus is thinner than 8h"));
}

TEST_CASE("runs are deterministic and reports re-render identically") {
  const ExperimentConfig cfg = parse_config(small_ramp());
  const fs::path a = scratch("run_a"), b = scratch("run_b");
  const RunResult ra = run(cfg, a);
  const RunResult rb = run(cfg, b);
  CHECK(without_timings(ra.report) == without_timings(rb.report));
  CHECK(ra.report.contains("timings"));
  CHECK(ra.report["pass"].get<bool>() == ra.pass);
  for (const auto& s : ra.report["solves"]) {
    for (const char* key : {"residual_norm", "iterations", "converged", "max_W"}) CHECK(s.contains(key));
  }
  for (const auto& l : ra.report["lines"]) {
    for (const char* key : {"arc", "fit_rms", "flux_ratios", "alignment", "endpoints", "accepted", "reason"}) {
      CHECK(l.contains(key));
    }
  }
  CHECK(slurp(a / "plots/detection.svg") == slurp(b / "plots/detection.svg"));
  CHECK(slurp(a / "fields/u_2.csv") == slurp(b / "fields/u_2.csv"));

  // Re-render from the stored report and fields.
  const std::string svg = slurp(a / "plots/detection.svg");
  const std::string checks = slurp(a / "tables/checks.csv");
  fs::remove(a / "plots/detection.svg");
  fs::remove(a / "tables/checks.csv");
  const auto written = render_artifacts(a, read_json_file(a / "report.json"));
  CHECK(std::find(written.begin(), written.end(), "plots/detection.svg") != written.end());
  CHECK(slurp(a / "plots/detection.svg") == svg);
  CHECK(slurp(a / "tables/checks.csv") == checks);
}

TEST_CASE("empty detection draws the outline only") {
  const Domain dom = make_disk({}, 0.5);
  const std::string svg = render_svg(dom, nullptr, json::array());
  CHECK(svg.find("<path") != std::string::npos);
  CHECK(svg.find("<rect x=") == std::string::npos);
  CHECK(svg.find("<circle") == std::string::npos);
  CHECK(svg == render_svg(dom, nullptr, json::array()));
}

TEST_CASE("barrier scenario with random oracle pairs") {
  json doc = json::parse(R"({"scenario": "barrier-identities", "seed": 3, "H_list": [0.5],
                             "t_fractions": [0.2, 0.5], "limit_fractions": [0.9, 0.99, 0.999],
                             "oracle": {"radii": 10, "pairs": 3}, "table_points": 5})");
  const fs::path dir = scratch("barrier");
  const RunResult r = run(parse_config(doc), dir);
  CHECK(r.pass);
  REQUIRE(r.report["oracle"].size() == 3);
  const double H0 = r.report["oracle"][0]["H"].get<double>();
  CHECK(H0 >= 0.25);
  CHECK(H0 <= 2.0);
  // Same seed, same pairs.
  const RunResult again = run(parse_config(doc), scratch("barrier2"));
  CHECK(again.report["oracle"] == r.report["oracle"]);
  CHECK(fs::exists(dir / "tables/barrier_H0.5_t0.25.csv"));
  std::ifstream table(dir / "tables/barrier_H0.5_t0.25.csv");
  std::string header;
  std::getline(table, header);
  CHECK(header == "r,h_t,f_prime,g");
}

#pragma once

// Experiment configuration: one JSON document per run (comments allowed).
//
//   {
//     "scenario": "spruck-ramp",
//     "seed": 0,
//     "output_dir": "out/spruck-ramp",
//     "H": 0.5,
//     "h": 0.00390625,
//     "domain": {"shape": "lens", ...} | {"pieces": [...]} | {"loops": [...]},
//     "boundary_data": {"top": {"type": "ramp", "profile": {...}}, ...},
//     "sequence": {"n_list": [1, 2, 4, 8, 16]},
//     "solver": {...}, "detector": {...},
//     ... scenario-specific keys
//   }

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cmclab/analysis.hpp"
#include "cmclab/geometry.hpp"
#include "cmclab/solver.hpp"

namespace cmclab::experiment {

using json = nlohmann::ordered_json;

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"barrier-identities", "solver-validate",
                                                  "unduloid-sequence", "spruck-ramp",
                                                  "bounded-data",      "infinite-data"};
  return names;
}

/// Boundary data of one tag, still in descriptor form.
struct DataSpec {
  std::string type;  ///< finite | ramp | capped
  json profile;      ///< finite and ramp
  double level = 0.0;        ///< capped: fixed level, used when per_n is 0
  double level_per_n = 0.0;  ///< capped: L_n = n * level_per_n
};

struct ExperimentConfig {
  std::string scenario;
  std::uint64_t seed = 0;
  std::string output_dir = "out";
  double H = 0.5;
  double h = 1.0 / 128.0;
  std::optional<Domain> domain;
  std::map<std::string, DataSpec> data;
  std::vector<double> n_list;
  SolverConfig solver;
  DetectorParams detector;

  // barrier-identities
  std::vector<double> H_list;
  std::vector<double> t_fractions;      ///< of 1/(4H)
  std::vector<double> limit_fractions;  ///< of 1/(4H)
  std::size_t oracle_radii = 50;
  std::vector<std::pair<double, double>> oracle_pairs;  ///< (H, t)
  std::size_t table_points = 101;

  // solver-validate
  std::vector<double> h_list;
  double order_min = 1.7;
  double order_max = 2.3;

  // spruck-ramp
  double shift = 0.0;

  // bounded-data / infinite-data
  std::vector<std::string> constrained_tags;
  std::vector<double> blowup_offsets;  ///< in units of h
  double blowup_offset_check = 4.0;    ///< in units of h
  double blowup_min_ratio = 0.0;       ///< of the cap level, at the largest n

  /// Normalized echo of the configuration with the resolved domain.
  json echo;
};

/// Parses and schema-checks a configuration. Every problem is reported with
/// its field path; throws ConfigError listing all of them.
ExperimentConfig parse_config(const json& doc);
ExperimentConfig load_config(const std::filesystem::path& file);

/// All schema problems, empty when the document is valid.
std::vector<std::string> validate_config(const json& doc);

json read_json_file(const std::filesystem::path& file);

/// Boundary data of the sequence member n, built from the descriptors.
BoundaryData make_boundary_data(const ExperimentConfig& cfg, const Domain& dom, double n);

}  // namespace cmclab::experiment

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "kmboot/estimators.hpp"
#include "kmboot/simlab.hpp"

namespace kmboot::cli {

// Parsed invocation of one CLI command.
struct RunConfig {
  std::string command;            // fit | band | gini | check-conditions | simulate
  std::string input_path;         // data CSV, or scenario file for simulate
  std::string output_path;        // empty = stdout
  std::string format = "json";    // json | csv
  std::string band_kind = "mrl";  // mrl | lorenz
  double alpha = 0.05;
  std::size_t replicates = 1000;  // B
  std::optional<std::uint64_t> seed;
  double t1 = 0.0;
  std::optional<double> t2;       // absent = auto-suggested for mrl bands
  double t2_threshold = 0.05;
  std::size_t grid_points = 201;  // lorenz band output grid
  unsigned threads = 0;           // 0 = KMBOOT_THREADS / hardware
};

// Parses `time,status` CSV (status 1 = event, 0 = censored, '#' comments).
// Throws std::invalid_argument with line-numbered diagnostics; appends
// duplicate-time warnings when `warnings` is given.
ObservedSample ingest(const std::string& path,
                      std::vector<std::string>* warnings = nullptr);

// Scenario files for `simulate`: one `key = value` per line.
struct Scenario {
  std::string experiment;  // coverage | gamma_sweep | gill_bounds |
                           // jump_inequality | event_fraction
  sim::DataModel model;
  std::size_t n = 100;
  std::size_t replicates = 100;
  double alpha = 0.05;
  std::string band = "mrl";  // coverage target: mrl | lorenz | gini
  double t1 = 0.0;
  double t2 = 0.5;
  std::size_t repetitions = 100;
  std::optional<std::uint64_t> seed;
  std::vector<std::size_t> n_list;
  std::vector<double> beta_list;
  std::size_t trials = 10000;
  std::size_t grid_points = 21;
  std::size_t truth_repetitions = 11;
  std::size_t lorenz_grid = 201;
};

Scenario parse_scenario(const std::string& path);

// Runs a command and returns the full output document (schema:
// command/seed/n/alpha/B/B_dropped/warnings/result). Throws on invalid
// input; DegenerateBootstrapError propagates.
nlohmann::json execute(const RunConfig& config);

// CSV rendering of an output document (fit, band, gini, check-conditions).
std::string to_csv(const nlohmann::json& output);

// Full command: execute, write to output_path (or stdout), map errors to
// exit codes (0 ok, 2 validation error, 3 degenerate bootstrap). Errors are
// emitted as {"error": {code, message}} JSON.
int run(const RunConfig& config);

}  // namespace kmboot::cli

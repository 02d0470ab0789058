#pragma once

#include <string>
#include <vector>

#include "gct/config.hpp"
#include "gct/csv.hpp"

namespace gct {

// One point of the outer-product sweep. Floquet fields are only varied for
// the floquet engine.
struct GridPoint {
  int id = 0;
  int dim = 1;
  int L = 2;
  double alpha = 0;
  double chi = 0;
  double epsilon = 0;
  double delta = 0;
  double dt_step = 0;
};

std::vector<GridPoint> expand_grid(const ExperimentConfig& c);

// Column names of the standard observable table (after the parameter columns).
const std::vector<std::string>& observable_columns();

// Output of one grid point: named CSV tables (the engine table plus any
// auxiliary tables) sharing the parameter columns.
struct PointOutput {
  std::vector<std::pair<std::string, CsvTable>> tables;
  bool valid = true;
  std::string note;
};

// Runs a single grid point. `workers` bounds trajectory-level threads.
PointOutput run_point(const ExperimentConfig& c, const GridPoint& p, int workers);

struct PointStatus {
  int id = 0;
  std::string status;  // ok | invalid | failed
  std::string message;
};

struct RunManifest {
  std::string config_hash;
  std::string code_version;
  bool complete = false;
  int workers = 0;
  double wall_clock = 0;
  std::vector<PointStatus> points;
  std::vector<std::string> outputs;
  bool skipped = false;  // previous complete manifest matched; nothing ran

  std::string to_json() const;
  static RunManifest from_json(const std::string& text);
};

struct RunOptions {
  int workers = 0;       // 0: default_workers()
  bool verbose = false;  // progress on stderr
};

// Executes every grid point not already finished in config.output, merges
// per-point tables into one long-format CSV per table name and writes the
// manifest last. Re-running a complete manifest is a no-op.
RunManifest run(const ExperimentConfig& c, const RunOptions& opt = {});

std::string config_hash(const ExperimentConfig& c);

// Report reducers over long-format observable tables ------------------------

enum class Reducer { optimal_over_time, optimal_over_rate, scaling_fit };
Reducer parse_reducer(const std::string& s);

struct ReportOptions {
  std::string metric = "xi2";  // observable column to minimize
  std::string control = "chi";  // control-parameter column
  std::string x = "N";          // scaling_fit abscissa
  std::vector<double> jt;       // optimal_over_rate grid of J_tot t
};

// Inputs must share one header. Output columns:
//   optimal_over_time:  <group columns>, <control>, sensitivity, stderr, t_opt
//   optimal_over_rate:  <group columns>, Jt, chi_opt, sensitivity
//   scaling_fit:        <group columns>, exponent, exponent_err, intercept, points
CsvTable aggregate(const std::vector<CsvTable>& inputs, Reducer reducer, const ReportOptions& opt);

}  // namespace gct

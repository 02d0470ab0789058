#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gct/dtwa.hpp"
#include "gct/lattice.hpp"
#include "gct/schedule.hpp"

namespace gct {

// Thrown for malformed or inconsistent configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Engine { dtwa, exact, spinwave, floquet };
Engine parse_engine(const std::string& s);
std::string to_string(Engine e);

struct LatticeConfig {
  std::vector<int> dims{1};
  std::vector<int> sizes{16};  // linear extent L per axis; N = L^d
  std::vector<int> sites;      // if set, replaces sizes: L = round(N^(1/d)) per dim
  Boundary boundary = Boundary::periodic;
  double filling = 1.0;
  double filling_epsilon = 0.0;
};

struct ModelConfig {
  Preset preset = Preset::gct;
  std::vector<double> alpha{0.0};
  std::vector<double> chi{std::numeric_limits<double>::infinity()};
  double h = 0.0;
  Anisotropy custom;  // used by Preset::custom
};

struct TimeConfig {
  std::vector<double> values;  // explicit grid; overrides the range below
  double t_min = 0.0;
  double t_max = 1.0;
  int points = 11;
  bool per_chi = false;  // range in units of 1/chi (finite chi only)

  std::vector<double> build(double chi) const;
};

struct SegmentConfig {
  std::optional<Anisotropy> J;  // empty: the model's anisotropy
  double h = 0.0;
  int sign = 1;
  double duration = 0.0;
  std::optional<Rotation> rotate_before;
};

struct ScheduleConfig {
  std::string type = "constant";  // constant | segments | echo
  std::vector<SegmentConfig> segments;
  double phi0_scale = 0.1;  // echo: phi0 = phi0_scale / N
};

struct EnsembleConfig {
  int n_traj = 10000;
  std::uint64_t seed = 1;
  double dt = 0.05;  // step times J_tot
  int batch = 32;
  int resamples = 100;
  int resample_size = 1000;
  std::uint64_t bootstrap_seed = 7;
  FieldBackend backend = FieldBackend::automatic;
};

struct DisorderConfig {
  std::vector<double> epsilon{0.0};
  int realizations = 1;  // independent fillings per grid point
  // strength: per-trajectory coupling multiplier 1 +- epsilon
  // filling: filling fraction lattice.filling * (1 +- epsilon) per realization
  std::string kind = "strength";
};

struct FloquetConfig {
  std::vector<double> delta{std::numeric_limits<double>::infinity()};
  std::vector<double> dt_step{0.1};
  double total_time = 0.0;  // 0: the time grid maximum
};

struct SpinwaveConfig {
  bool correlators = false;
};

struct ExperimentConfig {
  std::string name = "experiment";
  Engine engine = Engine::dtwa;
  LatticeConfig lattice;
  ModelConfig model;
  ScheduleConfig schedule;
  EnsembleConfig ensemble;
  DisorderConfig disorder;
  TimeConfig time;
  FloquetConfig floquet;
  SpinwaveConfig spinwave;
  std::string output = "out";

  // Throws ConfigError.
  void validate() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& c);

// 64-bit FNV-1a
std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t v);

// Number formatting shared by every CSV and JSON writer: shortest
// round-trip representation, "inf"/"-inf"/"nan" for non-finite values.
std::string format_number(double v);
double parse_number(const std::string& s);

}  // namespace gct

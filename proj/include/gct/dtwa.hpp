#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "gct/lattice.hpp"
#include "gct/parallel.hpp"
#include "gct/schedule.hpp"

namespace gct {

// n x 3 classical spin components, rows are spins.
using SpinConfiguration = Eigen::Matrix<double, Eigen::Dynamic, 3>;

// +1/2 along z, transverse components +-1/2 from the (seed, index) stream.
SpinConfiguration sample_initial(int n, std::uint64_t seed, std::uint64_t index);

// Per-trajectory interaction multiplier, 1 +- eps with equal weight.
double strength_multiplier(std::uint64_t seed, std::uint64_t index, double eps);

// B_i = 2 sign J^mu sum_j f_ij s_j^mu + sign h z
SpinConfiguration mean_field(const CouplingModel& model, const SpinConfiguration& s, int sign = 1,
                             double multiplier = 1.0);

enum class FieldBackend { automatic, dense, fft };

// Computes F = K S for a block of columns.
class FieldEngine {
 public:
  virtual ~FieldEngine() = default;
  virtual void apply(const Eigen::MatrixXd& S, Eigen::MatrixXd& F) = 0;
};

std::unique_ptr<FieldEngine> make_dense_field(const Eigen::MatrixXd& kernel);
// Circulant kernel on a fully occupied periodic lattice; columns = count.
std::unique_ptr<FieldEngine> make_fft_field(const LatticeSpec& spec, double alpha, int columns);

struct DtwaSettings {
  int n_traj = 10000;
  std::uint64_t seed = 1;
  double dt_scale = 0.05;  // step = dt_scale / J_tot per segment
  int workers = 0;         // 0: default worker count
  int batch = 32;          // trajectories integrated together
  double epsilon = 0;      // strength fluctuation
  FieldBackend backend = FieldBackend::automatic;
};

struct TrajectoryEnsemble {
  std::vector<double> t;
  int n_traj = 0;
  int n_spins = 0;
  // [time * n_traj + trajectory]
  std::vector<double> sx, sy, sz;
  std::vector<double> drift;  // max relative spin-length drift per trajectory
  std::vector<int> invalid;   // trajectories with drift above 1e-4

  bool valid() const { return invalid.empty(); }
  double at(const std::vector<double>& v, std::size_t time, std::size_t traj) const {
    return v[time * n_traj + traj];
  }
};

// lattice/alpha are used by the FFT backend only.
struct LatticeContext {
  const LatticeSpec* spec = nullptr;
  const SiteSet* sites = nullptr;
};

TrajectoryEnsemble run_ensemble(const CouplingModel& model, const Schedule& schedule,
                                const std::vector<double>& times, const DtwaSettings& settings,
                                LatticeContext lattice = {});

// Ensemble moments over all trajectories, or over a multiset of indices.
Moments ensemble_moments(const TrajectoryEnsemble& e);
Moments ensemble_moments(const TrajectoryEnsemble& e, const std::vector<std::uint32_t>& indices);

struct BootstrapSeries {
  std::vector<ObservableRow> value;  // full-ensemble estimate
  std::vector<ObservableRow> error;  // bootstrap standard error per field
};

BootstrapSeries bootstrap(const TrajectoryEnsemble& e, double N, int n_resamples = 100, int resample_size = 1000,
                          std::uint64_t seed = 7);

// Bootstrap standard error of the mean of a per-trajectory scalar.
double bootstrap_mean_error(const std::vector<double>& x, int n_resamples, int resample_size, std::uint64_t seed);

struct EchoReport {
  double t = 0;
  double phi0 = 0;
  double theta_min = 0;
  std::vector<double> phi;
  std::vector<double> signal, signal_err;  // <S^min> after the echo
  double slope = 0, slope_err = 0;
  double sensitivity = 0;  // N (dphi_echo)^2
  bool null_signal = false;
};

// Forward evolution for t, rotation by phi about the antisqueezed axis of a
// phi = 0 reference ensemble, sign-reversed evolution for t.
EchoReport echo_run(const CouplingModel& model, const Anisotropy& J, double h, double t, double phi0,
                    const DtwaSettings& settings, LatticeContext lattice = {});


}  // namespace gct

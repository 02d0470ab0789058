#include <cmath>
#include <stdexcept>

#include "gct/dtwa.hpp"
#include "gct/rng.hpp"

namespace gct {

namespace {

std::vector<std::uint32_t> resample(std::uint64_t seed, int r, int n, int m) {
  auto g = make_stream(seed, static_cast<std::uint64_t>(r));
  std::vector<std::uint32_t> idx(m);
  for (auto& i : idx) i = static_cast<std::uint32_t>(uniform_index(g, n));
  return idx;
}

void check(int n, int n_resamples, int m) {
  if (n_resamples < 2) throw std::invalid_argument("bootstrap: need at least two resamples");
  if (m < 2 || m > n) throw std::invalid_argument("bootstrap: resample size must lie in [2, n_traj]");
}

// Sample standard deviation of x around its mean.
double spread(const std::vector<double>& x) {
  double mean = 0;
  for (double v : x) mean += v;
  mean /= x.size();
  double ss = 0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (x.size() - 1));
}

// Angles live on [0, pi): spread of the wrapped deviations from a center.
double angle_spread(const std::vector<double>& x, double center) {
  std::vector<double> d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = std::remainder(x[i] - center, M_PI);
  return spread(d);
}

}  // namespace

BootstrapSeries bootstrap(const TrajectoryEnsemble& e, double N, int n_resamples, int m, std::uint64_t seed) {
  check(e.n_traj, n_resamples, m);
  BootstrapSeries out;
  out.value = observables(ensemble_moments(e), N);
  const std::size_t T = e.t.size();
  std::vector<std::vector<ObservableRow>> draws(n_resamples);
  for (int r = 0; r < n_resamples; ++r) draws[r] = observables(ensemble_moments(e, resample(seed, r, e.n_traj, m)), N);
  out.error.resize(T);
  std::vector<double> col(n_resamples);
  for (std::size_t k = 0; k < T; ++k) {
    auto field = [&](double ObservableRow::*p) {
      for (int r = 0; r < n_resamples; ++r) col[r] = draws[r][k].*p;
      return spread(col);
    };
    ObservableRow& err = out.error[k];
    err.t = e.t[k];
    err.sx = field(&ObservableRow::sx);
    err.sy = field(&ObservableRow::sy);
    err.sz = field(&ObservableRow::sz);
    err.var_min = field(&ObservableRow::var_min);
    err.var_max = field(&ObservableRow::var_max);
    err.xi2 = field(&ObservableRow::xi2);
    err.qfi_sens = field(&ObservableRow::qfi_sens);
    for (int r = 0; r < n_resamples; ++r) col[r] = draws[r][k].theta_min;
    err.theta_min = angle_spread(col, out.value[k].theta_min);
  }
  return out;
}

double bootstrap_mean_error(const std::vector<double>& x, int n_resamples, int m, std::uint64_t seed) {
  const int n = static_cast<int>(x.size());
  check(n, n_resamples, m);
  std::vector<double> means(n_resamples);
  for (int r = 0; r < n_resamples; ++r) {
    double s = 0;
    for (auto i : resample(seed, r, n, m)) s += x[i];
    means[r] = s / m;
  }
  return spread(means);
}

}  // namespace gct

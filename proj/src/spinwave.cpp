#include "gct/spinwave.hpp"

#include <cmath>
#include <stdexcept>

namespace gct {

SpinWaveModel dispersion(const Anisotropy& J, double h, const MomentumGrid& grid) {
  SpinWaveModel sw;
  sw.grid = grid;
  const int n = grid.size();
  sw.omega.resize(n);
  sw.chik.resize(n);
  sw.lambda_sq.resize(n);
  sw.stable.resize(n);
  for (int k = 0; k < n; ++k) {
    const double f = grid.fk[k];
    sw.omega[k] = 0.5 * (J.x + J.y) * f + h - J.z;
    sw.chik[k] = 0.5 * (J.x - J.y) * f;
    sw.lambda_sq[k] = sw.omega[k] * sw.omega[k] - sw.chik[k] * sw.chik[k];
    sw.stable[k] = sw.lambda_sq[k] > 0;
  }
  return sw;
}

double critical_rate_from_spectrum(const std::vector<double>& ev) {
  if (ev.size() < 2) throw std::invalid_argument("critical rate needs two eigenvalues");
  if (ev[1] == 0) throw std::domain_error("critical rate: second eigenvalue vanishes");
  return std::abs(ev[0] - ev[1]) / std::abs(ev[1]);
}

double critical_rate(const LatticeSpec& spec, double alpha) {
  spec.validate();
  if (spec.boundary == Boundary::periodic) {
    const double f = fourier_coupling(spec, alpha, critical_wavevector(spec));
    if (f == 0) throw std::domain_error("critical rate: f_kc vanishes");
    return std::abs(1 - f) / std::abs(f);
  }
  const auto sites = build_lattice(spec);
  return critical_rate_from_spectrum(coupling_spectrum(build_coupling_kernel(sites, spec, alpha)));
}

std::vector<int> stability_classification(const SpinWaveModel& sw) {
  std::vector<int> out;
  for (int k = 0; k < sw.size(); ++k)
    if (sw.omega[k] * sw.omega[k] < sw.chik[k] * sw.chik[k]) out.push_back(k);
  return out;
}

ModeFunctions mode_functions(double lambda_sq, double t) {
  const double x = lambda_sq * t * t;
  if (std::abs(x) < 1e-3) {
    const double c = 1 - x / 2 * (1 - x / 12 * (1 - x / 30 * (1 - x / 56)));
    const double s = t * (1 - x / 6 * (1 - x / 20 * (1 - x / 42 * (1 - x / 72))));
    return {c, s};
  }
  const double mu = std::sqrt(std::abs(lambda_sq));
  if (lambda_sq > 0) return {std::cos(mu * t), std::sin(mu * t) / mu};
  return {std::cosh(mu * t), std::sinh(mu * t) / mu};
}

ModeCoefficients mode_coefficients(double omega, double chik, double t) {
  const auto m = mode_functions(omega * omega - chik * chik, t);
  return {{m.c, -omega * m.s}, {0.0, -chik * m.s}};
}

BogoliubovTrajectory bogoliubov_evolve(const SpinWaveModel& sw, const std::vector<double>& times) {
  BogoliubovTrajectory tr;
  tr.times = times;
  for (double t : times) {
    if (t < 0) throw std::invalid_argument("bogoliubov_evolve: negative time");
    std::vector<std::complex<double>> u(sw.size()), v(sw.size());
    for (int k = 0; k < sw.size(); ++k) {
      const auto m = mode_coefficients(sw.omega[k], sw.chik[k], t);
      u[k] = m.u;
      v[k] = m.v;
    }
    tr.u.push_back(std::move(u));
    tr.v.push_back(std::move(v));
  }
  return tr;
}

namespace {

// |u|^2 + |v|^2 and 2 Im(u v) for one mode.
void quadrature_parts(double omega, double chik, double t, double& a, double& b) {
  const auto m = mode_functions(omega * omega - chik * chik, t);
  a = m.c * m.c + (omega * omega + chik * chik) * m.s * m.s;
  b = -2 * chik * m.c * m.s;
}

}  // namespace

CollectiveVariances collective_variances(const SpinWaveModel& sw, const std::vector<double>& times) {
  if (sw.size() == 0) throw std::invalid_argument("collective_variances: empty model");
  const double N = sw.size();
  CollectiveVariances cv;
  cv.times = times;
  for (double t : times) {
    double a, b;
    quadrature_parts(sw.omega[0], sw.chik[0], t, a, b);
    cv.var_min.push_back(N / 4 * (a - std::abs(b)));
    cv.var_max.push_back(N / 4 * (a + std::abs(b)));
  }
  return cv;
}

CorrelationField realspace_correlators(const SpinWaveModel& sw, double t) {
  if (sw.grid.spec.boundary != Boundary::periodic)
    throw std::invalid_argument("realspace_correlators: periodic lattices only");
  const int n = sw.size();
  double a0, b0;
  quadrature_parts(sw.omega[0], sw.chik[0], t, a0, b0);
  const double sigma = b0 <= 0 ? 1.0 : -1.0;  // sign making A + sigma B the squeezed combination
  CorrelationField cf;
  cf.spec = sw.grid.spec;
  cf.t = t;
  cf.c_min.resize(n);
  cf.c_max.resize(n);
  for (int k = 0; k < n; ++k) {
    double a, b;
    quadrature_parts(sw.omega[k], sw.chik[k], t, a, b);
    cf.c_min[k] = (a + sigma * b) / (4.0 * n);
    cf.c_max[k] = (a - sigma * b) / (4.0 * n);
  }
  cosine_transform(cf.spec, cf.c_min);
  cosine_transform(cf.spec, cf.c_max);
  return cf;
}

namespace {

int displacement_index(const LatticeSpec& spec, const std::array<int, 3>& r) {
  int idx = 0;
  for (int a = 0; a < spec.dim; ++a) {
    const int L = spec.extent[a];
    idx = idx * L + ((r[a] % L) + L) % L;
  }
  return idx;
}

}  // namespace

double CorrelationField::at_max(const std::array<int, 3>& r) const { return c_max[displacement_index(spec, r)]; }
double CorrelationField::at_min(const std::array<int, 3>& r) const { return c_min[displacement_index(spec, r)]; }

double plateau_length(const CorrelationField& field) {
  const int half = field.spec.extent[0] / 2;
  if (half < 2) throw std::invalid_argument("plateau_length: lattice too short");
  const double thr = 0.5 * field.at_max({1, 0, 0});
  for (int r = 1; r < half; ++r) {
    const double c0 = field.at_max({r, 0, 0});
    const double c1 = field.at_max({r + 1, 0, 0});
    if (c1 < thr) return r + (c0 - thr) / (c0 - c1);
  }
  return half;
}

HpValidity hp_validity(const SpinWaveModel& sw, double chi, double t) {
  const double N = sw.size();
  double dens = 0;
  for (int k = 0; k < sw.size(); ++k) {
    const auto m = mode_functions(sw.lambda_sq[k], t);
    dens += sw.chik[k] * sw.chik[k] * m.s * m.s;
  }
  dens /= N;
  return {chi * t <= 0.5 * std::log(N), dens <= 0.1, dens};
}

}  // namespace gct

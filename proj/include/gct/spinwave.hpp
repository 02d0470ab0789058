#pragma once

#include <complex>
#include <vector>

#include "gct/lattice.hpp"

namespace gct {

// Linear spin waves about the fully polarized state. The reference state is
// the Holstein-Primakoff vacuum of spins pointing along -z, so the field h
// enters the dispersion with a plus sign; the +z-polarized engines see the
// same physics with h -> -h.
struct SpinWaveModel {
  MomentumGrid grid;
  std::vector<double> omega;
  std::vector<double> chik;
  std::vector<double> lambda_sq;
  std::vector<char> stable;

  int size() const { return static_cast<int>(omega.size()); }
};

SpinWaveModel dispersion(const Anisotropy& J, double h, const MomentumGrid& grid);

// chi_c = |1 - f_kc| / |f_kc| on periodic lattices; from the two largest
// kernel eigenvalues otherwise. Throws if the denominator vanishes.
double critical_rate(const LatticeSpec& spec, double alpha);
double critical_rate_from_spectrum(const std::vector<double>& descending_eigenvalues);

std::vector<int> stability_classification(const SpinWaveModel& sw);

// cos(lambda t) and sin(lambda t)/lambda for either sign of lambda^2.
struct ModeFunctions {
  double c;
  double s;
};
ModeFunctions mode_functions(double lambda_sq, double t);

struct ModeCoefficients {
  std::complex<double> u, v;
};
ModeCoefficients mode_coefficients(double omega, double chik, double t);

struct BogoliubovTrajectory {
  std::vector<double> times;
  // [time][mode]
  std::vector<std::vector<std::complex<double>>> u, v;
  int n_modes() const { return u.empty() ? 0 : static_cast<int>(u.front().size()); }
};

BogoliubovTrajectory bogoliubov_evolve(const SpinWaveModel& sw, const std::vector<double>& times);

struct CollectiveVariances {
  std::vector<double> times;
  std::vector<double> var_min;  // squeezed quadrature
  std::vector<double> var_max;  // antisqueezed quadrature
};

CollectiveVariances collective_variances(const SpinWaveModel& sw, const std::vector<double>& times);

struct CorrelationField {
  LatticeSpec spec;
  double t = 0;
  // Row-major over displacements r_a in [0, L_a); C(r) = C(-r).
  std::vector<double> c_min, c_max;
  double at_max(const std::array<int, 3>& r) const;
  double at_min(const std::array<int, 3>& r) const;
};

CorrelationField realspace_correlators(const SpinWaveModel& sw, double t);

// Largest x-displacement up to which C_max stays above half its
// nearest-neighbour value, linearly interpolated at the crossing.
double plateau_length(const CorrelationField& field);

struct HpValidity {
  bool time_ok;
  bool density_ok;
  double density;
};
HpValidity hp_validity(const SpinWaveModel& sw, double chi, double t);

}  // namespace gct

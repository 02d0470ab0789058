#pragma once

#include <array>
#include <limits>
#include <string>
#include <vector>

#include "gct/lattice.hpp"

namespace gct {

struct QuadratureSummary {
  double theta_min = 0;  // radians in [0, pi)
  double var_min = 0;
  double var_max = 0;
  std::array<double, 3> mean{0, 0, 0};
  bool degenerate = false;
};

// Transverse covariance is [[vxx, cxy], [cxy, vyy]].
QuadratureSummary quadratures(double vxx, double vyy, double cxy, const std::array<double, 3>& mean);

// N var_min / <Sz>^2
double wineland(const QuadratureSummary& q, double N);
// N / (4 var_max); pure-state proxy for the Fisher information
double qfi_sensitivity(const QuadratureSummary& q, double N);
// 2 dS / sqrt(N)
double zeta(double var, double N);

struct EchoResult {
  double value = std::numeric_limits<double>::infinity();
  bool null_signal = false;
};
// [slope / S]^-2; slope flagged as null when |slope| <= 3 slope_err.
EchoResult echo_sensitivity(double slope, double slope_err, double S);
// Central difference from signals at (-phi0, 0, +phi0).
double echo_slope(double s_minus, double s_plus, double phi0);

struct Optimum {
  double t = 0;
  double value = 0;
  std::size_t index = 0;
  bool boundary = false;
};

// Grid minimum with parabolic refinement; ties go to the earlier time.
Optimum optimal_over_time(const std::vector<double>& t, const std::vector<double>& y);

double total_coupling(double chi);  // |1+chi| + |1-chi| + 1; 2 chi for infinite chi

struct RateCurve {
  double chi = 0;
  std::vector<double> t;
  std::vector<double> value;
};

struct RateEnvelopePoint {
  double jt = 0;
  double chi_opt = 0;
  double value = 0;
};

// Best value reachable with total interaction time J_tot t <= T, per T.
std::vector<RateEnvelopePoint> optimal_over_rate(const std::vector<RateCurve>& curves, const std::vector<double>& jt);

struct GainModelResult {
  double value = 0;
  double lc = 0;
  bool clamped = false;
};

// Correlation length solving chi = |1 - 1/f(2 pi / L_c)| along the first
// axis, bisected on [2, L].
double correlation_length(const LatticeSpec& spec, double alpha, double chi, bool* clamped = nullptr);

// max(e^{-2 chi t}, c / L_c^d)
GainModelResult analytic_gain_model(double chi, double t, const LatticeSpec& spec, double alpha, double c_const);

// Best model value over chi at fixed total interaction time J_tot t.
RateEnvelopePoint analytic_gain_envelope(double jt, const LatticeSpec& spec, double alpha, double c_const);

enum class RobustKind { ct, twist };

// twist: x = chi t, returns 1/(chi t)^2 + eps^2.
// ct: x = N, returns (c_sq / N)^(1 - eps).
double robustness_model(RobustKind kind, double eps, double x, double c_sq = 3.9);

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double slope_err = 0;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);
// log-log least squares
LinearFit scaling_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace gct

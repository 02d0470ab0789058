#include "gct/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gct {

QuadratureSummary quadratures(double vxx, double vyy, double cxy, const std::array<double, 3>& mean) {
  QuadratureSummary q;
  q.mean = mean;
  const double avg = 0.5 * (vxx + vyy);
  const double dev = std::hypot(0.5 * (vxx - vyy), cxy);
  q.var_min = avg - dev;
  q.var_max = avg + dev;
  if (dev <= 1e-12 * std::max(std::abs(avg), 1e-300)) {
    q.degenerate = true;
    q.theta_min = M_PI / 4;
    return q;
  }
  const double theta_max = 0.5 * std::atan2(2 * cxy, vxx - vyy);
  double tmin = std::fmod(theta_max + M_PI / 2, M_PI);
  if (tmin < 0) tmin += M_PI;
  if (tmin >= M_PI) tmin -= M_PI;
  q.theta_min = tmin;
  return q;
}

double wineland(const QuadratureSummary& q, double N) {
  const double sz = q.mean[2];
  if (sz == 0) throw std::domain_error("wineland: <Sz> = 0");
  return N * q.var_min / (sz * sz);
}

double qfi_sensitivity(const QuadratureSummary& q, double N) {
  if (!(q.var_max > 0)) throw std::domain_error("qfi_sensitivity: var_max <= 0");
  return N / (4 * q.var_max);
}

double zeta(double var, double N) { return 2 * std::sqrt(std::max(var, 0.0)) / std::sqrt(N); }

EchoResult echo_sensitivity(double slope, double slope_err, double S) {
  EchoResult r;
  if (std::abs(slope) <= 3 * slope_err || slope == 0) {
    r.null_signal = true;
    return r;
  }
  const double x = slope / S;
  r.value = 1 / (x * x);
  return r;
}

double echo_slope(double s_minus, double s_plus, double phi0) { return (s_plus - s_minus) / (2 * phi0); }

Optimum optimal_over_time(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size()) throw std::invalid_argument("optimal_over_time: size mismatch");
  if (t.size() < 3) throw std::invalid_argument("optimal_over_time: need at least 3 points");
  std::size_t best = 0;
  for (std::size_t i = 1; i < y.size(); ++i)
    if (y[i] < y[best]) best = i;
  Optimum o{t[best], y[best], best, best == 0 || best + 1 == y.size()};
  if (o.boundary) return o;
  const double h0 = t[best - 1] - t[best], h2 = t[best + 1] - t[best];
  const double d0 = y[best - 1] - y[best], d2 = y[best + 1] - y[best];
  const double A = (d0 * h2 - d2 * h0) / (h0 * h2 * (h0 - h2));
  if (!(A > 0)) return o;
  const double B = (d0 - A * h0 * h0) / h0;
  const double shift = std::clamp(-B / (2 * A), h0, h2);
  o.t = t[best] + shift;
  o.value = std::min(y[best], y[best] + A * shift * shift + B * shift);
  return o;
}

double total_coupling(double chi) {
  if (std::isinf(chi)) throw std::domain_error("total_coupling: infinite rate has J_tot t = 2 chi t");
  return std::abs(1 + chi) + std::abs(1 - chi) + 1;
}

std::vector<RateEnvelopePoint> optimal_over_rate(const std::vector<RateCurve>& curves, const std::vector<double>& jt) {
  if (curves.empty()) throw std::invalid_argument("optimal_over_rate: no curves");
  std::vector<RateEnvelopePoint> out;
  for (double T : jt) {
    RateEnvelopePoint best{T, 0, std::numeric_limits<double>::infinity()};
    for (const auto& c : curves) {
      const double scale = std::isinf(c.chi) ? 2.0 : total_coupling(c.chi);
      for (std::size_t i = 0; i < c.t.size(); ++i) {
        const double x = scale * c.t[i];
        double v;
        if (x <= T) {
          v = c.value[i];
        } else if (i > 0 && scale * c.t[i - 1] < T) {
          const double x0 = scale * c.t[i - 1];
          v = c.value[i - 1] + (c.value[i] - c.value[i - 1]) * (T - x0) / (x - x0);
        } else {
          break;
        }
        if (v < best.value) {
          best.value = v;
          best.chi_opt = c.chi;
        }
        if (x > T) break;
      }
    }
    if (std::isinf(best.value)) throw std::domain_error("optimal_over_rate: no curve reaches this total time");
    out.push_back(best);
  }
  return out;
}

namespace {

struct AxisCoupling {
  std::vector<double> f;  // displacement kernel
  LatticeSpec spec;
  double operator()(double k) const {
    double acc = 0;
    const int n = spec.n_sites();
    int stride = 1;
    for (int a = 1; a < spec.dim; ++a) stride *= spec.extent[a];
    const int L = spec.extent[0];
    for (int i = 1; i < n; ++i) {
      int d = i / stride;
      if (2 * d > L) d -= L;
      acc += f[i] * std::cos(k * d);
    }
    return acc;
  }
};

AxisCoupling axis_coupling(const LatticeSpec& spec, double alpha) {
  LatticeSpec p = spec;
  p.boundary = Boundary::periodic;
  return {displacement_kernel(p, alpha), p};
}

double solve_lc(const AxisCoupling& fk, double chi, bool* clamped) {
  const double L = fk.spec.extent[0];
  auto g = [&](double lc) { return std::abs(1 - 1 / fk(2 * M_PI / lc)); };
  if (clamped) *clamped = false;
  if (chi >= g(2)) {
    if (clamped) *clamped = true;
    return 2;
  }
  if (chi <= g(L)) {
    if (clamped) *clamped = true;
    return L;
  }
  double lo = 2, hi = L;
  for (int it = 0; it < 100 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > chi)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double correlation_length(const LatticeSpec& spec, double alpha, double chi, bool* clamped) {
  return solve_lc(axis_coupling(spec, alpha), chi, clamped);
}

GainModelResult analytic_gain_model(double chi, double t, const LatticeSpec& spec, double alpha, double c_const) {
  if (!(chi > 0)) throw std::invalid_argument("analytic_gain_model: chi must be > 0");
  GainModelResult r;
  r.lc = correlation_length(spec, alpha, chi, &r.clamped);
  const double sat = c_const / std::pow(r.lc, spec.dim);
  const double growth = std::isinf(chi) ? 0.0 : std::exp(-2 * chi * t);
  r.value = std::max(growth, sat);
  return r;
}

RateEnvelopePoint analytic_gain_envelope(double jt, const LatticeSpec& spec, double alpha, double c_const) {
  const auto fk = axis_coupling(spec, alpha);
  auto model = [&](double chi) {
    const double lc = solve_lc(fk, chi, nullptr);
    const double sat = c_const / std::pow(lc, spec.dim);
    const double growth = std::isinf(chi) ? std::exp(-jt) : std::exp(-2 * chi * jt / total_coupling(chi));
    return std::max(growth, sat);
  };
  RateEnvelopePoint best{jt, std::numeric_limits<double>::infinity(), model(std::numeric_limits<double>::infinity())};
  const int n = 241;
  for (int i = 0; i < n; ++i) {
    const double chi = std::pow(10.0, -5.0 + 8.0 * i / (n - 1));
    const double v = model(chi);
    if (v < best.value) {
      best.value = v;
      best.chi_opt = chi;
    }
  }
  if (!std::isinf(best.chi_opt)) {
    // golden-section refinement around the grid optimum
    double a = best.chi_opt / std::pow(10.0, 8.0 / (n - 1)), b = best.chi_opt * std::pow(10.0, 8.0 / (n - 1));
    double la = std::log(a), lb = std::log(b);
    const double gr = 0.5 * (std::sqrt(5.0) - 1);
    for (int it = 0; it < 60; ++it) {
      const double c1 = lb - gr * (lb - la), c2 = la + gr * (lb - la);
      if (model(std::exp(c1)) <= model(std::exp(c2)))
        lb = c2;
      else
        la = c1;
    }
    const double chi = std::exp(0.5 * (la + lb));
    const double v = model(chi);
    if (v < best.value) {
      best.value = v;
      best.chi_opt = chi;
    }
  }
  return best;
}

double robustness_model(RobustKind kind, double eps, double x, double c_sq) {
  if (!(eps >= 0 && eps < 1)) throw std::invalid_argument("robustness_model: eps must be in [0, 1)");
  if (kind == RobustKind::twist) return 1 / (x * x) + eps * eps;
  return std::pow(c_sq / x, 1 - eps);
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw std::invalid_argument("linear_fit: need >= 2 paired points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (n > 2) {
    double ssr = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - f.intercept - f.slope * x[i];
      ssr += r * r;
    }
    f.slope_err = std::sqrt(ssr / (n - 2) / sxx);
  }
  return f;
}

LinearFit scaling_fit(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0 && y[i] > 0)) throw std::domain_error("scaling_fit: non-positive value");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return linear_fit(lx, ly);
}

}  // namespace gct

#include "gct/schedule.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gct/metrics.hpp"

namespace gct {

double Schedule::duration() const {
  double t = 0;
  for (const auto& s : segments) t += s.duration;
  return t;
}

void Schedule::validate() const {
  if (segments.empty()) throw std::invalid_argument("schedule has no segments");
  for (const auto& s : segments) {
    if (!(s.duration >= 0) || !std::isfinite(s.duration)) throw std::invalid_argument("segment duration must be finite and >= 0");
    if (s.sign != 1 && s.sign != -1) throw std::invalid_argument("segment sign must be +1 or -1");
    if (s.rotate_before) {
      const auto& a = s.rotate_before->axis;
      const double norm = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
      if (std::abs(norm - 1) > 1e-9) throw std::invalid_argument("rotation axis must be a unit vector");
    }
  }
}

Schedule Schedule::constant(const Anisotropy& J, double h, double duration) {
  Schedule s;
  s.segments.push_back({J, h, 1, duration, std::nullopt});
  return s;
}

void Moments::resize(std::size_t n) {
  for (auto* v : {&t, &sx, &sy, &sz, &vxx, &vyy, &cxy}) v->assign(n, 0.0);
}

std::vector<ObservableRow> observables(const Moments& m, double N) {
  std::vector<ObservableRow> rows;
  rows.reserve(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto q = quadratures(m.vxx[i], m.vyy[i], m.cxy[i], {m.sx[i], m.sy[i], m.sz[i]});
    const double inf = std::numeric_limits<double>::infinity();
    const double xi2 = q.mean[2] == 0 ? inf : wineland(q, N);
    const double qfi = q.var_max > 0 ? qfi_sensitivity(q, N) : inf;
    rows.push_back({m.t[i], m.sx[i], m.sy[i], m.sz[i], q.var_min, q.var_max, q.theta_min, xi2, qfi});
  }
  return rows;
}

}  // namespace gct

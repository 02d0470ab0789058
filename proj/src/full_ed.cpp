#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gct/exact.hpp"

namespace gct {

namespace {

using cd = std::complex<double>;

inline double zval(std::size_t x, int i) { return ((x >> i) & 1u) ? 0.5 : -0.5; }

struct Bounds {
  double lo, hi;
};

}  // namespace

FullSystem::FullSystem(const Eigen::MatrixXd& kernel) : n_(static_cast<int>(kernel.rows())) {
  if (n_ < 2) throw std::invalid_argument("FullSystem: need at least two spins");
  if (n_ > 16) throw std::invalid_argument("FullSystem: more than 16 spins");
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (kernel(i, j) != 0) {
        pairs_.emplace_back(i, j);
        coupling_.push_back(2 * kernel(i, j));
      }
  zz_.assign(dim(), 0.0);
  mz_.assign(dim(), 0.0);
  for (std::size_t x = 0; x < dim(); ++x) {
    for (int i = 0; i < n_; ++i) mz_[x] += zval(x, i);
    for (std::size_t p = 0; p < pairs_.size(); ++p)
      zz_[x] += coupling_[p] * zval(x, pairs_[p].first) * zval(x, pairs_[p].second);
  }
}

cvec FullSystem::polarized() const {
  cvec psi(dim(), 0.0);
  psi[dim() - 1] = 1.0;
  return psi;
}

void FullSystem::apply_hamiltonian(const cvec& in, cvec& out, const Anisotropy& J, double h, int sign) const {
  const std::size_t D = dim();
  out.assign(D, 0.0);
  for (std::size_t x = 0; x < D; ++x) out[x] = sign * (J.z * zz_[x] + h * mz_[x]) * in[x];
  const double same = 0.25 * (J.x - J.y) * sign, diff = 0.25 * (J.x + J.y) * sign;
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    const int i = pairs_[p].first, j = pairs_[p].second;
    const std::size_t mask = (std::size_t{1} << i) | (std::size_t{1} << j);
    const double cs = coupling_[p] * same, cdf = coupling_[p] * diff;
    if (cs == 0 && cdf == 0) continue;
    for (std::size_t x = 0; x < D; ++x) {
      const bool differ = ((x >> i) ^ (x >> j)) & 1u;
      out[x] += (differ ? cdf : cs) * in[x ^ mask];
    }
  }
}

double FullSystem::energy(const cvec& psi, const Anisotropy& J, double h, int sign) const {
  cvec hp;
  apply_hamiltonian(psi, hp, J, h, sign);
  double e = 0;
  for (std::size_t x = 0; x < psi.size(); ++x) e += std::real(std::conj(psi[x]) * hp[x]);
  return e;
}

void FullSystem::evolve(cvec& psi, const Anisotropy& J, double h, int sign, double t) const {
  if (t <= 0) return;
  const std::size_t D = dim();
  // Gershgorin bounds
  Bounds b{1e300, -1e300};
  const double same = std::abs(0.25 * (J.x - J.y)), diff = std::abs(0.25 * (J.x + J.y));
  for (std::size_t x = 0; x < D; ++x) {
    double d = J.z * zz_[x] + h * mz_[x], off = 0;
    for (std::size_t p = 0; p < pairs_.size(); ++p) {
      const int i = pairs_[p].first, j = pairs_[p].second;
      off += std::abs(coupling_[p]) * ((((x >> i) ^ (x >> j)) & 1u) ? diff : same);
    }
    d *= sign;
    b.lo = std::min(b.lo, d - off);
    b.hi = std::max(b.hi, d + off);
  }
  const double center = 0.5 * (b.hi + b.lo);
  const double half = std::max(0.5 * (b.hi - b.lo) * 1.01, 1e-12);

  cvec t0, t1, t2, acc, tmp;
  double remaining = t;
  const double max_step = 40.0 / half;
  while (remaining > 0) {
    const double dt = std::min(remaining, max_step);
    remaining -= dt;
    const double x = half * dt;
    // T_0 and T_1
    t0 = psi;
    apply_hamiltonian(t0, tmp, J, h, sign);
    t1.resize(D);
    for (std::size_t k = 0; k < D; ++k) t1[k] = (tmp[k] - center * t0[k]) / half;
    acc.resize(D);
    const double j0 = std::cyl_bessel_j(0.0, x);
    const cd c1 = 2.0 * cd(0, -1) * std::cyl_bessel_j(1.0, x);
    for (std::size_t k = 0; k < D; ++k) acc[k] = j0 * t0[k] + c1 * t1[k];
    cd ipow(0, -1);
    int small = 0;
    for (int order = 2; order < 100000; ++order) {
      apply_hamiltonian(t1, tmp, J, h, sign);
      t2.resize(D);
      for (std::size_t k = 0; k < D; ++k) t2[k] = 2.0 * (tmp[k] - center * t1[k]) / half - t0[k];
      ipow *= cd(0, -1);
      const double jk = std::cyl_bessel_j(static_cast<double>(order), x);
      const cd c = 2.0 * ipow * jk;
      for (std::size_t k = 0; k < D; ++k) acc[k] += c * t2[k];
      std::swap(t0, t1);
      std::swap(t1, t2);
      if (order > x && std::abs(jk) < 1e-16)
        ++small;
      else
        small = 0;
      if (small >= 3) break;
    }
    const cd phase = std::exp(cd(0, -center * dt));
    for (std::size_t k = 0; k < D; ++k) psi[k] = phase * acc[k];
  }
}

void FullSystem::rotate(cvec& psi, const Rotation& r) const {
  const double c = std::cos(r.angle / 2), s = std::sin(r.angle / 2);
  const auto& a = r.axis;
  // exp(-i angle n.sigma / 2) in the (up, down) basis
  const cd u00(c, -s * a[2]), u01 = cd(0, -s) * cd(a[0], -a[1]);
  const cd u10 = cd(0, -s) * cd(a[0], a[1]), u11(c, s * a[2]);
  for (int i = 0; i < n_; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t x = 0; x < dim(); ++x) {
      if (!(x & bit)) continue;
      const cd up = psi[x], dn = psi[x ^ bit];
      psi[x] = u00 * up + u01 * dn;
      psi[x ^ bit] = u10 * up + u11 * dn;
    }
  }
}

FullSystem::Snapshot FullSystem::measure(const cvec& psi) const {
  const std::size_t D = dim();
  cvec px(D, 0.0), py(D, 0.0);
  double sz = 0;
  for (std::size_t x = 0; x < D; ++x) {
    const double p = std::norm(psi[x]);
    for (int i = 0; i < n_; ++i) {
      const std::size_t y = x ^ (std::size_t{1} << i);
      px[x] += 0.5 * psi[y];
      py[x] += ((x >> i) & 1u) ? cd(0, -0.5) * psi[y] : cd(0, 0.5) * psi[y];
      sz += p * zval(x, i);
    }
  }
  double sx = 0, sy = 0, xx = 0, yy = 0, xy = 0;
  for (std::size_t x = 0; x < D; ++x) {
    sx += std::real(std::conj(psi[x]) * px[x]);
    sy += std::real(std::conj(psi[x]) * py[x]);
    xx += std::norm(px[x]);
    yy += std::norm(py[x]);
    xy += std::real(std::conj(px[x]) * py[x]);
  }
  return {sx, sy, sz, xx - sx * sx, yy - sy * sy, xy - sx * sy};
}

Moments full_ed_evolve(const CouplingModel& model, const Schedule& schedule, const std::vector<double>& times) {
  schedule.validate();
  if (!std::is_sorted(times.begin(), times.end())) throw std::invalid_argument("observation times must be sorted");
  const double total = schedule.duration();
  const double tol = 1e-12 * std::max(1.0, total);
  if (!times.empty() && (times.front() < -tol || times.back() > total + tol))
    throw std::invalid_argument("observation time outside the schedule");
  FullSystem sys(model.kernel);
  auto psi = sys.polarized();
  Moments m;
  m.resize(times.size());
  std::size_t next = 0;
  auto record = [&](double now) {
    while (next < times.size() && times[next] <= now + tol) {
      const auto s = sys.measure(psi);
      m.t[next] = times[next];
      m.sx[next] = s.sx;
      m.sy[next] = s.sy;
      m.sz[next] = s.sz;
      m.vxx[next] = s.vxx;
      m.vyy[next] = s.vyy;
      m.cxy[next] = s.cxy;
      ++next;
    }
  };
  double now = 0;
  for (const auto& seg : schedule.segments) {
    record(now);
    if (seg.rotate_before) sys.rotate(psi, *seg.rotate_before);
    const double end = now + seg.duration;
    while (next < times.size() && times[next] <= end + tol) {
      const double target = std::min(times[next], end);
      sys.evolve(psi, seg.J, seg.h, seg.sign, target - now);
      now = target;
      record(now);
    }
    sys.evolve(psi, seg.J, seg.h, seg.sign, end - now);
    now = end;
  }
  record(now);
  return m;
}

}  // namespace gct

#include "gct/dtwa.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gct/metrics.hpp"
#include "gct/rng.hpp"

namespace gct {

namespace {

constexpr double kSpinLength = 0.8660254037844386;  // sqrt(3)/2
constexpr double kDriftLimit = 1e-4;
constexpr std::uint64_t kMultiplierSalt = 0x9E3779B97F4A7C15ull;

}  // namespace

SpinConfiguration sample_initial(int n, std::uint64_t seed, std::uint64_t index) {
  if (n < 2) throw std::invalid_argument("sample_initial: n must be >= 2");
  auto g = make_stream(seed, index);
  SpinConfiguration s(n, 3);
  std::uint64_t word = 0;
  int left = 0;
  for (int i = 0; i < n; ++i) {
    if (left == 0) {
      word = g();
      left = 32;
    }
    s(i, 0) = (word & 1u) ? 0.5 : -0.5;
    s(i, 1) = (word & 2u) ? 0.5 : -0.5;
    s(i, 2) = 0.5;
    word >>= 2;
    --left;
  }
  return s;
}

double strength_multiplier(std::uint64_t seed, std::uint64_t index, double eps) {
  if (eps == 0) return 1.0;
  auto g = make_stream(seed ^ kMultiplierSalt, index);
  return (g() >> 63) ? 1 + eps : 1 - eps;
}

SpinConfiguration mean_field(const CouplingModel& model, const SpinConfiguration& s, int sign, double multiplier) {
  if (s.rows() != model.kernel.rows()) throw std::invalid_argument("mean_field: size mismatch");
  SpinConfiguration F = model.kernel * s;
  const double c = 2.0 * sign * multiplier;
  F.col(0) *= c * model.J.x;
  F.col(1) *= c * model.J.y;
  F.col(2) *= c * model.J.z;
  F.col(2).array() += sign * model.h;
  return F;
}

namespace {

// One block of B trajectories: S is n x 3B with x, y, z column blocks.
class BatchIntegrator {
 public:
  BatchIntegrator(FieldEngine& field, int n, int B, const Eigen::RowVectorXd& mult)
      : field_(field), n_(n), B_(B), mult_(mult) {}

  void rhs(const Eigen::MatrixXd& S, Eigen::MatrixXd& D, const Segment& seg) {
    field_.apply(S, F_);
    D.resize(n_, 3 * B_);
    const double c = 2.0 * seg.sign;
    const Eigen::RowVectorXd mx = c * seg.J.x * mult_, my = c * seg.J.y * mult_, mz = c * seg.J.z * mult_;
    const double hz = seg.sign * seg.h;
    for (int b = 0; b < B_; ++b) {
      const double* fx = F_.col(b).data();
      const double* fy = F_.col(B_ + b).data();
      const double* fz = F_.col(2 * B_ + b).data();
      const double* sx = S.col(b).data();
      const double* sy = S.col(B_ + b).data();
      const double* sz = S.col(2 * B_ + b).data();
      double* dx = D.col(b).data();
      double* dy = D.col(B_ + b).data();
      double* dz = D.col(2 * B_ + b).data();
      const double ax = mx[b], ay = my[b], az = mz[b];
      for (int i = 0; i < n_; ++i) {
        const double bx = ax * fx[i], by = ay * fy[i], bz = az * fz[i] + hz;
        dx[i] = by * sz[i] - bz * sy[i];
        dy[i] = bz * sx[i] - bx * sz[i];
        dz[i] = bx * sy[i] - by * sx[i];
      }
    }
  }

  void step(Eigen::MatrixXd& S, const Segment& seg, double h) {
    rhs(S, k1_, seg);
    tmp_ = S + (0.5 * h) * k1_;
    rhs(tmp_, k2_, seg);
    tmp_ = S + (0.5 * h) * k2_;
    rhs(tmp_, k3_, seg);
    tmp_ = S + h * k3_;
    rhs(tmp_, k4_, seg);
    S += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
  }

 private:
  FieldEngine& field_;
  int n_, B_;
  Eigen::RowVectorXd mult_;
  Eigen::MatrixXd F_, k1_, k2_, k3_, k4_, tmp_;
};

void rotate_block(Eigen::MatrixXd& S, int B, const Rotation& r) {
  const double c = std::cos(r.angle), s = std::sin(r.angle);
  const double nx = r.axis[0], ny = r.axis[1], nz = r.axis[2];
  // Rodrigues matrix
  const double R[3][3] = {
      {c + nx * nx * (1 - c), nx * ny * (1 - c) - nz * s, nx * nz * (1 - c) + ny * s},
      {ny * nx * (1 - c) + nz * s, c + ny * ny * (1 - c), ny * nz * (1 - c) - nx * s},
      {nz * nx * (1 - c) - ny * s, nz * ny * (1 - c) + nx * s, c + nz * nz * (1 - c)}};
  for (int b = 0; b < B; ++b) {
    auto x = S.col(b), y = S.col(B + b), z = S.col(2 * B + b);
    for (Eigen::Index i = 0; i < S.rows(); ++i) {
      const double v0 = x[i], v1 = y[i], v2 = z[i];
      x[i] = R[0][0] * v0 + R[0][1] * v1 + R[0][2] * v2;
      y[i] = R[1][0] * v0 + R[1][1] * v1 + R[1][2] * v2;
      z[i] = R[2][0] * v0 + R[2][1] * v1 + R[2][2] * v2;
    }
  }
}

double segment_scale(const Segment& seg, double max_mult) {
  return seg.J.total() * max_mult + std::abs(seg.h);
}

bool use_fft(const DtwaSettings& st, const LatticeContext& lc, int n) {
  const bool eligible = lc.spec && lc.sites && lc.sites->full() && lc.spec->boundary == Boundary::periodic;
  switch (st.backend) {
    case FieldBackend::dense:
      return false;
    case FieldBackend::fft:
      if (!eligible) throw std::invalid_argument("fft backend needs a fully occupied periodic lattice");
      return true;
    case FieldBackend::automatic:
      return eligible && n >= 64;
  }
  return false;
}

}  // namespace

TrajectoryEnsemble run_ensemble(const CouplingModel& model, const Schedule& schedule,
                                const std::vector<double>& times, const DtwaSettings& st, LatticeContext lc) {
  schedule.validate();
  const int n = static_cast<int>(model.kernel.rows());
  if (n < 2) throw std::invalid_argument("run_ensemble: need at least two spins");
  if (st.n_traj < 2) throw std::invalid_argument("run_ensemble: n_traj must be >= 2");
  if (!(st.dt_scale > 0)) throw std::invalid_argument("run_ensemble: dt must be > 0");
  if (st.batch < 1) throw std::invalid_argument("run_ensemble: batch must be >= 1");
  if (!std::is_sorted(times.begin(), times.end())) throw std::invalid_argument("observation times must be sorted");
  const double total = schedule.duration();
  const double tol = 1e-12 * std::max(1.0, total);
  if (!times.empty() && (times.front() < -tol || times.back() > total + tol))
    throw std::invalid_argument("observation time outside the schedule");
  const bool fft = use_fft(st, lc, n);
  if (fft && lc.sites->n_sites() != n) throw std::invalid_argument("lattice does not match the kernel");

  TrajectoryEnsemble e;
  e.t = times;
  e.n_traj = st.n_traj;
  e.n_spins = n;
  const std::size_t T = times.size();
  e.sx.assign(T * st.n_traj, 0.0);
  e.sy.assign(T * st.n_traj, 0.0);
  e.sz.assign(T * st.n_traj, 0.0);
  e.drift.assign(st.n_traj, 0.0);

  const int B = st.batch;
  const int n_batches = (st.n_traj + B - 1) / B;
  const double max_mult = 1 + std::abs(st.epsilon);
  const int workers = std::max(1, std::min(st.workers > 0 ? st.workers : default_workers(), n_batches));
  std::vector<std::unique_ptr<FieldEngine>> engines(workers);

  parallel_for(n_batches, workers, [&](int batch, int worker) {
    auto& engine = engines[worker];
    if (!engine) engine = fft ? make_fft_field(*lc.spec, model.alpha, 3 * B) : make_dense_field(model.kernel);
    Eigen::MatrixXd S(n, 3 * B);
    Eigen::RowVectorXd mult(B);
    for (int b = 0; b < B; ++b) {
      const std::uint64_t idx = static_cast<std::uint64_t>(batch) * B + b;
      const auto s0 = sample_initial(n, st.seed, idx);
      S.col(b) = s0.col(0);
      S.col(B + b) = s0.col(1);
      S.col(2 * B + b) = s0.col(2);
      mult[b] = strength_multiplier(st.seed, idx, st.epsilon);
    }
    BatchIntegrator integ(*engine, n, B, mult);
    std::vector<double> drift(B, 0.0);
    auto check_norm = [&]() {
      for (int b = 0; b < B; ++b) {
        const auto len = (S.col(b).array().square() + S.col(B + b).array().square() +
                          S.col(2 * B + b).array().square())
                             .sqrt();
        drift[b] = std::max(drift[b], ((len / kSpinLength) - 1.0).abs().maxCoeff());
      }
    };
    std::size_t next = 0;
    auto record = [&](double now) {
      bool any = false;
      while (next < T && times[next] <= now + tol) {
        for (int b = 0; b < B; ++b) {
          const std::size_t traj = static_cast<std::size_t>(batch) * B + b;
          if (traj >= static_cast<std::size_t>(st.n_traj)) break;
          e.sx[next * st.n_traj + traj] = S.col(b).sum();
          e.sy[next * st.n_traj + traj] = S.col(B + b).sum();
          e.sz[next * st.n_traj + traj] = S.col(2 * B + b).sum();
        }
        ++next;
        any = true;
      }
      if (any) check_norm();
    };
    auto advance = [&](const Segment& seg, double span) {
      if (span <= 0) return;
      const double scale = segment_scale(seg, max_mult);
      if (scale == 0) return;
      const double hmax = st.dt_scale / scale;
      const long steps = std::max(1L, static_cast<long>(std::ceil(span / hmax - 1e-9)));
      const double h = span / steps;
      for (long k = 0; k < steps; ++k) integ.step(S, seg, h);
    };
    double now = 0;
    for (const auto& seg : schedule.segments) {
      record(now);
      if (seg.rotate_before) rotate_block(S, B, *seg.rotate_before);
      const double end = now + seg.duration;
      while (next < T && times[next] <= end + tol) {
        const double target = std::min(times[next], end);
        advance(seg, target - now);
        now = target;
        record(now);
      }
      advance(seg, end - now);
      now = end;
    }
    record(now);
    check_norm();
    for (int b = 0; b < B; ++b) {
      const std::size_t traj = static_cast<std::size_t>(batch) * B + b;
      if (traj < static_cast<std::size_t>(st.n_traj)) e.drift[traj] = drift[b];
    }
  });

  for (int j = 0; j < st.n_traj; ++j)
    if (!(e.drift[j] <= kDriftLimit)) e.invalid.push_back(j);
  return e;
}

// Fixed-order pairwise sum.
static double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

namespace {

void fill_moments(Moments& m, std::size_t row, double t, const std::vector<double>& x, const std::vector<double>& y,
                  const std::vector<double>& z) {
  const std::size_t n = x.size();
  const double mx = pairwise_sum(x.data(), n) / n, my = pairwise_sum(y.data(), n) / n,
               mz = pairwise_sum(z.data(), n) / n;
  std::vector<double> a(n), b(n), c(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    a[i] = dx * dx;
    b[i] = dy * dy;
    c[i] = dx * dy;
  }
  const double norm = 1.0 / static_cast<double>(n - 1);
  m.t[row] = t;
  m.sx[row] = mx;
  m.sy[row] = my;
  m.sz[row] = mz;
  m.vxx[row] = pairwise_sum(a.data(), n) * norm;
  m.vyy[row] = pairwise_sum(b.data(), n) * norm;
  m.cxy[row] = pairwise_sum(c.data(), n) * norm;
}

}  // namespace

Moments ensemble_moments(const TrajectoryEnsemble& e) {
  std::vector<std::uint32_t> all(e.n_traj);
  for (int j = 0; j < e.n_traj; ++j) all[j] = j;
  return ensemble_moments(e, all);
}

Moments ensemble_moments(const TrajectoryEnsemble& e, const std::vector<std::uint32_t>& idx) {
  if (idx.size() < 2) throw std::invalid_argument("ensemble_moments: need at least two trajectories");
  Moments m;
  m.resize(e.t.size());
  std::vector<double> x(idx.size()), y(idx.size()), z(idx.size());
  for (std::size_t k = 0; k < e.t.size(); ++k) {
    const std::size_t base = k * e.n_traj;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      x[i] = e.sx[base + idx[i]];
      y[i] = e.sy[base + idx[i]];
      z[i] = e.sz[base + idx[i]];
    }
    fill_moments(m, k, e.t[k], x, y, z);
  }
  return m;
}

EchoReport echo_run(const CouplingModel& model, const Anisotropy& J, double h, double t, double phi0,
                    const DtwaSettings& st, LatticeContext lc) {
  if (!(t > 0)) throw std::invalid_argument("echo_run: t must be > 0");
  const double N = static_cast<double>(model.kernel.rows());
  if (!(phi0 > 0) || phi0 > 1 / N + 1e-15) throw std::invalid_argument("echo_run: phi0 must lie in (0, 1/N]");

  // phi = 0 reference: quadrature axes at time t
  const auto ref = run_ensemble(model, Schedule::constant(J, h, t), {t}, st, lc);
  if (!ref.valid()) throw std::runtime_error("echo_run: reference ensemble has invalid trajectories");
  const auto rm = ensemble_moments(ref);
  const auto q = quadratures(rm.vxx[0], rm.vyy[0], rm.cxy[0], {rm.sx[0], rm.sy[0], rm.sz[0]});
  if (q.degenerate) throw std::runtime_error("echo_run: reference covariance is degenerate");
  const double theta_max = q.theta_min + M_PI / 2;

  EchoReport r;
  r.t = t;
  r.phi0 = phi0;
  r.theta_min = q.theta_min;
  r.phi = {-phi0, 0.0, phi0};
  std::vector<std::vector<double>> signal(3);
  for (int k = 0; k < 3; ++k) {
    Schedule s;
    s.segments.push_back({J, h, 1, t, std::nullopt});
    s.segments.push_back({J, h, -1, t, Rotation{{std::cos(theta_max), std::sin(theta_max), 0.0}, r.phi[k]}});
    const auto e = run_ensemble(model, s, {2 * t}, st, lc);
    if (!e.valid()) throw std::runtime_error("echo_run: invalid trajectories after the echo");
    signal[k].resize(e.n_traj);
    for (int j = 0; j < e.n_traj; ++j)
      signal[k][j] = std::cos(q.theta_min) * e.sx[j] + std::sin(q.theta_min) * e.sy[j];
  }
  for (int k = 0; k < 3; ++k) {
    r.signal.push_back(pairwise_sum(signal[k].data(), signal[k].size()) / signal[k].size());
    r.signal_err.push_back(bootstrap_mean_error(signal[k], 100, std::min(1000, st.n_traj), st.seed + 11 + k));
  }
  // paired differences share the random initial states
  std::vector<double> slope(st.n_traj);
  for (int j = 0; j < st.n_traj; ++j) slope[j] = echo_slope(signal[0][j], signal[2][j], phi0);
  r.slope = pairwise_sum(slope.data(), slope.size()) / slope.size();
  r.slope_err = bootstrap_mean_error(slope, 100, std::min(1000, st.n_traj), st.seed + 17);
  const auto es = echo_sensitivity(r.slope, r.slope_err, N / 2);
  r.sensitivity = es.value;
  r.null_signal = es.null_signal;
  return r;
}

}  // namespace gct

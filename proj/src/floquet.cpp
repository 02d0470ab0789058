#include "gct/floquet.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gct {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double chi_max(double Delta) {
  if (std::isnan(Delta)) throw std::invalid_argument("chi_max: Delta is NaN");
  if (std::isinf(Delta)) return 1.0;
  if (Delta == -2) return 0.0;
  if (Delta > -2 && Delta <= 1) return (1 - Delta) / (2 + Delta);
  return (Delta - 1) / (2 + Delta);
}

FrameTimes frame_times(double Delta, double chi) {
  if (std::isnan(Delta) || std::isnan(chi)) throw std::invalid_argument("frame_times: NaN input");
  if (Delta == 1) throw std::invalid_argument("frame_times: Delta = 1 leaves the polarized state stationary");
  if (chi < 0) throw std::invalid_argument("frame_times: chi must be >= 0");
  if (Delta == -kInf) throw std::invalid_argument("frame_times: Delta = -inf is not supported");
  FrameTimes f;
  if (Delta == -2) {
    if (!std::isinf(chi)) throw std::invalid_argument("frame_times: Delta = -2 needs chi = inf");
    f.Lx = 0;
    f.Ly = 2.0 / 3;
    f.Lz = 1.0 / 3;
    f.K_perp = 1;
    return f;
  }
  if (std::isinf(chi)) throw std::invalid_argument("frame_times: chi = inf is only reachable at Delta = -2");
  const double c = std::isinf(Delta) ? chi / 3 : chi * (Delta + 2) / (3 * (Delta - 1));
  f.Lx = 1.0 / 3 + c;
  f.Ly = 1.0 / 3 - c;
  f.Lz = 1.0 / 3;
  f.K_perp = std::isinf(Delta) ? 0.0 : 3 / (Delta + 2);
  if (f.Lx < -1e-12 || f.Ly < -1e-12) {
    std::ostringstream msg;
    msg << "frame_times: chi = " << chi << " exceeds chi_max(" << Delta << ") = " << chi_max(Delta) << " (";
    if (f.Lx < 0) msg << "L_x = " << f.Lx;
    if (f.Ly < 0) msg << "L_y = " << f.Ly;
    msg << " < 0)";
    throw std::invalid_argument(msg.str());
  }
  f.Lx = std::max(f.Lx, 0.0);
  f.Ly = std::max(f.Ly, 0.0);
  return f;
}

Anisotropy frame_coupling(double Delta, double K_perp, int axis) {
  if (axis < 0 || axis > 2) throw std::invalid_argument("frame_coupling: axis must be 0, 1 or 2");
  double k[3];
  if (std::isinf(Delta)) {
    k[0] = k[1] = k[2] = 0;
    k[axis] = 3;  // Delta K_perp -> 3 in the Ising limit
  } else {
    k[0] = k[1] = k[2] = K_perp;
    k[axis] = Delta * K_perp;
  }
  return {k[0] / 3, k[1] / 3, k[2] / 3};
}

FrameSchedule build_sequence(double Delta, double chi, double dt_step, double total_time) {
  if (!(dt_step > 0) || !std::isfinite(dt_step)) throw std::invalid_argument("build_sequence: dt_step must be > 0");
  FrameSchedule fs;
  fs.frames = frame_times(Delta, chi);
  fs.dt_step = dt_step;
  const double ratio = total_time / fs.period();
  fs.periods = static_cast<int>(std::floor(ratio + 1e-9));
  if (fs.periods < 1) throw std::invalid_argument("build_sequence: total_time is shorter than one period");
  fs.rounded = std::abs(ratio - fs.periods) > 1e-9;
  const double P = fs.period();
  fs.tau = {P * fs.frames.Lx, P * fs.frames.Lz, P * fs.frames.Ly};
  const double K = fs.frames.K_perp;
  const Anisotropy jx = frame_coupling(Delta, K, 0), jz = frame_coupling(Delta, K, 2), jy = frame_coupling(Delta, K, 1);
  for (int p = 0; p < fs.periods; ++p) {
    fs.schedule.segments.push_back({jx, 0.0, 1, fs.tau[0], std::nullopt});
    fs.schedule.segments.push_back({jz, 0.0, 1, fs.tau[1], std::nullopt});
    fs.schedule.segments.push_back({jy, 0.0, 1, fs.tau[2], std::nullopt});
  }
  return fs;
}

}  // namespace gct

#pragma once

#include <array>
#include <limits>

#include "gct/schedule.hpp"

namespace gct {

// Fractions of each Floquet period spent in the x, y, z toggling frames and
// the native exchange strength they require. Delta = +inf is the Ising limit.
struct FrameTimes {
  double Lx = 0, Ly = 0, Lz = 0;
  double K_perp = 0;
};

// chi = +inf is accepted only at Delta = -2.
FrameTimes frame_times(double Delta, double chi);

double chi_max(double Delta);

// Native couplings with the anisotropy axis moved to `axis` (0, 1, 2), divided
// by three so that one period of 3 dt_step averages to H_gct / 3.
Anisotropy frame_coupling(double Delta, double K_perp, int axis);

struct FrameSchedule {
  FrameTimes frames;
  double dt_step = 0;
  int periods = 0;
  bool rounded = false;               // total_time was not a whole number of periods
  std::array<double, 3> tau{0, 0, 0};  // per-period durations in x, z, y order
  Schedule schedule;

  double period() const { return 3 * dt_step; }
};

FrameSchedule build_sequence(double Delta, double chi, double dt_step, double total_time);

}  // namespace gct

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "gct/lattice.hpp"

namespace gct {

struct Rotation {
  std::array<double, 3> axis{1, 0, 0};  // unit vector
  double angle = 0;
};

struct Segment {
  Anisotropy J;
  double h = 0;
  int sign = 1;
  double duration = 0;
  std::optional<Rotation> rotate_before;
};

struct Schedule {
  std::vector<Segment> segments;

  double duration() const;
  void validate() const;
  static Schedule constant(const Anisotropy& J, double h, double duration);
};

// Collective moments of (Sx, Sy, Sz) on a time grid. Covariances are the
// symmetrized transverse ones.
struct Moments {
  std::vector<double> t;
  std::vector<double> sx, sy, sz;
  std::vector<double> vxx, vyy, cxy;

  void resize(std::size_t n);
  std::size_t size() const { return t.size(); }
};

// Derived sensitivities from a moment series; inf where <Sz> = 0 or var_max = 0.
struct ObservableRow {
  double t;
  double sx, sy, sz;
  double var_min, var_max, theta_min;
  double xi2, qfi_sens;
};
std::vector<ObservableRow> observables(const Moments& m, double N);

}  // namespace gct

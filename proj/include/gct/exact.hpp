#pragma once

#include <complex>
#include <vector>

#include "gct/lattice.hpp"
#include "gct/schedule.hpp"

namespace gct {

enum class CollectivePreset { ct, twist };

// Evolution on the S = N/2 Dicke ladder from the m = N/2 state.
//   ct:    H = chi (S+^2 + S-^2) / (2N)
//   twist: H = chi Sx^2 / N
// Moments are averaged over the strength multipliers (each scales H).
Moments collective_evolve(int N, CollectivePreset preset, double chi, const std::vector<double>& times,
                          const std::vector<double>& multipliers = {1.0});

using cvec = std::vector<std::complex<double>>;

// Full 2^n state-vector evolution (n <= 16). Bit i set means spin i points
// up; the initial state has every spin up.
class FullSystem {
 public:
  FullSystem(const Eigen::MatrixXd& kernel);

  int n() const { return n_; }
  std::size_t dim() const { return std::size_t{1} << n_; }

  cvec polarized() const;
  void evolve(cvec& psi, const Anisotropy& J, double h, int sign, double t) const;
  void rotate(cvec& psi, const Rotation& r) const;
  double energy(const cvec& psi, const Anisotropy& J, double h, int sign) const;
  void apply_hamiltonian(const cvec& in, cvec& out, const Anisotropy& J, double h, int sign) const;

  struct Snapshot {
    double sx, sy, sz, vxx, vyy, cxy;
  };
  Snapshot measure(const cvec& psi) const;

 private:
  int n_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<double> coupling_;  // 2 f_ij per pair
  std::vector<double> zz_;        // sum over pairs of 2 f_ij z_i z_j, per basis state
  std::vector<double> mz_;        // total Sz per basis state
};

// Runs a schedule and records moments at the requested absolute times.
// Observations at a segment boundary precede the next rotation.
Moments full_ed_evolve(const CouplingModel& model, const Schedule& schedule, const std::vector<double>& times);

// Gap between the polarized state and the lowest J = N/2 - 2 state of
// H = -sum_{i != j} f_ij s_i . s_j on a periodic chain.
struct GapResult {
  double gap = 0;
  double max_s2_error = 0;  // over retained eigenvectors
  int retained = 0;
};
GapResult heisenberg_gap(const Eigen::MatrixXd& kernel);
GapResult heisenberg_gap(int N, double alpha);

// 2 |f_kc - 1| on a periodic chain of N sites.
double spinwave_gap(int N, double alpha);

// Full spectrum of H restricted to sector m_z = N/2 - 2 by brute force over
// all 2^N states (small-N cross-check).
double heisenberg_gap_bruteforce(const Eigen::MatrixXd& kernel);

}  // namespace gct

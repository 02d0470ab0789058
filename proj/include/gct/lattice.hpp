#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gct {

enum class Boundary { periodic, open };

Boundary parse_boundary(const std::string& s);
std::string to_string(Boundary b);

struct LatticeSpec {
  int dim = 1;
  std::vector<int> extent{2};
  Boundary boundary = Boundary::periodic;

  int n_sites() const;
  // Throws std::invalid_argument on a malformed spec.
  void validate() const;
  // Cubic helper: L^d sites.
  static LatticeSpec cube(int d, int L, Boundary b);
};

using Coord = std::array<int, 3>;

struct SiteSet {
  std::vector<Coord> positions;  // row-major, last axis fastest
  std::vector<char> occupied;

  int n_sites() const { return static_cast<int>(positions.size()); }
  int n_occupied() const;
  std::vector<int> occupied_indices() const;
  bool full() const { return n_occupied() == n_sites(); }
};

SiteSet build_lattice(const LatticeSpec& spec);

double pairwise_distance(const LatticeSpec& spec, int i, int j);

// Dense n x n kernel over the occupied sites, r^-alpha off the diagonal,
// divided by its mean row sum.
Eigen::MatrixXd build_coupling_kernel(const SiteSet& sites, const LatticeSpec& spec, double alpha);

// Kernel value f(r) on the periodic displacement grid (row-major over the
// extents, minimum image), normalized so that sum_r f(r) = 1.
std::vector<double> displacement_kernel(const LatticeSpec& spec, double alpha);

// f_k for an arbitrary wavevector k (periodic lattices only).
double fourier_coupling(const LatticeSpec& spec, double alpha, const std::array<double, 3>& k);

struct MomentumGrid {
  LatticeSpec spec;
  std::vector<double> fk;  // row-major over mode indices n_i in [0, L_i)

  int size() const { return static_cast<int>(fk.size()); }
  std::array<double, 3> wavevector(int index) const;
  std::array<int, 3> mode(int index) const;
};

// All f_k on the reciprocal grid, via separable cosine sums.
MomentumGrid momentum_grid(const LatticeSpec& spec, double alpha);

// In-place separable transform g(n) = sum_r c(r) prod_a cos(2 pi n_a r_a / L_a)
// over the periodic grid. Exact for data even in each coordinate.
void cosine_transform(const LatticeSpec& spec, std::vector<double>& data);

// Smallest nonzero wavevector, taken along the longest axis.
std::array<double, 3> critical_wavevector(const LatticeSpec& spec);

std::vector<double> coupling_spectrum(const Eigen::MatrixXd& kernel);

SiteSet random_filling(const SiteSet& sites, double mean_fraction, double epsilon, std::uint64_t seed);

// Coupling model -----------------------------------------------------------

struct Anisotropy {
  double x = 1, y = 1, z = 1;
  double total() const;  // |Jx| + |Jy| + |Jz|
};

enum class Preset { gct, xxz, tfi, ct, twist, custom };

Preset parse_preset(const std::string& s);
std::string to_string(Preset p);

// Anisotropy for a named preset at rate chi. chi = +inf is allowed for gct
// and gives the rescaled pure countertwisting triple (1, -1, 0).
Anisotropy preset_anisotropy(Preset p, double chi);

// Triple that reproduces the collective ct (chi (Sx^2 - Sy^2) / N) or twist
// (chi Sx^2 / N) Hamiltonian with the normalized alpha = 0 kernel on N spins.
Anisotropy collective_anisotropy(Preset p, double chi, int N);

struct CouplingModel {
  double alpha = 0;
  Eigen::MatrixXd kernel;
  Anisotropy J;
  double h = 0;
  double chi = 0;
};

// ct and twist use collective_anisotropy; custom leaves J at (1, 1, 1) for the
// caller to set.
CouplingModel make_model(const SiteSet& sites, const LatticeSpec& spec, double alpha, Preset preset, double chi,
                         double h = 0);

void write_kernel_csv(const Eigen::MatrixXd& kernel, const std::string& path);

}  // namespace gct

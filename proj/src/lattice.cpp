#include "gct/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "gct/rng.hpp"

namespace gct {

Boundary parse_boundary(const std::string& s) {
  if (s == "periodic") return Boundary::periodic;
  if (s == "open") return Boundary::open;
  throw std::invalid_argument("unknown boundary '" + s + "'");
}

std::string to_string(Boundary b) { return b == Boundary::periodic ? "periodic" : "open"; }

int LatticeSpec::n_sites() const {
  int n = 1;
  for (int L : extent) n *= L;
  return n;
}

void LatticeSpec::validate() const {
  if (dim < 1 || dim > 3) throw std::invalid_argument("lattice dimension must be 1, 2 or 3");
  if (static_cast<int>(extent.size()) != dim) throw std::invalid_argument("lattice extent count must equal dimension");
  for (int L : extent) {
    if (L < 1) throw std::invalid_argument("lattice extent must be positive");
    if (boundary == Boundary::periodic && L < 2) throw std::invalid_argument("periodic axes need extent >= 2");
  }
  if (n_sites() < 2) throw std::invalid_argument("lattice needs at least two sites");
}

LatticeSpec LatticeSpec::cube(int d, int L, Boundary b) {
  LatticeSpec s;
  s.dim = d;
  s.extent.assign(d, L);
  s.boundary = b;
  return s;
}

int SiteSet::n_occupied() const { return static_cast<int>(std::count(occupied.begin(), occupied.end(), 1)); }

std::vector<int> SiteSet::occupied_indices() const {
  std::vector<int> idx;
  for (int i = 0; i < n_sites(); ++i)
    if (occupied[i]) idx.push_back(i);
  return idx;
}

namespace {

Coord unravel(const LatticeSpec& spec, int index) {
  Coord c{0, 0, 0};
  for (int a = spec.dim - 1; a >= 0; --a) {
    c[a] = index % spec.extent[a];
    index /= spec.extent[a];
  }
  return c;
}

double axis_delta(const LatticeSpec& spec, int axis, int a, int b) {
  int d = std::abs(a - b);
  if (spec.boundary == Boundary::periodic) d = std::min(d, spec.extent[axis] - d);
  return d;
}

double coord_distance(const LatticeSpec& spec, const Coord& a, const Coord& b) {
  double r2 = 0;
  for (int ax = 0; ax < spec.dim; ++ax) {
    const double d = axis_delta(spec, ax, a[ax], b[ax]);
    r2 += d * d;
  }
  return std::sqrt(r2);
}

double power(double r, double alpha) { return alpha == 0 ? 1.0 : std::pow(r, -alpha); }

}  // namespace

SiteSet build_lattice(const LatticeSpec& spec) {
  spec.validate();
  SiteSet s;
  const int n = spec.n_sites();
  s.positions.reserve(n);
  for (int i = 0; i < n; ++i) s.positions.push_back(unravel(spec, i));
  s.occupied.assign(n, 1);
  return s;
}

double pairwise_distance(const LatticeSpec& spec, int i, int j) {
  if (i == j) throw std::invalid_argument("pairwise_distance: i == j");
  const int n = spec.n_sites();
  if (i < 0 || j < 0 || i >= n || j >= n) throw std::out_of_range("pairwise_distance: site index");
  return coord_distance(spec, unravel(spec, i), unravel(spec, j));
}

Eigen::MatrixXd build_coupling_kernel(const SiteSet& sites, const LatticeSpec& spec, double alpha) {
  if (!(alpha >= 0)) throw std::invalid_argument("alpha must be >= 0");
  const auto idx = sites.occupied_indices();
  const int n = static_cast<int>(idx.size());
  if (n < 2) throw std::invalid_argument("kernel needs at least two occupied sites");
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double r = coord_distance(spec, sites.positions[idx[a]], sites.positions[idx[b]]);
      if (r == 0) throw std::invalid_argument("coincident occupied sites");
      K(a, b) = K(b, a) = power(r, alpha);
    }
  }
  double total = 0;
  for (int a = 0; a < n; ++a) {
    double row = 0;
    for (int b = 0; b < n; ++b) row += K(a, b);
    total += row;
  }
  K *= n / total;
  return K;
}

std::vector<double> displacement_kernel(const LatticeSpec& spec, double alpha) {
  spec.validate();
  if (spec.boundary != Boundary::periodic) throw std::invalid_argument("displacement kernel requires periodic boundaries");
  const int n = spec.n_sites();
  const Coord origin{0, 0, 0};
  std::vector<double> f(n, 0.0);
  for (int i = 1; i < n; ++i) f[i] = power(coord_distance(spec, origin, unravel(spec, i)), alpha);
  double sum = 0;
  for (double v : f) sum += v;
  for (double& v : f) v /= sum;
  return f;
}

double fourier_coupling(const LatticeSpec& spec, double alpha, const std::array<double, 3>& k) {
  if (spec.boundary != Boundary::periodic)
    throw std::invalid_argument("fourier_coupling needs periodic boundaries; use coupling_spectrum");
  const auto f = displacement_kernel(spec, alpha);
  double re = 0, im = 0;
  for (int i = 1; i < spec.n_sites(); ++i) {
    const Coord c = unravel(spec, i);
    double phase = 0;
    for (int a = 0; a < spec.dim; ++a) {
      int d = c[a];
      if (2 * d > spec.extent[a]) d -= spec.extent[a];
      phase += k[a] * d;
    }
    re += f[i] * std::cos(phase);
    im -= f[i] * std::sin(phase);
  }
  if (std::abs(im) > 1e-10) throw std::runtime_error("fourier_coupling: non-real f_k");
  return re;
}

std::array<double, 3> MomentumGrid::wavevector(int index) const {
  const auto m = mode(index);
  std::array<double, 3> k{0, 0, 0};
  for (int a = 0; a < spec.dim; ++a) k[a] = 2 * M_PI * m[a] / spec.extent[a];
  return k;
}

std::array<int, 3> MomentumGrid::mode(int index) const { return unravel(spec, index); }

void cosine_transform(const LatticeSpec& spec, std::vector<double>& data) {
  std::vector<int> stride(spec.dim, 1);
  for (int a = spec.dim - 2; a >= 0; --a) stride[a] = stride[a + 1] * spec.extent[a + 1];
  const int n = spec.n_sites();
  for (int ax = 0; ax < spec.dim; ++ax) {
    const int L = spec.extent[ax];
    const int s = stride[ax];
    std::vector<double> table(L * L);
    for (int m = 0; m < L; ++m)
      for (int r = 0; r < L; ++r) table[m * L + r] = std::cos(2 * M_PI * ((static_cast<long>(m) * r) % L) / L);
    std::vector<double> line(L), out(L);
    for (int base = 0; base < n; ++base) {
      if ((base / s) % L != 0) continue;
      for (int r = 0; r < L; ++r) line[r] = data[base + r * s];
      for (int m = 0; m < L; ++m) {
        double acc = 0;
        for (int r = 0; r < L; ++r) acc += table[m * L + r] * line[r];
        out[m] = acc;
      }
      for (int m = 0; m < L; ++m) data[base + m * s] = out[m];
    }
  }
}

MomentumGrid momentum_grid(const LatticeSpec& spec, double alpha) {
  MomentumGrid g;
  g.spec = spec;
  g.fk = displacement_kernel(spec, alpha);
  cosine_transform(spec, g.fk);
  return g;
}

std::array<double, 3> critical_wavevector(const LatticeSpec& spec) {
  int axis = 0;
  for (int a = 1; a < spec.dim; ++a)
    if (spec.extent[a] > spec.extent[axis]) axis = a;
  std::array<double, 3> k{0, 0, 0};
  k[axis] = 2 * M_PI / spec.extent[axis];
  return k;
}

std::vector<double> coupling_spectrum(const Eigen::MatrixXd& kernel) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kernel, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("coupling_spectrum: diagonalization failed");
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + kernel.rows());
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

SiteSet random_filling(const SiteSet& sites, double mean_fraction, double epsilon, std::uint64_t seed) {
  if (!(mean_fraction > 0 && mean_fraction <= 1)) throw std::invalid_argument("mean_fraction must be in (0, 1]");
  if (!(epsilon >= 0)) throw std::invalid_argument("epsilon must be >= 0");
  if (mean_fraction * (1 + epsilon) > 1 + 1e-12) throw std::invalid_argument("filling fraction exceeds 1");
  auto g = make_stream(seed, 0);
  const double sign = (g() >> 63) ? 1.0 : -1.0;
  const int N = sites.n_sites();
  const int n = static_cast<int>(std::lround(N * mean_fraction * (1 + sign * epsilon)));
  if (n < 2) throw std::invalid_argument("random filling leaves fewer than two atoms");
  std::vector<int> order(N);
  std::iota(order.begin(), order.end(), 0);
  for (int i = 0; i < n; ++i) {
    const int j = i + static_cast<int>(uniform_index(g, N - i));
    std::swap(order[i], order[j]);
  }
  SiteSet out = sites;
  out.occupied.assign(N, 0);
  for (int i = 0; i < n; ++i) out.occupied[order[i]] = 1;
  return out;
}

// Coupling model -----------------------------------------------------------

double Anisotropy::total() const { return std::abs(x) + std::abs(y) + std::abs(z); }

Preset parse_preset(const std::string& s) {
  if (s == "gct") return Preset::gct;
  if (s == "xxz") return Preset::xxz;
  if (s == "tfi") return Preset::tfi;
  if (s == "ct") return Preset::ct;
  if (s == "twist") return Preset::twist;
  if (s == "custom") return Preset::custom;
  throw std::invalid_argument("unknown preset '" + s + "'");
}

std::string to_string(Preset p) {
  switch (p) {
    case Preset::gct: return "gct";
    case Preset::xxz: return "xxz";
    case Preset::tfi: return "tfi";
    case Preset::ct: return "ct";
    case Preset::twist: return "twist";
    case Preset::custom: return "custom";
  }
  return "?";
}

Anisotropy preset_anisotropy(Preset p, double chi) {
  switch (p) {
    case Preset::gct:
      if (std::isinf(chi)) return {1, -1, 0};
      return {1 + chi, 1 - chi, 1};
    case Preset::xxz: return {1 - chi, 1, 1};
    case Preset::tfi: return {1, 0, 0};
    default: throw std::invalid_argument("preset has no lattice anisotropy");
  }
}

Anisotropy collective_anisotropy(Preset p, double chi, int N) {
  if (N < 2) throw std::invalid_argument("collective_anisotropy: N must be >= 2");
  if (!std::isfinite(chi)) throw std::invalid_argument("collective_anisotropy: chi must be finite");
  // sum_{i != j} s_i^x s_j^x = Sx^2 - N/4 and f_ij = 1/(N-1) at alpha = 0
  const double a = chi * (N - 1) / N;
  if (p == Preset::ct) return {a, -a, 0};
  if (p == Preset::twist) return {a, 0, 0};
  throw std::invalid_argument("collective_anisotropy: preset must be ct or twist");
}

CouplingModel make_model(const SiteSet& sites, const LatticeSpec& spec, double alpha, Preset preset, double chi,
                         double h) {
  CouplingModel m;
  m.alpha = alpha;
  m.kernel = build_coupling_kernel(sites, spec, alpha);
  if (preset == Preset::ct || preset == Preset::twist)
    m.J = collective_anisotropy(preset, chi, sites.n_occupied());
  else if (preset != Preset::custom)
    m.J = preset_anisotropy(preset, chi);
  m.h = h;
  m.chi = chi;
  return m;
}

void write_kernel_csv(const Eigen::MatrixXd& kernel, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os.precision(17);
  for (Eigen::Index i = 0; i < kernel.rows(); ++i) {
    for (Eigen::Index j = 0; j < kernel.cols(); ++j) os << (j ? "," : "") << kernel(i, j);
    os << '\n';
  }
}

}  // namespace gct

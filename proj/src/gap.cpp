#include <cmath>
#include <stdexcept>

#include "gct/exact.hpp"

namespace gct {

GapResult heisenberg_gap(const Eigen::MatrixXd& f) {
  const int N = static_cast<int>(f.rows());
  if (N < 4 || N > 40) throw std::invalid_argument("heisenberg_gap: N must be in [4, 40]");
  // Basis: the two flipped spins (p < q).
  std::vector<std::pair<int, int>> basis;
  Eigen::MatrixXi index = Eigen::MatrixXi::Constant(N, N, -1);
  for (int p = 0; p < N; ++p)
    for (int q = p + 1; q < N; ++q) {
      index(p, q) = index(q, p) = static_cast<int>(basis.size());
      basis.emplace_back(p, q);
    }
  const int D = static_cast<int>(basis.size());
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(D, D), S2 = Eigen::MatrixXd::Zero(D, D);
  double row_total = 0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (i != j) row_total += f(i, j);
  const double e_pol = -0.25 * row_total;
  const double M = N / 2.0 - 2;
  for (int a = 0; a < D; ++a) {
    const auto [p, q] = basis[a];
    // -sum_{i != j} f z_i z_j with z = -1/2 on p, q: flipping sign of the
    // bonds touching p or q (but not the p-q bond).
    double diag = e_pol;
    for (int r = 0; r < N; ++r) {
      if (r != p && r != q) diag += 2 * 0.5 * (f(p, r) + f(q, r));
    }
    H(a, a) = diag;
    S2(a, a) = N / 2.0 + M * M;
    for (int r = 0; r < N; ++r) {
      if (r == p || r == q) continue;
      const int b1 = index(r, q), b2 = index(p, r);
      H(b1, a) += -f(p, r);
      H(b2, a) += -f(q, r);
      S2(b1, a) += 1;
      S2(b2, a) += 1;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S2);
  if (es.info() != Eigen::Success) throw std::runtime_error("heisenberg_gap: S^2 diagonalization failed");
  const double target = M * (M + 1);
  std::vector<int> keep;
  for (int k = 0; k < D; ++k)
    if (std::abs(es.eigenvalues()(k) - target) < 1e-6) keep.push_back(k);
  if (keep.empty()) throw std::runtime_error("heisenberg_gap: no J = N/2 - 2 states found");
  Eigen::MatrixXd Q(D, keep.size());
  for (std::size_t c = 0; c < keep.size(); ++c) Q.col(c) = es.eigenvectors().col(keep[c]);
  const Eigen::MatrixXd Hs = Q.transpose() * H * Q;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> hs(Hs);
  GapResult r;
  r.retained = static_cast<int>(keep.size());
  for (int c = 0; c < r.retained; ++c) {
    const Eigen::VectorXd v = Q * hs.eigenvectors().col(c);
    r.max_s2_error = std::max(r.max_s2_error, std::abs(v.dot(S2 * v) - target));
  }
  r.gap = hs.eigenvalues()(0) - e_pol;
  return r;
}

namespace {

Eigen::MatrixXd chain_kernel(int N, double alpha) {
  const auto spec = LatticeSpec::cube(1, N, Boundary::periodic);
  return build_coupling_kernel(build_lattice(spec), spec, alpha);
}

}  // namespace

GapResult heisenberg_gap(int N, double alpha) { return heisenberg_gap(chain_kernel(N, alpha)); }

double spinwave_gap(int N, double alpha) {
  const auto spec = LatticeSpec::cube(1, N, Boundary::periodic);
  return 2 * std::abs(fourier_coupling(spec, alpha, critical_wavevector(spec)) - 1);
}

double heisenberg_gap_bruteforce(const Eigen::MatrixXd& f) {
  const int N = static_cast<int>(f.rows());
  if (N < 4 || N > 10) throw std::invalid_argument("heisenberg_gap_bruteforce: N must be in [4, 10]");
  const int D = 1 << N;
  using Mat = Eigen::MatrixXcd;
  const Mat I2 = Mat::Identity(2, 2);
  Mat sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 0.5, 0.5, 0;
  sy << 0, std::complex<double>(0, -0.5), std::complex<double>(0, 0.5), 0;
  sz << 0.5, 0, 0, -0.5;
  auto site_op = [&](const Mat& op, int site) {
    Mat out = Mat::Identity(1, 1);
    for (int k = 0; k < N; ++k) {
      const Mat& factor = (k == site) ? op : I2;
      Mat next(out.rows() * 2, out.cols() * 2);
      for (int a = 0; a < out.rows(); ++a)
        for (int b = 0; b < out.cols(); ++b) next.block(2 * a, 2 * b, 2, 2) = out(a, b) * factor;
      out = next;
    }
    return out;
  };
  std::vector<Mat> X, Y, Z;
  for (int i = 0; i < N; ++i) {
    X.push_back(site_op(sx, i));
    Y.push_back(site_op(sy, i));
    Z.push_back(site_op(sz, i));
  }
  Mat H = Mat::Zero(D, D), Sx = Mat::Zero(D, D), Sy = Mat::Zero(D, D), Sz = Mat::Zero(D, D);
  for (int i = 0; i < N; ++i) {
    Sx += X[i];
    Sy += Y[i];
    Sz += Z[i];
    for (int j = 0; j < N; ++j)
      if (i != j) H -= f(i, j) * (X[i] * X[j] + Y[i] * Y[j] + Z[i] * Z[j]);
  }
  const Mat S2 = Sx * Sx + Sy * Sy + Sz * Sz;
  const double M = N / 2.0 - 2;
  // Sector of total Sz = M from the diagonal of Sz.
  std::vector<int> sector;
  for (int x = 0; x < D; ++x)
    if (std::abs(Sz(x, x).real() - M) < 1e-9) sector.push_back(x);
  const int d = static_cast<int>(sector.size());
  Mat Hs(d, d), S2s(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      Hs(a, b) = H(sector[a], sector[b]);
      S2s(a, b) = S2(sector[a], sector[b]);
    }
  Eigen::SelfAdjointEigenSolver<Mat> es(S2s);
  std::vector<int> keep;
  for (int k = 0; k < d; ++k)
    if (std::abs(es.eigenvalues()(k) - M * (M + 1)) < 1e-6) keep.push_back(k);
  Mat Q(d, keep.size());
  for (std::size_t c = 0; c < keep.size(); ++c) Q.col(c) = es.eigenvectors().col(keep[c]);
  Eigen::SelfAdjointEigenSolver<Mat> hs(Q.adjoint() * Hs * Q);
  // polarized state: every spin up
  const double e_pol = H(0, 0).real();
  return hs.eigenvalues()(0) - e_pol;
}

}  // namespace gct

#include <cmath>
#include <stdexcept>

#include "gct/exact.hpp"

namespace gct {

namespace {

// <m+1| S+ |m> on the spin-S ladder
double raise(double S, double m) { return std::sqrt(std::max(0.0, S * (S + 1) - m * (m + 1))); }

}  // namespace

Moments collective_evolve(int N, CollectivePreset preset, double chi, const std::vector<double>& times,
                          const std::vector<double>& multipliers) {
  if (N < 2 || N % 2) throw std::invalid_argument("collective_evolve: N must be even and >= 2");
  if (multipliers.empty()) throw std::invalid_argument("collective_evolve: no strength multipliers");
  const double S = N / 2.0;
  // The initial state and both Hamiltonians only connect m = S, S-2, ...
  const int D = N / 2 + 1;
  Eigen::VectorXd m(D), diag(D), sub(D - 1), pair(D - 1);
  for (int j = 0; j < D; ++j) m(j) = S - 2 * j;
  for (int j = 0; j + 1 < D; ++j) pair(j) = raise(S, m(j) - 2) * raise(S, m(j) - 1);  // <m_j|S+^2|m_j - 2>
  if (preset == CollectivePreset::ct) {
    diag.setZero();
    sub = pair * (chi / (2.0 * N));
  } else {
    for (int j = 0; j < D; ++j) diag(j) = chi / N * 0.5 * (S * (S + 1) - m(j) * m(j));
    sub = pair * (chi / (4.0 * N));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw std::runtime_error("collective_evolve: eigensolver failed");
  const Eigen::MatrixXd& V = es.eigenvectors();
  const Eigen::VectorXd& E = es.eigenvalues();
  const Eigen::VectorXd c0 = V.row(0).transpose();

  const int T = static_cast<int>(times.size());
  Moments out;
  out.resize(T);
  out.t = times;
  Eigen::MatrixXd re(D, T), im(D, T);
  for (double mu : multipliers) {
    for (int k = 0; k < T; ++k) {
      for (int n = 0; n < D; ++n) {
        const double ph = mu * E(n) * times[k];
        re(n, k) = c0(n) * std::cos(ph);
        im(n, k) = -c0(n) * std::sin(ph);
      }
    }
    const Eigen::MatrixXd pr = V * re, pi = V * im;
    for (int k = 0; k < T; ++k) {
      double sz = 0, sz2 = 0, sp2_re = 0, sp2_im = 0;
      for (int j = 0; j < D; ++j) {
        const double p = pr(j, k) * pr(j, k) + pi(j, k) * pi(j, k);
        sz += p * m(j);
        sz2 += p * m(j) * m(j);
      }
      for (int j = 0; j + 1 < D; ++j) {
        // conj(psi_j) psi_{j+1} <m_j|S+^2|m_{j+1}>
        const double ar = pr(j, k), ai = pi(j, k), br = pr(j + 1, k), bi = pi(j + 1, k);
        sp2_re += pair(j) * (ar * br + ai * bi);
        sp2_im += pair(j) * (ar * bi - ai * br);
      }
      const double perp = S * (S + 1) - sz2;
      const double w = 1.0 / multipliers.size();
      out.sz[k] += w * sz;
      out.vxx[k] += w * 0.5 * (sp2_re + perp);
      out.vyy[k] += w * 0.5 * (-sp2_re + perp);
      out.cxy[k] += w * 0.5 * sp2_im;
    }
  }
  // Transverse means vanish by parity; variances are about zero mean.
  return out;
}

}  // namespace gct

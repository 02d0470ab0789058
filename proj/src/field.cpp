#include <fftw3.h>

#include <mutex>
#include <stdexcept>

#include "gct/dtwa.hpp"

namespace gct {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class DenseField final : public FieldEngine {
 public:
  explicit DenseField(const Eigen::MatrixXd& K) : K_(K) {}
  void apply(const Eigen::MatrixXd& S, Eigen::MatrixXd& F) override { F.noalias() = K_ * S; }

 private:
  const Eigen::MatrixXd& K_;
};

class FftField final : public FieldEngine {
 public:
  FftField(const LatticeSpec& spec, double alpha, int columns) : cols_(columns) {
    n_ = spec.n_sites();
    int dims[3];
    for (int a = 0; a < spec.dim; ++a) dims[a] = spec.extent[a];
    nc_ = n_ / spec.extent[spec.dim - 1] * (spec.extent[spec.dim - 1] / 2 + 1);
    real_ = fftw_alloc_real(static_cast<std::size_t>(n_) * cols_);
    spec_ = fftw_alloc_complex(static_cast<std::size_t>(nc_) * cols_);
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fwd_ = fftw_plan_many_dft_r2c(spec.dim, dims, cols_, real_, nullptr, 1, n_, spec_, nullptr, 1, nc_,
                                    FFTW_ESTIMATE);
      inv_ = fftw_plan_many_dft_c2r(spec.dim, dims, cols_, spec_, nullptr, 1, nc_, real_, nullptr, 1, n_,
                                    FFTW_ESTIMATE);
      fftw_plan one = fftw_plan_many_dft_r2c(spec.dim, dims, 1, real_, nullptr, 1, n_, spec_, nullptr, 1, nc_,
                                             FFTW_ESTIMATE);
      const auto f = displacement_kernel(spec, alpha);
      std::copy(f.begin(), f.end(), real_);
      fftw_execute(one);
      fftw_destroy_plan(one);
    }
    if (!fwd_ || !inv_) throw std::runtime_error("fft field: planning failed");
    fk_.resize(nc_);
    for (int k = 0; k < nc_; ++k) fk_[k] = spec_[k][0] / n_;
  }
  ~FftField() override {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(inv_);
    fftw_free(real_);
    fftw_free(spec_);
  }
  void apply(const Eigen::MatrixXd& S, Eigen::MatrixXd& F) override {
    if (S.rows() != n_ || S.cols() != cols_) throw std::invalid_argument("fft field: shape mismatch");
    std::copy(S.data(), S.data() + static_cast<std::size_t>(n_) * cols_, real_);
    fftw_execute(fwd_);
    for (int c = 0; c < cols_; ++c) {
      fftw_complex* col = spec_ + static_cast<std::size_t>(c) * nc_;
      for (int k = 0; k < nc_; ++k) {
        col[k][0] *= fk_[k];
        col[k][1] *= fk_[k];
      }
    }
    fftw_execute(inv_);
    F.resize(n_, cols_);
    std::copy(real_, real_ + static_cast<std::size_t>(n_) * cols_, F.data());
  }

 private:
  int n_ = 0, nc_ = 0, cols_ = 0;
  double* real_ = nullptr;
  fftw_complex* spec_ = nullptr;
  fftw_plan fwd_ = nullptr, inv_ = nullptr;
  std::vector<double> fk_;
};

}  // namespace

std::unique_ptr<FieldEngine> make_dense_field(const Eigen::MatrixXd& kernel) {
  return std::make_unique<DenseField>(kernel);
}

std::unique_ptr<FieldEngine> make_fft_field(const LatticeSpec& spec, double alpha, int columns) {
  spec.validate();
  if (spec.boundary != Boundary::periodic) throw std::invalid_argument("fft field needs periodic boundaries");
  return std::make_unique<FftField>(spec, alpha, columns);
}

}  // namespace gct

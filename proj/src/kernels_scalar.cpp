#include "nimbus/kernels.hpp"

// Reference kernels: plain loops, no intrinsics. These define the semantics
// the AVX2 variants are tested against.

namespace nimbus::kernels {
namespace {

void gemm_nn_scalar(const double* a, const double* b, double* c, int m, int n,
                    int k, bool accumulate) {
  if (!accumulate) {
    for (int i = 0; i < m * n; ++i) c[i] = 0.0;
  }
  for (int i = 0; i < m; ++i) {
    const double* arow = a + static_cast<std::size_t>(i) * k;
    double* crow = c + static_cast<std::size_t>(i) * n;
    for (int l = 0; l < k; ++l) {
      const double av = arow[l];
      const double* brow = b + static_cast<std::size_t>(l) * n;
      for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

void gemm_tn_scalar(const double* a, const double* b, double* c, int m, int n,
                    int k, bool accumulate) {
  // a is [k,m]; rank-1 updates keep both source rows contiguous.
  if (!accumulate) {
    for (int i = 0; i < m * n; ++i) c[i] = 0.0;
  }
  for (int l = 0; l < k; ++l) {
    const double* arow = a + static_cast<std::size_t>(l) * m;
    const double* brow = b + static_cast<std::size_t>(l) * n;
    for (int i = 0; i < m; ++i) {
      const double av = arow[i];
      double* crow = c + static_cast<std::size_t>(i) * n;
      for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

void gemm_nt_scalar(const double* a, const double* b, double* c, int m, int n,
                    int k, bool accumulate) {
  // b is [n,k]; every C entry is a row-by-row dot product.
  for (int i = 0; i < m; ++i) {
    const double* arow = a + static_cast<std::size_t>(i) * k;
    double* crow = c + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) {
      const double* brow = b + static_cast<std::size_t>(j) * k;
      double acc = 0.0;
      for (int l = 0; l < k; ++l) acc += arow[l] * brow[l];
      crow[j] = accumulate ? crow[j] + acc : acc;
    }
  }
}

void add_scalar_k(const double* x, const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + y[i];
}

void sub_scalar_k(const double* x, const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] - y[i];
}

void mul_scalar_k(const double* x, const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * y[i];
}

void axpy_scalar_k(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_scalar_k(double a, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i];
}

double dot_scalar_k(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double sum_scalar_k(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table = {
      gemm_nn_scalar, gemm_tn_scalar, gemm_nt_scalar, add_scalar_k,
      sub_scalar_k,   mul_scalar_k,   axpy_scalar_k,  scale_scalar_k,
      dot_scalar_k,   sum_scalar_k,
  };
  return table;
}

}  // namespace nimbus::kernels

// AVX2/FMA variants of the inner-loop kernels. This translation unit is the
// only one compiled with -mavx2 -mfma; callers go through the dispatch table
// so the binary stays runnable on non-AVX2 hosts.

#include "nimbus/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace nimbus::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

// 4x8 register tile: 8 accumulators, two B vectors live per k step.
void gemm_nn_avx2(const double* a, const double* b, double* c, int m, int n,
                  int k, bool accumulate) {
  if (!accumulate) {
    for (int i = 0; i < m * n; ++i) c[i] = 0.0;
  }
  const int n8 = n - (n % 8);
  const int m4 = m - (m % 4);
  for (int j0 = 0; j0 < n8; j0 += 8) {
    for (int i0 = 0; i0 < m4; i0 += 4) {
      double* c0 = c + static_cast<std::size_t>(i0) * n + j0;
      double* c1 = c0 + n;
      double* c2 = c1 + n;
      double* c3 = c2 + n;
      __m256d acc00 = _mm256_loadu_pd(c0), acc01 = _mm256_loadu_pd(c0 + 4);
      __m256d acc10 = _mm256_loadu_pd(c1), acc11 = _mm256_loadu_pd(c1 + 4);
      __m256d acc20 = _mm256_loadu_pd(c2), acc21 = _mm256_loadu_pd(c2 + 4);
      __m256d acc30 = _mm256_loadu_pd(c3), acc31 = _mm256_loadu_pd(c3 + 4);
      const double* a0 = a + static_cast<std::size_t>(i0) * k;
      const double* a1 = a0 + k;
      const double* a2 = a1 + k;
      const double* a3 = a2 + k;
      for (int l = 0; l < k; ++l) {
        const double* brow = b + static_cast<std::size_t>(l) * n + j0;
        const __m256d b0 = _mm256_loadu_pd(brow);
        const __m256d b1 = _mm256_loadu_pd(brow + 4);
        __m256d av;
        av = _mm256_set1_pd(a0[l]);
        acc00 = _mm256_fmadd_pd(av, b0, acc00);
        acc01 = _mm256_fmadd_pd(av, b1, acc01);
        av = _mm256_set1_pd(a1[l]);
        acc10 = _mm256_fmadd_pd(av, b0, acc10);
        acc11 = _mm256_fmadd_pd(av, b1, acc11);
        av = _mm256_set1_pd(a2[l]);
        acc20 = _mm256_fmadd_pd(av, b0, acc20);
        acc21 = _mm256_fmadd_pd(av, b1, acc21);
        av = _mm256_set1_pd(a3[l]);
        acc30 = _mm256_fmadd_pd(av, b0, acc30);
        acc31 = _mm256_fmadd_pd(av, b1, acc31);
      }
      _mm256_storeu_pd(c0, acc00);
      _mm256_storeu_pd(c0 + 4, acc01);
      _mm256_storeu_pd(c1, acc10);
      _mm256_storeu_pd(c1 + 4, acc11);
      _mm256_storeu_pd(c2, acc20);
      _mm256_storeu_pd(c2 + 4, acc21);
      _mm256_storeu_pd(c3, acc30);
      _mm256_storeu_pd(c3 + 4, acc31);
    }
    // leftover rows under this column panel
    for (int i = m4; i < m; ++i) {
      const double* arow = a + static_cast<std::size_t>(i) * k;
      double* crow = c + static_cast<std::size_t>(i) * n + j0;
      __m256d s0 = _mm256_loadu_pd(crow);
      __m256d s1 = _mm256_loadu_pd(crow + 4);
      for (int l = 0; l < k; ++l) {
        const double* brow = b + static_cast<std::size_t>(l) * n + j0;
        const __m256d av = _mm256_set1_pd(arow[l]);
        s0 = _mm256_fmadd_pd(av, _mm256_loadu_pd(brow), s0);
        s1 = _mm256_fmadd_pd(av, _mm256_loadu_pd(brow + 4), s1);
      }
      _mm256_storeu_pd(crow, s0);
      _mm256_storeu_pd(crow + 4, s1);
    }
  }
  // leftover columns, scalar
  if (n8 < n) {
    for (int i = 0; i < m; ++i) {
      const double* arow = a + static_cast<std::size_t>(i) * k;
      double* crow = c + static_cast<std::size_t>(i) * n;
      for (int l = 0; l < k; ++l) {
        const double av = arow[l];
        const double* brow = b + static_cast<std::size_t>(l) * n;
        for (int j = n8; j < n; ++j) crow[j] += av * brow[j];
      }
    }
  }
}

void gemm_tn_avx2(const double* a, const double* b, double* c, int m, int n,
                  int k, bool accumulate) {
  if (!accumulate) {
    for (int i = 0; i < m * n; ++i) c[i] = 0.0;
  }
  const int n4 = n - (n % 4);
  for (int l = 0; l < k; ++l) {
    const double* arow = a + static_cast<std::size_t>(l) * m;
    const double* brow = b + static_cast<std::size_t>(l) * n;
    for (int i = 0; i < m; ++i) {
      const __m256d av = _mm256_set1_pd(arow[i]);
      double* crow = c + static_cast<std::size_t>(i) * n;
      int j = 0;
      for (; j < n4; j += 4) {
        __m256d cv = _mm256_loadu_pd(crow + j);
        cv = _mm256_fmadd_pd(av, _mm256_loadu_pd(brow + j), cv);
        _mm256_storeu_pd(crow + j, cv);
      }
      for (; j < n; ++j) crow[j] += arow[i] * brow[j];
    }
  }
}

void gemm_nt_avx2(const double* a, const double* b, double* c, int m, int n,
                  int k, bool accumulate) {
  const int k4 = k - (k % 4);
  for (int i = 0; i < m; ++i) {
    const double* arow = a + static_cast<std::size_t>(i) * k;
    double* crow = c + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) {
      const double* brow = b + static_cast<std::size_t>(j) * k;
      __m256d acc0 = _mm256_setzero_pd();
      __m256d acc1 = _mm256_setzero_pd();
      int l = 0;
      for (; l + 8 <= k; l += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(arow + l),
                               _mm256_loadu_pd(brow + l), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(arow + l + 4),
                               _mm256_loadu_pd(brow + l + 4), acc1);
      }
      for (; l < k4; l += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(arow + l),
                               _mm256_loadu_pd(brow + l), acc0);
      }
      double acc = hsum(_mm256_add_pd(acc0, acc1));
      for (; l < k; ++l) acc += arow[l] * brow[l];
      crow[j] = accumulate ? crow[j] + acc : acc;
    }
  }
}

void add_avx2(const double* x, const double* y, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i,
                     _mm256_add_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) out[i] = x[i] + y[i];
}

void sub_avx2(const double* x, const double* y, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i,
                     _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) out[i] = x[i] - y[i];
}

void mul_avx2(const double* x, const double* y, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i,
                     _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) out[i] = x[i] * y[i];
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d yv = _mm256_loadu_pd(y + i);
    yv = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), yv);
    _mm256_storeu_pd(y + i, yv);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scale_avx2(double a, const double* x, double* out, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) out[i] = a * x[i];
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4),
                           acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i];
  return acc;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table = {
      gemm_nn_avx2, gemm_tn_avx2, gemm_nt_avx2, add_avx2, sub_avx2,
      mul_avx2,     axpy_avx2,    scale_avx2,   dot_avx2, sum_avx2,
  };
  return table;
}

}  // namespace nimbus::kernels

#else

namespace nimbus::kernels {

// Built without AVX2 support; dispatch falls back to the scalar table.
const KernelTable& avx2_table() { return scalar_table(); }

}  // namespace nimbus::kernels

#endif

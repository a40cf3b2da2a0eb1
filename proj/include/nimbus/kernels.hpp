#pragma once

#include <cstddef>
#include <string>

namespace nimbus::kernels {

// Double-precision inner-loop kernels behind the tensor engine. Every entry
// has a scalar reference implementation and an AVX2 variant; the active table
// is picked once at startup from CPUID, overridable with NIMBUS_KERNELS
// (scalar | avx2 | auto) or set_backend(). The two variants are
// equivalence-tested against each other in tests/test_kernels.cpp.
enum class Backend { Scalar, Avx2 };

struct KernelTable {
  // C[m,n] = A[m,k] * B[k,n]            (row-major, accumulate adds into C)
  void (*gemm_nn)(const double* a, const double* b, double* c, int m, int n,
                  int k, bool accumulate);
  // C[m,n] = A^T * B with A stored [k,m]
  void (*gemm_tn)(const double* a, const double* b, double* c, int m, int n,
                  int k, bool accumulate);
  // C[m,n] = A * B^T with B stored [n,k]
  void (*gemm_nt)(const double* a, const double* b, double* c, int m, int n,
                  int k, bool accumulate);

  void (*add)(const double* x, const double* y, double* out, std::size_t n);
  void (*sub)(const double* x, const double* y, double* out, std::size_t n);
  void (*mul)(const double* x, const double* y, double* out, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // out = a * x
  void (*scale)(double a, const double* x, double* out, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
};

const KernelTable& scalar_table();
const KernelTable& avx2_table();  // valid only when cpu_has_avx2()

bool cpu_has_avx2();

// Active table. Resolved on first call; stable for the process lifetime
// unless set_backend() is used (tests only).
const KernelTable& active();
Backend active_backend();
void set_backend(Backend b);
std::string backend_name(Backend b);

}  // namespace nimbus::kernels

#include "qgraph/simd.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define QGRAPH_X86 1
#else
#define QGRAPH_X86 0
#endif

namespace qgraph::simd::detail {

#if QGRAPH_X86 && (defined(__GNUC__) || defined(__clang__))

#define QGRAPH_AVX2 __attribute__((target("avx2,fma")))

namespace {

QGRAPH_AVX2 double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

QGRAPH_AVX2 double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  double sum = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) sum += x[i] * y[i];
  return sum;
}

QGRAPH_AVX2 void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

QGRAPH_AVX2 void scale_avx2(double a, double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

QGRAPH_AVX2 void csr_matvec_avx2(const std::int32_t* row_ptr, const std::int32_t* col, const double* val,
                                 std::size_t rows, const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    std::int32_t k = row_ptr[r];
    const std::int32_t end = row_ptr[r + 1];
    __m256d acc = _mm256_setzero_pd();
    for (; k + 4 <= end; k += 4) {
      const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(col + k));
      const __m256d xs = _mm256_i32gather_pd(x, idx, 8);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(val + k), xs, acc);
    }
    double sum = hsum(acc);
    for (; k < end; ++k) sum += val[k] * x[col[k]];
    y[r] = sum;
  }
}

}  // namespace

const KernelTable kAvx2Table{Isa::Avx2, dot_avx2, axpy_avx2, scale_avx2, csr_matvec_avx2};

bool cpu_has_avx2_fma() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

#else

// No AVX2 on this target: the table aliases the scalar kernels and is never selected.
const KernelTable kAvx2Table{Isa::Avx2, kScalarTable.dot, kScalarTable.axpy, kScalarTable.scale,
                             kScalarTable.csr_matvec};

bool cpu_has_avx2_fma() { return false; }

#endif

}  // namespace qgraph::simd::detail

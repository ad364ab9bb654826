#pragma once

// Vector kernels for the finite-element oracle's inner loops.
//
// Every kernel has a scalar reference implementation and an AVX2/FMA variant.
// The active table is chosen once at first use from CPUID; setting the
// environment variable QGRAPH_SIMD=scalar forces the reference kernels.
// Variants agree up to floating-point reassociation, not bit for bit.

#include <cstddef>
#include <cstdint>
#include <span>

namespace qgraph::simd {

enum class Isa { Scalar, Avx2 };

const char* to_string(Isa isa);

/// CSR matrix view: row r holds col[row_ptr[r] .. row_ptr[r+1]).
struct CsrView {
  std::span<const std::int32_t> row_ptr;
  std::span<const std::int32_t> col;
  std::span<const double> val;

  std::size_t rows() const noexcept { return row_ptr.empty() ? 0 : row_ptr.size() - 1; }
};

struct KernelTable {
  Isa isa;
  double (*dot)(const double* x, const double* y, std::size_t n);
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  void (*scale)(double a, double* x, std::size_t n);
  void (*csr_matvec)(const std::int32_t* row_ptr, const std::int32_t* col, const double* val,
                     std::size_t rows, const double* x, double* y);
};

bool available(Isa isa);
const KernelTable& table(Isa isa);  ///< throws std::invalid_argument if unavailable
const KernelTable& active();

double dot(std::span<const double> x, std::span<const double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);
void scale(double a, std::span<double> x);
/// y = A x
void csr_matvec(const CsrView& a, std::span<const double> x, std::span<double> y);

namespace detail {
extern const KernelTable kScalarTable;
extern const KernelTable kAvx2Table;
bool cpu_has_avx2_fma();
}  // namespace detail

}  // namespace qgraph::simd

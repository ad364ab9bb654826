#include "qgraph/simd.hpp"

namespace qgraph::simd::detail {

namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += x[i] * y[i];
  return sum;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_scalar(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void csr_matvec_scalar(const std::int32_t* row_ptr, const std::int32_t* col, const double* val,
                       std::size_t rows, const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    double sum = 0.0;
    for (std::int32_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) sum += val[k] * x[col[k]];
    y[r] = sum;
  }
}

}  // namespace

const KernelTable kScalarTable{Isa::Scalar, dot_scalar, axpy_scalar, scale_scalar, csr_matvec_scalar};

}  // namespace qgraph::simd::detail

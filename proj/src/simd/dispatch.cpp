#include <cstdlib>
#include <stdexcept>
#include <string_view>

#include "qgraph/simd.hpp"

namespace qgraph::simd {

const char* to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

bool available(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2: return detail::cpu_has_avx2_fma();
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!available(isa)) throw std::invalid_argument(std::string("ISA not available: ") + to_string(isa));
  return isa == Isa::Avx2 ? detail::kAvx2Table : detail::kScalarTable;
}

const KernelTable& active() {
  static const KernelTable& selected = [] () -> const KernelTable& {
    const char* forced = std::getenv("QGRAPH_SIMD");
    if (forced && std::string_view(forced) == "scalar") return detail::kScalarTable;
    return available(Isa::Avx2) ? detail::kAvx2Table : detail::kScalarTable;
  }();
  return selected;
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot: size mismatch");
  return active().dot(x.data(), y.data(), x.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: size mismatch");
  active().axpy(a, x.data(), y.data(), x.size());
}

void scale(double a, std::span<double> x) { active().scale(a, x.data(), x.size()); }

void csr_matvec(const CsrView& a, std::span<const double> x, std::span<double> y) {
  if (y.size() != a.rows()) throw std::invalid_argument("csr_matvec: output size mismatch");
  if (a.col.size() != a.val.size()) throw std::invalid_argument("csr_matvec: malformed matrix");
  active().csr_matvec(a.row_ptr.data(), a.col.data(), a.val.data(), a.rows(), x.data(), y.data());
}

}  // namespace qgraph::simd

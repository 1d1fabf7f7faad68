#pragma once

#include <cstddef>
#include <string>

namespace wepr::kernels {

// Data-parallel inner loops used by the entropy and training paths.
// Scalar implementations are the reference; the AVX2 variants are
// equivalence-tested against them and selected at runtime.
struct Ops {
  // out[i] = -p[i] * log2(p[i]), with the limit value 0 at p = 0 and p = 1.
  // Domain: p[i] in [0, 1].
  void (*neg_p_log2_p)(const double* p, double* out, size_t n);
  double (*sum)(const double* x, size_t n);
  double (*dot)(const double* x, const double* y, size_t n);
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, size_t n);
  const char* name;
};

enum class Isa { scalar, avx2 };

const Ops& scalar_ops();
bool avx2_supported();
// Throws DomainError when the requested ISA is unavailable on this CPU.
const Ops& ops(Isa isa);

// Active table: AVX2 when supported, otherwise scalar. The WEPR_KERNELS
// environment variable ("scalar" or "avx2") overrides the automatic choice;
// selection happens once, on first use.
const Ops& active();
const char* active_name();

}  // namespace wepr::kernels

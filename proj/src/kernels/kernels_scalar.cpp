#include <cmath>

#include "wepr/kernels.hpp"

namespace wepr::kernels {
namespace {

void neg_p_log2_p_scalar(const double* p, double* out, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    const double v = p[i];
    // +0.0 normalizes the -0.0 produced at v == 1.
    out[i] = (v <= 0.0) ? 0.0 : -(v * std::log2(v)) + 0.0;
  }
}

double sum_scalar(const double* x, size_t n) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double dot_scalar(const double* x, const double* y, size_t n) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_scalar(double a, const double* x, double* y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops table{neg_p_log2_p_scalar, sum_scalar, dot_scalar, axpy_scalar, "scalar"};
  return table;
}

}  // namespace wepr::kernels

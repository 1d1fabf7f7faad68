#include <cstdlib>
#include <string>

#include "wepr/errors.hpp"
#include "wepr/kernels.hpp"

namespace wepr::kernels {

#if defined(WEPR_BUILD_AVX2)
const Ops& avx2_ops_impl();

bool avx2_supported() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#else
bool avx2_supported() { return false; }
#endif

const Ops& ops(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return scalar_ops();
    case Isa::avx2:
#if defined(WEPR_BUILD_AVX2)
      if (avx2_supported()) return avx2_ops_impl();
#endif
      throw DomainError("avx2 kernels not available in this build/CPU");
  }
  return scalar_ops();
}

namespace {

const Ops& select() {
  if (const char* env = std::getenv("WEPR_KERNELS")) {
    const std::string want(env);
    if (want == "scalar") return scalar_ops();
    if (want == "avx2") return ops(Isa::avx2);
    if (!want.empty()) throw DomainError("WEPR_KERNELS must be 'scalar' or 'avx2', got '" + want + "'");
  }
  return avx2_supported() ? ops(Isa::avx2) : scalar_ops();
}

}  // namespace

const Ops& active() {
  static const Ops& chosen = select();
  return chosen;
}

const char* active_name() { return active().name; }

}  // namespace wepr::kernels

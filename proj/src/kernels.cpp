#include "rbsde/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace rbsde::kernels {

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

namespace {

const Ops& select_ops() {
  if (const char* env = std::getenv("RBSDE_KERNELS")) {
    const std::string_view want(env);
    if (want == "scalar") {
      return scalar_ops();
    }
#if defined(RBSDE_HAVE_AVX2)
    if (want == "avx2" && avx2_supported()) {
      return avx2_ops();
    }
#endif
    // Unknown or unsupported request: fall through to auto selection.
  }
#if defined(RBSDE_HAVE_AVX2)
  if (avx2_supported()) {
    return avx2_ops();
  }
#endif
  return scalar_ops();
}

}  // namespace

const Ops& active_ops() {
  static const Ops& selected = select_ops();
  return selected;
}

std::vector<const Ops*> available_backends() {
  std::vector<const Ops*> out{&scalar_ops()};
#if defined(RBSDE_HAVE_AVX2)
  if (avx2_supported()) {
    out.push_back(&avx2_ops());
  }
#endif
  return out;
}

}  // namespace rbsde::kernels

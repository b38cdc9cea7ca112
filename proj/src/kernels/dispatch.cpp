#include <cstdlib>
#include <stdexcept>
#include <string>

#include "tribes/kernels.hpp"

namespace tribes::kernels {

namespace {

constexpr KernelTable kScalar{Isa::scalar, scalar::popcount,
                              scalar::flip_diff_count,
                              scalar::monotone_violations,
                              scalar::fill_tribes};

#if defined(TRIBES_HAVE_AVX2_KERNELS)
constexpr KernelTable kAvx2{Isa::avx2, avx2::popcount, avx2::flip_diff_count,
                            avx2::monotone_violations, avx2::fill_tribes};
#endif

#if defined(TRIBES_HAVE_NEON_KERNELS)
constexpr KernelTable kNeon{Isa::neon, neon::popcount, neon::flip_diff_count,
                            neon::monotone_violations, neon::fill_tribes};
#endif

const KernelTable& probe() {
  if (const char* forced = std::getenv("TRIBES_KERNELS")) {
    const std::string name(forced);
    for (const Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
      if (name == to_string(isa) && supported(isa)) return table(isa);
    }
  }
  if (supported(Isa::avx2)) return table(Isa::avx2);
  if (supported(Isa::neon)) return table(Isa::neon);
  return kScalar;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

bool supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(TRIBES_HAVE_AVX2_KERNELS)
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
    case Isa::neon:
#if defined(TRIBES_HAVE_NEON_KERNELS)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!supported(isa)) {
    throw std::invalid_argument("kernel variant '" +
                                std::string(to_string(isa)) +
                                "' is not available on this build/CPU");
  }
  switch (isa) {
#if defined(TRIBES_HAVE_AVX2_KERNELS)
    case Isa::avx2: return kAvx2;
#endif
#if defined(TRIBES_HAVE_NEON_KERNELS)
    case Isa::neon: return kNeon;
#endif
    default: return kScalar;
  }
}

const KernelTable& active() {
  static const KernelTable& chosen = probe();
  return chosen;
}

}  // namespace tribes::kernels

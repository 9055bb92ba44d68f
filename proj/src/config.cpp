#include "vqhull/config.hpp"

#include <stdexcept>

namespace vqhull {

bool avx512_available() {
#ifdef VQHULL_HAVE_AVX512
    return __builtin_cpu_supports("avx512f") &&
           __builtin_cpu_supports("avx512vl");
#else
    return false;
#endif
}

std::string resolved_backend_name(SimdMode simd) {
    switch (simd) {
        case SimdMode::Portable:
            return "portable";
        case SimdMode::Avx512:
            return "avx512";
        case SimdMode::Auto:
            return avx512_available() ? "avx512" : "portable";
    }
    return "portable";
}

void Config::validate() const {
    if (workers < 1) throw std::invalid_argument("workers must be >= 1");
    if (block_size < 8 || block_size % 8 != 0)
        throw std::invalid_argument(
            "block size must be a positive multiple of 8 points");
    if (!valid_lane_width(lanes))
        throw std::invalid_argument("lane width must be 2, 4 or 8");
    if (max_depth < 1) throw std::invalid_argument("max depth must be >= 1");
}

}  // namespace vqhull

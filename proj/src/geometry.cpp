#include "vqhull/geometry.hpp"

#include <stdexcept>

namespace vqhull {

std::pair<std::size_t, std::size_t> find_extremes(const double* xs,
                                                  const double* ys,
                                                  std::size_t n,
                                                  std::uint64_t* reads) {
    if (n == 0) throw std::invalid_argument("find_extremes: empty input");
    std::size_t lo = 0, hi = 0;
    double lo_x = xs[0], hi_x = xs[0];
    // Single pass over the x array; y is consulted only on an x tie, so the
    // pass reads n coordinates on tie-free data.
    std::uint64_t extra = 0;
    for (std::size_t i = 1; i < n; ++i) {
        const double x = xs[i];
        if (x < lo_x) {
            lo_x = x;
            lo = i;
        } else if (x == lo_x) {
            extra += 2;
            if (ys[i] < ys[lo]) lo = i;
        }
        if (x > hi_x) {
            hi_x = x;
            hi = i;
        } else if (x == hi_x && i != hi) {
            extra += 2;
            if (ys[i] > ys[hi]) hi = i;
        }
    }
    if (reads) *reads += n + extra;
    return {lo, hi};
}

std::pair<std::size_t, std::size_t> find_extremes(const PointSet& points) {
    return find_extremes(points.xs(), points.ys(), points.size());
}

}  // namespace vqhull

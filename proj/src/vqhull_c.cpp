#include "vqhull/vqhull_c.h"

#include <cmath>
#include <cstring>
#include <unordered_map>

#include "vqhull/hull.hpp"

namespace {

std::uint64_t point_key(double x, double y) {
    // +0.0 and -0.0 compare equal, so canonicalize before hashing.
    std::uint64_t bx, by;
    const double cx = x + 0.0, cy = y + 0.0;
    std::memcpy(&bx, &cx, 8);
    std::memcpy(&by, &cy, 8);
    std::uint64_t h = bx * 0x9e3779b97f4a7c15ull;
    h ^= h >> 29;
    h += by * 0xbf58476d1ce4e5b9ull;
    h ^= h >> 32;
    return h;
}

}  // namespace

extern "C" int vqhull_compute(const double* xs, const double* ys, size_t n,
                              int workers, size_t* out_indices,
                              size_t* out_count) {
    if (!out_count || workers < 1) return 1;
    *out_count = 0;
    if (n == 0) return 0;
    if (!xs || !ys || !out_indices) return 1;
    for (size_t i = 0; i < n; ++i)
        if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) return 1;

    vqhull::PointSet points(n);
    std::memcpy(points.xs(), xs, n * sizeof(double));
    std::memcpy(points.ys(), ys, n * sizeof(double));

    vqhull::Config cfg;
    cfg.workers = workers;
    const vqhull::HullPolygon hull = vqhull::convex_hull(points, cfg);

    // Map vertex values back to first-occurrence input indices; buckets keep
    // the lookup exact under hash collisions.
    std::unordered_multimap<std::uint64_t, size_t> first_index;
    first_index.reserve(n);
    for (size_t i = n; i-- > 0;)
        first_index.emplace(point_key(xs[i], ys[i]), i);

    for (size_t v = 0; v < hull.vertices.size(); ++v) {
        const vqhull::Point p = hull.vertices[v];
        const auto [begin, end] = first_index.equal_range(point_key(p.x, p.y));
        size_t best = n;
        for (auto it = begin; it != end; ++it) {
            const size_t i = it->second;
            if (xs[i] == p.x && ys[i] == p.y && i < best) best = i;
        }
        if (best == n) return 1;  // cannot happen for a hull of this input
        out_indices[v] = best;
    }
    *out_count = hull.vertices.size();
    return 0;
}

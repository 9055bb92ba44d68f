// Test-side oracles, independent of the library's extraction and hull paths:
// exact integer orientation, a scan-based three-way partition reference, and
// a gift-wrapping hull builder. All exact checks assume integer coordinates
// of magnitude below 2^25.
#ifndef VQHULL_TESTS_ORACLES_HPP
#define VQHULL_TESTS_ORACLES_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "vqhull/extract.hpp"
#include "vqhull/geometry.hpp"

namespace oracles {

using vqhull::DirectedEdge;
using vqhull::Point;
using vqhull::PointSet;

// ---------------------------------------------------------------------------
// Exact predicates on integer-valued doubles
// ---------------------------------------------------------------------------

inline __int128 exact_cross(Point a, Point b, Point c) {
    const std::int64_t ax = std::int64_t(a.x), ay = std::int64_t(a.y);
    const std::int64_t bx = std::int64_t(b.x), by = std::int64_t(b.y);
    const std::int64_t cx = std::int64_t(c.x), cy = std::int64_t(c.y);
    return __int128(bx - ax) * (cy - ay) - __int128(by - ay) * (cx - ax);
}

/// orient2d(p, q, u) > 0 is exactly the library's strict left-of test.
inline bool exact_left_of(Point u, const DirectedEdge& e) {
    return exact_cross(e.p, e.q, u) > 0;
}

/// Farther-from-line as the signed-offset comparison orient(u) > orient(u').
inline bool exact_farther(Point u, Point v, const DirectedEdge& e) {
    return exact_cross(e.p, e.q, u) > exact_cross(e.p, e.q, v);
}

// ---------------------------------------------------------------------------
// Scan-based three-way partition reference
// ---------------------------------------------------------------------------

struct ReferenceExtract {
    std::vector<Point> s1;
    std::vector<Point> s2;
    std::optional<Point> r1;
    std::optional<Point> r2;
};

/// One forward scan with the library's scalar predicates; the farthest
/// incumbent is replaced only by a strictly farther point.
inline ReferenceExtract reference_extract(const double* xs, const double* ys,
                                          std::size_t n,
                                          const DirectedEdge& a,
                                          const DirectedEdge& b) {
    ReferenceExtract out;
    for (std::size_t i = 0; i < n; ++i) {
        const Point u{xs[i], ys[i]};
        if (vqhull::is_left_of(u, a)) {
            out.s1.push_back(u);
            if (!out.r1 || vqhull::is_farther(u, *out.r1, a)) out.r1 = u;
        } else if (vqhull::is_left_of(u, b)) {
            out.s2.push_back(u);
            if (!out.r2 || vqhull::is_farther(u, *out.r2, b)) out.r2 = u;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Multiset helpers
// ---------------------------------------------------------------------------

struct PointLess {
    bool operator()(Point a, Point b) const {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    }
};

inline std::vector<Point> sorted_points(std::vector<Point> v) {
    std::sort(v.begin(), v.end(), PointLess{});
    return v;
}

inline std::vector<Point> slice(const double* xs, const double* ys,
                                std::size_t begin, std::size_t end) {
    std::vector<Point> v;
    v.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) v.push_back({xs[i], ys[i]});
    return v;
}

inline bool same_multiset(std::vector<Point> a, std::vector<Point> b) {
    if (a.size() != b.size()) return false;
    a = sorted_points(std::move(a));
    b = sorted_points(std::move(b));
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(a[i] == b[i])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Gift-wrapping hull (exact, collinear interiors excluded)
// ---------------------------------------------------------------------------

inline __int128 dist2(Point a, Point b) {
    const std::int64_t dx = std::int64_t(b.x) - std::int64_t(a.x);
    const std::int64_t dy = std::int64_t(b.y) - std::int64_t(a.y);
    return __int128(dx) * dx + __int128(dy) * dy;
}

/// Clockwise gift wrapping from the lexicographically smallest point; among
/// angular ties only the farthest survives. Integer inputs only.
inline std::vector<Point> jarvis_hull_cw(const PointSet& points) {
    std::vector<Point> pts;
    for (std::size_t i = 0; i < points.size(); ++i) pts.push_back(points[i]);
    std::sort(pts.begin(), pts.end(), PointLess{});
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](Point a, Point b) { return a == b; }),
              pts.end());
    if (pts.size() <= 2) return pts;

    const Point start = pts.front();
    std::vector<Point> hull;
    Point cur = start;
    do {
        hull.push_back(cur);
        Point best{};
        bool have = false;
        for (const Point& c : pts) {
            if (c == cur) continue;
            if (!have) {
                best = c;
                have = true;
                continue;
            }
            const __int128 turn = exact_cross(cur, best, c);
            if (turn > 0 || (turn == 0 && dist2(cur, c) > dist2(cur, best)))
                best = c;
        }
        cur = best;
    } while (!(cur == start) && hull.size() <= pts.size());
    return hull;
}

// ---------------------------------------------------------------------------
// Deterministic input generators
// ---------------------------------------------------------------------------

inline PointSet random_int_points(std::mt19937_64& rng, std::size_t n,
                                  std::int64_t lo, std::int64_t hi) {
    std::uniform_int_distribution<std::int64_t> dist(lo, hi);
    PointSet out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back({double(dist(rng)), double(dist(rng))});
    return out;
}

inline PointSet random_double_points(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    PointSet out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back({dist(rng), dist(rng)});
    return out;
}

}  // namespace oracles

#endif  // VQHULL_TESTS_ORACLES_HPP

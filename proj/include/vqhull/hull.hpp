#ifndef VQHULL_HULL_HPP
#define VQHULL_HULL_HPP

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "vqhull/config.hpp"
#include "vqhull/geometry.hpp"

namespace vqhull {

/// Hull vertices in clockwise order starting at the leftmost point (ties on x
/// broken toward the smaller y). Vertices are pairwise distinct members of
/// the input set; collinear edge-interior points are never emitted.
struct HullPolygon {
    std::vector<Point> vertices;

    std::size_t size() const { return vertices.size(); }
    bool empty() const { return vertices.empty(); }
};

/// Per-partition sizes recorded by an instrumented hull run; the byte model
/// is a pure function of this trace.
struct CallRecord {
    std::size_t points = 0;        // |P| of the call
    std::size_t s1 = 0;            // points extracted left of the first edge
    std::size_t s2 = 0;            // points extracted left of the second edge
    std::size_t chain2_moved = 0;  // vertices relocated to join the chains
};

struct HullTrace {
    std::uint64_t extremes_points = 0;
    std::vector<CallRecord> calls;
};

/// Worker split for the two recursive calls, proportional to |S1| : |S2|.
/// For budget >= 2 the parts sum to the budget and a nonempty side always
/// receives at least one worker; a budget of 1 yields (1, 1), meaning both
/// calls run one after the other sequentially.
std::pair<int, int> split_budget(int budget, std::size_t size1,
                                 std::size_t size2);

/// One recursion step of the hull driver over the candidate range [lo, hi) of
/// the coordinate arrays: partitions against (p->r) and (r->q), recurses on
/// both flanks (concurrently when the budget allows), and leaves the chain
/// strictly between p and q as the prefix [lo, lo + result). The range must
/// contain r and only candidates left of the parent edge.
std::size_t hull_chain(double* xs, double* ys, std::size_t lo, std::size_t hi,
                       Point p, Point r, Point q, int budget,
                       const Config& cfg);

/// Computes the convex hull, permuting (and consuming) the point set in
/// place. Degenerate inputs follow the strict predicates: an empty set gives
/// an empty hull, all-identical points a single vertex, collinear input just
/// the two extreme vertices.
HullPolygon convex_hull(PointSet& points, const Config& cfg = {});

/// Convenience overload for callers that need to keep their input.
HullPolygon convex_hull_copy(const PointSet& points, const Config& cfg = {});

}  // namespace vqhull

#endif  // VQHULL_HULL_HPP

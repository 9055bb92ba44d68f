#ifndef VQHULL_EXTRACT_HPP
#define VQHULL_EXTRACT_HPP

#include <cstddef>
#include <cstdint>
#include <optional>

#include "vqhull/config.hpp"
#include "vqhull/geometry.hpp"

namespace vqhull {

/// Result of one in-place partition pass over a range of n points.
/// After the pass, positions [0, w_l) hold exactly the points left of edge A,
/// positions [w_r, n) hold exactly the points left of edge B, and the middle
/// is unspecified. r1/r2 are the farthest points of each side; r1 is present
/// iff w_l > 0 and no point of the prefix is strictly farther from A than r1
/// (symmetrically for r2).
struct ExtractOutcome {
    std::size_t w_l = 0;
    std::size_t w_r = 0;
    std::optional<Point> r1;
    std::optional<Point> r2;
};

/// Read access to the (possibly strided) sequence an extraction pass walks.
/// Logical position L addresses the L-th point of the sequence.
struct ExtractView {
    virtual ~ExtractView() = default;
    virtual std::size_t size() const = 0;
    virtual Point at(std::size_t logical) const = 0;
};

/// Per-iteration snapshot handed to the debug observer. Cursors are the
/// virtual ones (they count staged-but-unflushed writes), so the documented
/// loop invariant holds under write combining as well:
///   (1) [0, w_l) are left of A, (2) [w_r, n) are left of B,
///   (3) r_l - w_l >= d or w_r - r_r >= d,
///   (4) points not yet classified sit in [r_l, r_r) or in the two buffers.
struct ExtractIterationState {
    const ExtractView* view = nullptr;
    std::size_t w_l = 0;
    std::size_t r_l = 0;
    std::size_t r_r = 0;
    std::size_t w_r = 0;
    std::size_t prev_w_l = 0;  // w_l at the previous iteration boundary
    std::size_t prev_w_r = 0;
    std::size_t discarded = 0;  // points classified to neither side so far
    std::size_t buffered = 0;   // points still parked in bufL/bufR
    int lanes = 0;
    DirectedEdge edge_a;
    DirectedEdge edge_b;
};

/// Invariant hook; invoked once per main-loop iteration and once after the
/// final buffer flush. Implementations must be thread-safe when shared across
/// workers. Production passes run with no observer installed.
struct ExtractObserver {
    virtual ~ExtractObserver() = default;
    virtual void on_iteration(const ExtractIterationState& state) = 0;
};

/// Order-preserving mask compaction: the k = popcount(mask) selected points
/// land in out_xs/out_ys[0, k); the tail of the output is left untouched.
/// Bit i of mask selects lane i. The portable and hardware paths are
/// lane-for-lane identical.
std::size_t compress_select(const double* xs_block, const double* ys_block,
                            unsigned mask, LaneConfig lanes, SimdMode simd,
                            double* out_xs, double* out_ys);

/// Per-lane classification of d points against two edges. Bit i of mask_a is
/// is_left_of(point i, edge_a); mask_b additionally clears every lane already
/// in mask_a, so a point can never be claimed by both sides.
void classify_block(const double* xs_block, const double* ys_block,
                    LaneConfig lanes, SimdMode simd, const DirectedEdge& edge_a,
                    const DirectedEdge& edge_b, unsigned* mask_a,
                    unsigned* mask_b);

/// Single-worker in-place subset extraction with fused farthest-point search.
/// Points left of edge_a are compacted to the front, points left of edge_b to
/// the back, everything else is discarded; farthest points of both sides are
/// tracked in the same pass. Ranges shorter than two vector blocks take an
/// equivalent scalar path.
ExtractOutcome extract_subsets(double* xs, double* ys, std::size_t n,
                               const DirectedEdge& edge_a,
                               const DirectedEdge& edge_b, const Config& cfg);

}  // namespace vqhull

#endif  // VQHULL_EXTRACT_HPP

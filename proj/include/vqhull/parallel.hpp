#ifndef VQHULL_PARALLEL_HPP
#define VQHULL_PARALLEL_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "vqhull/config.hpp"
#include "vqhull/extract.hpp"
#include "vqhull/geometry.hpp"

namespace vqhull {

/// Block-cyclic work distribution: block i of `block` points goes to worker
/// i mod workers. The block size must be a multiple of the eight points that
/// share a cacheline so no two workers ever write the same line.
struct WorkerLayout {
    std::size_t workers = 1;
    std::size_t block = 512;
    std::size_t n = 0;

    /// Throws std::invalid_argument when workers < 1 or block is not a
    /// positive multiple of 8.
    void validate() const;
};

struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

/// Ascending index ranges owned by one worker; the union over all workers
/// partitions [0, n).
std::vector<IndexRange> block_cyclic_indices(const WorkerLayout& layout,
                                             std::size_t worker);

/// Result of one worker's independent pass over its subsequence. Cursors are
/// global (range-relative) positions; every slot the worker left undefined
/// holds the NaN sentinel in both coordinate arrays.
struct WorkerOutcome {
    std::size_t points_owned = 0;
    std::size_t w_l = 0;
    std::size_t w_r = 0;
    std::optional<Point> r1;
    std::optional<Point> r2;
};

/// Cursor extremes of the parallel step. Workers that own no points
/// constrain nothing and are left out. The two windows
/// [w_l_min, w_l_max) and [w_r_min, w_r_max) hold every slot the parallel
/// step may have left misplaced; under heavy skew they can overlap.
struct MergeBounds {
    std::vector<std::size_t> w_l;
    std::vector<std::size_t> w_r;
    std::size_t w_l_min = 0;
    std::size_t w_l_max = 0;
    std::size_t w_r_min = 0;
    std::size_t w_r_max = 0;
    bool any_points = false;

    static MergeBounds from(std::span<const WorkerOutcome> workers,
                            std::size_t n);
};

/// Test hook recording which b-aligned block each store touches; used to
/// falsify cross-worker writes. Must be thread-safe.
struct BlockWriteLogger {
    virtual ~BlockWriteLogger() = default;
    virtual void on_block_write(std::size_t worker, std::size_t block_index) = 0;
};

/// One worker's in-place extraction over its block-cyclic subsequence.
/// Runs the same pass as extract_subsets on the logical concatenation of its
/// blocks, then overwrites its undefined slots with the sentinel.
WorkerOutcome worker_extract(double* xs, double* ys, const WorkerLayout& layout,
                             std::size_t worker, const DirectedEdge& edge_a,
                             const DirectedEdge& edge_b, const Config& cfg);

/// Sequential cleanup: classifies the two cursor windows slot by slot
/// (left-of-A, left-of-B, or sentinel), compacts both sides with a Dutch
/// National Flag pass, and merges the per-worker farthest candidates in
/// ascending worker order. Throws std::logic_error when a window slot is
/// neither sentinel nor left of either edge, which indicates a corrupted
/// parallel step.
ExtractOutcome merge_and_cleanup(double* xs, double* ys, std::size_t n,
                                 std::span<const WorkerOutcome> workers,
                                 const DirectedEdge& edge_a,
                                 const DirectedEdge& edge_b);

/// Multi-worker extraction: trims the sub-cacheline head and tail of the
/// range, forks one pass per worker over the aligned middle, runs the
/// sequential cleanup, and folds the margins back in. Outcome is
/// multiset-equivalent to extract_subsets on the same range.
ExtractOutcome parallel_extract(double* xs, double* ys, std::size_t n,
                                const DirectedEdge& edge_a,
                                const DirectedEdge& edge_b,
                                const WorkerLayout& layout, const Config& cfg);

}  // namespace vqhull

#endif  // VQHULL_PARALLEL_HPP

#ifndef VQHULL_BENCH_HPP
#define VQHULL_BENCH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "vqhull/config.hpp"
#include "vqhull/dataset.hpp"
#include "vqhull/extract.hpp"
#include "vqhull/geometry.hpp"
#include "vqhull/hull.hpp"

namespace vqhull {

/// Data-traffic model of one hull run, with point counts from the trace:
/// 8 bytes per x-coordinate of the extremes pass, 16 bytes per point read or
/// written by a partition, and 16 bytes per vertex placed when the two child
/// chains are joined. Relocation is charged as placement, matching the
/// instrumented store counts.
std::uint64_t bytes_model(const HullTrace& trace);

struct ScaleResult {
    double gbps = 0.0;          // best-of-reps bandwidth, 16 bytes per element
    std::uint64_t bytes = 0;    // buffer size used
    int reps = 0;
};

/// In-place Scale kernel a[i] = s * a[i] over a buffer far larger than the
/// last-level cache; the practical ceiling for the extraction's read+write
/// access pattern.
ScaleResult stream_scale_baseline(std::uint64_t buffer_bytes, int reps,
                                  int workers);

/// 4x the detected last-level cache (fallback 32 MiB when undetectable).
std::uint64_t default_scale_bytes();

struct BenchReport {
    DatasetSpec spec;
    int workers = 1;
    std::size_t block_size = 512;
    int lanes = 8;
    std::string backend;
    bool write_combining = false;
    int reps = 0;
    std::vector<double> rep_seconds;
    double mean_seconds = 0.0;
    double stddev_seconds = 0.0;
    std::uint64_t model_bytes = 0;
    double bandwidth_gbps = 0.0;  // model_bytes / mean_seconds
    std::size_t hull_vertices = 0;
    double baseline_gbps = 0.0;  // 0 when the baseline was skipped
};

/// Times `reps` hull runs on fresh copies of the dataset (the hull consumes
/// its input); the byte model comes from one untimed single-worker traced
/// pass. Timing covers the extremes pass through hull assembly.
BenchReport run_bench(const DatasetSpec& spec, const Config& cfg, int reps,
                      bool with_baseline);

/// Same on preloaded points; `spec` only labels the report.
BenchReport run_bench_points(const PointSet& points, const DatasetSpec& spec,
                             const Config& cfg, int reps, bool with_baseline);

/// Stable machine-readable forms. The CSV has one row per repetition with the
/// aggregates repeated; the joules column is part of the schema but always
/// empty (energy is collected externally when at all).
std::string csv_header();
void append_csv_rows(const BenchReport& report, std::string& out);
std::string structured_rows(const BenchReport& report);

struct VerifyReport {
    bool pass = true;
    std::string failure;        // first counterexample, empty when passing
    bool exact_inputs = false;  // integer coordinates below 2^25
    bool oracle_compared = false;
    std::size_t hull_vertices = 0;
};

/// Validity: vertices are distinct input members, the polygon starts at the
/// leftmost point and winds clockwise, and no input point lies strictly
/// outside. On exact-envelope inputs every check is exact and the vertex
/// sequence must equal the monotone-chain oracle; otherwise outside-ness
/// allows a rounding-scale margin, as near-degenerate inputs can carry
/// ulp-size dents by construction.
VerifyReport verify_hull(const PointSet& points,
                         const std::vector<Point>& hull,
                         bool compare_oracle = true);

/// Exact monotone-chain construction (collinear vertices excluded),
/// normalized clockwise from the leftmost-lowest point. Error-free on the
/// exactness envelope; used by `verify` and as the hull test oracle.
std::vector<Point> monotone_chain_hull(const PointSet& points);

/// Branch-based scalar two-pointer partition with separate per-element
/// branches, fused farthest tracking included: the performance reference the
/// vectorized extraction is measured against.
ExtractOutcome scalar_reference_extract(double* xs, double* ys, std::size_t n,
                                        const DirectedEdge& edge_a,
                                        const DirectedEdge& edge_b);

}  // namespace vqhull

#endif  // VQHULL_BENCH_HPP

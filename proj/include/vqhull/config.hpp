#ifndef VQHULL_CONFIG_HPP
#define VQHULL_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <string>

namespace vqhull {

struct ExtractObserver;
struct BlockWriteLogger;
struct HullTrace;

/// Coordinate-traffic counters, in units of 8-byte coordinate elements.
/// Instrumentation is maintained on the sequential paths (workers == 1).
struct TrafficCounters {
    std::uint64_t coord_reads = 0;
    std::uint64_t coord_writes = 0;

    std::uint64_t bytes() const { return 8 * (coord_reads + coord_writes); }
};

enum class SimdMode {
    Auto,      // best backend the CPU supports
    Portable,  // force the scalar/table path
    Avx512,    // force the AVX-512 path (errors if unsupported)
};

/// Points processed per vector step.
struct LaneConfig {
    int d = 8;
};

inline bool valid_lane_width(int d) { return d == 2 || d == 4 || d == 8; }

struct Config {
    int workers = 1;
    std::size_t block_size = 512;  // points per block-cyclic block, multiple of 8
    int lanes = 8;                 // 2, 4 or 8
    SimdMode simd = SimdMode::Auto;
    bool write_combining = false;  // stage compressed writes in L1-sized buffers
    int max_depth = 512;           // recursion depth before the explicit-stack driver
    std::size_t fork_threshold = 8192;  // minimum sibling size worth a task fork

    // Instrumentation hooks; all optional, all null in production use.
    TrafficCounters* traffic = nullptr;   // valid for workers == 1
    HullTrace* trace = nullptr;           // valid for workers == 1
    ExtractObserver* observer = nullptr;  // per-iteration invariant hook; an
                                          // installed observer implies direct
                                          // (unstaged) writes
    BlockWriteLogger* write_logger = nullptr;  // per-block store log (tests)

    LaneConfig lane_config() const { return LaneConfig{lanes}; }

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

/// True when this build carries the AVX-512 kernels and the CPU accepts them.
bool avx512_available();

/// Human-readable name of the backend `simd` resolves to at runtime.
std::string resolved_backend_name(SimdMode simd);

}  // namespace vqhull

#endif  // VQHULL_CONFIG_HPP

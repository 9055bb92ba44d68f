#ifndef VQHULL_DATASET_HPP
#define VQHULL_DATASET_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "vqhull/geometry.hpp"

namespace vqhull {

enum class DatasetKind { Kuzmin, Circle, Disk };

const char* kind_name(DatasetKind kind);
std::optional<DatasetKind> parse_kind(std::string_view name);

/// Generation is a pure function of (kind, n, seed): the RNG is counter-based
/// (a splitmix64 finalizer keyed by seed and stream index), so output is
/// independent of how the index range is sharded across workers.
struct DatasetSpec {
    DatasetKind kind = DatasetKind::Disk;
    std::uint64_t n = 0;
    std::uint64_t seed = 1;
};

namespace rng {

/// i-th value of the stream for `seed`.
std::uint64_t at(std::uint64_t seed, std::uint64_t index);

/// Uniform double in [0, 1), 53 significant bits.
double uniform01(std::uint64_t seed, std::uint64_t index);

}  // namespace rng

/// Uniform over the unit disk: r = sqrt(u1), theta = 2*pi*u2.
PointSet gen_disk(std::uint64_t n, std::uint64_t seed);

/// Uniform over the unit circle: (cos(theta), sin(theta)).
PointSet gen_circle(std::uint64_t n, std::uint64_t seed);

/// Kuzmin radial law F(r) = 1 - (1 + r^2)^(-1/2), inverted as
/// r = sqrt((1/(1-u))^2 - 1); extreme central density with a heavy tail.
PointSet gen_kuzmin(std::uint64_t n, std::uint64_t seed);

/// Dispatch on kind; `workers` only shards the fill loop, the bytes produced
/// are identical for every worker count.
PointSet generate(const DatasetSpec& spec, int workers = 1);

}  // namespace vqhull

#endif  // VQHULL_DATASET_HPP

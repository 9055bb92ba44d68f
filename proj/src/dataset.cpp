#include "vqhull/dataset.hpp"

#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

namespace vqhull {

const char* kind_name(DatasetKind kind) {
    switch (kind) {
        case DatasetKind::Kuzmin:
            return "kuzmin";
        case DatasetKind::Circle:
            return "circle";
        case DatasetKind::Disk:
            return "disk";
    }
    return "?";
}

std::optional<DatasetKind> parse_kind(std::string_view name) {
    if (name == "kuzmin") return DatasetKind::Kuzmin;
    if (name == "circle") return DatasetKind::Circle;
    if (name == "disk") return DatasetKind::Disk;
    return std::nullopt;
}

namespace rng {

namespace {
constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;

std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
}
}  // namespace

std::uint64_t at(std::uint64_t seed, std::uint64_t index) {
    return mix(seed + (index + 1) * kGamma);
}

double uniform01(std::uint64_t seed, std::uint64_t index) {
    return double(at(seed, index) >> 11) * 0x1.0p-53;
}

}  // namespace rng

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi_v<double>;

Point disk_point(std::uint64_t seed, std::uint64_t i) {
    const double r = std::sqrt(rng::uniform01(seed, 2 * i));
    const double theta = kTwoPi * rng::uniform01(seed, 2 * i + 1);
    return {r * std::cos(theta), r * std::sin(theta)};
}

Point circle_point(std::uint64_t seed, std::uint64_t i) {
    const double theta = kTwoPi * rng::uniform01(seed, 2 * i);
    return {std::cos(theta), std::sin(theta)};
}

Point kuzmin_point(std::uint64_t seed, std::uint64_t i) {
    const double u = rng::uniform01(seed, 2 * i);
    const double inv = 1.0 / (1.0 - u);
    const double r = std::sqrt(inv * inv - 1.0);
    const double theta = kTwoPi * rng::uniform01(seed, 2 * i + 1);
    return {r * std::cos(theta), r * std::sin(theta)};
}

template <class PointFn>
PointSet fill(std::uint64_t n, int workers, PointFn point) {
    PointSet out{std::size_t(n)};
    double* xs = out.xs();
    double* ys = out.ys();
    auto run = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i) {
            const Point p = point(i);
            xs[i] = p.x;
            ys[i] = p.y;
        }
    };
    if (workers <= 1 || n < 1u << 16) {
        run(0, n);
        return out;
    }
    const std::uint64_t chunk = (n + workers - 1) / std::uint64_t(workers);
    std::vector<std::thread> threads;
    for (int t = 1; t < workers; ++t) {
        const std::uint64_t b = chunk * std::uint64_t(t);
        if (b >= n) break;
        const std::uint64_t e = std::min(n, b + chunk);
        threads.emplace_back(run, b, e);
    }
    run(0, std::min(n, chunk));
    for (auto& th : threads) th.join();
    return out;
}

}  // namespace

PointSet gen_disk(std::uint64_t n, std::uint64_t seed) {
    return fill(n, 1, [seed](std::uint64_t i) { return disk_point(seed, i); });
}

PointSet gen_circle(std::uint64_t n, std::uint64_t seed) {
    return fill(n, 1, [seed](std::uint64_t i) { return circle_point(seed, i); });
}

PointSet gen_kuzmin(std::uint64_t n, std::uint64_t seed) {
    return fill(n, 1, [seed](std::uint64_t i) { return kuzmin_point(seed, i); });
}

PointSet generate(const DatasetSpec& spec, int workers) {
    switch (spec.kind) {
        case DatasetKind::Disk:
            return fill(spec.n, workers, [s = spec.seed](std::uint64_t i) {
                return disk_point(s, i);
            });
        case DatasetKind::Circle:
            return fill(spec.n, workers, [s = spec.seed](std::uint64_t i) {
                return circle_point(s, i);
            });
        case DatasetKind::Kuzmin:
            return fill(spec.n, workers, [s = spec.seed](std::uint64_t i) {
                return kuzmin_point(s, i);
            });
    }
    return PointSet{};
}

}  // namespace vqhull

// vqhull command-line harness: dataset generation, hull computation,
// benchmarking with the data-traffic model, hull verification, and a
// Scale-style bandwidth baseline.

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "vqhull/bench.hpp"
#include "vqhull/config.hpp"
#include "vqhull/dataset.hpp"
#include "vqhull/geometry.hpp"
#include "vqhull/hull.hpp"
#include "vqhull/io.hpp"

namespace {

using namespace vqhull;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

struct CommonOpts {
    int workers = 1;
    std::size_t block_size = 512;
    int lanes = 8;
    std::string simd = "auto";
    bool write_combining = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--workers", opts.workers, "worker count")
        ->envname("VQHULL_WORKERS");
    cmd->add_option("--block-size", opts.block_size,
                    "block-cyclic block size in points (multiple of 8)")
        ->envname("VQHULL_BLOCK");
    cmd->add_option("--lanes", opts.lanes, "points per vector step (2, 4, 8)")
        ->envname("VQHULL_LANES");
    cmd->add_option("--simd", opts.simd, "simd backend")
        ->check(CLI::IsMember({"auto", "portable", "avx512"}));
    cmd->add_flag("--write-combining", opts.write_combining,
                  "stage compressed writes in L1-sized buffers");
}

Config make_config(const CommonOpts& opts) {
    Config cfg;
    cfg.workers = opts.workers;
    cfg.block_size = opts.block_size;
    cfg.lanes = opts.lanes;
    if (opts.simd == "portable")
        cfg.simd = SimdMode::Portable;
    else if (opts.simd == "avx512")
        cfg.simd = SimdMode::Avx512;
    cfg.write_combining = opts.write_combining;
    cfg.validate();
    return cfg;
}

FileFormat pick_format(const std::string& flag, const std::string& path) {
    if (flag == "text") return FileFormat::Text;
    if (flag == "binary") return FileFormat::Binary;
    return format_for_path(path);
}

PointSet hull_to_points(const HullPolygon& hull) {
    PointSet out;
    out.reserve(hull.size());
    for (const Point& p : hull.vertices) out.push_back(p);
    return out;
}

void print_bench_table(const BenchReport& r) {
    std::printf("dataset      %s (n=%" PRIu64 ", seed=%" PRIu64 ")\n",
                kind_name(r.spec.kind), r.spec.n, r.spec.seed);
    std::printf("config       workers=%d lanes=%d block=%zu backend=%s%s\n",
                r.workers, r.lanes, r.block_size, r.backend.c_str(),
                r.write_combining ? " write-combining" : "");
    std::printf("hull         %zu vertices\n", r.hull_vertices);
    std::printf("repetitions  %d\n", r.reps);
    for (std::size_t i = 0; i < r.rep_seconds.size(); ++i)
        std::printf("  rep %2zu     %.6f s\n", i + 1, r.rep_seconds[i]);
    std::printf("time         %.6f s mean, %.6f s stddev\n", r.mean_seconds,
                r.stddev_seconds);
    std::printf("model bytes  %" PRIu64 "\n", r.model_bytes);
    std::printf("bandwidth    %.3f GB/s\n", r.bandwidth_gbps);
    if (r.baseline_gbps > 0.0) {
        std::printf("scale        %.3f GB/s baseline (%.1f%% reached)\n",
                    r.baseline_gbps,
                    100.0 * r.bandwidth_gbps / r.baseline_gbps);
    }
}

int run_gen(const std::string& dataset, std::uint64_t n, std::uint64_t seed,
            const std::string& out_path, const std::string& format,
            int workers) {
    const auto kind = parse_kind(dataset);
    if (!kind) {
        std::cerr << "unknown dataset \"" << dataset << "\"\n";
        return kExitUsage;
    }
    const DatasetSpec spec{*kind, n, seed};
    const PointSet points = generate(spec, workers);
    write_points(points, out_path, pick_format(format, out_path));
    std::printf("gen kind=%s n=%" PRIu64 " seed=%" PRIu64 " out=%s\n",
                kind_name(*kind), n, seed, out_path.c_str());
    return kExitOk;
}

int run_hull(const std::string& in_path, const std::string& out_path,
             const std::string& format, const Config& cfg) {
    PointSet points = read_points(in_path);
    const std::size_t n = points.size();
    const auto t0 = std::chrono::steady_clock::now();
    const HullPolygon hull = convex_hull(points, cfg);
    const auto t1 = std::chrono::steady_clock::now();
    std::printf("hull n=%zu vertices=%zu seconds=%.6f\n", n, hull.size(),
                std::chrono::duration<double>(t1 - t0).count());
    if (!out_path.empty())
        write_points(hull_to_points(hull), out_path,
                     pick_format(format, out_path));
    return kExitOk;
}

int run_verify(const std::string& in_path, const std::string& hull_path,
               const Config& cfg) {
    const PointSet points = read_points(in_path);
    std::vector<Point> hull;
    if (!hull_path.empty()) {
        const PointSet loaded = read_points(hull_path);
        hull.reserve(loaded.size());
        for (std::size_t i = 0; i < loaded.size(); ++i)
            hull.push_back(loaded[i]);
    } else {
        PointSet scratch = points;
        hull = convex_hull(scratch, cfg).vertices;
    }
    const VerifyReport rep = verify_hull(points, hull);
    std::printf("verify n=%zu vertices=%zu exact=%s oracle=%s\n", points.size(),
                rep.hull_vertices, rep.exact_inputs ? "yes" : "no",
                rep.oracle_compared ? "compared" : "skipped");
    if (rep.pass) {
        std::printf("verify PASS\n");
        return kExitOk;
    }
    std::printf("verify FAIL: %s\n", rep.failure.c_str());
    return kExitVerifyFailed;
}

int run_bench_cmd(const std::string& dataset, std::uint64_t n,
                  std::uint64_t seed, const std::string& in_path, int reps,
                  const std::string& csv_path, bool no_baseline,
                  const Config& cfg) {
    BenchReport report;
    if (!in_path.empty()) {
        const PointSet points = read_points(in_path);
        DatasetSpec spec{DatasetKind::Disk, points.size(), 0};
        if (auto kind = parse_kind(dataset)) spec.kind = *kind;
        report = run_bench_points(points, spec, cfg, reps, !no_baseline);
    } else {
        const auto kind = parse_kind(dataset);
        if (!kind) {
            std::cerr << "unknown dataset \"" << dataset << "\"\n";
            return kExitUsage;
        }
        report = run_bench(DatasetSpec{*kind, n, seed}, cfg, reps, !no_baseline);
    }
    print_bench_table(report);
    std::fputs(structured_rows(report).c_str(), stdout);
    if (!csv_path.empty()) {
        std::string csv = csv_header();
        csv += '\n';
        append_csv_rows(report, csv);
        std::ofstream out(csv_path);
        if (!out) throw LoadError(csv_path + ": cannot open for writing");
        out << csv;
    }
    return kExitOk;
}

int run_baseline(std::uint64_t bytes, int reps, int workers) {
    if (bytes == 0) bytes = default_scale_bytes();
    const ScaleResult res = stream_scale_baseline(bytes, reps, workers);
    std::printf("baseline bytes=%" PRIu64 " reps=%d workers=%d gbps=%.3f\n",
                res.bytes, res.reps, workers, res.gbps);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vectorized in-place planar convex hulls"};
    app.require_subcommand(1);

    std::string dataset, in_path, out_path, hull_path, csv_path;
    std::string format = "by-extension";
    std::uint64_t n = 0, seed = 1, baseline_bytes = 0;
    int reps = 10;
    bool no_baseline = false;
    CommonOpts opts;

    auto* gen = app.add_subcommand("gen", "generate a benchmark dataset");
    gen->add_option("--dataset", dataset, "kuzmin, circle or disk")->required();
    gen->add_option("--n", n, "point count")->required();
    gen->add_option("--seed", seed, "generator seed");
    gen->add_option("--out", out_path, "output file")->required();
    gen->add_option("--format", format, "text or binary")
        ->check(CLI::IsMember({"text", "binary", "by-extension"}));
    gen->add_option("--workers", opts.workers, "fill workers")
        ->envname("VQHULL_WORKERS");

    auto* hull = app.add_subcommand("hull", "compute a convex hull");
    hull->add_option("--in", in_path, "input point file")->required();
    hull->add_option("--out", out_path, "write hull vertices here");
    hull->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "binary", "by-extension"}));
    add_common(hull, opts);

    auto* bench = app.add_subcommand("bench", "benchmark hull computation");
    bench->add_option("--dataset", dataset, "kuzmin, circle or disk");
    bench->add_option("--n", n, "point count");
    bench->add_option("--seed", seed, "generator seed");
    bench->add_option("--in", in_path, "benchmark a point file instead");
    bench->add_option("--reps", reps, "repetitions (default 10)");
    bench->add_option("--csv", csv_path, "append machine-readable rows here");
    bench->add_flag("--no-baseline", no_baseline, "skip the Scale baseline");
    add_common(bench, opts);

    auto* verify = app.add_subcommand("verify", "validate a hull");
    verify->add_option("--in", in_path, "input point file")->required();
    verify->add_option("--hull", hull_path,
                       "hull vertex file (recomputed when absent)");
    add_common(verify, opts);

    int baseline_reps = 5;
    auto* baseline =
        app.add_subcommand("baseline", "measure the Scale bandwidth baseline");
    baseline->add_option("--bytes", baseline_bytes,
                         "buffer size (default 4x last-level cache)");
    baseline->add_option("--reps", baseline_reps, "repetitions");
    baseline->add_option("--workers", opts.workers, "threads")
        ->envname("VQHULL_WORKERS");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (app.got_subcommand(gen))
            return run_gen(dataset, n, seed, out_path, format, opts.workers);
        if (app.got_subcommand(hull))
            return run_hull(in_path, out_path, format, make_config(opts));
        if (app.got_subcommand(bench)) {
            if (in_path.empty() && !parse_kind(dataset)) {
                std::cerr << "bench needs --dataset or --in\n";
                return kExitUsage;
            }
            return run_bench_cmd(dataset, n, seed, in_path, reps, csv_path,
                                 no_baseline, make_config(opts));
        }
        if (app.got_subcommand(verify))
            return run_verify(in_path, hull_path, make_config(opts));
        if (app.got_subcommand(baseline))
            return run_baseline(baseline_bytes, baseline_reps, opts.workers);
    } catch (const LoadError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

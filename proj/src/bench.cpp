#include "vqhull/bench.hpp"

#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <thread>

namespace vqhull {

std::uint64_t bytes_model(const HullTrace& trace) {
    std::uint64_t total = 8 * trace.extremes_points;
    for (const CallRecord& c : trace.calls)
        total += 16 * (c.points + c.s1 + c.s2) + 16 * c.chain2_moved;
    return total;
}

std::uint64_t default_scale_bytes() {
    long llc = ::sysconf(_SC_LEVEL3_CACHE_SIZE);
    if (llc <= 0) llc = ::sysconf(_SC_LEVEL2_CACHE_SIZE);
    if (llc <= 0) llc = 32l << 20;
    std::uint64_t bytes = 4 * std::uint64_t(llc);
    if (bytes < 64u << 20) bytes = 64u << 20;
    if (bytes > 1u << 30) bytes = 1u << 30;
    return bytes;
}

ScaleResult stream_scale_baseline(std::uint64_t buffer_bytes, int reps,
                                  int workers) {
    if (reps < 1) reps = 1;
    if (workers < 1) workers = 1;
    const std::size_t n = std::max<std::size_t>(buffer_bytes / 8, 1024);
    CoordVec a(n, 1.0);
    const double s = 1.000001;

    auto pass = [&a, s](std::size_t begin, std::size_t end) {
        double* p = a.data();
        for (std::size_t i = begin; i < end; ++i) p[i] = s * p[i];
    };
    auto run_all = [&] {
        if (workers == 1) {
            pass(0, n);
            return;
        }
        std::vector<std::thread> threads;
        const std::size_t chunk = (n + workers - 1) / std::size_t(workers);
        for (int t = 1; t < workers; ++t) {
            const std::size_t b = chunk * std::size_t(t);
            if (b >= n) break;
            threads.emplace_back(pass, b, std::min(n, b + chunk));
        }
        pass(0, std::min(n, chunk));
        for (auto& th : threads) th.join();
    };

    run_all();  // warm up
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        run_all();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    ScaleResult res;
    res.bytes = 8 * std::uint64_t(n);
    res.reps = reps;
    res.gbps = 16.0 * double(n) / best / 1e9;  // one read + one write per element
    return res;
}

namespace {

double mean_of(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return v.empty() ? 0.0 : sum / double(v.size());
}

double stddev_of(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / double(v.size() - 1));
}

void append_number(std::string& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

}  // namespace

BenchReport run_bench_points(const PointSet& points, const DatasetSpec& spec,
                             const Config& cfg, int reps, bool with_baseline) {
    cfg.validate();
    if (reps < 1) throw std::invalid_argument("reps must be >= 1");

    BenchReport report;
    report.spec = spec;
    report.workers = cfg.workers;
    report.block_size = cfg.block_size;
    report.lanes = cfg.lanes;
    report.backend = resolved_backend_name(cfg.simd);
    report.write_combining = cfg.write_combining;
    report.reps = reps;

    {
        // One untimed single-worker pass collects the per-call trace the byte
        // model is defined on; the model does not depend on the worker count.
        PointSet scratch = points;
        HullTrace trace;
        Config traced = cfg;
        traced.workers = 1;
        traced.trace = &trace;
        traced.traffic = nullptr;
        const HullPolygon hull = convex_hull(scratch, traced);
        report.model_bytes = bytes_model(trace);
        report.hull_vertices = hull.size();
    }

    report.rep_seconds.reserve(std::size_t(reps));
    for (int r = 0; r < reps; ++r) {
        PointSet scratch = points;
        const auto t0 = std::chrono::steady_clock::now();
        const HullPolygon hull = convex_hull(scratch, cfg);
        const auto t1 = std::chrono::steady_clock::now();
        report.rep_seconds.push_back(
            std::chrono::duration<double>(t1 - t0).count());
        if (hull.size() != report.hull_vertices)
            throw std::logic_error("hull size varies across repetitions");
    }
    report.mean_seconds = mean_of(report.rep_seconds);
    report.stddev_seconds = stddev_of(report.rep_seconds, report.mean_seconds);
    if (report.mean_seconds > 0.0)
        report.bandwidth_gbps =
            double(report.model_bytes) / report.mean_seconds / 1e9;

    if (with_baseline)
        report.baseline_gbps =
            stream_scale_baseline(default_scale_bytes(), 3, cfg.workers).gbps;
    return report;
}

BenchReport run_bench(const DatasetSpec& spec, const Config& cfg, int reps,
                      bool with_baseline) {
    const PointSet points = generate(spec, cfg.workers);
    return run_bench_points(points, spec, cfg, reps, with_baseline);
}

std::string csv_header() {
    return "kind,n,seed,workers,block_size,lanes,simd,write_combining,reps,"
           "rep,seconds,mean_seconds,stddev_seconds,model_bytes,"
           "bandwidth_gbps,baseline_gbps,hull_vertices,joules";
}

void append_csv_rows(const BenchReport& r, std::string& out) {
    for (std::size_t i = 0; i < r.rep_seconds.size(); ++i) {
        out += kind_name(r.spec.kind);
        out += ',';
        out += std::to_string(r.spec.n);
        out += ',';
        out += std::to_string(r.spec.seed);
        out += ',';
        out += std::to_string(r.workers);
        out += ',';
        out += std::to_string(r.block_size);
        out += ',';
        out += std::to_string(r.lanes);
        out += ',';
        out += r.backend;
        out += ',';
        out += r.write_combining ? '1' : '0';
        out += ',';
        out += std::to_string(r.reps);
        out += ',';
        out += std::to_string(i + 1);
        out += ',';
        append_number(out, r.rep_seconds[i]);
        out += ',';
        append_number(out, r.mean_seconds);
        out += ',';
        append_number(out, r.stddev_seconds);
        out += ',';
        out += std::to_string(r.model_bytes);
        out += ',';
        append_number(out, r.bandwidth_gbps);
        out += ',';
        append_number(out, r.baseline_gbps);
        out += ',';
        out += std::to_string(r.hull_vertices);
        out += ',';  // joules: schema slot, collected externally when at all
        out += '\n';
    }
}

std::string structured_rows(const BenchReport& r) {
    std::string out;
    for (std::size_t i = 0; i < r.rep_seconds.size(); ++i) {
        out += "bench kind=";
        out += kind_name(r.spec.kind);
        out += " n=" + std::to_string(r.spec.n);
        out += " seed=" + std::to_string(r.spec.seed);
        out += " workers=" + std::to_string(r.workers);
        out += " lanes=" + std::to_string(r.lanes);
        out += " block=" + std::to_string(r.block_size);
        out += " rep=" + std::to_string(i + 1);
        out += " seconds=";
        append_number(out, r.rep_seconds[i]);
        out += '\n';
    }
    out += "bench-summary kind=";
    out += kind_name(r.spec.kind);
    out += " n=" + std::to_string(r.spec.n);
    out += " workers=" + std::to_string(r.workers);
    out += " mean_seconds=";
    append_number(out, r.mean_seconds);
    out += " stddev_seconds=";
    append_number(out, r.stddev_seconds);
    out += " model_bytes=" + std::to_string(r.model_bytes);
    out += " bandwidth_gbps=";
    append_number(out, r.bandwidth_gbps);
    out += " baseline_gbps=";
    append_number(out, r.baseline_gbps);
    out += " hull_vertices=" + std::to_string(r.hull_vertices);
    out += '\n';
    return out;
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

namespace {

double cross(Point a, Point b, Point c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

bool within_envelope(const PointSet& pts) {
    const double bound = 33554432.0;  // 2^25
    const double* xs = pts.xs();
    const double* ys = pts.ys();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (std::rint(xs[i]) != xs[i] || std::fabs(xs[i]) >= bound) return false;
        if (std::rint(ys[i]) != ys[i] || std::fabs(ys[i]) >= bound) return false;
    }
    return true;
}

bool lex_less(Point a, Point b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
}

std::string point_str(Point p) {
    std::string s = "(";
    append_number(s, p.x);
    s += ", ";
    append_number(s, p.y);
    s += ")";
    return s;
}

/// Inside-or-on test against a CCW-ordered convex polygon via wedge binary
/// search; `tol` relaxes the boundary for inexact inputs.
bool inside_convex_ccw(const std::vector<Point>& w, Point u, double tol) {
    const std::size_t h = w.size();
    if (cross(w[0], w[1], u) < -tol) return false;
    if (cross(w[0], w[h - 1], u) > tol) return false;
    std::size_t lo = 1, hi = h - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (cross(w[0], w[mid], u) >= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return cross(w[lo], w[hi], u) >= -tol;
}

}  // namespace

std::vector<Point> monotone_chain_hull(const PointSet& points) {
    std::vector<Point> pts;
    pts.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) pts.push_back(points[i]);
    std::sort(pts.begin(), pts.end(), lex_less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t n = pts.size();
    if (n <= 2) return pts;  // already clockwise-from-leftmost

    // Strict turns only: collinear edge-interior points never survive.
    std::vector<Point> ccw(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {  // lower hull
        while (k >= 2 && cross(ccw[k - 2], ccw[k - 1], pts[i]) <= 0.0) --k;
        ccw[k++] = pts[i];
    }
    const std::size_t lower_end = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {  // upper hull
        while (k >= lower_end && cross(ccw[k - 2], ccw[k - 1], pts[i]) <= 0.0)
            --k;
        ccw[k++] = pts[i];
    }
    ccw.resize(k - 1);  // last point repeats the first

    // Clockwise from the leftmost-lowest point.
    std::vector<Point> cw;
    cw.reserve(ccw.size());
    cw.push_back(ccw[0]);
    for (std::size_t i = ccw.size(); i-- > 1;) cw.push_back(ccw[i]);
    return cw;
}

VerifyReport verify_hull(const PointSet& points, const std::vector<Point>& hull,
                         bool compare_oracle) {
    VerifyReport rep;
    rep.hull_vertices = hull.size();
    const std::size_t n = points.size();

    auto fail = [&rep](std::string msg) {
        if (rep.pass) {
            rep.pass = false;
            rep.failure = std::move(msg);
        }
    };

    if (n == 0) {
        if (!hull.empty()) fail("hull nonempty for empty input");
        return rep;
    }
    if (hull.empty()) {
        fail("hull empty for nonempty input");
        return rep;
    }
    rep.exact_inputs = within_envelope(points);

    // Membership: every vertex is an input point, coordinates compared
    // exactly.
    std::vector<Point> sorted;
    sorted.reserve(n);
    for (std::size_t i = 0; i < n; ++i) sorted.push_back(points[i]);
    std::sort(sorted.begin(), sorted.end(), lex_less);
    for (const Point& v : hull) {
        if (!std::binary_search(sorted.begin(), sorted.end(), v, lex_less)) {
            fail("vertex " + point_str(v) + " is not an input point");
            return rep;
        }
    }

    // Distinctness.
    {
        std::vector<Point> hs = hull;
        std::sort(hs.begin(), hs.end(), lex_less);
        for (std::size_t i = 1; i < hs.size(); ++i) {
            if (hs[i] == hs[i - 1]) {
                fail("vertex " + point_str(hs[i]) + " appears twice");
                return rep;
            }
        }
    }

    // Starts at the leftmost point (ties toward the smaller y).
    if (!(hull.front() == sorted.front())) {
        fail("hull does not start at the leftmost point " +
             point_str(sorted.front()));
        return rep;
    }

    const std::size_t h = hull.size();
    double max_abs = 0.0;
    for (const Point& p : sorted) {
        max_abs = std::max(max_abs, std::fabs(p.x));
        max_abs = std::max(max_abs, std::fabs(p.y));
    }
    const double tol =
        rep.exact_inputs
            ? 0.0
            : 32.0 * std::numeric_limits<double>::epsilon() * max_abs * max_abs;

    if (h >= 3) {
        // Clockwise winding: negative doubled area.
        double area2 = 0.0;
        for (std::size_t i = 0; i < h; ++i) {
            const Point a = hull[i];
            const Point b = hull[(i + 1) % h];
            area2 += a.x * b.y - b.x * a.y;
        }
        if (area2 > (rep.exact_inputs ? 0.0 : tol * double(h))) {
            fail("polygon is not clockwise (doubled area " +
                 std::to_string(area2) + ")");
            return rep;
        }
        // Local convexity: every consecutive triple turns right.
        for (std::size_t i = 0; i < h; ++i) {
            const Point a = hull[i];
            const Point b = hull[(i + 1) % h];
            const Point c = hull[(i + 2) % h];
            const double turn = cross(a, b, c);
            if (turn > tol || (rep.exact_inputs && turn >= 0.0)) {
                fail("vertices " + point_str(a) + " -> " + point_str(b) +
                     " -> " + point_str(c) + " do not turn right");
                return rep;
            }
        }
    }

    // Containment: no input point strictly outside.
    if (h == 1) {
        for (const Point& p : sorted) {
            if (!(p == hull[0])) {
                fail("input point " + point_str(p) +
                     " lies outside the single-vertex hull");
                return rep;
            }
        }
    } else if (h == 2) {
        for (const Point& p : sorted) {
            const double c = cross(hull[0], hull[1], p);
            if (std::fabs(c) > tol) {
                fail("input point " + point_str(p) +
                     " lies off the degenerate hull segment");
                return rep;
            }
        }
    } else {
        std::vector<Point> ccw;
        ccw.reserve(h);
        ccw.push_back(hull[0]);
        for (std::size_t i = h; i-- > 1;) ccw.push_back(hull[i]);
        for (std::size_t i = 0; i < n; ++i) {
            const Point p = points[i];
            if (!inside_convex_ccw(ccw, p, tol)) {
                fail("input point " + point_str(p) + " lies outside the hull");
                return rep;
            }
        }
    }

    if (compare_oracle && rep.exact_inputs) {
        rep.oracle_compared = true;
        const std::vector<Point> oracle = monotone_chain_hull(points);
        if (oracle.size() != hull.size()) {
            fail("vertex count " + std::to_string(hull.size()) +
                 " differs from the monotone-chain oracle's " +
                 std::to_string(oracle.size()));
            return rep;
        }
        for (std::size_t i = 0; i < oracle.size(); ++i) {
            if (!(oracle[i] == hull[i])) {
                fail("vertex " + std::to_string(i) + " is " +
                     point_str(hull[i]) + ", oracle has " +
                     point_str(oracle[i]));
                return rep;
            }
        }
    }
    return rep;
}

ExtractOutcome scalar_reference_extract(double* xs, double* ys, std::size_t n,
                                        const DirectedEdge& edge_a,
                                        const DirectedEdge& edge_b) {
    ExtractOutcome out;
    bool has1 = false, has2 = false;
    double best1 = 0.0, best2 = 0.0;
    Point r1{}, r2{};
    auto track1 = [&](double x, double y) {
        const double g = lateral_offset({x, y}, edge_a);
        if (!has1 || g < best1) {
            has1 = true;
            best1 = g;
            r1 = {x, y};
        }
    };
    auto track2 = [&](double x, double y) {
        const double g = lateral_offset({x, y}, edge_b);
        if (!has2 || g < best2) {
            has2 = true;
            best2 = g;
            r2 = {x, y};
        }
    };

    if (n < 2) {
        std::size_t wl = 0, wr = n;
        if (n == 1) {
            const Point u{xs[0], ys[0]};
            if (is_left_of(u, edge_a)) {
                wl = 1;
                track1(u.x, u.y);
            } else if (is_left_of(u, edge_b)) {
                wr = 0;
                track2(u.x, u.y);
            }
        }
        out.w_l = wl;
        out.w_r = wr;
        if (has1) out.r1 = r1;
        if (has2) out.r2 = r2;
        return out;
    }

    // Two converging read pointers with one guard element per side; every
    // element takes a data-dependent branch.
    const double blx = xs[0], bly = ys[0];
    const double brx = xs[n - 1], bry = ys[n - 1];
    std::size_t wl = 0, rl = 1, rr = n - 1, wr = n;
    while (rl < rr) {
        double x, y;
        if (rl - wl <= wr - rr) {
            x = xs[rl];
            y = ys[rl];
            ++rl;
        } else {
            --rr;
            x = xs[rr];
            y = ys[rr];
        }
        if (is_left_of({x, y}, edge_a)) {
            xs[wl] = x;
            ys[wl] = y;
            ++wl;
            track1(x, y);
        } else if (is_left_of({x, y}, edge_b)) {
            --wr;
            xs[wr] = x;
            ys[wr] = y;
            track2(x, y);
        }
    }
    const double gx[2] = {blx, brx};
    const double gy[2] = {bly, bry};
    for (int i = 0; i < 2; ++i) {
        if (is_left_of({gx[i], gy[i]}, edge_a)) {
            xs[wl] = gx[i];
            ys[wl] = gy[i];
            ++wl;
            track1(gx[i], gy[i]);
        } else if (is_left_of({gx[i], gy[i]}, edge_b)) {
            --wr;
            xs[wr] = gx[i];
            ys[wr] = gy[i];
            track2(gx[i], gy[i]);
        }
    }
    out.w_l = wl;
    out.w_r = wr;
    if (has1) out.r1 = r1;
    if (has2) out.r2 = r2;
    return out;
}

}  // namespace vqhull

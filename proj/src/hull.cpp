#include "vqhull/hull.hpp"

#include <cmath>
#include <cstring>
#include <future>
#include <stdexcept>
#include <vector>

#include "vqhull/extract.hpp"
#include "vqhull/parallel.hpp"

namespace vqhull {

std::pair<int, int> split_budget(int budget, std::size_t size1,
                                 std::size_t size2) {
    if (budget < 1) throw std::invalid_argument("budget must be >= 1");
    if (budget == 1) return {1, 1};  // both calls run sequentially
    if (size2 == 0) return {budget, 0};
    if (size1 == 0) return {0, budget};
    const double ratio =
        double(size1) / (double(size1) + double(size2));
    long t1 = std::lround(budget * ratio);
    if (t1 < 1) t1 = 1;
    if (t1 > budget - 1) t1 = budget - 1;
    return {int(t1), budget - int(t1)};
}

namespace {

struct HullContext {
    double* xs;
    double* ys;
    Config cfg;
};

ExtractOutcome run_extract(HullContext& ctx, std::size_t lo, std::size_t hi,
                           const DirectedEdge& edge_a,
                           const DirectedEdge& edge_b, int budget) {
    const std::size_t m = hi - lo;
    if (budget >= 2) {
        const WorkerLayout layout{std::size_t(budget), ctx.cfg.block_size, m};
        return parallel_extract(ctx.xs + lo, ctx.ys + lo, m, edge_a, edge_b,
                                layout, ctx.cfg);
    }
    return extract_subsets(ctx.xs + lo, ctx.ys + lo, m, edge_a, edge_b,
                           ctx.cfg);
}

std::size_t record_call(HullContext& ctx, std::size_t m, std::size_t s1,
                        std::size_t s2) {
    if (!ctx.cfg.trace) return std::size_t(-1);
    ctx.cfg.trace->calls.push_back({m, s1, s2, 0});
    return ctx.cfg.trace->calls.size() - 1;
}

/// Places r after the S1-side chain and relocates the S2-side chain next to
/// it, so the call's full chain ends up as the prefix of its range. Only the
/// |CH(S2)| relocation touches memory beyond single slots.
std::size_t assemble_chain(HullContext& ctx, std::size_t lo, Point r,
                           std::size_t c1, std::size_t abs_wr, std::size_t c2,
                           std::size_t trace_idx) {
    ctx.xs[lo + c1] = r.x;
    ctx.ys[lo + c1] = r.y;
    if (c2 > 0) {
        const std::size_t dst = lo + c1 + 1;
        std::memmove(ctx.xs + dst, ctx.xs + abs_wr, c2 * sizeof(double));
        std::memmove(ctx.ys + dst, ctx.ys + abs_wr, c2 * sizeof(double));
        if (ctx.cfg.traffic) ctx.cfg.traffic->coord_writes += 2 * c2;
    }
    if (trace_idx != std::size_t(-1))
        ctx.cfg.trace->calls[trace_idx].chain2_moved = c2;
    return c1 + 1 + c2;
}

std::size_t chain_iterative(HullContext& ctx, std::size_t lo, std::size_t hi,
                            Point p, Point r, Point q, int budget);

std::size_t chain_recursive(HullContext& ctx, std::size_t lo, std::size_t hi,
                            Point p, Point r, Point q, int budget, int depth) {
    if (depth >= ctx.cfg.max_depth)
        return chain_iterative(ctx, lo, hi, p, r, q, budget);
    const std::size_t m = hi - lo;
    if (m <= 1) return m;

    const DirectedEdge edge_a{p, r};
    const DirectedEdge edge_b{r, q};
    const ExtractOutcome out = run_extract(ctx, lo, hi, edge_a, edge_b, budget);
    const std::size_t s1 = out.w_l;
    const std::size_t s2 = m - out.w_r;
    const std::size_t abs_wl = lo + out.w_l;
    const std::size_t abs_wr = lo + out.w_r;
    const std::size_t trace_idx = record_call(ctx, m, s1, s2);

    const auto [t1, t2] = split_budget(budget, s1, s2);
    std::future<std::size_t> forked;
    const bool fork = budget >= 2 && s1 > 0 && s2 > 0 &&
                      s2 >= ctx.cfg.fork_threshold;
    if (fork) {
        const Point r2 = *out.r2;
        forked = std::async(std::launch::async, [&ctx, abs_wr, hi, r, r2, q, t2,
                                                 depth] {
            return chain_recursive(ctx, abs_wr, hi, r, r2, q, t2, depth + 1);
        });
    }
    std::size_t c1 = 0;
    if (s1 > 0)
        c1 = chain_recursive(ctx, lo, abs_wl, p, *out.r1, r, t1, depth + 1);
    std::size_t c2 = 0;
    if (fork)
        c2 = forked.get();
    else if (s2 > 0)
        c2 = chain_recursive(ctx, abs_wr, hi, r, *out.r2, q, t2, depth + 1);

    return assemble_chain(ctx, lo, r, c1, abs_wr, c2, trace_idx);
}

/// Explicit-stack driver used beyond the recursion-depth bound; handles any
/// budget but runs sibling calls on the current thread.
std::size_t chain_iterative(HullContext& ctx, std::size_t lo, std::size_t hi,
                            Point p, Point r, Point q, int budget) {
    struct Frame {
        std::size_t lo, hi;
        Point p, r, q;
        int budget;
        int phase = 0;
        std::size_t abs_wl = 0, abs_wr = 0;
        Point r1{}, r2{};
        int t1 = 1, t2 = 1;
        std::size_t c1 = 0;
        std::size_t trace_idx = std::size_t(-1);
    };

    std::vector<Frame> stack;
    stack.push_back({lo, hi, p, r, q, budget});
    std::size_t ret = 0;
    while (!stack.empty()) {
        Frame& f = stack.back();
        switch (f.phase) {
            case 0: {
                const std::size_t m = f.hi - f.lo;
                if (m <= 1) {
                    ret = m;
                    stack.pop_back();
                    break;
                }
                const DirectedEdge edge_a{f.p, f.r};
                const DirectedEdge edge_b{f.r, f.q};
                const ExtractOutcome out =
                    run_extract(ctx, f.lo, f.hi, edge_a, edge_b, f.budget);
                const std::size_t s1 = out.w_l;
                const std::size_t s2 = m - out.w_r;
                f.abs_wl = f.lo + out.w_l;
                f.abs_wr = f.lo + out.w_r;
                f.trace_idx = record_call(ctx, m, s1, s2);
                const auto [t1, t2] = split_budget(f.budget, s1, s2);
                f.t1 = t1;
                f.t2 = t2;
                if (out.r1) f.r1 = *out.r1;
                if (out.r2) f.r2 = *out.r2;
                f.phase = 1;
                if (s1 > 0) {
                    const Frame child{f.lo, f.abs_wl, f.p, f.r1, f.r, f.t1};
                    stack.push_back(child);  // invalidates f
                } else {
                    ret = 0;
                }
                break;
            }
            case 1: {
                f.c1 = ret;
                f.phase = 2;
                if (f.abs_wr < f.hi) {
                    const Frame child{f.abs_wr, f.hi, f.r, f.r2, f.q, f.t2};
                    stack.push_back(child);
                } else {
                    ret = 0;
                }
                break;
            }
            default: {
                const std::size_t len = assemble_chain(
                    ctx, f.lo, f.r, f.c1, f.abs_wr, ret, f.trace_idx);
                ret = len;
                stack.pop_back();
                break;
            }
        }
    }
    return ret;
}

}  // namespace

std::size_t hull_chain(double* xs, double* ys, std::size_t lo, std::size_t hi,
                       Point p, Point r, Point q, int budget,
                       const Config& cfg) {
    cfg.validate();
    HullContext ctx{xs, ys, cfg};
    if (budget > 1) {
        // Sibling calls may fork; counters and traces are single-threaded.
        ctx.cfg.traffic = nullptr;
        ctx.cfg.trace = nullptr;
    }
    return chain_recursive(ctx, lo, hi, p, r, q, budget < 1 ? 1 : budget, 0);
}

HullPolygon convex_hull(PointSet& points, const Config& cfg) {
    cfg.validate();
    HullContext ctx{points.xs(), points.ys(), cfg};
    if (ctx.cfg.workers > 1) {
        // Traffic and trace instrumentation is single-threaded by contract.
        ctx.cfg.traffic = nullptr;
        ctx.cfg.trace = nullptr;
    }
    if (ctx.cfg.trace) {
        ctx.cfg.trace->extremes_points = points.size();
        ctx.cfg.trace->calls.clear();
    }

    HullPolygon hull;
    const std::size_t n = points.size();
    if (n == 0) return hull;

    const auto [ilo, ihi] = find_extremes(
        ctx.xs, ctx.ys, n,
        ctx.cfg.traffic ? &ctx.cfg.traffic->coord_reads : nullptr);
    const Point p = points[ilo];
    const Point q = points[ihi];

    // Bootstrap with the degenerate triangle p, q, p: one pass splits the
    // range into the upper and lower candidate sets.
    const DirectedEdge edge_a{p, q};
    const DirectedEdge edge_b{q, p};
    const int budget = ctx.cfg.workers;
    const ExtractOutcome out = run_extract(ctx, 0, n, edge_a, edge_b, budget);
    const std::size_t s1 = out.w_l;
    const std::size_t s2 = n - out.w_r;
    record_call(ctx, n, s1, s2);

    const auto [t1, t2] = split_budget(budget, s1, s2);
    std::future<std::size_t> forked;
    const bool fork =
        budget >= 2 && s1 > 0 && s2 > 0 && s2 >= ctx.cfg.fork_threshold;
    if (fork) {
        const Point r2 = *out.r2;
        const std::size_t wr = out.w_r;
        forked = std::async(std::launch::async, [&ctx, wr, n, q, r2, p, t2] {
            return chain_recursive(ctx, wr, n, q, r2, p, t2, 1);
        });
    }
    std::size_t c1 = 0;
    if (s1 > 0) c1 = chain_recursive(ctx, 0, out.w_l, p, *out.r1, q, t1, 1);
    std::size_t c2 = 0;
    if (fork)
        c2 = forked.get();
    else if (s2 > 0)
        c2 = chain_recursive(ctx, out.w_r, n, q, *out.r2, p, t2, 1);

    hull.vertices.reserve(2 + c1 + c2);
    hull.vertices.push_back(p);
    for (std::size_t i = 0; i < c1; ++i)
        hull.vertices.push_back({ctx.xs[i], ctx.ys[i]});
    if (!(q == p)) hull.vertices.push_back(q);
    for (std::size_t i = 0; i < c2; ++i)
        hull.vertices.push_back({ctx.xs[out.w_r + i], ctx.ys[out.w_r + i]});
    return hull;
}

HullPolygon convex_hull_copy(const PointSet& points, const Config& cfg) {
    PointSet scratch = points;
    return convex_hull(scratch, cfg);
}

}  // namespace vqhull

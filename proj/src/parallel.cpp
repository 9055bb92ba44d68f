#include "vqhull/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <thread>

#include "extract_core.hpp"
#include "kernels.hpp"

namespace vqhull {

namespace detail {

ExtractOutcome extract_strided_dispatch(double* xs, double* ys,
                                        const StridedSpec& spec,
                                        const DirectedEdge& a,
                                        const DirectedEdge& b,
                                        const Config& cfg) {
    const ExtractArgs args = make_args(a, b, cfg);
#ifdef VQHULL_HAVE_AVX512
    if (use_avx512(cfg.simd))
        return extract_strided_avx512(cfg.lanes, xs, ys, spec, args,
                                      cfg.write_logger);
#else
    (void)use_avx512(cfg.simd);
#endif
    return extract_strided_portable(cfg.lanes, xs, ys, spec, args,
                                    cfg.write_logger);
}

}  // namespace detail

void WorkerLayout::validate() const {
    if (workers < 1) throw std::invalid_argument("worker count must be >= 1");
    if (block < 8 || block % 8 != 0)
        throw std::invalid_argument(
            "block size must be a positive multiple of 8 points");
}

std::vector<IndexRange> block_cyclic_indices(const WorkerLayout& layout,
                                             std::size_t worker) {
    layout.validate();
    if (worker >= layout.workers)
        throw std::invalid_argument("worker id out of range");
    std::vector<IndexRange> ranges;
    for (std::size_t blk = worker; blk * layout.block < layout.n;
         blk += layout.workers) {
        const std::size_t begin = blk * layout.block;
        ranges.push_back({begin, std::min(begin + layout.block, layout.n)});
    }
    return ranges;
}

MergeBounds MergeBounds::from(std::span<const WorkerOutcome> workers,
                              std::size_t n) {
    MergeBounds b;
    b.w_l.reserve(workers.size());
    b.w_r.reserve(workers.size());
    for (const auto& w : workers) {
        b.w_l.push_back(w.w_l);
        b.w_r.push_back(w.w_r);
        if (w.points_owned == 0) continue;
        if (!b.any_points) {
            b.w_l_min = b.w_l_max = w.w_l;
            b.w_r_min = b.w_r_max = w.w_r;
            b.any_points = true;
        } else {
            b.w_l_min = std::min(b.w_l_min, w.w_l);
            b.w_l_max = std::max(b.w_l_max, w.w_l);
            b.w_r_min = std::min(b.w_r_min, w.w_r);
            b.w_r_max = std::max(b.w_r_max, w.w_r);
        }
    }
    if (!b.any_points) {
        b.w_l_min = b.w_l_max = 0;
        b.w_r_min = b.w_r_max = n;
    }
    return b;
}

WorkerOutcome worker_extract(double* xs, double* ys, const WorkerLayout& layout,
                             std::size_t worker, const DirectedEdge& edge_a,
                             const DirectedEdge& edge_b, const Config& cfg) {
    layout.validate();
    if (worker >= layout.workers)
        throw std::invalid_argument("worker id out of range");
    detail::StridedSpec spec{layout.n, layout.workers, layout.block, worker};
    const std::size_t m = spec.logical_size();

    WorkerOutcome out;
    out.points_owned = m;
    if (m == 0) {
        out.w_l = out.w_r = layout.n;  // empty subsequence: start == end
        return out;
    }
    const ExtractOutcome logical =
        detail::extract_strided_dispatch(xs, ys, spec, edge_a, edge_b, cfg);

    detail::BlockCyclicMap map(xs, ys, spec);
    map.fill_sentinel(logical.w_l, logical.w_r, cfg.write_logger);

    out.w_l = spec.cursor_global(logical.w_l, m);
    out.w_r = spec.cursor_global(logical.w_r, m);
    out.r1 = logical.r1;
    out.r2 = logical.r2;
    return out;
}

namespace {

bool is_sentinel(double x, double y) {
    return std::isnan(x) || std::isnan(y);
}

// Virtual concatenation of the (at most two) cleanup windows.
struct WindowSeq {
    std::size_t b0, e0;  // first window
    std::size_t b1, e1;  // second window (may be empty)

    std::size_t size() const { return (e0 - b0) + (e1 - b1); }
    std::size_t slot(std::size_t j) const {
        return j < e0 - b0 ? b0 + j : b1 + (j - (e0 - b0));
    }
};

}  // namespace

ExtractOutcome merge_and_cleanup(double* xs, double* ys, std::size_t n,
                                 std::span<const WorkerOutcome> workers,
                                 const DirectedEdge& edge_a,
                                 const DirectedEdge& edge_b) {
    const MergeBounds bounds = MergeBounds::from(workers, n);

    // Farthest candidates merge under the canonical preference, so the result
    // does not depend on the worker count or scan order even under ties.
    const auto fa = detail::EdgeFrame::make(edge_a);
    const auto fb = detail::EdgeFrame::make(edge_b);
    auto merge_candidate = [](std::optional<Point>& best, const Point& cand,
                              const detail::EdgeFrame& frame) {
        if (!best ||
            detail::prefer_farthest(
                detail::frame_offset(cand.x, cand.y, frame), cand.x, cand.y,
                detail::frame_offset(best->x, best->y, frame), best->x,
                best->y))
            best = cand;
    };
    std::optional<Point> r1, r2;
    for (const auto& w : workers) {
        if (w.r1) merge_candidate(r1, *w.r1, fa);
        if (w.r2) merge_candidate(r2, *w.r2, fb);
    }
    if (!bounds.any_points) return {0, n, r1, r2};

    WindowSeq seq{};
    if (bounds.w_l_max >= bounds.w_r_min) {
        // Heavy skew: the windows overlap into one contiguous region.
        seq = {bounds.w_l_min, bounds.w_r_max, bounds.w_r_max, bounds.w_r_max};
    } else {
        seq = {bounds.w_l_min, bounds.w_l_max, bounds.w_r_min, bounds.w_r_max};
    }

    // Dutch National Flag over the window sequence: left-of-A slots compact
    // to the front, left-of-B slots to the back, sentinels stay in between.
    std::size_t lo = 0, mid = 0, hi = seq.size();
    while (mid < hi) {
        const std::size_t s = seq.slot(mid);
        const double x = xs[s], y = ys[s];
        if (is_sentinel(x, y)) {
            ++mid;
        } else if (is_left_of({x, y}, edge_a)) {
            const std::size_t t = seq.slot(lo);
            std::swap(xs[s], xs[t]);
            std::swap(ys[s], ys[t]);
            ++lo;
            ++mid;
        } else if (is_left_of({x, y}, edge_b)) {
            --hi;
            const std::size_t t = seq.slot(hi);
            std::swap(xs[s], xs[t]);
            std::swap(ys[s], ys[t]);
        } else {
            throw std::logic_error(
                "merge_and_cleanup: window point on neither side; corrupted "
                "parallel step");
        }
    }

    ExtractOutcome out;
    out.w_l = bounds.w_l_min + lo;
    out.w_r = bounds.w_r_max - (seq.size() - hi);
    out.r1 = r1;
    out.r2 = r2;
    return out;
}

namespace {

struct MarginPoints {
    std::vector<Point> s1;
    std::vector<Point> s2;
};

void classify_margin(const double* xs, const double* ys, std::size_t begin,
                     std::size_t end, const DirectedEdge& a,
                     const DirectedEdge& b, MarginPoints& out) {
    for (std::size_t i = begin; i < end; ++i) {
        const Point u{xs[i], ys[i]};
        if (is_left_of(u, a))
            out.s1.push_back(u);
        else if (is_left_of(u, b))
            out.s2.push_back(u);
    }
}

void write_point(double* xs, double* ys, std::size_t i, Point p) {
    xs[i] = p.x;
    ys[i] = p.y;
}

void move_points(double* xs, double* ys, std::size_t dst, std::size_t src,
                 std::size_t count) {
    std::memmove(xs + dst, xs + src, count * sizeof(double));
    std::memmove(ys + dst, ys + src, count * sizeof(double));
}

/// Folds the scalar-classified head/tail points back around the middle's
/// outcome so the final S1 prefix starts at 0 and the S2 suffix ends at n.
/// All moves stay within one cacheline's worth of points plus the slack the
/// capacity argument guarantees.
ExtractOutcome fold_margins(double* xs, double* ys, std::size_t n,
                            std::size_t head, std::size_t mid_end,
                            const ExtractOutcome& mid,
                            const MarginPoints& margins) {
    const std::size_t mid_s1 = mid.w_l;
    const std::size_t mid_s2 = (mid_end - head) - mid.w_r;
    std::size_t mid_wl = head + mid.w_l;        // range-relative end of mid S1
    std::size_t s2b = head + mid.w_r;           // live mid-S2 window
    std::size_t s2e = mid_end;
    const std::size_t k1 = margins.s1.size();
    const std::size_t k2 = margins.s2.size();
    const std::size_t final_wl = mid_s1 + k1;
    const std::size_t final_wr = n - (mid_s2 + k2);

    // Front: slots [0, head) become the start of the S1 prefix.
    if (k1 <= head) {
        for (std::size_t i = 0; i < k1; ++i)
            write_point(xs, ys, i, margins.s1[i]);
        const std::size_t want = std::min(head, final_wl);
        const std::size_t moved = want - k1;
        move_points(xs, ys, k1, mid_wl - moved, moved);
        mid_wl -= moved;
    } else {
        for (std::size_t i = 0; i < head; ++i)
            write_point(xs, ys, i, margins.s1[i]);
        const std::size_t surplus = k1 - head;
        const std::size_t gap = s2b - mid_wl;
        if (surplus > gap && mid_s2 > 0) {
            // The overflowing prefix lands in [mid_wl, final_wl); displace the
            // conflicting front of the live mid-S2 window beyond that region.
            // Capacity bounds the displacement by the free tail slots.
            const std::size_t deficit = std::min(surplus - gap, mid_s2);
            const std::size_t dst = std::max(s2e, final_wl);
            move_points(xs, ys, dst, s2b, deficit);
            if (deficit == mid_s2) {
                s2b = dst;
                s2e = dst + mid_s2;
            } else {
                s2b += deficit;
                s2e += deficit;
            }
        }
        for (std::size_t i = 0; i < surplus; ++i)
            write_point(xs, ys, mid_wl + i, margins.s1[head + i]);
    }

    // Tail: slots [s2e, n) absorb the end of the S2 suffix.
    const std::size_t tail_free = n - s2e;
    if (k2 <= tail_free) {
        for (std::size_t i = 0; i < k2; ++i)
            write_point(xs, ys, n - k2 + i, margins.s2[i]);
        const std::size_t want = std::min(tail_free, mid_s2 + k2);
        const std::size_t moved = want - k2;
        move_points(xs, ys, n - k2 - moved, s2b, moved);
    } else {
        for (std::size_t i = 0; i < tail_free; ++i)
            write_point(xs, ys, s2e + i, margins.s2[i]);
        const std::size_t surplus = k2 - tail_free;
        for (std::size_t i = 0; i < surplus; ++i)
            write_point(xs, ys, s2b - surplus + i, margins.s2[tail_free + i]);
    }

    ExtractOutcome out;
    out.w_l = final_wl;
    out.w_r = final_wr;
    out.r1 = mid.r1;
    out.r2 = mid.r2;
    return out;
}

}  // namespace

ExtractOutcome parallel_extract(double* xs, double* ys, std::size_t n,
                                const DirectedEdge& edge_a,
                                const DirectedEdge& edge_b,
                                const WorkerLayout& layout, const Config& cfg) {
    layout.validate();
    if (layout.n != n)
        throw std::invalid_argument("layout.n does not match the range length");
    if (n == 0) return {0, 0, std::nullopt, std::nullopt};
    if (layout.workers == 1) return extract_subsets(xs, ys, n, edge_a, edge_b, cfg);

    // Trim the sub-cacheline head and tail so worker blocks line up with
    // cachelines; the trimmed points are classified sequentially.
    const std::size_t phase =
        (reinterpret_cast<std::uintptr_t>(xs) / sizeof(double)) % 8;
    std::size_t head = phase == 0 ? 0 : 8 - phase;
    if (head > n) head = n;
    const std::size_t mid_end = head + (n - head) / 8 * 8;
    const std::size_t mid = mid_end - head;

    MarginPoints margins;
    classify_margin(xs, ys, 0, head, edge_a, edge_b, margins);
    classify_margin(xs, ys, mid_end, n, edge_a, edge_b, margins);

    ExtractOutcome mid_out{0, 0, std::nullopt, std::nullopt};
    if (mid > 0) {
        const WorkerLayout mid_layout{layout.workers, layout.block, mid};
        Config worker_cfg = cfg;
        worker_cfg.traffic = nullptr;  // counters are single-threaded
        worker_cfg.trace = nullptr;

        std::vector<WorkerOutcome> outcomes(layout.workers);
        std::vector<std::thread> threads;
        threads.reserve(layout.workers - 1);
        for (std::size_t t = 1; t < layout.workers; ++t) {
            const detail::StridedSpec spec{mid, layout.workers, layout.block, t};
            if (spec.logical_size() == 0) {
                outcomes[t] = WorkerOutcome{0, mid, mid, std::nullopt, std::nullopt};
                continue;
            }
            threads.emplace_back([&, t] {
                outcomes[t] = worker_extract(xs + head, ys + head, mid_layout, t,
                                             edge_a, edge_b, worker_cfg);
            });
        }
        outcomes[0] = worker_extract(xs + head, ys + head, mid_layout, 0, edge_a,
                                     edge_b, worker_cfg);
        for (auto& th : threads) th.join();

        mid_out = merge_and_cleanup(xs + head, ys + head, mid, outcomes, edge_a,
                                    edge_b);
    }

    ExtractOutcome out = fold_margins(xs, ys, n, head, mid_end, mid_out, margins);
    const auto fa = detail::EdgeFrame::make(edge_a);
    const auto fb = detail::EdgeFrame::make(edge_b);
    auto fold_candidate = [](std::optional<Point>& best, const Point& cand,
                             const detail::EdgeFrame& frame) {
        if (!best ||
            detail::prefer_farthest(
                detail::frame_offset(cand.x, cand.y, frame), cand.x, cand.y,
                detail::frame_offset(best->x, best->y, frame), best->x,
                best->y))
            best = cand;
    };
    for (const Point& p : margins.s1) fold_candidate(out.r1, p, fa);
    for (const Point& p : margins.s2) fold_candidate(out.r2, p, fb);
    return out;
}

}  // namespace vqhull

#ifndef VQHULL_SRC_EXTRACT_CORE_HPP
#define VQHULL_SRC_EXTRACT_CORE_HPP

#include <bit>
#include <cstring>
#include <limits>

#include "kernels.hpp"
#include "vqhull/parallel.hpp"

namespace vqhull::detail {

inline constexpr double kSentinel = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------------------
// Block-cyclic subsequence mapping
// ---------------------------------------------------------------------------

/// Geometry of one worker's block-cyclic subsequence over a range of n points.
/// Logical position L addresses the L-th point the worker owns; global
/// positions are range-relative indices.
struct StridedSpec {
    std::size_t n = 0;
    std::size_t workers = 1;
    std::size_t block = 512;
    std::size_t worker = 0;

    std::size_t total_blocks() const { return (n + block - 1) / block; }

    std::size_t owned_blocks() const {
        const std::size_t nb = total_blocks();
        return worker < nb ? (nb - 1 - worker) / workers + 1 : 0;
    }

    /// Points owned: full blocks, except the globally last block may be short.
    std::size_t logical_size() const {
        const std::size_t owned = owned_blocks();
        if (owned == 0) return 0;
        std::size_t m = owned * block;
        const std::size_t nb = total_blocks();
        if ((nb - 1) % workers == worker) m -= nb * block - n;
        return m;
    }

    std::size_t global(std::size_t logical) const {
        const std::size_t blk = logical / block;
        const std::size_t off = logical % block;
        return (blk * workers + worker) * block + off;
    }

    /// Global position of a logical cursor in [0, m]; the one-past-the-end
    /// cursor maps to one past the last owned slot.
    std::size_t cursor_global(std::size_t logical, std::size_t m) const {
        if (logical < m) return global(logical);
        return m == 0 ? n : global(m - 1) + 1;
    }
};

/// Split-aware accessor for a worker's subsequence; doubles as the observer's
/// read-only view.
class BlockCyclicMap final : public ExtractView {
public:
    BlockCyclicMap(double* xs, double* ys, const StridedSpec& spec)
        : xs_(xs), ys_(ys), spec_(spec), m_(spec.logical_size()) {}

    std::size_t size() const override { return m_; }
    Point at(std::size_t logical) const override {
        const std::size_t g = spec_.global(logical);
        return {xs_[g], ys_[g]};
    }

    const StridedSpec& spec() const { return spec_; }

    /// True when [logical, logical + count) occupies one block.
    bool contiguous(std::size_t logical, std::size_t count) const {
        return logical % spec_.block + count <= spec_.block;
    }

    const double* x_ptr(std::size_t logical) const { return xs_ + spec_.global(logical); }
    const double* y_ptr(std::size_t logical) const { return ys_ + spec_.global(logical); }

    void gather(std::size_t logical, std::size_t count, double* out_x,
                double* out_y) const {
        std::size_t done = 0;
        while (done < count) {
            const std::size_t at = logical + done;
            const std::size_t head = spec_.block - at % spec_.block;
            const std::size_t run = head < count - done ? head : count - done;
            const std::size_t g = spec_.global(at);
            std::memcpy(out_x + done, xs_ + g, run * sizeof(double));
            std::memcpy(out_y + done, ys_ + g, run * sizeof(double));
            done += run;
        }
    }

    void scatter(std::size_t logical, std::size_t count, const double* src_x,
                 const double* src_y, BlockWriteLogger* log) {
        std::size_t done = 0;
        while (done < count) {
            const std::size_t at = logical + done;
            const std::size_t head = spec_.block - at % spec_.block;
            const std::size_t run = head < count - done ? head : count - done;
            const std::size_t g = spec_.global(at);
            if (log) log->on_block_write(spec_.worker, g / spec_.block);
            std::memcpy(xs_ + g, src_x + done, run * sizeof(double));
            std::memcpy(ys_ + g, src_y + done, run * sizeof(double));
            done += run;
        }
    }

    void fill_sentinel(std::size_t logical_begin, std::size_t logical_end,
                       BlockWriteLogger* log) {
        std::size_t logical = logical_begin;
        while (logical < logical_end) {
            const std::size_t head = spec_.block - logical % spec_.block;
            const std::size_t run =
                head < logical_end - logical ? head : logical_end - logical;
            const std::size_t g = spec_.global(logical);
            if (log) log->on_block_write(spec_.worker, g / spec_.block);
            for (std::size_t i = 0; i < run; ++i) {
                xs_[g + i] = kSentinel;
                ys_[g + i] = kSentinel;
            }
            logical += run;
        }
    }

private:
    double* xs_;
    double* ys_;
    StridedSpec spec_;
    std::size_t m_;
};

// ---------------------------------------------------------------------------
// Side writers
// ---------------------------------------------------------------------------

template <class B>
struct DirectWriterS1 {
    double* xs;
    double* ys;
    std::size_t w = 0;

    void block(const typename B::Reg& x, const typename B::Reg& y,
               unsigned mask, std::size_t k) {
        B::compress_store(xs + w, mask, x);
        B::compress_store(ys + w, mask, y);
        w += k;
    }
    void point(double x, double y) {
        xs[w] = x;
        ys[w] = y;
        ++w;
    }
    std::size_t cursor() const { return w; }
    void finish() {}
};

template <class B>
struct DirectWriterS2 {
    double* xs;
    double* ys;
    std::size_t w;  // starts at n, grows downward

    void block(const typename B::Reg& x, const typename B::Reg& y,
               unsigned mask, std::size_t k) {
        w -= k;
        B::compress_store(xs + w, mask, x);
        B::compress_store(ys + w, mask, y);
    }
    void point(double x, double y) {
        --w;
        xs[w] = x;
        ys[w] = y;
    }
    std::size_t cursor() const { return w; }
    void finish() {}
};

// Staging capacity: four 8 KiB coordinate buffers fit comfortably in L1.
inline constexpr std::size_t kStageCap = 1024;

/// Write-combining forward writer: compressed chunks accumulate in an
/// L1-resident buffer and reach the array in large bulk stores. The flushed
/// bytes are identical to what the direct writer produces.
template <class B>
struct StagedWriterS1 {
    double* xs;
    double* ys;
    std::size_t base = 0;
    std::size_t fill = 0;
    alignas(64) double sx[kStageCap];
    alignas(64) double sy[kStageCap];

    StagedWriterS1(double* x, double* y) : xs(x), ys(y) {}

    void block(const typename B::Reg& x, const typename B::Reg& y,
               unsigned mask, std::size_t k) {
        if (fill + B::lanes > kStageCap) flush();
        B::compress_store(sx + fill, mask, x);
        B::compress_store(sy + fill, mask, y);
        fill += k;
    }
    void point(double x, double y) {
        if (fill == kStageCap) flush();
        sx[fill] = x;
        sy[fill] = y;
        ++fill;
    }
    void flush() {
        std::memcpy(xs + base, sx, fill * sizeof(double));
        std::memcpy(ys + base, sy, fill * sizeof(double));
        base += fill;
        fill = 0;
    }
    std::size_t cursor() const { return base + fill; }
    void finish() { flush(); }
};

/// Backward-filling staged writer; the staging buffer grows downward so a
/// flush is a single copy that lands bit-identically to direct stores.
template <class B>
struct StagedWriterS2 {
    double* xs;
    double* ys;
    std::size_t base;  // starts at n
    std::size_t pos = kStageCap;
    alignas(64) double sx[kStageCap];
    alignas(64) double sy[kStageCap];

    StagedWriterS2(double* x, double* y, std::size_t n) : xs(x), ys(y), base(n) {}

    void block(const typename B::Reg& x, const typename B::Reg& y,
               unsigned mask, std::size_t k) {
        if (pos < std::size_t(B::lanes)) flush();
        pos -= k;
        B::compress_store(sx + pos, mask, x);
        B::compress_store(sy + pos, mask, y);
    }
    void point(double x, double y) {
        if (pos == 0) flush();
        --pos;
        sx[pos] = x;
        sy[pos] = y;
    }
    void flush() {
        const std::size_t cnt = kStageCap - pos;
        base -= cnt;
        std::memcpy(xs + base, sx + pos, cnt * sizeof(double));
        std::memcpy(ys + base, sy + pos, cnt * sizeof(double));
        pos = kStageCap;
    }
    std::size_t cursor() const { return base - (kStageCap - pos); }
    void finish() { flush(); }
};

template <class B>
struct StridedWriterS1 {
    BlockCyclicMap* map;
    BlockWriteLogger* log;
    std::size_t w = 0;

    void block(const typename B::Reg& x, const typename B::Reg& y,
               unsigned mask, std::size_t k) {
        alignas(64) double cx[B::lanes], cy[B::lanes];
        B::compress_store(cx, mask, x);
        B::compress_store(cy, mask, y);
        map->scatter(w, k, cx, cy, log);
        w += k;
    }
    void point(double x, double y) {
        map->scatter(w, 1, &x, &y, log);
        ++w;
    }
    std::size_t cursor() const { return w; }
    void finish() {}
};

template <class B>
struct StridedWriterS2 {
    BlockCyclicMap* map;
    BlockWriteLogger* log;
    std::size_t w;  // logical, starts at m

    void block(const typename B::Reg& x, const typename B::Reg& y,
               unsigned mask, std::size_t k) {
        alignas(64) double cx[B::lanes], cy[B::lanes];
        B::compress_store(cx, mask, x);
        B::compress_store(cy, mask, y);
        w -= k;
        map->scatter(w, k, cx, cy, log);
    }
    void point(double x, double y) {
        --w;
        map->scatter(w, 1, &x, &y, log);
    }
    std::size_t cursor() const { return w; }
    void finish() {}
};

// ---------------------------------------------------------------------------
// Farthest-point bookkeeping
// ---------------------------------------------------------------------------

/// Scalar incumbent used for buffered points and small ranges; follows the
/// same canonical preference as the lane trackers.
struct SideTracker {
    EdgeFrame frame;
    bool present = false;
    double best_off = 0.0;
    Point best{};

    explicit SideTracker(const EdgeFrame& e) : frame(e) {}

    void consider(double x, double y) {
        const double g = frame_offset(x, y, frame);
        if (!present ||
            prefer_farthest(g, x, y, best_off, best.x, best.y)) {
            present = true;
            best_off = g;
            best = {x, y};
        }
    }

    template <class F>
    void absorb(const F& lanes) {
        if (auto p = lanes.reduce()) consider(p->x, p->y);
    }

    std::optional<Point> result() const {
        return present ? std::optional<Point>(best) : std::nullopt;
    }
};

// ---------------------------------------------------------------------------
// Observer plumbing
// ---------------------------------------------------------------------------

struct ContiguousView final : ExtractView {
    const double* xs;
    const double* ys;
    std::size_t n;

    ContiguousView(const double* x, const double* y, std::size_t count)
        : xs(x), ys(y), n(count) {}
    std::size_t size() const override { return n; }
    Point at(std::size_t L) const override { return {xs[L], ys[L]}; }
};

struct ObserverShim {
    ExtractObserver* obs;
    ExtractIterationState st;

    ObserverShim(ExtractObserver* o, const ExtractView* view, std::size_t n,
                 int lanes, const DirectedEdge& a, const DirectedEdge& b)
        : obs(o) {
        st.view = view;
        st.prev_w_l = 0;
        st.prev_w_r = n;
        st.lanes = lanes;
        st.edge_a = a;
        st.edge_b = b;
    }

    void fire(std::size_t wl, std::size_t rl, std::size_t rr, std::size_t wr,
              std::size_t discarded, std::size_t buffered) {
        if (!obs) return;
        st.w_l = wl;
        st.r_l = rl;
        st.r_r = rr;
        st.w_r = wr;
        st.discarded = discarded;
        st.buffered = buffered;
        obs->on_iteration(st);
        st.prev_w_l = wl;
        st.prev_w_r = wr;
    }
};

// ---------------------------------------------------------------------------
// Extraction loops
// ---------------------------------------------------------------------------

/// Read access used by the block loop. `block` exposes d consecutive logical
/// points, borrowing the caller's pad only when the span is not contiguous in
/// memory; `copy` always materializes into the destination.
struct ContiguousLoader {
    const double* xs;
    const double* ys;

    std::pair<const double*, const double*> block(std::size_t at, double*,
                                                  double*) const {
        return {xs + at, ys + at};
    }
    void copy(std::size_t at, std::size_t count, double* dx, double* dy) const {
        std::memcpy(dx, xs + at, count * sizeof(double));
        std::memcpy(dy, ys + at, count * sizeof(double));
    }
};

template <int D>
struct StridedLoader {
    const BlockCyclicMap* map;

    std::pair<const double*, const double*> block(std::size_t at, double* px,
                                                  double* py) const {
        if (map->contiguous(at, D)) return {map->x_ptr(at), map->y_ptr(at)};
        map->gather(at, D, px, py);
        return {px, py};
    }
    void copy(std::size_t at, std::size_t count, double* dx, double* dy) const {
        map->gather(at, count, dx, dy);
    }
};

/// Core of the in-place pass for ranges of at least two vector blocks.
/// Guards the first and last block in buffers, then repeatedly compresses a
/// block read from the side whose read-write gap is smaller, which keeps
/// every write inside already-consumed territory.
template <class B, class W1, class W2, class Loader>
ExtractOutcome extract_blocks(std::size_t n, const ExtractArgs& a, W1& s1,
                              W2& s2, const Loader& loader,
                              const ExtractView* view) {
    constexpr std::size_t d = B::lanes;
    alignas(64) double bx[2 * d], by[2 * d];
    loader.copy(0, d, bx, by);
    loader.copy(n - d, d, bx + d, by + d);
    if (a.traffic) a.traffic->coord_reads += 4 * d;

    std::size_t rl = d, rr = n - d;
    typename B::Farthest f1(a.edge_a), f2(a.edge_b);
    std::size_t discarded = 0;
    ObserverShim shim(a.observer, view, n, int(d), a.raw_a, a.raw_b);

    alignas(64) double lx[d], ly[d];
    while (rr - rl >= d) {
        std::size_t src;
        if (rl - s1.cursor() <= s2.cursor() - rr) {
            src = rl;
            rl += d;
        } else {
            rr -= d;
            src = rr;
        }
        const auto [px, py] = loader.block(src, lx, ly);
        const auto x = B::load(px);
        const auto y = B::load(py);
        unsigned ma, mb;
        B::classify(x, y, a.edge_a, a.edge_b, ma, mb);
        const std::size_t k1 = std::size_t(std::popcount(ma));
        const std::size_t k2 = std::size_t(std::popcount(mb));
        s1.block(x, y, ma, k1);
        s2.block(x, y, mb, k2);
        f1.update(x, y, ma);
        f2.update(x, y, mb);
        discarded += d - k1 - k2;
        if (a.traffic) {
            a.traffic->coord_reads += 2 * d;
            a.traffic->coord_writes += 2 * (k1 + k2);
        }
        if (a.observer)
            shim.fire(s1.cursor(), rl, rr, s2.cursor(), discarded, 2 * d);
    }

    // Remaining gap shorter than a block: pad with the sentinel, which no
    // predicate selects.
    if (rr > rl) {
        const std::size_t g = rr - rl;
        loader.copy(rl, g, lx, ly);
        for (std::size_t i = g; i < d; ++i) lx[i] = ly[i] = kSentinel;
        const auto x = B::load(lx);
        const auto y = B::load(ly);
        unsigned ma, mb;
        B::classify(x, y, a.edge_a, a.edge_b, ma, mb);
        const std::size_t k1 = std::size_t(std::popcount(ma));
        const std::size_t k2 = std::size_t(std::popcount(mb));
        s1.block(x, y, ma, k1);
        s2.block(x, y, mb, k2);
        f1.update(x, y, ma);
        f2.update(x, y, mb);
        discarded += g - k1 - k2;
        rl = rr;
        if (a.traffic) {
            a.traffic->coord_reads += 2 * g;
            a.traffic->coord_writes += 2 * (k1 + k2);
        }
        if (a.observer)
            shim.fire(s1.cursor(), rl, rr, s2.cursor(), discarded, 2 * d);
    }

    SideTracker t1(a.edge_a), t2(a.edge_b);
    t1.absorb(f1);
    t2.absorb(f2);
    for (std::size_t i = 0; i < 2 * d; ++i) {
        const double x = bx[i], y = by[i];
        const bool la = frame_left_of(x, y, a.edge_a);
        const bool lb = !la && frame_left_of(x, y, a.edge_b);
        if (la) {
            s1.point(x, y);
            t1.consider(x, y);
        } else if (lb) {
            s2.point(x, y);
            t2.consider(x, y);
        } else {
            ++discarded;
        }
        if (a.traffic && (la || lb)) a.traffic->coord_writes += 2;
    }
    s1.finish();
    s2.finish();
    if (a.observer)
        shim.fire(s1.cursor(), rl, rr, s2.cursor(), discarded, 0);
    return {s1.cursor(), s2.cursor(), t1.result(), t2.result()};
}

/// Ranges shorter than two blocks: copy aside, then write back both sides.
inline ExtractOutcome extract_small(std::size_t n, const ExtractArgs& a,
                                    const double* src_x, const double* src_y,
                                    auto&& write_s1, auto&& write_s2) {
    SideTracker t1(a.edge_a), t2(a.edge_b);
    std::size_t wl = 0, wr = n;
    if (a.traffic) a.traffic->coord_reads += 2 * n;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = src_x[i], y = src_y[i];
        if (frame_left_of(x, y, a.edge_a)) {
            write_s1(wl++, x, y);
            t1.consider(x, y);
            if (a.traffic) a.traffic->coord_writes += 2;
        } else if (frame_left_of(x, y, a.edge_b)) {
            write_s2(--wr, x, y);
            t2.consider(x, y);
            if (a.traffic) a.traffic->coord_writes += 2;
        }
    }
    return {wl, wr, t1.result(), t2.result()};
}

template <class B>
ExtractOutcome extract_contiguous(double* xs, double* ys, std::size_t n,
                                  const ExtractArgs& a) {
    constexpr std::size_t d = B::lanes;
    if (n == 0) return {0, 0, std::nullopt, std::nullopt};
    if (n < 2 * d) {
        double tx[2 * d], ty[2 * d];
        std::memcpy(tx, xs, n * sizeof(double));
        std::memcpy(ty, ys, n * sizeof(double));
        return extract_small(
            n, a, tx, ty,
            [&](std::size_t i, double x, double y) { xs[i] = x; ys[i] = y; },
            [&](std::size_t i, double x, double y) { xs[i] = x; ys[i] = y; });
    }
    ContiguousView view(xs, ys, n);
    ContiguousLoader loader{xs, ys};
    // The debug observer reads settled slots from the array, so it implies
    // direct writes.
    if (a.write_combining && !a.observer) {
        StagedWriterS1<B> s1{xs, ys};
        StagedWriterS2<B> s2{xs, ys, n};
        return extract_blocks<B>(n, a, s1, s2, loader, &view);
    }
    DirectWriterS1<B> s1{xs, ys};
    DirectWriterS2<B> s2{xs, ys, n};
    return extract_blocks<B>(n, a, s1, s2, loader, &view);
}

/// Worker-local pass over a block-cyclic subsequence. The logical algorithm
/// is the contiguous one; loads and stores split at block seams.
template <class B>
ExtractOutcome extract_strided(double* xs, double* ys, const StridedSpec& spec,
                               const ExtractArgs& a, BlockWriteLogger* log) {
    constexpr std::size_t d = B::lanes;
    BlockCyclicMap map(xs, ys, spec);
    const std::size_t m = map.size();
    if (m < 2 * d) {
        double tx[2 * d], ty[2 * d];
        map.gather(0, m, tx, ty);
        return extract_small(
            m, a, tx, ty,
            [&](std::size_t i, double x, double y) {
                map.scatter(i, 1, &x, &y, log);
            },
            [&](std::size_t i, double x, double y) {
                map.scatter(i, 1, &x, &y, log);
            });
    }
    StridedLoader<B::lanes> loader{&map};
    StridedWriterS1<B> s1{&map, log};
    StridedWriterS2<B> s2{&map, log, m};
    return extract_blocks<B>(m, a, s1, s2, loader, &map);
}

}  // namespace vqhull::detail

#endif  // VQHULL_SRC_EXTRACT_CORE_HPP

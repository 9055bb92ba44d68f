#ifndef VQHULL_SRC_KERNELS_HPP
#define VQHULL_SRC_KERNELS_HPP

#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>

#include "vqhull/config.hpp"
#include "vqhull/extract.hpp"
#include "vqhull/geometry.hpp"

namespace vqhull::detail {

/// Classification constants of one directed edge, precomputed once per pass.
/// The scalar and vector paths evaluate the same expressions on these fields;
/// the build disables FP contraction so both round identically.
struct EdgeFrame {
    double px, py, qx, qy;  // endpoints
    double dx, dy;          // q - p, for the lateral offset

    static EdgeFrame make(const DirectedEdge& e) {
        return {e.p.x, e.p.y, e.q.x, e.q.y, e.q.x - e.p.x, e.q.y - e.p.y};
    }
};

inline bool frame_left_of(double ux, double uy, const EdgeFrame& e) {
    return (e.px - ux) * (e.qy - uy) > (e.py - uy) * (e.qx - ux);
}

inline double frame_offset(double ux, double uy, const EdgeFrame& e) {
    return e.dy * ux - e.dx * uy;
}

/// Canonical farthest preference: the strictly smaller lateral offset wins;
/// an exact offset tie falls to the lexicographically smaller point. A tied
/// set is collinear along the edge direction, so the lexicographic minimum is
/// a segment endpoint and hence a genuine hull vertex; a mid-segment pick
/// would leak a collinear point into the hull output.
inline bool prefer_farthest(double cand_off, double cand_x, double cand_y,
                            double inc_off, double inc_x, double inc_y) {
    if (cand_off != inc_off) return cand_off < inc_off;
    return cand_x < inc_x || (cand_x == inc_x && cand_y < inc_y);
}

/// Permutation table for the portable compression: row m lists the set lanes
/// of mask m in ascending order, exactly the order the hardware compress
/// instruction emits.
template <int D>
struct CompressTable {
    unsigned char idx[std::size_t(1) << D][D];

    constexpr CompressTable() : idx{} {
        for (unsigned m = 0; m < (1u << D); ++m) {
            int k = 0;
            for (int i = 0; i < D; ++i)
                if (m >> i & 1u) idx[m][k++] = static_cast<unsigned char>(i);
        }
    }
};

template <int D>
inline constexpr CompressTable<D> kCompressTable{};

/// Scalar/table fallback backend; lane-for-lane identical to the hardware
/// compression path.
template <int D>
struct PortableBackend {
    static constexpr int lanes = D;

    struct Reg {
        double v[D];
    };

    static Reg load(const double* p) {
        Reg r;
        for (int i = 0; i < D; ++i) r.v[i] = p[i];
        return r;
    }

    static void classify(const Reg& x, const Reg& y, const EdgeFrame& a,
                         const EdgeFrame& b, unsigned& mask_a,
                         unsigned& mask_b) {
        unsigned ma = 0, mb = 0;
        for (int i = 0; i < D; ++i) {
            ma |= unsigned(frame_left_of(x.v[i], y.v[i], a)) << i;
            mb |= unsigned(frame_left_of(x.v[i], y.v[i], b)) << i;
        }
        mask_a = ma;
        mask_b = mb & ~ma;  // a lane never belongs to both sides
    }

    static void compress_store(double* dst, unsigned mask, const Reg& src) {
        // Exactly popcount(mask) slots may be written; the destination's tail
        // is not ours to touch.
        const unsigned char* row = kCompressTable<D>.idx[mask];
        const int k = std::popcount(mask);
        for (int j = 0; j < k; ++j) dst[j] = src.v[row[j]];
    }

    /// Per-lane farthest tracking: a lane's first candidate installs, later
    /// candidates replace only when strictly farther (smaller lateral offset).
    struct Farthest {
        double off[D];
        double px[D];
        double py[D];
        unsigned seen = 0;
        EdgeFrame frame;

        explicit Farthest(const EdgeFrame& e) : frame(e) {
            for (int i = 0; i < D; ++i) off[i] = px[i] = py[i] = 0.0;
        }

        void update(const Reg& x, const Reg& y, unsigned mask) {
            for (int i = 0; i < D; ++i) {
                if (!(mask >> i & 1u)) continue;
                const double g = frame_offset(x.v[i], y.v[i], frame);
                if (!(seen >> i & 1u) ||
                    prefer_farthest(g, x.v[i], y.v[i], off[i], px[i], py[i])) {
                    off[i] = g;
                    px[i] = x.v[i];
                    py[i] = y.v[i];
                    seen |= 1u << i;
                }
            }
        }

        std::optional<Point> reduce() const {
            std::optional<Point> best;
            double best_off = 0.0;
            for (int i = 0; i < D; ++i) {
                if (!(seen >> i & 1u)) continue;
                if (!best || prefer_farthest(off[i], px[i], py[i], best_off,
                                             best->x, best->y)) {
                    best = Point{px[i], py[i]};
                    best_off = off[i];
                }
            }
            return best;
        }
    };
};

struct StridedSpec;  // defined in extract_core.hpp

/// Arguments shared by every extraction entry point.
struct ExtractArgs {
    EdgeFrame edge_a;
    EdgeFrame edge_b;
    DirectedEdge raw_a;
    DirectedEdge raw_b;
    bool write_combining = false;
    ExtractObserver* observer = nullptr;
    TrafficCounters* traffic = nullptr;
};

#ifdef VQHULL_HAVE_AVX512
// Entry points of the AVX-512 translation unit (compiled with the AVX-512
// flags and dispatched only after a runtime CPU check).
ExtractOutcome extract_contiguous_avx512(int d, double* xs, double* ys,
                                         std::size_t n, const ExtractArgs& args);
ExtractOutcome extract_strided_avx512(int d, double* xs, double* ys,
                                      const StridedSpec& spec,
                                      const ExtractArgs& args,
                                      BlockWriteLogger* logger);
std::size_t compress_select_avx512(int d, const double* xs, const double* ys,
                                   unsigned mask, double* out_xs,
                                   double* out_ys);
void classify_block_avx512(int d, const double* xs, const double* ys,
                           const EdgeFrame& a, const EdgeFrame& b,
                           unsigned* mask_a, unsigned* mask_b);
#endif

ExtractArgs make_args(const DirectedEdge& a, const DirectedEdge& b,
                      const Config& cfg);

ExtractOutcome extract_contiguous_portable(int d, double* xs, double* ys,
                                           std::size_t n,
                                           const ExtractArgs& args);
ExtractOutcome extract_strided_portable(int d, double* xs, double* ys,
                                        const StridedSpec& spec,
                                        const ExtractArgs& args,
                                        BlockWriteLogger* logger);

/// True when the dispatcher should take the AVX-512 path.
bool use_avx512(SimdMode simd);

}  // namespace vqhull::detail

#endif  // VQHULL_SRC_KERNELS_HPP

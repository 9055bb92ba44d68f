// AVX-512 backends. This translation unit is the only one compiled with the
// AVX-512 flags; callers reach it through the runtime-dispatched entry points
// declared in kernels.hpp.

#include <immintrin.h>

#include "extract_core.hpp"
#include "kernels.hpp"

namespace vqhull::detail {

namespace {

// The vector expressions mirror frame_left_of / frame_offset term for term;
// contraction is disabled build-wide, so lanes round exactly like the scalar
// path.

struct Avx512x8 {
    static constexpr int lanes = 8;
    using Reg = __m512d;

    static Reg load(const double* p) { return _mm512_loadu_pd(p); }

    static void classify(Reg x, Reg y, const EdgeFrame& a, const EdgeFrame& b,
                         unsigned& mask_a, unsigned& mask_b) {
        const __m512d lhs_a = _mm512_mul_pd(
            _mm512_sub_pd(_mm512_set1_pd(a.px), x),
            _mm512_sub_pd(_mm512_set1_pd(a.qy), y));
        const __m512d rhs_a = _mm512_mul_pd(
            _mm512_sub_pd(_mm512_set1_pd(a.py), y),
            _mm512_sub_pd(_mm512_set1_pd(a.qx), x));
        const __m512d lhs_b = _mm512_mul_pd(
            _mm512_sub_pd(_mm512_set1_pd(b.px), x),
            _mm512_sub_pd(_mm512_set1_pd(b.qy), y));
        const __m512d rhs_b = _mm512_mul_pd(
            _mm512_sub_pd(_mm512_set1_pd(b.py), y),
            _mm512_sub_pd(_mm512_set1_pd(b.qx), x));
        const unsigned ma = _mm512_cmp_pd_mask(lhs_a, rhs_a, _CMP_GT_OQ);
        const unsigned mb = _mm512_cmp_pd_mask(lhs_b, rhs_b, _CMP_GT_OQ);
        mask_a = ma;
        mask_b = mb & ~ma;
    }

    static void compress_store(double* dst, unsigned mask, Reg src) {
        _mm512_mask_compressstoreu_pd(dst, __mmask8(mask), src);
    }

    struct Farthest {
        __m512d off = _mm512_setzero_pd();
        __m512d px = _mm512_setzero_pd();
        __m512d py = _mm512_setzero_pd();
        unsigned seen = 0;
        __m512d dx, dy;

        explicit Farthest(const EdgeFrame& e)
            : dx(_mm512_set1_pd(e.dx)), dy(_mm512_set1_pd(e.dy)) {}

        void update(Reg x, Reg y, unsigned mask) {
            const __m512d g = _mm512_sub_pd(_mm512_mul_pd(dy, x),
                                            _mm512_mul_pd(dx, y));
            const unsigned lt = _mm512_cmp_pd_mask(g, off, _CMP_LT_OQ);
            const unsigned eq = _mm512_cmp_pd_mask(g, off, _CMP_EQ_OQ);
            const unsigned ltx = _mm512_cmp_pd_mask(x, px, _CMP_LT_OQ);
            const unsigned eqx = _mm512_cmp_pd_mask(x, px, _CMP_EQ_OQ);
            const unsigned lty = _mm512_cmp_pd_mask(y, py, _CMP_LT_OQ);
            const unsigned lex = ltx | (eqx & lty);
            const unsigned install = mask & (lt | (eq & lex) | unsigned(~seen));
            const __mmask8 m = __mmask8(install);
            off = _mm512_mask_blend_pd(m, off, g);
            px = _mm512_mask_blend_pd(m, px, x);
            py = _mm512_mask_blend_pd(m, py, y);
            seen |= mask;
        }

        std::optional<Point> reduce() const {
            alignas(64) double go[8], xo[8], yo[8];
            _mm512_store_pd(go, off);
            _mm512_store_pd(xo, px);
            _mm512_store_pd(yo, py);
            std::optional<Point> best;
            double best_off = 0.0;
            for (int i = 0; i < 8; ++i) {
                if (!(seen >> i & 1u)) continue;
                if (!best || prefer_farthest(go[i], xo[i], yo[i], best_off,
                                             best->x, best->y)) {
                    best = Point{xo[i], yo[i]};
                    best_off = go[i];
                }
            }
            return best;
        }
    };
};

struct Avx512x4 {
    static constexpr int lanes = 4;
    using Reg = __m256d;

    static Reg load(const double* p) { return _mm256_loadu_pd(p); }

    static void classify(Reg x, Reg y, const EdgeFrame& a, const EdgeFrame& b,
                         unsigned& mask_a, unsigned& mask_b) {
        const __m256d lhs_a = _mm256_mul_pd(
            _mm256_sub_pd(_mm256_set1_pd(a.px), x),
            _mm256_sub_pd(_mm256_set1_pd(a.qy), y));
        const __m256d rhs_a = _mm256_mul_pd(
            _mm256_sub_pd(_mm256_set1_pd(a.py), y),
            _mm256_sub_pd(_mm256_set1_pd(a.qx), x));
        const __m256d lhs_b = _mm256_mul_pd(
            _mm256_sub_pd(_mm256_set1_pd(b.px), x),
            _mm256_sub_pd(_mm256_set1_pd(b.qy), y));
        const __m256d rhs_b = _mm256_mul_pd(
            _mm256_sub_pd(_mm256_set1_pd(b.py), y),
            _mm256_sub_pd(_mm256_set1_pd(b.qx), x));
        const unsigned ma = _mm256_cmp_pd_mask(lhs_a, rhs_a, _CMP_GT_OQ);
        const unsigned mb = _mm256_cmp_pd_mask(lhs_b, rhs_b, _CMP_GT_OQ);
        mask_a = ma;
        mask_b = mb & ~ma;
    }

    static void compress_store(double* dst, unsigned mask, Reg src) {
        _mm256_mask_compressstoreu_pd(dst, __mmask8(mask), src);
    }

    struct Farthest {
        __m256d off = _mm256_setzero_pd();
        __m256d px = _mm256_setzero_pd();
        __m256d py = _mm256_setzero_pd();
        unsigned seen = 0;
        __m256d dx, dy;

        explicit Farthest(const EdgeFrame& e)
            : dx(_mm256_set1_pd(e.dx)), dy(_mm256_set1_pd(e.dy)) {}

        void update(Reg x, Reg y, unsigned mask) {
            const __m256d g = _mm256_sub_pd(_mm256_mul_pd(dy, x),
                                            _mm256_mul_pd(dx, y));
            const unsigned lt = _mm256_cmp_pd_mask(g, off, _CMP_LT_OQ);
            const unsigned eq = _mm256_cmp_pd_mask(g, off, _CMP_EQ_OQ);
            const unsigned ltx = _mm256_cmp_pd_mask(x, px, _CMP_LT_OQ);
            const unsigned eqx = _mm256_cmp_pd_mask(x, px, _CMP_EQ_OQ);
            const unsigned lty = _mm256_cmp_pd_mask(y, py, _CMP_LT_OQ);
            const unsigned lex = ltx | (eqx & lty);
            const __mmask8 m =
                __mmask8(mask & (lt | (eq & lex) | unsigned(~seen)));
            off = _mm256_mask_blend_pd(m, off, g);
            px = _mm256_mask_blend_pd(m, px, x);
            py = _mm256_mask_blend_pd(m, py, y);
            seen |= mask;
        }

        std::optional<Point> reduce() const {
            alignas(32) double go[4], xo[4], yo[4];
            _mm256_store_pd(go, off);
            _mm256_store_pd(xo, px);
            _mm256_store_pd(yo, py);
            std::optional<Point> best;
            double best_off = 0.0;
            for (int i = 0; i < 4; ++i) {
                if (!(seen >> i & 1u)) continue;
                if (!best || prefer_farthest(go[i], xo[i], yo[i], best_off,
                                             best->x, best->y)) {
                    best = Point{xo[i], yo[i]};
                    best_off = go[i];
                }
            }
            return best;
        }
    };
};

struct Avx512x2 {
    static constexpr int lanes = 2;
    using Reg = __m128d;

    static Reg load(const double* p) { return _mm_loadu_pd(p); }

    static void classify(Reg x, Reg y, const EdgeFrame& a, const EdgeFrame& b,
                         unsigned& mask_a, unsigned& mask_b) {
        const __m128d lhs_a = _mm_mul_pd(_mm_sub_pd(_mm_set1_pd(a.px), x),
                                         _mm_sub_pd(_mm_set1_pd(a.qy), y));
        const __m128d rhs_a = _mm_mul_pd(_mm_sub_pd(_mm_set1_pd(a.py), y),
                                         _mm_sub_pd(_mm_set1_pd(a.qx), x));
        const __m128d lhs_b = _mm_mul_pd(_mm_sub_pd(_mm_set1_pd(b.px), x),
                                         _mm_sub_pd(_mm_set1_pd(b.qy), y));
        const __m128d rhs_b = _mm_mul_pd(_mm_sub_pd(_mm_set1_pd(b.py), y),
                                         _mm_sub_pd(_mm_set1_pd(b.qx), x));
        const unsigned ma = _mm_cmp_pd_mask(lhs_a, rhs_a, _CMP_GT_OQ);
        const unsigned mb = _mm_cmp_pd_mask(lhs_b, rhs_b, _CMP_GT_OQ);
        mask_a = ma;
        mask_b = mb & ~ma;
    }

    static void compress_store(double* dst, unsigned mask, Reg src) {
        _mm_mask_compressstoreu_pd(dst, __mmask8(mask), src);
    }

    struct Farthest {
        __m128d off = _mm_setzero_pd();
        __m128d px = _mm_setzero_pd();
        __m128d py = _mm_setzero_pd();
        unsigned seen = 0;
        __m128d dx, dy;

        explicit Farthest(const EdgeFrame& e)
            : dx(_mm_set1_pd(e.dx)), dy(_mm_set1_pd(e.dy)) {}

        void update(Reg x, Reg y, unsigned mask) {
            const __m128d g = _mm_sub_pd(_mm_mul_pd(dy, x), _mm_mul_pd(dx, y));
            const unsigned lt = _mm_cmp_pd_mask(g, off, _CMP_LT_OQ);
            const unsigned eq = _mm_cmp_pd_mask(g, off, _CMP_EQ_OQ);
            const unsigned ltx = _mm_cmp_pd_mask(x, px, _CMP_LT_OQ);
            const unsigned eqx = _mm_cmp_pd_mask(x, px, _CMP_EQ_OQ);
            const unsigned lty = _mm_cmp_pd_mask(y, py, _CMP_LT_OQ);
            const unsigned lex = ltx | (eqx & lty);
            const __mmask8 m =
                __mmask8(mask & (lt | (eq & lex) | unsigned(~seen)));
            off = _mm_mask_blend_pd(m, off, g);
            px = _mm_mask_blend_pd(m, px, x);
            py = _mm_mask_blend_pd(m, py, y);
            seen |= mask;
        }

        std::optional<Point> reduce() const {
            alignas(16) double go[2], xo[2], yo[2];
            _mm_store_pd(go, off);
            _mm_store_pd(xo, px);
            _mm_store_pd(yo, py);
            std::optional<Point> best;
            double best_off = 0.0;
            for (int i = 0; i < 2; ++i) {
                if (!(seen >> i & 1u)) continue;
                if (!best || prefer_farthest(go[i], xo[i], yo[i], best_off,
                                             best->x, best->y)) {
                    best = Point{xo[i], yo[i]};
                    best_off = go[i];
                }
            }
            return best;
        }
    };
};

}  // namespace

ExtractOutcome extract_contiguous_avx512(int d, double* xs, double* ys,
                                         std::size_t n,
                                         const ExtractArgs& args) {
    switch (d) {
        case 2:
            return extract_contiguous<Avx512x2>(xs, ys, n, args);
        case 4:
            return extract_contiguous<Avx512x4>(xs, ys, n, args);
        default:
            return extract_contiguous<Avx512x8>(xs, ys, n, args);
    }
}

ExtractOutcome extract_strided_avx512(int d, double* xs, double* ys,
                                      const StridedSpec& spec,
                                      const ExtractArgs& args,
                                      BlockWriteLogger* logger) {
    switch (d) {
        case 2:
            return extract_strided<Avx512x2>(xs, ys, spec, args, logger);
        case 4:
            return extract_strided<Avx512x4>(xs, ys, spec, args, logger);
        default:
            return extract_strided<Avx512x8>(xs, ys, spec, args, logger);
    }
}

std::size_t compress_select_avx512(int d, const double* xs, const double* ys,
                                   unsigned mask, double* out_xs,
                                   double* out_ys) {
    switch (d) {
        case 2:
            Avx512x2::compress_store(out_xs, mask, Avx512x2::load(xs));
            Avx512x2::compress_store(out_ys, mask, Avx512x2::load(ys));
            break;
        case 4:
            Avx512x4::compress_store(out_xs, mask, Avx512x4::load(xs));
            Avx512x4::compress_store(out_ys, mask, Avx512x4::load(ys));
            break;
        default:
            Avx512x8::compress_store(out_xs, mask, Avx512x8::load(xs));
            Avx512x8::compress_store(out_ys, mask, Avx512x8::load(ys));
            break;
    }
    return std::size_t(std::popcount(mask));
}

void classify_block_avx512(int d, const double* xs, const double* ys,
                           const EdgeFrame& a, const EdgeFrame& b,
                           unsigned* mask_a, unsigned* mask_b) {
    switch (d) {
        case 2:
            Avx512x2::classify(Avx512x2::load(xs), Avx512x2::load(ys), a, b,
                               *mask_a, *mask_b);
            break;
        case 4:
            Avx512x4::classify(Avx512x4::load(xs), Avx512x4::load(ys), a, b,
                               *mask_a, *mask_b);
            break;
        default:
            Avx512x8::classify(Avx512x8::load(xs), Avx512x8::load(ys), a, b,
                               *mask_a, *mask_b);
            break;
    }
}

}  // namespace vqhull::detail

#include "vqhull/extract.hpp"

#include <stdexcept>

#include "extract_core.hpp"
#include "kernels.hpp"

namespace vqhull {

namespace detail {

bool use_avx512(SimdMode simd) {
    switch (simd) {
        case SimdMode::Portable:
            return false;
        case SimdMode::Avx512:
            if (!avx512_available())
                throw std::runtime_error(
                    "AVX-512 backend requested but not available on this "
                    "build/CPU");
            return true;
        case SimdMode::Auto:
            return avx512_available();
    }
    return false;
}

ExtractOutcome extract_contiguous_portable(int d, double* xs, double* ys,
                                           std::size_t n,
                                           const ExtractArgs& args) {
    switch (d) {
        case 2:
            return extract_contiguous<PortableBackend<2>>(xs, ys, n, args);
        case 4:
            return extract_contiguous<PortableBackend<4>>(xs, ys, n, args);
        case 8:
            return extract_contiguous<PortableBackend<8>>(xs, ys, n, args);
        default:
            throw std::invalid_argument("lane width must be 2, 4 or 8");
    }
}

ExtractOutcome extract_strided_portable(int d, double* xs, double* ys,
                                        const StridedSpec& spec,
                                        const ExtractArgs& args,
                                        BlockWriteLogger* logger) {
    switch (d) {
        case 2:
            return extract_strided<PortableBackend<2>>(xs, ys, spec, args, logger);
        case 4:
            return extract_strided<PortableBackend<4>>(xs, ys, spec, args, logger);
        case 8:
            return extract_strided<PortableBackend<8>>(xs, ys, spec, args, logger);
        default:
            throw std::invalid_argument("lane width must be 2, 4 or 8");
    }
}

ExtractArgs make_args(const DirectedEdge& a, const DirectedEdge& b,
                      const Config& cfg) {
    ExtractArgs args;
    args.edge_a = EdgeFrame::make(a);
    args.edge_b = EdgeFrame::make(b);
    args.raw_a = a;
    args.raw_b = b;
    args.write_combining = cfg.write_combining;
    args.observer = cfg.observer;
    args.traffic = cfg.traffic;
    return args;
}

}  // namespace detail

std::size_t compress_select(const double* xs_block, const double* ys_block,
                            unsigned mask, LaneConfig lanes, SimdMode simd,
                            double* out_xs, double* out_ys) {
    if (!valid_lane_width(lanes.d))
        throw std::invalid_argument("lane width must be 2, 4 or 8");
    mask &= (1u << lanes.d) - 1u;
#ifdef VQHULL_HAVE_AVX512
    if (detail::use_avx512(simd))
        return detail::compress_select_avx512(lanes.d, xs_block, ys_block, mask,
                                              out_xs, out_ys);
#else
    (void)detail::use_avx512(simd);  // still rejects a forced AVX-512 request
#endif
    switch (lanes.d) {
        case 2: {
            auto x = detail::PortableBackend<2>::load(xs_block);
            auto y = detail::PortableBackend<2>::load(ys_block);
            detail::PortableBackend<2>::compress_store(out_xs, mask, x);
            detail::PortableBackend<2>::compress_store(out_ys, mask, y);
            break;
        }
        case 4: {
            auto x = detail::PortableBackend<4>::load(xs_block);
            auto y = detail::PortableBackend<4>::load(ys_block);
            detail::PortableBackend<4>::compress_store(out_xs, mask, x);
            detail::PortableBackend<4>::compress_store(out_ys, mask, y);
            break;
        }
        default: {
            auto x = detail::PortableBackend<8>::load(xs_block);
            auto y = detail::PortableBackend<8>::load(ys_block);
            detail::PortableBackend<8>::compress_store(out_xs, mask, x);
            detail::PortableBackend<8>::compress_store(out_ys, mask, y);
            break;
        }
    }
    return std::size_t(std::popcount(mask));
}

void classify_block(const double* xs_block, const double* ys_block,
                    LaneConfig lanes, SimdMode simd, const DirectedEdge& edge_a,
                    const DirectedEdge& edge_b, unsigned* mask_a,
                    unsigned* mask_b) {
    if (!valid_lane_width(lanes.d))
        throw std::invalid_argument("lane width must be 2, 4 or 8");
    const auto fa = detail::EdgeFrame::make(edge_a);
    const auto fb = detail::EdgeFrame::make(edge_b);
#ifdef VQHULL_HAVE_AVX512
    if (detail::use_avx512(simd)) {
        detail::classify_block_avx512(lanes.d, xs_block, ys_block, fa, fb,
                                      mask_a, mask_b);
        return;
    }
#else
    (void)detail::use_avx512(simd);
#endif
    switch (lanes.d) {
        case 2: {
            auto x = detail::PortableBackend<2>::load(xs_block);
            auto y = detail::PortableBackend<2>::load(ys_block);
            detail::PortableBackend<2>::classify(x, y, fa, fb, *mask_a, *mask_b);
            break;
        }
        case 4: {
            auto x = detail::PortableBackend<4>::load(xs_block);
            auto y = detail::PortableBackend<4>::load(ys_block);
            detail::PortableBackend<4>::classify(x, y, fa, fb, *mask_a, *mask_b);
            break;
        }
        default: {
            auto x = detail::PortableBackend<8>::load(xs_block);
            auto y = detail::PortableBackend<8>::load(ys_block);
            detail::PortableBackend<8>::classify(x, y, fa, fb, *mask_a, *mask_b);
            break;
        }
    }
}

ExtractOutcome extract_subsets(double* xs, double* ys, std::size_t n,
                               const DirectedEdge& edge_a,
                               const DirectedEdge& edge_b, const Config& cfg) {
    if (!valid_lane_width(cfg.lanes))
        throw std::invalid_argument("lane width must be 2, 4 or 8");
    const auto args = detail::make_args(edge_a, edge_b, cfg);
#ifdef VQHULL_HAVE_AVX512
    if (detail::use_avx512(cfg.simd))
        return detail::extract_contiguous_avx512(cfg.lanes, xs, ys, n, args);
#else
    (void)detail::use_avx512(cfg.simd);
#endif
    return detail::extract_contiguous_portable(cfg.lanes, xs, ys, n, args);
}

}  // namespace vqhull

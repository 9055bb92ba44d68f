#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "invariant_checker.hpp"
#include "oracles.hpp"
#include "vqhull/config.hpp"
#include "vqhull/extract.hpp"

using namespace vqhull;

namespace {

std::vector<SimdMode> backends_under_test() {
    std::vector<SimdMode> v{SimdMode::Portable};
    if (avx512_available()) v.push_back(SimdMode::Avx512);
    return v;
}

Config config_for(int lanes, SimdMode simd, bool staging = false) {
    Config cfg;
    cfg.lanes = lanes;
    cfg.simd = simd;
    cfg.write_combining = staging;
    return cfg;
}

void check_against_reference(PointSet pts, const DirectedEdge& a,
                             const DirectedEdge& b, const Config& cfg) {
    const std::size_t n = pts.size();
    const auto ref = oracles::reference_extract(pts.xs(), pts.ys(), n, a, b);
    const ExtractOutcome out = extract_subsets(pts.xs(), pts.ys(), n, a, b, cfg);

    REQUIRE(out.w_l == ref.s1.size());
    REQUIRE(out.w_r == n - ref.s2.size());
    CHECK(oracles::same_multiset(oracles::slice(pts.xs(), pts.ys(), 0, out.w_l),
                                 ref.s1));
    CHECK(oracles::same_multiset(oracles::slice(pts.xs(), pts.ys(), out.w_r, n),
                                 ref.s2));
    // Settled points satisfy their side's predicate.
    for (std::size_t i = 0; i < out.w_l; ++i)
        CHECK(is_left_of(pts[i], a));
    for (std::size_t i = out.w_r; i < n; ++i)
        CHECK(is_left_of(pts[i], b));

    REQUIRE(out.r1.has_value() == (out.w_l > 0));
    REQUIRE(out.r2.has_value() == (out.w_r < n));
    if (out.r1) {
        for (const Point& u : ref.s1) CHECK_FALSE(is_farther(u, *out.r1, a));
    }
    if (out.r2) {
        for (const Point& u : ref.s2) CHECK_FALSE(is_farther(u, *out.r2, b));
    }
}

}  // namespace

TEST_CASE("compress_select matches the reference picture") {
    const double xs[4] = {10, 11, 12, 13};
    const double ys[4] = {20, 21, 22, 23};
    for (SimdMode simd : backends_under_test()) {
        CAPTURE(int(simd));
        double ox[4] = {-1, -1, -1, -1};
        double oy[4] = {-1, -1, -1, -1};
        // mask 0110 selects lanes 1 and 2, which land first and in order
        const std::size_t k =
            compress_select(xs, ys, 0b0110, LaneConfig{4}, simd, ox, oy);
        CHECK(k == 2);
        CHECK(ox[0] == 11);
        CHECK(ox[1] == 12);
        CHECK(oy[0] == 21);
        CHECK(oy[1] == 22);
        CHECK(ox[2] == -1);  // tail untouched
        CHECK(ox[3] == -1);

        double ax[4], ay[4];
        CHECK(compress_select(xs, ys, 0b1111, LaneConfig{4}, simd, ax, ay) == 4);
        for (int i = 0; i < 4; ++i) CHECK(ax[i] == xs[i]);

        double zx[4] = {7, 7, 7, 7}, zy[4] = {7, 7, 7, 7};
        CHECK(compress_select(xs, ys, 0, LaneConfig{4}, simd, zx, zy) == 0);
        CHECK(zx[0] == 7);
    }
}

TEST_CASE("portable and hardware compression are lane-for-lane identical") {
    if (!avx512_available()) return;
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> dist(-100, 100);
    for (int d : {2, 4, 8}) {
        for (unsigned mask = 0; mask < (1u << d); ++mask) {
            double xs[8], ys[8];
            for (int i = 0; i < d; ++i) {
                xs[i] = dist(rng);
                ys[i] = dist(rng);
            }
            double px[8], py[8], hx[8], hy[8];
            for (int i = 0; i < 8; ++i) {
                px[i] = hx[i] = 555.5;
                py[i] = hy[i] = 555.5;
            }
            const std::size_t kp = compress_select(
                xs, ys, mask, LaneConfig{d}, SimdMode::Portable, px, py);
            const std::size_t kh = compress_select(
                xs, ys, mask, LaneConfig{d}, SimdMode::Avx512, hx, hy);
            REQUIRE(kp == kh);
            for (int i = 0; i < d; ++i) {
                CHECK(px[i] == hx[i]);
                CHECK(py[i] == hy[i]);
            }
        }
    }
}

TEST_CASE("classify_block computes disjoint side masks") {
    const DirectedEdge east{{0, 0}, {1, 0}};
    const DirectedEdge west{{1, 0}, {0, 0}};
    const double xs[4] = {0, 0, 0.5, 0.2};
    const double ys[4] = {1, -1, 0, 3};
    for (SimdMode simd : backends_under_test()) {
        unsigned ma = 0, mb = 0;
        classify_block(xs, ys, LaneConfig{4}, simd, east, west, &ma, &mb);
        CHECK(ma == 0b1001);  // lanes 0 and 3 above the axis
        CHECK(mb == 0b0010);  // lane 1 below; lane 2 collinear, discarded
    }

    SUBCASE("collinear points select nothing") {
        const double cx[4] = {0, 1, 2, 3};
        const double cy[4] = {0, 0, 0, 0};
        unsigned ma = 9, mb = 9;
        classify_block(cx, cy, LaneConfig{4}, SimdMode::Portable, east, west,
                       &ma, &mb);
        CHECK(ma == 0);
        CHECK(mb == 0);
    }

    SUBCASE("a point left of both edges lands only in mask A") {
        const DirectedEdge up{{0, 0}, {1, 1}};
        const DirectedEdge down{{1, 1}, {2, 0}};
        const Point u{1, 3};
        REQUIRE(is_left_of(u, up));
        REQUIRE(is_left_of(u, down));
        const double bx[2] = {1, 0};
        const double by[2] = {3, -5};
        for (SimdMode simd : backends_under_test()) {
            unsigned ma = 0, mb = 0;
            classify_block(bx, by, LaneConfig{2}, simd, up, down, &ma, &mb);
            CHECK((ma & 1u) == 1u);
            CHECK((mb & 1u) == 0u);
        }
    }
}

TEST_CASE("extract_subsets trivial ranges") {
    const DirectedEdge a{{0, 0}, {4, 0}};
    const DirectedEdge b{{4, 0}, {0, 0}};
    Config cfg;

    SUBCASE("empty range") {
        const ExtractOutcome out = extract_subsets(nullptr, nullptr, 0, a, b, cfg);
        CHECK(out.w_l == 0);
        CHECK(out.w_r == 0);
        CHECK_FALSE(out.r1.has_value());
        CHECK_FALSE(out.r2.has_value());
    }

    SUBCASE("everything on one side") {
        PointSet pts;
        for (int i = 0; i < 50; ++i) pts.push_back({double(i % 7), double(1 + i % 3)});
        const std::size_t n = pts.size();
        const ExtractOutcome out =
            extract_subsets(pts.xs(), pts.ys(), n, a, b, cfg);
        CHECK(out.w_l == n);
        CHECK(out.w_r == n);
        CHECK(out.r1.has_value());
        CHECK_FALSE(out.r2.has_value());
    }
}

TEST_CASE("extract_subsets splits eight points around an edge") {
    const DirectedEdge a{{0, 0}, {4, 0}};
    const DirectedEdge b{{4, 0}, {0, 0}};
    PointSet pts;
    pts.push_back({1, 1});
    pts.push_back({2, -1});
    pts.push_back({3, 2});
    pts.push_back({1, 0});  // collinear, discarded
    pts.push_back({0.5, -3});
    pts.push_back({2, 4});
    pts.push_back({3, 0});  // collinear, discarded
    pts.push_back({2.5, -0.5});

    for (SimdMode simd : backends_under_test()) {
        for (int lanes : {2, 4, 8}) {
            PointSet work = pts;
            const ExtractOutcome out = extract_subsets(
                work.xs(), work.ys(), 8, a, b, config_for(lanes, simd));
            CHECK(out.w_l == 3);
            CHECK(out.w_r == 5);
            REQUIRE(out.r1.has_value());
            REQUIRE(out.r2.has_value());
            CHECK(*out.r1 == Point{2, 4});
            CHECK(*out.r2 == Point{0.5, -3});
            check_against_reference(pts, a, b, config_for(lanes, simd));
        }
    }
}

TEST_CASE("extract_subsets equals the scan reference on random inputs") {
    std::mt19937_64 rng(20240502);
    const DirectedEdge a{{-900, -11}, {850, 17}};
    const DirectedEdge b{{850, 17}, {-900, -11}};
    for (int iter = 0; iter < 120; ++iter) {
        const std::size_t n = rng() % 4097;
        const PointSet pts = oracles::random_int_points(rng, n, -1000, 1000);
        for (SimdMode simd : backends_under_test()) {
            for (int lanes : {2, 4, 8}) {
                check_against_reference(pts, a, b, config_for(lanes, simd));
            }
        }
    }
}

TEST_CASE("skew edges, duplicates and tiny ranges match the reference") {
    std::mt19937_64 rng(555);
    for (int iter = 0; iter < 300; ++iter) {
        const std::size_t n = rng() % 40;  // exercises the scalar fallback
        PointSet pts = oracles::random_int_points(rng, n, -6, 6);  // many dups
        const Point p{double(std::int64_t(rng() % 13)) - 6.0,
                      double(std::int64_t(rng() % 13)) - 6.0};
        const Point q{double(std::int64_t(rng() % 13)) - 6.0,
                      double(std::int64_t(rng() % 13)) - 6.0};
        const DirectedEdge a{p, q};
        const DirectedEdge b{q, p};
        for (int lanes : {2, 4, 8})
            check_against_reference(pts, a, b,
                                    config_for(lanes, SimdMode::Portable));
    }
}

TEST_CASE("write combining is byte-identical to direct stores") {
    std::mt19937_64 rng(808);
    const DirectedEdge a{{-500, 3}, {500, -2}};
    const DirectedEdge b{{500, -2}, {-500, 3}};
    for (int iter = 0; iter < 40; ++iter) {
        const std::size_t n = 1 + rng() % 5000;
        const PointSet pts = oracles::random_int_points(rng, n, -700, 700);
        for (SimdMode simd : backends_under_test()) {
            for (int lanes : {2, 4, 8}) {
                PointSet direct = pts;
                PointSet staged = pts;
                const ExtractOutcome o1 =
                    extract_subsets(direct.xs(), direct.ys(), n, a, b,
                                    config_for(lanes, simd, false));
                const ExtractOutcome o2 =
                    extract_subsets(staged.xs(), staged.ys(), n, a, b,
                                    config_for(lanes, simd, true));
                REQUIRE(o1.w_l == o2.w_l);
                REQUIRE(o1.w_r == o2.w_r);
                CHECK(o1.r1 == o2.r1);
                CHECK(o1.r2 == o2.r2);
                for (std::size_t i = 0; i < o1.w_l; ++i) {
                    REQUIRE(direct[i] == staged[i]);
                }
                for (std::size_t i = o1.w_r; i < n; ++i) {
                    REQUIRE(direct[i] == staged[i]);
                }
            }
        }
    }
}

TEST_CASE("portable and hardware extraction produce identical arrays") {
    if (!avx512_available()) return;
    std::mt19937_64 rng(31337);
    const DirectedEdge a{{-512, 9}, {512, -9}};
    const DirectedEdge b{{512, -9}, {-512, 9}};
    for (int iter = 0; iter < 30; ++iter) {
        const std::size_t n = rng() % 3000;
        const PointSet pts = oracles::random_int_points(rng, n, -600, 600);
        for (int lanes : {2, 4, 8}) {
            PointSet sw = pts;
            PointSet hw = pts;
            const ExtractOutcome so = extract_subsets(
                sw.xs(), sw.ys(), n, a, b, config_for(lanes, SimdMode::Portable));
            const ExtractOutcome ho = extract_subsets(
                hw.xs(), hw.ys(), n, a, b, config_for(lanes, SimdMode::Avx512));
            REQUIRE(so.w_l == ho.w_l);
            REQUIRE(so.w_r == ho.w_r);
            CHECK(so.r1 == ho.r1);
            CHECK(so.r2 == ho.r2);
            for (std::size_t i = 0; i < so.w_l; ++i) REQUIRE(sw[i] == hw[i]);
            for (std::size_t i = so.w_r; i < n; ++i) REQUIRE(sw[i] == hw[i]);
        }
    }
}

TEST_CASE("loop invariant holds on every iteration") {
    std::mt19937_64 rng(2718);
    const DirectedEdge a{{-300, 2}, {300, 1}};
    const DirectedEdge b{{300, 1}, {-300, 2}};
    std::uint64_t total_iterations = 0;
    for (int iter = 0; iter < 60; ++iter) {
        const std::size_t n = rng() % 600;
        const PointSet pts = oracles::random_int_points(rng, n, -400, 400);
        for (int lanes : {2, 4, 8}) {
            for (SimdMode simd : backends_under_test()) {
                testing_support::InvariantChecker checker(true);
                checker.set_original(pts);
                Config cfg = config_for(lanes, simd);
                cfg.observer = &checker;
                PointSet work = pts;
                extract_subsets(work.xs(), work.ys(), n, a, b, cfg);
                INFO(checker.first_violation());
                CHECK(checker.violations() == 0);
                total_iterations += checker.iterations();
            }
        }
    }
    CHECK(total_iterations > 1000);
}

TEST_CASE("conservation of points across the pass") {
    std::mt19937_64 rng(1618);
    const DirectedEdge a{{-100, 7}, {100, -3}};
    const DirectedEdge b{{100, -3}, {-100, 7}};
    for (int iter = 0; iter < 80; ++iter) {
        const std::size_t n = rng() % 2048;
        PointSet pts = oracles::random_int_points(rng, n, -150, 150);
        const auto ref = oracles::reference_extract(pts.xs(), pts.ys(), n, a, b);
        const ExtractOutcome out =
            extract_subsets(pts.xs(), pts.ys(), n, a, b, Config{});
        const std::size_t discarded = n - ref.s1.size() - ref.s2.size();
        CHECK(out.w_l + (n - out.w_r) + discarded == n);
    }
}

TEST_CASE("lane width must be 2, 4 or 8") {
    Config cfg;
    cfg.lanes = 3;
    double x = 0, y = 0;
    CHECK_THROWS_AS(
        extract_subsets(&x, &y, 1, {{0, 0}, {1, 0}}, {{1, 0}, {0, 0}}, cfg),
        std::invalid_argument);
}

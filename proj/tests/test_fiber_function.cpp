#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "fiberlp/fiber_function.hpp"
#include "oracles.hpp"

using namespace fiberlp;

namespace {

GridPtr unit_grid(std::size_t n) {
    return std::make_shared<GridMeasure>(GridMeasure::interval(0.0, 1.0, n));
}

} // namespace

TEST_CASE("lp norm of the constant 1 on [0,1] is 1 for every p") {
    const GridPtr grid = unit_grid(5);
    for (double p : {1.0, 2.0, 3.0, 2.5}) {
        const FiberFunction one = FiberFunction::constant(grid, {cplx{1.0}}, p);
        CHECK(lp_fiber_norm(one) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("extrapolation-mode norm of 1 under m(s) = -(1+s) at p = 2") {
    // closed form: int_0^1 (1+s)^{-2} ds = 1/2, so the norm is sqrt(1/2)
    const GridPtr grid = unit_grid(101);
    const auto bundle =
        build_bundle_ptr(ScalarPolyFamily{{cplx{-1.0}, cplx{-1.0}}}, grid);
    const FiberFunction one =
        FiberFunction::constant(grid, {cplx{1.0}}, 2.0, NormMode::extrapolation);
    const double norm = lp_fiber_norm(one, bundle.get());
    CHECK(std::abs(norm - std::sqrt(0.5)) <= 1e-4);
    // and it agrees tightly with the discrete trapezoid oracle on the same nodes
    const double discrete = std::sqrt(oracles::trapezoid_uniform(
        0.0, 1.0, 101, [](double s) { return 1.0 / ((1.0 + s) * (1.0 + s)); }));
    CHECK(std::abs(norm - discrete) <= 1e-13);
}

TEST_CASE("lp norm of zero is zero and detects nonzero") {
    const GridPtr grid = unit_grid(9);
    CHECK(lp_fiber_norm(FiberFunction(grid, 3)) == 0.0);
    FiberFunction f(grid, 3);
    f.set_node_value(4, {cplx{0.0}, cplx{1e-30}, cplx{0.0}});
    CHECK(lp_fiber_norm(f) > 0.0);
}

TEST_CASE("lp norm axioms on random pairs") {
    SplitMix64 rng(606);
    const GridPtr grid = unit_grid(33);
    for (double p : {1.0, 2.0, 3.0}) {
        for (int k = 0; k < 100; ++k) {
            FiberFunction f(grid, 2, p), g(grid, 2, p);
            for (auto& v : f.values()) v = rng.unit_square();
            for (auto& v : g.values()) v = rng.unit_square();
            CHECK(lp_fiber_norm(f + g) <= lp_fiber_norm(f) + lp_fiber_norm(g) + 1e-12);
            const cplx alpha = rng.unit_square();
            CHECK(std::abs(lp_fiber_norm(alpha * f) - std::abs(alpha) * lp_fiber_norm(f)) <= 1e-12);
        }
    }
}

TEST_CASE("simple approximation error on lattice values is zero") {
    const GridPtr grid = unit_grid(9);
    const FiberFunction half = FiberFunction::constant(grid, {cplx{0.5}}, 2.0);
    for (int level : {1, 4, 10}) {
        const SimpleApproximation approx = simple_approximation(half, level);
        CHECK(approx.error == 0.0);
        CHECK(approx.simple.part_count() == 1); // adjacent equal values merge
    }
}

TEST_CASE("simple approximation of f(s) = s obeys the dyadic bound") {
    const GridPtr grid = unit_grid(101);
    const FiberFunction f =
        FiberFunction::sample(grid, 1, [](double s) { return cvector{cplx{s}}; }, 2.0);
    double prev = 1e300;
    for (int level = 4; level <= 20; ++level) {
        const SimpleApproximation approx = simple_approximation(f, level);
        CHECK(approx.error <= std::ldexp(1.0, -level));
        CHECK(approx.error <= prev); // non-increasing in the level
        prev = approx.error;
    }
}

TEST_CASE("simple approximation of f(s) = (s, 1-s) obeys the sqrt(2) bound") {
    const GridPtr grid = unit_grid(64);
    const FiberFunction f = FiberFunction::sample(
        grid, 2, [](double s) { return cvector{cplx{s}, cplx{1.0 - s}}; }, 2.0);
    for (int level = 4; level <= 16; ++level)
        CHECK(simple_approximation(f, level).error <= std::sqrt(2.0) * std::ldexp(1.0, -level));
}

TEST_CASE("almost-everywhere equality honors zero-weight nodes") {
    const auto grid = std::make_shared<GridMeasure>(GridMeasure::custom(
        Topology::interval, {0.0, 0.25, 0.5, 0.75, 1.0}, {0.25, 0.25, 0.0, 0.25, 0.25}, 1.0));
    const FiberFunction f = FiberFunction::constant(grid, {cplx{1.0}}, 2.0);
    CHECK(almost_everywhere_equal(f, f, 0.0));

    FiberFunction shifted = f;
    for (auto& v : shifted.values()) v += 1.0;
    CHECK(!almost_everywhere_equal(f, shifted, 1e-12));

    // perturbation at the zero-weight node only: still equal a.e.
    FiberFunction g = f;
    g.set_node_value(2, {cplx{42.0}});
    CHECK(almost_everywhere_equal(f, g, 1e-12));

    const FiberFunction other(unit_grid(7), 1);
    CHECK_THROWS_AS(almost_everywhere_equal(f, other, 1e-12), std::invalid_argument);
}

TEST_CASE("masking keeps exactly the chosen nodes") {
    SplitMix64 rng(123);
    const GridPtr grid = unit_grid(11);
    FiberFunction f(grid, 2);
    for (auto& v : f.values()) v = rng.unit_square();
    const FiberFunction masked = f.masked({1, 4, 7});
    for (std::size_t i = 0; i < 11; ++i) {
        const bool kept = i == 1 || i == 4 || i == 7;
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(masked.node_value(i)[j] == (kept ? f.node_value(i)[j] : cplx{0.0}));
    }
}

TEST_CASE("csv round trip reproduces values and hash") {
    SplitMix64 rng(77);
    const GridPtr grid = unit_grid(6);
    FiberFunction f(grid, 3, 2.0);
    for (auto& v : f.values()) v = rng.unit_square();

    const char* path = "function_roundtrip_test.csv";
    f.write_csv(path);
    const FiberFunction g = FiberFunction::read_csv(path, grid, 2.0);
    std::remove(path);

    REQUIRE(g.dim() == 3);
    for (std::size_t k = 0; k < f.values().size(); ++k) CHECK(f.values()[k] == g.values()[k]);
    CHECK(f.content_hash() == g.content_hash());

    FiberFunction h = g;
    h.values()[0] += 1e-9;
    CHECK(h.content_hash() != g.content_hash());
}

TEST_CASE("norm convergence under refinement is second order") {
    auto norm_on = [](std::size_t n) {
        const GridPtr grid = unit_grid(n);
        return lp_fiber_norm(FiberFunction::sample(
            grid, 1, [](double s) { return cvector{cplx{std::exp(s), std::sin(2.0 * s)}}; }, 2.0));
    };
    const double ref = norm_on(4097);
    const double e1 = std::abs(norm_on(17) - ref);
    const double e2 = std::abs(norm_on(33) - ref);
    const double e3 = std::abs(norm_on(65) - ref);
    CHECK(e1 / e2 >= 3.5);
    CHECK(e1 / e2 <= 4.5);
    CHECK(e2 / e3 >= 3.5);
    CHECK(e2 / e3 <= 4.5);
}

TEST_CASE("constructor contracts") {
    const GridPtr grid = unit_grid(4);
    CHECK_THROWS_AS(FiberFunction(grid, 0), std::invalid_argument);
    CHECK_THROWS_AS(FiberFunction(grid, 1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(FiberFunction::from_values(grid, 2, cvector(3)), std::invalid_argument);
    cvector bad(8, cplx{1.0});
    bad[2] = cplx{std::numeric_limits<double>::infinity(), 0.0};
    CHECK_THROWS_AS(FiberFunction::from_values(grid, 2, bad), std::invalid_argument);
    const FiberFunction f(grid, 2, 2.0, NormMode::extrapolation);
    CHECK_THROWS_AS(lp_fiber_norm(f, nullptr), std::invalid_argument);
}

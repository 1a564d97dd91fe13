#include <doctest.h>

#include <cmath>

#include "fiberlp/extrapolation.hpp"
#include "fiberlp/mult_semigroup.hpp"
#include "oracles.hpp"

using namespace fiberlp;

namespace {

GridPtr unit_grid(std::size_t n) {
    return std::make_shared<GridMeasure>(GridMeasure::interval(0.0, 1.0, n));
}

BundlePtr affine_scalar(GridPtr grid) {
    return build_bundle_ptr(ScalarPolyFamily{{cplx{-1.0}, cplx{-1.0}}}, std::move(grid));
}

} // namespace

TEST_CASE("extension of the zero function is zero with zero norms") {
    const GridPtr grid = unit_grid(9);
    const auto bundle = affine_scalar(grid);
    const ExtrapolatedFunction f = extrapolated_apply(*bundle, FiberFunction(grid, 1));
    CHECK(lp_fiber_norm(f.value, bundle.get()) == 0.0);
    CHECK(lp_fiber_norm(*f.witness) == 0.0);
}

TEST_CASE("scalar extension: f(s) = -(1+s) with extrapolation norm equal to |g|") {
    const GridPtr grid = unit_grid(33);
    const auto bundle = affine_scalar(grid);
    const FiberFunction g = FiberFunction::constant(grid, {cplx{1.0}});
    const ExtrapolatedFunction f = extrapolated_apply(*bundle, g);
    for (std::size_t i = 0; i < grid->size(); ++i)
        CHECK(f.value.node_value(i)[0] == cplx{-(1.0 + grid->node(i))});
    const double base = lp_fiber_norm(g);
    const double extrap = lp_fiber_norm(f.value, bundle.get());
    CHECK(base == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(extrap - base) <= 1e-14 * base);
}

TEST_CASE("isometry |M_ext g| = |g| on random matrix bundles") {
    SplitMix64 rng(64);
    for (int k = 0; k < 30; ++k) {
        const std::size_t d = 1 + rng.below(8);
        const std::size_t n = 8 + rng.below(120);
        const double p = static_cast<double>(1 + rng.below(3));
        const GridPtr grid = unit_grid(n);
        const auto bundle = std::make_shared<FiberOperatorFamily>(random_stable_bundle(grid, d, rng));
        FiberFunction g(grid, d, p);
        for (auto& v : g.values()) v = rng.unit_square();
        const ExtrapolatedFunction f = extrapolated_apply(*bundle, g);
        const double gn = lp_fiber_norm(g);
        CHECK(std::abs(lp_fiber_norm(f.value, bundle.get()) - gn) <= 1e-10 * gn);
    }
}

TEST_CASE("extension requires base mode") {
    const GridPtr grid = unit_grid(5);
    const auto bundle = affine_scalar(grid);
    const FiberFunction wrong(grid, 1, 2.0, NormMode::extrapolation);
    CHECK_THROWS_AS(extrapolated_apply(*bundle, wrong), std::invalid_argument);
}

TEST_CASE("extrapolated semigroup at t = 0 is the identity") {
    SplitMix64 rng(9);
    const GridPtr grid = unit_grid(9);
    const auto bundle = affine_scalar(grid);
    FiberFunction g(grid, 1);
    for (auto& v : g.values()) v = rng.unit_square();
    const ExtrapolatedFunction f = extrapolated_apply(*bundle, g);
    const ExtrapolatedFunction f0 = extrapolated_semigroup_apply(*bundle, 0.0, f);
    for (std::size_t k = 0; k < f.value.values().size(); ++k)
        CHECK(f0.value.values()[k] == f.value.values()[k]);
    REQUIRE(f0.witness.has_value());
    for (std::size_t k = 0; k < f.witness->values().size(); ++k)
        CHECK(f0.witness->values()[k] == f.witness->values()[k]);
}

TEST_CASE("extrapolated semigroup scales scalar functions like the base semigroup") {
    const GridPtr grid = unit_grid(17);
    const auto bundle = build_bundle_ptr(ScalarPolyFamily{{cplx{-1.0}}}, grid);
    const FiberFunction g = FiberFunction::constant(grid, {cplx{1.0}});
    const ExtrapolatedFunction f = extrapolated_apply(*bundle, g);
    const double t = 0.8;
    const ExtrapolatedFunction ft = extrapolated_semigroup_apply(*bundle, t, f);
    const double before = lp_fiber_norm(f.value, bundle.get());
    const double after = lp_fiber_norm(ft.value, bundle.get());
    CHECK(std::abs(after - std::exp(-t) * before) <= 1e-12 * before);
}

TEST_CASE("commutation S(t) M_ext g = M_ext T(t) g per node") {
    SplitMix64 rng(100);
    const GridPtr grid = unit_grid(21);
    const auto bundle = std::make_shared<FiberOperatorFamily>(random_stable_bundle(grid, 4, rng));
    const MultSemigroup sg(bundle);
    for (int k = 0; k < 10; ++k) {
        const double t = rng.uniform(0.0, 2.0);
        FiberFunction g(grid, 4);
        for (auto& v : g.values()) v = rng.unit_square();
        const ExtrapolatedFunction lhs =
            extrapolated_semigroup_apply(*bundle, t, extrapolated_apply(*bundle, g));
        const ExtrapolatedFunction rhs = extrapolated_apply(*bundle, sg.apply(t, g));
        for (std::size_t i = 0; i < grid->size(); ++i)
            CHECK(oracles::max_abs_diff(lhs.value.node_vector(i), rhs.value.node_vector(i)) <= 1e-11);
        // the advanced witness is exactly T(t) g
        const FiberFunction tg = sg.apply(t, g);
        for (std::size_t idx = 0; idx < tg.values().size(); ++idx)
            CHECK(lhs.witness->values()[idx] == tg.values()[idx]);
    }
}

TEST_CASE("extrapolated semigroup law in the extrapolation norm") {
    SplitMix64 rng(200);
    const GridPtr grid = unit_grid(19);
    const auto bundle = std::make_shared<FiberOperatorFamily>(random_stable_bundle(grid, 3, rng));
    for (int k = 0; k < 10; ++k) {
        const double t = rng.uniform(0.0, 2.0);
        const double r = rng.uniform(0.0, 2.0);
        FiberFunction g(grid, 3);
        for (auto& v : g.values()) v = rng.unit_square();
        const ExtrapolatedFunction f = extrapolated_apply(*bundle, g);
        const ExtrapolatedFunction lhs = extrapolated_semigroup_apply(*bundle, t + r, f);
        const ExtrapolatedFunction rhs =
            extrapolated_semigroup_apply(*bundle, t, extrapolated_semigroup_apply(*bundle, r, f));
        CHECK(lp_fiber_norm(lhs.value - rhs.value, bundle.get()) <=
              1e-10 * lp_fiber_norm(f.value, bundle.get()));
    }
}

TEST_CASE("identification inverts the scalar extension example") {
    const GridPtr grid = unit_grid(25);
    const auto bundle = affine_scalar(grid);
    const FiberFunction f = FiberFunction::sample(
        grid, 1, [](double s) { return cvector{cplx{-(1.0 + s)}}; }, 2.0, NormMode::extrapolation);
    const IdentificationResult res = identify_extrapolation(*bundle, f);
    for (std::size_t i = 0; i < grid->size(); ++i)
        CHECK(std::abs(res.base.node_value(i)[0] - 1.0) <= 1e-14);
    CHECK(res.isometry_defect <= 1e-14);
    CHECK(res.reconstruction_defect <= 1e-14);
}

TEST_CASE("identification of zero is zero") {
    const GridPtr grid = unit_grid(9);
    const auto bundle = affine_scalar(grid);
    const FiberFunction zero(grid, 1, 2.0, NormMode::extrapolation);
    const IdentificationResult res = identify_extrapolation(*bundle, zero);
    CHECK(lp_fiber_norm(res.base) == 0.0);
    CHECK(res.isometry_defect == 0.0);
    CHECK(res.reconstruction_defect == 0.0);
}

TEST_CASE("identification round trip on random bundles") {
    SplitMix64 rng(314);
    for (int k = 0; k < 20; ++k) {
        const std::size_t d = 1 + rng.below(8);
        const std::size_t n = 8 + rng.below(120);
        const GridPtr grid = unit_grid(n);
        const auto bundle = std::make_shared<FiberOperatorFamily>(random_stable_bundle(grid, d, rng));

        FiberFunction raw(grid, d, 2.0, NormMode::extrapolation);
        for (auto& v : raw.values()) v = rng.unit_square();
        const IdentificationResult res = identify_extrapolation(*bundle, raw);
        CHECK(res.isometry_defect <= 1e-10);
        CHECK(res.reconstruction_defect <= 1e-10);

        // both compositions are the identity
        const ExtrapolatedFunction back = extrapolated_apply(*bundle, res.base);
        CHECK(lp_fiber_norm(back.value - raw, bundle.get()) <=
              1e-10 * lp_fiber_norm(raw, bundle.get()));
        FiberFunction g(grid, d);
        for (auto& v : g.values()) v = rng.unit_square();
        const IdentificationResult round =
            identify_extrapolation(*bundle, extrapolated_apply(*bundle, g).value);
        CHECK(lp_fiber_norm(round.base - g) <= 1e-10 * lp_fiber_norm(g));
    }
}

TEST_CASE("identification requires extrapolation mode") {
    const GridPtr grid = unit_grid(5);
    const auto bundle = affine_scalar(grid);
    CHECK_THROWS_AS(identify_extrapolation(*bundle, FiberFunction(grid, 1)), std::invalid_argument);
}

TEST_CASE("constant-fiber special case: scalar A = -1") {
    const GridPtr grid = unit_grid(17);
    Matrix a(1);
    a(0, 0) = -1.0;
    const VerificationReport rep = constant_fiber_corollary_check(a, grid, 2.0, 20, 7);
    CHECK(rep.all_pass());
    CHECK(rep.checks().front().observed <= 1e-15);
}

TEST_CASE("constant-fiber example A = [[-1,1],[0,-2]] with f = (0,1)") {
    const GridPtr grid = unit_grid(33);
    Matrix a(2);
    a(0, 0) = -1.0;
    a(0, 1) = 1.0;
    a(1, 1) = -2.0;
    const auto bundle = build_bundle_ptr(ConstantFamily{a}, grid);
    const FiberFunction f =
        FiberFunction::constant(grid, {cplx{0.0}, cplx{1.0}}, 2.0, NormMode::extrapolation);
    const double extrap = lp_fiber_norm(f, bundle.get());
    FiberFunction g(grid, 2);
    for (std::size_t i = 0; i < grid->size(); ++i)
        g.set_node_value(i, bundle->inverse(0) * f.node_vector(i));
    const double base = lp_fiber_norm(g);
    CHECK(extrap == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(std::abs(extrap - base) <= 1e-14);
}

TEST_CASE("constant-fiber corollary on random matrices") {
    SplitMix64 rng(2025);
    const GridPtr grid = unit_grid(28);
    for (int k = 0; k < 10; ++k) {
        const Matrix a = random_stable_matrix(rng, 1 + rng.below(4));
        const VerificationReport rep = constant_fiber_corollary_check(a, grid, 2.0, 10, 99 + k);
        CHECK(rep.all_pass());
        CHECK(rep.checks().front().observed <= 1e-12);
    }
}

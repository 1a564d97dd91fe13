#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fiberlp/evolution.hpp"
#include "fiberlp/linalg.hpp"
#include "oracles.hpp"

using namespace fiberlp;

namespace {

Matrix scalar(double v) {
    Matrix m(1);
    m(0, 0) = v;
    return m;
}

Matrix upper(double a, double b, double c) {
    Matrix m(2);
    m(0, 0) = a;
    m(0, 1) = b;
    m(1, 1) = c;
    return m;
}

GridPtr circle(std::size_t n) { return std::make_shared<GridMeasure>(GridMeasure::circle(1.0, n)); }

constexpr double kTwoPi = 2.0 * std::numbers::pi;

} // namespace

TEST_CASE("U(t,t) is the identity exactly") {
    const EvolutionFamily ev(TimeFamily::constant(upper(-1.0, 1.0, -2.0)), 0.125);
    const Matrix u = ev.step(0.75, 0.75);
    CHECK(oracles::max_abs_diff(u, Matrix::identity(2)) == 0.0);
}

TEST_CASE("constant family reduces to the matrix exponential") {
    const Matrix a = upper(-1.0, 1.0, -2.0);
    const EvolutionFamily ev(TimeFamily::constant(a), 0.125);
    CHECK(oracles::max_abs_diff(ev.step(1.5, 0.25), mat_exp(a, 1.25)) <= 1e-13);
}

TEST_CASE("linear scalar profile a(t) = -2t hits e^{-1} at machine precision") {
    // the substep midpoint rule is exact on degree-1 integrands, so the
    // stepper reproduces U(1,0) = exp(-(1^2-0^2)) = e^{-1} for every h
    for (double h : {0.25, 0.125, 0.0625}) {
        const EvolutionFamily ev(TimeFamily::scalar_poly({cplx{0.0}, cplx{-2.0}}), h);
        CHECK(std::abs(ev.step(1.0, 0.0)(0, 0) - std::exp(-1.0)) <= 1e-13);
    }
}

TEST_CASE("stepper is second order on the curved profile a(t) = -3t^2") {
    // same closed form U(1,0) = e^{-1}; midpoint error ~ e^{-1} h^2 / 4
    std::vector<double> errors;
    for (int k = 2; k <= 6; ++k) {
        const EvolutionFamily ev(TimeFamily::scalar_poly({cplx{0.0}, cplx{0.0}, cplx{-3.0}}),
                                 std::ldexp(1.0, -k));
        errors.push_back(std::abs(ev.step(1.0, 0.0)(0, 0) - std::exp(-1.0)));
    }
    for (std::size_t i = 1; i < errors.size(); ++i) {
        CHECK(errors[i - 1] / errors[i] >= 3.5);
        CHECK(errors[i - 1] / errors[i] <= 4.5);
    }
}

TEST_CASE("cocycle defect vanishes on aligned substeps") {
    const EvolutionFamily constant(TimeFamily::constant(upper(-1.0, 1.0, -2.0)), 0.25);
    CHECK(cocycle_check(constant, 1.0, 0.5, 0.0) <= 1e-12);

    // noncommuting family via linear interpolation between two matrices
    Matrix a0 = upper(-1.0, 1.0, -2.0);
    Matrix a1 = a0;
    a1(1, 0) = 0.5;
    const EvolutionFamily interp(TimeFamily::tabulated({0.0, 1.0}, {a0, a1}), 0.25);
    CHECK(cocycle_check(interp, 1.0, 0.5, 0.0) <= 1e-12);
}

TEST_CASE("commuting family: cocycle defect bounded by the stepper order for all alignments") {
    // A(t) = a(t) A0 with curvature: quadrature widths differ across the
    // split, so misaligned defects are O(h^2) rather than zero
    const Matrix a0 = upper(-1.0, 0.5, -2.0);
    auto defect = [&](double h) {
        const EvolutionFamily ev(TimeFamily::commuting({cplx{0.0}, cplx{0.0}, cplx{-3.0}}, a0), h);
        return cocycle_check(ev, 1.0, 0.37, 0.0); // r off the substep grid
    };
    const double d1 = defect(0.1);
    const double d2 = defect(0.05);
    CHECK(d1 <= 0.05);
    CHECK(d2 < d1);
    CHECK(d2 <= 0.3 * d1); // roughly quadratic decay
}

TEST_CASE("ordering violations are rejected") {
    const EvolutionFamily ev(TimeFamily::constant(scalar(-1.0)), 0.25);
    CHECK_THROWS_AS(ev.step(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(cocycle_check(ev, 1.0, 2.0, 0.0), std::invalid_argument);
}

TEST_CASE("evolution semigroup: t = 0 leaves f unchanged") {
    SplitMix64 rng(40);
    const GridPtr grid = circle(32);
    const EvolutionFamily ev(TimeFamily::constant(scalar(-1.0)), grid->spacing());
    FiberFunction f(grid, 1);
    for (auto& v : f.values()) v = rng.unit_square();
    const FiberFunction g = evolution_semigroup_apply(ev, 0.0, f);
    for (std::size_t k = 0; k < f.values().size(); ++k) CHECK(g.values()[k] == f.values()[k]);
}

TEST_CASE("evolution semigroup transports and damps the sine wave") {
    const GridPtr grid = circle(64);
    const EvolutionFamily ev(TimeFamily::constant(scalar(-1.0)), grid->spacing());
    const FiberFunction f = FiberFunction::sample(
        grid, 1, [](double s) { return cvector{cplx{std::sin(kTwoPi * s)}}; }, 2.0);
    const double t = 8.0 * grid->spacing();
    const FiberFunction g = evolution_semigroup_apply(ev, t, f);
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const double expected = std::exp(-t) * std::sin(kTwoPi * (grid->node(i) - t));
        CHECK(std::abs(g.node_value(i)[0] - expected) <= 1e-12);
    }
}

TEST_CASE("evolution semigroup law for grid-aligned times") {
    SplitMix64 rng(41);
    const GridPtr grid = circle(64);
    Matrix a0 = upper(-1.0, 1.0, -2.0);
    Matrix a1 = a0;
    a1(1, 0) = 0.3;
    const EvolutionFamily ev(TimeFamily::tabulated({-2.0, 2.0}, {a0, a1}), grid->spacing());
    FiberFunction f(grid, 2);
    for (auto& v : f.values()) v = rng.unit_square();
    for (const auto& [kt, kr] : std::vector<std::pair<int, int>>{{1, 1}, {3, 5}, {7, 2}, {16, 16}}) {
        const double t = kt * grid->spacing();
        const double r = kr * grid->spacing();
        const FiberFunction lhs = evolution_semigroup_apply(ev, t + r, f);
        const FiberFunction rhs = evolution_semigroup_apply(ev, t, evolution_semigroup_apply(ev, r, f));
        CHECK(lp_fiber_norm(lhs - rhs) <= 1e-9 * lp_fiber_norm(f));
    }
}

TEST_CASE("non-aligned times and wrong grids are rejected") {
    SplitMix64 rng(43);
    const GridPtr grid = circle(16);
    const EvolutionFamily ev(TimeFamily::constant(scalar(-1.0)), grid->spacing());
    FiberFunction f(grid, 1);
    for (auto& v : f.values()) v = rng.unit_square();
    CHECK_THROWS_AS(evolution_semigroup_apply(ev, 1.5 * grid->spacing(), f), std::invalid_argument);

    const auto interval = std::make_shared<GridMeasure>(GridMeasure::interval(0.0, 1.0, 16));
    const FiberFunction g(interval, 1);
    CHECK_THROWS_AS(evolution_semigroup_apply(ev, 0.0, g), std::invalid_argument);
}

TEST_CASE("one full turn of the circle is the identity on indices") {
    SplitMix64 rng(44);
    const GridPtr grid = circle(24);
    const EvolutionFamily null_ev(TimeFamily::constant(Matrix(1)), grid->spacing());
    FiberFunction f(grid, 1);
    for (auto& v : f.values()) v = rng.unit_square();
    const FiberFunction g = evolution_semigroup_apply(null_ev, 1.0, f);
    for (std::size_t k = 0; k < f.values().size(); ++k) CHECK(g.values()[k] == f.values()[k]);
}

TEST_CASE("spectral derivative is exact on band-limited data") {
    const GridPtr grid = circle(32);
    const FiberFunction f = FiberFunction::sample(
        grid, 1, [](double s) { return cvector{cplx{std::sin(kTwoPi * s)}}; }, 2.0);
    const FiberFunction df = spectral_derivative(f);
    for (std::size_t i = 0; i < grid->size(); ++i)
        CHECK(std::abs(df.node_value(i)[0] - kTwoPi * std::cos(kTwoPi * grid->node(i))) <= 1e-10);
}

TEST_CASE("generator check error for the sine example decreases at first order") {
    std::vector<double> errors;
    for (std::size_t n : {64u, 128u, 256u, 512u}) {
        const GridPtr grid = circle(n);
        const EvolutionFamily ev(TimeFamily::constant(scalar(-1.0)), grid->spacing());
        const FiberFunction f = FiberFunction::sample(
            grid, 1, [](double s) { return cvector{cplx{std::sin(kTwoPi * s)}}; }, 2.0);
        const std::function<cvector(double)> derivative = [](double s) {
            return cvector{cplx{kTwoPi * std::cos(kTwoPi * s)}};
        };
        errors.push_back(evolution_generator_check(ev, f, &derivative));
    }
    for (std::size_t i = 1; i < errors.size(); ++i) CHECK(errors[i - 1] / errors[i] >= 1.7);
}

TEST_CASE("generator check with spectral differentiation matches the analytic derivative") {
    const GridPtr grid = circle(128);
    const EvolutionFamily ev(TimeFamily::constant(scalar(-1.0)), grid->spacing());
    const FiberFunction f = FiberFunction::sample(
        grid, 1, [](double s) { return cvector{cplx{std::sin(kTwoPi * s)}}; }, 2.0);
    const std::function<cvector(double)> derivative = [](double s) {
        return cvector{cplx{kTwoPi * std::cos(kTwoPi * s)}};
    };
    const double with_analytic = evolution_generator_check(ev, f, &derivative);
    const double with_spectral = evolution_generator_check(ev, f);
    CHECK(std::abs(with_analytic - with_spectral) <= 0.05 * with_analytic);
}

TEST_CASE("generator check on constant functions (no transport term)") {
    // f = x0: G f(s) = A(s) x0 and f' = 0; error still first order in h
    std::vector<double> errors;
    for (std::size_t n : {64u, 128u}) {
        const GridPtr grid = circle(n);
        const EvolutionFamily ev(TimeFamily::constant(upper(-1.0, 1.0, -2.0)), grid->spacing());
        const FiberFunction f = FiberFunction::constant(grid, {cplx{1.0}, cplx{-0.5, 0.25}});
        const std::function<cvector(double)> derivative = [](double) {
            return cvector{cplx{0.0}, cplx{0.0}};
        };
        errors.push_back(evolution_generator_check(ev, f, &derivative));
    }
    CHECK(errors[0] / errors[1] >= 1.7);
}

#include <doctest.h>

#include <vector>

#include "fiberlp/bundle.hpp"
#include "fiberlp/errors.hpp"
#include "fiberlp/evolution.hpp"
#include "fiberlp/kernels.hpp"
#include "fiberlp/linalg.hpp"

using namespace fiberlp;

namespace {

struct KernelFixture {
    std::size_t n = 129;
    std::size_t d = 4;
    std::vector<Matrix> family;
    std::vector<double> weights;
    cvector x;

    KernelFixture() {
        SplitMix64 rng(31415);
        family.reserve(n);
        for (std::size_t i = 0; i < n; ++i) family.push_back(random_stable_matrix(rng, d));
        weights.resize(n);
        for (auto& w : weights) w = rng.uniform01();
        x = random_cvector(rng, n * d);
    }
};

bool bit_equal(std::span<const cplx> a, std::span<const cplx> b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

} // namespace

TEST_CASE("parallel kernels match their serial reference bit for bit") {
    const KernelFixture fx;

    SUBCASE("apply_family") {
        cvector y1(fx.n * fx.d), y2(fx.n * fx.d);
        kernels::apply_family(fx.family, fx.x, y1);
        kernels::apply_family_serial(fx.family, fx.x, y2);
        CHECK(bit_equal(y1, y2));
    }
    SUBCASE("apply_exp_family") {
        cvector y1(fx.n * fx.d), y2(fx.n * fx.d);
        kernels::apply_exp_family(fx.family, 0.37, fx.x, y1);
        kernels::apply_exp_family_serial(fx.family, 0.37, fx.x, y2);
        CHECK(bit_equal(y1, y2));
    }
    SUBCASE("exp_family") {
        std::vector<Matrix> e1(fx.n), e2(fx.n);
        kernels::exp_family(fx.family, 1.1, e1);
        kernels::exp_family_serial(fx.family, 1.1, e2);
        for (std::size_t i = 0; i < fx.n; ++i) CHECK(bit_equal(e1[i].entries(), e2[i].entries()));
    }
    SUBCASE("apply_resolvent") {
        cvector y1(fx.n * fx.d), y2(fx.n * fx.d);
        kernels::apply_resolvent(fx.family, cplx{2.0, 0.5}, fx.x, y1);
        kernels::apply_resolvent_serial(fx.family, cplx{2.0, 0.5}, fx.x, y2);
        CHECK(bit_equal(y1, y2));
    }
    SUBCASE("norm_terms") {
        std::vector<double> t1(fx.n), t2(fx.n);
        kernels::norm_terms(fx.weights, fx.x, fx.d, 2.0, t1);
        kernels::norm_terms_serial(fx.weights, fx.x, fx.d, 2.0, t2);
        CHECK(t1 == t2);
        kernels::norm_terms(fx.weights, fx.x, fx.d, 3.0, t1);
        kernels::norm_terms_serial(fx.weights, fx.x, fx.d, 3.0, t2);
        CHECK(t1 == t2);
    }
    SUBCASE("weighted_norm_terms") {
        std::vector<Matrix> inverses(fx.n);
        for (std::size_t i = 0; i < fx.n; ++i) inverses[i] = inverse(fx.family[i]);
        std::vector<double> t1(fx.n), t2(fx.n);
        kernels::weighted_norm_terms(inverses, fx.weights, fx.x, fx.d, 2.0, t1);
        kernels::weighted_norm_terms_serial(inverses, fx.weights, fx.x, fx.d, 2.0, t2);
        CHECK(t1 == t2);
    }
}

TEST_CASE("evolution semigroup parallel driver matches the serial reference") {
    SplitMix64 rng(999);
    auto grid = std::make_shared<GridMeasure>(GridMeasure::circle(1.0, 96));
    Matrix a0(2);
    a0(0, 0) = -1.0;
    a0(0, 1) = 0.5;
    a0(1, 1) = -2.0;
    Matrix a1 = a0;
    a1(1, 0) = 0.25;
    const EvolutionFamily ev(TimeFamily::tabulated({-4.0, 4.0}, {a0, a1}), grid->spacing());

    FiberFunction f(grid, 2);
    for (auto& v : f.values()) v = rng.unit_square();
    const double t = 7.0 * grid->spacing();
    const FiberFunction g1 = evolution_semigroup_apply(ev, t, f);
    const FiberFunction g2 = evolution_semigroup_apply_serial(ev, t, f);
    CHECK(bit_equal(g1.values(), g2.values()));
}

TEST_CASE("resolvent kernel reports the first offending node") {
    // scalar family m(s_i) = -(1+s_i) on nodes 0, 0.25, ..., 1: lambda = -1.5
    // is the spectrum value at node 2
    auto grid = std::make_shared<GridMeasure>(GridMeasure::interval(0.0, 1.0, 5));
    std::vector<Matrix> family;
    for (std::size_t i = 0; i < grid->size(); ++i) {
        Matrix m(1);
        m(0, 0) = -(1.0 + grid->node(i));
        family.push_back(m);
    }
    cvector x(5, cplx{1.0});
    cvector y(5);
    try {
        kernels::apply_resolvent(family, cplx{-1.5}, x, y);
        FAIL("expected NodeSingularError");
    } catch (const NodeSingularError& e) {
        CHECK(e.node() == 2);
    }
    try {
        kernels::apply_resolvent_serial(family, cplx{-1.5}, x, y);
        FAIL("expected NodeSingularError");
    } catch (const NodeSingularError& e) {
        CHECK(e.node() == 2);
    }
}

TEST_CASE("exp kernels propagate overflow as range errors") {
    std::vector<Matrix> family(40, Matrix(1));
    for (auto& m : family) m(0, 0) = 500.0;
    cvector x(40, cplx{1.0});
    cvector y(40);
    CHECK_THROWS_AS(kernels::apply_exp_family(family, 1000.0, x, y), std::range_error);
    std::vector<Matrix> out(40);
    CHECK_THROWS_AS(kernels::exp_family(family, 1000.0, out), std::range_error);
}

TEST_CASE("ordered_sum reduces in index order") {
    const std::vector<double> terms = {1e16, 1.0, -1e16, 1.0};
    CHECK(kernels::ordered_sum(terms) == ((1e16 + 1.0) + -1e16) + 1.0);
}

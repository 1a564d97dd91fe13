#include "fiberlp/evolution.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fiberlp/kernels.hpp"
#include "fiberlp/linalg.hpp"

namespace fiberlp {

TimeFamily TimeFamily::constant(Matrix a) {
    const std::size_t d = a.dim();
    return {d, [a = std::move(a)](double) { return a; }};
}

TimeFamily TimeFamily::scalar_poly(cvector coeffs) {
    return {1, [coeffs = std::move(coeffs)](double t) {
                cplx v = 0.0;
                for (std::size_t j = coeffs.size(); j-- > 0;) v = v * t + coeffs[j];
                Matrix m(1);
                m(0, 0) = v;
                return m;
            }};
}

TimeFamily TimeFamily::commuting(cvector coeffs, Matrix a0) {
    const std::size_t d = a0.dim();
    return {d, [coeffs = std::move(coeffs), a0 = std::move(a0)](double t) {
                cplx v = 0.0;
                for (std::size_t j = coeffs.size(); j-- > 0;) v = v * t + coeffs[j];
                Matrix m = a0;
                m *= v;
                return m;
            }};
}

TimeFamily TimeFamily::tabulated(std::vector<double> times, std::vector<Matrix> values) {
    if (times.size() < 2 || times.size() != values.size())
        throw std::invalid_argument("TimeFamily::tabulated: need matching times and values");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("TimeFamily::tabulated: times must be strictly increasing");
    const std::size_t d = values[0].dim();
    return {d, [times = std::move(times), values = std::move(values)](double t) {
                if (t <= times.front()) return values.front();
                if (t >= times.back()) return values.back();
                std::size_t hi = 1;
                while (times[hi] < t) ++hi;
                const double w = (t - times[hi - 1]) / (times[hi] - times[hi - 1]);
                Matrix m = values[hi - 1];
                m *= cplx{1.0 - w};
                Matrix n = values[hi];
                n *= cplx{w};
                m += n;
                return m;
            }};
}

EvolutionFamily::EvolutionFamily(TimeFamily family, double base_step)
    : family_(std::move(family)), base_step_(base_step) {
    if (!(base_step_ > 0.0)) throw std::invalid_argument("EvolutionFamily: base step must be positive");
    if (!family_.eval || family_.dim == 0) throw std::invalid_argument("EvolutionFamily: empty time family");
}

Matrix EvolutionFamily::step(double t, double s) const {
    if (t < s) throw std::invalid_argument("EvolutionFamily::step: need t >= s");
    const std::size_t d = family_.dim;
    if (t == s) return Matrix::identity(d);

    const double span = t - s;
    const auto n = static_cast<std::size_t>(std::ceil(span / base_step_ - 1e-12));
    const double w = span / static_cast<double>(std::max<std::size_t>(n, 1));

    Matrix u = Matrix::identity(d);
    for (std::size_t j = 0; j < std::max<std::size_t>(n, 1); ++j) {
        const double midpoint = s + (static_cast<double>(j) + 0.5) * w;
        u = mat_exp(family_.eval(midpoint), w) * u;
    }
    return u;
}

double cocycle_check(const EvolutionFamily& ev, double t, double r, double s) {
    if (!(t >= r && r >= s)) throw std::invalid_argument("cocycle_check: need t >= r >= s");
    const Matrix direct = ev.step(t, s);
    const Matrix composed = ev.step(t, r) * ev.step(r, s);
    return op_norm(direct - composed);
}

namespace {

struct SemigroupPlan {
    std::size_t shift = 0;            // k with t = k * spacing
    std::vector<Matrix> propagators;  // cell m propagator, index m + shift
};

// Propagator over one grid cell [m*spacing, (m+1)*spacing], sub-stepped when
// the family's base step is finer than the grid.
Matrix cell_propagator(const EvolutionFamily& ev, double left, double spacing) {
    const auto q = static_cast<std::size_t>(
        std::max<long long>(1, std::llround(spacing / std::min(ev.base_step(), spacing))));
    const double w = spacing / static_cast<double>(q);
    Matrix p = Matrix::identity(ev.dim());
    for (std::size_t j = 0; j < q; ++j)
        p = mat_exp(ev.family().eval(left + (static_cast<double>(j) + 0.5) * w), w) * p;
    return p;
}

SemigroupPlan make_plan(const EvolutionFamily& ev, double t, const FiberFunction& f) {
    if (f.grid().topology() != Topology::circle)
        throw std::invalid_argument("evolution_semigroup_apply: needs a circle grid");
    if (!f.grid().uniform())
        throw std::invalid_argument("evolution_semigroup_apply: needs a uniform circle grid");
    if (ev.dim() != f.dim())
        throw std::invalid_argument("evolution_semigroup_apply: dimension mismatch");
    if (!(t >= 0.0)) throw std::invalid_argument("evolution_semigroup_apply: t must be >= 0");

    const double spacing = f.grid().spacing();
    const double ratio = t / spacing;
    const auto k = static_cast<long long>(std::llround(ratio));
    if (std::abs(ratio - static_cast<double>(k)) > 1e-9)
        throw std::invalid_argument(
            "evolution_semigroup_apply: t must be an integer multiple of the grid spacing");

    SemigroupPlan plan;
    plan.shift = static_cast<std::size_t>(k);
    // The family is treated as length-periodic on the circle, so one
    // propagator per grid cell covers every U(s_i, s_i - t). Sequential
    // build phase, read-only afterwards.
    const std::size_t n = f.nodes();
    if (plan.shift > 0) {
        plan.propagators.resize(n);
        for (std::size_t m = 0; m < n; ++m)
            plan.propagators[m] = cell_propagator(ev, static_cast<double>(m) * spacing, spacing);
    }
    return plan;
}

void apply_plan_at(const SemigroupPlan& plan, const FiberFunction& f, std::size_t node, FiberFunction& out) {
    const std::size_t n = f.nodes();
    const std::size_t k = plan.shift;
    const std::size_t src = (node + n - (k % n)) % n;
    cvector v = f.node_vector(src);
    // U(s_i, s_i - t) = P_{i-1} ... P_{i-k} with cell indices modulo n
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t cell = (src + j) % n;
        v = plan.propagators[cell] * v;
    }
    out.set_node_value(node, v);
}

} // namespace

FiberFunction evolution_semigroup_apply_serial(const EvolutionFamily& ev, double t, const FiberFunction& f) {
    const SemigroupPlan plan = make_plan(ev, t, f);
    FiberFunction out(f.grid_ptr(), f.dim(), f.p(), f.mode());
    for (std::size_t i = 0; i < f.nodes(); ++i) apply_plan_at(plan, f, i, out);
    return out;
}

FiberFunction evolution_semigroup_apply(const EvolutionFamily& ev, double t, const FiberFunction& f) {
    const SemigroupPlan plan = make_plan(ev, t, f);
    FiberFunction out(f.grid_ptr(), f.dim(), f.p(), f.mode());
    const auto n = static_cast<std::int64_t>(f.nodes());
#pragma omp parallel for schedule(static) if (n >= 32)
    for (std::int64_t i = 0; i < n; ++i) apply_plan_at(plan, f, static_cast<std::size_t>(i), out);
    return out;
}

FiberFunction spectral_derivative(const FiberFunction& f) {
    if (f.grid().topology() != Topology::circle || !f.grid().uniform())
        throw std::invalid_argument("spectral_derivative: needs a uniform circle grid");
    const std::size_t n = f.nodes();
    const std::size_t d = f.dim();
    const double length = f.grid().measure();
    const double two_pi = 2.0 * std::numbers::pi;

    // forward transform, one component at a time
    std::vector<cvector> coeff(n, cvector(d));
    for (std::size_t k = 0; k < n; ++k) {
        cvector acc(d, cplx{0.0});
        for (std::size_t j = 0; j < n; ++j) {
            const double angle = -two_pi * static_cast<double>(k * j % n) / static_cast<double>(n);
            const cplx w = std::polar(1.0, angle);
            const auto v = f.node_value(j);
            for (std::size_t c = 0; c < d; ++c) acc[c] += w * v[c];
        }
        for (std::size_t c = 0; c < d; ++c) coeff[k][c] = acc[c] / static_cast<double>(n);
    }

    // multiply by i*omega_k with symmetric wavenumbers; Nyquist mode dropped
    for (std::size_t k = 0; k < n; ++k) {
        double wavenumber;
        if (2 * k < n)
            wavenumber = static_cast<double>(k);
        else if (2 * k == n)
            wavenumber = 0.0;
        else
            wavenumber = static_cast<double>(k) - static_cast<double>(n);
        const cplx factor = cplx{0.0, two_pi * wavenumber / length};
        for (std::size_t c = 0; c < d; ++c) coeff[k][c] *= factor;
    }

    FiberFunction out(f.grid_ptr(), d, f.p(), f.mode());
    for (std::size_t j = 0; j < n; ++j) {
        cvector acc(d, cplx{0.0});
        for (std::size_t k = 0; k < n; ++k) {
            const double angle = two_pi * static_cast<double>(k * j % n) / static_cast<double>(n);
            const cplx w = std::polar(1.0, angle);
            for (std::size_t c = 0; c < d; ++c) acc[c] += w * coeff[k][c];
        }
        // imaginary leakage from the transform itself is retained; inputs are
        // complex-valued anyway
        out.set_node_value(j, acc);
    }
    return out;
}

double evolution_generator_check(const EvolutionFamily& ev, const FiberFunction& f,
                                 const std::function<cvector(double)>* derivative) {
    const double h = f.grid().spacing();
    const FiberFunction tf = evolution_semigroup_apply(ev, h, f);
    FiberFunction quotient = tf - f;
    quotient *= cplx{1.0 / h};

    FiberFunction af(f.grid_ptr(), f.dim(), f.p(), f.mode());
    for (std::size_t i = 0; i < f.nodes(); ++i)
        af.set_node_value(i, ev.family().eval(f.grid().node(i)) * f.node_vector(i));

    FiberFunction fprime = derivative != nullptr
                               ? FiberFunction::sample(f.grid_ptr(), f.dim(), *derivative, f.p(), f.mode())
                               : spectral_derivative(f);

    return lp_fiber_norm(quotient - (af - fprime));
}

} // namespace fiberlp

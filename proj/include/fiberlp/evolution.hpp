#pragma once

#include <functional>
#include <vector>

#include "fiberlp/fiber_function.hpp"
#include "fiberlp/grid.hpp"
#include "fiberlp/matrix.hpp"

namespace fiberlp {

// Time-dependent operator family t -> A(t), assumed continuous on the
// queried range.
struct TimeFamily {
    std::size_t dim = 0;
    std::function<Matrix(double)> eval;

    static TimeFamily constant(Matrix a);
    static TimeFamily scalar_poly(cvector coeffs);                    // a(t) = sum c_j t^j, dim 1
    static TimeFamily commuting(cvector coeffs, Matrix a0);           // A(t) = a(t) A0
    static TimeFamily tabulated(std::vector<double> times, std::vector<Matrix> values); // linear interp
};

// Evolution family U(t,s) for t >= s from the sub-stepped exponential
// midpoint rule: U is the ordered product of exp(w A(substep midpoint)) over
// n = ceil((t-s)/base_step) equal substeps. Second order in the substep
// width; U(t,t) = I exactly.
class EvolutionFamily {
public:
    EvolutionFamily(TimeFamily family, double base_step);

    const TimeFamily& family() const noexcept { return family_; }
    double base_step() const noexcept { return base_step_; }
    std::size_t dim() const noexcept { return family_.dim; }

    Matrix step(double t, double s) const;

private:
    TimeFamily family_;
    double base_step_;
};

// Cocycle defect |U(t,s) - U(t,r) U(r,s)| in the induced 2-norm, t >= r >= s.
// Zero up to rounding when r lands on a substep boundary of [s, t].
double cocycle_check(const EvolutionFamily& ev, double t, double r, double s);

// Evolution semigroup on a circle grid: (T(t) f)(s_i) = U(s_i, s_i - t)
// f(s_{i-k}) with the shift taken modulo the circle; t must be an integer
// multiple k of the grid spacing so the shift is exact. The time family is
// treated as periodic with the circle length, and the propagator over each
// grid cell is memoized once and shared by all nodes.
FiberFunction evolution_semigroup_apply(const EvolutionFamily& ev, double t, const FiberFunction& f);
FiberFunction evolution_semigroup_apply_serial(const EvolutionFamily& ev, double t, const FiberFunction& f);

// Fourier differentiation on the circle grid (exact for band-limited data).
FiberFunction spectral_derivative(const FiberFunction& f);

// Error of the one-sided generator quotient at h = grid spacing:
// |(T(h)f - f)/h - (A(.)f(.) - f')|_p. The derivative comes from the
// registered callable when given, else from spectral differentiation.
double evolution_generator_check(const EvolutionFamily& ev, const FiberFunction& f,
                                 const std::function<cvector(double)>* derivative = nullptr);

} // namespace fiberlp

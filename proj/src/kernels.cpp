#include "fiberlp/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "fiberlp/errors.hpp"

namespace fiberlp::kernels {

namespace {

using idx = std::int64_t;

inline void apply_block(const Matrix& m, const cplx* x, cplx* y) {
    const std::size_t d = m.dim();
    for (std::size_t i = 0; i < d; ++i) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < d; ++j) s += m(i, j) * x[j];
        y[i] = s;
    }
}

inline double block_norm(const cplx* x, std::size_t d) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += std::norm(x[j]);
    return std::sqrt(s);
}

// Resolvent at one node; returns the condition estimate so the drivers can
// report the first offending node deterministically.
inline double resolvent_block(const Matrix& m, cplx lambda, const cplx* x, cplx* y, double cond_cap) {
    const std::size_t d = m.dim();
    Matrix shifted(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) shifted(i, j) = (i == j ? lambda : cplx{0.0}) - m(i, j);
    const LuFactors f = lu_factor(shifted);
    const double cond = condition_estimate(shifted, f);
    if (!(cond <= cond_cap)) return cond;
    const cvector rhs(x, x + d);
    const cvector sol = lu_solve(f, rhs);
    for (std::size_t i = 0; i < d; ++i) y[i] = sol[i];
    return cond;
}

} // namespace

double pow_p(double value, double p) noexcept {
    if (p == 2.0) return value * value;
    if (p == 1.0) return value;
    return std::pow(value, p);
}

double ordered_sum(std::span<const double> terms) noexcept {
    double s = 0.0;
    for (double t : terms) s += t;
    return s;
}

bool parallel_enabled() noexcept {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

void apply_family_serial(std::span<const Matrix> family, std::span<const cplx> x, std::span<cplx> y) {
    const std::size_t n = family.size();
    const std::size_t d = n ? family[0].dim() : 0;
    for (std::size_t i = 0; i < n; ++i) apply_block(family[i], &x[i * d], &y[i * d]);
}

void apply_family(std::span<const Matrix> family, std::span<const cplx> x, std::span<cplx> y) {
    const idx n = static_cast<idx>(family.size());
    const std::size_t d = n ? family[0].dim() : 0;
#pragma omp parallel for schedule(static) if (n >= 32)
    for (idx i = 0; i < n; ++i) apply_block(family[i], &x[i * d], &y[i * d]);
}

void apply_exp_family_serial(std::span<const Matrix> family, double t, std::span<const cplx> x,
                             std::span<cplx> y) {
    const std::size_t n = family.size();
    const std::size_t d = n ? family[0].dim() : 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Matrix e = mat_exp(family[i], t);
        apply_block(e, &x[i * d], &y[i * d]);
    }
}

void apply_exp_family(std::span<const Matrix> family, double t, std::span<const cplx> x, std::span<cplx> y) {
    const idx n = static_cast<idx>(family.size());
    const std::size_t d = n ? family[0].dim() : 0;
    std::atomic<bool> overflow{false};
#pragma omp parallel for schedule(static) if (n >= 32)
    for (idx i = 0; i < n; ++i) {
        if (overflow.load(std::memory_order_relaxed)) continue;
        try {
            const Matrix e = mat_exp(family[i], t);
            apply_block(e, &x[i * d], &y[i * d]);
        } catch (const std::range_error&) {
            overflow.store(true, std::memory_order_relaxed);
        }
    }
    if (overflow.load()) throw std::range_error("apply_exp_family: overflow in exp(tM(s))");
}

void exp_family_serial(std::span<const Matrix> family, double t, std::span<Matrix> out) {
    for (std::size_t i = 0; i < family.size(); ++i) out[i] = mat_exp(family[i], t);
}

void exp_family(std::span<const Matrix> family, double t, std::span<Matrix> out) {
    const idx n = static_cast<idx>(family.size());
    std::atomic<bool> overflow{false};
#pragma omp parallel for schedule(static) if (n >= 32)
    for (idx i = 0; i < n; ++i) {
        if (overflow.load(std::memory_order_relaxed)) continue;
        try {
            out[i] = mat_exp(family[i], t);
        } catch (const std::range_error&) {
            overflow.store(true, std::memory_order_relaxed);
        }
    }
    if (overflow.load()) throw std::range_error("exp_family: overflow in exp(tM(s))");
}

void apply_resolvent_serial(std::span<const Matrix> family, cplx lambda, std::span<const cplx> x,
                            std::span<cplx> y, double cond_cap) {
    const std::size_t n = family.size();
    const std::size_t d = n ? family[0].dim() : 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double cond = resolvent_block(family[i], lambda, &x[i * d], &y[i * d], cond_cap);
        if (!(cond <= cond_cap))
            throw NodeSingularError("resolvent: lambda in the numerical spectrum of a fiber", i, cond);
    }
}

void apply_resolvent(std::span<const Matrix> family, cplx lambda, std::span<const cplx> x, std::span<cplx> y,
                     double cond_cap) {
    const idx n = static_cast<idx>(family.size());
    const std::size_t d = n ? family[0].dim() : 0;
    std::atomic<idx> first_bad{n};
    std::atomic<double> bad_cond{0.0};
#pragma omp parallel for schedule(static) if (n >= 32)
    for (idx i = 0; i < n; ++i) {
        const double cond = resolvent_block(family[i], lambda, &x[i * d], &y[i * d], cond_cap);
        if (!(cond <= cond_cap)) {
            idx cur = first_bad.load(std::memory_order_relaxed);
            while (i < cur && !first_bad.compare_exchange_weak(cur, i, std::memory_order_relaxed)) {
            }
            bad_cond.store(cond, std::memory_order_relaxed);
        }
    }
    const idx bad = first_bad.load();
    if (bad < n)
        throw NodeSingularError("resolvent: lambda in the numerical spectrum of a fiber",
                                static_cast<std::size_t>(bad), bad_cond.load());
}

void norm_terms_serial(std::span<const double> weights, std::span<const cplx> x, std::size_t dim, double p,
                       std::span<double> terms) {
    for (std::size_t i = 0; i < weights.size(); ++i)
        terms[i] = weights[i] * pow_p(block_norm(&x[i * dim], dim), p);
}

void norm_terms(std::span<const double> weights, std::span<const cplx> x, std::size_t dim, double p,
                std::span<double> terms) {
    const idx n = static_cast<idx>(weights.size());
#pragma omp parallel for schedule(static) if (n >= 64)
    for (idx i = 0; i < n; ++i) terms[i] = weights[i] * pow_p(block_norm(&x[i * dim], dim), p);
}

void weighted_norm_terms_serial(std::span<const Matrix> inverses, std::span<const double> weights,
                                std::span<const cplx> x, std::size_t dim, double p, std::span<double> terms) {
    cvector scratch(dim);
    for (std::size_t i = 0; i < weights.size(); ++i) {
        apply_block(inverses[i], &x[i * dim], scratch.data());
        terms[i] = weights[i] * pow_p(block_norm(scratch.data(), dim), p);
    }
}

void weighted_norm_terms(std::span<const Matrix> inverses, std::span<const double> weights,
                         std::span<const cplx> x, std::size_t dim, double p, std::span<double> terms) {
    const idx n = static_cast<idx>(weights.size());
#pragma omp parallel for schedule(static) if (n >= 64)
    for (idx i = 0; i < n; ++i) {
        cvector scratch(dim);
        apply_block(inverses[i], &x[i * dim], scratch.data());
        terms[i] = weights[i] * pow_p(block_norm(scratch.data(), dim), p);
    }
}

} // namespace fiberlp::kernels

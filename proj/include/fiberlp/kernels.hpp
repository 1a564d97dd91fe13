#pragma once

#include <span>
#include <vector>

#include "fiberlp/linalg.hpp"
#include "fiberlp/matrix.hpp"

// Data-parallel per-node kernels. Each kernel has an OpenMP-parallel driver
// and a serial reference twin; both must produce bit-identical output because
// every node writes only its own block and reductions are left to the caller
// (ordered, serial). The benchmark target compares the two drivers.
namespace fiberlp::kernels {

// y_i = M_i x_i, blocks of size dim
void apply_family(std::span<const Matrix> family, std::span<const cplx> x, std::span<cplx> y);
void apply_family_serial(std::span<const Matrix> family, std::span<const cplx> x, std::span<cplx> y);

// y_i = exp(t M_i) x_i
void apply_exp_family(std::span<const Matrix> family, double t, std::span<const cplx> x, std::span<cplx> y);
void apply_exp_family_serial(std::span<const Matrix> family, double t, std::span<const cplx> x,
                             std::span<cplx> y);

// E_i = exp(t M_i)
void exp_family(std::span<const Matrix> family, double t, std::span<Matrix> out);
void exp_family_serial(std::span<const Matrix> family, double t, std::span<Matrix> out);

// y_i = (lambda I - M_i)^{-1} x_i. Throws NodeSingularError naming the first
// node (in index order) whose shifted fiber breaches the condition cap.
void apply_resolvent(std::span<const Matrix> family, cplx lambda, std::span<const cplx> x,
                     std::span<cplx> y, double cond_cap = kDefaultConditionCap);
void apply_resolvent_serial(std::span<const Matrix> family, cplx lambda, std::span<const cplx> x,
                            std::span<cplx> y, double cond_cap = kDefaultConditionCap);

// terms_i = w_i * |x_i|_2^p (plain fiber norm per block)
void norm_terms(std::span<const double> weights, std::span<const cplx> x, std::size_t dim, double p,
                std::span<double> terms);
void norm_terms_serial(std::span<const double> weights, std::span<const cplx> x, std::size_t dim, double p,
                       std::span<double> terms);

// terms_i = w_i * |Inv_i x_i|_2^p (extrapolation norm per block, cached inverses)
void weighted_norm_terms(std::span<const Matrix> inverses, std::span<const double> weights,
                         std::span<const cplx> x, std::size_t dim, double p, std::span<double> terms);
void weighted_norm_terms_serial(std::span<const Matrix> inverses, std::span<const double> weights,
                                std::span<const cplx> x, std::size_t dim, double p, std::span<double> terms);

// |x|^p with fast paths for the common exponents
double pow_p(double value, double p) noexcept;

// Ordered serial reduction; keeps reports bit-stable regardless of threading.
double ordered_sum(std::span<const double> terms) noexcept;

bool parallel_enabled() noexcept;

} // namespace fiberlp::kernels

#pragma once

// Test-only oracles, independent of the library code paths they check.

#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "fiberlp/matrix.hpp"

namespace oracles {

using fiberlp::cplx;
using fiberlp::cvector;
using fiberlp::Matrix;

// exp(tA) for upper-triangular 2x2 with distinct eigenvalues, from the
// eigendecomposition: the off-diagonal entry is c (e^{t l1} - e^{t l2}) / (l1 - l2).
inline Matrix exp_triangular_2x2(cplx l1, cplx c, cplx l2, double t) {
    Matrix e(2);
    e(0, 0) = std::exp(t * l1);
    e(1, 1) = std::exp(t * l2);
    e(0, 1) = c * (std::exp(t * l1) - std::exp(t * l2)) / (l1 - l2);
    return e;
}

// straight composite trapezoid over explicit nodes
inline double trapezoid(std::span<const double> nodes, const std::function<double(double)>& f) {
    double acc = 0.0;
    for (std::size_t i = 1; i < nodes.size(); ++i)
        acc += 0.5 * (nodes[i] - nodes[i - 1]) * (f(nodes[i]) + f(nodes[i - 1]));
    return acc;
}

inline double trapezoid_uniform(double a, double b, std::size_t n, const std::function<double(double)>& f) {
    std::vector<double> nodes(n);
    const double h = (b - a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) nodes[i] = a + h * static_cast<double>(i);
    return trapezoid(nodes, f);
}

// 2x2 inverse by the adjugate formula
inline Matrix inverse_2x2(const Matrix& m) {
    const cplx det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    Matrix inv(2);
    inv(0, 0) = m(1, 1) / det;
    inv(0, 1) = -m(0, 1) / det;
    inv(1, 0) = -m(1, 0) / det;
    inv(1, 1) = m(0, 0) / det;
    return inv;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    return worst;
}

inline double max_abs_diff(const cvector& a, const cvector& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

// largest singular value of [[1, t], [0, 1]]; closed form used by the
// growth-bound checks on the Jordan block
inline double shear_norm(double t) { return 0.5 * (t + std::sqrt(t * t + 4.0)); }

} // namespace oracles

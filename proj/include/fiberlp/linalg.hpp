#pragma once

#include <vector>

#include "fiberlp/matrix.hpp"
#include "fiberlp/rng.hpp"

namespace fiberlp {

inline constexpr double kDefaultConditionCap = 1e12;

// LU factorization with partial pivoting, kept for repeated solves.
struct LuFactors {
    std::size_t dim = 0;
    cvector lu;             // packed L (unit diagonal) and U, row-major
    std::vector<int> pivot; // row swaps applied in order
    bool singular = false;  // exact zero pivot encountered
};

LuFactors lu_factor(const Matrix& a);
cvector lu_solve(const LuFactors& f, const cvector& b);
Matrix lu_inverse(const LuFactors& f);

// 1-norm condition estimate cond1(A) = |A|_1 |A^{-1}|_1 (the inverse is formed
// explicitly; fibers are tiny). Returns +inf for exactly singular input.
double condition_estimate(const Matrix& a, const LuFactors& f);

// x = A^{-1} b. Throws SingularError (carrying the condition estimate) when
// the matrix is singular or its condition estimate exceeds cond_cap.
cvector solve_linear(const Matrix& a, const cvector& b, double cond_cap = kDefaultConditionCap);

// A^{-1} under the same condition cap contract as solve_linear.
Matrix inverse(const Matrix& a, double cond_cap = kDefaultConditionCap);

// exp(t*A) by scaling and squaring with the degree-13 Pade approximant.
// exp(0*A) is the identity exactly. Throws std::range_error when t*A is so
// large that the result leaves the double range.
Matrix mat_exp(const Matrix& a, double t = 1.0);

struct OpNormResult {
    double value = 0.0;
    bool converged = true;
    int iterations = 0;
};

// Induced 2-norm via power iteration on A^H A. On hitting the iteration cap
// the best estimate is returned with converged=false rather than thrown.
OpNormResult op_norm_detailed(const Matrix& a, double rel_tol = 1e-10, int max_iterations = 20000);
double op_norm(const Matrix& a);

// Test/corpus generators. random_stable_matrix draws V D V^{-1} with
// eigenvalue real parts in [-3, -0.5] and a mild eigenvector basis, so the
// spectral abscissa is negative and exp(tA) is well conditioned.
Matrix random_matrix(SplitMix64& rng, std::size_t dim, double scale = 1.0);
Matrix random_stable_matrix(SplitMix64& rng, std::size_t dim);

} // namespace fiberlp

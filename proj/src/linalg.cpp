#include "fiberlp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fiberlp/errors.hpp"

namespace fiberlp {

LuFactors lu_factor(const Matrix& a) {
    const std::size_t d = a.dim();
    LuFactors f;
    f.dim = d;
    f.lu.assign(a.entries().begin(), a.entries().end());
    f.pivot.resize(d);

    auto at = [&](std::size_t i, std::size_t j) -> cplx& { return f.lu[i * d + j]; };

    for (std::size_t k = 0; k < d; ++k) {
        std::size_t piv = k;
        double best = std::abs(at(k, k));
        for (std::size_t i = k + 1; i < d; ++i) {
            const double cand = std::abs(at(i, k));
            if (cand > best) {
                best = cand;
                piv = i;
            }
        }
        f.pivot[k] = static_cast<int>(piv);
        if (best == 0.0) {
            f.singular = true;
            continue;
        }
        if (piv != k)
            for (std::size_t j = 0; j < d; ++j) std::swap(at(k, j), at(piv, j));
        const cplx inv_pivot = 1.0 / at(k, k);
        for (std::size_t i = k + 1; i < d; ++i) {
            const cplx lik = at(i, k) * inv_pivot;
            at(i, k) = lik;
            for (std::size_t j = k + 1; j < d; ++j) at(i, j) -= lik * at(k, j);
        }
    }
    return f;
}

cvector lu_solve(const LuFactors& f, const cvector& b) {
    const std::size_t d = f.dim;
    if (b.size() != d) throw std::invalid_argument("lu_solve: dimension mismatch");
    if (f.singular) throw SingularError("lu_solve: singular matrix", std::numeric_limits<double>::infinity());

    cvector x = b;
    // rows were swapped wholesale during factorization, so permute first,
    // then run the clean triangular solves
    for (std::size_t k = 0; k < d; ++k) {
        const auto piv = static_cast<std::size_t>(f.pivot[k]);
        if (piv != k) std::swap(x[k], x[piv]);
    }
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t i = k + 1; i < d; ++i) x[i] -= f.lu[i * d + k] * x[k];
    for (std::size_t ii = d; ii-- > 0;) {
        cplx s = x[ii];
        for (std::size_t j = ii + 1; j < d; ++j) s -= f.lu[ii * d + j] * x[j];
        x[ii] = s / f.lu[ii * d + ii];
    }
    return x;
}

Matrix lu_inverse(const LuFactors& f) {
    const std::size_t d = f.dim;
    Matrix inv(d);
    cvector e(d);
    for (std::size_t j = 0; j < d; ++j) {
        std::fill(e.begin(), e.end(), cplx{0.0});
        e[j] = 1.0;
        const cvector col = lu_solve(f, e);
        for (std::size_t i = 0; i < d; ++i) inv(i, j) = col[i];
    }
    return inv;
}

double condition_estimate(const Matrix& a, const LuFactors& f) {
    if (f.singular) return std::numeric_limits<double>::infinity();
    return a.norm_one() * lu_inverse(f).norm_one();
}

cvector solve_linear(const Matrix& a, const cvector& b, double cond_cap) {
    const LuFactors f = lu_factor(a);
    const double cond = condition_estimate(a, f);
    if (!(cond <= cond_cap))
        throw SingularError("solve_linear: matrix singular or ill-conditioned", cond);
    return lu_solve(f, b);
}

Matrix inverse(const Matrix& a, double cond_cap) {
    const LuFactors f = lu_factor(a);
    const double cond = condition_estimate(a, f);
    if (!(cond <= cond_cap))
        throw SingularError("inverse: matrix singular or ill-conditioned", cond);
    return lu_inverse(f);
}

namespace {

// Degree-13 Pade coefficients (Higham), threshold below which no scaling is
// needed for full double accuracy.
constexpr double kPadeTheta13 = 5.371920351148152;
constexpr double kPadeB[14] = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

Matrix pade13(const Matrix& a) {
    const std::size_t d = a.dim();
    const Matrix id = Matrix::identity(d);
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a2 * a4;

    Matrix u_inner = kPadeB[13] * a6 + kPadeB[11] * a4 + kPadeB[9] * a2;
    Matrix u = a * (a6 * u_inner + kPadeB[7] * a6 + kPadeB[5] * a4 + kPadeB[3] * a2 + kPadeB[1] * id);
    Matrix v_inner = kPadeB[12] * a6 + kPadeB[10] * a4 + kPadeB[8] * a2;
    Matrix v = a6 * v_inner + kPadeB[6] * a6 + kPadeB[4] * a4 + kPadeB[2] * a2 + kPadeB[0] * id;

    // (V - U) X = (V + U), column by column
    const Matrix lhs = v - u;
    const Matrix rhs = v + u;
    const LuFactors f = lu_factor(lhs);
    Matrix x(d);
    cvector col(d);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < d; ++i) col[i] = rhs(i, j);
        const cvector sol = lu_solve(f, col);
        for (std::size_t i = 0; i < d; ++i) x(i, j) = sol[i];
    }
    return x;
}

} // namespace

Matrix mat_exp(const Matrix& a, double t) {
    const std::size_t d = a.dim();
    if (d == 0) return Matrix();
    if (!a.is_finite() || !std::isfinite(t))
        throw std::invalid_argument("mat_exp: non-finite input");

    Matrix at = cplx{t} * a;
    const double eta = at.norm_one();
    if (eta == 0.0) return Matrix::identity(d);

    int squarings = 0;
    if (eta > kPadeTheta13) {
        squarings = static_cast<int>(std::ceil(std::log2(eta / kPadeTheta13)));
        if (squarings > 60)
            throw std::range_error("mat_exp: t*A too large, exp(tA) overflows");
        at *= cplx{std::ldexp(1.0, -squarings)};
    }

    Matrix e = pade13(at);
    for (int k = 0; k < squarings; ++k) e = e * e;

    if (!e.is_finite()) throw std::range_error("mat_exp: overflow in exp(tA)");
    return e;
}

OpNormResult op_norm_detailed(const Matrix& a, double rel_tol, int max_iterations) {
    const std::size_t d = a.dim();
    OpNormResult res;
    if (d == 0) return res;

    const Matrix b = a.adjoint() * a; // Hermitian, largest eigenvalue = |A|_2^2

    // Deterministic start. If it lands in the kernel of B, fall back to the
    // basis vector with the largest |A e_j|.
    cvector v(d);
    SplitMix64 start(0x5EED5EED5EED5EEDull);
    for (auto& c : v) c = cplx{1.0 + 0.25 * start.uniform01(), 0.25 * start.uniform01()};

    auto normalize = [](cvector& x) {
        const double n = norm2(x);
        if (n > 0.0)
            for (auto& c : x) c /= n;
        return n;
    };
    normalize(v);

    cvector bv = b * v;
    if (norm2(bv) == 0.0) {
        std::size_t best_j = 0;
        double best = -1.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double col = std::abs(b(j, j)); // (A^H A)_{jj} = |A e_j|^2
            if (col > best) {
                best = col;
                best_j = j;
            }
        }
        if (best == 0.0) return res; // A = 0
        std::fill(v.begin(), v.end(), cplx{0.0});
        v[best_j] = 1.0;
        bv = b * v;
    }

    double sigma2 = 0.0;
    for (int it = 1; it <= max_iterations; ++it) {
        res.iterations = it;
        cplx rayleigh = 0.0;
        for (std::size_t i = 0; i < d; ++i) rayleigh += std::conj(v[i]) * bv[i];
        const double next = std::max(rayleigh.real(), 0.0);
        const bool settled = std::abs(next - sigma2) <= rel_tol * std::max(next, 1e-300);
        sigma2 = next;
        if (settled) {
            res.value = std::sqrt(sigma2);
            return res;
        }
        v = bv;
        if (normalize(v) == 0.0) break;
        bv = b * v;
    }
    res.value = std::sqrt(sigma2);
    res.converged = false;
    return res;
}

double op_norm(const Matrix& a) { return op_norm_detailed(a).value; }

Matrix random_matrix(SplitMix64& rng, std::size_t dim, double scale) {
    Matrix m(dim);
    for (auto& e : m.entries()) e = scale * rng.unit_square();
    return m;
}

Matrix random_stable_matrix(SplitMix64& rng, std::size_t dim) {
    cvector eigs(dim);
    for (auto& l : eigs) l = cplx{rng.uniform(-3.0, -0.5), rng.uniform(-1.0, 1.0)};
    const Matrix d = Matrix::diagonal(eigs);
    Matrix basis = Matrix::identity(dim);
    basis += random_matrix(rng, dim, 0.3);
    return basis * d * inverse(basis);
}

} // namespace fiberlp

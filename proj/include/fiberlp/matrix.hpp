#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fiberlp {

using cplx = std::complex<double>;
using cvector = std::vector<cplx>;

// Dense square complex matrix, row-major. Dimensions are small (fibers are
// finite-dimensional), so everything is direct dense arithmetic.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {}
    Matrix(std::size_t dim, cvector entries);

    static Matrix identity(std::size_t dim);
    static Matrix diagonal(const cvector& diag);

    std::size_t dim() const noexcept { return dim_; }

    cplx& operator()(std::size_t i, std::size_t j) { return entries_[i * dim_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }

    std::span<const cplx> entries() const noexcept { return entries_; }
    std::span<cplx> entries() noexcept { return entries_; }

    Matrix& operator+=(const Matrix& rhs);
    Matrix& operator-=(const Matrix& rhs);
    Matrix& operator*=(cplx alpha);

    Matrix adjoint() const;
    bool is_finite() const noexcept;

    double max_abs() const noexcept;
    double norm_one() const noexcept; // max column sum
    double norm_inf() const noexcept; // max row sum
    double norm_fro() const noexcept;

private:
    std::size_t dim_ = 0;
    cvector entries_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator*(cplx alpha, Matrix m);
Matrix operator*(const Matrix& a, const Matrix& b);
cvector operator*(const Matrix& a, const cvector& x);

// y += alpha * x
void axpy(cplx alpha, const cvector& x, cvector& y);
cvector scaled(cplx alpha, cvector x);
cvector add(cvector x, const cvector& y);
cvector sub(cvector x, const cvector& y);

double norm2(std::span<const cplx> x) noexcept;
bool is_finite(std::span<const cplx> x) noexcept;

} // namespace fiberlp

#include "fiberlp/matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace fiberlp {

Matrix::Matrix(std::size_t dim, cvector entries) : dim_(dim), entries_(std::move(entries)) {
    if (entries_.size() != dim_ * dim_)
        throw std::invalid_argument("Matrix: entry count does not match dimension");
}

Matrix Matrix::identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(const cvector& diag) {
    Matrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += rhs.entries_[k];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= rhs.entries_[k];
    return *this;
}

Matrix& Matrix::operator*=(cplx alpha) {
    for (auto& e : entries_) e *= alpha;
    return *this;
}

Matrix Matrix::adjoint() const {
    Matrix m(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

bool Matrix::is_finite() const noexcept { return fiberlp::is_finite(entries_); }

double Matrix::max_abs() const noexcept {
    double m = 0.0;
    for (const auto& e : entries_) m = std::max(m, std::abs(e));
    return m;
}

double Matrix::norm_one() const noexcept {
    double m = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) col += std::abs((*this)(i, j));
        m = std::max(m, col);
    }
    return m;
}

double Matrix::norm_inf() const noexcept {
    double m = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < dim_; ++j) row += std::abs((*this)(i, j));
        m = std::max(m, row);
    }
    return m;
}

double Matrix::norm_fro() const noexcept {
    double s = 0.0;
    for (const auto& e : entries_) s += std::norm(e);
    return std::sqrt(s);
}

Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
Matrix operator*(cplx alpha, Matrix m) { return m *= alpha; }

Matrix operator*(const Matrix& a, const Matrix& b) {
    const std::size_t d = a.dim();
    Matrix c(d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t k = 0; k < d; ++k) {
            const cplx aik = a(i, k);
            for (std::size_t j = 0; j < d; ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

cvector operator*(const Matrix& a, const cvector& x) {
    const std::size_t d = a.dim();
    cvector y(d);
    for (std::size_t i = 0; i < d; ++i) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < d; ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

void axpy(cplx alpha, const cvector& x, cvector& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

cvector scaled(cplx alpha, cvector x) {
    for (auto& v : x) v *= alpha;
    return x;
}

cvector add(cvector x, const cvector& y) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
    return x;
}

cvector sub(cvector x, const cvector& y) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= y[i];
    return x;
}

double norm2(std::span<const cplx> x) noexcept {
    double s = 0.0;
    for (const auto& v : x) s += std::norm(v);
    return std::sqrt(s);
}

bool is_finite(std::span<const cplx> x) noexcept {
    for (const auto& v : x)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

} // namespace fiberlp

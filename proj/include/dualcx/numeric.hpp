#pragma once

// Exact scalar types and fraction-free dense kernels shared by all modules.
// Eigen is the only matrix dependency; integers and rationals are GMP-backed
// so entry growth during elimination never overflows.

#include <Eigen/Dense>
#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <stdexcept>

namespace dualcx {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IntMatrix = DenseMatrix<Int>;
using IntVector = DenseVector<Int>;
using RatMatrix = DenseMatrix<Rat>;
using RatVector = DenseVector<Rat>;

inline Int rat_floor(const Rat& q) {
    Int num = boost::multiprecision::numerator(q);
    Int den = boost::multiprecision::denominator(q);
    Int f = num / den;
    if (num % den != 0 && (num < 0) != (den < 0))
        f -= 1;
    return f;
}

/// Rank of a matrix over the fraction field, by fraction-free (Bareiss)
/// elimination. Exact for integer scalars; no floating point anywhere.
template <typename Scalar>
Eigen::Index fraction_free_rank(DenseMatrix<Scalar> m) {
    const Eigen::Index rows = m.rows(), cols = m.cols();
    Scalar prev(1);
    Eigen::Index r = 0;
    for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
        Eigen::Index pivot = -1;
        for (Eigen::Index i = r; i < rows; ++i) {
            if (m(i, c) != 0) { pivot = i; break; }
        }
        if (pivot < 0) continue;
        if (pivot != r) m.row(pivot).swap(m.row(r));
        for (Eigen::Index i = r + 1; i < rows; ++i) {
            for (Eigen::Index j = c + 1; j < cols; ++j)
                m(i, j) = (m(r, c) * m(i, j) - m(i, c) * m(r, j)) / prev;
            m(i, c) = Scalar(0);
        }
        prev = m(r, c);
        ++r;
    }
    return r;
}

/// Determinant by Bareiss elimination; throws on non-square input.
template <typename Scalar>
Scalar fraction_free_determinant(DenseMatrix<Scalar> m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("determinant of non-square matrix");
    const Eigen::Index n = m.rows();
    if (n == 0) return Scalar(1);
    Scalar prev(1);
    int sign = 1;
    for (Eigen::Index r = 0; r < n; ++r) {
        Eigen::Index pivot = -1;
        for (Eigen::Index i = r; i < n; ++i) {
            if (m(i, r) != 0) { pivot = i; break; }
        }
        if (pivot < 0) return Scalar(0);
        if (pivot != r) {
            m.row(pivot).swap(m.row(r));
            sign = -sign;
        }
        for (Eigen::Index i = r + 1; i < n; ++i) {
            for (Eigen::Index j = r + 1; j < n; ++j)
                m(i, j) = (m(r, r) * m(i, j) - m(i, r) * m(r, j)) / prev;
            m(i, r) = Scalar(0);
        }
        prev = m(r, r);
    }
    Scalar det = m(n - 1, n - 1);
    return sign < 0 ? Scalar(-det) : det;
}

}  // namespace dualcx

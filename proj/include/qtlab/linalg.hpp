#ifndef QTLAB_LINALG_HPP
#define QTLAB_LINALG_HPP

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "qtlab/scalar.hpp"

namespace qtlab {

template <class T>
class Mat {
public:
    Mat() : rows_(0), cols_(0) {}
    Mat(std::size_t r, std::size_t c) : rows_(r), cols_(c), data_(r * c, T(0)) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const Mat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

private:
    std::size_t rows_, cols_;
    std::vector<T> data_;
};

using IMat = Mat<Int>;

namespace detail {

inline Int det_cofactor(const IMat& a, std::vector<int>& rows, std::vector<int>& cols) {
    const std::size_t k = rows.size();
    if (k == 1) return a(rows[0], cols[0]);
    if (k == 2)
        return a(rows[0], cols[0]) * a(rows[1], cols[1]) -
               a(rows[0], cols[1]) * a(rows[1], cols[0]);
    Int acc = 0;
    int r0 = rows[0];
    std::vector<int> sub_rows(rows.begin() + 1, rows.end());
    for (std::size_t j = 0; j < k; ++j) {
        const Int& piv = a(r0, cols[j]);
        if (piv == 0) continue;
        std::vector<int> sub_cols;
        sub_cols.reserve(k - 1);
        for (std::size_t l = 0; l < k; ++l)
            if (l != j) sub_cols.push_back(cols[l]);
        Int minor = det_cofactor(a, sub_rows, sub_cols);
        if (j % 2 == 0)
            acc += piv * minor;
        else
            acc -= piv * minor;
    }
    return acc;
}

}  // namespace detail

// Fraction-free (Bareiss) determinant; exact over the integers.
inline Int det_bareiss(IMat a) {
    const std::size_t n = a.rows();
    if (n == 0) return 1;
    Int sign = 1;
    Int prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a(p, k) == 0) ++p;
            if (p == n) return 0;
            for (std::size_t j = k; j < n; ++j) std::swap(a(k, j), a(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                a(i, j) = (a(k, k) * a(i, j) - a(i, k) * a(k, j)) / prev;
            }
            a(i, k) = 0;
        }
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

// Exact determinant: cofactor expansion for small sizes, Bareiss beyond.
inline Int det(const IMat& a) {
    const std::size_t n = a.rows();
    if (n == 0) return 1;
    if (n <= 3) {
        std::vector<int> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<int>(i);
        std::vector<int> rows = idx, cols = idx;
        return detail::det_cofactor(a, rows, cols);
    }
    return det_bareiss(a);
}

// Determinant of the principal submatrix on the given row/column indices.
inline Int principal_minor(const IMat& a, const std::vector<int>& idx) {
    if (idx.empty()) return 1;
    if (idx.size() <= 3) {
        std::vector<int> rows = idx, cols = idx;
        return detail::det_cofactor(a, rows, cols);
    }
    IMat sub(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j)
            sub(i, j) = a(idx[i], idx[j]);
    return det_bareiss(std::move(sub));
}

// Smith normal form: returns the min(r,c) diagonal entries d_1 | d_2 | ...
// with nonzero entries positive. Pivoting on smallest nonzero absolute value.
inline std::vector<Int> smith_invariant_factors(IMat a) {
    const std::size_t r = a.rows(), c = a.cols();
    const std::size_t k = std::min(r, c);
    std::vector<Int> factors(k, 0);
    std::size_t t = 0;
    while (t < k) {
        // locate smallest nonzero |entry| in the trailing block
        std::size_t pi = t, pj = t;
        Int best = 0;
        for (std::size_t i = t; i < r; ++i)
            for (std::size_t j = t; j < c; ++j) {
                if (a(i, j) == 0) continue;
                Int v = abs(a(i, j));
                if (best == 0 || v < best) {
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        if (best == 0) break;
        for (std::size_t j = 0; j < c; ++j) std::swap(a(t, j), a(pi, j));
        for (std::size_t i = 0; i < r; ++i) std::swap(a(i, t), a(i, pj));

        bool clean = true;
        for (std::size_t i = t + 1; i < r; ++i) {
            if (a(i, t) == 0) continue;
            Int q = a(i, t) / a(t, t);
            for (std::size_t j = t; j < c; ++j) a(i, j) -= q * a(t, j);
            if (a(i, t) != 0) clean = false;
        }
        for (std::size_t j = t + 1; j < c; ++j) {
            if (a(t, j) == 0) continue;
            Int q = a(t, j) / a(t, t);
            for (std::size_t i = t; i < r; ++i) a(i, j) -= q * a(i, t);
            if (a(t, j) != 0) clean = false;
        }
        if (!clean) continue;  // smaller remainders appeared; re-pivot

        // pivot must divide the rest of the block
        bool divides = true;
        for (std::size_t i = t + 1; i < r && divides; ++i)
            for (std::size_t j = t + 1; j < c && divides; ++j)
                if (a(i, j) % a(t, t) != 0) {
                    // fold row i into row t and restart this step
                    for (std::size_t l = t; l < c; ++l) a(t, l) += a(i, l);
                    divides = false;
                }
        if (!divides) continue;

        factors[t] = abs(a(t, t));
        ++t;
    }
    return factors;
}

// Reduced row echelon form over a field, in place; returns pivot columns.
template <class F>
inline std::vector<std::size_t> rref(Mat<F>& a) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
        std::size_t p = row;
        while (p < a.rows() && scalar_is_zero(a(p, col))) ++p;
        if (p == a.rows()) continue;
        if (p != row)
            for (std::size_t j = col; j < a.cols(); ++j) std::swap(a(row, j), a(p, j));
        F inv = F(1) / a(row, col);
        for (std::size_t j = col; j < a.cols(); ++j) a(row, j) *= inv;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == row || scalar_is_zero(a(i, col))) continue;
            F f = a(i, col);
            for (std::size_t j = col; j < a.cols(); ++j) a(i, j) -= f * a(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace qtlab

#endif

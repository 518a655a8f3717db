#ifndef QTLAB_VECTOR_MATRIX_HPP
#define QTLAB_VECTOR_MATRIX_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qtlab/linalg.hpp"
#include "qtlab/scalar.hpp"
#include "qtlab/shape.hpp"

namespace qtlab {

enum class CoefficientMode { integer, gf2 };

// An m x m matrix whose (i,j) entry is a vector of length n_j, encoding the
// characteristic function of a quasitoric manifold (integer mode) or small
// cover (gf2 mode) over a product of simplices. Immutable after construction.
class VectorMatrix {
public:
    using Blocks = std::vector<std::vector<std::vector<Int>>>;  // [i][j][p]

    VectorMatrix(Shape shape, CoefficientMode mode, Blocks blocks)
        : shape_(std::move(shape)), mode_(mode), blocks_(std::move(blocks)) {
        const std::size_t m = static_cast<std::size_t>(shape_.factors());
        if (blocks_.size() != m)
            throw std::invalid_argument("VectorMatrix: wrong number of block rows");
        for (std::size_t i = 0; i < m; ++i) {
            if (blocks_[i].size() != m)
                throw std::invalid_argument("VectorMatrix: wrong number of block columns");
            for (std::size_t j = 0; j < m; ++j)
                if (blocks_[i][j].size() != static_cast<std::size_t>(shape_.dim(j)))
                    throw std::invalid_argument("VectorMatrix: block (" + std::to_string(i) +
                                                "," + std::to_string(j) + ") has wrong length");
        }
        if (mode_ == CoefficientMode::gf2)
            for (auto& row : blocks_)
                for (auto& blk : row)
                    for (auto& v : blk) v = ((v % 2) + 2) % 2;
    }

    // All-zero off-diagonal blocks, all-one diagonal blocks.
    static VectorMatrix identity(const Shape& shape,
                                 CoefficientMode mode = CoefficientMode::integer) {
        const std::size_t m = static_cast<std::size_t>(shape.factors());
        Blocks b(m, std::vector<std::vector<Int>>(m));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                b[i][j].assign(static_cast<std::size_t>(shape.dim(j)), i == j ? Int(1) : Int(0));
        return VectorMatrix(shape, mode, std::move(b));
    }

    const Shape& shape() const { return shape_; }
    CoefficientMode mode() const { return mode_; }
    const Blocks& blocks() const { return blocks_; }
    const std::vector<Int>& block(std::size_t i, std::size_t j) const { return blocks_[i][j]; }
    // component p (0-based) of the vector a_{i+1}^{j+1}
    const Int& entry(std::size_t i, std::size_t j, std::size_t p) const {
        return blocks_[i][j][p];
    }

    bool block_is_zero(std::size_t i, std::size_t j) const {
        for (const Int& v : blocks_[i][j])
            if (v != 0) return false;
        return true;
    }

    // true iff every diagonal component equals 1 (the unit in gf2 mode)
    bool is_normalized() const {
        for (std::size_t i = 0; i < blocks_.size(); ++i)
            for (const Int& v : blocks_[i][i])
                if (v != 1) return false;
        return true;
    }

    bool operator==(const VectorMatrix& o) const {
        return shape_ == o.shape_ && mode_ == o.mode_ && blocks_ == o.blocks_;
    }

private:
    Shape shape_;
    CoefficientMode mode_;
    Blocks blocks_;
};

// The m x m scalar submatrix A_{k_1...k_m}: column j is the k_j-th column
// of the j-th block column.
inline IMat submatrix(const VectorMatrix& a, const MultiIndex& k) {
    const std::size_t m = static_cast<std::size_t>(a.shape().factors());
    if (k.size() != m) throw std::out_of_range("submatrix: multi-index has wrong length");
    for (std::size_t j = 0; j < m; ++j)
        if (k[j] < 1 || k[j] > a.shape().dim(j))
            throw std::out_of_range("submatrix: multi-index component out of range");
    IMat s(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            s(i, j) = a.entry(i, j, static_cast<std::size_t>(k[j] - 1));
    return s;
}

struct MinorRecord {
    MultiIndex multi_index;
    std::vector<int> subset;  // 0-based factor indices, nonempty
    Int value;
};

struct MinorReport {
    std::vector<MinorRecord> records;
};

namespace detail {

// Visit every (multi-index, nonempty subset, minor value); stop early if the
// visitor returns false.
template <class Visitor>
inline void for_each_principal_minor(const VectorMatrix& a, Visitor&& visit) {
    const int m = a.shape().factors();
    for (const auto& k : multi_indices(a.shape())) {
        IMat s = submatrix(a, k);
        for (unsigned mask = 1; mask < (1u << m); ++mask) {
            std::vector<int> subset;
            for (int i = 0; i < m; ++i)
                if (mask & (1u << i)) subset.push_back(i);
            Int v = principal_minor(s, subset);
            if (!visit(k, subset, std::move(v))) return;
        }
    }
}

}  // namespace detail

inline MinorReport principal_minors(const VectorMatrix& a) {
    MinorReport report;
    detail::for_each_principal_minor(a, [&](const MultiIndex& k, std::vector<int> subset, Int v) {
        report.records.push_back({k, std::move(subset), std::move(v)});
        return true;
    });
    return report;
}

struct ValidityResult {
    bool valid;
    std::optional<MinorRecord> violation;  // first violating (multi-index, subset)
};

// Integer mode: every principal minor must be +-1.
// GF2 mode: every principal minor must be 1 mod 2.
inline ValidityResult is_valid(const VectorMatrix& a) {
    ValidityResult result{true, std::nullopt};
    const bool gf2 = a.mode() == CoefficientMode::gf2;
    detail::for_each_principal_minor(a, [&](const MultiIndex& k, std::vector<int> subset, Int v) {
        const bool ok = gf2 ? (v % 2 != 0) : (v == 1 || v == -1);
        if (!ok) {
            result.valid = false;
            result.violation = MinorRecord{k, std::move(subset), std::move(v)};
            return false;
        }
        return true;
    });
    return result;
}

struct SignFlip {
    int block_column;  // 0-based j
    int position;      // 0-based coordinate within the block column
};

struct NormalizeResult {
    VectorMatrix matrix;
    std::vector<SignFlip> flips;
};

// Flip scalar columns so every diagonal component becomes +1. Meaningless in
// gf2 mode, where the input is returned unchanged.
inline NormalizeResult normalize_signs(const VectorMatrix& a) {
    if (a.mode() == CoefficientMode::gf2) return {a, {}};
    const std::size_t m = static_cast<std::size_t>(a.shape().factors());
    VectorMatrix::Blocks blocks = a.blocks();
    std::vector<SignFlip> flips;
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t p = 0; p < blocks[j][j].size(); ++p) {
            const Int& d = blocks[j][j][p];
            if (d != 1 && d != -1)
                throw InvalidDiagonal("diagonal component a^" + std::to_string(j + 1) + "_{" +
                                      std::to_string(j + 1) + "," + std::to_string(p + 1) +
                                      "} is not a unit");
            if (d == -1) {
                for (std::size_t i = 0; i < m; ++i) blocks[i][j][p] = -blocks[i][j][p];
                flips.push_back({static_cast<int>(j), static_cast<int>(p)});
            }
        }
    }
    return {VectorMatrix(a.shape(), a.mode(), std::move(blocks)), std::move(flips)};
}

// The (n+m) x n matrix stacking the m x n flattening of A over I_n, rows in
// facet order F^1_0,...,F^m_0, F^1_1,...,F^m_{n_m}.
inline IMat characteristic_matrix(const VectorMatrix& a) {
    const std::size_t m = static_cast<std::size_t>(a.shape().factors());
    const std::size_t n = static_cast<std::size_t>(a.shape().total());
    IMat lambda(n + m, n);
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t col = 0;
        for (std::size_t j = 0; j < m; ++j)
            for (const Int& v : a.block(i, j)) lambda(i, col++) = v;
    }
    for (std::size_t l = 0; l < n; ++l) lambda(m + l, l) = 1;
    return lambda;
}

}  // namespace qtlab

#endif

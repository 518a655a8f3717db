#ifndef QTLAB_NORMAL_FORM_HPP
#define QTLAB_NORMAL_FORM_HPP

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qtlab/scalar.hpp"
#include "qtlab/shape.hpp"
#include "qtlab/vector_matrix.hpp"

namespace qtlab {

// sigma[i] is the 0-based image of factor i.
using Permutation = std::vector<int>;

inline Permutation inverse(const Permutation& sigma) {
    Permutation inv(sigma.size());
    for (std::size_t i = 0; i < sigma.size(); ++i) inv[static_cast<std::size_t>(sigma[i])] = static_cast<int>(i);
    return inv;
}

// A_sigma = E_sigma A E_sigma^{-1}: block (i,j) of the result is block
// (sigma^{-1}(i), sigma^{-1}(j)) of A, with the shape dims permuted the same
// way. The minor multiset is preserved.
inline VectorMatrix conjugate(const VectorMatrix& a, const Permutation& sigma) {
    const std::size_t m = static_cast<std::size_t>(a.shape().factors());
    if (sigma.size() != m) throw std::invalid_argument("conjugate: permutation has wrong size");
    std::vector<bool> seen(m, false);
    for (int s : sigma) {
        if (s < 0 || static_cast<std::size_t>(s) >= m || seen[static_cast<std::size_t>(s)])
            throw std::invalid_argument("conjugate: not a permutation");
        seen[static_cast<std::size_t>(s)] = true;
    }
    Permutation inv = inverse(sigma);
    std::vector<int> dims(m);
    for (std::size_t j = 0; j < m; ++j) dims[j] = a.shape().dim(static_cast<std::size_t>(inv[j]));
    VectorMatrix::Blocks blocks(m, std::vector<std::vector<Int>>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            blocks[i][j] = a.block(static_cast<std::size_t>(inv[i]), static_cast<std::size_t>(inv[j]));
    return VectorMatrix(Shape(std::move(dims)), a.mode(), std::move(blocks));
}

enum class NormalFormStatus { unipotent, cyclic, general_non_bott, invalid };

struct NormalFormResult {
    NormalFormStatus status;
    Permutation sigma;                        // unipotent / cyclic
    std::optional<VectorMatrix> normal_form;  // conjugated matrix in form
    std::vector<Int> cyclic_components;       // b_1..b_m, cyclic only
    std::optional<MinorRecord> certificate;   // invalid / general_non_bott witness
};

namespace detail {

inline bool is_block_upper_triangular(const VectorMatrix& a) {
    const std::size_t m = static_cast<std::size_t>(a.shape().factors());
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (!a.block_is_zero(i, j)) return false;
    return true;
}

// Nonzero blocks only on the diagonal, superdiagonal and the (m,1) corner;
// extracts the equal nonzero component of each off-diagonal block.
inline bool match_cyclic_form(const VectorMatrix& a, std::vector<Int>& components) {
    const std::size_t m = static_cast<std::size_t>(a.shape().factors());
    components.assign(m, Int(0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j) continue;
            const bool allowed = (j == i + 1) || (i == m - 1 && j == 0);
            if (!allowed) {
                if (!a.block_is_zero(i, j)) return false;
                continue;
            }
            // b^{j+1} sits at (j-1, j); the corner block is b^1
            Int common = 0;
            for (const Int& v : a.block(i, j)) {
                if (v == 0) continue;
                if (common == 0)
                    common = v;
                else if (v != common)
                    return false;
            }
            if (common == 0) return false;  // every b^i must be nonzero
            components[j] = common;
        }
    return true;
}

}  // namespace detail

// Classification of a normalized valid matrix into the
// unipotent (Bott) form, the cyclic form, or neither.
inline NormalFormResult classify(const VectorMatrix& a, int permutation_guard = 10) {
    const std::size_t m = static_cast<std::size_t>(a.shape().factors());
    const bool gf2 = a.mode() == CoefficientMode::gf2;
    if (!gf2 && !a.is_normalized())
        throw NotNormalized("classify: matrix is not sign-normalized");
    bool all_one = true;
    bool proper_all_one = true;
    bool some_det_minus_one = false;
    std::optional<MinorRecord> invalid_cert;
    std::optional<MinorRecord> witness;
    detail::for_each_principal_minor(a, [&](const MultiIndex& k, std::vector<int> subset, Int v) {
        const bool unit = gf2 ? (v % 2 != 0) : (v == 1 || v == -1);
        if (!unit) {
            invalid_cert = MinorRecord{k, std::move(subset), std::move(v)};
            return false;
        }
        if (gf2) return true;  // mod 2 there is no sign to track
        if (v == -1) {
            all_one = false;
            if (subset.size() == m) {
                some_det_minus_one = true;
            } else {
                proper_all_one = false;
                if (!witness) witness = MinorRecord{k, std::move(subset), std::move(v)};
            }
        }
        return true;
    });
    if (invalid_cert)
        return {NormalFormStatus::invalid, {}, std::nullopt, {}, std::move(invalid_cert)};

    if (gf2 || all_one) {
        // Unipotent branch: an order with edge i->j for every nonzero
        // off-diagonal block must exist; topological sort, smallest original
        // index first.
        std::vector<int> indegree(m, 0);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (i != j && !a.block_is_zero(i, j)) ++indegree[j];
        std::vector<int> order;
        std::vector<bool> placed(m, false);
        for (std::size_t step = 0; step < m; ++step) {
            int next = -1;
            for (std::size_t i = 0; i < m; ++i)
                if (!placed[i] && indegree[i] == 0) {
                    next = static_cast<int>(i);
                    break;
                }
            if (next < 0)
                throw InvariantViolation(
                    "classify: dependency cycle despite all principal minors being 1");
            placed[static_cast<std::size_t>(next)] = true;
            order.push_back(next);
            for (std::size_t j = 0; j < m; ++j)
                if (!placed[j] && !a.block_is_zero(static_cast<std::size_t>(next), j))
                    --indegree[j];
        }
        Permutation sigma(m);
        for (std::size_t pos = 0; pos < m; ++pos)
            sigma[static_cast<std::size_t>(order[pos])] = static_cast<int>(pos);
        VectorMatrix nf = conjugate(a, sigma);
        if (!detail::is_block_upper_triangular(nf))
            throw InvariantViolation("classify: topological order is not triangularizing");
        return {NormalFormStatus::unipotent, std::move(sigma), std::move(nf), {}, std::nullopt};
    }

    if (proper_all_one && some_det_minus_one) {
        if (static_cast<int>(m) > permutation_guard)
            throw PermutationSearchExceeded("classify: cyclic search beyond permutation guard");
        Permutation sigma(m);
        std::iota(sigma.begin(), sigma.end(), 0);
        std::sort(sigma.begin(), sigma.end());
        do {
            VectorMatrix nf = conjugate(a, sigma);
            std::vector<Int> components;
            if (!detail::match_cyclic_form(nf, components)) continue;
            Int prod = 1;
            for (const Int& b : components) prod *= b;
            Int expected = (m % 2 == 0) ? Int(2) : Int(-2);
            if (prod != expected)
                throw InvariantViolation("classify: cyclic component product is not (-1)^m*2");
            return {NormalFormStatus::cyclic, sigma, std::move(nf), std::move(components),
                    std::nullopt};
        } while (std::next_permutation(sigma.begin(), sigma.end()));
        throw InvariantViolation(
            "classify: no cyclic conjugate despite proper minors 1 and a determinant -1");
    }

    return {NormalFormStatus::general_non_bott, {}, std::nullopt, {}, std::move(witness)};
}

// Per-stage data of the generalized Bott tower read off the triangular form.
struct BottTowerStage {
    int fiber_dim;
    std::vector<std::vector<Int>> exponents;  // b_i^j for i < j, in tower order
};

struct BottTowerDescription {
    std::vector<BottTowerStage> stages;
};

inline BottTowerDescription bott_tower(const VectorMatrix& a) {
    NormalFormResult r = classify(a);
    if (r.status != NormalFormStatus::unipotent)
        throw NotUnipotent("bott_tower: matrix does not classify as unipotent");
    const VectorMatrix& nf = *r.normal_form;
    const std::size_t m = static_cast<std::size_t>(nf.shape().factors());
    BottTowerDescription tower;
    for (std::size_t j = 0; j < m; ++j) {
        BottTowerStage stage;
        stage.fiber_dim = nf.shape().dim(j);
        for (std::size_t i = 0; i < j; ++i) stage.exponents.push_back(nf.block(i, j));
        tower.stages.push_back(std::move(stage));
    }
    return tower;
}

}  // namespace qtlab

#endif

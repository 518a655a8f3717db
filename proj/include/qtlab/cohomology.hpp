#ifndef QTLAB_COHOMOLOGY_HPP
#define QTLAB_COHOMOLOGY_HPP

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qtlab/linalg.hpp"
#include "qtlab/scalar.hpp"
#include "qtlab/shape.hpp"
#include "qtlab/vector_matrix.hpp"

namespace qtlab {

// Exponent vector of a monomial in the generators y_1..y_m.
using Monomial = std::vector<int>;
using Polynomial = std::map<Monomial, Int>;

namespace detail {

inline void enumerate_monomials_rec(int m, int pos, int remaining, Monomial& cur,
                                    std::vector<Monomial>& out) {
    if (pos == m - 1) {
        cur[static_cast<std::size_t>(pos)] = remaining;
        out.push_back(cur);
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        cur[static_cast<std::size_t>(pos)] = e;
        enumerate_monomials_rec(m, pos + 1, remaining - e, cur, out);
    }
}

}  // namespace detail

// All degree-d monomials in m variables, lexicographically descending in the
// exponent of y_1 first (a fixed deterministic order).
inline std::vector<Monomial> monomials_of_degree(int m, int d) {
    std::vector<Monomial> out;
    Monomial cur(static_cast<std::size_t>(m), 0);
    detail::enumerate_monomials_rec(m, 0, d, cur, out);
    return out;
}

// The m generating relations g_k = y_k * prod_j (sum_i a^k_{ij} y_i),
// expanded as sparse polynomials over the integers.
inline std::vector<Polynomial> relation_polynomials(const VectorMatrix& a) {
    const std::size_t m = static_cast<std::size_t>(a.shape().factors());
    std::vector<Polynomial> gs;
    for (std::size_t k = 0; k < m; ++k) {
        Polynomial p;
        Monomial yk(m, 0);
        yk[k] = 1;
        p[yk] = 1;
        for (int j = 0; j < a.shape().dim(k); ++j) {
            Polynomial next;
            for (const auto& [mono, coeff] : p) {
                for (std::size_t i = 0; i < m; ++i) {
                    const Int& c = a.entry(i, k, static_cast<std::size_t>(j));
                    if (c == 0) continue;
                    Monomial prod = mono;
                    ++prod[i];
                    next[prod] += coeff * c;
                }
            }
            for (auto it = next.begin(); it != next.end();)
                it = it->second == 0 ? next.erase(it) : std::next(it);
            p = std::move(next);
        }
        gs.push_back(std::move(p));
    }
    return gs;
}

// Coefficients of prod_i (1 + t + ... + t^{n_i}): the expected per-degree
// ranks of the quotient ring.
inline std::vector<std::size_t> poincare_coefficients(const Shape& s) {
    std::vector<std::size_t> c{1};
    for (int d : s.dims()) {
        std::vector<std::size_t> next(c.size() + static_cast<std::size_t>(d), 0);
        for (std::size_t i = 0; i < c.size(); ++i)
            for (int e = 0; e <= d; ++e) next[i + static_cast<std::size_t>(e)] += c[i];
        c = std::move(next);
    }
    return c;
}

// The finite-rank graded quotient ring over a field F (Rat or GF2), with a
// fixed monomial basis {e : e_k <= n_k} per degree and an exact reduction map
// expressing every degree-d monomial in that basis.
template <class F>
class GradedRing {
public:
    struct DegreePiece {
        std::vector<Monomial> monomials;   // all degree-d monomials
        std::map<Monomial, int> index;     // monomial -> position
        std::vector<int> basis;            // positions of basis monomials
        std::vector<std::vector<F>> reduce;  // [position] -> coords over basis
    };

    Shape shape;
    CoefficientMode mode;
    std::vector<Polynomial> relations;
    std::vector<DegreePiece> pieces;  // degree 0..n

    int top_degree() const { return shape.total(); }
    std::size_t rank(int d) const {
        if (d < 0 || d > top_degree()) return 0;
        return pieces[static_cast<std::size_t>(d)].basis.size();
    }
};

// Assemble the degree-d relation rows (monomial multiples of the g_k) in the
// coordinates of the full degree-d monomial list.
inline std::vector<std::vector<Int>> relation_rows(const Shape& shape,
                                                   const std::vector<Polynomial>& gs,
                                                   const std::vector<Monomial>& monos,
                                                   const std::map<Monomial, int>& index, int d) {
    const int m = shape.factors();
    std::vector<std::vector<Int>> rows;
    for (std::size_t k = 0; k < gs.size(); ++k) {
        const int gdeg = shape.dim(k) + 1;
        if (gdeg > d) continue;
        for (const Monomial& mu : monomials_of_degree(m, d - gdeg)) {
            std::vector<Int> row(monos.size(), 0);
            for (const auto& [mono, coeff] : gs[k]) {
                Monomial shifted = mono;
                for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] += mu[i];
                row[static_cast<std::size_t>(index.at(shifted))] = coeff;
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

template <class F>
inline GradedRing<F> build_ring(const VectorMatrix& a) {
    ValidityResult v = is_valid(a);
    if (!v.valid) throw std::invalid_argument("build_ring: matrix is not valid");

    GradedRing<F> ring{a.shape(), a.mode(), relation_polynomials(a), {}};
    const int m = a.shape().factors();
    const int n = a.shape().total();
    const std::vector<std::size_t> expected = poincare_coefficients(a.shape());

    for (int d = 0; d <= n; ++d) {
        typename GradedRing<F>::DegreePiece piece;
        piece.monomials = monomials_of_degree(m, d);
        for (std::size_t p = 0; p < piece.monomials.size(); ++p)
            piece.index[piece.monomials[p]] = static_cast<int>(p);

        std::vector<int> nonbasis;
        for (std::size_t p = 0; p < piece.monomials.size(); ++p) {
            bool in_basis = true;
            for (int i = 0; i < m; ++i)
                if (piece.monomials[p][static_cast<std::size_t>(i)] > a.shape().dim(i)) {
                    in_basis = false;
                    break;
                }
            (in_basis ? piece.basis : nonbasis).push_back(static_cast<int>(p));
        }
        if (piece.basis.size() != expected[static_cast<std::size_t>(d)])
            throw InvariantViolation("build_ring: candidate basis size mismatch in degree " +
                                     std::to_string(d));

        const std::vector<std::vector<Int>> rows =
            relation_rows(a.shape(), ring.relations, piece.monomials, piece.index, d);

        // columns reordered: non-basis monomials first, then basis monomials
        std::vector<int> colperm = nonbasis;
        colperm.insert(colperm.end(), piece.basis.begin(), piece.basis.end());
        Mat<F> mat(rows.size(), colperm.size());
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t c = 0; c < colperm.size(); ++c)
                mat(r, c) = scalar_from_int<F>(rows[r][static_cast<std::size_t>(colperm[c])]);
        const std::vector<std::size_t> pivots = rref(mat);

        // every non-basis monomial must be eliminated, and nothing else
        if (pivots.size() != nonbasis.size())
            throw InvariantViolation("build_ring: relation rank mismatch in degree " +
                                     std::to_string(d));
        for (std::size_t p = 0; p < pivots.size(); ++p)
            if (pivots[p] != p)
                throw InvariantViolation("build_ring: pivot escaped the non-basis block in degree " +
                                         std::to_string(d));

        piece.reduce.assign(piece.monomials.size(), {});
        for (std::size_t b = 0; b < piece.basis.size(); ++b) {
            std::vector<F> unit(piece.basis.size(), F(0));
            unit[b] = F(1);
            piece.reduce[static_cast<std::size_t>(piece.basis[b])] = std::move(unit);
        }
        for (std::size_t r = 0; r < nonbasis.size(); ++r) {
            std::vector<F> coords(piece.basis.size(), F(0));
            for (std::size_t b = 0; b < piece.basis.size(); ++b)
                coords[b] = -mat(r, nonbasis.size() + b);
            piece.reduce[static_cast<std::size_t>(nonbasis[r])] = std::move(coords);
        }
        ring.pieces.push_back(std::move(piece));
    }
    return ring;
}

// Homogeneous element: coordinates over the degree-d basis. Elements of
// degree above the top are identically zero and carry no coordinates.
template <class F>
struct RingElement {
    int degree = 0;
    std::vector<F> coords;

    bool is_zero() const {
        for (const F& c : coords)
            if (!scalar_is_zero(c)) return false;
        return true;
    }
};

template <class F>
inline RingElement<F> ring_unit(const GradedRing<F>& r) {
    (void)r;
    return {0, {F(1)}};
}

// Degree-1 element sum_j coeffs[j] * y_j.
template <class F>
inline RingElement<F> linear_element(const GradedRing<F>& r, const std::vector<F>& coeffs) {
    const std::size_t m = static_cast<std::size_t>(r.shape.factors());
    if (coeffs.size() != m) throw std::invalid_argument("linear_element: wrong coefficient count");
    const auto& piece = r.pieces[1];
    RingElement<F> e{1, std::vector<F>(piece.basis.size(), F(0))};
    for (std::size_t j = 0; j < m; ++j) {
        Monomial mono(m, 0);
        mono[j] = 1;
        e.coords[static_cast<std::size_t>(piece.index.at(mono))] += coeffs[j];
    }
    return e;
}

// Product with coordinates in any Q-algebra C (F itself, or polynomials over
// F for parametric computations); the reduction maps stay in F.
template <class F, class C, class MulByF>
inline std::vector<C> multiply_coords(const GradedRing<F>& r, int du, const std::vector<C>& u,
                                      int dv, const std::vector<C>& v, MulByF&& mul_by_f) {
    const int d = du + dv;
    if (d > r.top_degree()) return {};
    const auto& pu = r.pieces[static_cast<std::size_t>(du)];
    const auto& pv = r.pieces[static_cast<std::size_t>(dv)];
    const auto& pd = r.pieces[static_cast<std::size_t>(d)];
    std::vector<C> out(pd.basis.size(), C());
    for (std::size_t bu = 0; bu < u.size(); ++bu) {
        const Monomial& mu = pu.monomials[static_cast<std::size_t>(pu.basis[bu])];
        for (std::size_t bv = 0; bv < v.size(); ++bv) {
            const Monomial& mv = pv.monomials[static_cast<std::size_t>(pv.basis[bv])];
            C c = u[bu] * v[bv];
            Monomial prod = mu;
            for (std::size_t i = 0; i < prod.size(); ++i) prod[i] += mv[i];
            const auto& red = pd.reduce[static_cast<std::size_t>(pd.index.at(prod))];
            for (std::size_t b = 0; b < red.size(); ++b) {
                if (scalar_is_zero(red[b])) continue;
                out[b] += mul_by_f(c, red[b]);
            }
        }
    }
    return out;
}

template <class F>
inline RingElement<F> multiply(const GradedRing<F>& r, const RingElement<F>& u,
                               const RingElement<F>& v) {
    RingElement<F> out;
    out.degree = u.degree + v.degree;
    out.coords = multiply_coords(r, u.degree, u.coords, v.degree, v.coords,
                                 [](const F& a, const F& b) { return a * b; });
    return out;
}

template <class F>
inline RingElement<F> power(const GradedRing<F>& r, const RingElement<F>& u, int k) {
    if (k < 0) throw std::invalid_argument("power: negative exponent");
    RingElement<F> acc = ring_unit(r);
    for (int i = 0; i < k; ++i) acc = multiply(r, acc, u);
    return acc;
}

// Smallest k with u^k = 0 for homogeneous u of positive degree; bounded by
// the top degree, so always defined.
template <class F>
inline int nilpotency_degree(const GradedRing<F>& r, const RingElement<F>& u) {
    if (u.degree < 1) throw std::invalid_argument("nilpotency_degree: need positive degree");
    if (u.is_zero()) return 1;
    RingElement<F> acc = u;
    int k = 1;
    while (!acc.is_zero()) {
        acc = multiply(r, acc, u);
        ++k;
    }
    return k;
}

template <class F>
inline std::vector<std::size_t> poincare_ranks(const GradedRing<F>& r) {
    std::vector<std::size_t> ranks;
    for (const auto& piece : r.pieces) ranks.push_back(piece.basis.size());
    return ranks;
}

// The matrix with factor j removed: row j and block-column j deleted.
inline VectorMatrix delete_factor(const VectorMatrix& a, int j) {
    const int m = a.shape().factors();
    if (m < 2) throw std::invalid_argument("delete_factor: need at least two factors");
    if (j < 0 || j >= m) throw std::out_of_range("delete_factor: factor index out of range");
    std::vector<int> dims;
    for (int i = 0; i < m; ++i)
        if (i != j) dims.push_back(a.shape().dim(i));
    VectorMatrix::Blocks blocks;
    for (int i = 0; i < m; ++i) {
        if (i == j) continue;
        std::vector<std::vector<Int>> row;
        for (int c = 0; c < m; ++c)
            if (c != j) row.push_back(a.block(static_cast<std::size_t>(i), static_cast<std::size_t>(c)));
        blocks.push_back(std::move(row));
    }
    return VectorMatrix(Shape(std::move(dims)), a.mode(), std::move(blocks));
}

// Ring of the facial submanifold over the product with factor j removed
// (the quotient by y_j).
template <class F>
inline GradedRing<F> facial_restriction(const VectorMatrix& a, int j) {
    return build_ring<F>(delete_factor(a, j));
}

// Invariant factors of the degree-d relation lattice over Z; all 1 means the
// integral ring is torsion-free in this degree.
inline std::vector<Int> relation_lattice_invariant_factors(const VectorMatrix& a, int d) {
    const std::vector<Polynomial> gs = relation_polynomials(a);
    const std::vector<Monomial> monos = monomials_of_degree(a.shape().factors(), d);
    std::map<Monomial, int> index;
    for (std::size_t p = 0; p < monos.size(); ++p) index[monos[p]] = static_cast<int>(p);
    const auto rows = relation_rows(a.shape(), gs, monos, index, d);
    IMat mat(rows.size(), monos.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < monos.size(); ++c) mat(r, c) = rows[r][c];
    return smith_invariant_factors(std::move(mat));
}

}  // namespace qtlab

#endif

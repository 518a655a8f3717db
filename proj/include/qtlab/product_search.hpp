#ifndef QTLAB_PRODUCT_SEARCH_HPP
#define QTLAB_PRODUCT_SEARCH_HPP

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qtlab/cohomology.hpp"
#include "qtlab/normal_form.hpp"
#include "qtlab/scalar.hpp"
#include "qtlab/vector_matrix.hpp"

namespace qtlab {

// Dense univariate polynomial over Q, ascending coefficients, no trailing
// zeros. Only what the exact nilpotent solver needs.
class Poly {
public:
    Poly() = default;
    explicit Poly(Rat c) {
        if (c != 0) coeffs_.push_back(std::move(c));
    }
    static Poly variable() { return Poly(std::vector<Rat>{Rat(0), Rat(1)}); }
    explicit Poly(std::vector<Rat> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    const std::vector<Rat>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const Rat& lead() const { return coeffs_.back(); }

    Rat eval(const Rat& t) const {
        Rat acc = 0;
        for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * t + coeffs_[i];
        return acc;
    }

    Poly& operator+=(const Poly& o) {
        if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Rat(0));
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        trim();
        return *this;
    }
    Poly operator*(const Poly& o) const {
        if (is_zero() || o.is_zero()) return Poly();
        std::vector<Rat> out(coeffs_.size() + o.coeffs_.size() - 1, Rat(0));
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            for (std::size_t j = 0; j < o.coeffs_.size(); ++j)
                out[i + j] += coeffs_[i] * o.coeffs_[j];
        return Poly(std::move(out));
    }
    Poly operator*(const Rat& s) const {
        if (s == 0) return Poly();
        std::vector<Rat> out = coeffs_;
        for (Rat& c : out) c *= s;
        return Poly(std::move(out));
    }
    bool operator==(const Poly& o) const { return coeffs_ == o.coeffs_; }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }
    std::vector<Rat> coeffs_;
};

inline bool scalar_is_zero(const Poly& p) { return p.is_zero(); }

// Monic Euclidean gcd over Q[t].
inline Poly poly_gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        // remainder of a by b
        std::vector<Rat> r = a.coeffs();
        const std::vector<Rat>& d = b.coeffs();
        while (r.size() >= d.size() && !r.empty()) {
            Rat f = r.back() / d.back();
            std::size_t off = r.size() - d.size();
            for (std::size_t i = 0; i < d.size(); ++i) r[off + i] -= f * d[i];
            while (!r.empty() && r.back() == 0) r.pop_back();
        }
        a = b;
        b = Poly(std::move(r));
    }
    if (!a.is_zero()) {
        Rat inv = Rat(1) / a.lead();
        a = a * inv;
    }
    return a;
}

namespace detail {

inline std::vector<Int> positive_divisors(Int v) {
    v = abs(v);
    std::vector<Int> divs;
    for (Int d = 1; d * d <= v; ++d) {
        if (v % d != 0) continue;
        divs.push_back(d);
        if (d * d != v) divs.push_back(v / d);
    }
    return divs;
}

}  // namespace detail

// All rational roots of p, by the rational root theorem on an integer-scaled
// copy; every candidate is verified by exact evaluation.
inline std::vector<Rat> rational_roots(const Poly& p) {
    std::vector<Rat> roots;
    if (p.is_zero()) return roots;
    std::vector<Rat> c = p.coeffs();
    std::size_t low = 0;
    while (low < c.size() && c[low] == 0) ++low;
    if (low > 0) roots.push_back(Rat(0));
    c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(low));
    if (c.size() <= 1) return roots;

    Int scale = 1;
    for (const Rat& q : c) scale = lcm(scale, denominator(q));
    std::vector<Int> ic;
    for (const Rat& q : c) ic.push_back(Int(numerator(q) * (scale / denominator(q))));

    for (const Int& num : detail::positive_divisors(ic.front()))
        for (const Int& den : detail::positive_divisors(ic.back()))
            for (int sign : {1, -1}) {
                Rat cand(sign * num, den);
                if (p.eval(cand) == 0 &&
                    std::find(roots.begin(), roots.end(), cand) == roots.end())
                    roots.push_back(cand);
            }
    std::sort(roots.begin(), roots.end());
    return roots;
}

struct NilpotentSearchResult {
    // normalized coefficient vectors over y_1..y_m (first nonzero coord = 1)
    std::vector<std::vector<Rat>> witnesses;
    // true when the exact path ran: the witness list is complete over Q
    bool exhaustive = false;
};

namespace detail {

inline bool power_vanishes(const GradedRing<Rat>& r, const std::vector<Rat>& coeffs, int k) {
    RingElement<Rat> x = linear_element(r, coeffs);
    return power(r, x, k).is_zero();
}

// Reduced rationals p/q with |p| <= H, 1 <= q <= H, plus zero.
inline std::vector<Rat> height_bounded_rationals(int h) {
    std::vector<Rat> out{Rat(0)};
    for (int den = 1; den <= h; ++den)
        for (int num = 1; num <= h; ++num) {
            if (std::gcd(num, den) != 1) continue;
            out.push_back(Rat(num, den));
            out.push_back(Rat(-num, den));
        }
    return out;
}

}  // namespace detail

// Nonzero x in degree 1 with x^{N+1} = 0, support restricted to the given
// generator indices (0-based; empty means all). Two-variable supports are
// solved exactly; larger supports fall back to the height-bounded grid.
inline NilpotentSearchResult search_nilpotents(const GradedRing<Rat>& r, int N, int height,
                                               std::vector<int> support = {}) {
    const int m = r.shape.factors();
    if (support.empty()) {
        support.resize(static_cast<std::size_t>(m));
        std::iota(support.begin(), support.end(), 0);
    }
    std::sort(support.begin(), support.end());
    const int k = N + 1;

    NilpotentSearchResult result;
    auto add_witness = [&](std::vector<Rat> coeffs) {
        if (detail::power_vanishes(r, coeffs, k) &&
            std::find(result.witnesses.begin(), result.witnesses.end(), coeffs) ==
                result.witnesses.end())
            result.witnesses.push_back(std::move(coeffs));
    };
    auto unit_vector = [&](int p) {
        std::vector<Rat> e(static_cast<std::size_t>(m), Rat(0));
        e[static_cast<std::size_t>(p)] = 1;
        return e;
    };

    if (support.size() <= 2) {
        result.exhaustive = true;
        for (int p : support) add_witness(unit_vector(p));
        if (support.size() == 2) {
            const int p = support[0], q = support[1];
            // x = y_p + t y_q; coordinates of x^k are polynomials in t
            const auto& piece1 = r.pieces[1];
            std::vector<Poly> coords(piece1.basis.size());
            Monomial mp(static_cast<std::size_t>(m), 0), mq(static_cast<std::size_t>(m), 0);
            mp[static_cast<std::size_t>(p)] = 1;
            mq[static_cast<std::size_t>(q)] = 1;
            coords[static_cast<std::size_t>(piece1.index.at(mp))] = Poly(Rat(1));
            coords[static_cast<std::size_t>(piece1.index.at(mq))] = Poly::variable();

            auto mul_by_f = [](const Poly& a, const Rat& b) { return a * b; };
            std::vector<Poly> acc = coords;
            int deg = 1;
            for (int i = 1; i < k; ++i) {
                acc = multiply_coords(r, deg, acc, 1, coords, mul_by_f);
                ++deg;
            }
            Poly g;
            bool identically_zero = true;
            for (const Poly& c : acc) {
                if (c.is_zero()) continue;
                identically_zero = false;
                g = g.is_zero() ? c : poly_gcd(g, c);
            }
            if (identically_zero) {
                // every t works; keep a few concrete directions
                for (int t : {0, 1, -1}) {
                    std::vector<Rat> w = unit_vector(p);
                    w[static_cast<std::size_t>(q)] = t;
                    add_witness(std::move(w));
                }
            } else {
                for (const Rat& t : rational_roots(g)) {
                    std::vector<Rat> w = unit_vector(p);
                    w[static_cast<std::size_t>(q)] = t;
                    add_witness(std::move(w));
                }
            }
        }
        return result;
    }

    // bounded grid: leading support coordinate 1, later ones over the grid
    const std::vector<Rat> grid = detail::height_bounded_rationals(height);
    for (std::size_t lead = 0; lead < support.size(); ++lead) {
        std::vector<Rat> coeffs(static_cast<std::size_t>(m), Rat(0));
        coeffs[static_cast<std::size_t>(support[lead])] = 1;
        const std::vector<int> tail(support.begin() + static_cast<std::ptrdiff_t>(lead) + 1,
                                    support.end());
        std::vector<std::size_t> pick(tail.size(), 0);
        while (true) {
            for (std::size_t i = 0; i < tail.size(); ++i)
                coeffs[static_cast<std::size_t>(tail[i])] = grid[pick[i]];
            add_witness(coeffs);
            std::size_t i = 0;
            for (; i < pick.size(); ++i) {
                if (++pick[i] < grid.size()) break;
                pick[i] = 0;
            }
            if (i == pick.size()) break;
        }
        if (tail.empty()) continue;  // single candidate already handled
    }
    return result;
}

enum class ProductStatus { found, none_up_to_bound, disproved };

struct ProductSearchOutcome {
    ProductStatus status = ProductStatus::none_up_to_bound;
    // rows x_i over y_1..y_m (original factor order); nonsingular, each
    // x_i^{n_i+1} = 0 verified exactly
    std::vector<std::vector<Rat>> witness;
    int height_bound = 0;
    std::string certificate;
};

namespace detail {

inline bool rows_independent(const std::vector<std::vector<Rat>>& rows, int m) {
    Mat<Rat> mat(rows.size(), static_cast<std::size_t>(m));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < static_cast<std::size_t>(m); ++j) mat(i, j) = rows[i][j];
    return rref(mat).size() == rows.size();
}

}  // namespace detail

// Decide whether the rational cohomology ring is that of a product of
// complex projective spaces, by stage-wise nilpotent search plus exact
// obstructions. "none_up_to_bound" is not a proof of non-existence.
inline ProductSearchOutcome product_structure(const VectorMatrix& a, int height = 8) {
    if (a.mode() != CoefficientMode::integer)
        throw std::invalid_argument("product_structure: integer mode required");
    NormalFormResult cls = classify(a);
    if (cls.status == NormalFormStatus::invalid)
        throw std::invalid_argument("product_structure: matrix is not valid");
    if (cls.status == NormalFormStatus::cyclic) {
        ProductSearchOutcome out;
        out.status = ProductStatus::disproved;
        out.certificate = "cyclic-form obstruction: no nonzero degree-2 class has a vanishing "
                          "power of the required order";
        return out;
    }

    const GradedRing<Rat> ring = build_ring<Rat>(a);
    const int m = a.shape().factors();

    std::vector<int> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return a.shape().dim(x) > a.shape().dim(y); });

    constexpr std::size_t kMaxWitnessesPerStage = 256;
    std::vector<std::vector<std::vector<Rat>>> candidates(static_cast<std::size_t>(m));
    bool all_exact = true;
    for (int i : order) {
        std::vector<int> support;
        for (int j = 0; j < m; ++j)
            if (a.shape().dim(j) <= a.shape().dim(i)) support.push_back(j);
        NilpotentSearchResult res =
            search_nilpotents(ring, a.shape().dim(i), height, support);
        all_exact = all_exact && res.exhaustive;
        if (res.witnesses.empty()) {
            ProductSearchOutcome out;
            if (res.exhaustive) {
                out.status = ProductStatus::disproved;
                out.certificate = "exact solve: no rational class with the required vanishing "
                                  "power exists for fiber dimension " +
                                  std::to_string(a.shape().dim(i));
            } else {
                out.status = ProductStatus::none_up_to_bound;
                out.height_bound = height;
            }
            return out;
        }
        if (res.witnesses.size() > kMaxWitnessesPerStage)
            res.witnesses.resize(kMaxWitnessesPerStage);
        // prefer the matrix's own generator direction, for a canonical pick
        std::vector<Rat> own(static_cast<std::size_t>(m), Rat(0));
        own[static_cast<std::size_t>(i)] = 1;
        auto it = std::find(res.witnesses.begin(), res.witnesses.end(), own);
        if (it != res.witnesses.end()) std::iter_swap(res.witnesses.begin(), it);
        candidates[static_cast<std::size_t>(i)] = std::move(res.witnesses);
    }

    // pick one direction per stage keeping the rows independent
    std::vector<std::vector<Rat>> chosen;
    std::vector<int> chosen_for;
    auto backtrack = [&](auto&& self, std::size_t stage) -> bool {
        if (stage == order.size()) return true;
        const int i = order[stage];
        for (const auto& w : candidates[static_cast<std::size_t>(i)]) {
            chosen.push_back(w);
            if (detail::rows_independent(chosen, m)) {
                chosen_for.push_back(i);
                if (self(self, stage + 1)) return true;
                chosen_for.pop_back();
            }
            chosen.pop_back();
        }
        return false;
    };

    ProductSearchOutcome out;
    if (backtrack(backtrack, 0)) {
        out.status = ProductStatus::found;
        out.witness.assign(static_cast<std::size_t>(m), {});
        for (std::size_t s = 0; s < chosen.size(); ++s)
            out.witness[static_cast<std::size_t>(chosen_for[s])] = chosen[s];
        // final exact re-verification of every power
        for (int i = 0; i < m; ++i)
            if (!detail::power_vanishes(ring, out.witness[static_cast<std::size_t>(i)],
                                        a.shape().dim(i) + 1))
                throw InvariantViolation("product_structure: witness failed re-verification");
        return out;
    }
    if (m == 2 && all_exact) {
        out.status = ProductStatus::disproved;
        out.certificate = "exact solve: complete rational nilpotent sets admit no nonsingular "
                          "combination";
        return out;
    }
    out.status = ProductStatus::none_up_to_bound;
    out.height_bound = height;
    return out;
}

}  // namespace qtlab

#endif

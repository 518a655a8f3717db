#ifndef QTLAB_ISOTROPY_HPP
#define QTLAB_ISOTROPY_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qtlab/linalg.hpp"
#include "qtlab/scalar.hpp"
#include "qtlab/shape.hpp"
#include "qtlab/vector_matrix.hpp"

namespace qtlab {

// Per factor i, the set of coordinates of S^{2n_i+1} declared nonzero.
// Entries are 0-based: 0 names the distinguished first coordinate.
struct CoordinatePattern {
    std::vector<std::vector<int>> nonzero;  // P_i, each nonempty, values in [0, n_i]
};

// Isotropy subgroup reported as an abstract abelian group.
struct IsotropyGroup {
    int free_rank = 0;
    std::vector<Int> torsion;  // invariant factors > 1
    bool trivial() const { return free_rank == 0 && torsion.empty(); }
};

// Subgroup of (S^1)^m fixing a point whose nonzero coordinates follow the
// pattern: one exponent row per declared coordinate, isotropy = Z^m modulo
// the row lattice.
inline IsotropyGroup isotropy_of_pattern(const VectorMatrix& a, const CoordinatePattern& p) {
    if (a.mode() != CoefficientMode::integer)
        throw std::invalid_argument("isotropy_of_pattern: integer mode required");
    const std::size_t m = static_cast<std::size_t>(a.shape().factors());
    if (p.nonzero.size() != m)
        throw std::invalid_argument("isotropy_of_pattern: pattern has wrong number of factors");

    std::vector<std::vector<Int>> rows;
    for (std::size_t i = 0; i < m; ++i) {
        if (p.nonzero[i].empty())
            throw std::invalid_argument("isotropy_of_pattern: empty coordinate set");
        for (int j : p.nonzero[i]) {
            if (j < 0 || j > a.shape().dim(i))
                throw std::invalid_argument("isotropy_of_pattern: coordinate out of range");
            std::vector<Int> row(m, 0);
            if (j == 0) {
                row[i] = 1;  // g_i itself scales z^i_0
            } else {
                for (std::size_t l = 0; l < m; ++l)
                    row[l] = a.entry(l, i, static_cast<std::size_t>(j - 1));
            }
            rows.push_back(std::move(row));
        }
    }

    IMat mat(rows.size(), m);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < m; ++c) mat(r, c) = rows[r][c];
    std::vector<Int> factors = smith_invariant_factors(std::move(mat));

    IsotropyGroup g;
    int rank = 0;
    for (const Int& d : factors) {
        if (d == 0) continue;
        ++rank;
        if (d > 1) g.torsion.push_back(d);
    }
    g.free_rank = static_cast<int>(m) - rank;
    return g;
}

// Freeness of the full torus action: trivial isotropy at every minimal
// pattern (one nonzero coordinate per factor). Enlarging a pattern only adds
// rows, so minimal patterns suffice.
inline bool is_action_free(const VectorMatrix& a) {
    const std::size_t m = static_cast<std::size_t>(a.shape().factors());
    for (const auto& v : vertices(a.shape())) {
        CoordinatePattern p;
        p.nonzero.resize(m);
        for (std::size_t i = 0; i < m; ++i) p.nonzero[i] = {v[i]};
        if (!isotropy_of_pattern(a, p).trivial()) return false;
    }
    return true;
}

}  // namespace qtlab

#endif

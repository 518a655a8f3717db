#ifndef QTLAB_CENSUS_HPP
#define QTLAB_CENSUS_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qtlab/json_io.hpp"
#include "qtlab/normal_form.hpp"
#include "qtlab/scalar.hpp"
#include "qtlab/shape.hpp"
#include "qtlab/vector_matrix.hpp"

namespace qtlab {

namespace detail {

// One scalar slot of an off-diagonal block, in column-major fill order so
// subset-minor pruning fires as early as possible.
struct CensusSlot {
    int i, j, p;
};

struct CensusPlan {
    Shape shape;
    CoefficientMode mode;
    int bound;
    std::vector<CensusSlot> slots;
    // subset masks (>= 2 factors) keyed by the slot index completing them
    std::vector<std::vector<unsigned>> masks_ready_at;
    std::vector<unsigned> masks_with_no_slots;  // complete before any assignment

    explicit CensusPlan(const Shape& s, CoefficientMode m, int b)
        : shape(s), mode(m), bound(b) {
        const int mm = s.factors();
        for (int j = 0; j < mm; ++j)
            for (int i = 0; i < mm; ++i) {
                if (i == j) continue;
                for (int p = 0; p < s.dim(j); ++p) slots.push_back({i, j, p});
            }
        masks_ready_at.resize(slots.size());
        for (unsigned mask = 1; mask < (1u << mm); ++mask) {
            if (__builtin_popcount(mask) < 2) continue;  // singletons are the fixed diagonal
            int last = -1;
            for (std::size_t t = 0; t < slots.size(); ++t) {
                if ((mask & (1u << slots[t].i)) && (mask & (1u << slots[t].j)))
                    last = static_cast<int>(t);
            }
            if (last < 0)
                masks_with_no_slots.push_back(mask);
            else
                masks_ready_at[static_cast<std::size_t>(last)].push_back(mask);
        }
    }
};

// Check every |S|x|S| minor of the partially filled matrix for subset mask.
inline bool subset_minors_ok(const CensusPlan& plan, const VectorMatrix::Blocks& blocks,
                             unsigned mask) {
    std::vector<int> subset;
    for (int i = 0; i < plan.shape.factors(); ++i)
        if (mask & (1u << i)) subset.push_back(i);
    const std::size_t k = subset.size();
    std::vector<int> comp(k, 1);
    while (true) {
        IMat sub(k, k);
        for (std::size_t r = 0; r < k; ++r)
            for (std::size_t c = 0; c < k; ++c)
                sub(r, c) = blocks[static_cast<std::size_t>(subset[r])]
                                  [static_cast<std::size_t>(subset[c])]
                                  [static_cast<std::size_t>(comp[c] - 1)];
        Int d = det(sub);
        const bool ok = plan.mode == CoefficientMode::gf2 ? (d % 2 != 0) : (d == 1 || d == -1);
        if (!ok) return false;
        std::size_t pos = k;
        while (pos-- > 0) {
            if (comp[pos] < plan.shape.dim(subset[pos])) {
                ++comp[pos];
                break;
            }
            comp[pos] = 1;
            if (pos == 0) return true;
        }
        if (k == 0) return true;
    }
}

template <class Yield>
inline void census_backtrack(const CensusPlan& plan, VectorMatrix::Blocks& blocks,
                             std::size_t slot, std::uint64_t& nodes, Yield&& yield) {
    if (slot == plan.slots.size()) {
        yield(VectorMatrix(plan.shape, plan.mode, blocks));
        return;
    }
    const CensusSlot& s = plan.slots[slot];
    const int lo = plan.mode == CoefficientMode::gf2 ? 0 : -plan.bound;
    const int hi = plan.mode == CoefficientMode::gf2 ? 1 : plan.bound;
    for (int v = lo; v <= hi; ++v) {
        blocks[static_cast<std::size_t>(s.i)][static_cast<std::size_t>(s.j)]
              [static_cast<std::size_t>(s.p)] = v;
        ++nodes;
        bool ok = true;
        for (unsigned mask : plan.masks_ready_at[slot])
            if (!subset_minors_ok(plan, blocks, mask)) {
                ok = false;
                break;
            }
        if (ok) census_backtrack(plan, blocks, slot + 1, nodes, yield);
    }
    blocks[static_cast<std::size_t>(s.i)][static_cast<std::size_t>(s.j)]
          [static_cast<std::size_t>(s.p)] = 0;
}

inline VectorMatrix::Blocks seed_blocks(const Shape& s) {
    const std::size_t m = static_cast<std::size_t>(s.factors());
    VectorMatrix::Blocks b(m, std::vector<std::vector<Int>>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            b[i][j].assign(static_cast<std::size_t>(s.dim(j)), i == j ? Int(1) : Int(0));
    return b;
}

}  // namespace detail

// Every normalized valid matrix with off-diagonal entries in [-B, B]
// (in {0,1} for gf2), diagonal fixed to 1, yielded exactly once. Backtracking
// prunes a branch as soon as a completed subset minor leaves {+-1}.
template <class Yield>
inline std::uint64_t enumerate_valid(const Shape& shape, int bound, CoefficientMode mode,
                                     Yield&& yield) {
    detail::CensusPlan plan(shape, mode, bound);
    VectorMatrix::Blocks blocks = detail::seed_blocks(shape);
    std::uint64_t nodes = 0;
    for (unsigned mask : plan.masks_with_no_slots)  // m = 1 only
        if (!detail::subset_minors_ok(plan, blocks, mask)) return nodes;
    detail::census_backtrack(plan, blocks, 0, nodes, yield);
    return nodes;
}

struct CensusReport {
    Shape shape;
    int bound;
    CoefficientMode mode;
    std::uint64_t nodes_scanned = 0;
    std::uint64_t valid = 0;
    std::uint64_t unipotent = 0;
    std::uint64_t cyclic = 0;
    std::uint64_t general_non_bott = 0;
    // canonical serializations of conjugation-orbit representatives
    std::vector<std::string> representatives;
};

namespace detail {

// Lexicographically smallest serialization over all dims-preserving
// conjugates.
inline std::string canonical_serialization(const VectorMatrix& a) {
    const int m = a.shape().factors();
    Permutation sigma(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) sigma[static_cast<std::size_t>(i)] = i;
    std::string best;
    do {
        bool legal = true;
        Permutation inv = inverse(sigma);
        for (int j = 0; j < m && legal; ++j)
            legal = a.shape().dim(static_cast<std::size_t>(inv[j])) == a.shape().dim(j);
        if (!legal) continue;
        std::string s = matrix_to_json(conjugate(a, sigma)).dump();
        if (best.empty() || s < best) best = std::move(s);
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return best;
}

struct CensusAccumulator {
    std::uint64_t valid = 0, unipotent = 0, cyclic = 0, general_non_bott = 0;
    std::set<std::string> orbits;

    void add(const VectorMatrix& a, bool dedupe) {
        ++valid;
        switch (classify(a).status) {
            case NormalFormStatus::unipotent: ++unipotent; break;
            case NormalFormStatus::cyclic: ++cyclic; break;
            case NormalFormStatus::general_non_bott: ++general_non_bott; break;
            case NormalFormStatus::invalid:
                throw InvariantViolation("census: enumerated matrix failed classification");
        }
        if (dedupe) orbits.insert(canonical_serialization(a));
    }

    void merge(CensusAccumulator&& o) {
        valid += o.valid;
        unipotent += o.unipotent;
        cyclic += o.cyclic;
        general_non_bott += o.general_non_bott;
        orbits.merge(o.orbits);
    }
};

}  // namespace detail

inline CensusReport census(const Shape& shape, int bound,
                           CoefficientMode mode = CoefficientMode::integer, bool dedupe = false,
                           int jobs = 1) {
    CensusReport report{shape, bound, mode};
    detail::CensusPlan plan(shape, mode, bound);

    if (jobs <= 1 || plan.slots.empty()) {
        detail::CensusAccumulator acc;
        report.nodes_scanned =
            enumerate_valid(shape, bound, mode, [&](const VectorMatrix& a) { acc.add(a, dedupe); });
        report.valid = acc.valid;
        report.unipotent = acc.unipotent;
        report.cyclic = acc.cyclic;
        report.general_non_bott = acc.general_non_bott;
        report.representatives.assign(acc.orbits.begin(), acc.orbits.end());
        return report;
    }

    // partition the search tree by the first slot's value
    const int lo = mode == CoefficientMode::gf2 ? 0 : -bound;
    const int hi = mode == CoefficientMode::gf2 ? 1 : bound;
    std::vector<int> first_values;
    for (int v = lo; v <= hi; ++v) first_values.push_back(v);

    std::mutex merge_mutex;
    detail::CensusAccumulator total;
    std::atomic<std::uint64_t> nodes{0};
    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        detail::CensusAccumulator local;
        std::uint64_t local_nodes = 0;
        while (true) {
            const std::size_t t = cursor.fetch_add(1);
            if (t >= first_values.size()) break;
            VectorMatrix::Blocks blocks = detail::seed_blocks(shape);
            const detail::CensusSlot& s = plan.slots[0];
            blocks[static_cast<std::size_t>(s.i)][static_cast<std::size_t>(s.j)]
                  [static_cast<std::size_t>(s.p)] = first_values[t];
            ++local_nodes;
            bool ok = true;
            for (unsigned mask : plan.masks_ready_at[0])
                if (!detail::subset_minors_ok(plan, blocks, mask)) {
                    ok = false;
                    break;
                }
            if (ok)
                detail::census_backtrack(plan, blocks, 1, local_nodes,
                                         [&](const VectorMatrix& a) { local.add(a, dedupe); });
        }
        nodes += local_nodes;
        std::lock_guard<std::mutex> lock(merge_mutex);
        total.merge(std::move(local));
    };
    std::vector<std::thread> threads;
    for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (auto& th : threads) th.join();

    report.nodes_scanned = nodes;
    report.valid = total.valid;
    report.unipotent = total.unipotent;
    report.cyclic = total.cyclic;
    report.general_non_bott = total.general_non_bott;
    report.representatives.assign(total.orbits.begin(), total.orbits.end());
    return report;
}

}  // namespace qtlab

#endif

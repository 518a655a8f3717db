#include <doctest.h>

#include <set>
#include <vector>

#include "qtlab/shape.hpp"

using namespace qtlab;

TEST_CASE("shape counts") {
    CHECK(Shape({1, 1}).facet_count() == 4);
    CHECK(Shape({2, 1}).facet_count() == 5);
    CHECK(Shape({2, 2, 3}).vertex_count() == 36);
    CHECK(Shape({1, 1}).vertex_count() == 4);
    CHECK(Shape({2, 3}).multi_index_count() == 6);
    CHECK_THROWS_AS(Shape({}), std::invalid_argument);
    CHECK_THROWS_AS(Shape({1, 0}), std::invalid_argument);
}

TEST_CASE("vertices of the triangular cylinder") {
    std::vector<std::vector<int>> vs;
    for (const auto& v : vertices(Shape({2, 1}))) vs.push_back(v);
    REQUIRE(vs.size() == 6);
    // v_00, v_01, v_10, v_11, v_20, v_21 up to order; no duplicates
    std::set<std::vector<int>> uniq(vs.begin(), vs.end());
    CHECK(uniq.size() == 6);
    CHECK(uniq.count({0, 0}) == 1);
    CHECK(uniq.count({2, 1}) == 1);
}

TEST_CASE("multi-index enumeration is lexicographic") {
    std::vector<std::vector<int>> ks;
    for (const auto& k : multi_indices(Shape({2, 1}))) ks.push_back(k);
    CHECK(ks == std::vector<std::vector<int>>{{1, 1}, {2, 1}});

    std::vector<std::vector<int>> single;
    for (const auto& k : multi_indices(Shape({1, 1}))) single.push_back(k);
    CHECK(single == std::vector<std::vector<int>>{{1, 1}});

    std::size_t count = 0;
    for (const auto& k : multi_indices(Shape({2, 3}))) {
        (void)k;
        ++count;
    }
    CHECK(count == 6);
}

TEST_CASE("counts agree with products, exhaustively for small shapes") {
    std::vector<std::vector<int>> dims_list;
    for (int m = 1; m <= 4; ++m) {
        std::vector<int> d(static_cast<std::size_t>(m), 1);
        while (true) {
            dims_list.push_back(d);
            int i = m - 1;
            while (i >= 0 && d[static_cast<std::size_t>(i)] == 4) d[static_cast<std::size_t>(i--)] = 1;
            if (i < 0) break;
            ++d[static_cast<std::size_t>(i)];
        }
    }
    for (const auto& dims : dims_list) {
        Shape s(dims);
        std::uint64_t vcount = 0, kcount = 0;
        for (const auto& v : vertices(s)) {
            (void)v;
            ++vcount;
        }
        for (const auto& k : multi_indices(s)) {
            (void)k;
            ++kcount;
        }
        CHECK(vcount == s.vertex_count());
        CHECK(kcount == s.multi_index_count());
    }
}

#include <doctest.h>

#include <vector>

#include "qtlab/json_io.hpp"
#include "qtlab/linalg.hpp"
#include "qtlab/vector_matrix.hpp"
#include "test_helpers.hpp"

using namespace qtlab;
using qtlab_test::make_matrix;

namespace {

// shape (1,1), off-diagonal entries b, c, diagonal 1
VectorMatrix two_factor(long long b, long long c) {
    return make_matrix({1, 1}, {{{1}, {b}}, {{c}, {1}}});
}

}  // namespace

TEST_CASE("submatrix reads off scalar columns") {
    VectorMatrix a = two_factor(5, 7);
    IMat s = submatrix(a, {1, 1});
    CHECK(s(0, 0) == 1);
    CHECK(s(0, 1) == 5);
    CHECK(s(1, 0) == 7);
    CHECK(s(1, 1) == 1);

    VectorMatrix id = VectorMatrix::identity(Shape({2, 1, 3}));
    for (const auto& k : multi_indices(id.shape()))
        CHECK(submatrix(id, k) == IMat::identity(3));

    CHECK_THROWS_AS(submatrix(a, {1, 2}), std::out_of_range);
    CHECK_THROWS_AS(submatrix(a, {1}), std::out_of_range);
}

TEST_CASE("triangular cylinder submatrices match the displayed layout") {
    // shape (2,1): a^1_1 = (a111, a112), a^2_1 = (a211), etc.
    VectorMatrix a = make_matrix({2, 1}, {{{11, 12}, {13}}, {{21, 22}, {23}}});
    IMat a11 = submatrix(a, {1, 1});
    CHECK(a11(0, 0) == 11);
    CHECK(a11(0, 1) == 13);
    CHECK(a11(1, 0) == 21);
    CHECK(a11(1, 1) == 23);
    IMat a21 = submatrix(a, {2, 1});
    CHECK(a21(0, 0) == 12);
    CHECK(a21(0, 1) == 13);
    CHECK(a21(1, 0) == 22);
    CHECK(a21(1, 1) == 23);
}

TEST_CASE("principal minors") {
    VectorMatrix a = two_factor(1, 2);
    MinorReport r = principal_minors(a);
    REQUIRE(r.records.size() == 3);
    // singletons then the determinant
    Int det_val = 0;
    for (const auto& rec : r.records) {
        if (rec.subset.size() == 1)
            CHECK(rec.value == 1);
        else
            det_val = rec.value;
    }
    CHECK(det_val == -1);

    MinorReport rid = principal_minors(VectorMatrix::identity(Shape({1, 2, 1, 1})));
    for (const auto& rec : rid.records) CHECK(rec.value == 1);
    CHECK(rid.records.size() == Shape({1, 2, 1, 1}).multi_index_count() * 15);

    // concrete triangular-cylinder entries: everything 1
    VectorMatrix e34 = make_matrix({2, 1}, {{{1, 1}, {0}}, {{0, 0}, {1}}});
    for (const auto& rec : principal_minors(e34).records) CHECK(rec.value == 1);
}

TEST_CASE("validity") {
    ValidityResult bad = is_valid(two_factor(1, 1));
    CHECK_FALSE(bad.valid);
    REQUIRE(bad.violation.has_value());
    CHECK(bad.violation->multi_index == MultiIndex{1, 1});
    CHECK(bad.violation->subset == std::vector<int>{0, 1});
    CHECK(bad.violation->value == 0);

    CHECK(is_valid(two_factor(1, 2)).valid);
    CHECK(is_valid(VectorMatrix::identity(Shape({3, 2, 1}))).valid);
}

TEST_CASE("validity characterization bc in {0,2} with brute-force oracle") {
    for (long long b = -4; b <= 4; ++b)
        for (long long c = -4; c <= 4; ++c) {
            VectorMatrix a = two_factor(b, c);
            const bool expect = (b * c == 0 || b * c == 2);
            CHECK(is_valid(a).valid == expect);
            CHECK(qtlab_test::oracle_is_valid(a) == expect);
        }
}

TEST_CASE("sign normalization") {
    // one-factor CP^1 with flipped omniorientation
    VectorMatrix flipped = make_matrix({1}, {{{-1}}});
    NormalizeResult r = normalize_signs(flipped);
    CHECK(r.matrix.entry(0, 0, 0) == 1);
    REQUIRE(r.flips.size() == 1);
    CHECK(r.flips[0].block_column == 0);

    VectorMatrix a = make_matrix({1, 1}, {{{1}, {1}}, {{-2}, {-1}}});
    NormalizeResult rn = normalize_signs(a);
    CHECK(rn.matrix == two_factor(-1, -2));
    REQUIRE(rn.flips.size() == 1);
    CHECK(rn.flips[0].block_column == 1);

    NormalizeResult rid = normalize_signs(two_factor(3, 4));
    CHECK(rid.matrix == two_factor(3, 4));
    CHECK(rid.flips.empty());

    CHECK_THROWS_AS(normalize_signs(make_matrix({1, 1}, {{{0}, {1}}, {{1}, {1}}})),
                    InvalidDiagonal);
    CHECK_THROWS_AS(normalize_signs(make_matrix({1, 1}, {{{2}, {1}}, {{1}, {1}}})),
                    InvalidDiagonal);
}

TEST_CASE("normalize_signs is idempotent and preserves validity, exhaustively") {
    for (long long b = -3; b <= 3; ++b)
        for (long long c = -3; c <= 3; ++c)
            for (int sb : {1, -1})
                for (int sc : {1, -1}) {
                    VectorMatrix a = make_matrix({1, 1}, {{{sb}, {b}}, {{c}, {sc}}});
                    NormalizeResult r1 = normalize_signs(a);
                    NormalizeResult r2 = normalize_signs(r1.matrix);
                    CHECK(r2.matrix == r1.matrix);
                    CHECK(r2.flips.empty());
                    CHECK(is_valid(r1.matrix).valid == is_valid(a).valid);
                }
}

TEST_CASE("gf2 mode") {
    VectorMatrix a = make_matrix({1, 1}, {{{1}, {1}}, {{1}, {1}}}, CoefficientMode::gf2);
    CHECK_FALSE(is_valid(a).valid);  // det = 0 mod 2
    VectorMatrix b = make_matrix({1, 1}, {{{1}, {1}}, {{0}, {1}}}, CoefficientMode::gf2);
    CHECK(is_valid(b).valid);
    // entries are reduced mod 2 on construction
    VectorMatrix c = make_matrix({1, 1}, {{{3}, {-1}}, {{2}, {1}}}, CoefficientMode::gf2);
    CHECK(c.entry(0, 0, 0) == 1);
    CHECK(c.entry(0, 1, 0) == 1);
    CHECK(c.entry(1, 0, 0) == 0);
    // gf2 validity == all integer minors odd, across both code paths
    for (long long x = 0; x <= 1; ++x)
        for (long long y = 0; y <= 1; ++y) {
            VectorMatrix g = make_matrix({1, 1}, {{{1}, {x}}, {{y}, {1}}}, CoefficientMode::gf2);
            bool all_odd = true;
            for (const auto& rec : principal_minors(g).records)
                if (rec.value % 2 == 0) all_odd = false;
            CHECK(is_valid(g).valid == all_odd);
        }
    // normalize_signs is a no-op mod 2
    NormalizeResult r = normalize_signs(a);
    CHECK(r.matrix == a);
    CHECK(r.flips.empty());
}

TEST_CASE("characteristic matrix stacks A over the identity") {
    VectorMatrix cp1 = make_matrix({1}, {{{1}}});
    IMat l1 = characteristic_matrix(cp1);
    REQUIRE(l1.rows() == 2);
    REQUIRE(l1.cols() == 1);
    CHECK(l1(0, 0) == 1);
    CHECK(l1(1, 0) == 1);

    IMat l2 = characteristic_matrix(two_factor(1, 2));
    REQUIRE(l2.rows() == 4);
    REQUIRE(l2.cols() == 2);
    const long long expect[4][2] = {{1, 1}, {2, 1}, {1, 0}, {0, 1}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 2; ++j) CHECK(l2(i, j) == expect[i][j]);

    // triangular-cylinder layout: rows a_1, a_2, e_1, e_2, e_3
    VectorMatrix e34 = make_matrix({2, 1}, {{{1, 1}, {0}}, {{0, 0}, {1}}});
    IMat l3 = characteristic_matrix(e34);
    REQUIRE(l3.rows() == 5);
    REQUIRE(l3.cols() == 3);
    CHECK(l3(0, 0) == 1);
    CHECK(l3(0, 1) == 1);
    CHECK(l3(0, 2) == 0);
    CHECK(l3(1, 2) == 1);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(l3(2 + i, j) == (i == j ? 1 : 0));
}

TEST_CASE("JSON round-trip is bit-exact") {
    VectorMatrix a = make_matrix({2, 1}, {{{1, 1}, {-3}}, {{0, 5}, {1}}});
    Json j = matrix_to_json(a);
    CHECK(j["mode"] == "int");
    CHECK(matrix_from_json(j) == a);
    CHECK(matrix_to_json(matrix_from_json(j)) == j);

    VectorMatrix g = make_matrix({1, 1}, {{{1}, {1}}, {{0}, {1}}}, CoefficientMode::gf2);
    CHECK(matrix_from_json(matrix_to_json(g)) == g);

    CHECK_THROWS(matrix_from_json(Json::parse(R"({"shape":[1],"blocks":[[[1,2]]]})")));
    CHECK_THROWS(matrix_from_json(Json::parse(R"({"shape":[1]})")));
}

TEST_CASE("determinant helpers agree") {
    // cofactor and Bareiss paths on the same inputs
    for (long long seed = 0; seed < 81; ++seed) {
        IMat m(4, 4);
        long long s = seed;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) {
                m(i, j) = (s % 3) - 1;
                s = s * 7 + 3;
            }
        std::vector<std::vector<Int>> rows(4, std::vector<Int>(4));
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) rows[i][j] = m(i, j);
        CHECK(det(m) == qtlab_test::oracle_det(rows));
        CHECK(det_bareiss(m) == qtlab_test::oracle_det(rows));
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "test_util.hpp"
#include "xorcode/error.hpp"
#include "xorcode/gf2.hpp"

using namespace xorcode;
using xorcode::testing::random_matrix;
using xorcode::testing::random_vector;

namespace {

const BitMatrix kSquare4Incidence = BitMatrix::from_strings({"1110", "0111", "1101", "1011"});

// Leibniz sum over all permutations, reduced mod 2 (signs vanish in GF(2)).
bool leibniz_determinant(const BitMatrix& m) {
    std::vector<std::size_t> perm(m.rows());
    std::iota(perm.begin(), perm.end(), 0);
    bool sum = false;
    do {
        bool term = true;
        for (std::size_t i = 0; i < perm.size() && term; ++i) term = m.get(i, perm[i]);
        sum ^= term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return sum;
}

// All 2^rows combinations of the rows.
std::set<std::string> span_by_enumeration(const BitMatrix& rows) {
    std::set<std::string> out;
    for (std::uint32_t mask = 0; mask < (1U << rows.rows()); ++mask) {
        BitVector acc(rows.cols());
        for (std::size_t r = 0; r < rows.rows(); ++r)
            if (mask >> r & 1U) acc ^= rows.row(r);
        out.insert(acc.to_string());
    }
    return out;
}

// Brute-force inverse: column j is the unique x with M x = e_j.
BitMatrix brute_force_inverse(const BitMatrix& m) {
    const std::size_t n = m.rows();
    BitMatrix inv(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        int found = 0;
        for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
            BitVector x(n);
            for (std::size_t i = 0; i < n; ++i)
                if (mask >> i & 1U) x.set(i);
            if (mat_vec_mul(m, x) == BitVector::unit(n, j)) {
                ++found;
                for (std::size_t i = 0; i < n; ++i) inv.set(i, j, x.get(i));
            }
        }
        REQUIRE(found == 1);
    }
    return inv;
}

}  // namespace

TEST_CASE("bit vector keeps trailing bits clear") {
    BitVector v(70);
    v.set(69);
    v.set(0);
    CHECK(v.count() == 2);
    CHECK(v.words().size() == 2);
    CHECK(v.words()[1] == (Word{1} << 5));
    CHECK(v.support() == std::vector<std::size_t>{0, 69});
    CHECK(v.first_set() == 0);
    CHECK_THROWS_AS(static_cast<void>(v.get(70)), DimensionError);
    CHECK(BitVector::from_string("0101").to_string() == "0101");
}

TEST_CASE("mat_vec_mul") {
    SUBCASE("identity") {
        CHECK(mat_vec_mul(BitMatrix::identity(4), BitVector::from_string("1011")) == BitVector::from_string("1011"));
    }
    SUBCASE("example matrix row 1 combines x1, x2, x3") {
        CHECK(mat_vec_mul(kSquare4Incidence, BitVector::from_string("1000")).get(0));
        CHECK(mat_vec_mul(kSquare4Incidence, BitVector::from_string("0100")).get(0));
        CHECK(mat_vec_mul(kSquare4Incidence, BitVector::from_string("0010")).get(0));
        CHECK_FALSE(mat_vec_mul(kSquare4Incidence, BitVector::from_string("0001")).get(0));
    }
    SUBCASE("zero vector") { CHECK(mat_vec_mul(kSquare4Incidence, BitVector(4)).none()); }
    SUBCASE("dimension mismatch") { CHECK_THROWS_AS(mat_vec_mul(kSquare4Incidence, BitVector(3)), DimensionError); }
}

TEST_CASE("mat_mul") {
    std::mt19937_64 rng(11);
    const auto a = random_matrix(5, 7, rng);
    CHECK(mat_mul(a, BitMatrix::identity(7)) == a);
    CHECK(mat_mul(BitMatrix::from_strings({"1"}), BitMatrix::from_strings({"1"})) == BitMatrix::from_strings({"1"}));
    CHECK_THROWS_AS(mat_mul(a, a), DimensionError);

    const auto inv = brute_force_inverse(kSquare4Incidence);
    CHECK(inv == BitMatrix::from_strings({"1011", "1110", "1101", "0111"}));
    CHECK(mat_mul(kSquare4Incidence, inv) == BitMatrix::identity(4));
    CHECK(invert(kSquare4Incidence) == inv);
}

TEST_CASE("parallel mat_mul matches the reference kernel") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t r = 1 + rng() % 90, k = 1 + rng() % 90, c = 1 + rng() % 130;
        const auto a = random_matrix(r, k, rng);
        const auto b = random_matrix(k, c, rng);
        CHECK(mat_mul(a, b) == reference::mat_mul(a, b));
    }
}

TEST_CASE("product is associative with vectors") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t r = 1 + rng() % 20, k = 1 + rng() % 20, c = 1 + rng() % 70;
        const auto a = random_matrix(r, k, rng);
        const auto b = random_matrix(k, c, rng);
        const auto x = random_vector(c, rng);
        CHECK(mat_vec_mul(mat_mul(a, b), x) == mat_vec_mul(a, mat_vec_mul(b, x)));
    }
}

TEST_CASE("determinant") {
    CHECK(determinant(kSquare4Incidence));
    CHECK_FALSE(determinant(BitMatrix::from_strings({"10", "10"})));
    CHECK_THROWS_AS(determinant(BitMatrix(2, 3)), DimensionError);

    SUBCASE("elimination agrees with the Leibniz sum up to 5x5") {
        std::mt19937_64 rng(3);
        for (std::size_t n = 1; n <= 5; ++n)
            for (int trial = 0; trial < 300; ++trial) {
                const auto m = random_matrix(n, n, rng);
                REQUIRE(determinant(m) == leibniz_determinant(m));
            }
        // Exhaustive for 3x3.
        for (std::uint32_t mask = 0; mask < 512; ++mask) {
            BitMatrix m(3, 3);
            for (std::size_t i = 0; i < 9; ++i)
                if (mask >> i & 1U) m.set(i / 3, i % 3);
            REQUIRE(determinant(m) == leibniz_determinant(m));
        }
    }
}

TEST_CASE("invert") {
    CHECK(invert(BitMatrix::identity(6)) == BitMatrix::identity(6));
    CHECK_THROWS_AS(invert(BitMatrix::from_strings({"11", "11"})), SingularMatrixError);
    CHECK_THROWS_AS(invert(BitMatrix(3, 2)), DimensionError);

    SUBCASE("succeeds exactly when the determinant is 1") {
        std::mt19937_64 rng(8);
        for (int trial = 0; trial < 400; ++trial) {
            const std::size_t n = 1 + rng() % 12;
            const auto m = random_matrix(n, n, rng);
            if (determinant(m)) {
                const auto inv = invert(m);
                CHECK(mat_mul(m, inv) == BitMatrix::identity(n));
                CHECK(mat_mul(inv, m) == BitMatrix::identity(n));
            } else {
                CHECK_THROWS_AS(invert(m), SingularMatrixError);
            }
        }
    }
    SUBCASE("matches brute force on random 6x6") {
        std::mt19937_64 rng(9);
        int checked = 0;
        while (checked < 20) {
            const auto m = random_matrix(6, 6, rng);
            if (!determinant(m)) continue;
            CHECK(invert(m) == brute_force_inverse(m));
            ++checked;
        }
    }
}

TEST_CASE("rank") {
    CHECK(rank(BitMatrix::identity(5)) == 5);
    CHECK(rank(BitMatrix::from_strings({"0110", "0110"})) == 1);
    CHECK(rank(BitMatrix(3, 3)) == 0);

    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t r = 1 + rng() % 10, c = 1 + rng() % 10;
        const auto m = random_matrix(r, c, rng);
        const auto rk = rank(m);
        CHECK(rk == rank(m.transpose()));
        CHECK(rk <= std::min(r, c));
        // |span| = 2^rank.
        CHECK(span_by_enumeration(m).size() == (std::size_t{1} << rk));
    }
}

TEST_CASE("in_rowspan") {
    const auto rows = BitMatrix::from_strings({"1100", "0100"});
    CHECK(in_rowspan(rows, BitVector(4)));
    CHECK(in_rowspan(rows, BitVector::from_string("1000")));
    CHECK_FALSE(in_rowspan(rows, BitVector::from_string("0010")));
    CHECK_THROWS_AS(in_rowspan(rows, BitVector(3)), DimensionError);

    SUBCASE("agrees with exhaustive enumeration") {
        std::mt19937_64 rng(33);
        for (int trial = 0; trial < 150; ++trial) {
            const std::size_t r = 1 + rng() % 12, c = 1 + rng() % 9;
            const auto m = random_matrix(r, c, rng);
            const auto span = span_by_enumeration(m);
            for (int t = 0; t < 8; ++t) {
                const auto target = random_vector(c, rng);
                CHECK(in_rowspan(m, target) == (span.count(target.to_string()) == 1));
            }
        }
    }
}

TEST_CASE("matrix text format") {
    const auto text = to_text(kSquare4Incidence);
    CHECK(text == "4 4\n1110\n0111\n1101\n1011\n");
    CHECK(parse_matrix(text) == kSquare4Incidence);
    CHECK_THROWS_AS(parse_matrix("2 2\n10\n"), ParseError);
    CHECK_THROWS_AS(parse_matrix("2 2\n10\n1x\n"), ParseError);
    CHECK_THROWS_AS(parse_matrix("2 2\n10\n111\n"), ParseError);
    CHECK_THROWS_AS(parse_matrix(""), ParseError);
}

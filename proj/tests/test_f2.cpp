#include "doctest.h"

#include "css/errors.hpp"
#include "css/f2.hpp"
#include "oracles.hpp"

using namespace css;

TEST_CASE("rank of small matrices") {
    CHECK(rank(BitMatrix::identity(3)) == 3);
    CHECK(rank(BitMatrix(4, 7)) == 0);
    const auto m = BitMatrix::from_rows({"110", "011", "101"});
    CHECK(oracle::brute_rank(m) == 2);
    CHECK(rank(m) == 2);
}

TEST_CASE("kernel basis") {
    CHECK(kernel_basis(BitMatrix::identity(4)).empty());
    CHECK(kernel_basis(BitMatrix(2, 3)).size() == 3);
    const auto m = BitMatrix::from_rows({"111"});
    const auto k = kernel_basis(m);
    REQUIRE(k.size() == 2);
    CHECK(oracle::kernel_count(m) == 4);
    CHECK(oracle::span_size(k) == 4);
    for (const auto& v : k) CHECK(m.apply(v).none());
}

TEST_CASE("solve") {
    const auto b = BitVector::from_string("1011");
    auto x = solve(BitMatrix::identity(4), b);
    REQUIRE(x);
    CHECK(*x == b);
    CHECK_FALSE(solve(BitMatrix(3, 3), BitVector::from_string("010")));
    const auto m = BitMatrix::from_rows({"110", "011"});
    auto y = solve(m, BitVector::from_string("11"));
    REQUIRE(y);
    CHECK(oracle::literal_apply(m, *y) == BitVector::from_string("11"));
    // the oracle agrees there are exactly two solutions, 010 and 101
    int count = 0;
    for (std::uint64_t w = 0; w < 8; ++w)
        count += oracle::literal_apply(m, BitVector::from_word(3, w)) == BitVector::from_string("11");
    CHECK(count == 2);
    CHECK_THROWS_AS(solve(m, BitVector(3)), Error);
}

TEST_CASE("coker and compose") {
    CHECK(coker_dim(BitMatrix::identity(5)) == 0);
    CHECK(coker_dim(BitMatrix(3, 6)) == 3);
    CHECK(coker_dim(BitMatrix::from_rows({"110", "011", "101"})) == 1);
    const auto m = BitMatrix::from_rows({"1011", "0110"});
    CHECK(compose(BitMatrix::identity(2), m) == m);
    CHECK(compose(m, BitMatrix(4, 3)).is_zero());
    CHECK(compose(BitMatrix::from_rows({"11"}), BitMatrix::from_rows({"1", "1"})).is_zero());
    CHECK_THROWS_AS(compose(m, m), Error);
}

TEST_CASE("random matrix properties against brute force") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 200; ++t) {
        const std::size_t r = 1 + rng() % 9, c = 1 + rng() % 12;
        const auto m = oracle::random_matrix(r, c, rng, t % 3 == 0 ? 0.2 : 0.5);
        const std::size_t rk = rank(m);
        CHECK(rk == oracle::brute_rank(m));
        CHECK(rk == rank(m.transpose()));
        CHECK(rk == rref(m).rank());
        CHECK(coker_dim(m) + rk == r);
        const auto k = kernel_basis(m);
        CHECK(k.size() == c - rk);
        CHECK((std::size_t{1} << k.size()) == oracle::kernel_count(m));
        if (!k.empty()) CHECK(rank_of_vectors(k, c) == k.size());
        for (const auto& v : k) CHECK(oracle::literal_apply(m, v).none());
        const auto b = oracle::random_vector(r, rng);
        const auto x = solve(m, b);
        const auto aug = m.hstack(BitMatrix::from_columns(r, {b}));
        if (x)
            CHECK(oracle::literal_apply(m, *x) == b);
        else
            CHECK(rank(aug) > rk);
        const auto v = oracle::random_vector(c, rng);
        CHECK(m.apply(v) == oracle::literal_apply(m, v));
    }
}

TEST_CASE("span builder") {
    SpanBuilder s(4);
    CHECK(s.add(BitVector::from_string("1100")));
    CHECK(s.add(BitVector::from_string("0110")));
    CHECK_FALSE(s.add(BitVector::from_string("1010")));
    CHECK(s.contains(BitVector::from_string("1010")));
    CHECK_FALSE(s.contains(BitVector::from_string("0001")));
    CHECK(s.dim() == 2);
}

TEST_CASE("bit vector bookkeeping") {
    auto v = BitVector::from_string("10110");
    CHECK(v.weight() == 3);
    CHECK(v.to_string() == "10110");
    CHECK(v.slice(1, 3).to_string() == "011");
    CHECK(v.concat(BitVector::from_string("01")).to_string() == "1011001");
    CHECK(v.dot(v) == true);
    CHECK(BitVector::from_indices(5, {1, 1, 3}).to_string() == "00010");
    CHECK(BitVector::ones(70).weight() == 70);
}

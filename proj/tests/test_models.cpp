#include "doctest.h"

#include <algorithm>
#include <numeric>

#include "css/errors.hpp"
#include "css/models.hpp"
#include "oracles.hpp"

using namespace css;

namespace {

std::size_t q_homology(const CssComplex& c) { return oracle::homology_dim(&c.dZ(), &c.dX(), c.nq()); }

bool column_weights(const BitMatrix& m, std::size_t w) {
    for (std::size_t j = 0; j < m.cols(); ++j)
        if (m.column(j).weight() != w) return false;
    return true;
}

// Permutation induced on a grade by the shift x_axis -> x_axis + 1.
std::vector<std::size_t> shift_perm(const GradedComplex& c, std::size_t g, int axis, const std::vector<int>& L) {
    std::vector<std::size_t> p(c.size(g));
    for (std::size_t i = 0; i < c.size(g); ++i) {
        CellLabel l = c.cells[g][i];
        l.coords[static_cast<std::size_t>(axis)] = (l.coords[static_cast<std::size_t>(axis)] + 1) % L[static_cast<std::size_t>(axis)];
        p[i] = *c.index_of(g, l);
    }
    return p;
}

}  // namespace

TEST_CASE("model name parsing") {
    CHECK(parse_model("toric2d").kind == ModelKind::Toric);
    CHECK(parse_model("cc:3,1").name() == "cc:3,1");
    CHECK(parse_model("qc:5,2,1").l == 1);
    CHECK(parse_model("chamon").kind == ModelKind::Chamon);
    CHECK_THROWS_AS(parse_model("qc:4,1,0"), Error);
    CHECK_THROWS_AS(parse_model("cc:2,1"), Error);
    try {
        parse_model("qc:4,1,0");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Constraint);
        CHECK(std::string(e.what()).find("= 3") != std::string::npos);
    }
    try {
        parse_model("nope");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownModel);
    }
    CHECK(with_periods(parse_model("xcube"), {3}).periods == std::vector<int>{3, 3, 3});
    CHECK_THROWS_AS(with_periods(parse_model("checkerboard"), {3}), Error);
    CHECK_THROWS_AS(with_periods(parse_model("toric2d"), {1}), Error);
}

TEST_CASE("qpim2d") {
    const auto q = build_qpim2d(2, 2);
    CHECK(q.nZ() == 4);
    CHECK(q.nq() == 4);
    CHECK(q.nX() == 0);
    CHECK(column_weights(q.dZ(), 4));
    CHECK(validate(q.c).ok);
    for (auto [lx, ly] : {std::pair{2, 2}, std::pair{3, 2}, std::pair{3, 4}}) {
        const auto m = build_qpim2d(lx, ly);
        CHECK(m.nq() - oracle::dense_rank(m.dZ().transpose()) == static_cast<std::size_t>(lx + ly - 1));
    }
    const auto cc = build_cc(2, 0, {3, 2});
    const auto qq = build_qpim2d(3, 2);
    CHECK(cc.c == qq.c);
}

TEST_CASE("toric code") {
    const auto t = build_toric(2, {2, 2});
    CHECK(t.nq() == 8);
    CHECK(q_homology(t) == 2);
    CHECK(column_weights(t.dZ(), 4));
    CHECK(column_weights(t.dX().transpose(), 4));
    CHECK(compose(t.dX(), t.dZ()).is_zero());
    const auto t3 = build_toric(3, {2, 2, 2});
    CHECK(column_weights(t3.dX().transpose(), 6));
    CHECK(q_homology(t3) == 3);
}

TEST_CASE("x-cube") {
    const auto x = build_xcube(2, 2, 2);
    CHECK(x.nq() == 24);
    CHECK(x.nX() == 24);
    CHECK(x.nZ() == 8);
    CHECK(column_weights(x.dZ(), 12));
    CHECK(column_weights(x.dX().transpose(), 4));
    CHECK(compose(x.dX(), x.dZ()).is_zero());
    CHECK(q_homology(x) == 9);
    CHECK(q_homology(build_xcube(3, 2, 2)) == 2 * 7 - 3);
}

TEST_CASE("checkerboard") {
    const auto c = build_checkerboard({2, 2, 2});
    CHECK(c.nZ() == 4);
    CHECK(c.nX() == 4);
    CHECK(c.nq() == 8);
    CHECK(column_weights(c.dZ(), 8));
    CHECK(column_weights(c.dX(), 4));
    CHECK(column_weights(c.dX().transpose(), 8));
    CHECK(validate(c.c).ok);
    CHECK(q_homology(c) == 6);
    CHECK(q_homology(build_checkerboard({4, 2, 2})) == 2 * 8 - 6);
    CHECK_THROWS_AS(build_checkerboard({3, 2, 2}), Error);
}

TEST_CASE("haah") {
    for (int L : {2, 3, 4}) {
        const auto h = build_haah({L, L, L});
        CHECK(validate(h.c).ok);
        CHECK(column_weights(h.dZ(), 8));
        CHECK(column_weights(h.dX(), 4));
        CHECK(column_weights(h.dX().transpose(), 8));
        // four terms per vertex copy: each X stabilizer touches 4 R and 4 B sites
        for (std::size_t j = 0; j < h.nX(); ++j) {
            int red = 0;
            for (auto i : h.dX().row(j).support()) red += h.c.cells[1][i].tag == "R";
            CHECK(red == 4);
        }
    }
    // regression value from the byte-level rank oracle (4L-2 for L a power of two)
    CHECK(q_homology(build_haah({2, 2, 2})) == 6);
    CHECK(homology_basis(build_haah({2, 2, 2}).c, 1).dimension == 6);
    CHECK(homology_basis(build_haah({3, 3, 3}).c, 1).dimension == q_homology(build_haah({3, 3, 3})));
}

TEST_CASE("cc and qc families") {
    const auto c41 = build_cc(4, 1, {2, 2, 2, 2});
    CHECK(c41.nq() == 4 * 16);
    CHECK(c41.nZ() == 4 * 16);
    // a (d-k)-cube contains binom(d-k,k) 2^(d-2k) k-faces
    for (auto [d, k] : {std::pair{3, 1}, std::pair{4, 1}, std::pair{5, 2}}) {
        std::vector<int> L(static_cast<std::size_t>(d), 3);
        if (d == 5) L.assign(5, 2);
        const auto c = build_cc(d, k, L);
        CHECK(column_weights(c.dZ(), static_cast<std::size_t>(binomial(d - k, k) << (d - 2 * k))));
    }
    CHECK_THROWS_AS(build_cc(2, 1, {2, 2}), Error);
    const auto q310 = build_qc(3, 1, 0, {2, 2, 2});
    CHECK(validate(q310.c).ok);
    CHECK(q_homology(q310) == 3);
    const auto t3 = build_toric(3, {2, 2, 2});
    CHECK(q310.dZ() == t3.dZ());
    CHECK(q310.dX() == t3.dX());
    CHECK(validate(build_qc(5, 2, 1, {2, 2, 2, 2, 2}).c).ok);
    CHECK_THROWS_AS(build_qc(4, 1, 0, {2, 2, 2, 2}), Error);
}

TEST_CASE("translation invariance") {
    for (const auto& m : {build_xcube(2, 3, 2), build_haah({3, 3, 3}), build_checkerboard({2, 2, 4}),
                          build_toric(2, {3, 2})}) {
        const std::size_t d = m.periods.size();
        for (std::size_t axis = 0; axis < d; ++axis) {
            if (m.model == "checkerboard") continue;
            const int a = static_cast<int>(axis);
            for (std::size_t g = 0; g + 1 < 3; ++g) {
                const auto ps = shift_perm(m.c, g, a, m.periods);
                const auto pt = shift_perm(m.c, g + 1, a, m.periods);
                // D(shift s) = shift(D s): rows permuted by pt equal cols permuted by ps
                BitMatrix lhs(m.c.size(g + 1), m.c.size(g));
                for (std::size_t j = 0; j < m.c.size(g); ++j)
                    for (auto i : m.c.diffs[g].column(j).support()) lhs.set(pt[i], ps[j]);
                CHECK(lhs == m.c.diffs[g]);
            }
        }
    }
    // checkerboard is invariant under shifts by two
    const auto cb = build_checkerboard({4, 4, 4});
    for (int axis = 0; axis < 3; ++axis) {
        // shifting by one leaves the shaded set, so move by two
        std::vector<std::size_t> p2(cb.nZ());
        for (std::size_t i = 0; i < cb.nZ(); ++i) {
            CellLabel l = cb.c.cells[0][i];
            l.coords[static_cast<std::size_t>(axis)] = (l.coords[static_cast<std::size_t>(axis)] + 2) % 4;
            p2[i] = *cb.c.index_of(0, l);
        }
        std::vector<std::size_t> v2(cb.nq());
        for (std::size_t i = 0; i < cb.nq(); ++i) {
            CellLabel l = cb.c.cells[1][i];
            l.coords[static_cast<std::size_t>(axis)] = (l.coords[static_cast<std::size_t>(axis)] + 2) % 4;
            v2[i] = *cb.c.index_of(1, l);
        }
        BitMatrix moved(cb.nq(), cb.nZ());
        for (std::size_t j = 0; j < cb.nZ(); ++j)
            for (auto i : cb.dZ().column(j).support()) moved.set(v2[i], p2[j]);
        CHECK(moved == cb.dZ());
    }
}

TEST_CASE("chamon") {
    const auto m = build_chamon(2);
    CHECK(m.vertices.size() == 8);
    CHECK(m.cubes.size() == 8);
    for (std::size_t c = 0; c < m.cubes.size(); ++c) {
        int x = 0, y = 0, z = 0;
        for (char ch : m.letters[c]) {
            x += ch == 'X';
            y += ch == 'Y';
            z += ch == 'Z';
        }
        CHECK(x == 2);
        CHECK(y == 2);
        CHECK(z == 2);
    }
    // per-corner letters of the cube at the origin, checked at L=4 where corners do not wrap
    const auto m4 = build_chamon(4);
    auto letter = [&](int x, int y, int z) {
        const CellLabel v{{x, y, z}, {}, ""};
        const auto it = std::lower_bound(m4.vertices.begin(), m4.vertices.end(), v);
        return m4.letters[0][static_cast<std::size_t>(it - m4.vertices.begin())];
    };
    CHECK(letter(0, 0, 0) == 'X');
    CHECK(letter(1, 1, 1) == 'X');
    CHECK(letter(0, 0, 1) == 'Y');
    CHECK(letter(1, 1, 0) == 'Y');
    CHECK(letter(0, 1, 1) == 'Z');
    CHECK(letter(1, 0, 0) == 'Z');
    CHECK(letter(0, 1, 0) == 'I');
    CHECK(letter(1, 0, 1) == 'I');
}

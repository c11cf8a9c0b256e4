#include "doctest.h"

#include "css/chain.hpp"
#include "css/errors.hpp"
#include "css/models.hpp"
#include "oracles.hpp"

using namespace css;

namespace {

std::size_t oracle_homology(const GradedComplex& c, std::size_t g) {
    const BitMatrix* in = g > 0 ? &c.diffs[g - 1] : nullptr;
    const BitMatrix* out = g + 1 < c.num_grades() ? &c.diffs[g] : nullptr;
    return oracle::homology_dim(in, out, c.size(g));
}

}  // namespace

TEST_CASE("validate") {
    CHECK(validate(build_toric(2, {2, 2}).c).ok);
    GradedComplex single;
    single.names = {"only"};
    single.cells = {{CellLabel{{0}, {}, ""}}};
    CHECK(validate(single).ok);

    auto t = build_toric(2, {3, 3});
    t.c.diffs[0].flip(0, 0);
    const auto r = validate(t.c);
    CHECK_FALSE(r.ok);
    // The report names a face of grade 0 and a vertex of grade 2.
    CHECK(r.grade == 0);
    CHECK(t.c.cells[0][r.source].ext.size() == 2);
    CHECK(t.c.cells[2][r.target].ext.empty());
    CHECK(r.message.find(t.c.cells[0][r.source].str()) != std::string::npos);
    CHECK(r.message.find(t.c.cells[2][r.target].str()) != std::string::npos);
    // Oracle: the flipped entry breaks exactly the composite at that face.
    const auto p = compose(t.c.diffs[1], t.c.diffs[0]);
    CHECK(p.get(r.target, r.source));
}

TEST_CASE("dualize") {
    const auto t = build_toric(2, {2, 3}).c;
    CHECK(dualize(dualize(t)) == t);
    const auto d = dualize(t);
    CHECK(validate(d).ok);
    CHECK(d.names == std::vector<std::string>{"X", "q", "Z"});
    CHECK(d.diffs[0] == t.diffs[1].transpose());

    const auto q = build_qpim2d(2, 2).c;
    const auto qd = dualize(q);
    // grades of the dual: X (empty), q, Z. Each vertex lies in four plaquettes.
    const auto& dzs = qd.diffs[1];
    REQUIRE(dzs.rows() == 4);
    REQUIRE(dzs.cols() == 4);
    for (std::size_t v = 0; v < 4; ++v) CHECK(dzs.column(v).weight() == 4);
}

TEST_CASE("tensor products of circles") {
    for (int L : {2, 3, 4}) {
        const auto p = tensor_product(circle_complex(L), circle_complex(L)).complex;
        REQUIRE(p.num_grades() == 3);
        CHECK(p.size(0) == static_cast<std::size_t>(L * L));
        CHECK(p.size(1) == static_cast<std::size_t>(2 * L * L));
        CHECK(p.size(2) == static_cast<std::size_t>(L * L));
        CHECK(validate(p).ok);
        CHECK(homology_basis(p, 0).dimension == 1);
        CHECK(homology_basis(p, 1).dimension == 2);
        CHECK(homology_basis(p, 2).dimension == 1);
    }
}

TEST_CASE("kunneth on css times circle") {
    for (const auto& css : {build_toric(2, {2, 2}), build_qpim2d(2, 3), build_xcube(2, 2, 2)}) {
        const auto circ = circle_complex(2);
        const auto p = tensor_product(css.c, circ).complex;
        CHECK(validate(p).ok);
        for (std::size_t g = 0; g < p.num_grades(); ++g) {
            std::size_t expect = 0;
            for (std::size_t j = 0; j < css.c.num_grades(); ++j)
                if (g >= j && g - j < circ.num_grades())
                    expect += oracle_homology(css.c, j) * oracle_homology(circ, g - j);
            CHECK(homology_basis(p, g).dimension == expect);
        }
    }
}

TEST_CASE("foliation matches tensor product with a circle") {
    for (int Lw : {1, 2, 3}) {
        for (const auto& css : {build_qpim2d(2, 2), build_toric(2, {2, 2}), build_xcube(2, 2, 2)}) {
            const auto f = foliate(css, Lw, WBoundary::Periodic);
            const auto p = tensor_product(css.c, circle_complex(Lw)).complex;
            CHECK(f.c.cells == p.cells);
            CHECK(f.c.diffs == p.diffs);
        }
    }
}

TEST_CASE("foliation counts and boundaries") {
    const auto q = build_qpim2d(2, 2);
    const auto f = foliate(q, 2, WBoundary::Periodic);
    CHECK(f.nQ1() == 16);
    CHECK(f.nQ2() == 8);
    const auto o = foliate(q, 2, WBoundary::Open);
    CHECK(o.nQ1() == 4 * 3 + 4 * 2);
    CHECK(o.nQ2() == 4 * 3);
    CHECK(validate(o.c).ok);
    const auto open_seg = tensor_product(q.c, segment_complex(2)).complex;
    CHECK(o.c.cells == open_seg.cells);
    CHECK(o.c.diffs == open_seg.diffs);
    CHECK_THROWS_AS(foliate(q, 0, WBoundary::Periodic), Error);

    // Toric foliation: Q1 cells are 2-dimensional, Q2 cells 1-dimensional.
    const auto rbh = foliate(build_toric(2, {2, 2}), 2, WBoundary::Periodic);
    for (const auto& l : rbh.c.cells[1]) CHECK(l.ext.size() == 2);
    for (const auto& l : rbh.c.cells[2]) CHECK(l.ext.size() == 1);

    const auto x = foliate(build_xcube(2, 2, 2), 2, WBoundary::Periodic);
    CHECK(validate(x.c).ok);
    // provenance is consistent with the index lookup
    for (std::size_t g = 0; g < 4; ++g)
        for (std::size_t i = 0; i < x.c.size(g); ++i) {
            const auto& o2 = x.origin[g][i];
            CHECK(x.index(g, o2.css_grade, o2.css_index, o2.point, o2.w) == i);
        }
}

TEST_CASE("homology dimensions") {
    const auto t = build_toric(2, {2, 2});
    CHECK(homology_basis(t.c, 1).dimension == 2);
    CHECK(oracle_homology(t.c, 1) == 2);
    for (auto [lx, ly] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 4}}) {
        const auto q = build_qpim2d(lx, ly);
        const auto d = dualize(q.c);
        CHECK(homology_basis(d, 1).dimension == static_cast<std::size_t>(lx + ly - 1));
    }
    CHECK(homology_basis(build_checkerboard({2, 2, 2}).c, 1).dimension == 6);
    const auto h = homology_basis(t.c, 1);
    for (const auto& r : h.reps) CHECK(is_cycle(t.c, 1, r));
    CHECK(rank_of_vectors(h.reps, t.nq()) == h.reps.size());
    CHECK_THROWS_AS(homology_basis(t.c, 3), Error);
}

TEST_CASE("adjointness of the intersection pairing") {
    std::mt19937_64 rng(11);
    const auto q = build_qpim2d(3, 3);
    for (int t = 0; t < 50; ++t) {
        const auto cq = oracle::random_vector(q.nq(), rng);
        const auto cz = oracle::random_vector(q.nZ(), rng);
        CHECK(intersection(cq, q.dZ().apply(cz)) == intersection(q.dZ().transpose().apply(cq), cz));
    }
    const auto v = BitVector::from_string("10110");
    CHECK(intersection(v, v) == (v.weight() % 2 == 1));
    CHECK_FALSE(intersection(BitVector::from_string("1100"), BitVector::from_string("0011")));
    CHECK_THROWS_AS(intersection(v, BitVector(3)), Error);
}

TEST_CASE("pairing nondegeneracy") {
    const auto t = build_toric(2, {2, 2});
    const auto pm = pairing_matrix(homology_basis(t.c, 1), homology_basis(dualize(t.c), 1));
    CHECK(pm.rows() == 2);
    CHECK(rank(pm) == 2);
    const auto q = build_qpim2d(2, 3);
    const auto pq = pairing_matrix(homology_basis(q.c, 1), homology_basis(dualize(q.c), 1));
    CHECK(rank(pq) == 4);
    GradedComplex triv;
    triv.names = {"a", "b"};
    triv.cells = {{CellLabel{{0}, {}, ""}}, {CellLabel{{0}, {0}, ""}}};
    triv.diffs = {BitMatrix::identity(1)};
    const auto pt = pairing_matrix(homology_basis(triv, 1), homology_basis(dualize(triv), 0));
    CHECK(pt.rows() == 0);
}

TEST_CASE("is_boundary") {
    const auto t = build_toric(2, {3, 3});
    CHECK(is_boundary(t.c, 1, BitVector(t.nq())));
    const auto face = BitVector::from_indices(t.nZ(), {4});
    auto pre = is_boundary(t.c, 1, t.dZ().apply(face));
    REQUIRE(pre);
    CHECK(t.dZ().apply(*pre) == t.dZ().apply(face));
    const auto h = homology_basis(t.c, 1);
    for (const auto& r : h.reps) CHECK_FALSE(is_boundary(t.c, 1, r));
    CHECK_THROWS_AS(is_boundary(t.c, 1, BitVector::from_indices(t.nq(), {0})), Error);
}

TEST_CASE("json round trip") {
    for (const auto& c : {build_haah({2, 2, 2}).c, foliate(build_xcube(2, 2, 2), 2, WBoundary::Open).c}) {
        const auto text = complex_to_json(c);
        CHECK(complex_from_json(text) == c);
    }
    CHECK_THROWS_AS(complex_from_json("{not json"), Error);
}

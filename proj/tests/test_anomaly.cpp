#include "doctest.h"

#include <cmath>
#include <random>

#include "css/anomaly.hpp"
#include "css/errors.hpp"
#include "css/models.hpp"

using namespace css;

namespace {

BitVector random_in(const std::vector<BitVector>& basis, std::size_t len, std::mt19937_64& rng) {
    BitVector v(len);
    for (const auto& b : basis)
        if (rng() & 1) v ^= b;
    return v;
}

// Relative cycles of the foliation itself: d2 z vanishes away from the w ends.
std::vector<BitVector> fol_relative_cycles(const FoliatedComplex& fol) {
    const BitMatrix& d2 = fol.c.diffs[2];
    std::vector<BitVector> rows;
    for (std::size_t a = 0; a < d2.rows(); ++a) {
        const int w = fol.origin[3][a].w;
        if (w != 0 && w != fol.Lw) rows.push_back(d2.row(a));
    }
    return kernel_basis(BitMatrix::from_row_vectors(d2.cols(), rows));
}

}  // namespace

TEST_CASE("spacetime complex") {
    const auto toric = build_toric(2, {2, 2});
    const auto st = build_spacetime(toric, 2, WBoundary::Periodic, 2);
    CHECK(validate(st.c()).ok);
    CHECK(st.c().size(2) == 2 * (st.fol.nQ1() + st.fol.nQ2()));
    CHECK(st.c().size(0) == 2 * st.fol.c.size(0));
    // Kunneth with one circle
    const auto h = [](const GradedComplex& c, std::size_t g) { return homology_basis(c, g).dimension; };
    CHECK(h(st.c(), 2) == h(st.fol.c, 2) + h(st.fol.c, 1));
    CHECK(h(st.c(), 1) == h(st.fol.c, 1) + h(st.fol.c, 0));

    // doubled time labels
    for (std::size_t i = 0; i < st.c().size(2); ++i) {
        const int t = st.time2(2, i);
        CHECK((t % 2 == 0) == st.on_point(2, i));
    }
    CHECK(st.w_end(2, 0) == -1);
    CHECK_THROWS_AS(build_spacetime(toric, 1, WBoundary::Open, 0), Error);
}

TEST_CASE("defect slicing") {
    const auto toric = build_toric(2, {2, 2});
    const auto st = build_spacetime(toric, 2, WBoundary::Periodic, 3);
    const auto& fol = st.fol;
    const auto L = static_cast<std::size_t>(st.Ltau);
    const auto hom = homology_basis(fol.c, 1);
    REQUIRE(hom.dimension > 0);

    // a static membrane: the same Q1 cycle at every time
    std::vector<BitVector> pts(L, hom.reps[0]), ivs(L, BitVector(fol.nQ2()));
    const auto z = decompose_defect(st, DefectKind::Cycle, assemble_defect(st, pts, ivs));
    CHECK(z.rel_boundary.none());
    CHECK(z.at_point[2] == hom.reps[0]);
    CHECK(is_cycle(st.c(), 2, z.chain));

    // deform slice 1 by a boundary and pay on the adjacent intervals
    const BitVector q = BitVector::from_indices(fol.nQ1(), {0});
    pts[1] ^= fol.c.diffs[0].column(0);
    const auto z2 = decompose_defect(st, DefectKind::Cycle, assemble_defect(st, pts, ivs));
    CHECK(is_cycle(st.c(), 2, z2.chain));
    pts[1] ^= q;
    CHECK_THROWS_AS(decompose_defect(st, DefectKind::Cycle, assemble_defect(st, pts, ivs)), Error);
    // moving a Q1 cell in time needs d1 of it on the interval between
    ivs[1] = fol.d1().apply(q);
    pts[2] ^= q;
    const auto z3 = decompose_defect(st, DefectKind::Cycle, assemble_defect(st, pts, ivs));
    CHECK(z3.at_point[1] == (hom.reps[0] ^ fol.c.diffs[0].column(0) ^ q));

    // random cycles survive a slice round trip
    std::mt19937_64 rng(5);
    const auto cyc = relative_cycle_basis(st);
    const auto dual = dual_cycle_basis(st);
    for (int t = 0; t < 5; ++t) {
        const auto a = decompose_defect(st, DefectKind::Cycle, random_in(cyc, st.c().size(2), rng));
        CHECK(assemble_defect(st, a.at_point, a.on_interval) == a.chain);
        const auto b = decompose_defect(st, DefectKind::DualCycle, random_in(dual, st.c().size(2), rng));
        CHECK(assemble_defect(st, b.at_point, b.on_interval) == b.chain);
    }
    // a single dual cell is not closed
    CHECK_THROWS_AS(decompose_defect(st, DefectKind::DualCycle, BitVector::from_indices(st.c().size(2), {0})), Error);
    CHECK_THROWS_AS(decompose_defect(st, DefectKind::Cycle, BitVector(3)), Error);

    // intersection of contractible pieces
    const auto empty = decompose_defect(st, DefectKind::DualCycle, st.c().zero(2));
    CHECK(partition_intersection(z, empty) == 1);
    CHECK_THROWS_AS(partition_intersection(empty, z), Error);
}

TEST_CASE("open spacetime boundaries") {
    const auto toric = build_toric(2, {2, 2});
    const auto st = build_spacetime(toric, 1, WBoundary::Open, 2);
    std::mt19937_64 rng(2);
    const auto cyc = relative_cycle_basis(st);
    const auto b = build_boundary_spacetime(toric, 2);
    std::size_t nonzero = 0;
    for (int t = 0; t < 8; ++t) {
        const auto z = decompose_defect(st, DefectKind::Cycle, random_in(cyc, st.c().size(2), rng));
        nonzero += z.rel_boundary.any();
        for (auto i : z.rel_boundary.support()) CHECK(st.w_end(3, i) >= 0);
        const auto zs = decompose_defect(st, DefectKind::DualCycle,
                                         random_in(dual_cycle_basis(st), st.c().size(2), rng));
        // slices read at each end satisfy the boundary recursions
        for (int end = 0; end < 2; ++end) CHECK_NOTHROW(validate_slices(toric, boundary_slices(st, z, zs, end)));
    }
    CHECK(nonzero > 0);

    // a boundary gauge chain embeds into the bulk; its bulk boundary stays on the end
    for (int end = 0; end < 2; ++end) {
        const BitVector c = BitVector::from_word(b.c().size(1), rng());
        const BitVector e = embed_boundary_chain(st, b, 1, c, end);
        const auto z = decompose_defect(st, DefectKind::Cycle, e);
        for (auto i : z.rel_boundary.support()) CHECK(st.w_end(3, i) == end);
    }
    const auto per = build_spacetime(toric, 2, WBoundary::Periodic, 1);
    const auto zero = decompose_defect(per, DefectKind::Cycle, per.c().zero(2));
    CHECK_THROWS_AS(boundary_slices(per, zero, zero, 0), Error);
}

TEST_CASE("boundary trace without defects is the ground-space dimension") {
    const auto toric = build_toric(2, {2, 2});
    CHECK(boundary_partition_trace(toric, BoundarySlices::empty(toric, 1)) == doctest::Approx(4.0));
    CHECK(boundary_partition_trace(toric, BoundarySlices::empty(toric, 3)) == doctest::Approx(4.0));
    const auto q = build_qpim2d(2, 2);
    CHECK(boundary_partition_trace(q, BoundarySlices::empty(q, 2)) == doctest::Approx(8.0));
    const auto big = build_toric(2, {3, 3});
    CHECK_THROWS_AS(boundary_partition_trace(big, BoundarySlices::empty(big, 1)), Error);
}

TEST_CASE("BF sum equals the boundary trace") {
    const auto toric = build_toric(2, {2, 2});
    auto s = BoundarySlices::empty(toric, 1);
    CHECK(bf_partition(toric, s).normalized_derived == doctest::Approx(boundary_partition_trace(toric, s)));
    s.cq[0] = toric.dZ().column(0);
    s.zZ[0] = BitVector::from_indices(toric.nZ(), {0, 1});
    CHECK(boundary_partition_trace(toric, s) == doctest::Approx(-4.0));
    CHECK(bf_partition(toric, s).normalized_derived == doctest::Approx(-4.0));

    // random closed boundary defects; one time step keeps the BF sum at 24 bits
    const auto b = build_boundary_spacetime(toric, 1);
    const auto zs = kernel_basis(b.c().diffs[2]);
    const auto zd = kernel_basis(b.c().diffs[0].transpose());
    std::mt19937_64 rng(11);
    std::size_t nonzero = 0;
    for (int t = 0; t < 12; ++t) {
        const auto sl = slices_from_chains(b, random_in(zs, b.c().size(2), rng), random_in(zd, b.c().size(1), rng));
        const double tr = boundary_partition_trace(toric, sl);
        CAPTURE(t);
        CHECK(bf_partition(toric, sl).normalized_derived == doctest::Approx(tr));
        nonzero += tr != 0;
    }
    // defects built from exact pieces always have a nonzero trace
    for (int t = 0; t < 6; ++t) {
        auto sl = BoundarySlices::empty(toric, 1);
        sl.zX[0] = toric.dX().apply(BitVector::from_word(toric.nq(), rng()));
        sl.cq[0] = toric.dZ().apply(BitVector::from_word(toric.nZ(), rng()));
        sl.zZ[0] = toric.dZ().transpose().apply(BitVector::from_word(toric.nq(), rng()));
        sl.cstar[0] = toric.dX().transpose().apply(BitVector::from_word(toric.nX(), rng()));
        const double tr = boundary_partition_trace(toric, sl);
        CHECK(std::abs(tr) == doctest::Approx(4.0));
        CHECK(bf_partition(toric, sl).normalized_derived == doctest::Approx(tr));
        nonzero += 1;
    }
    CHECK(nonzero >= 6);
}

TEST_CASE("linked pair in a closed spacetime") {
    const auto toric = build_toric(2, {2, 2});
    const auto st = build_spacetime(toric, 1, WBoundary::Periodic, 1);
    REQUIRE(st.fol.nQ1() + st.fol.nQ2() == 24);
    const auto [z, zs] = linked_pair(st);
    CHECK(partition_intersection(z, zs) == -1);
    CHECK(partition_operator_trace(st, z, zs, TraceMethod::Stabilizer) == doctest::Approx(-1.0));
    const BulkTrace dense(st, TraceMethod::Dense);
    REQUIRE(dense.dense());
    CHECK(dense(z, zs) == doctest::Approx(-1.0));

    // unlinking: move the membrane off the dual logical by a spacetime boundary
    const auto zero = decompose_defect(st, DefectKind::Cycle, st.c().zero(2));
    CHECK(dense(zero, zs) == doctest::Approx(1.0));

    // closed trials; a few of them also by the dense path
    const BulkTrace stab(st, TraceMethod::Stabilizer);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto t = closed_trial(st, stab, seed);
        CAPTURE(seed);
        CHECK(t.pass);
        if (seed < 3) CHECK(closed_trial(st, dense, seed).trace == t.trace);
    }
}

TEST_CASE("closed trials at longer time") {
    const auto st = build_spacetime(build_qpim2d(2, 2), 2, WBoundary::Periodic, 3);
    const BulkTrace stab(st, TraceMethod::Stabilizer);
    const auto [z, zs] = linked_pair(st);
    CHECK(stab(z, zs) == doctest::Approx(-1.0));
    for (std::uint64_t seed = 0; seed < 10; ++seed) CHECK(closed_trial(st, stab, seed).pass);
}

TEST_CASE("anomaly inflow") {
    const auto toric = build_toric(2, {2, 2});
    const auto st = build_spacetime(toric, 1, WBoundary::Open, 1);
    REQUIRE(st.fol.nQ1() + st.fol.nQ2() == 36);
    const BulkTrace trace(st);
    CHECK_FALSE(trace.dense());
    int dual = 0, flipped = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto t = inflow_trial(st, trace, seed);
        CAPTURE(seed);
        CAPTURE(t.bulk_ratio);
        CAPTURE(t.boundary_ratio);
        CHECK(t.good_dim_z > 0);
        CHECK(t.good_dim_zstar > 0);
        CHECK(t.pass);
        dual += t.dual;
        flipped += t.bulk_ratio == -1;
    }
    // both kinds of gauge change, and some nontrivial phases
    CHECK(dual > 0);
    CHECK(dual < 50);
    CHECK(flipped > 0);

    const auto st2 = build_spacetime(build_qpim2d(2, 2), 1, WBoundary::Open, 2);
    const BulkTrace trace2(st2);
    for (std::uint64_t seed = 0; seed < 10; ++seed) CHECK(inflow_trial(st2, trace2, seed).pass);

    const auto per = build_spacetime(toric, 1, WBoundary::Periodic, 1);
    CHECK_THROWS_AS(inflow_trial(per, BulkTrace(per, TraceMethod::Stabilizer), 0), Error);
}

TEST_CASE("boundary state of the open cluster state") {
    std::mt19937_64 rng(9);
    const auto q = foliate(build_qpim2d(2, 2), 1, WBoundary::Open);
    REQUIRE(q.nQ1() + q.nQ2() == 20);
    const auto rel = fol_relative_cycles(q);
    const auto dual = kernel_basis(q.c.diffs[0].transpose());
    int accepted = 0, refused = 0;
    for (int t = 0; t < 40; ++t) {
        const BitVector z = t == 0 ? BitVector(q.nQ2()) : random_in(rel, q.nQ2(), rng);
        const BitVector zs = t == 0 ? BitVector(q.nQ1()) : random_in(dual, q.nQ1(), rng);
        CAPTURE(t);
        // both paths refuse the same excitations: those killed by the <+| projection
        BoundaryStateReport d, s;
        bool dense_refused = false, stab_refused = false;
        try {
            d = boundary_state_check(q, z, zs, TraceMethod::Dense);
        } catch (const Error& e) {
            dense_refused = e.kind() == ErrorKind::Precondition;
        }
        try {
            s = boundary_state_check(q, z, zs, TraceMethod::Stabilizer);
        } catch (const Error& e) {
            stab_refused = e.kind() == ErrorKind::Precondition;
        }
        CHECK(dense_refused == stab_refused);
        if (dense_refused) {
            ++refused;
            continue;
        }
        ++accepted;
        CHECK(d.dense);
        CHECK_FALSE(s.dense);
        CHECK(d.checks == s.checks);
        CHECK(d.failures.empty());
        CHECK(s.failures.empty());
        CHECK(d.max_deviation < 1e-9);
    }
    CHECK(accepted > 3);
    CHECK(refused > 0);

    const auto f = foliate(build_toric(2, {2, 2}), 1, WBoundary::Open);
    const auto frel = fol_relative_cycles(f);
    const auto fdual = kernel_basis(f.c.diffs[0].transpose());
    int toric_ok = 0;
    for (int t = 0; t < 12; ++t) {
        try {
            const auto r = boundary_state_check(f, random_in(frel, f.nQ2(), rng), random_in(fdual, f.nQ1(), rng));
            CHECK_FALSE(r.dense);
            CHECK(r.checks > 0);
            CHECK(r.failures.empty());
            ++toric_ok;
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Precondition);
        }
    }
    CHECK(toric_ok > 1);

    // an excitation that is not a relative cycle is refused
    BitVector bad(f.nQ2());
    for (std::size_t j = 0; j < f.nQ2(); ++j)
        if (f.c.diffs[2].apply(BitVector::from_indices(f.nQ2(), {j})).any()) {
            bad.set(j);
            break;
        }
    const auto w_interior = [&](const BitVector& v) {
        for (auto a : f.c.diffs[2].apply(v).support())
            if (f.origin[3][a].w != 0 && f.origin[3][a].w != f.Lw) return true;
        return false;
    };
    if (w_interior(bad)) CHECK_THROWS_AS(boundary_state_check(f, bad, BitVector(f.nQ1())), Error);
    CHECK_THROWS_AS(boundary_state_check(f, bad, BitVector::from_indices(f.nQ1(), {0})), Error);
}

#include "doctest.h"

#include <cmath>
#include <random>

#include "css/errors.hpp"
#include "css/models.hpp"
#include "css/statmech.hpp"

using namespace css;

namespace {

// Spin values as literal +-1 integers, products taken one spin at a time.
long double literal_sum(const BondModel& m) {
    long double z = 0;
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << m.n_spins); ++c) {
        std::vector<int> s(m.n_spins);
        for (std::size_t i = 0; i < m.n_spins; ++i) s[i] = (c >> i & 1) ? -1 : 1;
        long double e = 0;
        for (const auto& b : m.bonds) {
            int prod = b.flip ? -1 : 1;
            for (auto i : b.spins) prod *= s[i];
            e += static_cast<long double>(m.classes[b.cls]) * prod;
        }
        z += std::exp(e);
    }
    return z;
}

double rel(double a, long double b) { return static_cast<double>(std::abs(a - b) / std::abs(b)); }

std::vector<CssComplex> small_models() {
    return {build_toric(2, {2, 2}), build_qpim2d(2, 2), build_checkerboard({2, 2, 2}), build_qpim2d(3, 2)};
}

}  // namespace

TEST_CASE("zero coupling counts configurations") {
    for (const auto& m : small_models()) {
        const auto r = z_Z(m, 0.0);
        CHECK(r.value == doctest::Approx(std::ldexp(1.0, static_cast<int>(m.nZ()))));
        CHECK(r.config_count == (std::uint64_t{1} << m.nZ()));
    }
}

TEST_CASE("brute force agrees with the literal spin loop") {
    std::mt19937_64 rng(4);
    for (const auto& m : small_models()) {
        for (double K : {0.2, 0.5, 1.0}) {
            CHECK(rel(z_Z(m, K).value, literal_sum(z_model(m, K))) < 1e-12);
            for (const auto& t : twist_sectors(m)) {
                const auto v = z_X_twisted(m, K, t.rep).value;
                CHECK(rel(v, literal_sum(x_twisted_model(m, K, t.rep))) < 1e-12);
            }
        }
    }
    // 2d Ising on the four plaquettes of the 2x2 torus: each plaquette pair shares two edges
    const auto toric = build_toric(2, {2, 2});
    CHECK(toric.nZ() == 4);
    CHECK(z_model(toric, 0.5).bonds.size() == 8);
    const auto f = foliate(build_qpim2d(2, 2), 2, WBoundary::Periodic);
    CHECK(rel(foliated_Z(f, 0.4, 0.6).value, literal_sum(foliated_model(f, 0.4, 0.6))) < 1e-12);
    CHECK(foliated_Z(f, 0, 0).value == doctest::Approx(std::ldexp(1.0, static_cast<int>(f.nQ2()))));
}

TEST_CASE("cap and coupling preconditions") {
    BondModel big;
    big.n_spins = 31;
    big.classes = {1.0};
    CHECK_THROWS_AS(evaluate(big), Error);
    CHECK_THROWS_AS(dual_coupling(0.0), Error);
    CHECK_THROWS_AS(check_twisted_duality(build_toric(2, {2, 2}), -0.1), Error);
    // a non-cycle twist is refused
    const auto m = build_toric(2, {2, 2});
    CHECK_THROWS_AS(z_X_twisted(m, 0.3, BitVector::from_indices(m.nq(), {0})), Error);
}

TEST_CASE("twist sectors") {
    const auto toric = build_toric(2, {2, 2});
    const auto st = twist_sectors(toric);
    CHECK(st.size() == 4);
    // a noncontractible dual line on the 2x2 torus flips L = 2 bonds
    for (const auto& s : st)
        if (s.index == 1 || s.index == 2) CHECK(s.rep.weight() % 2 == 0);
    const auto q = build_qpim2d(2, 2);
    CHECK(twist_sectors(q).size() == 8);
    CHECK(twist_sectors(build_qpim2d(3, 2)).size() == 16);

    // the value depends on the class only
    std::mt19937_64 rng(8);
    for (const auto& m : {toric, q}) {
        for (const auto& s : twist_sectors(m)) {
            const double v = z_X_twisted(m, 0.45, s.rep).value;
            BitVector shifted = s.rep;
            for (std::size_t a = 0; a < m.nX(); ++a)
                if (rng() & 1) shifted ^= m.dX().row(a);
            CHECK(rel(z_X_twisted(m, 0.45, shifted).value, v) < 1e-12);
        }
    }
    // zero twist gives the untwisted model
    CHECK(z_X_twisted(toric, 0.3, BitVector(toric.nq())).value == doctest::Approx(z_X_twisted(toric, 0.3, st[0].rep).value));
}

TEST_CASE("twisted duality") {
    for (const auto& m : small_models()) {
        for (double K : {0.3, 0.4, 0.7}) {
            const auto r = check_twisted_duality(m, K);
            CAPTURE(m.model);
            CAPTURE(K);
            CHECK(r.residual_derived < 1e-9);
            // printed and derived prefactors differ by 2^{rank dZ - |q|/2}
            const double gap = (r.log_prefactor_printed - r.log_prefactor_derived) / std::log(2.0);
            CHECK(gap == doctest::Approx(static_cast<double>(rank(m.dZ())) - 0.5 * static_cast<double>(m.nq())));
        }
    }
}

TEST_CASE("strange correlator") {
    for (const auto& m : {build_toric(2, {2, 2}), build_qpim2d(2, 2), build_checkerboard({2, 2, 2})}) {
        for (double K : {0.2, 0.5, 1.0}) {
            const auto r = strange_correlator(m, K);
            CAPTURE(m.model);
            CHECK(r.residual < 1e-9);
        }
        CHECK(strange_normalization_spread(m, {0.2, 0.5, 1.0}) < 1e-9);
    }
}

TEST_CASE("foliated duality and strange correlator") {
    const auto f = foliate(build_qpim2d(2, 2), 2, WBoundary::Periodic);
    const auto r = check_foliated_duality(f, 0.4, 0.6);
    CHECK(r.residual_derived < 1e-9);
    CHECK(r.sectors == (std::size_t{1} << homology_basis(f.c, 1).dimension));
    CHECK(r.sectors <= 128);
    const double gap = (r.log_prefactor_derived - r.log_prefactor_printed) / std::log(2.0);
    const double dimker = static_cast<double>(f.nQ1() - rank(f.d1()));
    CHECK(gap == doctest::Approx(dimker - 0.5 * static_cast<double>(f.nQ1())));

    // self-dual coupling
    const double Jsd = 0.5 * std::log(1 + std::sqrt(2.0));
    CHECK(dual_coupling(Jsd) == doctest::Approx(Jsd));
    CHECK(check_foliated_duality(f, Jsd, Jsd).residual_derived < 1e-9);

    // twist depends on the class only
    std::mt19937_64 rng(3);
    const auto sectors = foliated_twist_sectors(f);
    const auto& s = sectors.back();
    BitVector shifted = s.rep;
    for (std::size_t j = 0; j < f.c.size(0); ++j)
        if (rng() & 1) shifted ^= f.c.diffs[0].column(j);
    CHECK(rel(foliated_dual_twisted(f, 0.3, 0.8, shifted).value, foliated_dual_twisted(f, 0.3, 0.8, s.rep).value) < 1e-12);

    const auto sc = foliated_strange_correlator(foliate(build_qpim2d(2, 2), 1, WBoundary::Periodic), 0.4, 0.6);
    CHECK(sc.residual < 1e-9);
}

TEST_CASE("BF sum") {
    const auto toric = build_toric(2, {2, 2});
    const auto none = BoundarySlices::empty(toric, 1);
    const auto r = bf_partition(toric, none);
    CHECK(r.bits == 24);
    CHECK(r.normalized_derived == 4.0);  // ground-space dimension

    // plaquette loop c_q around a static m-pair containing that plaquette
    auto linked = none;
    linked.cq[0] = toric.dZ().column(0);
    linked.zZ[0] = BitVector::from_indices(toric.nZ(), {0, 1});
    CHECK(bf_partition(toric, linked).normalized_derived == -4.0);
    auto unlinked = linked;
    unlinked.zZ[0] = BitVector::from_indices(toric.nZ(), {1, 2});
    CHECK(bf_partition(toric, unlinked).normalized_derived == 4.0);

    // qPIM over two time steps
    const auto q = build_qpim2d(2, 2);
    CHECK(bf_partition(q, BoundarySlices::empty(q, 2)).normalized_derived == 8.0);

    // malformed slices
    auto bad = none;
    bad.cq[0] = BitVector::from_indices(toric.nq(), {0});
    CHECK_THROWS_AS(bf_partition(toric, bad), Error);
}

TEST_CASE("BF gauge invariance") {
    const auto toric = build_toric(2, {2, 2});
    auto s = BoundarySlices::empty(toric, 3);
    // a pair of X-excitations created at time 1 and annihilated at time 2
    const BitVector edge = BitVector::from_indices(toric.nq(), {0});
    s.cq[1] = edge;
    s.cq[2] = edge;
    s.zX[1] = toric.dX().apply(edge);
    s.zZ[0] = BitVector::from_indices(toric.nZ(), {0, 3});
    s.zZ[1] = s.zZ[0];
    s.zZ[2] = s.zZ[0];
    validate_slices(toric, s);
    for (std::uint64_t seed = 0; seed < 10; ++seed) CHECK(bf_gauge_check(toric, s, seed).all());

    // the a_q shift alone is not a symmetry
    std::mt19937_64 rng(1);
    int broken = 0;
    for (int t = 0; t < 20; ++t) {
        BfConfig cfg;
        for (int k = 0; k < 3; ++k) {
            cfg.aq.push_back(BitVector::from_word(toric.nq(), rng()));
            cfg.bq.push_back(BitVector::from_word(toric.nq(), rng()));
            cfg.aZ.push_back(BitVector::from_word(toric.nZ(), rng()));
            cfg.bX.push_back(BitVector::from_word(toric.nX(), rng()));
        }
        auto shifted = cfg;
        shifted.aq[1] ^= toric.dZ().apply(BitVector::from_indices(toric.nZ(), {2}));
        broken += bf_phase(toric, s, shifted) != bf_phase(toric, s, cfg);
    }
    CHECK(broken > 0);
}

#include "css/acceptance.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "css/anomaly.hpp"
#include "css/errors.hpp"
#include "css/gsd.hpp"
#include "css/models.hpp"
#include "css/pauli.hpp"
#include "css/statesim.hpp"
#include "css/statmech.hpp"

namespace css {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::vector<int> cube(int d, int L) { return std::vector<int>(static_cast<std::size_t>(d), L); }

std::string periods_str(const std::vector<int>& p) {
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "x" : "") + std::to_string(p[i]);
    return s;
}

CriterionResult c1() {
    CriterionResult r{1, "log2 GSD of cc(d,k) models", {}, {}};
    const struct {
        int d, k, L;
        long long want;
    } rows[] = {{3, 1, 2, 10}, {3, 1, 3, 29}, {3, 1, 4, 66}, {4, 1, 2, 40}, {5, 1, 2, 126},
                {5, 2, 2, 134}, {6, 1, 2, 336}, {6, 2, 2, 526}};
    for (const auto& x : rows) {
        const auto name = "cc(" + std::to_string(x.d) + "," + std::to_string(x.k) + ") L=" + std::to_string(x.L);
        r.checks.push_back(exact_check(name, "cc log2 GSD polynomial table",
                                       static_cast<double>(gsd_cc(x.d, x.k, cube(x.d, x.L))),
                                       static_cast<double>(x.want)));
    }
    return r;
}

CriterionResult c2() {
    CriterionResult r{2, "log2 GSD of qc(d,k,l) models", {}, {}};
    const struct {
        int d, k, l, L;
        long long want;
    } rows[] = {{3, 1, 0, 2, 3}, {3, 1, 0, 3, 3}, {5, 2, 1, 2, 10}, {5, 1, 0, 2, 95}, {6, 2, 0, 2, 469}};
    for (const auto& x : rows) {
        const auto name = "qc(" + std::to_string(x.d) + "," + std::to_string(x.k) + "," + std::to_string(x.l) +
                          ") L=" + std::to_string(x.L);
        const auto table = table_qc_value(x.d, x.k, x.l, cube(x.d, x.L));
        r.checks.push_back(exact_check(name, "qc log2 GSD polynomial table",
                                       static_cast<double>(gsd_qc(x.d, x.k, x.l, cube(x.d, x.L))),
                                       static_cast<double>(x.want),
                                       table ? "closed form " + std::to_string(*table) : "no closed form"));
    }
    return r;
}

CriterionResult c3() {
    CriterionResult r{3, "polynomial and chain-complex GSD agree", {}, {}};
    const struct {
        const char* model;
        long long want;
    } rows[] = {{"qpim2d", 3}, {"toric3d", 3}, {"checkerboard", 6}, {"xcube", 9}};
    for (const auto& x : rows) {
        const auto cc = gsd_cross_check(with_periods(parse_model(x.model), {2}));
        auto c = exact_check(std::string(x.model) + " L=2 polynomial", "log2 GSD from generating map",
                             static_cast<double>(cc.algebraic), static_cast<double>(x.want));
        r.checks.push_back(c);
        auto h = exact_check(std::string(x.model) + " L=2 homology", "log2 GSD from chain complex homology",
                             static_cast<double>(cc.homology), static_cast<double>(x.want));
        h.pass = h.pass && cc.pass;
        r.checks.push_back(h);
    }
    return r;
}

CriterionResult c4() {
    CriterionResult r{4, "KW intertwining relations", {}, {}};
    for (const auto& m : {build_toric(2, {2, 2}), build_qpim2d(2, 2), build_qpim2d(3, 3)}) {
        const auto rep = kw_relations(m, kw_build(m));
        r.checks.push_back(tol_check(m.model + " " + periods_str(m.periods), "KW intertwines X, Z and the differentials",
                                     rep.max_deviation, 0, rep.max_deviation, 1e-12,
                                     std::to_string(rep.checks) + " relations"));
    }
    return r;
}

CriterionResult c5() {
    CriterionResult r{5, "non-invertible fusion of KW", {}, {}};
    auto add = [&](const std::string& name, const Entangler& e) {
        const auto f = fusion_check(e);
        r.checks.push_back(tol_check(name + " KW KW^dag", "KW KW^dag is the normalized symmetry sum", f.dev_forward, 0,
                                     f.dev_forward, 1e-12, std::to_string(f.forward_terms) + " terms"));
        r.checks.push_back(tol_check(name + " KW^dag KW", "KW^dag KW is the normalized dual symmetry sum",
                                     f.dev_backward, 0, f.dev_backward, 1e-12,
                                     std::to_string(f.backward_terms) + " terms"));
    };
    add("qpim2d 2x2", Entangler::from_css(build_qpim2d(2, 2)));
    add("toric2d 2x2", Entangler::from_css(build_toric(2, {2, 2})));
    add("chamon L=2", Entangler::from_chamon(build_chamon(2)));
    return r;
}

CriterionResult c6() {
    CriterionResult r{6, "gauging protocol is deterministic after correction", {}, {}};
    auto summarize = [&](const std::string& name, auto run) {
        int bad_cycle = 0, bad_solve = 0;
        double worst = 1;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const ProtocolResult p = run(seed);
            bad_cycle += !p.outcome_is_cycle;
            bad_solve += !p.correctable;
            worst = std::min(worst, p.fidelity);
        }
        auto c = tol_check(name + " 100 runs", "measured output equals KW of the input", worst, 1, 1 - worst, 1e-9,
                           std::to_string(bad_cycle) + " non-cycle outcomes, " + std::to_string(bad_solve) +
                               " failed corrections");
        c.pass = c.pass && bad_cycle == 0 && bad_solve == 0;
        r.checks.push_back(c);
    };
    for (const auto& m : {build_qpim2d(2, 2), build_toric(2, {2, 2})}) {
        const auto group = kernel_basis(m.dZ().transpose());
        summarize(m.model + " " + periods_str(m.periods), [&](std::uint64_t seed) {
            std::mt19937_64 rng(seed * 7919 + 1);
            return gauging_protocol(m, random_symmetric_state(m.nq(), group, rng), seed);
        });
    }
    const auto ch = build_chamon(2);
    const auto cgroup = kernel_basis(ch.dc);
    summarize("chamon L=2", [&](std::uint64_t seed) {
        std::mt19937_64 rng(seed + 17);
        return chamon_protocol(ch, random_symmetric_state(ch.cubes.size(), cgroup, rng), seed);
    });
    return r;
}

CriterionResult c7() {
    CriterionResult r{7, "strange correlator equals the Ising-type sum", {}, {}};
    for (const auto& m : {build_toric(2, {2, 2}), build_qpim2d(2, 2), build_checkerboard({2, 2, 2})})
        for (double K : {0.2, 0.5, 1.0}) {
            const auto s = strange_correlator(m, K);
            r.checks.push_back(tol_check(m.model + " K=" + fmt(K), "N <omega(K)|psi> = Z_Z(K)",
                                         std::exp(s.log_normalization) * s.overlap, s.partition, s.residual, 1e-9));
        }
    return r;
}

CriterionResult c8() {
    CriterionResult r{8, "twisted Kramers-Wannier duality", {}, {}};
    for (const auto& m : {build_toric(2, {2, 2}), build_qpim2d(2, 2)})
        for (double K : {0.3, 0.7}) {
            const auto d = check_twisted_duality(m, K);
            auto c = tol_check(m.model + " K=" + fmt(K), "Z_Z(K) = prefactor * sum of twisted Z_X(K*)", d.lhs,
                               std::exp(d.log_prefactor_derived) * d.sector_sum, d.residual_derived, 1e-9,
                               std::to_string(d.sectors) + " sectors; printed prefactor residual " +
                                   fmt(d.residual_printed));
            r.checks.push_back(c);
        }
    const auto q = check_twisted_duality(build_qpim2d(2, 2), 0.3);
    r.checks.push_back(exact_check("qpim2d 2x2 sectors", "2^{Lx+Ly-1} twist sectors", static_cast<double>(q.sectors), 8));
    return r;
}

CriterionResult c9() {
    CriterionResult r{9, "foliated refined duality", {}, {}};
    const auto f = foliate(build_qpim2d(2, 2), 2, WBoundary::Periodic);
    const auto d = check_foliated_duality(f, 0.4, 0.6);
    r.checks.push_back(tol_check("qpim2d 2x2 Lw=2 J=0.4 K=0.6", "foliated sum = prefactor * sum of twisted duals", d.lhs,
                                 std::exp(d.log_prefactor_derived) * d.sector_sum, d.residual_derived, 1e-9,
                                 "printed prefactor residual " + fmt(d.residual_printed)));
    const auto dim = homology_basis(f.c, 1).dimension;
    auto s = exact_check("sector count", "2^{dim L} twist sectors", static_cast<double>(d.sectors),
                         std::ldexp(1.0, static_cast<int>(dim)), "dim " + std::to_string(dim));
    s.pass = s.pass && d.sectors <= 128;
    r.checks.push_back(s);
    return r;
}

CriterionResult c10() {
    CriterionResult r{10, "anomaly inflow", {}, {}};
    const auto toric = build_toric(2, {2, 2});
    const auto open = build_spacetime(toric, 1, WBoundary::Open, 1);
    const BulkTrace otrace(open);
    int good = 0, flips = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto t = inflow_trial(open, otrace, seed);
        good += t.pass;
        flips += t.bulk_ratio < 0;
    }
    r.checks.push_back(exact_check("inflow 50 trials", "bulk gauge phase equals the boundary phase", good, 50,
                                   std::to_string(flips) + " trials with phase -1"));
    const auto closed = build_spacetime(toric, 1, WBoundary::Periodic, 1);
    const BulkTrace ctrace(closed, TraceMethod::Stabilizer);
    int agree = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) agree += closed_trial(closed, ctrace, seed).pass;
    r.checks.push_back(exact_check("closed 20 pairs", "trace = (-1)^{#(z cap z*)}", agree, 20));
    const auto [z, zs] = linked_pair(closed);
    r.checks.push_back(exact_check("linked pair", "trace = (-1)^{#(z cap z*)}", ctrace(z, zs), -1));
    return r;
}

CriterionResult c11() {
    CriterionResult r{11, "BF sum equals the boundary trace", {}, {}};
    const auto toric = build_toric(2, {2, 2});
    auto s = BoundarySlices::empty(toric, 1);
    auto add = [&](const std::string& name, const BoundarySlices& sl) {
        const auto bf = bf_partition(toric, sl);
        r.checks.push_back(exact_check(name, "normalized BF sum = defect trace", bf.normalized_derived,
                                       boundary_partition_trace(toric, sl),
                                       std::to_string(bf.terms) + " terms; printed normalization gives " +
                                           fmt(bf.normalized_printed)));
    };
    add("toric2d L=2 no defects", s);
    s.cq[0] = toric.dZ().column(0);
    s.zZ[0] = BitVector::from_indices(toric.nZ(), {0, 1});
    add("toric2d L=2 linked defects", s);
    const auto g = bf_gauge_check(toric, s, 0);
    for (std::size_t i = 0; i < g.names.size(); ++i)
        r.checks.push_back(exact_check("gauge " + g.names[i], "BF summand is gauge invariant", g.invariant[i], 1));
    return r;
}

CriterionResult c12() {
    CriterionResult r{12, "intersection pairing is nondegenerate", {}, {}};
    auto add = [&](const CssComplex& m) {
        const auto h = homology_basis(m.c, 1);
        const auto hd = homology_basis(dualize(m.c), 1);
        const auto p = pairing_matrix(h, hd);
        const bool square = p.rows() == p.cols();
        auto c = exact_check(m.model + " " + periods_str(m.periods), "pairing matrix of H and its dual is invertible",
                             static_cast<double>(rank(p)), static_cast<double>(h.dimension),
                             std::to_string(p.rows()) + "x" + std::to_string(p.cols()));
        c.pass = c.pass && square && hd.dimension == h.dimension;
        r.checks.push_back(c);
    };
    for (const char* name : {"toric2d", "toric3d", "qpim2d", "xcube", "checkerboard", "haah", "cc:3,1", "cc:4,1",
                             "cc:5,2", "qc:3,1,0", "qc:5,2,1"})
        add(build_css(with_periods(parse_model(name), {2})));
    for (const char* name : {"toric2d", "toric3d", "qpim2d", "xcube", "haah", "cc:3,1", "qc:3,1,0"})
        add(build_css(with_periods(parse_model(name), {3})));
    return r;
}

}  // namespace

bool CriterionResult::pass() const {
    if (!error.empty() || checks.empty()) return false;
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

CheckReport exact_check(std::string check, std::string anchor, double lhs, double rhs, std::string detail) {
    CheckReport c{std::move(check), std::move(anchor), lhs, rhs, std::abs(lhs - rhs), lhs == rhs, std::move(detail)};
    return c;
}

CheckReport tol_check(std::string check, std::string anchor, double lhs, double rhs, double residual, double tol,
                      std::string detail) {
    CheckReport c{std::move(check), std::move(anchor), lhs, rhs, residual, residual < tol, std::move(detail)};
    return c;
}

CriterionResult run_criterion(int id) {
    using Fn = CriterionResult (*)();
    static const Fn fns[] = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12};
    if (id < 1 || id > kCriteria) fail(ErrorKind::Precondition, "no criterion " + std::to_string(id));
    try {
        return fns[id - 1]();
    } catch (const Error& e) {
        CriterionResult r;
        r.id = id;
        r.title = "criterion " + std::to_string(id);
        r.error = std::string(kind_name(e.kind())) + ": " + e.what();
        return r;
    } catch (const std::exception& e) {
        CriterionResult r;
        r.id = id;
        r.title = "criterion " + std::to_string(id);
        r.error = e.what();
        return r;
    }
}

std::vector<CriterionResult> run_acceptance() {
    std::vector<CriterionResult> out;
    for (int i = 1; i <= kCriteria; ++i) out.push_back(run_criterion(i));
    return out;
}

}  // namespace css

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "css/acceptance.hpp"
#include "css/anomaly.hpp"
#include "css/errors.hpp"
#include "css/gsd.hpp"
#include "css/models.hpp"
#include "css/statesim.hpp"
#include "css/statmech.hpp"

using namespace css;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr std::size_t kMinQubitCap = 4;
constexpr std::size_t kMinSpinCap = 4;

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::Dimension: return 10;
        case ErrorKind::Constraint: return 11;
        case ErrorKind::Cap: return 12;
        case ErrorKind::Precondition: return 13;
        case ErrorKind::NotCycle: return 14;
        case ErrorKind::UnknownModel: return 15;
        case ErrorKind::Parse: return 16;
        case ErrorKind::Internal: return 17;
    }
    return 17;
}

struct RunConfig {
    std::string model = "toric2d";
    std::vector<int> L{2};
    std::vector<double> K{0.5};
    std::vector<double> J{0.4};
    int Lw = 1;
    int Ltau = 1;
    std::string boundary = "periodic";
    std::uint64_t seed = 0;
    std::size_t cap_qubits = kDefaultQubitCap;
    std::size_t cap_spins = kSpinCap;
    std::string out;
    std::string config;
};

// Fills fields from a JSON config; only keys not given on the command line.
void apply_config_file(RunConfig& cfg, const CLI::App& sub) {
    std::ifstream in(cfg.config);
    if (!in) fail(ErrorKind::Parse, "cannot open config file '" + cfg.config + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        fail(ErrorKind::Parse, std::string("config file: ") + e.what());
    }
    auto given = [&](const char* flag) { return sub.count(flag) > 0; };
    try {
        for (const auto& [key, val] : j.items()) {
            if (key == "model") { if (!given("--model")) cfg.model = val.get<std::string>(); }
            else if (key == "L") { if (!given("--L")) cfg.L = val.is_array() ? val.get<std::vector<int>>() : std::vector<int>{val.get<int>()}; }
            else if (key == "K") { if (!given("--K")) cfg.K = val.is_array() ? val.get<std::vector<double>>() : std::vector<double>{val.get<double>()}; }
            else if (key == "J") { if (!given("--J")) cfg.J = val.is_array() ? val.get<std::vector<double>>() : std::vector<double>{val.get<double>()}; }
            else if (key == "Lw") { if (!given("--Lw")) cfg.Lw = val.get<int>(); }
            else if (key == "Ltau") { if (!given("--Ltau")) cfg.Ltau = val.get<int>(); }
            else if (key == "boundary") { if (!given("--boundary")) cfg.boundary = val.get<std::string>(); }
            else if (key == "seed") { if (!given("--seed")) cfg.seed = val.get<std::uint64_t>(); }
            else if (key == "cap_qubits") { if (!given("--cap-qubits")) cfg.cap_qubits = val.get<std::size_t>(); }
            else if (key == "cap_spins") { if (!given("--cap-spins")) cfg.cap_spins = val.get<std::size_t>(); }
            else if (key == "out") { if (!given("--out")) cfg.out = val.get<std::string>(); }
            else fail(ErrorKind::Parse, "config file: unknown key '" + key + "'");
        }
    } catch (const json::exception& e) {
        fail(ErrorKind::Parse, std::string("config file: ") + e.what());
    }
}

void check_config(const RunConfig& cfg) {
    if (cfg.cap_qubits < kMinQubitCap) fail(ErrorKind::Cap, "--cap-qubits below the minimum " + std::to_string(kMinQubitCap));
    if (cfg.cap_spins < kMinSpinCap) fail(ErrorKind::Cap, "--cap-spins below the minimum " + std::to_string(kMinSpinCap));
    if (cfg.boundary != "periodic" && cfg.boundary != "open")
        fail(ErrorKind::Parse, "--boundary must be periodic or open");
    if (cfg.L.empty()) fail(ErrorKind::Parse, "--L needs at least one period");
}

WBoundary wb(const RunConfig& cfg) { return cfg.boundary == "open" ? WBoundary::Open : WBoundary::Periodic; }

ModelSpec spec_of(const RunConfig& cfg) { return with_periods(parse_model(cfg.model), cfg.L); }

CssComplex css_of(const RunConfig& cfg) { return build_css(spec_of(cfg)); }

std::string label(const ModelSpec& s) {
    std::string p;
    for (std::size_t i = 0; i < s.periods.size(); ++i) p += (i ? "x" : "") + std::to_string(s.periods[i]);
    return s.name() + " " + p;
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json check_json(const CheckReport& c) {
    json j;
    j["check"] = c.check;
    j["anchor"] = c.anchor;
    j["lhs"] = num(c.lhs);
    j["rhs"] = num(c.rhs);
    j["residual"] = num(c.residual);
    j["pass"] = c.pass;
    if (!c.detail.empty()) j["detail"] = c.detail;
    return j;
}

json config_json(const RunConfig& cfg) {
    json j;
    j["model"] = cfg.model;
    j["L"] = cfg.L;
    j["K"] = cfg.K;
    j["J"] = cfg.J;
    j["Lw"] = cfg.Lw;
    j["Ltau"] = cfg.Ltau;
    j["boundary"] = cfg.boundary;
    j["seed"] = cfg.seed;
    j["cap_qubits"] = cfg.cap_qubits;
    j["cap_spins"] = cfg.cap_spins;
    return j;
}

struct Report {
    json extra = json::object();
    std::vector<CheckReport> checks;
    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

Report cmd_build(const RunConfig& cfg) {
    Report r;
    const auto spec = spec_of(cfg);
    if (spec.kind == ModelKind::Chamon) {
        const auto m = build_chamon(spec.periods[0]);
        r.extra["vertices"] = m.vertices.size();
        r.extra["cubes"] = m.cubes.size();
        r.checks.push_back(exact_check(label(spec) + " built", "one stabilizer per cube",
                                       static_cast<double>(m.cubes.size()), static_cast<double>(m.dc.cols())));
        return r;
    }
    const auto m = build_css(spec);
    const auto v = validate(m.c);
    r.extra["complex"] = json::parse(complex_to_json(m.c));
    auto c = exact_check(label(spec) + " differentials compose to zero", "d o d = 0", v.ok ? 0 : 1, 0, v.message);
    r.checks.push_back(c);
    return r;
}

Report cmd_homology(const RunConfig& cfg) {
    Report r;
    const auto m = css_of(cfg);
    json dims = json::array();
    for (std::size_t g = 0; g < m.c.diffs.size() + 1; ++g) dims.push_back(homology_basis(m.c, g).dimension);
    r.extra["homology_dimensions"] = dims;
    const auto h = homology_basis(m.c, 1);
    const auto hd = homology_basis(dualize(m.c), 1);
    const auto p = pairing_matrix(h, hd);
    r.extra["logical_qubits"] = h.dimension;
    r.checks.push_back(exact_check(label(spec_of(cfg)) + " pairing rank", "intersection pairing is nondegenerate",
                                   static_cast<double>(rank(p)), static_cast<double>(h.dimension)));
    return r;
}

Report cmd_gsd(const RunConfig& cfg) {
    Report r;
    const auto spec = spec_of(cfg);
    std::size_t value = 0;
    std::optional<long long> table;
    if (spec.kind == ModelKind::CC) {
        value = gsd_cc(spec.d, spec.k, spec.periods);
        table = table_cc_value(spec.d, spec.k, spec.periods);
    } else if (spec.kind == ModelKind::QC) {
        value = gsd_qc(spec.d, spec.k, spec.l, spec.periods);
        table = table_qc_value(spec.d, spec.k, spec.l, spec.periods);
    } else {
        const auto cc = gsd_cross_check(spec);
        value = cc.algebraic;
        table = cc.closed_form;
        r.checks.push_back(exact_check(label(spec) + " homology", "polynomial and chain-complex GSD agree",
                                       static_cast<double>(cc.algebraic), static_cast<double>(cc.homology)));
    }
    r.extra["value"] = value;
    r.extra["match"] = table ? json(static_cast<long long>(value) == *table) : json(nullptr);
    if (table)
        r.checks.push_back(exact_check(label(spec) + " closed form", "log2 GSD closed form",
                                       static_cast<double>(value), static_cast<double>(*table)));
    return r;
}

Report cmd_kw(const RunConfig& cfg) {
    Report r;
    const auto m = css_of(cfg);
    const auto rep = kw_relations(m, kw_build(m, cfg.cap_qubits));
    r.checks.push_back(tol_check(label(spec_of(cfg)), "KW intertwines X, Z and the differentials", rep.max_deviation, 0,
                                 rep.max_deviation, 1e-12, std::to_string(rep.checks) + " relations"));
    return r;
}

Report cmd_fusion(const RunConfig& cfg) {
    Report r;
    const auto spec = spec_of(cfg);
    const Entangler e = spec.kind == ModelKind::Chamon ? Entangler::from_chamon(build_chamon(spec.periods[0]))
                                                       : Entangler::from_css(build_css(spec));
    const auto f = fusion_check(e, cfg.cap_qubits);
    r.extra["negative_signs"] = f.negative_signs;
    r.checks.push_back(tol_check(label(spec) + " KW KW^dag", "KW KW^dag is the normalized symmetry sum", f.dev_forward,
                                 0, f.dev_forward, 1e-12, std::to_string(f.forward_terms) + " terms"));
    r.checks.push_back(tol_check(label(spec) + " KW^dag KW", "KW^dag KW is the normalized dual symmetry sum",
                                 f.dev_backward, 0, f.dev_backward, 1e-12, std::to_string(f.backward_terms) + " terms"));
    return r;
}

Report cmd_gauge(const RunConfig& cfg) {
    Report r;
    const auto spec = spec_of(cfg);
    json runs = json::array();
    auto one = [&](std::uint64_t seed, const ProtocolResult& p) {
        json j;
        j["seed"] = seed;
        j["outcome"] = p.record.outcome.to_string();
        j["correction"] = p.correction.to_string();
        j["fidelity"] = p.fidelity;
        runs.push_back(j);
        auto c = tol_check("seed " + std::to_string(seed), "measured output equals KW of the input", p.fidelity, 1,
                           1 - p.fidelity, 1e-9);
        c.pass = c.pass && p.outcome_is_cycle && p.correctable;
        r.checks.push_back(c);
    };
    constexpr std::uint64_t runs_per_call = 100;
    if (spec.kind == ModelKind::Chamon) {
        const auto m = build_chamon(spec.periods[0]);
        const auto group = kernel_basis(m.dc);
        for (std::uint64_t s = cfg.seed; s < cfg.seed + runs_per_call; ++s) {
            std::mt19937_64 rng(s + 17);
            one(s, chamon_protocol(m, random_symmetric_state(m.cubes.size(), group, rng), s, false,
                                   cfg.cap_qubits));
        }
    } else {
        const auto m = build_css(spec);
        const auto group = kernel_basis(m.dZ().transpose());
        for (std::uint64_t s = cfg.seed; s < cfg.seed + runs_per_call; ++s) {
            std::mt19937_64 rng(s * 7919 + 1);
            one(s, gauging_protocol(m, random_symmetric_state(m.nq(), group, rng), s, false,
                                    cfg.cap_qubits));
        }
    }
    r.extra["runs"] = runs;
    return r;
}

Report cmd_strange(const RunConfig& cfg) {
    Report r;
    const auto m = css_of(cfg);
    for (double K : cfg.K) {
        const auto s = strange_correlator(m, K, cfg.cap_qubits);
        r.checks.push_back(tol_check(label(spec_of(cfg)) + " K=" + std::to_string(K), "N <omega(K)|psi> = Z_Z(K)",
                                     std::exp(s.log_normalization) * s.overlap, s.partition, s.residual, 1e-9));
    }
    return r;
}

Report cmd_duality(const RunConfig& cfg) {
    Report r;
    const auto m = css_of(cfg);
    for (double K : cfg.K) {
        const auto d = check_twisted_duality(m, K, cfg.cap_spins);
        r.checks.push_back(tol_check(label(spec_of(cfg)) + " K=" + std::to_string(K),
                                     "Z_Z(K) = prefactor * sum of twisted Z_X(K*)", d.lhs,
                                     std::exp(d.log_prefactor_derived) * d.sector_sum, d.residual_derived, 1e-9,
                                     std::to_string(d.sectors) + " sectors; printed prefactor residual " +
                                         std::to_string(d.residual_printed)));
    }
    return r;
}

Report cmd_foliated(const RunConfig& cfg) {
    Report r;
    const auto f = foliate(css_of(cfg), cfg.Lw, wb(cfg));
    for (double J : cfg.J)
        for (double K : cfg.K) {
            const auto d = check_foliated_duality(f, J, K, cfg.cap_spins);
            r.checks.push_back(tol_check(label(spec_of(cfg)) + " Lw=" + std::to_string(cfg.Lw) + " J=" +
                                             std::to_string(J) + " K=" + std::to_string(K),
                                         "foliated sum = prefactor * sum of twisted duals", d.lhs,
                                         std::exp(d.log_prefactor_derived) * d.sector_sum, d.residual_derived, 1e-9,
                                         std::to_string(d.sectors) + " sectors; printed prefactor residual " +
                                             std::to_string(d.residual_printed)));
        }
    return r;
}

Report cmd_anomaly(const RunConfig& cfg) {
    Report r;
    const auto st = build_spacetime(css_of(cfg), cfg.Lw, wb(cfg), cfg.Ltau);
    const BulkTrace trace(st, TraceMethod::Auto, cfg.cap_qubits);
    r.extra["qubits"] = st.fol.nQ1() + st.fol.nQ2();
    r.extra["method"] = trace.dense() ? "dense" : "stabilizer";
    if (st.fol.boundary == WBoundary::Open) {
        for (std::uint64_t s = cfg.seed; s < cfg.seed + 50; ++s) {
            const auto t = inflow_trial(st, trace, s);
            r.checks.push_back(exact_check("inflow seed " + std::to_string(s) + (t.dual ? " dual" : " primal"),
                                           "bulk gauge phase equals the boundary phase", t.bulk_ratio,
                                           t.boundary_ratio));
            r.checks.back().pass = t.pass;
        }
    } else {
        for (std::uint64_t s = cfg.seed; s < cfg.seed + 20; ++s) {
            const auto t = closed_trial(st, trace, s);
            r.checks.push_back(exact_check("closed seed " + std::to_string(s), "trace = (-1)^{#(z cap z*)}", t.trace,
                                           t.intersection));
        }
        const auto [z, zs] = linked_pair(st);
        r.checks.push_back(exact_check("linked pair", "trace = (-1)^{#(z cap z*)}", trace(z, zs),
                                       partition_intersection(z, zs)));
    }
    return r;
}

Report cmd_bf(const RunConfig& cfg) {
    Report r;
    const auto m = css_of(cfg);
    auto s = BoundarySlices::empty(m, cfg.Ltau);
    const auto bf = bf_partition(m, s);
    r.extra["terms"] = bf.terms;
    r.extra["normalized_printed"] = bf.normalized_printed;
    r.checks.push_back(exact_check(label(spec_of(cfg)) + " no defects", "normalized BF sum = defect trace",
                                   bf.normalized_derived, boundary_partition_trace(m, s, cfg.cap_qubits)));
    if (m.nZ() > 0 && m.nq() > 0) {
        // a Z-cell loop crossing a static pair of m-type defects around that cell
        s.cq[0] = m.dZ().column(0);
        const auto pair = m.dZ().transpose().apply(BitVector::from_indices(m.nq(), {m.dZ().column(0).support()[0]}));
        s.zZ = std::vector<BitVector>(static_cast<std::size_t>(cfg.Ltau), pair);
        const auto bl = bf_partition(m, s);
        r.checks.push_back(exact_check(label(spec_of(cfg)) + " linked defects", "normalized BF sum = defect trace",
                                       bl.normalized_derived, boundary_partition_trace(m, s, cfg.cap_qubits)));
    }
    const auto g = bf_gauge_check(m, s, cfg.seed);
    for (std::size_t i = 0; i < g.names.size(); ++i)
        r.checks.push_back(exact_check("gauge " + g.names[i], "BF summand is gauge invariant", g.invariant[i], 1));
    return r;
}

Report cmd_suite(json& extra) {
    Report r;
    json crit = json::array();
    for (const auto& c : run_acceptance()) {
        json j;
        j["id"] = c.id;
        j["title"] = c.title;
        j["pass"] = c.pass();
        if (!c.error.empty()) j["error"] = c.error;
        crit.push_back(j);
        for (auto k : c.checks) {
            k.check = "criterion " + std::to_string(c.id) + ": " + k.check;
            r.checks.push_back(k);
        }
        if (!c.error.empty())
            r.checks.push_back(CheckReport{"criterion " + std::to_string(c.id), c.title, 0, 0, 0, false, c.error});
    }
    extra["criteria"] = crit;
    return r;
}

void emit(const RunConfig& cfg, const std::string& command, const Report& r) {
    json out;
    out["command"] = command;
    out["config"] = config_json(cfg);
    for (const auto& [k, v] : r.extra.items()) out[k] = v;
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back(check_json(c));
    out["checks"] = checks;
    out["pass"] = r.pass();
    const std::string text = out.dump(2) + "\n";
    if (cfg.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(cfg.out);
        if (!f) fail(ErrorKind::Parse, "cannot write '" + cfg.out + "'");
        f << text;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"csskit: CSS chain complexes, KW dualities, foliation and anomaly checks"};
    app.require_subcommand(1);
    RunConfig cfg;

    struct Cmd {
        const char* name;
        const char* help;
    };
    const Cmd cmds[] = {{"build", "emit the chain complex"},
                        {"homology", "homology dimensions and pairing rank"},
                        {"gsd", "log2 ground-state degeneracy"},
                        {"kw-verify", "KW intertwining relations"},
                        {"fusion", "non-invertible fusion of KW"},
                        {"gauge-protocol", "measurement-based gauging, 100 seeded runs"},
                        {"strange", "strange correlator against the spin sum"},
                        {"duality", "twisted Kramers-Wannier duality"},
                        {"foliated-duality", "foliated refined duality"},
                        {"anomaly", "inflow (open w) or closed-spacetime defect traces"},
                        {"bf", "BF sum against the boundary defect trace"},
                        {"suite", "all acceptance criteria"}};
    std::vector<CLI::App*> subs;
    for (const auto& c : cmds) {
        auto* s = app.add_subcommand(c.name, c.help);
        s->add_option("--model", cfg.model, "model name, e.g. toric2d, qpim2d, cc:3,1, qc:5,2,1, chamon");
        s->add_option("--L", cfg.L, "periods, one value or comma separated")->delimiter(',');
        s->add_option("--K", cfg.K, "coupling(s) K")->delimiter(',');
        s->add_option("--J", cfg.J, "coupling(s) J")->delimiter(',');
        s->add_option("--Lw", cfg.Lw, "foliation length");
        s->add_option("--Ltau", cfg.Ltau, "time steps");
        s->add_option("--boundary", cfg.boundary, "w boundary: periodic or open");
        s->add_option("--seed", cfg.seed, "first seed");
        s->add_option("--cap-qubits", cfg.cap_qubits, "dense state-vector qubit cap");
        s->add_option("--cap-spins", cfg.cap_spins, "brute-force spin cap");
        s->add_option("--out", cfg.out, "report path (stdout if empty)");
        s->add_option("--config", cfg.config, "JSON config; flags override it");
        subs.push_back(s);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    CLI::App* sub = nullptr;
    for (auto* s : subs)
        if (s->parsed()) sub = s;
    const std::string name = sub->get_name();
    try {
        if (!cfg.config.empty()) apply_config_file(cfg, *sub);
        check_config(cfg);
        Report r;
        if (name == "build") r = cmd_build(cfg);
        else if (name == "homology") r = cmd_homology(cfg);
        else if (name == "gsd") r = cmd_gsd(cfg);
        else if (name == "kw-verify") r = cmd_kw(cfg);
        else if (name == "fusion") r = cmd_fusion(cfg);
        else if (name == "gauge-protocol") r = cmd_gauge(cfg);
        else if (name == "strange") r = cmd_strange(cfg);
        else if (name == "duality") r = cmd_duality(cfg);
        else if (name == "foliated-duality") r = cmd_foliated(cfg);
        else if (name == "anomaly") r = cmd_anomaly(cfg);
        else if (name == "bf") r = cmd_bf(cfg);
        else {
            json extra = json::object();
            r = cmd_suite(extra);
            r.extra = extra;
        }
        emit(cfg, name, r);
        if (!r.pass()) {
            std::cerr << name << ": verification failed\n";
            return kExitFail;
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << name << ": " << kind_name(e.kind()) << " error: " << e.what() << "\n";
        return exit_code(e.kind());
    }
}

#include "css/statesim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>

#include "css/errors.hpp"

namespace css {

namespace {

const cplx kI(0, 1);

cplx ipow(int p) {
    static const cplx t[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return t[((p % 4) + 4) % 4];
}

struct FastPauli {
    std::uint64_t x = 0, z = 0;
    int phase = 0;
};

std::uint64_t mask_of(const BitVector& v) {
    if (v.size() > 64) fail(ErrorKind::Cap, "register wider than 64 qubits");
    return v.low_word();
}

FastPauli fast(const PauliOperator& p) { return {mask_of(p.x), mask_of(p.z), p.phase}; }

int parity(std::uint64_t v) { return std::popcount(v) & 1; }

// Old index with a bit inserted at position q.
std::size_t insert_bit(std::size_t j, std::size_t q, std::size_t bit) {
    const std::size_t low = j & ((std::size_t{1} << q) - 1);
    return low | (bit << q) | ((j >> q) << (q + 1));
}

// Table of P(a) for every control pattern a.
std::vector<FastPauli> combined_table(const Entangler& e) {
    if (e.n_ctrl > kDenseKwCap) fail(ErrorKind::Cap, "entangler has too many controls for a dense table");
    const std::size_t N = std::size_t{1} << e.n_ctrl;
    std::vector<PauliOperator> full(N, PauliOperator(e.n_target));
    std::vector<FastPauli> out(N);
    for (std::size_t a = 1; a < N; ++a) {
        const std::size_t top = static_cast<std::size_t>(std::bit_width(a)) - 1;
        full[a] = multiply(full[a ^ (std::size_t{1} << top)], e.per_control[top]);
        out[a] = fast(full[a]);
    }
    return out;
}

double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

StateVector plus_state_on_ctrl(const StateVector& ctrl_state, std::size_t n_target, std::size_t cap) {
    return tensor(ctrl_state, StateVector::plus(n_target, cap));
}

}  // namespace

void check_cap(std::size_t n, std::size_t cap, const std::string& what) {
    if (n > cap)
        fail(ErrorKind::Cap, what + ": " + std::to_string(n) + " qubits exceeds the cap of " + std::to_string(cap));
}

StateVector StateVector::zeros(std::size_t n, std::size_t cap) {
    check_cap(n, cap, "state vector");
    StateVector s;
    s.n = n;
    s.amp.assign(std::size_t{1} << n, 0.0);
    s.amp[0] = 1.0;
    return s;
}

StateVector StateVector::plus(std::size_t n, std::size_t cap) {
    check_cap(n, cap, "state vector");
    StateVector s;
    s.n = n;
    s.amp.assign(std::size_t{1} << n, std::pow(2.0, -0.5 * static_cast<double>(n)));
    return s;
}

StateVector StateVector::from_amplitudes(std::vector<cplx> a) {
    if (a.empty() || (a.size() & (a.size() - 1))) fail(ErrorKind::Dimension, "amplitude count must be a power of two");
    StateVector s;
    s.n = static_cast<std::size_t>(std::countr_zero(a.size()));
    s.amp = std::move(a);
    return s;
}

double StateVector::norm2() const {
    double t = 0;
    for (const auto& a : amp) t += std::norm(a);
    return t;
}

void StateVector::normalize() {
    const double nn = norm2();
    if (nn <= 0) fail(ErrorKind::Precondition, "cannot normalize a zero state");
    const double f = 1.0 / std::sqrt(nn);
    for (auto& a : amp) a *= f;
}

void apply_cz(StateVector& s, std::size_t q1, std::size_t q2) {
    if (q1 >= s.n || q2 >= s.n || q1 == q2) fail(ErrorKind::Dimension, "apply_cz: bad qubit indices");
    const std::size_t m = (std::size_t{1} << q1) | (std::size_t{1} << q2);
    for (std::size_t i = 0; i < s.amp.size(); ++i)
        if ((i & m) == m) s.amp[i] = -s.amp[i];
}

void apply_controlled_pauli(StateVector& s, std::size_t ctrl, std::size_t target, char letter) {
    if (ctrl >= s.n || target >= s.n || ctrl == target)
        fail(ErrorKind::Dimension, "apply_controlled_pauli: bad qubit indices");
    const std::size_t c = std::size_t{1} << ctrl, t = std::size_t{1} << target;
    for (std::size_t i = 0; i < s.amp.size(); ++i) {
        if (!(i & c) || (i & t)) continue;
        cplx& a0 = s.amp[i];
        cplx& a1 = s.amp[i | t];
        switch (letter) {
            case 'I': break;
            case 'X': std::swap(a0, a1); break;
            case 'Z': a1 = -a1; break;
            case 'Y': {
                const cplx n0 = -kI * a1, n1 = kI * a0;
                a0 = n0;
                a1 = n1;
                break;
            }
            default: fail(ErrorKind::Parse, std::string("bad Pauli letter ") + letter);
        }
    }
}

void apply_pauli(StateVector& s, const PauliOperator& p) {
    if (p.size() != s.n) fail(ErrorKind::Dimension, "apply_pauli: size mismatch");
    const FastPauli f = fast(p);
    const cplx ph = ipow(f.phase);
    std::vector<cplx> out(s.amp.size());
    for (std::size_t i = 0; i < s.amp.size(); ++i)
        out[i ^ f.x] = (parity(f.z & i) ? -ph : ph) * s.amp[i];
    s.amp.swap(out);
}

cplx inner(const StateVector& a, const StateVector& b) {
    if (a.n != b.n) fail(ErrorKind::Dimension, "inner: size mismatch");
    cplx t = 0;
    for (std::size_t i = 0; i < a.amp.size(); ++i) t += std::conj(a.amp[i]) * b.amp[i];
    return t;
}

double fidelity(const StateVector& a, const StateVector& b) {
    const double na = a.norm2(), nb = b.norm2();
    if (na <= 0 || nb <= 0) return 0;
    return std::norm(inner(a, b)) / (na * nb);
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    StateVector s;
    s.n = a.n + b.n;
    check_cap(s.n, 62, "tensor");
    s.amp.resize(std::size_t{1} << s.n);
    for (std::size_t j = 0; j < b.amp.size(); ++j)
        for (std::size_t i = 0; i < a.amp.size(); ++i) s.amp[i | (j << a.n)] = a.amp[i] * b.amp[j];
    return s;
}

void apply_cz_network(StateVector& s, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    std::vector<std::uint64_t> adj(s.n, 0);
    for (auto [i, j] : edges) {
        if (i >= s.n || j >= s.n || i == j) fail(ErrorKind::Dimension, "cz network: bad edge");
        const auto lo = std::min(i, j), hi = std::max(i, j);
        adj[lo] ^= std::uint64_t{1} << hi;
    }
    for (std::size_t idx = 0; idx < s.amp.size(); ++idx) {
        std::uint64_t bits = idx, acc = 0;
        while (bits) {
            const int q = std::countr_zero(bits);
            acc ^= adj[static_cast<std::size_t>(q)] & idx;
            bits &= bits - 1;
        }
        if (parity(acc)) s.amp[idx] = -s.amp[idx];
    }
}

StateVector build_cluster_state(const FoliatedComplex& fol, std::size_t cap) {
    const std::size_t n1 = fol.nQ1(), n = n1 + fol.nQ2();
    check_cap(n, cap, "cluster state");
    StateVector s = StateVector::plus(n, cap);
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t t = 0; t < fol.nQ2(); ++t)
        for (auto i : fol.d1().row(t).support()) edges.push_back({i, n1 + t});
    apply_cz_network(s, edges);
    return s;
}

Entangler Entangler::from_css(const CssComplex& css) {
    Entangler e;
    e.n_ctrl = css.nZ();
    e.n_target = css.nq();
    e.zpart = css.dZ();
    for (std::size_t b = 0; b < css.nZ(); ++b) e.per_control.push_back(PauliOperator::z_op(css.dZ().column(b)));
    return e;
}

Entangler Entangler::from_chamon(const ChamonModel& m) {
    Entangler e;
    e.n_ctrl = m.cubes.size();
    e.n_target = m.vertices.size();
    e.zpart = m.dc;
    e.per_control = chamon_stabilizers(m).generators;
    return e;
}

PauliOperator Entangler::combined(const BitVector& a) const {
    if (a.size() != n_ctrl) fail(ErrorKind::Dimension, "entangler: control pattern length");
    PauliOperator p(n_target);
    for (auto b : a.support()) p = multiply(p, per_control[b]);
    return p;
}

void apply_entangler(StateVector& s, const Entangler& e) {
    if (s.n != e.n_ctrl + e.n_target) fail(ErrorKind::Dimension, "apply_entangler: register size");
    const auto table = combined_table(e);
    const std::size_t cmask = (std::size_t{1} << e.n_ctrl) - 1;
    std::vector<cplx> out(s.amp.size());
    for (std::size_t idx = 0; idx < s.amp.size(); ++idx) {
        const std::size_t a = idx & cmask, b = idx >> e.n_ctrl;
        const FastPauli& f = table[a];
        const cplx ph = ipow(f.phase) * (parity(f.z & b) ? -1.0 : 1.0);
        out[a | ((b ^ f.x) << e.n_ctrl)] = ph * s.amp[idx];
    }
    s.amp.swap(out);
}

KwMap kw_build(const Entangler& e, std::size_t dense_cap) {
    check_cap(e.n_ctrl + e.n_target, dense_cap, "dense KW matrix");
    const auto table = combined_table(e);
    KwMap kw;
    kw.domain_qubits = e.n_target;
    kw.codomain_qubits = e.n_ctrl;
    const std::size_t R = std::size_t{1} << e.n_ctrl, C = std::size_t{1} << e.n_target;
    kw.m.resize(static_cast<Eigen::Index>(R), static_cast<Eigen::Index>(C));
    const double norm = std::pow(2.0, -0.5 * static_cast<double>(e.n_ctrl + e.n_target));
    for (std::size_t a = 0; a < R; ++a) {
        const cplx ph = ipow(table[a].phase) * norm;
        for (std::size_t b = 0; b < C; ++b)
            kw.m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = parity(table[a].z & b) ? -ph : ph;
    }
    return kw;
}

KwMap kw_build(const CssComplex& css, std::size_t dense_cap) { return kw_build(Entangler::from_css(css), dense_cap); }

CMatrix kw_dagger(const KwMap& kw) { return kw.m.adjoint(); }

StateVector project_plus(const StateVector& s, const std::vector<std::size_t>& qubits) {
    std::vector<std::size_t> qs = qubits;
    std::sort(qs.rbegin(), qs.rend());
    if (std::adjacent_find(qs.begin(), qs.end()) != qs.end()) fail(ErrorKind::Dimension, "project_plus: repeated qubit");
    StateVector cur = s;
    const double r = 1.0 / std::sqrt(2.0);
    for (auto q : qs) {
        if (q >= cur.n) fail(ErrorKind::Dimension, "project_plus: qubit out of range");
        StateVector next;
        next.n = cur.n - 1;
        next.amp.resize(std::size_t{1} << next.n);
        for (std::size_t j = 0; j < next.amp.size(); ++j)
            next.amp[j] = r * (cur.amp[insert_bit(j, q, 0)] + cur.amp[insert_bit(j, q, 1)]);
        cur = std::move(next);
    }
    return cur;
}

StateVector kw_apply(const Entangler& e, const StateVector& target_state, std::size_t cap) {
    if (target_state.n != e.n_target) fail(ErrorKind::Dimension, "kw_apply: input size");
    check_cap(e.n_ctrl + e.n_target, cap, "kw_apply");
    StateVector joint = tensor(StateVector::plus(e.n_ctrl, cap), target_state);
    apply_entangler(joint, e);
    std::vector<std::size_t> targets;
    for (std::size_t t = 0; t < e.n_target; ++t) targets.push_back(e.n_ctrl + t);
    return project_plus(joint, targets);
}

StateVector kw_dagger_apply(const Entangler& e, const StateVector& ctrl_state, std::size_t cap) {
    if (ctrl_state.n != e.n_ctrl) fail(ErrorKind::Dimension, "kw_dagger_apply: input size");
    check_cap(e.n_ctrl + e.n_target, cap, "kw_dagger_apply");
    StateVector joint = plus_state_on_ctrl(ctrl_state, e.n_target, cap);
    apply_entangler(joint, e);
    std::vector<std::size_t> ctrls;
    for (std::size_t c = 0; c < e.n_ctrl; ++c) ctrls.push_back(c);
    return project_plus(joint, ctrls);
}

CMatrix pauli_times(const PauliOperator& p, const CMatrix& m) {
    const FastPauli f = fast(p);
    if ((std::size_t{1} << p.size()) != static_cast<std::size_t>(m.rows()))
        fail(ErrorKind::Dimension, "pauli_times: size mismatch");
    CMatrix out(m.rows(), m.cols());
    const cplx ph = ipow(f.phase);
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
        const auto uk = static_cast<std::uint64_t>(k);
        out.row(static_cast<Eigen::Index>(uk ^ f.x)) = (parity(f.z & uk) ? -ph : ph) * m.row(k);
    }
    return out;
}

CMatrix times_pauli(const CMatrix& m, const PauliOperator& p) {
    const FastPauli f = fast(p);
    if ((std::size_t{1} << p.size()) != static_cast<std::size_t>(m.cols()))
        fail(ErrorKind::Dimension, "times_pauli: size mismatch");
    CMatrix out(m.rows(), m.cols());
    const cplx ph = ipow(f.phase);
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
        const auto uk = static_cast<std::uint64_t>(k);
        out.col(k) = (parity(f.z & uk) ? -ph : ph) * m.col(static_cast<Eigen::Index>(uk ^ f.x));
    }
    return out;
}

CMatrix pauli_matrix(const PauliOperator& p) {
    const auto D = static_cast<Eigen::Index>(std::size_t{1} << p.size());
    return pauli_times(p, CMatrix::Identity(D, D));
}

RelationReport kw_relations(const CssComplex& css, const KwMap& kw) {
    RelationReport r;
    const BitMatrix dzt = css.dZ().transpose();
    auto track = [&](const CMatrix& a, const CMatrix& b) {
        r.max_deviation = std::max(r.max_deviation, max_abs(a - b));
        ++r.checks;
    };
    for (std::size_t i = 0; i < css.nq(); ++i) {
        const auto ei = BitVector::from_indices(css.nq(), {i});
        track(times_pauli(kw.m, PauliOperator::x_op(ei)), pauli_times(PauliOperator::z_op(dzt.apply(ei)), kw.m));
    }
    for (std::size_t b = 0; b < css.nZ(); ++b) {
        const auto eb = BitVector::from_indices(css.nZ(), {b});
        track(pauli_times(PauliOperator::x_op(eb), kw.m), times_pauli(kw.m, PauliOperator::z_op(css.dZ().apply(eb))));
    }
    for (const auto& zs : kernel_basis(dzt)) track(times_pauli(kw.m, PauliOperator::x_op(zs)), kw.m);
    for (const auto& z : kernel_basis(css.dZ())) track(pauli_times(PauliOperator::x_op(z), kw.m), kw.m);
    return r;
}

std::vector<BitVector> span_elements(const std::vector<BitVector>& basis, std::size_t len) {
    if (basis.size() > 24) fail(ErrorKind::Cap, "group too large to enumerate");
    std::vector<BitVector> out{BitVector(len)};
    for (const auto& b : basis) {
        const std::size_t n = out.size();
        for (std::size_t i = 0; i < n; ++i) out.push_back(out[i] ^ b);
    }
    return out;
}

FusionReport fusion_check(const Entangler& e, std::size_t dense_cap) {
    FusionReport rep;
    const KwMap kw = kw_build(e, dense_cap);
    const CMatrix kd = kw_dagger(kw);
    const auto Dc = kw.m.rows(), Dt = kw.m.cols();

    CMatrix fwd = CMatrix::Zero(Dc, Dc);
    const auto cycles = span_elements(kernel_basis(e.zpart), e.n_ctrl);
    for (const auto& z : cycles) {
        fwd += pauli_matrix(PauliOperator::x_op(z));
        // sign of <+|P(z)|+>; P(z) is a pure X string up to phase
        const auto p = e.combined(z);
        if (p.z.any()) fail(ErrorKind::Internal, "cycle of the entangler left a Z part");
        if (ipow(p.phase) != cplx(1, 0)) ++rep.negative_signs;
    }
    fwd /= static_cast<double>(Dc);
    rep.forward_terms = cycles.size();
    rep.dev_forward = max_abs(kw.m * kd - fwd);

    CMatrix bwd = CMatrix::Zero(Dt, Dt);
    const auto duals = span_elements(kernel_basis(e.zpart.transpose()), e.n_target);
    for (const auto& x : duals) bwd += pauli_matrix(PauliOperator::x_op(x));
    bwd /= static_cast<double>(Dt);
    rep.backward_terms = duals.size();
    rep.dev_backward = max_abs(kd * kw.m - bwd);
    return rep;
}

StateVector random_symmetric_state(std::size_t n, const std::vector<BitVector>& group_basis, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    const auto group = span_elements(group_basis, n);
    for (int attempt = 0; attempt < 16; ++attempt) {
        StateVector s = StateVector::zeros(n);
        for (auto& a : s.amp) a = cplx(g(rng), g(rng));
        StateVector acc = s;
        for (auto& a : acc.amp) a = 0;
        for (const auto& el : group) {
            StateVector t = s;
            apply_pauli(t, PauliOperator::x_op(el));
            for (std::size_t i = 0; i < acc.amp.size(); ++i) acc.amp[i] += t.amp[i];
        }
        if (acc.norm2() > 1e-12) {
            acc.normalize();
            return acc;
        }
    }
    fail(ErrorKind::Internal, "symmetric projection kept vanishing");
}

bool is_symmetric(const StateVector& s, const std::vector<BitVector>& group_basis, double tol) {
    for (const auto& g : group_basis) {
        StateVector t = s;
        apply_pauli(t, PauliOperator::x_op(g));
        for (std::size_t i = 0; i < s.amp.size(); ++i)
            if (std::abs(t.amp[i] - s.amp[i]) > tol) return false;
    }
    return true;
}

int measure_x(StateVector& s, std::size_t q, std::mt19937_64& rng, int forced) {
    if (q >= s.n) fail(ErrorKind::Dimension, "measure_x: qubit out of range");
    const double r = 1.0 / std::sqrt(2.0);
    StateVector plus, minus;
    plus.n = minus.n = s.n - 1;
    plus.amp.resize(std::size_t{1} << plus.n);
    minus.amp.resize(plus.amp.size());
    for (std::size_t j = 0; j < plus.amp.size(); ++j) {
        const cplx a0 = s.amp[insert_bit(j, q, 0)], a1 = s.amp[insert_bit(j, q, 1)];
        plus.amp[j] = r * (a0 + a1);
        minus.amp[j] = r * (a0 - a1);
    }
    const double pp = plus.norm2(), pm = minus.norm2();
    int outcome;
    if (forced >= 0) {
        outcome = forced;
    } else {
        std::uniform_real_distribution<double> u(0.0, pp + pm);
        outcome = u(rng) < pp ? 0 : 1;
    }
    StateVector& keep = outcome ? minus : plus;
    if (keep.norm2() <= 1e-300) fail(ErrorKind::Precondition, "measurement outcome has zero probability");
    keep.normalize();
    s = std::move(keep);
    return outcome;
}

namespace {

// Shared measure-and-correct engine. The joint register holds controls low and
// targets high; `measure_targets` picks which side is read out.
ProtocolResult run_protocol(const Entangler& e, const StateVector& joint_in, bool measure_targets,
                            const BitMatrix& correction_map, const std::vector<std::string>& measured_labels,
                            std::uint64_t seed, bool force_plus) {
    ProtocolResult res;
    std::mt19937_64 rng(seed);
    StateVector s = joint_in;
    apply_entangler(s, e);
    const std::size_t nm = measure_targets ? e.n_target : e.n_ctrl;
    BitVector outcome(nm);
    if (measure_targets) {
        for (std::size_t t = e.n_target; t-- > 0;)
            if (measure_x(s, e.n_ctrl + t, rng, force_plus ? 0 : -1)) outcome.set(t);
    } else {
        for (std::size_t c = 0; c < e.n_ctrl; ++c)
            if (measure_x(s, 0, rng, force_plus ? 0 : -1)) outcome.set(c);
    }
    res.record.cells = measured_labels;
    res.record.outcome = outcome;
    res.record.seed = seed;
    const auto fix = solve(correction_map, outcome);
    res.correctable = fix.has_value();
    res.correction = fix ? *fix : BitVector(correction_map.cols());
    if (fix) apply_pauli(s, PauliOperator::x_op(*fix));
    res.output = std::move(s);
    return res;
}

std::vector<std::string> labels_of(const std::vector<CellLabel>& cells) {
    std::vector<std::string> out;
    for (const auto& c : cells) out.push_back(c.str());
    return out;
}

}  // namespace

ProtocolResult gauging_protocol(const CssComplex& css, const StateVector& input, std::uint64_t seed, bool force_plus,
                                std::size_t cap) {
    if (input.n != css.nq()) fail(ErrorKind::Dimension, "gauging protocol: input must live on the code qubits");
    check_cap(css.nZ() + css.nq(), cap, "gauging protocol");
    if (!is_symmetric(input, kernel_basis(css.dZ().transpose())))
        fail(ErrorKind::Precondition, "gauging protocol: input is not symmetric under X(z*) for dual cycles z*");
    const Entangler e = Entangler::from_css(css);
    const StateVector joint = tensor(StateVector::plus(css.nZ(), cap), input);
    ProtocolResult res = run_protocol(e, joint, true, css.dZ(), labels_of(css.c.cells[1]), seed, force_plus);
    res.outcome_is_cycle = css.dX().apply(res.record.outcome).none();
    res.fidelity = fidelity(res.output, kw_apply(e, input, cap));
    return res;
}

ProtocolResult chamon_protocol(const ChamonModel& m, const StateVector& input, std::uint64_t seed, bool force_plus,
                               std::size_t cap) {
    const Entangler e = Entangler::from_chamon(m);
    if (input.n != e.n_ctrl) fail(ErrorKind::Dimension, "chamon protocol: input must live on the cubes");
    check_cap(e.n_ctrl + e.n_target, cap, "chamon protocol");
    if (!is_symmetric(input, kernel_basis(m.dc)))
        fail(ErrorKind::Precondition, "chamon protocol: input is not symmetric under X(z_c) for cycles z_c");
    const StateVector joint = tensor(input, StateVector::plus(e.n_target, cap));
    ProtocolResult res = run_protocol(e, joint, false, m.dc.transpose(), labels_of(m.cubes), seed, force_plus);
    res.outcome_is_cycle = true;
    res.fidelity = fidelity(res.output, kw_dagger_apply(e, input, cap));
    return res;
}

std::array<cplx, 2> bra_plus() {
    const double r = 1.0 / std::sqrt(2.0);
    return {cplx(r), cplx(r)};
}

std::array<cplx, 2> bra_zero_expKX(double K) { return {cplx(std::cosh(K)), cplx(std::sinh(K))}; }

cplx overlap(const ProductBra& bra, const StateVector& s) {
    if (bra.size() != s.n) fail(ErrorKind::Dimension, "overlap: bra has " + std::to_string(bra.size()) +
                                                        " factors for " + std::to_string(s.n) + " qubits");
    std::vector<cplx> cur = s.amp;
    for (std::size_t q = s.n; q-- > 0;) {
        const std::size_t half = std::size_t{1} << q;
        for (std::size_t j = 0; j < half; ++j) cur[j] = bra[q][0] * cur[j] + bra[q][1] * cur[j + half];
        cur.resize(half);
    }
    return cur[0];
}

void dump_state(const StateVector& s, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorKind::Parse, "cannot open " + path);
    const std::uint64_t n = s.n;
    f.write(reinterpret_cast<const char*>(&n), sizeof n);
    for (const auto& a : s.amp) {
        const double re = a.real(), im = a.imag();
        f.write(reinterpret_cast<const char*>(&re), sizeof re);
        f.write(reinterpret_cast<const char*>(&im), sizeof im);
    }
}

StateVector load_state(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(ErrorKind::Parse, "cannot open " + path);
    std::uint64_t n = 0;
    f.read(reinterpret_cast<char*>(&n), sizeof n);
    if (!f || n > 40) fail(ErrorKind::Parse, "bad state header in " + path);
    std::vector<cplx> a(std::size_t{1} << n);
    for (auto& x : a) {
        double re = 0, im = 0;
        f.read(reinterpret_cast<char*>(&re), sizeof re);
        f.read(reinterpret_cast<char*>(&im), sizeof im);
        x = cplx(re, im);
    }
    if (!f) fail(ErrorKind::Parse, "truncated state file " + path);
    return StateVector::from_amplitudes(std::move(a));
}

}  // namespace css

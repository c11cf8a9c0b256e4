#include "css/statmech.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "css/errors.hpp"

namespace css {

namespace {

// Pairwise reduction: fixed-size leaves summed naively, then a binary-counter
// stack of partial sums merged level by level.
class PairwiseSum {
public:
    void add(double v) {
        leaf_ += v;
        if (++count_ == kLeaf) flush();
    }
    double total() {
        if (count_) flush();
        double t = 0;
        for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) t += it->first;
        return t;
    }

private:
    static constexpr std::size_t kLeaf = 256;
    void flush() {
        std::pair<double, int> cur{leaf_, 0};
        while (!stack_.empty() && stack_.back().second == cur.second) {
            cur.first += stack_.back().first;
            ++cur.second;
            stack_.pop_back();
        }
        stack_.push_back(cur);
        leaf_ = 0;
        count_ = 0;
    }
    double leaf_ = 0;
    std::size_t count_ = 0;
    std::vector<std::pair<double, int>> stack_;
};

double log_pow2(double e) { return e * std::log(2.0); }

double rel_residual(double log_lhs, double log_rhs) { return std::abs(std::expm1(log_rhs - log_lhs)); }

std::vector<TwistSector> enumerate_sectors(const std::vector<BitVector>& basis, std::size_t len, std::size_t cap) {
    if (basis.size() >= 63 || (std::size_t{1} << basis.size()) > cap)
        fail(ErrorKind::Cap, "twist sectors: 2^" + std::to_string(basis.size()) + " exceeds the sector cap " +
                                 std::to_string(cap));
    std::vector<TwistSector> out;
    for (std::size_t m = 0; m < (std::size_t{1} << basis.size()); ++m) {
        BitVector v(len);
        for (std::size_t i = 0; i < basis.size(); ++i)
            if (m >> i & 1) v ^= basis[i];
        out.push_back({v, m});
    }
    return out;
}

template <class Model>
DualityReport finish_duality(double log_lhs, const std::vector<TwistSector>& sectors, Model&& dual, double log_pre_printed,
                             double log_pre_derived) {
    DualityReport r;
    r.lhs = std::exp(log_lhs);
    r.sectors = sectors.size();
    r.sector_dim = static_cast<std::size_t>(std::lround(std::log2(static_cast<double>(sectors.size()))));
    // sum in the log domain relative to the largest sector
    std::vector<double> logs;
    for (const auto& s : sectors) {
        const auto v = dual(s.rep);
        logs.push_back(v.log_value);
        r.sector_values.push_back(v.value);
    }
    const double mx = *std::max_element(logs.begin(), logs.end());
    PairwiseSum acc;
    for (double l : logs) acc.add(std::exp(l - mx));
    const double log_sum = mx + std::log(acc.total());
    r.sector_sum = std::exp(log_sum);
    r.log_prefactor_printed = log_pre_printed;
    r.log_prefactor_derived = log_pre_derived;
    r.residual_printed = rel_residual(log_lhs, log_pre_printed + log_sum);
    r.residual_derived = rel_residual(log_lhs, log_pre_derived + log_sum);
    return r;
}

void require_positive(double K, const char* what) {
    if (!(K > 0)) fail(ErrorKind::Precondition, std::string(what) + ": coupling must be positive for the dual coupling");
}

BitVector random_vec(std::size_t n, std::mt19937_64& rng) {
    BitVector v(n);
    for (std::size_t i = 0; i < n; ++i)
        if (rng() & 1) v.set(i);
    return v;
}

std::size_t mod(long long k, int L) { return static_cast<std::size_t>(((k % L) + L) % L); }

}  // namespace

PartitionResult evaluate(const BondModel& m, std::size_t cap) {
    if (m.n_spins > cap || m.n_spins > 62)
        fail(ErrorKind::Cap, "partition sum over " + std::to_string(m.n_spins) + " spins exceeds the cap " +
                                 std::to_string(cap));
    const std::size_t nc = m.classes.size();
    std::vector<std::size_t> per_class(nc, 0);
    std::vector<std::vector<std::size_t>> touching(m.n_spins);
    std::vector<std::uint64_t> masks;
    for (std::size_t b = 0; b < m.bonds.size(); ++b) {
        const auto& bd = m.bonds[b];
        if (bd.cls >= nc) fail(ErrorKind::Dimension, "bond coupling class out of range");
        ++per_class[bd.cls];
        std::uint64_t mask = 0;
        for (auto s : bd.spins) {
            if (s >= m.n_spins) fail(ErrorKind::Dimension, "bond refers to a missing spin");
            mask ^= std::uint64_t{1} << s;
        }
        masks.push_back(mask);
        for (std::size_t s = 0; s < m.n_spins; ++s)
            if (mask >> s & 1) touching[s].push_back(b);
    }
    // weight = prod_c table[c][#negative bonds in c]; table entries <= 1
    double shift = 0;
    std::vector<std::vector<double>> table(nc);
    for (std::size_t c = 0; c < nc; ++c) {
        const double J = m.classes[c];
        const double n = static_cast<double>(per_class[c]);
        shift += std::abs(J) * n;
        for (std::size_t k = 0; k <= per_class[c]; ++k)
            table[c].push_back(std::exp(J * (n - 2.0 * static_cast<double>(k)) - std::abs(J) * n));
    }
    // spin bit 1 means s = -1; bond value (-1)^{flip + parity}
    std::vector<char> neg(m.bonds.size());
    std::vector<std::size_t> negc(nc, 0);
    for (std::size_t b = 0; b < m.bonds.size(); ++b) {
        neg[b] = m.bonds[b].flip;
        negc[m.bonds[b].cls] += neg[b];
    }
    auto weight = [&] {
        double w = 1;
        for (std::size_t c = 0; c < nc; ++c) w *= table[c][negc[c]];
        return w;
    };
    PairwiseSum acc;
    const std::uint64_t total = std::uint64_t{1} << m.n_spins;
    acc.add(weight());
    for (std::uint64_t i = 1; i < total; ++i) {
        const auto s = static_cast<std::size_t>(std::countr_zero(i));  // Gray code flip
        for (auto b : touching[s]) {
            const auto c = m.bonds[b].cls;
            if (neg[b]) --negc[c]; else ++negc[c];
            neg[b] ^= 1;
        }
        acc.add(weight());
    }
    PartitionResult r;
    const double sum = acc.total();
    r.log_value = shift + std::log(sum);
    r.value = std::exp(r.log_value);
    r.config_count = total;
    r.couplings = m.classes;
    return r;
}

double dual_coupling(double K) {
    require_positive(K, "dual_coupling");
    return -0.5 * std::log(std::tanh(K));
}

BondModel z_model(const CssComplex& css, double K) {
    BondModel m;
    m.n_spins = css.nZ();
    m.classes = {K};
    for (std::size_t i = 0; i < css.nq(); ++i) m.bonds.push_back({css.dZ().row(i).support(), 0, false});
    return m;
}

PartitionResult z_Z(const CssComplex& css, double K, std::size_t cap) { return evaluate(z_model(css, K), cap); }

std::vector<TwistSector> twist_sectors(const CssComplex& css, std::size_t cap) {
    SpanBuilder span(css.nq());
    for (std::size_t a = 0; a < css.nX(); ++a) span.add(css.dX().row(a));
    std::vector<BitVector> basis;
    for (const auto& v : kernel_basis(css.dZ().transpose()))
        if (span.add(v)) basis.push_back(v);
    return enumerate_sectors(basis, css.nq(), cap);
}

BondModel x_twisted_model(const CssComplex& css, double Kstar, const BitVector& twist) {
    if (twist.size() != css.nq()) fail(ErrorKind::Dimension, "twist length differs from the qubit count");
    BondModel m;
    m.n_spins = css.nX();
    m.classes = {Kstar};
    const BitMatrix t = css.dX().transpose();
    for (std::size_t i = 0; i < css.nq(); ++i) m.bonds.push_back({t.row(i).support(), 0, twist.get(i)});
    return m;
}

PartitionResult z_X_twisted(const CssComplex& css, double Kstar, const BitVector& twist, std::size_t cap) {
    if (css.dZ().transpose().apply(twist).any()) fail(ErrorKind::NotCycle, "twist is not a dual cycle");
    return evaluate(x_twisted_model(css, Kstar, twist), cap);
}

DualityReport check_twisted_duality(const CssComplex& css, double K, std::size_t cap) {
    require_positive(K, "twisted duality");
    const double Ks = dual_coupling(K);
    const auto lhs = z_Z(css, K, cap);
    const auto sectors = twist_sectors(css);
    const double nq = static_cast<double>(css.nq());
    const double nZ = static_cast<double>(css.nZ()), nX = static_cast<double>(css.nX());
    const double dimL = std::log2(static_cast<double>(sectors.size()));
    const double rkX = static_cast<double>(rank(css.dX()));
    const double log_sinh = std::log(std::sinh(2 * K));
    const double printed = log_pow2(nZ) + 0.5 * nq * log_sinh - log_pow2(nX + dimL);
    // 2^{|Z|} (sinh 2K / 2)^{|q|/2} / |Ker dX^T|
    const double derived = log_pow2(nZ) + 0.5 * nq * (log_sinh - std::log(2.0)) - log_pow2(nX - rkX);
    return finish_duality(lhs.log_value, sectors, [&](const BitVector& t) { return z_X_twisted(css, Ks, t, cap); },
                          printed, derived);
}

StrangeReport strange_correlator(const CssComplex& css, double K, std::size_t qubit_cap) {
    const auto e = Entangler::from_css(css);
    const auto psi = kw_dagger_apply(e, StateVector::plus(css.nZ(), qubit_cap), qubit_cap);
    const ProductBra bra(css.nq(), bra_zero_expKX(K));
    StrangeReport r;
    r.overlap = overlap(bra, psi).real();
    r.partition = z_Z(css, K).value;
    r.log_normalization = log_pow2(static_cast<double>(css.nZ()) + 0.5 * static_cast<double>(css.nq()));
    r.residual = std::abs(std::exp(r.log_normalization) * r.overlap - r.partition) / r.partition;
    return r;
}

double strange_normalization_spread(const CssComplex& css, const std::vector<double>& Ks) {
    std::vector<double> fits;
    for (double K : Ks) {
        const auto r = strange_correlator(css, K);
        fits.push_back(r.partition / r.overlap);
    }
    const auto [lo, hi] = std::minmax_element(fits.begin(), fits.end());
    return (*hi - *lo) / *hi;
}

BondModel foliated_model(const FoliatedComplex& fol, double J, double K) {
    BondModel m;
    m.n_spins = fol.nQ2();
    m.classes = {J, K};
    for (std::size_t i = 0; i < fol.nQ1(); ++i)
        m.bonds.push_back({fol.d1().column(i).support(), fol.origin[1][i].css_grade == 0 ? 0u : 1u, false});
    return m;
}

PartitionResult foliated_Z(const FoliatedComplex& fol, double J, double K, std::size_t cap) {
    return evaluate(foliated_model(fol, J, K), cap);
}

BondModel foliated_dual_model(const FoliatedComplex& fol, double Jstar, double Kstar, const BitVector& twist) {
    if (twist.size() != fol.nQ1()) fail(ErrorKind::Dimension, "twist length differs from |Q1|");
    BondModel m;
    m.n_spins = fol.c.size(0);
    m.classes = {Jstar, Kstar};
    const BitMatrix& d0 = fol.c.diffs[0];
    for (std::size_t i = 0; i < fol.nQ1(); ++i)
        m.bonds.push_back({d0.row(i).support(), fol.origin[1][i].css_grade == 0 ? 0u : 1u, twist.get(i)});
    return m;
}

PartitionResult foliated_dual_twisted(const FoliatedComplex& fol, double Jstar, double Kstar, const BitVector& twist,
                                      std::size_t cap) {
    if (fol.d1().apply(twist).any()) fail(ErrorKind::NotCycle, "foliated twist is not a cycle");
    return evaluate(foliated_dual_model(fol, Jstar, Kstar, twist), cap);
}

std::vector<TwistSector> foliated_twist_sectors(const FoliatedComplex& fol, std::size_t cap) {
    return enumerate_sectors(homology_basis(fol.c, 1).reps, fol.nQ1(), cap);
}

DualityReport check_foliated_duality(const FoliatedComplex& fol, double J, double K, std::size_t cap) {
    require_positive(J, "foliated duality");
    require_positive(K, "foliated duality");
    const double Js = dual_coupling(J), Ks = dual_coupling(K);
    const auto lhs = foliated_Z(fol, J, K, cap);
    const auto sectors = foliated_twist_sectors(fol);
    double nz = 0, nqw = 0;
    for (const auto& o : fol.origin[1]) (o.css_grade == 0 ? nz : nqw) += 1;
    const double nQ1 = static_cast<double>(fol.nQ1()), nQ2 = static_cast<double>(fol.nQ2());
    const double nZw = static_cast<double>(fol.c.size(0));
    const double dimL = std::log2(static_cast<double>(sectors.size()));
    const double rk0 = static_cast<double>(rank(fol.c.diffs[0]));
    const double core = log_pow2(nQ2) + 0.5 * nz * std::log(std::sinh(2 * J)) + 0.5 * nqw * std::log(std::sinh(2 * K));
    const double printed = core - log_pow2(nZw + dimL);
    // 2^{-|Q1|/2} / |Ker d0| in place of 1 / (2^{|Zw|} |L|)
    const double derived = core - log_pow2(0.5 * nQ1 + nZw - rk0);
    return finish_duality(lhs.log_value, sectors,
                          [&](const BitVector& t) { return foliated_dual_twisted(fol, Js, Ks, t, cap); }, printed,
                          derived);
}

StrangeReport foliated_strange_correlator(const FoliatedComplex& fol, double J, double K, std::size_t qubit_cap) {
    const auto psi = build_cluster_state(fol, qubit_cap);
    ProductBra bra;
    for (std::size_t i = 0; i < fol.nQ1(); ++i) bra.push_back(bra_zero_expKX(fol.origin[1][i].css_grade == 0 ? J : K));
    for (std::size_t i = 0; i < fol.nQ2(); ++i) bra.push_back(bra_plus());
    StrangeReport r;
    r.overlap = overlap(bra, psi).real();
    r.partition = foliated_Z(fol, J, K).value;
    r.log_normalization = log_pow2(static_cast<double>(fol.nQ2()) + 0.5 * static_cast<double>(fol.nQ1()));
    r.residual = std::abs(std::exp(r.log_normalization) * r.overlap - r.partition) / r.partition;
    return r;
}

BoundarySlices BoundarySlices::empty(const CssComplex& css, int Ltau) {
    if (Ltau < 1) fail(ErrorKind::Constraint, "L_tau must be >= 1");
    BoundarySlices s;
    s.Ltau = Ltau;
    const auto L = static_cast<std::size_t>(Ltau);
    s.cq.assign(L, BitVector(css.nq()));
    s.zX.assign(L, BitVector(css.nX()));
    s.zZ.assign(L, BitVector(css.nZ()));
    s.cstar.assign(L, BitVector(css.nq()));
    return s;
}

void validate_slices(const CssComplex& css, const BoundarySlices& s) {
    const auto L = static_cast<std::size_t>(s.Ltau);
    if (s.cq.size() != L || s.zX.size() != L || s.zZ.size() != L || s.cstar.size() != L)
        fail(ErrorKind::Dimension, "boundary slices: expected L_tau entries per field");
    for (std::size_t k = 0; k < L; ++k) {
        if (s.cq[k].size() != css.nq() || s.cstar[k].size() != css.nq() || s.zX[k].size() != css.nX() ||
            s.zZ[k].size() != css.nZ())
            fail(ErrorKind::Dimension, "boundary slices: chain length mismatch at slice " + std::to_string(k));
        const std::size_t km = mod(static_cast<long long>(k) - 1, s.Ltau);
        if (css.dX().apply(s.cq[k]) != (s.zX[k] ^ s.zX[km]))
            fail(ErrorKind::NotCycle, "boundary slices: dX c_q differs from the change of z_X at slice " +
                                          std::to_string(k));
        if (css.dZ().transpose().apply(s.cstar[km]) != (s.zZ[k] ^ s.zZ[km]))
            fail(ErrorKind::NotCycle, "boundary slices: dZ^T c* differs from the change of z*_Z at slice " +
                                          std::to_string(k));
    }
}

bool bf_phase(const CssComplex& css, const BoundarySlices& s, const BfConfig& cfg) {
    const int L = s.Ltau;
    bool p = false;
    for (int k = 1; k <= L; ++k) {
        const auto i = mod(k, L), im = mod(k - 1, L);
        const BitVector& bq = cfg.bq[im];  // b_q^{(k-1/2)}
        const BitVector& aZ = cfg.aZ[im];  // a_Z^{(k-1/2)}
        p ^= bq.dot(cfg.aq[i] ^ cfg.aq[im]);
        p ^= bq.dot(css.dZ().apply(aZ));
        p ^= cfg.bX[i].dot(css.dX().apply(cfg.aq[i]));
        p ^= bq.dot(s.cq[i]);
        p ^= cfg.aq[i].dot(s.cstar[i]);
        p ^= aZ.dot(s.zZ[i]);
        p ^= cfg.bX[i].dot(s.zX[i]);
    }
    return p;
}

BfResult bf_partition(const CssComplex& css, const BoundarySlices& s, std::size_t bit_cap) {
    validate_slices(css, s);
    const auto L = static_cast<std::size_t>(s.Ltau);
    const std::size_t nq = css.nq(), nZ = css.nZ(), nX = css.nX();
    const std::size_t abits = L * (nq + nZ), bbits = L * (nq + nX);
    BfResult r;
    r.bits = abits + bbits;
    if (r.bits > bit_cap || bbits > 62)
        fail(ErrorKind::Cap, "BF sum over " + std::to_string(r.bits) + " bits exceeds the cap " + std::to_string(bit_cap));
    // the action is affine in the b fields for fixed a: phase = u(a).b + v(a)
    auto unpack_a = [&](std::uint64_t m, BfConfig& cfg) {
        std::size_t bit = 0;
        for (std::size_t k = 0; k < L; ++k) {
            cfg.aq[k] = BitVector(nq);
            for (std::size_t i = 0; i < nq; ++i, ++bit)
                if (m >> bit & 1) cfg.aq[k].set(i);
        }
        for (std::size_t k = 0; k < L; ++k) {
            cfg.aZ[k] = BitVector(nZ);
            for (std::size_t i = 0; i < nZ; ++i, ++bit)
                if (m >> bit & 1) cfg.aZ[k].set(i);
        }
    };
    BfConfig cfg{std::vector<BitVector>(L), std::vector<BitVector>(L, BitVector(nq)), std::vector<BitVector>(L),
                 std::vector<BitVector>(L, BitVector(nX))};
    long long total = 0;
    for (std::uint64_t am = 0; am < (std::uint64_t{1} << abits); ++am) {
        unpack_a(am, cfg);
        for (auto& v : cfg.bq) v = BitVector(nq);
        for (auto& v : cfg.bX) v = BitVector(nX);
        const bool v0 = bf_phase(css, s, cfg);
        // coefficient of each b bit, read off by toggling it
        std::uint64_t u = 0;
        std::size_t bit = 0;
        for (std::size_t k = 0; k < L; ++k)
            for (std::size_t i = 0; i < nq; ++i, ++bit) {
                cfg.bq[k].set(i);
                if (bf_phase(css, s, cfg) != v0) u |= std::uint64_t{1} << bit;
                cfg.bq[k].set(i, false);
            }
        for (std::size_t k = 0; k < L; ++k)
            for (std::size_t i = 0; i < nX; ++i, ++bit) {
                cfg.bX[k].set(i);
                if (bf_phase(css, s, cfg) != v0) u |= std::uint64_t{1} << bit;
                cfg.bX[k].set(i, false);
            }
        long long part = 0;
        for (std::uint64_t bm = 0; bm < (std::uint64_t{1} << bbits); ++bm)
            part += (std::popcount(bm & u) & 1) ? -1 : 1;
        total += v0 ? -part : part;
    }
    r.raw = total;
    r.terms = std::uint64_t{1} << r.bits;
    r.normalized_printed = std::ldexp(static_cast<double>(total), -static_cast<int>(nX + nZ));
    r.normalized_derived = std::ldexp(static_cast<double>(total), -static_cast<int>(L * (nX + nZ + nq)));
    return r;
}

BfConfig bf_shift_alpha(const CssComplex& css, BfConfig cfg, const std::vector<BitVector>& alpha) {
    const int L = static_cast<int>(cfg.aq.size());
    for (int k = 0; k < L; ++k) {
        cfg.aq[mod(k, L)] ^= css.dZ().apply(alpha[mod(k, L)]);
        cfg.aZ[mod(k, L)] ^= alpha[mod(k + 1, L)] ^ alpha[mod(k, L)];
    }
    return cfg;
}

BfConfig bf_shift_beta(const CssComplex& css, BfConfig cfg, const std::vector<BitVector>& beta) {
    const int L = static_cast<int>(cfg.bq.size());
    const BitMatrix t = css.dX().transpose();
    for (int k = 0; k < L; ++k) {
        cfg.bq[mod(k, L)] ^= t.apply(beta[mod(k, L)]);
        cfg.bX[mod(k, L)] ^= beta[mod(k, L)] ^ beta[mod(k - 1, L)];
    }
    return cfg;
}

bool BfGaugeReport::all() const { return std::all_of(invariant.begin(), invariant.end(), [](bool b) { return b; }); }

BfGaugeReport bf_gauge_check(const CssComplex& css, const BoundarySlices& s, std::uint64_t seed) {
    validate_slices(css, s);
    std::mt19937_64 rng(seed);
    const auto L = static_cast<std::size_t>(s.Ltau);
    BfConfig cfg;
    for (std::size_t k = 0; k < L; ++k) {
        cfg.aq.push_back(random_vec(css.nq(), rng));
        cfg.bq.push_back(random_vec(css.nq(), rng));
        cfg.aZ.push_back(random_vec(css.nZ(), rng));
        cfg.bX.push_back(random_vec(css.nX(), rng));
    }
    const bool base = bf_phase(css, s, cfg);
    BfGaugeReport rep;
    auto record = [&](const std::string& name, const BfConfig& shifted) {
        rep.names.push_back(name);
        rep.invariant.push_back(bf_phase(css, s, shifted) == base);
    };
    // one slice only, and all slices at once
    std::vector<BitVector> alpha(L, BitVector(css.nZ())), beta(L, BitVector(css.nX()));
    const std::size_t k0 = static_cast<std::size_t>(rng() % L);
    alpha[k0] = random_vec(css.nZ(), rng);
    beta[k0] = random_vec(css.nX(), rng);
    record("a_q + dZ alpha, a_Z + alpha difference (one slice)", bf_shift_alpha(css, cfg, alpha));
    record("b_q + dX^T beta, b_X + beta difference (one slice)", bf_shift_beta(css, cfg, beta));
    for (auto& a : alpha) a = random_vec(css.nZ(), rng);
    for (auto& b : beta) b = random_vec(css.nX(), rng);
    record("a_q + dZ alpha, a_Z + alpha difference (all slices)", bf_shift_alpha(css, cfg, alpha));
    record("b_q + dX^T beta, b_X + beta difference (all slices)", bf_shift_beta(css, cfg, beta));
    return rep;
}

}  // namespace css

#include "css/gsd.hpp"

#include <algorithm>
#include <numeric>

#include "css/errors.hpp"

namespace css {

namespace {

int wrap(int v, int L) { return ((v % L) + L) % L; }

std::size_t volume(const std::vector<int>& periods) {
    std::size_t n = 1;
    for (int L : periods) {
        if (L < 1) fail(ErrorKind::Constraint, "periods must be positive");
        n *= static_cast<std::size_t>(L);
    }
    return n;
}

std::size_t position(const std::vector<int>& coords, const std::vector<int>& periods) {
    std::size_t p = 0;
    for (std::size_t i = 0; i < periods.size(); ++i)
        p = p * static_cast<std::size_t>(periods[i]) + static_cast<std::size_t>(wrap(coords[i], periods[i]));
    return p;
}

std::vector<int> coords_of(std::size_t p, const std::vector<int>& periods) {
    std::vector<int> c(periods.size());
    for (std::size_t i = periods.size(); i-- > 0;) {
        c[i] = static_cast<int>(p % static_cast<std::size_t>(periods[i]));
        p /= static_cast<std::size_t>(periods[i]);
    }
    return c;
}

std::vector<std::vector<int>> subsets(int d, int m) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(cur.size()) == m) {
            out.push_back(cur);
            return;
        }
        for (int a = start; a < d; ++a) {
            cur.push_back(a);
            self(self, a + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

std::vector<int> complement(int d, const std::vector<int>& s) {
    std::vector<int> out;
    for (int a = 0; a < d; ++a)
        if (!std::count(s.begin(), s.end(), a)) out.push_back(a);
    return out;
}

bool contains(const std::vector<int>& big, const std::vector<int>& small) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

LaurentPoly product_one_plus(int d, const std::vector<int>& axes, bool bar) {
    LaurentPoly p = LaurentPoly::one(d);
    for (int a : axes) p = p * (bar ? LaurentPoly::one_plus_bar(d, a) : LaurentPoly::one_plus(d, a));
    return p;
}

// Face maps between cell types of a cubic lattice: qubits of type S, Z checks
// of type T containing S, X checks of type U contained in S.
QcMaps face_maps(int d, const std::vector<std::vector<int>>& q, const std::vector<std::vector<int>>& z,
                 const std::vector<std::vector<int>>& x) {
    QcMaps m;
    m.dz = PolyMatrix(d, q.size(), z.size());
    m.dx = PolyMatrix(d, q.size(), x.size());
    for (std::size_t r = 0; r < q.size(); ++r) {
        for (std::size_t c = 0; c < z.size(); ++c) {
            if (!contains(z[c], q[r])) continue;
            std::vector<int> extra;
            std::set_difference(z[c].begin(), z[c].end(), q[r].begin(), q[r].end(), std::back_inserter(extra));
            m.dz.at(r, c) = product_one_plus(d, extra, false);
        }
        for (std::size_t c = 0; c < x.size(); ++c) {
            if (!contains(q[r], x[c])) continue;
            std::vector<int> extra;
            std::set_difference(q[r].begin(), q[r].end(), x[c].begin(), x[c].end(), std::back_inserter(extra));
            m.dx.at(r, c) = product_one_plus(d, extra, true);
        }
    }
    return m;
}

std::size_t rank_expanded(const PolyMatrix& m, const std::vector<int>& periods, std::size_t budget) {
    if (m.cols == 0 || m.rows == 0) return 0;
    const std::size_t N = volume(periods);
    if (m.rows * N > budget || m.cols * N > budget)
        fail(ErrorKind::Cap, "expanded matrix of " + std::to_string(m.rows * N) + " x " + std::to_string(m.cols * N) +
                                 " exceeds the budget of " + std::to_string(budget));
    return rank(expand(m, periods));
}

void require_periods(const std::vector<int>& periods) {
    for (int L : periods)
        if (L < 2) fail(ErrorKind::Constraint, "periods must be at least 2");
}

long long ipow(long long b, int e) {
    long long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

bool all_equal(const std::vector<int>& p) {
    return std::adjacent_find(p.begin(), p.end(), std::not_equal_to<>()) == p.end();
}

long long poly_at(const std::vector<long long>& coeffs_high_first, long long L) {
    long long v = 0;
    for (long long c : coeffs_high_first) v = v * L + c;
    return v;
}

}  // namespace

LaurentPoly LaurentPoly::one(int d) { return monomial(std::vector<int>(static_cast<std::size_t>(d), 0)); }

LaurentPoly LaurentPoly::monomial(const std::vector<int>& e) {
    LaurentPoly p(static_cast<int>(e.size()));
    p.terms.insert(e);
    return p;
}

LaurentPoly LaurentPoly::one_plus(int d, int axis) {
    LaurentPoly p = one(d);
    std::vector<int> e(static_cast<std::size_t>(d), 0);
    e[static_cast<std::size_t>(axis)] = 1;
    p.toggle(e);
    return p;
}

LaurentPoly LaurentPoly::one_plus_bar(int d, int axis) { return one_plus(d, axis).antipode(); }

LaurentPoly LaurentPoly::s(int d, int axis, int L) {
    LaurentPoly p(d);
    std::vector<int> e(static_cast<std::size_t>(d), 0);
    for (int i = 0; i < L; ++i) {
        e[static_cast<std::size_t>(axis)] = i;
        p.toggle(e);
    }
    return p;
}

void LaurentPoly::toggle(const std::vector<int>& e) {
    if (static_cast<int>(e.size()) != d) fail(ErrorKind::Dimension, "monomial has the wrong number of variables");
    auto it = terms.find(e);
    if (it == terms.end())
        terms.insert(e);
    else
        terms.erase(it);
}

LaurentPoly LaurentPoly::antipode() const {
    LaurentPoly p(d);
    for (auto e : terms) {
        for (auto& v : e) v = -v;
        p.terms.insert(e);
    }
    return p;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
    if (o.d != d) fail(ErrorKind::Dimension, "polynomials in different variable counts");
    for (const auto& e : o.terms) toggle(e);
    return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.d != b.d) fail(ErrorKind::Dimension, "polynomials in different variable counts");
    LaurentPoly p(a.d);
    for (const auto& x : a.terms)
        for (const auto& y : b.terms) {
            std::vector<int> e(x);
            for (std::size_t i = 0; i < e.size(); ++i) e[i] += y[i];
            p.toggle(e);
        }
    return p;
}

std::string LaurentPoly::str() const {
    if (terms.empty()) return "0";
    std::string s;
    for (const auto& e : terms) {
        if (!s.empty()) s += "+";
        std::string m;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (!e[i]) continue;
            m += "x" + std::to_string(i + 1);
            if (e[i] != 1) m += "^" + std::to_string(e[i]);
        }
        s += m.empty() ? "1" : m;
    }
    return s;
}

PolyMatrix PolyMatrix::dagger() const {
    PolyMatrix t(d, cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) t.at(j, i) = at(i, j).antipode();
    return t;
}

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
    if (a.cols != b.rows || a.d != b.d) fail(ErrorKind::Dimension, "polynomial matrix shapes do not compose");
    PolyMatrix c(a.d, a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < b.cols; ++j)
            for (std::size_t k = 0; k < a.cols; ++k) c.at(i, j) += a.at(i, k) * b.at(k, j);
    return c;
}

BitMatrix expand(const PolyMatrix& m, const std::vector<int>& periods) {
    if (static_cast<int>(periods.size()) != m.d) fail(ErrorKind::Dimension, "period count differs from variable count");
    const std::size_t N = volume(periods);
    BitMatrix out(m.rows * N, m.cols * N);
    for (std::size_t p = 0; p < N; ++p) {
        const auto base = coords_of(p, periods);
        for (std::size_t r = 0; r < m.rows; ++r)
            for (std::size_t c = 0; c < m.cols; ++c)
                for (const auto& e : m.at(r, c).terms) {
                    std::vector<int> t(base);
                    for (std::size_t i = 0; i < t.size(); ++i) t[i] += e[i];
                    out.flip(position(t, periods) * m.rows + r, p * m.cols + c);
                }
    }
    return out;
}

BitVector expand_vector(const std::vector<LaurentPoly>& v, const std::vector<int>& periods) {
    const std::size_t N = volume(periods);
    BitVector out(v.size() * N);
    for (std::size_t r = 0; r < v.size(); ++r) {
        if (static_cast<std::size_t>(v[r].d) != periods.size())
            fail(ErrorKind::Dimension, "period count differs from variable count");
        for (const auto& e : v[r].terms) out.flip(position(e, periods) * v.size() + r);
    }
    return out;
}

std::vector<std::vector<int>> cc_row_types(int d, int k) { return subsets(d, k); }

std::vector<std::vector<int>> cc_column_types(int d, int k) {
    if (d == 3 && k == 1) return {{0, 1}, {1, 2}, {0, 2}};
    std::vector<std::vector<int>> out;
    for (const auto& removed : subsets(d, k)) out.push_back(complement(d, removed));
    return out;
}

PolyMatrix sigma_cc(int d, int k) {
    if (k < 0 || 2 * k >= d) fail(ErrorKind::Constraint, "cc(d,k) needs 0 <= k < d/2");
    return face_maps(d, cc_row_types(d, k), cc_column_types(d, k), {}).dz;
}

QcMaps sigma_qc(int d, int k, int l) {
    if (k < 0 || 2 * k >= d || l < 0 || l >= k) fail(ErrorKind::Constraint, "qc(d,k,l) needs 0 <= l < k < d/2");
    const long long b = binomial(d - k - l, k - l);
    if (b % 2) fail(ErrorKind::Constraint, "binom(d-k-l, k-l) = " + std::to_string(b) + " is odd");
    return face_maps(d, subsets(d, k), cc_column_types(d, k), subsets(d, l));
}

ModelPoly sigma_model(const ModelSpec& spec) {
    ModelPoly mp;
    switch (spec.kind) {
        case ModelKind::Toric: mp.maps = face_maps(spec.d, subsets(spec.d, 1), subsets(spec.d, 2), subsets(spec.d, 0)); break;
        case ModelKind::Qpim2d: mp.maps = face_maps(2, subsets(2, 0), subsets(2, 2), {}); break;
        case ModelKind::CC: mp.maps = {sigma_cc(spec.d, spec.k), PolyMatrix(spec.d, static_cast<std::size_t>(binomial(spec.d, spec.k)), 0)}; break;
        case ModelKind::QC: mp.maps = sigma_qc(spec.d, spec.k, spec.l); break;
        case ModelKind::XCube: {
            QcMaps m{PolyMatrix(3, 3, 1), PolyMatrix(3, 3, 3)};
            for (int a = 0; a < 3; ++a) {
                std::vector<int> others;
                for (int b = 0; b < 3; ++b)
                    if (b != a) others.push_back(b);
                m.dz.at(static_cast<std::size_t>(a), 0) = product_one_plus(3, others, false);
            }
            // vertex copy c holds the edges along the two axes other than c
            for (int c = 0; c < 3; ++c)
                for (int a = 0; a < 3; ++a)
                    if (a != c) m.dx.at(static_cast<std::size_t>(a), static_cast<std::size_t>(c)) = LaurentPoly::one_plus_bar(3, a);
            mp.maps = m;
            break;
        }
        case ModelKind::Checkerboard: {
            // 2x2x2 supercell: 8 vertex types, 4 shaded cube types (even parity origins)
            std::vector<std::vector<int>> cubes;
            for (int t = 0; t < 8; ++t) {
                const std::vector<int> c{t >> 2 & 1, t >> 1 & 1, t & 1};
                if ((c[0] + c[1] + c[2]) % 2 == 0) cubes.push_back(c);
            }
            QcMaps m{PolyMatrix(3, 8, cubes.size()), PolyMatrix(3, 8, cubes.size())};
            for (std::size_t j = 0; j < cubes.size(); ++j)
                for (int eps = 0; eps < 8; ++eps) {
                    std::vector<int> v{cubes[j][0] + (eps >> 2 & 1), cubes[j][1] + (eps >> 1 & 1), cubes[j][2] + (eps & 1)};
                    const auto type = static_cast<std::size_t>((v[0] % 2) * 4 + (v[1] % 2) * 2 + v[2] % 2);
                    const std::vector<int> shift{v[0] / 2, v[1] / 2, v[2] / 2};
                    m.dz.at(type, j).toggle(shift);
                    m.dx.at(type, j).toggle(shift);
                }
            mp.maps = m;
            mp.supercell = 2;
            break;
        }
        default: fail(ErrorKind::Precondition, "no polynomial form for model " + spec.name());
    }
    return mp;
}

std::size_t gsd_from_maps(const QcMaps& m, const std::vector<int>& periods, std::size_t budget) {
    const std::size_t nq = m.dz.rows * volume(periods);
    if (nq > budget) fail(ErrorKind::Cap, std::to_string(nq) + " qubits exceed the gsd budget");
    return nq - rank_expanded(m.dz, periods, budget) - rank_expanded(m.dx, periods, budget);
}

std::size_t gsd_cc(int d, int k, const std::vector<int>& periods, std::size_t budget) {
    require_periods(periods);
    const PolyMatrix s = sigma_cc(d, k);
    const std::size_t nq = s.rows * volume(periods);
    if (nq > budget) fail(ErrorKind::Cap, std::to_string(nq) + " qubits exceed the gsd budget");
    // dim coker
    return nq - rank_expanded(s, periods, budget);
}

std::size_t gsd_qc(int d, int k, int l, const std::vector<int>& periods, std::size_t budget) {
    require_periods(periods);
    const QcMaps m = sigma_qc(d, k, l);
    const std::size_t nq = m.dz.rows * volume(periods);
    if (nq > budget) fail(ErrorKind::Cap, std::to_string(nq) + " qubits exceed the gsd budget");
    const std::size_t coker_x = nq - rank_expanded(m.dx, periods, budget);
    const std::size_t coker_z = nq - rank_expanded(m.dz, periods, budget);
    return coker_x + coker_z - nq;
}

std::optional<long long> table_cc_value(int d, int k, const std::vector<int>& periods) {
    if (d == 3 && k == 1 && periods.size() == 3)
        return static_cast<long long>(periods[0]) * periods[1] * periods[2] + 2;
    if (periods.empty() || !all_equal(periods)) return std::nullopt;
    const long long L = periods[0];
    if (d == 4 && k == 1) return poly_at({8, -12, 16, -8}, L);
    if (d == 5 && k == 1) return poly_at({1, 10, -20, 40, -40, 14}, L);
    if (d == 5 && k == 2) return 4 * ipow(L, 5) + 6;
    if (d == 6 && k == 1) return poly_at({24, -60, 120, -150, 96, -24}, L);
    if (d == 6 && k == 2) return poly_at({1, 24, -60, 160, -240, 204, -74}, L);
    if (d == 2 && k == 0 && periods.size() == 2) return 2 * L - 1;
    return std::nullopt;
}

std::optional<long long> table_qc_value(int d, int k, int l, const std::vector<int>& periods) {
    if (d == 3 && k == 1 && l == 0) return 3;
    if (d == 5 && k == 2 && l == 1) return 10;
    if (periods.empty() || !all_equal(periods)) return std::nullopt;
    const long long L = periods[0];
    if (d == 5 && k == 1 && l == 0) return poly_at({10, -20, 40, -40, 15}, L);
    if (d == 6 && k == 2 && l == 0) return poly_at({24, -60, 160, -240, 210, -79}, L);
    return std::nullopt;
}

CrossCheck gsd_cross_check(const ModelSpec& spec) {
    CrossCheck r;
    r.model = spec.name();
    r.periods = spec.periods;
    const ModelPoly mp = sigma_model(spec);
    std::vector<int> cells;
    for (int L : spec.periods) {
        if (L % mp.supercell) fail(ErrorKind::Constraint, "periods must be multiples of the supercell");
        cells.push_back(L / mp.supercell);
    }
    r.algebraic = gsd_from_maps(mp.maps, cells);
    const CssComplex css = build_css(spec);
    r.homology = homology_basis(css.c, 1).dimension;
    const auto& L = spec.periods;
    const long long sum = std::accumulate(L.begin(), L.end(), 0LL);
    switch (spec.kind) {
        case ModelKind::Qpim2d: r.closed_form = L[0] + L[1] - 1; break;
        case ModelKind::Toric: r.closed_form = spec.d; break;
        case ModelKind::XCube: r.closed_form = 2 * sum - 3; break;
        case ModelKind::Checkerboard: r.closed_form = 2 * sum - 6; break;
        case ModelKind::CC: r.closed_form = table_cc_value(spec.d, spec.k, L); break;
        case ModelKind::QC: r.closed_form = table_qc_value(spec.d, spec.k, spec.l, L); break;
        default: break;
    }
    r.pass = r.algebraic == r.homology &&
             (!r.closed_form || *r.closed_form == static_cast<long long>(r.algebraic));
    return r;
}

SymmetryReport symmetry_generators(int d, int k, const std::vector<int>& periods,
                                   const std::vector<std::pair<std::string, std::vector<LaurentPoly>>>& families) {
    SymmetryReport rep;
    const PolyMatrix s = sigma_cc(d, k);
    if (s.rows * volume(periods) > kGsdBudget) fail(ErrorKind::Cap, "symmetry kernel exceeds the gsd budget");
    const BitMatrix sd = expand(s.dagger(), periods);
    rep.kernel = kernel_basis(sd);
    for (const auto& [name, vec] : families) {
        if (vec.size() != s.rows) fail(ErrorKind::Dimension, "generator family has the wrong number of components");
        rep.family_names.push_back(name);
        rep.in_kernel.push_back(sd.apply(expand_vector(vec, periods)).none());
    }
    return rep;
}

std::vector<std::pair<std::string, std::vector<LaurentPoly>>> families_31(const std::vector<int>& periods) {
    if (periods.size() != 3) fail(ErrorKind::Dimension, "(3,1) families need three periods");
    const LaurentPoly zero(3);
    auto s = [&](int a) { return LaurentPoly::s(3, a, periods[static_cast<std::size_t>(a)]); };
    return {
        {"plane s_y s_z", {s(1) * s(2), zero, zero}},
        {"plane s_x s_z", {zero, s(0) * s(2), zero}},
        {"plane s_x s_y", {zero, zero, s(0) * s(1)}},
        {"six-edge star", {LaurentPoly::one_plus_bar(3, 0), LaurentPoly::one_plus_bar(3, 1), LaurentPoly::one_plus_bar(3, 2)}},
    };
}

}  // namespace css

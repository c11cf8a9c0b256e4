#include "css/pauli.hpp"

#include "css/errors.hpp"

namespace css {

namespace {

int mod4(int p) { return ((p % 4) + 4) % 4; }

void same_size(const PauliOperator& a, const PauliOperator& b) {
    if (a.size() != b.size())
        fail(ErrorKind::Dimension, "pauli size mismatch: " + std::to_string(a.size()) + " vs " +
                                       std::to_string(b.size()));
}

BitVector symplectic(const PauliOperator& p) { return p.x.concat(p.z); }

}  // namespace

PauliOperator PauliOperator::x_op(const BitVector& support) {
    PauliOperator p(support.size());
    p.x = support;
    return p;
}

PauliOperator PauliOperator::z_op(const BitVector& support) {
    PauliOperator p(support.size());
    p.z = support;
    return p;
}

PauliOperator PauliOperator::from_letters(const std::string& letters, int sign) {
    PauliOperator p(letters.size());
    int ys = 0;
    for (std::size_t q = 0; q < letters.size(); ++q) {
        switch (letters[q]) {
            case 'I': break;
            case 'X': p.x.set(q); break;
            case 'Z': p.z.set(q); break;
            case 'Y':
                p.x.set(q);
                p.z.set(q);
                ++ys;
                break;
            default: fail(ErrorKind::Parse, std::string("bad Pauli letter '") + letters[q] + "'");
        }
    }
    // Y = i X Z
    p.phase = mod4(ys + (sign < 0 ? 2 : 0));
    return p;
}

bool PauliOperator::is_hermitian() const { return (phase - static_cast<int>((x & z).weight())) % 2 == 0; }

char PauliOperator::letter(std::size_t q) const {
    const bool a = x.get(q), b = z.get(q);
    return a && b ? 'Y' : a ? 'X' : b ? 'Z' : 'I';
}

std::string PauliOperator::str() const {
    const int c = mod4(phase - static_cast<int>((x & z).weight()));
    std::string s = (c >= 2 ? "-" : "+");
    if (c % 2) s += "i";
    bool any = false;
    for (std::size_t q = 0; q < size(); ++q) {
        const char l = letter(q);
        if (l == 'I') continue;
        s += l;
        s += std::to_string(q);
        any = true;
    }
    if (!any) s += "I";
    return s;
}

bool commutes(const PauliOperator& a, const PauliOperator& b) {
    same_size(a, b);
    return a.z.dot(b.x) == a.x.dot(b.z);
}

PauliOperator multiply(const PauliOperator& a, const PauliOperator& b) {
    same_size(a, b);
    // X^a Z^b X^c Z^d = (-1)^{b.c} X^{a+c} Z^{b+d}
    PauliOperator r(a.size());
    r.x = a.x ^ b.x;
    r.z = a.z ^ b.z;
    r.phase = mod4(a.phase + b.phase + (a.z.dot(b.x) ? 2 : 0));
    return r;
}

void StabilizerSet::add(PauliOperator p, std::string label) {
    if (p.size() != n) fail(ErrorKind::Dimension, "stabilizer generator on wrong qubit count");
    generators.push_back(std::move(p));
    labels.push_back(std::move(label));
}

bool StabilizerSet::all_commute() const {
    for (std::size_t i = 0; i < generators.size(); ++i)
        for (std::size_t j = i + 1; j < generators.size(); ++j)
            if (!commutes(generators[i], generators[j])) return false;
    return true;
}

std::size_t StabilizerSet::symplectic_rank() const {
    std::vector<BitVector> rows;
    for (const auto& g : generators) rows.push_back(symplectic(g));
    return rank_of_vectors(rows, 2 * n);
}

StabilizerSet css_stabilizers(const CssComplex& css) {
    StabilizerSet s;
    s.n = css.nq();
    for (std::size_t a = 0; a < css.nX(); ++a) s.add(PauliOperator::x_op(css.dX().row(a)), "A " + css.c.cells[2][a].str());
    for (std::size_t b = 0; b < css.nZ(); ++b)
        s.add(PauliOperator::z_op(css.dZ().column(b)), "B " + css.c.cells[0][b].str());
    return s;
}

StabilizerSet cluster_stabilizers(const FoliatedComplex& fol) {
    StabilizerSet s;
    const std::size_t n1 = fol.nQ1(), n2 = fol.nQ2();
    s.n = n1 + n2;
    const BitMatrix& d = fol.d1();
    for (std::size_t i = 0; i < n1; ++i) {
        PauliOperator p(s.n);
        p.x.set(i);
        for (auto t : d.column(i).support()) p.z.set(n1 + t);
        s.add(std::move(p), "K Q1 " + fol.c.cells[1][i].str());
    }
    for (std::size_t t = 0; t < n2; ++t) {
        PauliOperator p(s.n);
        p.x.set(n1 + t);
        for (auto i : d.row(t).support()) p.z.set(i);
        s.add(std::move(p), "K Q2 " + fol.c.cells[2][t].str());
    }
    return s;
}

StabilizerSet chamon_stabilizers(const ChamonModel& m) {
    StabilizerSet s;
    s.n = m.vertices.size();
    for (std::size_t c = 0; c < m.cubes.size(); ++c) {
        // O = -Z(a) X(b) = -(-1)^{a.b} X(b) Z(a)
        const BitVector a = m.dc.column(c), b = m.dcp.column(c);
        PauliOperator p(s.n);
        p.x = b;
        p.z = a;
        p.phase = mod4(2 + (a.dot(b) ? 2 : 0));
        s.add(std::move(p), "O " + m.cubes[c].str());
    }
    return s;
}

PauliOperator symmetry_operator(const FoliatedComplex& fol, const BitVector& chain, bool dual) {
    const std::size_t n1 = fol.nQ1(), n2 = fol.nQ2();
    PauliOperator p(n1 + n2);
    if (!dual) {
        if (chain.size() != n1) fail(ErrorKind::Dimension, "Q1 chain has wrong length");
        if (fol.d1().apply(chain).any()) fail(ErrorKind::NotCycle, "Q1 chain is not a cycle");
        for (auto i : chain.support()) p.x.set(i);
    } else {
        if (chain.size() != n2) fail(ErrorKind::Dimension, "Q2 chain has wrong length");
        if (fol.d1().transpose().apply(chain).any()) fail(ErrorKind::NotCycle, "Q2 chain is not a dual cycle");
        for (auto t : chain.support()) p.x.set(n1 + t);
    }
    return p;
}

PauliOperator symmetry_operator(const CssComplex& css, const BitVector& zstar) {
    if (zstar.size() != css.nq()) fail(ErrorKind::Dimension, "dual chain has wrong length");
    if (css.dZ().transpose().apply(zstar).any()) fail(ErrorKind::NotCycle, "chain is not a dual cycle of delta_Z");
    return PauliOperator::x_op(zstar);
}

StabilizerEvaluator::StabilizerEvaluator(const StabilizerSet& s) : set_(s) {
    if (!s.all_commute()) fail(ErrorKind::Precondition, "stabilizer evaluator: generators do not commute");
    std::vector<BitVector> cols;
    for (const auto& g : s.generators) cols.push_back(symplectic(g));
    columns_ = BitMatrix::from_columns(2 * s.n, cols);
    if (rank(columns_) != cols.size()) fail(ErrorKind::Precondition, "stabilizer evaluator: generators dependent");
}

std::complex<double> StabilizerEvaluator::expectation(const PauliOperator& p) const {
    if (p.size() != set_.n) fail(ErrorKind::Dimension, "expectation: pauli on wrong qubit count");
    const auto sel = solve(columns_, symplectic(p));
    if (!sel) return 0.0;
    PauliOperator prod(set_.n);
    for (auto i : sel->support()) prod = multiply(prod, set_.generators[i]);
    // p = i^(p.phase - prod.phase) * prod, and prod has expectation 1
    static const std::complex<double> powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return powers[mod4(p.phase - prod.phase)];
}

}  // namespace css

#include "css/f2.hpp"

#include <algorithm>
#include <bit>

#include "css/errors.hpp"

namespace css {

namespace {

// Index of lowest set bit, or npos.
std::size_t first_set(const BitVector& v) {
    const auto& w = v.words();
    for (std::size_t k = 0; k < w.size(); ++k)
        if (w[k]) return k * 64 + static_cast<std::size_t>(std::countr_zero(w[k]));
    return static_cast<std::size_t>(-1);
}

void check_same(const BitVector& a, const BitVector& b) {
    if (a.size() != b.size())
        fail(ErrorKind::Dimension, "bit vector length mismatch: " + std::to_string(a.size()) + " vs " +
                                       std::to_string(b.size()));
}

}  // namespace

BitVector BitVector::from_string(const std::string& bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i] == '1') v.set(i);
    return v;
}

BitVector BitVector::from_indices(std::size_t n, const std::vector<std::size_t>& idx) {
    BitVector v(n);
    for (auto i : idx) {
        if (i >= n) fail(ErrorKind::Dimension, "index out of range in from_indices");
        v.flip(i);
    }
    return v;
}

BitVector BitVector::ones(std::size_t n) {
    BitVector v(n);
    for (std::size_t i = 0; i < n; ++i) v.set(i);
    return v;
}

BitVector BitVector::from_word(std::size_t n, std::uint64_t w) {
    BitVector v(n);
    if (n == 0) return v;
    if (n < 64) w &= (std::uint64_t{1} << n) - 1;
    v.w_[0] = w;
    return v;
}

BitVector& BitVector::operator^=(const BitVector& o) {
    check_same(*this, o);
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
    return *this;
}

BitVector& BitVector::operator&=(const BitVector& o) {
    check_same(*this, o);
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= o.w_[k];
    return *this;
}

BitVector& BitVector::operator|=(const BitVector& o) {
    check_same(*this, o);
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] |= o.w_[k];
    return *this;
}

bool BitVector::operator<(const BitVector& o) const {
    if (n_ != o.n_) return n_ < o.n_;
    for (std::size_t i = 0; i < n_; ++i)
        if (get(i) != o.get(i)) return !get(i);
    return false;
}

bool BitVector::any() const {
    return std::any_of(w_.begin(), w_.end(), [](std::uint64_t x) { return x != 0; });
}

std::size_t BitVector::weight() const {
    std::size_t c = 0;
    for (auto x : w_) c += static_cast<std::size_t>(std::popcount(x));
    return c;
}

bool BitVector::dot(const BitVector& o) const {
    check_same(*this, o);
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < w_.size(); ++k) acc ^= w_[k] & o.w_[k];
    return std::popcount(acc) & 1;
}

std::vector<std::size_t> BitVector::support() const {
    std::vector<std::size_t> s;
    for (std::size_t k = 0; k < w_.size(); ++k) {
        std::uint64_t x = w_[k];
        while (x) {
            s.push_back(k * 64 + static_cast<std::size_t>(std::countr_zero(x)));
            x &= x - 1;
        }
    }
    return s;
}

std::string BitVector::to_string() const {
    std::string s(n_, '0');
    for (std::size_t i = 0; i < n_; ++i)
        if (get(i)) s[i] = '1';
    return s;
}

BitVector BitVector::concat(const BitVector& tail) const {
    BitVector out(n_ + tail.n_);
    for (auto i : support()) out.set(i);
    for (auto i : tail.support()) out.set(n_ + i);
    return out;
}

BitVector BitVector::slice(std::size_t start, std::size_t len) const {
    if (start + len > n_) fail(ErrorKind::Dimension, "slice out of range");
    BitVector out(len);
    for (std::size_t i = 0; i < len; ++i)
        if (get(start + i)) out.set(i);
    return out;
}

BitMatrix BitMatrix::identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i);
    return m;
}

BitMatrix BitMatrix::from_rows(const std::vector<std::string>& rows) {
    const std::size_t c = rows.empty() ? 0 : rows[0].size();
    BitMatrix m(rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != c) fail(ErrorKind::Dimension, "ragged rows in from_rows");
        m.r_[i] = BitVector::from_string(rows[i]);
    }
    return m;
}

BitMatrix BitMatrix::from_row_vectors(std::size_t cols, const std::vector<BitVector>& rows) {
    BitMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) fail(ErrorKind::Dimension, "row length mismatch");
        m.r_[i] = rows[i];
    }
    return m;
}

BitMatrix BitMatrix::from_columns(std::size_t rows, const std::vector<BitVector>& cols) {
    BitMatrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != rows) fail(ErrorKind::Dimension, "column length mismatch");
        for (auto i : cols[j].support()) m.set(i, j);
    }
    return m;
}

BitVector BitMatrix::column(std::size_t j) const {
    BitVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        if (get(i, j)) c.set(i);
    return c;
}

BitVector BitMatrix::apply(const BitVector& v) const {
    if (v.size() != cols_)
        fail(ErrorKind::Dimension, "matrix-vector: cols " + std::to_string(cols_) + " vs vector " +
                                       std::to_string(v.size()));
    BitVector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        if (r_[i].dot(v)) out.set(i);
    return out;
}

BitMatrix BitMatrix::transpose() const {
    BitMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (auto j : r_[i].support()) t.set(j, i);
    return t;
}

bool BitMatrix::is_zero() const {
    return std::none_of(r_.begin(), r_.end(), [](const BitVector& v) { return v.any(); });
}

BitMatrix BitMatrix::permute_rows(const std::vector<std::size_t>& p) const {
    if (p.size() != rows_) fail(ErrorKind::Dimension, "row permutation size");
    BitMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i) out.r_[i] = r_[p[i]];
    return out;
}

BitMatrix BitMatrix::permute_cols(const std::vector<std::size_t>& p) const {
    if (p.size() != cols_) fail(ErrorKind::Dimension, "column permutation size");
    BitMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (get(i, p[j])) out.set(i, j);
    return out;
}

BitMatrix BitMatrix::hstack(const BitMatrix& right) const {
    if (right.rows_ != rows_) fail(ErrorKind::Dimension, "hstack row mismatch");
    BitMatrix out(rows_, cols_ + right.cols_);
    for (std::size_t i = 0; i < rows_; ++i) out.r_[i] = r_[i].concat(right.r_[i]);
    return out;
}

BitMatrix BitMatrix::vstack(const BitMatrix& below) const {
    if (below.cols_ != cols_) fail(ErrorKind::Dimension, "vstack column mismatch");
    BitMatrix out = *this;
    out.rows_ += below.rows_;
    out.r_.insert(out.r_.end(), below.r_.begin(), below.r_.end());
    return out;
}

std::string BitMatrix::to_string() const {
    std::string s;
    for (std::size_t i = 0; i < rows_; ++i) {
        s += r_[i].to_string();
        s += '\n';
    }
    return s;
}

Echelon rref(const BitMatrix& m) {
    Echelon e{m, {}};
    BitMatrix& a = e.reduced;
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
        std::size_t p = r;
        while (p < a.rows() && !a.get(p, c)) ++p;
        if (p == a.rows()) continue;
        if (p != r) std::swap(a.row(p), a.row(r));
        for (std::size_t i = 0; i < a.rows(); ++i)
            if (i != r && a.get(i, c)) a.row(i) ^= a.row(r);
        e.pivots.push_back(c);
        ++r;
    }
    return e;
}

std::size_t rank(const BitMatrix& m) {
    // Forward elimination only; rank does not need the reduced form.
    BitMatrix a = m;
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
        std::size_t p = r;
        while (p < a.rows() && !a.get(p, c)) ++p;
        if (p == a.rows()) continue;
        if (p != r) std::swap(a.row(p), a.row(r));
        for (std::size_t i = r + 1; i < a.rows(); ++i)
            if (a.get(i, c)) a.row(i) ^= a.row(r);
        ++r;
    }
    return r;
}

std::vector<BitVector> kernel_basis(const BitMatrix& m) {
    const Echelon e = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : e.pivots) is_pivot[p] = true;
    std::vector<BitVector> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        BitVector v(m.cols());
        v.set(f);
        for (std::size_t i = 0; i < e.rank(); ++i)
            if (e.reduced.get(i, f)) v.set(e.pivots[i]);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<BitVector> solve(const BitMatrix& m, const BitVector& b) {
    if (b.size() != m.rows())
        fail(ErrorKind::Dimension, "solve: rhs length " + std::to_string(b.size()) + " vs rows " +
                                       std::to_string(m.rows()));
    BitMatrix aug = m.hstack(BitMatrix::from_columns(m.rows(), {b}));
    const Echelon e = rref(aug);
    if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
    BitVector x(m.cols());
    for (std::size_t i = 0; i < e.rank(); ++i)
        if (e.reduced.get(i, m.cols())) x.set(e.pivots[i]);
    return x;
}

std::size_t coker_dim(const BitMatrix& m) { return m.rows() - rank(m); }

BitMatrix compose(const BitMatrix& a, const BitMatrix& b) {
    if (a.cols() != b.rows())
        fail(ErrorKind::Dimension, "compose: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                       " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    BitMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (auto k : a.row(i).support()) out.row(i) ^= b.row(k);
    return out;
}

std::size_t rank_of_vectors(const std::vector<BitVector>& vs, std::size_t len) {
    return rank(BitMatrix::from_row_vectors(len, vs));
}

bool SpanBuilder::add(const BitVector& v) {
    if (v.size() != len_) fail(ErrorKind::Dimension, "span vector length");
    BitVector r = reduce(v);
    const std::size_t l = first_set(r);
    if (l == static_cast<std::size_t>(-1)) return false;
    for (auto& b : basis_)
        if (b.get(l)) b ^= r;
    basis_.push_back(std::move(r));
    lead_.push_back(l);
    return true;
}

BitVector SpanBuilder::reduce(BitVector v) const {
    for (std::size_t i = 0; i < basis_.size(); ++i)
        if (v.get(lead_[i])) v ^= basis_[i];
    return v;
}

bool SpanBuilder::contains(const BitVector& v) const { return reduce(v).none(); }

}  // namespace css

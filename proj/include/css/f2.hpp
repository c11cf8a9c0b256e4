#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace css {

// Packed vector over F2. Bits at positions >= size() are kept zero.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    static BitVector from_string(const std::string& bits);  // "0110" -> bit i = bits[i]
    static BitVector from_indices(std::size_t n, const std::vector<std::size_t>& idx);
    static BitVector ones(std::size_t n);

    std::size_t size() const { return n_; }
    bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool v = true) {
        const std::uint64_t m = std::uint64_t{1} << (i & 63);
        if (v) w_[i >> 6] |= m; else w_[i >> 6] &= ~m;
    }
    void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    BitVector& operator^=(const BitVector& o);
    BitVector& operator&=(const BitVector& o);
    BitVector& operator|=(const BitVector& o);
    friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
    friend BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }
    friend BitVector operator|(BitVector a, const BitVector& b) { return a |= b; }
    bool operator==(const BitVector& o) const { return n_ == o.n_ && w_ == o.w_; }
    bool operator!=(const BitVector& o) const { return !(*this == o); }
    bool operator<(const BitVector& o) const;

    bool any() const;
    bool none() const { return !any(); }
    std::size_t weight() const;
    bool dot(const BitVector& o) const;  // parity of the overlap
    std::vector<std::size_t> support() const;
    std::string to_string() const;

    // Concatenation and slicing, used for block bookkeeping.
    BitVector concat(const BitVector& tail) const;
    BitVector slice(std::size_t start, std::size_t len) const;

    // First 64 bits as an integer; handy for enumeration code.
    std::uint64_t low_word() const { return w_.empty() ? 0 : w_[0]; }
    static BitVector from_word(std::size_t n, std::uint64_t w);

    const std::vector<std::uint64_t>& words() const { return w_; }
    std::vector<std::uint64_t>& words() { return w_; }

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), r_(rows, BitVector(cols)) {}

    static BitMatrix identity(std::size_t n);
    static BitMatrix from_rows(const std::vector<std::string>& rows);
    static BitMatrix from_row_vectors(std::size_t cols, const std::vector<BitVector>& rows);
    static BitMatrix from_columns(std::size_t rows, const std::vector<BitVector>& cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool get(std::size_t i, std::size_t j) const { return r_[i].get(j); }
    void set(std::size_t i, std::size_t j, bool v = true) { r_[i].set(j, v); }
    void flip(std::size_t i, std::size_t j) { r_[i].flip(j); }
    const BitVector& row(std::size_t i) const { return r_[i]; }
    BitVector& row(std::size_t i) { return r_[i]; }
    BitVector column(std::size_t j) const;

    BitVector apply(const BitVector& v) const;  // M v
    BitMatrix transpose() const;
    bool is_zero() const;
    bool operator==(const BitMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && r_ == o.r_; }
    bool operator!=(const BitMatrix& o) const { return !(*this == o); }

    // Row permutation / column permutation: out row i = in row p[i].
    BitMatrix permute_rows(const std::vector<std::size_t>& p) const;
    BitMatrix permute_cols(const std::vector<std::size_t>& p) const;
    BitMatrix hstack(const BitMatrix& right) const;
    BitMatrix vstack(const BitMatrix& below) const;

    std::string to_string() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<BitVector> r_;
};

// Reduced row echelon form with first-nonzero-column pivoting.
struct Echelon {
    BitMatrix reduced;                  // rows beyond rank are zero
    std::vector<std::size_t> pivots;    // pivot column of row i, i < rank
    std::size_t rank() const { return pivots.size(); }
};

Echelon rref(const BitMatrix& m);
std::size_t rank(const BitMatrix& m);
std::vector<BitVector> kernel_basis(const BitMatrix& m);
std::optional<BitVector> solve(const BitMatrix& m, const BitVector& b);
std::size_t coker_dim(const BitMatrix& m);
BitMatrix compose(const BitMatrix& a, const BitMatrix& b);  // a * b
std::size_t rank_of_vectors(const std::vector<BitVector>& vs, std::size_t len);

// Incremental echelon basis, used to pick representatives modulo a subspace.
class SpanBuilder {
public:
    explicit SpanBuilder(std::size_t len) : len_(len) {}
    bool add(const BitVector& v);           // true if v enlarged the span
    bool contains(const BitVector& v) const;
    BitVector reduce(BitVector v) const;    // remainder after elimination
    std::size_t dim() const { return basis_.size(); }

private:
    std::size_t len_;
    std::vector<BitVector> basis_;
    std::vector<std::size_t> lead_;
};

}  // namespace css

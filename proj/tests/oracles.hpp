#pragma once

// Brute-force reference computations, independent of the elimination code.

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "css/f2.hpp"

namespace oracle {

// Span size of a small set of vectors by enumerating all subset sums.
inline std::size_t span_size(const std::vector<css::BitVector>& vs) {
    std::set<std::vector<std::uint64_t>> seen;
    const std::size_t n = vs.size();
    const std::size_t len = n ? vs[0].size() : 0;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
        css::BitVector acc(len);
        for (std::size_t i = 0; i < n; ++i)
            if (m >> i & 1) acc ^= vs[i];
        seen.insert(acc.words());
    }
    return seen.size();
}

inline std::size_t log2_exact(std::size_t v) {
    std::size_t r = 0;
    while ((std::size_t{1} << r) < v) ++r;
    return r;
}

inline std::size_t brute_rank(const css::BitMatrix& m) {
    std::vector<css::BitVector> rows;
    for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
    return log2_exact(span_size(rows));
}

// Literal matrix-vector product via explicit bit loops.
inline css::BitVector literal_apply(const css::BitMatrix& m, const css::BitVector& v) {
    css::BitVector out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        int s = 0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += m.get(i, j) && v.get(j);
        if (s % 2) out.set(i);
    }
    return out;
}

// Plain Gaussian elimination on byte rows; a second implementation to check rank().
inline std::size_t dense_rank(const css::BitMatrix& m) {
    std::vector<std::vector<std::uint8_t>> a(m.rows(), std::vector<std::uint8_t>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = m.get(i, j);
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < a.size(); ++c) {
        std::size_t p = r;
        while (p < a.size() && !a[p][c]) ++p;
        if (p == a.size()) continue;
        std::swap(a[p], a[r]);
        for (std::size_t i = 0; i < a.size(); ++i)
            if (i != r && a[i][c])
                for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] ^= a[r][j];
        ++r;
    }
    return r;
}

// dim Ker(out) - rank(in), both by the byte-level eliminator.
inline std::size_t homology_dim(const css::BitMatrix* in, const css::BitMatrix* out, std::size_t n) {
    const std::size_t ker = n - (out ? dense_rank(*out) : 0);
    return ker - (in ? dense_rank(*in) : 0);
}

// Number of vectors v with Mv = 0, by enumeration (cols <= ~22).
inline std::size_t kernel_count(const css::BitMatrix& m) {
    std::size_t c = 0;
    for (std::uint64_t w = 0; w < (std::uint64_t{1} << m.cols()); ++w)
        if (literal_apply(m, css::BitVector::from_word(m.cols(), w)).none()) ++c;
    return c;
}

inline css::BitMatrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng, double p = 0.5) {
    std::bernoulli_distribution b(p);
    css::BitMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            if (b(rng)) m.set(i, j);
    return m;
}

inline css::BitVector random_vector(std::size_t n, std::mt19937_64& rng, double p = 0.5) {
    std::bernoulli_distribution b(p);
    css::BitVector v(n);
    for (std::size_t i = 0; i < n; ++i)
        if (b(rng)) v.set(i);
    return v;
}

}  // namespace oracle

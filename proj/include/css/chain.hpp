#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "css/f2.hpp"

namespace css {

// A cell of a cubical complex: base corner, the axes it extends along, and a
// tag separating copies that share geometry (Haah R/B, X-cube vertex copies).
struct CellLabel {
    std::vector<int> coords;
    std::vector<int> ext;  // sorted
    std::string tag;

    bool operator==(const CellLabel& o) const { return coords == o.coords && ext == o.ext && tag == o.tag; }
    bool operator!=(const CellLabel& o) const { return !(*this == o); }
    // Canonical order within a grade: tag, then coords, then extended axes.
    bool operator<(const CellLabel& o) const;
    std::string str() const;
};

// Cochain-direction complex: diffs[i] maps grade i to grade i+1, stored as a
// |grade i+1| x |grade i| matrix acting on column vectors.
struct GradedComplex {
    std::vector<std::string> names;
    std::vector<std::vector<CellLabel>> cells;
    std::vector<BitMatrix> diffs;

    std::size_t num_grades() const { return cells.size(); }
    std::size_t size(std::size_t g) const { return cells.at(g).size(); }
    BitVector zero(std::size_t g) const { return BitVector(size(g)); }
    std::optional<std::size_t> index_of(std::size_t g, const CellLabel& l) const;
    // Outgoing differential of grade g (a 0 x n matrix at the top grade).
    BitMatrix outgoing(std::size_t g) const;
    bool operator==(const GradedComplex& o) const {
        return names == o.names && cells == o.cells && diffs == o.diffs;
    }
};

// Builds a complex from unsorted cell lists and per-grade boundary rules.
// Cells are sorted canonically; targets named by a rule must exist.
using BoundaryRule = std::function<std::vector<CellLabel>(const CellLabel&)>;
GradedComplex make_complex(std::vector<std::string> names, std::vector<std::vector<CellLabel>> cells,
                           const std::vector<BoundaryRule>& rules);

struct ValidationReport {
    bool ok = true;
    std::string message;
    std::size_t grade = 0;        // source grade of the failing composite
    std::size_t source = 0;       // offending source cell index
    std::size_t target = 0;       // offending target cell index (grade + 2)
};

ValidationReport validate(const GradedComplex& c);
GradedComplex dualize(const GradedComplex& c);

// Tensor product with provenance: origin[g][i] = (grade in a, index in a, index in b).
struct ProductComplex {
    GradedComplex complex;
    std::vector<std::vector<std::array<std::size_t, 3>>> origin;
    std::vector<std::map<std::array<std::size_t, 3>, std::size_t>> lookup;
    std::size_t index(std::size_t g, std::size_t ga, std::size_t ia, std::size_t ib) const;
};
ProductComplex tensor_product(const GradedComplex& a, const GradedComplex& b);

// Circle of length L (periodic) or a segment of L unit intervals (open):
// grade 0 = intervals, grade 1 = points, each interval maps to its endpoints.
GradedComplex circle_complex(int L);
GradedComplex segment_complex(int L);

struct CssComplex {
    GradedComplex c;  // grades: Z, q, X
    std::string model;
    std::vector<int> periods;

    std::size_t nZ() const { return c.size(0); }
    std::size_t nq() const { return c.size(1); }
    std::size_t nX() const { return c.size(2); }
    const BitMatrix& dZ() const { return c.diffs[0]; }  // nq x nZ
    const BitMatrix& dX() const { return c.diffs[1]; }  // nX x nq
};

enum class WBoundary { Periodic, Open };

// Where a foliated cell came from: css grade (0=Z,1=q,2=X), css index,
// point-or-interval along w, and the w coordinate.
struct FolOrigin {
    int css_grade = 0;
    std::size_t css_index = 0;
    bool point = true;
    int w = 0;
};

struct FoliatedComplex {
    GradedComplex c;  // grades: Zw, Q1, Q2, X
    CssComplex css;
    WBoundary boundary = WBoundary::Periodic;
    int Lw = 1;
    std::vector<std::vector<FolOrigin>> origin;

    std::size_t nQ1() const { return c.size(1); }
    std::size_t nQ2() const { return c.size(2); }
    const BitMatrix& d1() const { return c.diffs[1]; }  // Q1 -> Q2
    std::size_t n_points() const { return boundary == WBoundary::Periodic ? Lw : Lw + 1; }
    std::size_t index(std::size_t g, int css_grade, std::size_t css_index, bool point, int w) const;
};

FoliatedComplex foliate(const CssComplex& css, int Lw, WBoundary boundary);

struct HomologyBasis {
    std::size_t grade = 0;
    std::vector<BitVector> reps;
    std::size_t dimension = 0;
};

HomologyBasis homology_basis(const GradedComplex& c, std::size_t grade);
bool intersection(const BitVector& a, const BitVector& b);
BitMatrix pairing_matrix(const HomologyBasis& h, const HomologyBasis& hdual);
// Preimage under the incoming differential, or nullopt for a nontrivial class.
std::optional<BitVector> is_boundary(const GradedComplex& c, std::size_t grade, const BitVector& v);
bool is_cycle(const GradedComplex& c, std::size_t grade, const BitVector& v);

std::string complex_to_json(const GradedComplex& c, int indent = -1);
GradedComplex complex_from_json(const std::string& text);

}  // namespace css

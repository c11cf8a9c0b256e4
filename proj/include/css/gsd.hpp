#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "css/chain.hpp"
#include "css/f2.hpp"
#include "css/models.hpp"

namespace css {

// Laurent polynomial over F2 in d variables; exponents stay symbolic until
// expansion reduces them mod the periods.
struct LaurentPoly {
    int d = 0;
    std::set<std::vector<int>> terms;

    LaurentPoly() = default;
    explicit LaurentPoly(int nvars) : d(nvars) {}
    static LaurentPoly one(int d);
    static LaurentPoly monomial(const std::vector<int>& e);
    static LaurentPoly one_plus(int d, int axis);       // 1 + x_axis
    static LaurentPoly one_plus_bar(int d, int axis);   // 1 + x_axis^-1
    static LaurentPoly s(int d, int axis, int L);       // sum_{i<L} x_axis^i

    bool is_zero() const { return terms.empty(); }
    void toggle(const std::vector<int>& e);
    LaurentPoly antipode() const;
    LaurentPoly& operator+=(const LaurentPoly& o);
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
    bool operator==(const LaurentPoly& o) const { return d == o.d && terms == o.terms; }
    std::string str() const;
};

struct PolyMatrix {
    int d = 0;
    std::size_t rows = 0, cols = 0;
    std::vector<LaurentPoly> e;  // row-major

    PolyMatrix() = default;
    PolyMatrix(int nvars, std::size_t r, std::size_t c) : d(nvars), rows(r), cols(c), e(r * c, LaurentPoly(nvars)) {}
    LaurentPoly& at(std::size_t i, std::size_t j) { return e[i * cols + j]; }
    const LaurentPoly& at(std::size_t i, std::size_t j) const { return e[i * cols + j]; }
    PolyMatrix dagger() const;  // transpose then antipode
    friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b);
    bool operator==(const PolyMatrix& o) const { return d == o.d && rows == o.rows && cols == o.cols && e == o.e; }
};

// Basis index = position * types + type, position linear with axis 0 most
// significant. A column vector of polynomials expands to its image at the origin.
BitMatrix expand(const PolyMatrix& m, const std::vector<int>& periods);
BitVector expand_vector(const std::vector<LaurentPoly>& v, const std::vector<int>& periods);

// Types are subsets of axes. Rows of sigma_cc are k-subsets in lexicographic
// order; columns are (d-k)-subsets ordered by their removed axes, except (3,1)
// which uses xy, yz, zx.
std::vector<std::vector<int>> cc_row_types(int d, int k);
std::vector<std::vector<int>> cc_column_types(int d, int k);
PolyMatrix sigma_cc(int d, int k);

struct QcMaps {
    PolyMatrix dz;  // qubit types x Z types
    PolyMatrix dx;  // qubit types x X types (adjoint of the X check map)
};
QcMaps sigma_qc(int d, int k, int l);

// Polynomial forms of the other lattice models, in units of `supercell`.
struct ModelPoly {
    QcMaps maps;
    int supercell = 1;
};
ModelPoly sigma_model(const ModelSpec& spec);

inline constexpr std::size_t kGsdBudget = 5000;

// log2 GSD = #qubits - rank(dz) - rank(dx), on expanded matrices.
std::size_t gsd_from_maps(const QcMaps& m, const std::vector<int>& periods, std::size_t budget = kGsdBudget);
std::size_t gsd_cc(int d, int k, const std::vector<int>& periods, std::size_t budget = kGsdBudget);
std::size_t gsd_qc(int d, int k, int l, const std::vector<int>& periods, std::size_t budget = kGsdBudget);

// Published closed forms; nullopt when no formula applies to the periods.
std::optional<long long> table_cc_value(int d, int k, const std::vector<int>& periods);
std::optional<long long> table_qc_value(int d, int k, int l, const std::vector<int>& periods);

struct CrossCheck {
    std::string model;
    std::vector<int> periods;
    std::size_t algebraic = 0;  // from the polynomial matrices
    std::size_t homology = 0;   // from the chain complex
    std::optional<long long> closed_form;
    bool pass = false;
};
CrossCheck gsd_cross_check(const ModelSpec& spec);

struct SymmetryReport {
    std::vector<BitVector> kernel;  // basis of Ker expand(sigma_Z^dagger)
    std::vector<std::string> family_names;
    std::vector<bool> in_kernel;
};
// Kernel of the symmetry map plus a membership check for listed generator
// families (given as polynomial column vectors).
SymmetryReport symmetry_generators(int d, int k, const std::vector<int>& periods,
                                   const std::vector<std::pair<std::string, std::vector<LaurentPoly>>>& families = {});
// Generator families of the (3,1) model: three planes and the six-edge star.
std::vector<std::pair<std::string, std::vector<LaurentPoly>>> families_31(const std::vector<int>& periods);

}  // namespace css

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "css/chain.hpp"
#include "css/f2.hpp"
#include "css/pauli.hpp"
#include "css/statesim.hpp"
#include "css/statmech.hpp"

namespace css {

// Foliated complex times the time circle. Grade 2 is the defect portion
// Q1 x points + Q2 x intervals; grade 1 and grade 3 hold the gauge chains.
// Time labels are doubled: point k -> 2k, interval [k,k+1] -> 2k+1.
struct Spacetime {
    FoliatedComplex fol;
    int Ltau = 1;
    ProductComplex prod;

    const GradedComplex& c() const { return prod.complex; }
    // fol_grade 0..3 with tau_point selecting points or intervals along time
    std::size_t cell(std::size_t fol_grade, std::size_t fol_index, bool tau_point, int k) const;
    int time2(std::size_t grade, std::size_t index) const;
    // Fol grade and index of a spacetime cell, plus whether it sits on a time point.
    std::size_t fol_grade(std::size_t grade, std::size_t index) const { return prod.origin[grade][index][0]; }
    std::size_t fol_index(std::size_t grade, std::size_t index) const { return prod.origin[grade][index][1]; }
    bool on_point(std::size_t grade, std::size_t index) const;
    // w-boundary end (0 for w = 0, 1 for w = L_w) of a cell, or -1 if interior
    // or if the foliation is periodic.
    int w_end(std::size_t grade, std::size_t index) const;
};
Spacetime build_spacetime(const CssComplex& css, int Lw, WBoundary boundary, int Ltau);

// CSS complex times the time circle: the spacetime of one boundary.
struct BoundarySpacetime {
    CssComplex css;
    int Ltau = 1;
    ProductComplex prod;
    const GradedComplex& c() const { return prod.complex; }
    std::size_t cell(std::size_t css_grade, std::size_t css_index, bool tau_point, int k) const;
};
BoundarySpacetime build_boundary_spacetime(const CssComplex& css, int Ltau);

enum class DefectKind { Cycle, DualCycle };

struct DefectChain {
    DefectKind kind = DefectKind::Cycle;
    BitVector chain;                     // spacetime grade 2
    std::vector<BitVector> at_point;     // Q1 chain at time k
    std::vector<BitVector> on_interval;  // Q2 chain on [k,k+1]
    BitVector rel_boundary;              // d' chain (grade 3), nonzero only on the w ends
};
// Slices the chain and re-verifies the recursions; NotCycle names the slice.
DefectChain decompose_defect(const Spacetime& st, DefectKind kind, const BitVector& chain);
// Inverse of the slicing, for defects written slice by slice.
BitVector assemble_defect(const Spacetime& st, const std::vector<BitVector>& at_point,
                          const std::vector<BitVector>& on_interval);

// Bases of relative cycles and dual cycles in grade 2.
std::vector<BitVector> relative_cycle_basis(const Spacetime& st);
std::vector<BitVector> dual_cycle_basis(const Spacetime& st);

int partition_intersection(const DefectChain& z, const DefectChain& zstar);

enum class TraceMethod { Auto, Dense, Stabilizer };

// Z(z^(0)) Z(z*^(0)) |psi_C> and the time-ordered insertion operator.
struct BulkOperators {
    PauliOperator excite;    // applied to the cluster state
    PauliOperator inserted;  // time-ordered product, latest on the left
};
BulkOperators bulk_operators(const Spacetime& st, const DefectChain& z, const DefectChain& zstar);

// <E| O |E>, by dense state vector or by the stabilizer formalism.
class BulkTrace {
public:
    BulkTrace(const Spacetime& st, TraceMethod method = TraceMethod::Auto, std::size_t cap = kDefaultQubitCap);
    double operator()(const DefectChain& z, const DefectChain& zstar) const;
    bool dense() const { return dense_; }

private:
    const Spacetime* st_;
    bool dense_ = false;
    StateVector psi_;
    std::optional<StabilizerEvaluator> eval_;
};
double partition_operator_trace(const Spacetime& st, const DefectChain& z, const DefectChain& zstar,
                                TraceMethod method = TraceMethod::Auto, std::size_t cap = kDefaultQubitCap);

// Boundary slices seen at one w end (0 or 1) of a relative cycle and dual cycle.
BoundarySlices boundary_slices(const Spacetime& st, const DefectChain& z, const DefectChain& zstar, int end);
// Embeds a boundary chain of grade g at the given w end as a spacetime chain of grade g+1.
BitVector embed_boundary_chain(const Spacetime& st, const BoundarySpacetime& b, std::size_t grade, const BitVector& v,
                               int end);
// Boundary slices from chains on the boundary spacetime: z in grade 2, z* in grade 1.
BoundarySlices slices_from_chains(const BoundarySpacetime& b, const BitVector& z, const BitVector& zstar);

inline constexpr std::size_t kBoundaryQubitCap = 12;
// Tr[Z(c_q) X(c*) ... P(z_X, z*_Z)] with P built from the stabilizer projectors.
double boundary_partition_trace(const CssComplex& css, const BoundarySlices& s, std::size_t cap = kBoundaryQubitCap);

struct InflowTrial {
    std::uint64_t seed = 0;
    bool dual = false;
    double bulk_before = 0, bulk_after = 0;
    int bulk_ratio = 0;        // from re-evaluating the bulk trace
    int bulk_formula = 0;      // closed-form intersection phase
    int boundary_ratio = 0;    // product over both ends, from boundary traces
    int boundary_formula = 0;  // product over both ends, closed form
    std::size_t good_dim_z = 0, good_dim_zstar = 0;  // dimensions of the sampled subspaces
    bool pass = false;
};
// Random relative cycle, dual cycle and gauge change on an open-w spacetime;
// compares the bulk phase ratio with the boundary phase ratios. Defects are drawn
// uniformly from the subspaces on which both boundary traces are nonzero, since
// a ratio is undefined otherwise. The gauge change is a random primal shift
// (dc + c at w=0 + c' at w=L_w) or dual shift (d^T c*), chosen by the seed.
InflowTrial inflow_trial(const Spacetime& st, const BulkTrace& trace, std::uint64_t seed);

struct ClosedTrial {
    std::uint64_t seed = 0;
    int trace = 0;
    int intersection = 0;
    bool pass = false;
};
// Random cycle and dual cycle on a periodic spacetime.
ClosedTrial closed_trial(const Spacetime& st, const BulkTrace& trace, std::uint64_t seed);

// A spatial logical membrane at time 0 against a static dual logical: intersection
// parity is the pairing of the two representatives.
std::pair<DefectChain, DefectChain> linked_pair(const Spacetime& st);

// Projects Z(zQ2) Z(z*Q1)|psi_C> on an open foliation onto <+| away from the two
// boundary q layers and checks the boundary eigenvalue equations and the two-end
// correlations. Dense projection, or (Stabilizer) each boundary operator A is
// completed to a stabilizer A X(B) with B in the bulk, whose eigenvalue it inherits.
struct BoundaryStateReport {
    bool dense = false;
    std::size_t checks = 0;
    double max_deviation = 0;
    std::vector<std::string> failures;
};
BoundaryStateReport boundary_state_check(const FoliatedComplex& fol, const BitVector& zQ2, const BitVector& zstarQ1,
                                         TraceMethod method = TraceMethod::Auto, std::size_t cap = kDefaultQubitCap);

}  // namespace css

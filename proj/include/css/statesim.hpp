#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "css/chain.hpp"
#include "css/models.hpp"
#include "css/pauli.hpp"

namespace css {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

inline constexpr std::size_t kDefaultQubitCap = 24;
inline constexpr std::size_t kDenseKwCap = 20;

// Qubit q is bit q of the basis index.
struct StateVector {
    std::size_t n = 0;
    std::vector<cplx> amp;

    static StateVector zeros(std::size_t n, std::size_t cap = kDefaultQubitCap);  // |0...0>
    static StateVector plus(std::size_t n, std::size_t cap = kDefaultQubitCap);   // |+...+>
    static StateVector from_amplitudes(std::vector<cplx> a);
    double norm2() const;
    void normalize();
};

void check_cap(std::size_t n, std::size_t cap, const std::string& what);

void apply_cz(StateVector& s, std::size_t q1, std::size_t q2);
void apply_controlled_pauli(StateVector& s, std::size_t ctrl, std::size_t target, char letter);
void apply_pauli(StateVector& s, const PauliOperator& p);
cplx inner(const StateVector& a, const StateVector& b);  // <a|b>
double fidelity(const StateVector& a, const StateVector& b);
// Tensor product: a on the low qubits, b on the high ones.
StateVector tensor(const StateVector& a, const StateVector& b);

// Diagonal CZ network applied in one pass: edges (i, j).
void apply_cz_network(StateVector& s, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

// Cluster state on Q1 (low qubits) then Q2.
StateVector build_cluster_state(const FoliatedComplex& fol, std::size_t cap = kDefaultQubitCap);

// Controlled-Pauli entangler sum_a |a><a| (x) P(a) with P(a) = prod_{b in a} P_b.
// Control register: the gauge/output side; target register: the matter side.
struct Entangler {
    std::size_t n_ctrl = 0, n_target = 0;
    std::vector<PauliOperator> per_control;  // P_b acting on the target register
    BitMatrix zpart;                         // n_target x n_ctrl: Z-part columns of P_b

    static Entangler from_css(const CssComplex& css);     // controls Z cells, targets q
    static Entangler from_chamon(const ChamonModel& m);   // controls cubes, targets vertices
    PauliOperator combined(const BitVector& a) const;     // P(a), ordered by control index
};

// Applies the entangler to a joint state with controls on the low qubits.
void apply_entangler(StateVector& s, const Entangler& e);

// KW = <+|^target U |+>^ctrl, mapping target states to control states.
struct KwMap {
    std::size_t domain_qubits = 0, codomain_qubits = 0;
    CMatrix m;  // 2^codomain x 2^domain
};

KwMap kw_build(const Entangler& e, std::size_t dense_cap = kDenseKwCap);
KwMap kw_build(const CssComplex& css, std::size_t dense_cap = kDenseKwCap);
CMatrix kw_dagger(const KwMap& kw);
// Action of the entangler protocol without forming the matrix.
StateVector kw_apply(const Entangler& e, const StateVector& target_state, std::size_t cap = kDefaultQubitCap);
StateVector kw_dagger_apply(const Entangler& e, const StateVector& ctrl_state, std::size_t cap = kDefaultQubitCap);

// Left/right multiplication of a dense operator by a Pauli on 2^n dimensions.
CMatrix pauli_times(const PauliOperator& p, const CMatrix& m);
CMatrix times_pauli(const CMatrix& m, const PauliOperator& p);
CMatrix pauli_matrix(const PauliOperator& p);

struct RelationReport {
    double max_deviation = 0;
    std::size_t checks = 0;
};
// The four intertwining relations of a CSS KW map.
RelationReport kw_relations(const CssComplex& css, const KwMap& kw);

struct FusionReport {
    double dev_forward = 0;   // |KW KW^+ - 2^-nc sum X(z)|
    double dev_backward = 0;  // |KW^+ KW - 2^-nt sum X(z*)|
    std::size_t forward_terms = 0, backward_terms = 0;
    int negative_signs = 0;   // group elements z with <+|P(z)|+> = -1
};
FusionReport fusion_check(const Entangler& e, std::size_t dense_cap = kDenseKwCap);

// Every element of the span of the given basis.
std::vector<BitVector> span_elements(const std::vector<BitVector>& basis, std::size_t len);

// Random state on n qubits projected onto the +1 space of X(g) for g in the group.
StateVector random_symmetric_state(std::size_t n, const std::vector<BitVector>& group_basis, std::mt19937_64& rng);
bool is_symmetric(const StateVector& s, const std::vector<BitVector>& group_basis, double tol = 1e-9);

// X-basis measurement of qubit q; the qubit is removed from the register.
// Returns the outcome bit (1 means -1) and leaves the normalized post-measurement state.
int measure_x(StateVector& s, std::size_t q, std::mt19937_64& rng, int forced = -1);

struct MeasurementRecord {
    std::vector<std::string> cells;
    BitVector outcome;
    std::uint64_t seed = 0;
};

struct ProtocolResult {
    StateVector output;
    MeasurementRecord record;
    BitVector correction;      // chain the correcting X acts on
    bool outcome_is_cycle = true;
    bool correctable = true;
    double fidelity = 0;       // against the ideal KW (or KW^dagger) image
};

// Gauging: input on q, output on Z; measures q in the X basis and corrects with X(c_Z).
ProtocolResult gauging_protocol(const CssComplex& css, const StateVector& input, std::uint64_t seed,
                                bool force_plus = false, std::size_t cap = kDefaultQubitCap);
// Chamon: input on cubes, output on vertices; measures cubes and corrects with X(c_v).
ProtocolResult chamon_protocol(const ChamonModel& m, const StateVector& input, std::uint64_t seed,
                               bool force_plus = false, std::size_t cap = kDefaultQubitCap);

// Product bra: per qubit (b0, b1) so the bra is sum_x b_{x} <x|.
using ProductBra = std::vector<std::array<cplx, 2>>;
cplx overlap(const ProductBra& bra, const StateVector& s);
std::array<cplx, 2> bra_plus();
std::array<cplx, 2> bra_zero_expKX(double K);  // <0| e^{K X}

// Projects the listed qubits onto <+| and removes them.
StateVector project_plus(const StateVector& s, const std::vector<std::size_t>& qubits);

void dump_state(const StateVector& s, const std::string& path);
StateVector load_state(const std::string& path);

}  // namespace css

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "css/chain.hpp"
#include "css/f2.hpp"
#include "css/statesim.hpp"

namespace css {

inline constexpr std::size_t kSpinCap = 30;
inline constexpr std::size_t kSectorCap = 4096;
inline constexpr std::size_t kBfBitCap = 26;

struct PartitionResult {
    double value = 0;
    double log_value = 0;
    std::uint64_t config_count = 0;
    std::vector<double> couplings;
};

// Ising-type model: bond b multiplies the spins listed in bonds[b].spins and
// carries coupling classes[bonds[b].cls], sign-flipped when bonds[b].flip.
struct Bond {
    std::vector<std::size_t> spins;
    std::size_t cls = 0;
    bool flip = false;
};
struct BondModel {
    std::size_t n_spins = 0;
    std::vector<Bond> bonds;
    std::vector<double> classes;
};

// Exact sum over all 2^n spin configurations, accumulated relative to the
// largest possible weight and reduced pairwise.
PartitionResult evaluate(const BondModel& m, std::size_t cap = kSpinCap);

double dual_coupling(double K);  // K* = -1/2 log tanh K

// Spins on Z cells, one bond per qubit (its row of dZ).
BondModel z_model(const CssComplex& css, double K);
PartitionResult z_Z(const CssComplex& css, double K, std::size_t cap = kSpinCap);

struct TwistSector {
    BitVector rep;
    std::size_t index = 0;  // bit mask over the class basis
};
// Classes of Ker dZ^T / Im dX^T; all 2^dim sums of the chosen basis.
std::vector<TwistSector> twist_sectors(const CssComplex& css, std::size_t cap = kSectorCap);

// Spins on X cells, one bond per qubit (its column of dX), flipped on the twist.
BondModel x_twisted_model(const CssComplex& css, double Kstar, const BitVector& twist);
PartitionResult z_X_twisted(const CssComplex& css, double Kstar, const BitVector& twist, std::size_t cap = kSpinCap);

// lhs against both the printed prefactor and the one from the
// high-temperature expansion (see README).
struct DualityReport {
    double lhs = 0;
    double sector_sum = 0;
    double log_prefactor_printed = 0;
    double log_prefactor_derived = 0;
    double residual_printed = 0;
    double residual_derived = 0;
    std::size_t sectors = 0;
    std::size_t sector_dim = 0;
    std::vector<double> sector_values;
};
DualityReport check_twisted_duality(const CssComplex& css, double K, std::size_t cap = kSpinCap);

struct StrangeReport {
    double partition = 0;
    double overlap = 0;
    double log_normalization = 0;  // log of the counting constant
    double residual = 0;           // |N * overlap - Z| / Z
};
// Overlap of prod <0|e^{KX}| with KW^dagger |+>^Z, against Z_Z(K).
StrangeReport strange_correlator(const CssComplex& css, double K, std::size_t qubit_cap = kDefaultQubitCap);
// Relative spread of Z/overlap over several couplings.
double strange_normalization_spread(const CssComplex& css, const std::vector<double>& Ks);

// Foliated models: spins on Q2 with bonds per Q1 cell (column of d1), coupling
// J on Z-point cells and K on q-interval cells.
BondModel foliated_model(const FoliatedComplex& fol, double J, double K);
PartitionResult foliated_Z(const FoliatedComplex& fol, double J, double K, std::size_t cap = kSpinCap);
// Dual: spins on Zw with bonds per Q1 cell (row of the first differential).
BondModel foliated_dual_model(const FoliatedComplex& fol, double Jstar, double Kstar, const BitVector& twist);
PartitionResult foliated_dual_twisted(const FoliatedComplex& fol, double Jstar, double Kstar, const BitVector& twist,
                                      std::size_t cap = kSpinCap);
std::vector<TwistSector> foliated_twist_sectors(const FoliatedComplex& fol, std::size_t cap = kSectorCap);
DualityReport check_foliated_duality(const FoliatedComplex& fol, double J, double K, std::size_t cap = kSpinCap);
// <Omega(J,K)|psi_C> * 2^{|Q2|} * 2^{|Q1|/2} against the foliated sum.
StrangeReport foliated_strange_correlator(const FoliatedComplex& fol, double J, double K,
                                          std::size_t qubit_cap = kDefaultQubitCap);

// Boundary defect data over L_tau time steps, index k = 0..L_tau-1:
// cq[k] on the point k, zX[k] on [k,k+1], zZ[k] on the point k, cstar[k] on [k,k+1].
struct BoundarySlices {
    int Ltau = 1;
    std::vector<BitVector> cq, zX, zZ, cstar;
    static BoundarySlices empty(const CssComplex& css, int Ltau);
};
// Checks the slice recursions; throws NotCycle naming the slice.
void validate_slices(const CssComplex& css, const BoundarySlices& s);

// Indices are times mod L_tau: aq[k], bX[k] sit at k; bq[k], aZ[k] at k+1/2.
struct BfConfig {
    std::vector<BitVector> aq, bq, aZ, bX;
};
// Parity of the BF action for one configuration.
bool bf_phase(const CssComplex& css, const BoundarySlices& s, const BfConfig& cfg);

struct BfResult {
    long long raw = 0;            // signed count of configurations
    double normalized_printed = 0;  // raw / 2^{|X|+|Z|}
    double normalized_derived = 0;  // raw / 2^{L_tau (|X|+|Z|+|q|)}
    std::uint64_t terms = 0;
    std::size_t bits = 0;
};
BfResult bf_partition(const CssComplex& css, const BoundarySlices& s, std::size_t bit_cap = kBfBitCap);

// Gauge shifts: alpha[k] in C_Z acts on aq[k] and the two adjacent aZ; beta[k]
// in C_X acts on bq[k] and the two adjacent bX.
BfConfig bf_shift_alpha(const CssComplex& css, BfConfig cfg, const std::vector<BitVector>& alpha);
BfConfig bf_shift_beta(const CssComplex& css, BfConfig cfg, const std::vector<BitVector>& beta);

struct BfGaugeReport {
    std::vector<std::string> names;
    std::vector<bool> invariant;
    bool all() const;
};
// One random configuration and one random shift per family, for the given seed.
BfGaugeReport bf_gauge_check(const CssComplex& css, const BoundarySlices& s, std::uint64_t seed);

}  // namespace css

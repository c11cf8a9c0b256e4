#pragma once

#include <complex>
#include <string>
#include <vector>

#include "css/chain.hpp"
#include "css/f2.hpp"
#include "css/models.hpp"

namespace css {

// i^phase * X^x * Z^z, with X factors written to the left of Z factors.
struct PauliOperator {
    BitVector x, z;
    int phase = 0;  // mod 4

    PauliOperator() = default;
    explicit PauliOperator(std::size_t n) : x(n), z(n) {}
    static PauliOperator x_op(const BitVector& support);
    static PauliOperator z_op(const BitVector& support);
    // Letters 'I','X','Y','Z' per qubit, with an overall sign.
    static PauliOperator from_letters(const std::string& letters, int sign = +1);

    std::size_t size() const { return x.size(); }
    bool is_identity() const { return x.none() && z.none(); }
    bool is_hermitian() const;
    char letter(std::size_t q) const;
    // "+X0Z3Y5", "-iY2", "+I" ...
    std::string str() const;
    bool operator==(const PauliOperator& o) const { return x == o.x && z == o.z && (phase - o.phase) % 4 == 0; }
};

bool commutes(const PauliOperator& a, const PauliOperator& b);
PauliOperator multiply(const PauliOperator& a, const PauliOperator& b);  // a * b

struct StabilizerSet {
    std::size_t n = 0;
    std::vector<PauliOperator> generators;
    std::vector<std::string> labels;

    void add(PauliOperator p, std::string label);
    bool all_commute() const;
    std::size_t symplectic_rank() const;
};

StabilizerSet css_stabilizers(const CssComplex& css);
// Qubits: Q1 cells then Q2 cells.
StabilizerSet cluster_stabilizers(const FoliatedComplex& fol);
StabilizerSet chamon_stabilizers(const ChamonModel& m);

// X on a Q1 cycle (dual = false) or a Q2 dual cycle (dual = true), on the
// cluster-state qubit register. Rejects non-cycles.
PauliOperator symmetry_operator(const FoliatedComplex& fol, const BitVector& chain, bool dual);
// X(z*) on the code qubits for a dual cycle of delta_Z.
PauliOperator symmetry_operator(const CssComplex& css, const BitVector& zstar);

// Expectation values in the stabilizer formalism: for a commuting independent
// set S, returns Tr(Pi P)/Tr(Pi) with Pi the projector onto the joint +1 space.
// This is the expectation in the stabilizer state when S is complete.
class StabilizerEvaluator {
public:
    explicit StabilizerEvaluator(const StabilizerSet& s);
    std::complex<double> expectation(const PauliOperator& p) const;

private:
    StabilizerSet set_;
    BitMatrix columns_;  // 2n x m: generator (x|z) vectors as columns
};

}  // namespace css

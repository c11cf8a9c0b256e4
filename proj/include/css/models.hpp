#pragma once

#include <string>
#include <vector>

#include "css/chain.hpp"

namespace css {

enum class ModelKind { Toric, Qpim2d, XCube, Checkerboard, Haah, CC, QC, Chamon };

struct ModelSpec {
    ModelKind kind = ModelKind::Toric;
    int d = 2, k = 0, l = 0;        // lattice dimension and cc/qc cell degrees
    std::vector<int> periods;
    double lambda = 1.0;            // transverse-field coupling, carried as metadata

    std::string name() const;       // canonical CLI name, e.g. "cc:3,1"
    int dim() const { return d; }
};

// Parses "toric2d", "qpim2d", "xcube", "checkerboard", "haah", "cc:d,k",
// "qc:d,k,l", "chamon". Periods are left empty.
ModelSpec parse_model(const std::string& name);
// A single period is broadcast to every axis.
ModelSpec with_periods(ModelSpec spec, const std::vector<int>& L);

long long binomial(int n, int r);

CssComplex build_toric(int d, const std::vector<int>& L);
CssComplex build_qpim2d(int Lx, int Ly);
CssComplex build_xcube(int Lx, int Ly, int Lz);
CssComplex build_checkerboard(const std::vector<int>& L);
CssComplex build_haah(const std::vector<int>& L);
CssComplex build_cc(int d, int k, const std::vector<int>& L);
CssComplex build_qc(int d, int k, int l, const std::vector<int>& L);
CssComplex build_css(const ModelSpec& spec);  // rejects chamon

// Chamon model: qubits on vertices, one XXYYZZ stabilizer per cube.
struct ChamonModel {
    int L = 2;
    std::vector<CellLabel> vertices;
    std::vector<CellLabel> cubes;
    BitMatrix dc;    // vertices x cubes: Z-support of each stabilizer
    BitMatrix dcp;   // vertices x cubes: X-support of each stabilizer
    // letters[c][v] in {'I','X','Y','Z'} for vertex v of cube c
    std::vector<std::vector<char>> letters;
};
ChamonModel build_chamon(int L);

// Cubical-lattice helpers shared with the gsd module.
std::vector<CellLabel> cubic_cells(int d, int m, const std::vector<int>& L, const std::string& tag = "");
std::vector<CellLabel> cubic_faces(const CellLabel& cell, int k, const std::vector<int>& L);
std::vector<std::vector<int>> axis_subsets(int d, int m);  // lexicographic
std::size_t linear_position(const std::vector<int>& coords, const std::vector<int>& L);

}  // namespace css

#include "css/models.hpp"

#include <algorithm>
#include <regex>

#include "css/errors.hpp"

namespace css {

namespace {

int wrap(int x, int L) { return ((x % L) + L) % L; }

void check_periods(const std::vector<int>& L, int d, const std::string& who) {
    if (static_cast<int>(L.size()) != d)
        fail(ErrorKind::Dimension, who + ": expected " + std::to_string(d) + " periods, got " +
                                       std::to_string(L.size()));
    for (int p : L)
        if (p < 2) fail(ErrorKind::Constraint, who + ": periods must be >= 2, got " + std::to_string(p));
}

CellLabel point(std::vector<int> c, const std::string& tag = "") { return CellLabel{std::move(c), {}, tag}; }

CellLabel shifted(const CellLabel& base, const std::vector<int>& off, const std::vector<int>& L,
                  std::vector<int> ext, const std::string& tag) {
    CellLabel l;
    l.coords = base.coords;
    for (std::size_t i = 0; i < L.size(); ++i) l.coords[i] = wrap(l.coords[i] + off[i], static_cast<int>(L[i]));
    l.ext = std::move(ext);
    l.tag = tag;
    return l;
}

CssComplex finish(GradedComplex g, const std::string& model, const std::vector<int>& L) {
    auto rep = validate(g);
    if (!rep.ok) fail(ErrorKind::Internal, model + ": " + rep.message);
    return CssComplex{std::move(g), model, L};
}

const std::vector<std::string> kCssNames{"Z", "q", "X"};

}  // namespace

std::string ModelSpec::name() const {
    switch (kind) {
        case ModelKind::Toric: return "toric" + std::to_string(d) + "d";
        case ModelKind::Qpim2d: return "qpim2d";
        case ModelKind::XCube: return "xcube";
        case ModelKind::Checkerboard: return "checkerboard";
        case ModelKind::Haah: return "haah";
        case ModelKind::CC: return "cc:" + std::to_string(d) + "," + std::to_string(k);
        case ModelKind::QC:
            return "qc:" + std::to_string(d) + "," + std::to_string(k) + "," + std::to_string(l);
        case ModelKind::Chamon: return "chamon";
    }
    return "?";
}

ModelSpec parse_model(const std::string& name) {
    ModelSpec s;
    std::smatch m;
    static const std::regex toric_re(R"(toric(\d+)d)");
    static const std::regex cc_re(R"(cc:(\d+),(\d+))");
    static const std::regex qc_re(R"(qc:(\d+),(\d+),(\d+))");
    if (std::regex_match(name, m, toric_re)) {
        s.kind = ModelKind::Toric;
        s.d = std::stoi(m[1]);
        if (s.d < 2) fail(ErrorKind::Constraint, "toric code needs d >= 2");
    } else if (name == "qpim2d") {
        s.kind = ModelKind::Qpim2d;
        s.d = 2;
    } else if (name == "xcube") {
        s.kind = ModelKind::XCube;
        s.d = 3;
    } else if (name == "checkerboard") {
        s.kind = ModelKind::Checkerboard;
        s.d = 3;
    } else if (name == "haah") {
        s.kind = ModelKind::Haah;
        s.d = 3;
    } else if (name == "chamon") {
        s.kind = ModelKind::Chamon;
        s.d = 3;
    } else if (std::regex_match(name, m, cc_re)) {
        s.kind = ModelKind::CC;
        s.d = std::stoi(m[1]);
        s.k = std::stoi(m[2]);
        if (2 * s.k >= s.d) fail(ErrorKind::Constraint, "cc:d,k needs 2k < d");
    } else if (std::regex_match(name, m, qc_re)) {
        s.kind = ModelKind::QC;
        s.d = std::stoi(m[1]);
        s.k = std::stoi(m[2]);
        s.l = std::stoi(m[3]);
        if (2 * s.k >= s.d) fail(ErrorKind::Constraint, "qc:d,k,l needs 2k < d");
        if (s.l < 0 || s.l >= s.k) fail(ErrorKind::Constraint, "qc:d,k,l needs 0 <= l < k");
        const long long b = binomial(s.d - s.k - s.l, s.k - s.l);
        if (b % 2 != 0)
            fail(ErrorKind::Constraint, "qc:" + std::to_string(s.d) + "," + std::to_string(s.k) + "," +
                                            std::to_string(s.l) + " is not nilpotent: binom(" +
                                            std::to_string(s.d - s.k - s.l) + "," + std::to_string(s.k - s.l) +
                                            ") = " + std::to_string(b) + " is odd");
    } else {
        fail(ErrorKind::UnknownModel, "unknown model '" + name + "'");
    }
    return s;
}

ModelSpec with_periods(ModelSpec spec, const std::vector<int>& L) {
    if (L.empty()) fail(ErrorKind::Dimension, "no periods given");
    if (L.size() == 1)
        spec.periods.assign(static_cast<std::size_t>(spec.d), L[0]);
    else
        spec.periods = L;
    check_periods(spec.periods, spec.d, spec.name());
    if (spec.kind == ModelKind::Chamon &&
        !std::all_of(spec.periods.begin(), spec.periods.end(), [&](int p) { return p == spec.periods[0]; }))
        fail(ErrorKind::Constraint, "chamon takes a single cubic period");
    if (spec.kind == ModelKind::Checkerboard)
        for (int p : spec.periods)
            if (p % 2) fail(ErrorKind::Constraint, "checkerboard periods must be even, got " + std::to_string(p));
    return spec;
}

long long binomial(int n, int r) {
    if (r < 0 || n < 0 || r > n) return 0;
    long long b = 1;
    for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
    return b;
}

std::vector<std::vector<int>> axis_subsets(int d, int m) {
    std::vector<std::vector<int>> out;
    if (m < 0 || m > d) return out;
    std::vector<int> cur(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) cur[static_cast<std::size_t>(i)] = i;
    while (true) {
        out.push_back(cur);
        int i = m - 1;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] == d - m + i) --i;
        if (i < 0) break;
        ++cur[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < m; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

std::size_t linear_position(const std::vector<int>& coords, const std::vector<int>& L) {
    std::size_t p = 0;
    for (std::size_t i = 0; i < L.size(); ++i) p = p * static_cast<std::size_t>(L[i]) + static_cast<std::size_t>(coords[i]);
    return p;
}

std::vector<CellLabel> cubic_cells(int d, int m, const std::vector<int>& L, const std::string& tag) {
    std::size_t n = 1;
    for (int p : L) n *= static_cast<std::size_t>(p);
    std::vector<CellLabel> out;
    for (const auto& ext : axis_subsets(d, m)) {
        std::vector<int> c(static_cast<std::size_t>(d), 0);
        for (std::size_t t = 0; t < n; ++t) {
            out.push_back(CellLabel{c, ext, tag});
            for (int i = d - 1; i >= 0; --i) {
                auto u = static_cast<std::size_t>(i);
                if (++c[u] < L[u]) break;
                c[u] = 0;
            }
        }
    }
    return out;
}

std::vector<CellLabel> cubic_faces(const CellLabel& cell, int k, const std::vector<int>& L) {
    std::vector<CellLabel> out;
    const int m = static_cast<int>(cell.ext.size());
    for (const auto& pick : axis_subsets(m, k)) {
        std::vector<int> keep, rest;
        for (int i = 0, j = 0; i < m; ++i) {
            if (j < k && pick[static_cast<std::size_t>(j)] == i) {
                keep.push_back(cell.ext[static_cast<std::size_t>(i)]);
                ++j;
            } else {
                rest.push_back(cell.ext[static_cast<std::size_t>(i)]);
            }
        }
        for (unsigned mask = 0; mask < (1u << rest.size()); ++mask) {
            std::vector<int> off(L.size(), 0);
            for (std::size_t r = 0; r < rest.size(); ++r)
                if (mask >> r & 1u) off[static_cast<std::size_t>(rest[r])] = 1;
            out.push_back(shifted(cell, off, L, keep, ""));
        }
    }
    return out;
}

CssComplex build_cc(int d, int k, const std::vector<int>& L) {
    if (k < 0 || 2 * k >= d) fail(ErrorKind::Constraint, "cc needs 0 <= k and 2k < d");
    check_periods(L, d, "cc");
    auto g = make_complex(kCssNames, {cubic_cells(d, d - k, L), cubic_cells(d, k, L), {}},
                          {[&](const CellLabel& c) { return cubic_faces(c, k, L); },
                           [](const CellLabel&) { return std::vector<CellLabel>{}; }});
    return finish(std::move(g), "cc:" + std::to_string(d) + "," + std::to_string(k), L);
}

CssComplex build_qc(int d, int k, int l, const std::vector<int>& L) {
    if (k < 0 || 2 * k >= d) fail(ErrorKind::Constraint, "qc needs 0 <= k and 2k < d");
    if (l < 0 || l >= k) fail(ErrorKind::Constraint, "qc needs 0 <= l < k");
    const long long b = binomial(d - k - l, k - l);
    if (b % 2)
        fail(ErrorKind::Constraint, "qc constraint violated: binom(" + std::to_string(d - k - l) + "," +
                                        std::to_string(k - l) + ") = " + std::to_string(b) + " is odd");
    check_periods(L, d, "qc");
    auto g = make_complex(kCssNames, {cubic_cells(d, d - k, L), cubic_cells(d, k, L), cubic_cells(d, l, L)},
                          {[&](const CellLabel& c) { return cubic_faces(c, k, L); },
                           [&](const CellLabel& c) { return cubic_faces(c, l, L); }});
    return finish(std::move(g), "qc:" + std::to_string(d) + "," + std::to_string(k) + "," + std::to_string(l), L);
}

CssComplex build_toric(int d, const std::vector<int>& L) {
    if (d < 2) fail(ErrorKind::Constraint, "toric needs d >= 2");
    check_periods(L, d, "toric");
    auto g = make_complex(kCssNames, {cubic_cells(d, 2, L), cubic_cells(d, 1, L), cubic_cells(d, 0, L)},
                          {[&](const CellLabel& c) { return cubic_faces(c, 1, L); },
                           [&](const CellLabel& c) { return cubic_faces(c, 0, L); }});
    return finish(std::move(g), "toric" + std::to_string(d) + "d", L);
}

CssComplex build_qpim2d(int Lx, int Ly) {
    auto c = build_cc(2, 0, {Lx, Ly});
    c.model = "qpim2d";
    return c;
}

CssComplex build_xcube(int Lx, int Ly, int Lz) {
    const std::vector<int> L{Lx, Ly, Lz};
    check_periods(L, 3, "xcube");
    const std::string axis_tag[3] = {"x", "y", "z"};
    std::vector<CellLabel> copies;
    for (const auto& t : axis_tag) {
        auto v = cubic_cells(3, 0, L, t);
        copies.insert(copies.end(), v.begin(), v.end());
    }
    auto g = make_complex(kCssNames, {cubic_cells(3, 3, L), cubic_cells(3, 1, L), copies},
                          {[&](const CellLabel& c) { return cubic_faces(c, 1, L); },
                           [&](const CellLabel& e) {
                               std::vector<CellLabel> out;
                               const int a = e.ext[0];
                               for (const auto& end : cubic_faces(e, 0, L))
                                   for (int b = 0; b < 3; ++b)
                                       if (b != a) out.push_back(point(end.coords, axis_tag[b]));
                               return out;
                           }});
    return finish(std::move(g), "xcube", L);
}

CssComplex build_checkerboard(const std::vector<int>& L) {
    check_periods(L, 3, "checkerboard");
    for (int p : L)
        if (p % 2) fail(ErrorKind::Constraint, "checkerboard periods must be even, got " + std::to_string(p));
    std::vector<CellLabel> shaded;
    for (auto& c : cubic_cells(3, 3, L, "s"))
        if ((c.coords[0] + c.coords[1] + c.coords[2]) % 2 == 0) shaded.push_back(c);
    auto g = make_complex(kCssNames, {shaded, cubic_cells(3, 0, L), shaded},
                          {[&](const CellLabel& c) { return cubic_faces(c, 0, L); },
                           [&](const CellLabel& v) {
                               std::vector<CellLabel> out;
                               for (int e = 0; e < 8; ++e) {
                                   std::vector<int> off{-(e >> 2 & 1), -(e >> 1 & 1), -(e & 1)};
                                   CellLabel c = shifted(v, off, L, {0, 1, 2}, "s");
                                   if ((c.coords[0] + c.coords[1] + c.coords[2]) % 2 == 0) out.push_back(c);
                               }
                               return out;
                           }});
    return finish(std::move(g), "checkerboard", L);
}

CssComplex build_haah(const std::vector<int>& L) {
    check_periods(L, 3, "haah");
    std::vector<CellLabel> sites = cubic_cells(3, 0, L, "R");
    for (auto& b : cubic_cells(3, 0, L, "B")) sites.push_back(b);
    using Off = std::vector<int>;
    const std::vector<Off> z_red{{1, 0, 0}, {0, 0, 1}, {1, 0, 1}, {1, 1, 1}};
    const std::vector<Off> z_blue{{0, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}};
    const std::vector<Off> x_red{{0, 0, -1}, {0, -1, 0}, {-1, 0, 0}, {-1, -1, -1}};
    const std::vector<Off> x_blue{{0, 0, 0}, {0, -1, 0}, {-1, -1, 0}, {0, -1, -1}};
    auto g = make_complex(kCssNames, {cubic_cells(3, 3, L), sites, cubic_cells(3, 3, L)},
                          {[&](const CellLabel& c) {
                               std::vector<CellLabel> out;
                               for (const auto& o : z_red) out.push_back(shifted(c, o, L, {}, "R"));
                               for (const auto& o : z_blue) out.push_back(shifted(c, o, L, {}, "B"));
                               return out;
                           },
                           [&](const CellLabel& v) {
                               std::vector<CellLabel> out;
                               for (const auto& o : v.tag == "R" ? x_red : x_blue)
                                   out.push_back(shifted(v, o, L, {0, 1, 2}, ""));
                               return out;
                           }});
    return finish(std::move(g), "haah", L);
}

CssComplex build_css(const ModelSpec& spec) {
    const auto& L = spec.periods;
    switch (spec.kind) {
        case ModelKind::Toric: return build_toric(spec.d, L);
        case ModelKind::Qpim2d:
            check_periods(L, 2, "qpim2d");
            return build_qpim2d(L[0], L[1]);
        case ModelKind::XCube:
            check_periods(L, 3, "xcube");
            return build_xcube(L[0], L[1], L[2]);
        case ModelKind::Checkerboard: return build_checkerboard(L);
        case ModelKind::Haah: return build_haah(L);
        case ModelKind::CC: return build_cc(spec.d, spec.k, L);
        case ModelKind::QC: return build_qc(spec.d, spec.k, spec.l, L);
        case ModelKind::Chamon: break;
    }
    fail(ErrorKind::Precondition, "chamon is not a CSS model; use build_chamon");
}

ChamonModel build_chamon(int L) {
    if (L < 2) fail(ErrorKind::Constraint, "chamon needs L >= 2");
    const std::vector<int> P{L, L, L};
    ChamonModel m;
    m.L = L;
    m.vertices = cubic_cells(3, 0, P);
    m.cubes = cubic_cells(3, 3, P);
    std::sort(m.vertices.begin(), m.vertices.end());
    std::sort(m.cubes.begin(), m.cubes.end());
    const std::size_t nv = m.vertices.size(), nc = m.cubes.size();
    m.dc = BitMatrix(nv, nc);
    m.dcp = BitMatrix(nv, nc);
    using Off = std::vector<int>;
    const std::vector<Off> z_part{{0, 0, 1}, {0, 1, 1}, {1, 0, 0}, {1, 1, 0}};
    const std::vector<Off> x_part{{0, 0, 0}, {0, 0, 1}, {1, 1, 0}, {1, 1, 1}};
    auto vidx = [&](const CellLabel& v) {
        return static_cast<std::size_t>(std::lower_bound(m.vertices.begin(), m.vertices.end(), v) - m.vertices.begin());
    };
    for (std::size_t c = 0; c < nc; ++c) {
        CellLabel base = point(m.cubes[c].coords);
        for (const auto& o : z_part) m.dc.flip(vidx(shifted(base, o, P, {}, "")), c);
        for (const auto& o : x_part) m.dcp.flip(vidx(shifted(base, o, P, {}, "")), c);
        std::vector<char> row(nv, 'I');
        for (std::size_t v = 0; v < nv; ++v) {
            const bool z = m.dc.get(v, c), x = m.dcp.get(v, c);
            row[v] = z && x ? 'Y' : z ? 'Z' : x ? 'X' : 'I';
        }
        m.letters.push_back(std::move(row));
    }
    return m;
}

}  // namespace css

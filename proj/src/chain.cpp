#include "css/chain.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "css/errors.hpp"
#include "json.hpp"

namespace css {

bool CellLabel::operator<(const CellLabel& o) const {
    if (tag != o.tag) return tag < o.tag;
    if (coords != o.coords) return coords < o.coords;
    return ext < o.ext;
}

std::string CellLabel::str() const {
    std::ostringstream s;
    s << (tag.empty() ? "" : tag + ":") << "(";
    for (std::size_t i = 0; i < coords.size(); ++i) s << (i ? "," : "") << coords[i];
    s << ")[";
    for (std::size_t i = 0; i < ext.size(); ++i) s << (i ? "," : "") << ext[i];
    s << "]";
    return s.str();
}

std::optional<std::size_t> GradedComplex::index_of(std::size_t g, const CellLabel& l) const {
    const auto& v = cells.at(g);
    auto it = std::lower_bound(v.begin(), v.end(), l);
    if (it == v.end() || *it != l) return std::nullopt;
    return static_cast<std::size_t>(it - v.begin());
}

BitMatrix GradedComplex::outgoing(std::size_t g) const {
    if (g + 1 < num_grades()) return diffs[g];
    return BitMatrix(0, size(g));
}

GradedComplex make_complex(std::vector<std::string> names, std::vector<std::vector<CellLabel>> cells,
                           const std::vector<BoundaryRule>& rules) {
    if (rules.size() + 1 != cells.size() && !(cells.empty() && rules.empty()))
        fail(ErrorKind::Internal, "make_complex: need one rule per consecutive grade pair");
    GradedComplex c;
    c.names = std::move(names);
    for (auto& g : cells) {
        for (auto& l : g) std::sort(l.ext.begin(), l.ext.end());
        std::sort(g.begin(), g.end());
        if (std::adjacent_find(g.begin(), g.end()) != g.end())
            fail(ErrorKind::Internal, "make_complex: duplicate cell label");
    }
    c.cells = std::move(cells);
    for (std::size_t i = 0; i < rules.size(); ++i) {
        BitMatrix d(c.size(i + 1), c.size(i));
        for (std::size_t j = 0; j < c.size(i); ++j) {
            for (auto t : rules[i](c.cells[i][j])) {
                std::sort(t.ext.begin(), t.ext.end());
                auto k = c.index_of(i + 1, t);
                if (!k) fail(ErrorKind::Internal, "boundary rule produced unknown cell " + t.str());
                d.flip(*k, j);
            }
        }
        c.diffs.push_back(std::move(d));
    }
    return c;
}

ValidationReport validate(const GradedComplex& c) {
    ValidationReport r;
    if (c.diffs.size() + 1 != c.num_grades() && !(c.num_grades() == 0 && c.diffs.empty())) {
        r.ok = false;
        r.message = "differential count does not match grade count";
        return r;
    }
    for (std::size_t i = 0; i < c.diffs.size(); ++i) {
        if (c.diffs[i].rows() != c.size(i + 1) || c.diffs[i].cols() != c.size(i)) {
            r.ok = false;
            r.grade = i;
            r.message = "differential " + std::to_string(i) + " has inconsistent shape";
            return r;
        }
    }
    for (std::size_t i = 0; i + 1 < c.diffs.size(); ++i) {
        const BitMatrix p = compose(c.diffs[i + 1], c.diffs[i]);
        for (std::size_t t = 0; t < p.rows(); ++t) {
            if (p.row(t).none()) continue;
            const std::size_t s = p.row(t).support().front();
            r.ok = false;
            r.grade = i;
            r.source = s;
            r.target = t;
            r.message = "nilpotency fails: cell " + c.cells[i][s].str() + " in grade " + std::to_string(i) +
                        " reaches " + c.cells[i + 2][t].str() + " in grade " + std::to_string(i + 2);
            return r;
        }
    }
    return r;
}

GradedComplex dualize(const GradedComplex& c) {
    GradedComplex d;
    d.names.assign(c.names.rbegin(), c.names.rend());
    d.cells.assign(c.cells.rbegin(), c.cells.rend());
    for (std::size_t i = c.diffs.size(); i-- > 0;) d.diffs.push_back(c.diffs[i].transpose());
    return d;
}

std::size_t ProductComplex::index(std::size_t g, std::size_t ga, std::size_t ia, std::size_t ib) const {
    auto it = lookup.at(g).find({ga, ia, ib});
    if (it == lookup[g].end()) fail(ErrorKind::Internal, "product cell not found");
    return it->second;
}

namespace {

CellLabel product_label(const CellLabel& a, const CellLabel& b) {
    CellLabel l;
    l.coords = a.coords;
    l.coords.insert(l.coords.end(), b.coords.begin(), b.coords.end());
    l.ext = a.ext;
    const int shift = static_cast<int>(a.coords.size());
    for (int e : b.ext) l.ext.push_back(e + shift);
    if (a.tag.empty()) l.tag = b.tag;
    else if (b.tag.empty()) l.tag = a.tag;
    else l.tag = a.tag + "." + b.tag;
    return l;
}

}  // namespace

ProductComplex tensor_product(const GradedComplex& a, const GradedComplex& b) {
    ProductComplex out;
    const std::size_t na = a.num_grades(), nb = b.num_grades();
    if (na == 0 || nb == 0) return out;
    const std::size_t n = na + nb - 1;
    out.complex.names.resize(n);
    out.complex.cells.resize(n);
    out.origin.resize(n);
    out.lookup.resize(n);
    for (std::size_t g = 0; g < n; ++g) {
        std::vector<std::pair<CellLabel, std::array<std::size_t, 3>>> items;
        std::string name;
        for (std::size_t j = 0; j < na; ++j) {
            if (g < j || g - j >= nb) continue;
            const std::size_t k = g - j;
            name += (name.empty() ? "" : "+") + a.names[j] + "*" + b.names[k];
            for (std::size_t ia = 0; ia < a.size(j); ++ia)
                for (std::size_t ib = 0; ib < b.size(k); ++ib)
                    items.push_back({product_label(a.cells[j][ia], b.cells[k][ib]), {j, ia, ib}});
        }
        std::sort(items.begin(), items.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        for (std::size_t i = 0; i + 1 < items.size(); ++i)
            if (items[i].first == items[i + 1].first)
                fail(ErrorKind::Internal, "tensor product produced duplicate label " + items[i].first.str());
        out.complex.names[g] = name;
        for (std::size_t i = 0; i < items.size(); ++i) {
            out.complex.cells[g].push_back(items[i].first);
            out.origin[g].push_back(items[i].second);
            out.lookup[g][items[i].second] = i;
        }
    }
    for (std::size_t g = 0; g + 1 < n; ++g) {
        BitMatrix d(out.complex.size(g + 1), out.complex.size(g));
        for (std::size_t i = 0; i < out.complex.size(g); ++i) {
            const auto [j, ia, ib] = out.origin[g][i];
            const std::size_t k = g - j;
            if (j + 1 < na)
                for (auto t : a.diffs[j].column(ia).support()) d.flip(out.lookup[g + 1].at({j + 1, t, ib}), i);
            if (k + 1 < nb)
                for (auto t : b.diffs[k].column(ib).support()) d.flip(out.lookup[g + 1].at({j, ia, t}), i);
        }
        out.complex.diffs.push_back(std::move(d));
    }
    return out;
}

GradedComplex circle_complex(int L) {
    if (L < 1) fail(ErrorKind::Constraint, "circle length must be >= 1");
    std::vector<CellLabel> ints, pts;
    for (int w = 0; w < L; ++w) {
        ints.push_back({{w}, {0}, ""});
        pts.push_back({{w}, {}, ""});
    }
    return make_complex({"intervals", "points"}, {ints, pts}, {[L](const CellLabel& c) {
                            return std::vector<CellLabel>{{{c.coords[0]}, {}, ""},
                                                          {{(c.coords[0] + 1) % L}, {}, ""}};
                        }});
}

GradedComplex segment_complex(int L) {
    if (L < 1) fail(ErrorKind::Constraint, "segment length must be >= 1");
    std::vector<CellLabel> ints, pts;
    for (int w = 0; w < L; ++w) ints.push_back({{w}, {0}, ""});
    for (int w = 0; w <= L; ++w) pts.push_back({{w}, {}, ""});
    return make_complex({"intervals", "points"}, {ints, pts}, {[](const CellLabel& c) {
                            return std::vector<CellLabel>{{{c.coords[0]}, {}, ""}, {{c.coords[0] + 1}, {}, ""}};
                        }});
}

std::size_t FoliatedComplex::index(std::size_t g, int css_grade, std::size_t css_index, bool point, int w) const {
    const CellLabel& base = css.c.cells.at(static_cast<std::size_t>(css_grade)).at(css_index);
    CellLabel l = base;
    l.coords.push_back(w);
    if (!point) l.ext.push_back(static_cast<int>(base.coords.size()));
    auto k = c.index_of(g, l);
    if (!k) fail(ErrorKind::Internal, "foliated cell not found: " + l.str());
    return *k;
}

FoliatedComplex foliate(const CssComplex& css, int Lw, WBoundary boundary) {
    if (Lw < 1) fail(ErrorKind::Constraint, "foliation requires L_w >= 1");
    const auto v = validate(css.c);
    if (!v.ok) fail(ErrorKind::Precondition, "foliate: input complex invalid: " + v.message);
    const bool periodic = boundary == WBoundary::Periodic;
    const int npts = periodic ? Lw : Lw + 1;
    const auto& C = css.c;

    auto lift = [](const CellLabel& b, int w, bool point) {
        CellLabel l = b;
        l.coords.push_back(w);
        if (!point) l.ext.push_back(static_cast<int>(b.coords.size()));
        return l;
    };
    // Grade layout: Zw = Z x int; Q1 = Z x pt + q x int; Q2 = q x pt + X x int; X = X x pt.
    std::vector<std::vector<CellLabel>> cells(4);
    std::vector<std::vector<FolOrigin>> raw(4);
    auto add = [&](std::size_t g, int cg, bool point) {
        const int count = point ? npts : Lw;
        for (std::size_t i = 0; i < C.size(static_cast<std::size_t>(cg)); ++i)
            for (int w = 0; w < count; ++w) {
                cells[g].push_back(lift(C.cells[static_cast<std::size_t>(cg)][i], w, point));
                raw[g].push_back({cg, i, point, w});
            }
    };
    add(0, 0, false);
    add(1, 0, true);
    add(1, 1, false);
    add(2, 1, true);
    add(2, 2, false);
    add(3, 2, true);

    // Map label -> origin so origins can follow the canonical sort.
    std::vector<std::map<CellLabel, FolOrigin>> by_label(4);
    for (std::size_t g = 0; g < 4; ++g)
        for (std::size_t i = 0; i < cells[g].size(); ++i) by_label[g][cells[g][i]] = raw[g][i];

    // Decode a lifted label back to (css grade, index, point, w).
    auto decode = [&](std::size_t g, const CellLabel& l) { return by_label[g].at(l); };
    auto ends = [&](int w) {
        std::vector<int> e{w};
        e.push_back(periodic ? (w + 1) % Lw : w + 1);
        return e;
    };

    auto rule = [&](std::size_t g) {
        return [&, g](const CellLabel& l) {
            const FolOrigin o = decode(g, l);
            const auto cg = static_cast<std::size_t>(o.css_grade);
            const CellLabel& base = C.cells[cg][o.css_index];
            std::vector<CellLabel> out;
            // Spatial part: css differential at fixed w-cell.
            if (cg + 1 < C.num_grades())
                for (auto t : C.diffs[cg].column(o.css_index).support())
                    out.push_back(lift(C.cells[cg + 1][t], o.w, o.point));
            // Along w: an interval maps to its two endpoints.
            if (!o.point)
                for (int e : ends(o.w)) out.push_back(lift(base, e, true));
            return out;
        };
    };

    FoliatedComplex f;
    f.css = css;
    f.boundary = boundary;
    f.Lw = Lw;
    f.c = make_complex({"Zw", "Q1", "Q2", "X"}, cells, {rule(0), rule(1), rule(2)});
    f.origin.resize(4);
    for (std::size_t g = 0; g < 4; ++g)
        for (const auto& l : f.c.cells[g]) f.origin[g].push_back(by_label[g].at(l));
    const auto fv = validate(f.c);
    if (!fv.ok) fail(ErrorKind::Internal, "foliated complex not nilpotent: " + fv.message);
    return f;
}

HomologyBasis homology_basis(const GradedComplex& c, std::size_t grade) {
    if (grade >= c.num_grades()) fail(ErrorKind::Dimension, "homology grade out of range");
    HomologyBasis h;
    h.grade = grade;
    const std::size_t n = c.size(grade);
    SpanBuilder span(n);
    if (grade > 0) {
        const BitMatrix t = c.diffs[grade - 1].transpose();
        for (std::size_t j = 0; j < t.rows(); ++j) span.add(t.row(j));
    }
    for (const auto& v : kernel_basis(c.outgoing(grade)))
        if (span.add(v)) h.reps.push_back(v);
    h.dimension = h.reps.size();
    return h;
}

bool intersection(const BitVector& a, const BitVector& b) {
    if (a.size() != b.size()) fail(ErrorKind::Dimension, "intersection: length mismatch");
    return a.dot(b);
}

BitMatrix pairing_matrix(const HomologyBasis& h, const HomologyBasis& hdual) {
    if (h.dimension != hdual.dimension)
        fail(ErrorKind::Internal, "pairing: homology dimensions differ (" + std::to_string(h.dimension) + " vs " +
                                      std::to_string(hdual.dimension) + ")");
    BitMatrix m(h.dimension, hdual.dimension);
    for (std::size_t i = 0; i < h.dimension; ++i)
        for (std::size_t j = 0; j < hdual.dimension; ++j) m.set(i, j, intersection(h.reps[i], hdual.reps[j]));
    return m;
}

bool is_cycle(const GradedComplex& c, std::size_t grade, const BitVector& v) {
    if (grade >= c.num_grades() || v.size() != c.size(grade)) fail(ErrorKind::Dimension, "is_cycle: shape");
    return c.outgoing(grade).apply(v).none();
}

std::optional<BitVector> is_boundary(const GradedComplex& c, std::size_t grade, const BitVector& v) {
    if (!is_cycle(c, grade, v)) fail(ErrorKind::NotCycle, "is_boundary: vector is not a cycle");
    if (grade == 0) {
        if (v.none()) return BitVector(0);
        return std::nullopt;
    }
    return solve(c.diffs[grade - 1], v);
}

std::string complex_to_json(const GradedComplex& c, int indent) {
    using nlohmann::json;
    json j;
    j["grades"] = json::array();
    for (std::size_t g = 0; g < c.num_grades(); ++g) {
        json cells = json::array();
        for (const auto& l : c.cells[g]) cells.push_back({{"coords", l.coords}, {"ext", l.ext}, {"tag", l.tag}});
        j["grades"].push_back({{"name", c.names.size() > g ? c.names[g] : ""}, {"cells", cells}});
    }
    j["diffs"] = json::array();
    for (const auto& d : c.diffs) {
        json rows = json::array();
        for (std::size_t i = 0; i < d.rows(); ++i) rows.push_back(d.row(i).support());
        j["diffs"].push_back({{"rows", d.rows()}, {"cols", d.cols()}, {"supports", rows}});
    }
    return j.dump(indent);
}

GradedComplex complex_from_json(const std::string& text) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorKind::Parse, std::string("complex json: ") + e.what());
    }
    GradedComplex c;
    try {
        for (const auto& g : j.at("grades")) {
            c.names.push_back(g.at("name").get<std::string>());
            std::vector<CellLabel> cells;
            for (const auto& l : g.at("cells"))
                cells.push_back({l.at("coords").get<std::vector<int>>(), l.at("ext").get<std::vector<int>>(),
                                 l.at("tag").get<std::string>()});
            c.cells.push_back(std::move(cells));
        }
        for (const auto& d : j.at("diffs")) {
            BitMatrix m(d.at("rows").get<std::size_t>(), d.at("cols").get<std::size_t>());
            std::size_t i = 0;
            for (const auto& row : d.at("supports")) {
                for (auto k : row.get<std::vector<std::size_t>>()) {
                    if (i >= m.rows() || k >= m.cols()) fail(ErrorKind::Parse, "complex json: support out of range");
                    m.set(i, k);
                }
                ++i;
            }
            c.diffs.push_back(std::move(m));
        }
    } catch (const json::exception& e) {
        fail(ErrorKind::Parse, std::string("complex json: ") + e.what());
    }
    return c;
}

}  // namespace css

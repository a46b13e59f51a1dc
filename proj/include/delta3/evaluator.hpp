#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "delta3/rational.hpp"
#include "delta3/three_algebra.hpp"

namespace delta3 {

/// Oriented triangle: vertex ids counterclockwise; side s runs v[s] -> v[(s+1)%3].
struct TriCell {
    std::array<int, 3> v{};
};

using SideRef = std::pair<int, int>;  // (cell id, side index)

/// Disk built from oriented triangles: interior sides are glued in pairs with
/// opposite orientation, and exactly three sides remain on the boundary, listed
/// in cyclic order.
struct Complex {
    std::map<int, TriCell> cells;
    std::map<SideRef, SideRef> glue;
    std::array<SideRef, 3> boundary{};
    int next_cell = 0;
    int next_vertex = 0;
};

/// One basis label per cell.
struct LabeledTriangulation {
    Complex complex;
    std::map<int, int> labels;
};

namespace detail {

inline std::string side_str(const SideRef& s) {
    return "(" + std::to_string(s.first) + "," + std::to_string(s.second) + ")";
}

}  // namespace detail

inline void validate_complex(const Complex& cx) {
    if (cx.cells.empty()) throw input_error("complex has no cells");
    for (const auto& [id, cell] : cx.cells) {
        if (id < 0) throw input_error("negative cell id");
        if (cell.v[0] == cell.v[1] || cell.v[1] == cell.v[2] || cell.v[0] == cell.v[2])
            throw input_error("cell " + std::to_string(id) + " has repeated vertices");
        for (int vv : cell.v)
            if (vv < 0) throw input_error("negative vertex id");
    }
    auto side_exists = [&cx](const SideRef& s) {
        return cx.cells.count(s.first) > 0 && s.second >= 0 && s.second < 3;
    };
    std::set<SideRef> boundary_set;
    for (const auto& s : cx.boundary) {
        if (!side_exists(s)) throw input_error("boundary side " + detail::side_str(s) + " missing");
        if (!boundary_set.insert(s).second)
            throw input_error("boundary side " + detail::side_str(s) + " listed twice");
    }
    for (const auto& [a, b] : cx.glue) {
        if (!side_exists(a) || !side_exists(b))
            throw input_error("gluing refers to a missing side");
        if (a == b) throw input_error("side " + detail::side_str(a) + " glued to itself");
        auto back = cx.glue.find(b);
        if (back == cx.glue.end() || back->second != a)
            throw input_error("gluing at " + detail::side_str(a) + " is not symmetric");
        if (boundary_set.count(a))
            throw input_error("side " + detail::side_str(a) + " both glued and on the boundary");
        // Opposite orientation: a runs x->y, b must run y->x.
        const TriCell& ca = cx.cells.at(a.first);
        const TriCell& cb = cx.cells.at(b.first);
        if (ca.v[a.second] != cb.v[(b.second + 1) % 3] ||
            ca.v[(a.second + 1) % 3] != cb.v[b.second])
            throw input_error("gluing at " + detail::side_str(a) +
                              " does not reverse orientation");
    }
    for (const auto& [id, cell] : cx.cells) {
        (void)cell;
        for (int s = 0; s < 3; ++s) {
            const SideRef ref{id, s};
            const bool glued = cx.glue.count(ref) > 0;
            const bool on_boundary = boundary_set.count(ref) > 0;
            if (glued == on_boundary)
                throw input_error("side " + detail::side_str(ref) +
                                  " must be either glued or on the boundary");
        }
    }
    // The boundary must close up in the listed order.
    for (int i = 0; i < 3; ++i) {
        const SideRef& s = cx.boundary[i];
        const SideRef& t = cx.boundary[(i + 1) % 3];
        const TriCell& cs = cx.cells.at(s.first);
        const TriCell& ct = cx.cells.at(t.first);
        if (cs.v[(s.second + 1) % 3] != ct.v[t.second])
            throw input_error("boundary sides are not in cyclic order");
    }
    // Connectivity over gluings.
    {
        std::set<int> seen;
        std::vector<int> stack{cx.cells.begin()->first};
        seen.insert(stack[0]);
        while (!stack.empty()) {
            const int c = stack.back();
            stack.pop_back();
            for (int s = 0; s < 3; ++s) {
                auto it = cx.glue.find({c, s});
                if (it == cx.glue.end()) continue;
                if (seen.insert(it->second.first).second) stack.push_back(it->second.first);
            }
        }
        if (seen.size() != cx.cells.size()) throw input_error("complex is not connected");
    }
    // Euler characteristic of a disk: V - E + F = 1.
    {
        std::set<int> verts;
        for (const auto& [id, cell] : cx.cells) {
            (void)id;
            for (int vv : cell.v) verts.insert(vv);
        }
        const std::int64_t V = static_cast<std::int64_t>(verts.size());
        const std::int64_t E = static_cast<std::int64_t>(cx.glue.size()) / 2 + 3;
        const std::int64_t F = static_cast<std::int64_t>(cx.cells.size());
        if (V - E + F != 1)
            throw input_error("Euler characteristic is " + std::to_string(V - E + F) +
                              ", expected 1");
    }
}

/// Vertices not lying on any boundary side.
inline std::set<int> interior_vertices(const Complex& cx) {
    std::set<int> verts;
    for (const auto& [id, cell] : cx.cells) {
        (void)id;
        for (int vv : cell.v) verts.insert(vv);
    }
    for (const auto& s : cx.boundary) {
        const TriCell& c = cx.cells.at(s.first);
        verts.erase(c.v[s.second]);
        verts.erase(c.v[(s.second + 1) % 3]);
    }
    return verts;
}

/// Walks the star of an interior vertex: from (cell, corner) cross the side
/// arriving at the vertex into the neighboring cell.  Returns the visited
/// (cell, corner) pairs in order, or nullopt if the walk hits the boundary.
inline std::optional<std::vector<std::pair<int, int>>> star_walk(const Complex& cx, int vertex) {
    std::pair<int, int> start{-1, -1};
    for (const auto& [id, cell] : cx.cells) {
        for (int k = 0; k < 3; ++k)
            if (cell.v[k] == vertex) {
                start = {id, k};
                break;
            }
        if (start.first != -1) break;
    }
    if (start.first == -1) return std::nullopt;
    std::vector<std::pair<int, int>> out;
    std::pair<int, int> cur = start;
    const size_t cap = cx.cells.size() * 3 + 1;
    do {
        out.push_back(cur);
        if (out.size() > cap) throw internal_error("star walk does not close");
        auto it = cx.glue.find({cur.first, (cur.second + 2) % 3});
        if (it == cx.glue.end()) return std::nullopt;  // boundary vertex
        cur = {it->second.first, it->second.second};
        if (cx.cells.at(cur.first).v[cur.second] != vertex)
            throw internal_error("star walk lost its vertex");
    } while (cur != start);
    return out;
}

/// Interior vertices surrounded by exactly three pairwise distinct cells, i.e.
/// the spots where a merge move applies.  Sorted for determinism.
inline std::vector<int> mergeable_vertices(const Complex& cx) {
    std::vector<int> out;
    for (int v : interior_vertices(cx)) {
        auto walk = star_walk(cx, v);
        if (!walk || walk->size() != 3) continue;
        const auto& w = *walk;
        if (w[0].first == w[1].first || w[1].first == w[2].first || w[0].first == w[2].first)
            continue;
        out.push_back(v);
    }
    return out;
}

/// Interior edges between two distinct cells where the diagonal flip is
/// non-degenerate.  Each edge is represented by its side on the smaller cell id;
/// sorted for determinism.
inline std::vector<SideRef> flippable_edges(const Complex& cx) {
    std::vector<SideRef> out;
    for (const auto& [a, b] : cx.glue) {
        if (a.first >= b.first) continue;  // keep the smaller cell's side
        const TriCell& x = cx.cells.at(a.first);
        const TriCell& y = cx.cells.at(b.first);
        const int rx = (a.second + 2) % 3;  // normalized slot 0 = old slot (0 + rx)
        const int ry = b.second;
        // Opposite corners of the quadrilateral; equal ids make the flip degenerate.
        const int q_vertex = x.v[rx];
        const int s_vertex = y.v[(ry + 2) % 3];
        if (q_vertex == s_vertex) continue;
        out.push_back(a);
    }
    return out;
}

/// One weighted assignment of basis labels to cells.
struct EvalTerm {
    Rat coeff;
    std::map<int, int> labels;
};

/// A triangulation whose label has been opened up into a sum of weighted basis
/// assignments; moves rewrite the complex and the terms together.
struct EvaluationState {
    Complex complex;
    std::vector<EvalTerm> terms;
};

namespace detail {

inline void normalize_terms(std::vector<EvalTerm>& terms, size_t term_budget) {
    std::map<std::map<int, int>, Rat> acc;
    for (auto& t : terms) acc[std::move(t.labels)] += t.coeff;
    terms.clear();
    for (auto& [labels, coeff] : acc) {
        if (coeff == 0) continue;
        terms.push_back({std::move(coeff), labels});
    }
    if (terms.size() > term_budget)
        throw input_error("evaluation refused: more than " + std::to_string(term_budget) +
                          " live terms");
}

/// Columns of P^0, P^1, P^2.
inline std::array<std::vector<SparseVec>, 3> rotation_powers(const StrongThreeAlgebra& alg) {
    std::array<std::vector<SparseVec>, 3> p;
    p[0].resize(alg.dim);
    for (int i = 0; i < alg.dim; ++i) p[0][i] = {{i, Rat(1)}};
    p[1] = alg.P;
    p[2] = compose_columns(alg.P, alg.P);
    return p;
}

inline void remap_side(Complex& cx, const SideRef& from, const SideRef& to) {
    auto it = cx.glue.find(from);
    if (it != cx.glue.end()) {
        const SideRef partner = it->second;
        cx.glue.erase(it);
        cx.glue.erase(partner);
        cx.glue[partner] = to;
        cx.glue[to] = partner;
        return;
    }
    for (auto& b : cx.boundary)
        if (b == from) {
            b = to;
            return;
        }
    throw internal_error("side to remap is neither glued nor on the boundary");
}

}  // namespace detail

/// Merges the three cells around an interior trivalent vertex into one, turning
/// each term's three labels into the triple product of their rotation-normalized
/// forms.  The roles go to the star cells in walk order starting from the
/// smallest cell id.
inline void apply_merge_move(EvaluationState& st, const StrongThreeAlgebra& alg,
                             const std::array<std::vector<SparseVec>, 3>& ppow, int vertex,
                             size_t term_budget) {
    Complex& cx = st.complex;
    auto walk_opt = star_walk(cx, vertex);
    if (!walk_opt || walk_opt->size() != 3)
        throw input_error("no merge move at vertex " + std::to_string(vertex));
    auto walk = *walk_opt;
    // Start from the smallest cell id for a deterministic role assignment.
    int best = 0;
    for (int i = 1; i < 3; ++i)
        if (walk[i].first < walk[best].first) best = i;
    std::rotate(walk.begin(), walk.begin() + best, walk.end());
    const std::array<int, 3> cells{walk[0].first, walk[1].first, walk[2].first};
    if (cells[0] == cells[1] || cells[1] == cells[2] || cells[0] == cells[2])
        throw input_error("no merge move at vertex " + std::to_string(vertex));
    // Outer side of the cell whose corner k holds the vertex is slot (k+1)%3;
    // normalizing rotations put the outer sides at slots 0, 1, 2 respectively.
    std::array<int, 3> outer{}, rot{};
    for (int i = 0; i < 3; ++i) {
        outer[i] = (walk[i].second + 1) % 3;
        rot[i] = ((outer[i] - i) % 3 + 3) % 3;
    }
    const TriCell& c1 = cx.cells.at(cells[0]);
    const TriCell& c2 = cx.cells.at(cells[1]);
    const TriCell& c3 = cx.cells.at(cells[2]);
    TriCell merged;
    merged.v = {c1.v[outer[0]], c1.v[(outer[0] + 1) % 3], c2.v[(outer[1] + 1) % 3]};
    if (merged.v[2] != c3.v[outer[2]] || merged.v[0] != c3.v[(outer[2] + 1) % 3] ||
        merged.v[1] != c2.v[outer[1]])
        throw internal_error("merge move geometry is inconsistent");
    const int new_id = cx.next_cell++;
    cx.cells[new_id] = merged;
    for (int i = 0; i < 3; ++i) detail::remap_side(cx, {cells[i], outer[i]}, {new_id, i});
    for (int i = 0; i < 3; ++i) cx.cells.erase(cells[i]);
    // Interior gluings between the three cells vanish with them.
    for (int i = 0; i < 3; ++i)
        for (int s = 0; s < 3; ++s) cx.glue.erase({cells[i], s});

    std::vector<EvalTerm> next;
    for (const auto& t : st.terms) {
        const int l1 = t.labels.at(cells[0]);
        const int l2 = t.labels.at(cells[1]);
        const int l3 = t.labels.at(cells[2]);
        std::map<int, int> rest = t.labels;
        rest.erase(cells[0]);
        rest.erase(cells[1]);
        rest.erase(cells[2]);
        for (const auto& [i1, cf1] : ppow[rot[0]][l1])
            for (const auto& [i2, cf2] : ppow[rot[1]][l2])
                for (const auto& [i3, cf3] : ppow[rot[2]][l3]) {
                    auto itm = alg.m.find(alg.key3(i1, i2, i3));
                    if (itm == alg.m.end()) continue;
                    for (const auto& [o, cm] : itm->second) {
                        EvalTerm nt;
                        nt.coeff = t.coeff * cf1 * cf2 * cf3 * cm;
                        nt.labels = rest;
                        nt.labels[new_id] = o;
                        next.push_back(std::move(nt));
                    }
                }
    }
    st.terms = std::move(next);
    detail::normalize_terms(st.terms, term_budget);
}

/// Flips the diagonal of the quadrilateral formed by the two distinct cells
/// meeting along the given interior edge, pushing each term's two labels
/// through the recoupling map of their rotation-normalized forms.
inline void apply_flip_move(EvaluationState& st, const StrongThreeAlgebra& alg,
                            const std::unordered_map<std::uint64_t, SparsePairVec>& mbar,
                            const std::array<std::vector<SparseVec>, 3>& ppow, SideRef edge,
                            size_t term_budget) {
    Complex& cx = st.complex;
    auto it = cx.glue.find(edge);
    if (it == cx.glue.end()) throw input_error("edge is not interior");
    SideRef xs = edge, ys = it->second;
    if (xs.first > ys.first) std::swap(xs, ys);
    if (xs.first == ys.first) throw input_error("flip needs two distinct cells");
    const TriCell x = cx.cells.at(xs.first);
    const TriCell y = cx.cells.at(ys.first);
    // Normalize x so its shared side is slot 1 and y so its shared side is slot 0.
    const int rx = ((xs.second - 1) % 3 + 3) % 3;
    const int ry = ys.second;
    const int vq = x.v[rx];                 // apex of x off the shared side
    const int vr = x.v[(rx + 1) % 3];       // shared side: vr -> vp in x
    const int vp = x.v[(rx + 2) % 3];
    const int vs = y.v[(ry + 2) % 3];       // apex of y off the shared side
    if (vq == vs) throw input_error("flip is degenerate at this edge");
    const int a1 = cx.next_cell++;
    const int a2 = cx.next_cell++;
    cx.cells[a1] = TriCell{{vq, vr, vs}};
    cx.cells[a2] = TriCell{{vp, vq, vs}};
    detail::remap_side(cx, {xs.first, (0 + rx) % 3}, {a1, 0});
    detail::remap_side(cx, {ys.first, (1 + ry) % 3}, {a1, 1});
    detail::remap_side(cx, {xs.first, (2 + rx) % 3}, {a2, 0});
    detail::remap_side(cx, {ys.first, (2 + ry) % 3}, {a2, 2});
    cx.glue.erase(xs);
    cx.glue.erase(ys);
    cx.cells.erase(xs.first);
    cx.cells.erase(ys.first);
    cx.glue[{a1, 2}] = {a2, 1};
    cx.glue[{a2, 1}] = {a1, 2};

    std::vector<EvalTerm> next;
    for (const auto& t : st.terms) {
        const int lx = t.labels.at(xs.first);
        const int ly = t.labels.at(ys.first);
        std::map<int, int> rest = t.labels;
        rest.erase(xs.first);
        rest.erase(ys.first);
        for (const auto& [i, ci] : ppow[rx][lx])
            for (const auto& [j, cj] : ppow[ry][ly]) {
                auto itb = mbar.find(static_cast<std::uint64_t>(i) * alg.dim + j);
                if (itb == mbar.end()) continue;
                for (const auto& [pq, cb] : itb->second) {
                    EvalTerm nt;
                    nt.coeff = t.coeff * ci * cj * cb;
                    nt.labels = rest;
                    nt.labels[a1] = pq.first;
                    nt.labels[a2] = pq.second;
                    next.push_back(std::move(nt));
                }
            }
    }
    st.terms = std::move(next);
    detail::normalize_terms(st.terms, term_budget);
}

/// Reduces the labeled disk to a single cell by random applicable moves (merges
/// preferred, flips otherwise) and reads off the boundary-aligned value: the
/// weighted sum of rotation-normalized labels of the final cell.  Deterministic
/// in the seed.
inline SparseVec evaluate(const LabeledTriangulation& tri, const StrongThreeAlgebra& alg,
                          std::uint64_t seed, int step_budget = 10000,
                          size_t term_budget = 100000) {
    validate_complex(tri.complex);
    for (const auto& [id, cell] : tri.complex.cells) {
        (void)cell;
        auto it = tri.labels.find(id);
        if (it == tri.labels.end())
            throw input_error("cell " + std::to_string(id) + " has no label");
        if (it->second < 0 || it->second >= alg.dim)
            throw input_error("label out of range on cell " + std::to_string(id));
    }
    EvaluationState st;
    st.complex = tri.complex;
    std::map<int, int> labels0;
    for (const auto& [id, cell] : tri.complex.cells) {
        (void)cell;
        labels0[id] = tri.labels.at(id);
    }
    st.terms = {{Rat(1), std::move(labels0)}};
    const auto ppow = detail::rotation_powers(alg);
    const auto mbar = derive_mtilde(alg);
    std::mt19937_64 rng(seed);
    int steps = 0;
    while (st.complex.cells.size() > 1 && !st.terms.empty()) {
        if (++steps > step_budget)
            throw input_error("evaluation refused: step budget " +
                              std::to_string(step_budget) + " exceeded");
        auto verts = mergeable_vertices(st.complex);
        if (!verts.empty()) {
            const int v = verts[rng() % verts.size()];
            apply_merge_move(st, alg, ppow, v, term_budget);
            continue;
        }
        auto edges = flippable_edges(st.complex);
        if (edges.empty())
            throw input_error("no applicable move on a multi-cell complex");
        apply_flip_move(st, alg, mbar, ppow, edges[rng() % edges.size()], term_budget);
    }
    if (st.terms.empty()) return {};
    const int cell_id = st.complex.cells.begin()->first;
    int b0 = -1;
    for (int i = 0; i < 3; ++i)
        if (st.complex.boundary[i].first != cell_id)
            throw internal_error("boundary escaped the final cell");
    b0 = st.complex.boundary[0].second;
    if (st.complex.boundary[1].second != (b0 + 1) % 3 ||
        st.complex.boundary[2].second != (b0 + 2) % 3)
        throw internal_error("final boundary is out of cyclic order");
    SparseVec out;
    for (const auto& t : st.terms) {
        const int l = t.labels.at(cell_id);
        for (const auto& [o, c] : ppow[b0][l]) out.emplace_back(o, t.coeff * c);
    }
    detail::aggregate(out);
    return out;
}

/// Splits a cell into three around a fresh center vertex; the three new cells
/// take the given labels (in the canonical orientation whose merge move
/// reproduces their triple product) and the old label is dropped.
inline void subdivide(LabeledTriangulation& tri, int cell, const std::array<int, 3>& labels) {
    Complex& cx = tri.complex;
    auto it = cx.cells.find(cell);
    if (it == cx.cells.end()) throw input_error("no such cell");
    const TriCell old = it->second;
    const int w = cx.next_vertex++;
    const int t1 = cx.next_cell++;
    const int t2 = cx.next_cell++;
    const int t3 = cx.next_cell++;
    cx.cells[t1] = TriCell{{old.v[0], old.v[1], w}};
    cx.cells[t2] = TriCell{{w, old.v[1], old.v[2]}};
    cx.cells[t3] = TriCell{{old.v[0], w, old.v[2]}};
    detail::remap_side(cx, {cell, 0}, {t1, 0});
    detail::remap_side(cx, {cell, 1}, {t2, 1});
    detail::remap_side(cx, {cell, 2}, {t3, 2});
    cx.cells.erase(cell);
    cx.glue[{t1, 1}] = {t2, 0};
    cx.glue[{t2, 0}] = {t1, 1};
    cx.glue[{t2, 2}] = {t3, 1};
    cx.glue[{t3, 1}] = {t2, 2};
    cx.glue[{t1, 2}] = {t3, 0};
    cx.glue[{t3, 0}] = {t1, 2};
    tri.labels.erase(cell);
    tri.labels[t1] = labels[0];
    tri.labels[t2] = labels[1];
    tri.labels[t3] = labels[2];
}

/// One boundary-framed cell with the given label.
inline LabeledTriangulation single_cell_triangulation(int label) {
    LabeledTriangulation tri;
    tri.complex.cells[0] = TriCell{{0, 1, 2}};
    tri.complex.boundary = {SideRef{0, 0}, SideRef{0, 1}, SideRef{0, 2}};
    tri.complex.next_cell = 1;
    tri.complex.next_vertex = 3;
    tri.labels[0] = label;
    return tri;
}

/// Random triangulation with 1 + 2*subdivisions cells and labels drawn uniformly
/// below dim.  Deterministic in the seed.
inline LabeledTriangulation random_triangulation(int dim, int subdivisions, std::uint64_t seed) {
    if (dim <= 0) throw input_error("label range must be positive");
    if (subdivisions < 0) throw input_error("subdivision count must be nonnegative");
    std::mt19937_64 rng(seed);
    LabeledTriangulation tri = single_cell_triangulation(static_cast<int>(rng() % dim));
    for (int i = 0; i < subdivisions; ++i) {
        std::vector<int> ids;
        ids.reserve(tri.complex.cells.size());
        for (const auto& [id, cell] : tri.complex.cells) {
            (void)cell;
            ids.push_back(id);
        }
        const int target = ids[rng() % ids.size()];
        std::array<int, 3> labels{};
        for (auto& l : labels) l = static_cast<int>(rng() % dim);
        subdivide(tri, target, labels);
    }
    return tri;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json triangulation_to_json(const LabeledTriangulation& tri) {
    nlohmann::json j;
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& [id, cell] : tri.complex.cells) {
        nlohmann::json c;
        c["id"] = id;
        c["vertices"] = {cell.v[0], cell.v[1], cell.v[2]};
        c["label"] = tri.labels.count(id) ? tri.labels.at(id) : 0;
        cells.push_back(std::move(c));
    }
    j["cells"] = std::move(cells);
    nlohmann::json glue = nlohmann::json::array();
    for (const auto& [a, b] : tri.complex.glue) {
        if (b < a) continue;  // emit each pair once
        glue.push_back({{a.first, a.second}, {b.first, b.second}});
    }
    j["gluing"] = std::move(glue);
    nlohmann::json boundary = nlohmann::json::array();
    for (const auto& s : tri.complex.boundary) boundary.push_back({s.first, s.second});
    j["boundary"] = std::move(boundary);
    return j;
}

inline LabeledTriangulation triangulation_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("cells") || !j.contains("gluing") ||
        !j.contains("boundary"))
        throw input_error("triangulation json must contain cells, gluing, boundary");
    LabeledTriangulation tri;
    for (const auto& c : j["cells"]) {
        if (!c.is_object() || !c.contains("id") || !c.contains("vertices") ||
            !c.contains("label"))
            throw input_error("cell must contain id, vertices, label");
        const int id = c["id"].get<int>();
        if (tri.complex.cells.count(id)) throw input_error("duplicate cell id");
        const auto& vs = c["vertices"];
        if (!vs.is_array() || vs.size() != 3) throw input_error("cell needs 3 vertices");
        TriCell cell;
        for (int i = 0; i < 3; ++i) cell.v[i] = vs[i].get<int>();
        tri.complex.cells[id] = cell;
        tri.labels[id] = c["label"].get<int>();
        tri.complex.next_cell = std::max(tri.complex.next_cell, id + 1);
        for (int vv : cell.v) tri.complex.next_vertex = std::max(tri.complex.next_vertex, vv + 1);
    }
    for (const auto& g : j["gluing"]) {
        if (!g.is_array() || g.size() != 2 || !g[0].is_array() || g[0].size() != 2 ||
            !g[1].is_array() || g[1].size() != 2)
            throw input_error("malformed gluing entry");
        const SideRef a{g[0][0].get<int>(), g[0][1].get<int>()};
        const SideRef b{g[1][0].get<int>(), g[1][1].get<int>()};
        if (tri.complex.glue.count(a) || tri.complex.glue.count(b))
            throw input_error("side glued twice");
        tri.complex.glue[a] = b;
        tri.complex.glue[b] = a;
    }
    const auto& bd = j["boundary"];
    if (!bd.is_array() || bd.size() != 3) throw input_error("boundary needs exactly 3 sides");
    for (int i = 0; i < 3; ++i) {
        if (!bd[i].is_array() || bd[i].size() != 2) throw input_error("malformed boundary side");
        tri.complex.boundary[i] = {bd[i][0].get<int>(), bd[i][1].get<int>()};
    }
    validate_complex(tri.complex);
    return tri;
}

}  // namespace delta3

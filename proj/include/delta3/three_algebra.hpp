#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "delta3/group.hpp"
#include "delta3/rational.hpp"
#include "delta3/report.hpp"

namespace delta3 {

using SparseVec = std::vector<std::pair<int, Rat>>;             // element of the space
using SparsePairVec = std::vector<std::pair<std::pair<int, int>, Rat>>;  // element of the square

/// Trilinear structure on a based vector space: a triple product m, a recoupling
/// map mbar on the square, and a rotation P, all as sparse rational structure
/// constants.  P must be invertible.
struct SparseTrilinearSystem {
    int dim = 0;
    std::vector<std::string> names;
    std::unordered_map<std::uint64_t, SparseVec> m;        // key3(i,j,k) -> sum of outputs
    std::unordered_map<std::uint64_t, SparsePairVec> mbar; // key2(i,j) -> sum of output pairs
    std::vector<SparseVec> P;                              // column i -> image of e_i

    std::uint64_t key3(int i, int j, int k) const {
        return (static_cast<std::uint64_t>(i) * dim + j) * dim + k;
    }
    std::uint64_t key2(int i, int j) const { return static_cast<std::uint64_t>(i) * dim + j; }
    const std::string& name(int i) const { return names[i]; }
};

/// Triple product plus a distinguished element u of the square; the recoupling
/// map is not stored but derived from m and u.
struct StrongThreeAlgebra {
    int dim = 0;
    std::vector<std::string> names;
    std::unordered_map<std::uint64_t, SparseVec> m;
    std::vector<SparseVec> P;
    std::vector<std::tuple<int, int, Rat>> u;  // terms of u(1), must be non-empty

    std::uint64_t key3(int i, int j, int k) const {
        return (static_cast<std::uint64_t>(i) * dim + j) * dim + k;
    }
    const std::string& name(int i) const { return names[i]; }
};

namespace detail {

inline void default_names(int dim, std::vector<std::string>& names) {
    if (!names.empty()) return;
    names.reserve(dim);
    for (int i = 0; i < dim; ++i) names.push_back("e" + std::to_string(i));
}

inline void check_index(int i, int dim, const char* what) {
    if (i < 0 || i >= dim)
        throw input_error(std::string(what) + " index " + std::to_string(i) + " out of range");
}

inline void aggregate(SparseVec& v) {
    std::sort(v.begin(), v.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseVec out;
    for (auto& [i, c] : v) {
        if (!out.empty() && out.back().first == i)
            out.back().second += c;
        else
            out.emplace_back(i, c);
    }
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const auto& p) { return p.second == 0; }),
              out.end());
    v = std::move(out);
}

inline void aggregate(SparsePairVec& v) {
    std::sort(v.begin(), v.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    SparsePairVec out;
    for (auto& [pq, c] : v) {
        if (!out.empty() && out.back().first == pq)
            out.back().second += c;
        else
            out.emplace_back(pq, c);
    }
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const auto& p) { return p.second == 0; }),
              out.end());
    v = std::move(out);
}

template <class Map>
void aggregate_map(Map& m) {
    for (auto it = m.begin(); it != m.end();) {
        aggregate(it->second);
        if (it->second.empty())
            it = m.erase(it);
        else
            ++it;
    }
}

/// Dense rational inverse of the map given by sparse columns; nullopt if singular.
inline std::optional<std::vector<SparseVec>> invert_columns(const std::vector<SparseVec>& cols) {
    const int n = static_cast<int>(cols.size());
    std::vector<std::vector<Rat>> a(n, std::vector<Rat>(2 * n));
    for (int j = 0; j < n; ++j) {
        for (const auto& [i, c] : cols[j]) a[i][j] = c;
        a[j][n + j] = 1;
    }
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (a[r][col] != 0) { piv = r; break; }
        if (piv < 0) return std::nullopt;
        std::swap(a[piv], a[col]);
        Rat inv = Rat(1) / a[col][col];
        for (int j = col; j < 2 * n; ++j) a[col][j] *= inv;
        for (int r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            Rat f = a[r][col];
            for (int j = col; j < 2 * n; ++j) a[r][j] -= f * a[col][j];
        }
    }
    std::vector<SparseVec> out(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (a[i][n + j] != 0) out[j].emplace_back(i, a[i][n + j]);
    return out;
}

inline std::vector<SparseVec> compose_columns(const std::vector<SparseVec>& f,
                                              const std::vector<SparseVec>& g) {
    // column j of f.g
    std::vector<SparseVec> out(g.size());
    for (size_t j = 0; j < g.size(); ++j) {
        for (const auto& [mid, c1] : g[j])
            for (const auto& [i, c2] : f[mid]) out[j].emplace_back(i, c1 * c2);
        aggregate(out[j]);
    }
    return out;
}

inline bool is_identity(const std::vector<SparseVec>& cols) {
    for (size_t j = 0; j < cols.size(); ++j)
        if (!(cols[j].size() == 1 && cols[j][0].first == static_cast<int>(j) &&
              cols[j][0].second == 1))
            return false;
    return true;
}

/// A sum of scalar-weighted basis tensors of arity <= 5, rewritten step by step.
struct TermState {
    int arity = 0;
    std::vector<std::pair<std::array<int, 5>, Rat>> terms;
};

struct TermBudget {
    std::uint64_t spent = 0;
    std::uint64_t cap = 10'000'000;
    void charge(std::uint64_t n) {
        spent += n;
        if (spent > cap)
            throw input_error("verification refused: term budget " + std::to_string(cap) +
                              " exceeded (raise it with --max-dim)");
    }
};

inline TermState pure(std::initializer_list<int> idx) {
    TermState s;
    s.arity = static_cast<int>(idx.size());
    std::array<int, 5> a{};
    int p = 0;
    for (int v : idx) a[p++] = v;
    s.terms.emplace_back(a, Rat(1));
    return s;
}

inline void swap_slots(TermState& s, int i, int j) {
    for (auto& [idx, c] : s.terms) std::swap(idx[i], idx[j]);
}

template <class M>
TermState apply_trilinear(const M& alg, const TermState& s, int pos, TermBudget& budget) {
    TermState out;
    out.arity = s.arity - 2;
    for (const auto& [idx, c] : s.terms) {
        auto it = alg.m.find(alg.key3(idx[pos], idx[pos + 1], idx[pos + 2]));
        if (it == alg.m.end()) continue;
        for (const auto& [o, mc] : it->second) {
            std::array<int, 5> n{};
            for (int t = 0; t < pos; ++t) n[t] = idx[t];
            n[pos] = o;
            for (int t = pos + 3; t < s.arity; ++t) n[t - 2] = idx[t];
            out.terms.emplace_back(n, c * mc);
        }
        budget.charge(it->second.size());
    }
    return out;
}

inline TermState apply_recoupling(const SparseTrilinearSystem& alg, const TermState& s, int pos,
                                  TermBudget& budget) {
    TermState out;
    out.arity = s.arity;
    for (const auto& [idx, c] : s.terms) {
        auto it = alg.mbar.find(alg.key2(idx[pos], idx[pos + 1]));
        if (it == alg.mbar.end()) continue;
        for (const auto& [pq, mc] : it->second) {
            std::array<int, 5> n = idx;
            n[pos] = pq.first;
            n[pos + 1] = pq.second;
            out.terms.emplace_back(n, c * mc);
        }
        budget.charge(it->second.size());
    }
    return out;
}

inline TermState apply_slotmap(const std::vector<SparseVec>& cols, const TermState& s, int pos,
                               TermBudget& budget) {
    TermState out;
    out.arity = s.arity;
    for (const auto& [idx, c] : s.terms) {
        for (const auto& [o, mc] : cols[idx[pos]]) {
            std::array<int, 5> n = idx;
            n[pos] = o;
            out.terms.emplace_back(n, c * mc);
        }
        budget.charge(cols[idx[pos]].size());
    }
    return out;
}

inline void normalize(TermState& s) {
    std::sort(s.terms.begin(), s.terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<std::array<int, 5>, Rat>> out;
    for (auto& [idx, c] : s.terms) {
        if (!out.empty() && out.back().first == idx)
            out.back().second += c;
        else
            out.emplace_back(idx, c);
    }
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const auto& p) { return p.second == 0; }),
              out.end());
    s.terms = std::move(out);
}

inline bool states_equal(TermState a, TermState b) {
    normalize(a);
    normalize(b);
    return a.arity == b.arity && a.terms == b.terms;
}

template <class Alg>
std::string tuple_witness(const Alg& alg, std::initializer_list<int> idx) {
    std::string s = "(";
    bool first = true;
    for (int i : idx) {
        if (!first) s += ", ";
        s += alg.name(i);
        first = false;
    }
    return s + ")";
}

}  // namespace detail

inline SparseTrilinearSystem make_system(
    int dim, std::vector<std::string> names,
    const std::vector<std::tuple<int, int, int, int, Rat>>& m_entries,
    const std::vector<std::tuple<int, int, int, int, Rat>>& mbar_entries,
    const std::vector<std::tuple<int, int, Rat>>& p_entries) {
    if (dim <= 0) throw input_error("dimension must be positive");
    SparseTrilinearSystem s;
    s.dim = dim;
    s.names = std::move(names);
    detail::default_names(dim, s.names);
    if (static_cast<int>(s.names.size()) != dim)
        throw input_error("wrong number of basis names");
    for (const auto& [i, j, k, o, c] : m_entries) {
        detail::check_index(i, dim, "m");
        detail::check_index(j, dim, "m");
        detail::check_index(k, dim, "m");
        detail::check_index(o, dim, "m");
        s.m[s.key3(i, j, k)].emplace_back(o, c);
    }
    for (const auto& [i, j, p, q, c] : mbar_entries) {
        detail::check_index(i, dim, "mbar");
        detail::check_index(j, dim, "mbar");
        detail::check_index(p, dim, "mbar");
        detail::check_index(q, dim, "mbar");
        s.mbar[s.key2(i, j)].emplace_back(std::make_pair(p, q), c);
    }
    s.P.assign(dim, {});
    for (const auto& [i, o, c] : p_entries) {
        detail::check_index(i, dim, "P");
        detail::check_index(o, dim, "P");
        s.P[i].emplace_back(o, c);
    }
    detail::aggregate_map(s.m);
    detail::aggregate_map(s.mbar);
    for (auto& col : s.P) detail::aggregate(col);
    if (!detail::invert_columns(s.P)) throw input_error("P is not invertible");
    return s;
}

inline StrongThreeAlgebra make_strong(
    int dim, std::vector<std::string> names,
    const std::vector<std::tuple<int, int, int, int, Rat>>& m_entries,
    const std::vector<std::tuple<int, int, Rat>>& u_entries,
    const std::vector<std::tuple<int, int, Rat>>& p_entries) {
    if (dim <= 0) throw input_error("dimension must be positive");
    StrongThreeAlgebra s;
    s.dim = dim;
    s.names = std::move(names);
    detail::default_names(dim, s.names);
    if (static_cast<int>(s.names.size()) != dim)
        throw input_error("wrong number of basis names");
    for (const auto& [i, j, k, o, c] : m_entries) {
        detail::check_index(i, dim, "m");
        detail::check_index(j, dim, "m");
        detail::check_index(k, dim, "m");
        detail::check_index(o, dim, "m");
        s.m[s.key3(i, j, k)].emplace_back(o, c);
    }
    s.P.assign(dim, {});
    for (const auto& [i, o, c] : p_entries) {
        detail::check_index(i, dim, "P");
        detail::check_index(o, dim, "P");
        s.P[i].emplace_back(o, c);
    }
    for (const auto& [p, q, c] : u_entries) {
        detail::check_index(p, dim, "u");
        detail::check_index(q, dim, "u");
        if (c != 0) s.u.emplace_back(p, q, c);
    }
    detail::aggregate_map(s.m);
    for (auto& col : s.P) detail::aggregate(col);
    if (!detail::invert_columns(s.P)) throw input_error("P is not invertible");
    if (s.u.empty()) throw input_error("u must be non-empty");
    return s;
}

/// The recoupling map determined by m and u:
///   derived(a (x) b) = sum over u-terms of m(a, b, u_first) (x) u_second.
inline std::unordered_map<std::uint64_t, SparsePairVec> derive_mtilde(
    const StrongThreeAlgebra& s) {
    std::unordered_map<std::uint64_t, SparsePairVec> out;
    for (int i = 0; i < s.dim; ++i)
        for (int j = 0; j < s.dim; ++j) {
            SparsePairVec acc;
            for (const auto& [p, q, cu] : s.u) {
                auto it = s.m.find(s.key3(i, j, p));
                if (it == s.m.end()) continue;
                for (const auto& [o, cm] : it->second)
                    acc.emplace_back(std::make_pair(o, q), cu * cm);
            }
            detail::aggregate(acc);
            if (!acc.empty()) out[static_cast<std::uint64_t>(i) * s.dim + j] = std::move(acc);
        }
    return out;
}

/// Forget u, keep m and P, and install the derived recoupling map.
inline SparseTrilinearSystem system_with_derived_recoupling(const StrongThreeAlgebra& s) {
    SparseTrilinearSystem sys;
    sys.dim = s.dim;
    sys.names = s.names;
    sys.m = s.m;
    sys.P = s.P;
    sys.mbar = derive_mtilde(s);
    return sys;
}

/// Default cap on the dimension for the axiom checks whose domains are the third
/// through fifth tensor powers of the space.
inline constexpr int kDefaultAlgebraDimCap = 40;

/// Exhaustive check of the seven trilinear-system axioms (plus P having order 3,
/// checked first) on all basis tuples, as exact rational identities.
inline CheckReport verify_three_algebra(const SparseTrilinearSystem& alg,
                                        int dim_cap = kDefaultAlgebraDimCap,
                                        std::uint64_t term_budget = 10'000'000) {
    using namespace detail;
    CheckReport rep;
    auto inv = invert_columns(alg.P);
    if (!inv) throw input_error("P is not invertible");
    const auto& pinv = *inv;
    const int d = alg.dim;
    TermBudget budget;
    budget.cap = term_budget;

    {
        auto p3 = compose_columns(alg.P, compose_columns(alg.P, alg.P));
        CheckItem it{"rotation-order-3", is_identity(p3), ""};
        if (!it.pass) {
            for (int j = 0; j < d; ++j)
                if (!(p3[j].size() == 1 && p3[j][0].first == j && p3[j][0].second == 1)) {
                    it.witness = "P^3(" + alg.name(j) + ") != " + alg.name(j);
                    break;
                }
        }
        rep.items.push_back(std::move(it));
    }

    if (d > dim_cap)
        throw input_error("axiom verification refused at dimension " + std::to_string(d) +
                          " (cap " + std::to_string(dim_cap) + "; raise it with --max-dim)");

    // pentagon: m(m(a,b,c),d,e) vs recoupling of (b,d) threaded through two products
    {
        CheckItem it{"pentagon", true, ""};
        for (int a = 0; a < d && it.pass; ++a)
            for (int b = 0; b < d && it.pass; ++b)
                for (int c = 0; c < d && it.pass; ++c)
                    for (int dd = 0; dd < d && it.pass; ++dd) {
                        const bool lhs_live = alg.m.count(alg.key3(a, b, c)) > 0;
                        const bool rhs_live = alg.mbar.count(alg.key2(b, dd)) > 0;
                        if (!lhs_live && !rhs_live) continue;
                        for (int e = 0; e < d && it.pass; ++e) {
                            TermState l = pure({a, b, c, dd, e});
                            l = apply_trilinear(alg, l, 0, budget);
                            l = apply_trilinear(alg, l, 0, budget);
                            TermState r = pure({a, b, c, dd, e});
                            swap_slots(r, 2, 3);
                            r = apply_recoupling(alg, r, 1, budget);
                            swap_slots(r, 2, 3);
                            r = apply_trilinear(alg, r, 2, budget);
                            r = apply_trilinear(alg, r, 0, budget);
                            if (!states_equal(l, r)) {
                                it.pass = false;
                                it.witness = tuple_witness(alg, {a, b, c, dd, e});
                            }
                        }
                    }
        rep.items.push_back(std::move(it));
    }

    // left recoupling exchange
    {
        CheckItem it{"left-exchange", true, ""};
        for (int a = 0; a < d && it.pass; ++a)
            for (int b = 0; b < d && it.pass; ++b)
                for (int c = 0; c < d && it.pass; ++c)
                    for (int dd = 0; dd < d && it.pass; ++dd) {
                        TermState l = pure({a, b, c, dd});
                        l = apply_recoupling(alg, l, 0, budget);
                        swap_slots(l, 1, 2);
                        l = apply_trilinear(alg, l, 1, budget);
                        TermState r = pure({a, b, c, dd});
                        swap_slots(r, 1, 2);
                        r = apply_slotmap(alg.P, r, 0, budget);
                        r = apply_slotmap(alg.P, r, 1, budget);
                        r = apply_recoupling(alg, r, 0, budget);
                        r = apply_slotmap(pinv, r, 0, budget);
                        swap_slots(r, 0, 1);
                        r = apply_trilinear(alg, r, 1, budget);
                        r = apply_recoupling(alg, r, 0, budget);
                        if (!states_equal(l, r)) {
                            it.pass = false;
                            it.witness = tuple_witness(alg, {a, b, c, dd});
                        }
                    }
        rep.items.push_back(std::move(it));
    }

    // recoupling of a product
    {
        CheckItem it{"product-recoupling", true, ""};
        const auto p2 = compose_columns(alg.P, alg.P);
        for (int a = 0; a < d && it.pass; ++a)
            for (int b = 0; b < d && it.pass; ++b)
                for (int c = 0; c < d && it.pass; ++c)
                    for (int dd = 0; dd < d && it.pass; ++dd) {
                        TermState l = pure({a, b, c, dd});
                        l = apply_trilinear(alg, l, 0, budget);
                        l = apply_recoupling(alg, l, 0, budget);
                        TermState r = pure({a, b, c, dd});
                        swap_slots(r, 1, 2);
                        swap_slots(r, 0, 1);
                        r = apply_recoupling(alg, r, 2, budget);
                        r = apply_recoupling(alg, r, 1, budget);
                        r = apply_slotmap(p2, r, 0, budget);
                        swap_slots(r, 0, 1);
                        r = apply_trilinear(alg, r, 1, budget);
                        if (!states_equal(l, r)) {
                            it.pass = false;
                            it.witness = tuple_witness(alg, {a, b, c, dd});
                        }
                    }
        rep.items.push_back(std::move(it));
    }

    // recoupling coassociativity
    {
        CheckItem it{"recoupling-coassociativity", true, ""};
        for (int a = 0; a < d && it.pass; ++a)
            for (int b = 0; b < d && it.pass; ++b)
                for (int c = 0; c < d && it.pass; ++c) {
                    TermState l = pure({a, b, c});
                    l = apply_recoupling(alg, l, 1, budget);
                    swap_slots(l, 0, 1);
                    l = apply_recoupling(alg, l, 1, budget);
                    TermState r = pure({a, b, c});
                    r = apply_slotmap(pinv, r, 1, budget);
                    r = apply_recoupling(alg, r, 0, budget);
                    r = apply_slotmap(alg.P, r, 0, budget);
                    r = apply_slotmap(alg.P, r, 1, budget);
                    r = apply_recoupling(alg, r, 1, budget);
                    r = apply_recoupling(alg, r, 0, budget);
                    if (!states_equal(l, r)) {
                        it.pass = false;
                        it.witness = tuple_witness(alg, {a, b, c});
                    }
                }
        rep.items.push_back(std::move(it));
    }

    // right recoupling exchange
    {
        CheckItem it{"right-exchange", true, ""};
        const auto p2 = compose_columns(alg.P, alg.P);
        for (int a = 0; a < d && it.pass; ++a)
            for (int b = 0; b < d && it.pass; ++b)
                for (int c = 0; c < d && it.pass; ++c)
                    for (int dd = 0; dd < d && it.pass; ++dd) {
                        TermState l = pure({a, b, c, dd});
                        l = apply_recoupling(alg, l, 0, budget);
                        l = apply_slotmap(p2, l, 2, budget);
                        swap_slots(l, 1, 2);
                        l = apply_trilinear(alg, l, 1, budget);
                        TermState r = pure({a, b, c, dd});
                        r = apply_recoupling(alg, r, 2, budget);
                        r = apply_trilinear(alg, r, 0, budget);
                        if (!states_equal(l, r)) {
                            it.pass = false;
                            it.witness = tuple_witness(alg, {a, b, c, dd});
                        }
                    }
        rep.items.push_back(std::move(it));
    }

    // rotation equivariance of the product
    {
        CheckItem it{"rotation-equivariance", true, ""};
        for (int a = 0; a < d && it.pass; ++a)
            for (int b = 0; b < d && it.pass; ++b)
                for (int c = 0; c < d && it.pass; ++c) {
                    TermState l = pure({a, b, c});
                    l = apply_trilinear(alg, l, 0, budget);
                    l = apply_slotmap(alg.P, l, 0, budget);
                    TermState r = pure({a, b, c});
                    swap_slots(r, 0, 1);
                    swap_slots(r, 1, 2);
                    r = apply_slotmap(alg.P, r, 0, budget);
                    r = apply_slotmap(alg.P, r, 1, budget);
                    r = apply_slotmap(alg.P, r, 2, budget);
                    r = apply_trilinear(alg, r, 0, budget);
                    if (!states_equal(l, r)) {
                        it.pass = false;
                        it.witness = tuple_witness(alg, {a, b, c});
                    }
                }
        rep.items.push_back(std::move(it));
    }

    // recoupling commutes with the twisted flip
    {
        CheckItem it{"recoupling-rotation-commute", true, ""};
        auto p2 = compose_columns(alg.P, alg.P);
        for (int a = 0; a < d && it.pass; ++a)
            for (int b = 0; b < d && it.pass; ++b) {
                TermState l = pure({a, b});
                swap_slots(l, 0, 1);
                l = apply_slotmap(p2, l, 0, budget);
                l = apply_slotmap(alg.P, l, 1, budget);
                l = apply_recoupling(alg, l, 0, budget);
                TermState r = pure({a, b});
                r = apply_recoupling(alg, r, 0, budget);
                swap_slots(r, 0, 1);
                r = apply_slotmap(p2, r, 0, budget);
                r = apply_slotmap(alg.P, r, 1, budget);
                if (!states_equal(l, r)) {
                    it.pass = false;
                    it.witness = tuple_witness(alg, {a, b});
                }
            }
        rep.items.push_back(std::move(it));
    }

    return rep;
}

/// Columns of the endomorphism Q of the square built from two recouplings and
/// rotations; Q(e_a (x) e_b) as a sparse pair vector.
inline std::vector<SparsePairVec> square_projector_columns(const SparseTrilinearSystem& alg) {
    using namespace detail;
    const int d = alg.dim;
    TermBudget budget;
    auto p2 = compose_columns(alg.P, alg.P);
    std::vector<SparsePairVec> cols(static_cast<size_t>(d) * d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            TermState s = pure({a, b});
            s = apply_recoupling(alg, s, 0, budget);
            s = apply_slotmap(alg.P, s, 0, budget);
            s = apply_slotmap(alg.P, s, 1, budget);
            s = apply_recoupling(alg, s, 0, budget);
            swap_slots(s, 0, 1);
            s = apply_slotmap(p2, s, 1, budget);
            normalize(s);
            SparsePairVec col;
            for (const auto& [idx, c] : s.terms)
                col.emplace_back(std::make_pair(idx[0], idx[1]), c);
            cols[static_cast<size_t>(a) * d + b] = std::move(col);
        }
    return cols;
}

/// Default cap on the dimension for the orthogonality check (its kernel
/// computation is dense in the square).
inline constexpr int kDefaultOrthogonalDimCap = 20;

/// Orthogonality: Q (from the recoupling data) is a projection and the product
/// annihilates (ker Q) (x) A.
inline CheckReport verify_orthogonal(const SparseTrilinearSystem& alg,
                                     int dim_cap = kDefaultOrthogonalDimCap) {
    using namespace detail;
    CheckReport rep;
    const int d = alg.dim;
    if (d > dim_cap)
        throw input_error("orthogonality check refused at dimension " + std::to_string(d) +
                          " (cap " + std::to_string(dim_cap) + "; raise it with --max-dim)");
    auto qcols = square_projector_columns(alg);
    const int N = d * d;

    {
        CheckItem it{"square-projector-idempotent", true, ""};
        for (int j = 0; j < N && it.pass; ++j) {
            SparsePairVec twice;
            for (const auto& [pq, c] : qcols[j]) {
                const auto& col = qcols[static_cast<size_t>(pq.first) * d + pq.second];
                for (const auto& [rs, c2] : col) twice.emplace_back(rs, c * c2);
            }
            aggregate(twice);
            SparsePairVec once = qcols[j];
            aggregate(once);
            if (twice != once) {
                it.pass = false;
                it.witness = "(" + alg.name(j / d) + ", " + alg.name(j % d) + ")";
            }
        }
        rep.items.push_back(std::move(it));
    }

    // kernel of Q by dense rational elimination over the square
    std::vector<std::vector<Rat>> cols(N, std::vector<Rat>(N));
    for (int j = 0; j < N; ++j)
        for (const auto& [pq, c] : qcols[j]) cols[j][pq.first * d + pq.second] = c;
    std::vector<std::vector<Rat>> combo(N, std::vector<Rat>(N));
    for (int j = 0; j < N; ++j) combo[j][j] = 1;
    std::vector<int> pivot_row_of_col;
    int rank = 0;
    for (int row = 0; row < N && rank < N; ++row) {
        int piv = -1;
        for (int j = rank; j < N; ++j)
            if (cols[j][row] != 0) { piv = j; break; }
        if (piv < 0) continue;
        std::swap(cols[piv], cols[rank]);
        std::swap(combo[piv], combo[rank]);
        for (int j = 0; j < N; ++j) {
            if (j == rank || cols[j][row] == 0) continue;
            Rat f = cols[j][row] / cols[rank][row];
            for (int i = row; i < N; ++i) cols[j][i] -= f * cols[rank][i];
            for (int i = 0; i < N; ++i) combo[j][i] -= f * combo[rank][i];
        }
        ++rank;
    }

    {
        CheckItem it{"kernel-annihilation", true, ""};
        for (int j = rank; j < N && it.pass; ++j) {
            // kernel vector: sum over (a,b) of combo[j][a*d+b] e_a (x) e_b
            for (int z = 0; z < alg.dim && it.pass; ++z) {
                SparseVec img;
                for (int ab = 0; ab < N; ++ab) {
                    if (combo[j][ab] == 0) continue;
                    auto itm = alg.m.find(alg.key3(ab / d, ab % d, z));
                    if (itm == alg.m.end()) continue;
                    for (const auto& [o, c] : itm->second) img.emplace_back(o, combo[j][ab] * c);
                }
                aggregate(img);
                if (!img.empty()) {
                    it.pass = false;
                    it.witness = "kernel vector " + std::to_string(j - rank) + " with third slot " +
                                 alg.name(z);
                }
            }
        }
        rep.items.push_back(std::move(it));
    }
    return rep;
}

/// The five defining identities of the strong structure, checked exhaustively:
/// the symmetry of u, P of order 3, rotation equivariance, the exchange identity
/// tying u to the product, and the five-fold product identity.
inline CheckReport verify_strong(const StrongThreeAlgebra& alg,
                                 int dim_cap = kDefaultAlgebraDimCap,
                                 std::uint64_t term_budget = 10'000'000) {
    using namespace detail;
    CheckReport rep;
    const int d = alg.dim;
    if (!invert_columns(alg.P)) throw input_error("P is not invertible");
    auto p2 = compose_columns(alg.P, alg.P);

    {
        // u-symmetry: sum u1 (x) u2 = sum P^2(u2) (x) P(u1), compared as tensors
        CheckItem it{"unit-symmetry", true, ""};
        SparsePairVec lhs, rhs;
        for (const auto& [p, q, c] : alg.u) {
            lhs.emplace_back(std::make_pair(p, q), c);
            for (const auto& [x, cx] : p2[q])
                for (const auto& [y, cy] : alg.P[p])
                    rhs.emplace_back(std::make_pair(x, y), c * cx * cy);
        }
        aggregate(lhs);
        aggregate(rhs);
        if (lhs != rhs) it.pass = false;
        rep.items.push_back(std::move(it));
    }

    {
        auto p3 = compose_columns(alg.P, p2);
        CheckItem it{"rotation-order-3", is_identity(p3), ""};
        rep.items.push_back(std::move(it));
    }

    if (d > dim_cap)
        throw input_error("axiom verification refused at dimension " + std::to_string(d) +
                          " (cap " + std::to_string(dim_cap) + "; raise it with --max-dim)");

    TermBudget budget;
    budget.cap = term_budget;

    {
        CheckItem it{"rotation-equivariance", true, ""};
        for (int a = 0; a < d && it.pass; ++a)
            for (int b = 0; b < d && it.pass; ++b)
                for (int c = 0; c < d && it.pass; ++c) {
                    TermState l = pure({a, b, c});
                    l = apply_trilinear(alg, l, 0, budget);
                    l = apply_slotmap(alg.P, l, 0, budget);
                    TermState r = pure({b, c, a});
                    r = apply_slotmap(alg.P, r, 0, budget);
                    r = apply_slotmap(alg.P, r, 1, budget);
                    r = apply_slotmap(alg.P, r, 2, budget);
                    r = apply_trilinear(alg, r, 0, budget);
                    if (!states_equal(l, r)) {
                        it.pass = false;
                        it.witness = tuple_witness(alg, {a, b, c});
                    }
                }
        rep.items.push_back(std::move(it));
    }

    {
        // sum m(P(b), a, u1) (x) u2  =  sum u1 (x) m(b, u2, a)
        CheckItem it{"unit-exchange", true, ""};
        for (int a = 0; a < d && it.pass; ++a)
            for (int b = 0; b < d && it.pass; ++b) {
                SparsePairVec lhs, rhs;
                for (const auto& [p, q, cu] : alg.u) {
                    for (const auto& [pb, cb] : alg.P[b]) {
                        auto itm = alg.m.find(alg.key3(pb, a, p));
                        if (itm == alg.m.end()) continue;
                        for (const auto& [o, cm] : itm->second)
                            lhs.emplace_back(std::make_pair(o, q), cu * cb * cm);
                    }
                    auto itm = alg.m.find(alg.key3(b, q, a));
                    if (itm != alg.m.end())
                        for (const auto& [o, cm] : itm->second)
                            rhs.emplace_back(std::make_pair(p, o), cu * cm);
                }
                aggregate(lhs);
                aggregate(rhs);
                if (lhs != rhs) {
                    it.pass = false;
                    it.witness = tuple_witness(alg, {a, b});
                }
            }
        rep.items.push_back(std::move(it));
    }

    {
        // m(m(a,b,c),d,e) = sum m(a, m(b,d,u1), m(c,u2,e))
        CheckItem it{"pentagon", true, ""};
        // memo: for each (b,d), the expansion sum_{u} m(b,d,u1) (x) u2
        std::vector<SparsePairVec> inner(static_cast<size_t>(d) * d);
        std::vector<bool> inner_live(static_cast<size_t>(d) * d, false);
        for (int b = 0; b < d; ++b)
            for (int dd = 0; dd < d; ++dd) {
                SparsePairVec acc;
                for (const auto& [p, q, cu] : alg.u) {
                    auto itm = alg.m.find(alg.key3(b, dd, p));
                    if (itm == alg.m.end()) continue;
                    for (const auto& [o, cm] : itm->second)
                        acc.emplace_back(std::make_pair(o, q), cu * cm);
                }
                aggregate(acc);
                inner_live[static_cast<size_t>(b) * d + dd] = !acc.empty();
                inner[static_cast<size_t>(b) * d + dd] = std::move(acc);
            }
        for (int a = 0; a < d && it.pass; ++a)
            for (int b = 0; b < d && it.pass; ++b)
                for (int c = 0; c < d && it.pass; ++c)
                    for (int dd = 0; dd < d && it.pass; ++dd) {
                        const bool lhs_live = alg.m.count(alg.key3(a, b, c)) > 0;
                        if (!lhs_live && !inner_live[static_cast<size_t>(b) * d + dd]) continue;
                        for (int e = 0; e < d && it.pass; ++e) {
                            SparseVec lhs, rhs;
                            if (lhs_live)
                                for (const auto& [o, c1] :
                                     alg.m.at(alg.key3(a, b, c))) {
                                    auto it2 = alg.m.find(alg.key3(o, dd, e));
                                    if (it2 == alg.m.end()) continue;
                                    for (const auto& [o2, c2] : it2->second)
                                        lhs.emplace_back(o2, c1 * c2);
                                }
                            for (const auto& [xq, c1] :
                                 inner[static_cast<size_t>(b) * d + dd]) {
                                auto it2 = alg.m.find(alg.key3(c, xq.second, e));
                                if (it2 == alg.m.end()) continue;
                                for (const auto& [y, c2] : it2->second) {
                                    auto it3 = alg.m.find(alg.key3(a, xq.first, y));
                                    if (it3 == alg.m.end()) continue;
                                    for (const auto& [o3, c3] : it3->second)
                                        rhs.emplace_back(o3, c1 * c2 * c3);
                                }
                            }
                            budget.charge(1 + lhs.size() + rhs.size());
                            aggregate(lhs);
                            aggregate(rhs);
                            if (lhs != rhs) {
                                it.pass = false;
                                it.witness = tuple_witness(alg, {a, b, c, dd, e});
                            }
                        }
                    }
        rep.items.push_back(std::move(it));
    }

    return rep;
}

/// Agreement required by the equivalence between the strong identities and the
/// full axiom list run against the derived recoupling map.  The symmetry of u is
/// a standing assumption and is enforced here.
inline bool derived_system_crosscheck(const StrongThreeAlgebra& s,
                              int dim_cap = kDefaultAlgebraDimCap,
                              std::uint64_t term_budget = 10'000'000) {
    CheckReport strong_rep = verify_strong(s, dim_cap, term_budget);
    for (const auto& it : strong_rep.items)
        if (it.name == "unit-symmetry" && !it.pass)
            throw input_error("crosscheck requires the u-symmetry identity to hold");
    CheckReport alg_rep =
        verify_three_algebra(system_with_derived_recoupling(s), dim_cap, term_budget);
    return strong_rep.all_pass() == alg_rep.all_pass();
}

// ---------------------------------------------------------------------------
// Recoupling-symbol data (the |a b c; i j k| tables)

struct SixJData {
    int n = 0;                // size of the index set
    std::vector<Rat> f;       // n^6 values, index ((((a*n+b)*n+c)*n+i)*n+j)*n+k
    std::vector<Rat> w;       // n weights

    const Rat& symbol(int a, int b, int c, int i, int j, int k) const {
        return f[((((static_cast<size_t>(a) * n + b) * n + c) * n + i) * n + j) * n + k];
    }
};

namespace detail {

inline std::array<int, 6> sixj_col_swap(std::array<int, 6> t) {
    return {t[1], t[0], t[2], t[4], t[3], t[5]};
}
inline std::array<int, 6> sixj_col_cycle(std::array<int, 6> t) {
    return {t[1], t[2], t[0], t[4], t[5], t[3]};
}
inline std::array<int, 6> sixj_row_flip(std::array<int, 6> t) {
    return {t[3], t[4], t[2], t[0], t[1], t[5]};
}

inline size_t sixj_index(int n, const std::array<int, 6>& t) {
    size_t idx = 0;
    for (int v : t) idx = idx * n + v;
    return idx;
}

}  // namespace detail

/// Validates the symbol table's invariance under column permutations and paired
/// row flips (the order-24 symmetry used for such tables).
inline SixJData make_sixj(int n, std::vector<Rat> f, std::vector<Rat> w) {
    if (n <= 0) throw input_error("index set must be non-empty");
    SixJData d;
    d.n = n;
    d.f = std::move(f);
    d.w = std::move(w);
    if (d.f.size() != static_cast<size_t>(n) * n * n * n * n * n)
        throw input_error("symbol table has wrong size");
    if (d.w.size() != static_cast<size_t>(n)) throw input_error("weight table has wrong size");
    std::array<int, 6> t{};
    for (size_t idx = 0; idx < d.f.size(); ++idx) {
        size_t rest = idx;
        for (int p = 5; p >= 0; --p) {
            t[p] = static_cast<int>(rest % n);
            rest /= n;
        }
        for (auto img : {detail::sixj_col_swap(t), detail::sixj_col_cycle(t),
                         detail::sixj_row_flip(t)}) {
            if (d.f[detail::sixj_index(n, img)] != d.f[idx])
                throw input_error("symbol table breaks the required symmetry at index " +
                                  std::to_string(idx));
        }
    }
    return d;
}

/// Random symmetric symbol data: one random value per symmetry orbit, plus
/// random nonzero weights.  Deterministic in the seed.
inline SixJData random_sixj(int n, std::uint64_t seed) {
    const size_t total = static_cast<size_t>(n) * n * n * n * n * n;
    std::vector<Rat> f(total, Rat(0));
    std::vector<char> seen(total, 0);
    std::mt19937_64 rng(seed);
    auto draw = [&rng]() {
        static const int nums[] = {0, 1, -1, 2, 1, -2, 3, 1};
        static const int dens[] = {1, 1, 2, 1, 3, 1, 2, 1};
        size_t p = rng() % 8;
        return Rat(nums[p], dens[p]);
    };
    std::array<int, 6> t{};
    for (size_t idx = 0; idx < total; ++idx) {
        if (seen[idx]) continue;
        Rat v = draw();
        // close the orbit under the three generators
        std::vector<size_t> stack{idx};
        seen[idx] = 1;
        f[idx] = v;
        while (!stack.empty()) {
            size_t cur = stack.back();
            stack.pop_back();
            size_t rest = cur;
            for (int p = 5; p >= 0; --p) {
                t[p] = static_cast<int>(rest % n);
                rest /= n;
            }
            for (auto img : {detail::sixj_col_swap(t), detail::sixj_col_cycle(t),
                             detail::sixj_row_flip(t)}) {
                size_t j = detail::sixj_index(n, img);
                if (!seen[j]) {
                    seen[j] = 1;
                    f[j] = v;
                    stack.push_back(j);
                }
            }
        }
    }
    std::vector<Rat> w(n);
    for (auto& v : w) {
        const int num = 1 + static_cast<int>(rng() % 3);
        const int den = 1 + static_cast<int>(rng() % 2);
        v = Rat(num, den);
    }
    return make_sixj(n, std::move(f), std::move(w));
}

/// The nine-variable polynomial identity on the symbol table that is equivalent
/// to the derived algebra satisfying all axioms.
inline bool check_sixj_identity(const SixJData& d) {
    const int n = d.n;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int e = 0; e < n; ++e)
                    for (int ff = 0; ff < n; ++ff)
                        for (int j1 = 0; j1 < n; ++j1)
                            for (int j2 = 0; j2 < n; ++j2)
                                for (int j3 = 0; j3 < n; ++j3)
                                    for (int j23 = 0; j23 < n; ++j23) {
                                        Rat lhs = 0;
                                        for (int j = 0; j < n; ++j)
                                            lhs += d.w[j] * d.w[j] *
                                                   d.symbol(e, j3, j, j2, a, j23) *
                                                   d.symbol(j, c, j1, b, a, j2) *
                                                   d.symbol(j3, c, ff, j1, e, j);
                                        Rat rhs = d.symbol(j3, c, ff, b, j23, j2) *
                                                  d.symbol(e, ff, j1, b, a, j23);
                                        if (lhs != rhs) return false;
                                    }
    return true;
}

/// Basis e(i,j,k) indexed by (i*n + j)*n + k; the product contracts matching
/// inner indices against the symbol, P cycles the three labels, and u pairs the
/// weights squared.
inline StrongThreeAlgebra build_sixj(const SixJData& d) {
    const int n = d.n;
    std::vector<std::string> names;
    names.reserve(static_cast<size_t>(n) * n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                names.push_back("e(" + std::to_string(i) + "," + std::to_string(j) + "," +
                                std::to_string(k) + ")");
    auto eidx = [n](int i, int j, int k) { return (i * n + j) * n + k; };
    std::vector<std::tuple<int, int, int, int, Rat>> m_entries;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        for (int k = 0; k < n; ++k) {
                            const Rat& v = d.symbol(a, b, c, i, j, k);
                            if (v == 0) continue;
                            m_entries.emplace_back(eidx(a, k, j), eidx(k, b, i), eidx(j, i, c),
                                                   eidx(a, b, c), v);
                        }
    std::vector<std::tuple<int, int, Rat>> p_entries;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                p_entries.emplace_back(eidx(i, j, k), eidx(j, k, i), Rat(1));
    std::vector<std::tuple<int, int, Rat>> u_entries;
    for (int j = 0; j < n; ++j)
        for (int uu = 0; uu < n; ++uu)
            for (int v = 0; v < n; ++v)
                u_entries.emplace_back(eidx(uu, v, j), eidx(uu, j, v), d.w[j] * d.w[j]);
    return make_strong(n * n * n, std::move(names), m_entries, u_entries, p_entries);
}

// ---------------------------------------------------------------------------
// Group-triple data (coefficient systems on khg = 1 triples)

struct MultiplicativeCocycle {
    GroupPtr group;
    std::vector<Rat> values;  // (g*o + h)*o + k -> nonzero rational

    const Rat& value(int g, int h, int k) const {
        const int o = group->order;
        return values[(static_cast<size_t>(g) * o + h) * o + k];
    }
};

inline MultiplicativeCocycle make_mult_cocycle(GroupPtr group, std::vector<Rat> values) {
    MultiplicativeCocycle c;
    const int o = group->order;
    if (values.size() != static_cast<size_t>(o) * o * o)
        throw input_error("cocycle table has wrong size");
    for (const auto& v : values)
        if (v == 0) throw input_error("cocycle values must be nonzero");
    c.group = std::move(group);
    c.values = std::move(values);
    return c;
}

inline MultiplicativeCocycle constant_one_cocycle(GroupPtr group) {
    const int o = group->order;
    return make_mult_cocycle(std::move(group),
                             std::vector<Rat>(static_cast<size_t>(o) * o * o, Rat(1)));
}

/// The four-fold symmetry required of the coefficient system.
inline bool check_dw_condition(const MultiplicativeCocycle& a) {
    const FiniteGroup& G = *a.group;
    for (int g = 0; g < G.order; ++g)
        for (int h = 0; h < G.order; ++h)
            for (int k = 0; k < G.order; ++k) {
                const Rat& base = a.value(g, h, k);
                int hk = G.mul(h, k), gh = G.mul(g, h);
                if (base != a.value(gh, k, G.inv(hk))) return false;
                if (base != a.value(G.inv(hk), G.inv(g), gh)) return false;
                if (base != a.value(hk, G.inv(k), G.inv(gh))) return false;
            }
    return true;
}

/// Basis: triples (g, h, (hg)^-1), indexed by (g, h); P cycles the triple; the
/// product matches adjacent inverses and multiplies by the coefficient; u pairs
/// each triple with its flip.
inline StrongThreeAlgebra build_dw(const MultiplicativeCocycle& alpha) {
    const FiniteGroup& G = *alpha.group;
    const int o = G.order;
    auto tidx = [o](int g, int h) { return g * o + h; };
    std::vector<std::string> names;
    names.reserve(static_cast<size_t>(o) * o);
    for (int g = 0; g < o; ++g)
        for (int h = 0; h < o; ++h)
            names.push_back("(" + G.name(g) + "," + G.name(h) + "," +
                            G.name(G.inv(G.mul(h, g))) + ")");
    std::vector<std::tuple<int, int, int, int, Rat>> m_entries;
    for (int x = 0; x < o; ++x)
        for (int y = 0; y < o; ++y)
            for (int q = 0; q < o; ++q) {
                const int z = G.inv(G.mul(y, x));
                const int p = G.inv(y);
                const int r = G.inv(G.mul(q, p));
                m_entries.emplace_back(tidx(x, y), tidx(p, q), tidx(G.inv(z), G.inv(r)),
                                       tidx(x, q), alpha.value(z, r, q));
            }
    std::vector<std::tuple<int, int, Rat>> p_entries;
    for (int g = 0; g < o; ++g)
        for (int h = 0; h < o; ++h)
            p_entries.emplace_back(tidx(g, h), tidx(h, G.inv(G.mul(h, g))), Rat(1));
    std::vector<std::tuple<int, int, Rat>> u_entries;
    for (int g = 0; g < o; ++g)
        for (int h = 0; h < o; ++h)
            u_entries.emplace_back(tidx(g, h), tidx(G.inv(g), G.mul(h, g)), Rat(1));
    return make_strong(o * o, std::move(names), m_entries, u_entries, p_entries);
}

/// All 3^(o^3) would be too many; this draws one +-1-valued table from the seed.
inline MultiplicativeCocycle random_sign_cocycle(GroupPtr group, std::uint64_t seed) {
    const int o = group->order;
    std::mt19937_64 rng(seed);
    std::vector<Rat> vals(static_cast<size_t>(o) * o * o);
    for (auto& v : vals) v = (rng() % 2 == 0) ? Rat(1) : Rat(-1);
    return make_mult_cocycle(std::move(group), std::move(vals));
}

/// One random perturbation of a single product structure constant (u and P are
/// left untouched).  Deterministic in the seed.
inline StrongThreeAlgebra perturb_mul(const StrongThreeAlgebra& s, std::uint64_t seed) {
    StrongThreeAlgebra out = s;
    std::mt19937_64 rng(seed);
    const int d = s.dim;
    const int i = static_cast<int>(rng() % d);
    const int j = static_cast<int>(rng() % d);
    const int k = static_cast<int>(rng() % d);
    const int o = static_cast<int>(rng() % d);
    auto& vec = out.m[out.key3(i, j, k)];
    vec.emplace_back(o, Rat(1));
    detail::aggregate(vec);
    if (vec.empty()) out.m.erase(out.key3(i, j, k));
    return out;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json algebra_to_json(const StrongThreeAlgebra& s) {
    nlohmann::json j;
    j["dim"] = s.dim;
    j["names"] = s.names;
    nlohmann::json m = nlohmann::json::array();
    std::vector<std::uint64_t> keys;
    for (const auto& [k, _] : s.m) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    for (auto k : keys) {
        const int i = static_cast<int>(k / (static_cast<std::uint64_t>(s.dim) * s.dim));
        const int jj = static_cast<int>((k / s.dim) % s.dim);
        const int kk = static_cast<int>(k % s.dim);
        for (const auto& [o, c] : s.m.at(k))
            m.push_back({i, jj, kk, o, rat_to_string(c)});
    }
    j["m"] = std::move(m);
    nlohmann::json p = nlohmann::json::array();
    for (int i = 0; i < s.dim; ++i)
        for (const auto& [o, c] : s.P[i]) p.push_back({i, o, rat_to_string(c)});
    j["P"] = std::move(p);
    nlohmann::json u = nlohmann::json::array();
    for (const auto& [pp, q, c] : s.u) u.push_back({pp, q, rat_to_string(c)});
    j["u"] = std::move(u);
    return j;
}

inline nlohmann::json system_to_json(const SparseTrilinearSystem& s) {
    nlohmann::json j;
    j["dim"] = s.dim;
    j["names"] = s.names;
    nlohmann::json m = nlohmann::json::array();
    std::vector<std::uint64_t> keys;
    for (const auto& [k, _] : s.m) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    for (auto k : keys) {
        const int i = static_cast<int>(k / (static_cast<std::uint64_t>(s.dim) * s.dim));
        const int jj = static_cast<int>((k / s.dim) % s.dim);
        const int kk = static_cast<int>(k % s.dim);
        for (const auto& [o, c] : s.m.at(k))
            m.push_back({i, jj, kk, o, rat_to_string(c)});
    }
    j["m"] = std::move(m);
    nlohmann::json mb = nlohmann::json::array();
    keys.clear();
    for (const auto& [k, _] : s.mbar) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    for (auto k : keys) {
        const int i = static_cast<int>(k / s.dim);
        const int jj = static_cast<int>(k % s.dim);
        for (const auto& [pq, c] : s.mbar.at(k))
            mb.push_back({i, jj, pq.first, pq.second, rat_to_string(c)});
    }
    j["mbar"] = std::move(mb);
    nlohmann::json p = nlohmann::json::array();
    for (int i = 0; i < s.dim; ++i)
        for (const auto& [o, c] : s.P[i]) p.push_back({i, o, rat_to_string(c)});
    j["P"] = std::move(p);
    return j;
}

namespace detail {

inline Rat json_rat(const nlohmann::json& v) {
    if (v.is_number_integer()) return Rat(v.get<long long>());
    if (v.is_string()) return rat_from_string(v.get<std::string>());
    throw input_error("expected a rational as integer or \"num/den\" string");
}

inline std::vector<std::string> json_names(const nlohmann::json& j, int dim) {
    std::vector<std::string> names;
    if (j.contains("names")) {
        names = j["names"].get<std::vector<std::string>>();
        if (static_cast<int>(names.size()) != dim)
            throw input_error("wrong number of basis names");
    }
    return names;
}

}  // namespace detail

inline StrongThreeAlgebra algebra_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("m") || !j.contains("P") ||
        !j.contains("u"))
        throw input_error("algebra json must contain dim, m, P, u");
    const int dim = j["dim"].get<int>();
    std::vector<std::tuple<int, int, int, int, Rat>> m_entries;
    for (const auto& e : j["m"]) {
        if (!e.is_array() || e.size() != 5) throw input_error("malformed m entry");
        m_entries.emplace_back(e[0].get<int>(), e[1].get<int>(), e[2].get<int>(),
                               e[3].get<int>(), detail::json_rat(e[4]));
    }
    std::vector<std::tuple<int, int, Rat>> u_entries;
    for (const auto& e : j["u"]) {
        if (!e.is_array() || e.size() != 3) throw input_error("malformed u entry");
        u_entries.emplace_back(e[0].get<int>(), e[1].get<int>(), detail::json_rat(e[2]));
    }
    std::vector<std::tuple<int, int, Rat>> p_entries;
    for (const auto& e : j["P"]) {
        if (!e.is_array() || e.size() != 3) throw input_error("malformed P entry");
        p_entries.emplace_back(e[0].get<int>(), e[1].get<int>(), detail::json_rat(e[2]));
    }
    return make_strong(dim, detail::json_names(j, dim), m_entries, u_entries, p_entries);
}

inline SparseTrilinearSystem system_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("m") || !j.contains("P") ||
        !j.contains("mbar"))
        throw input_error("system json must contain dim, m, P, mbar");
    const int dim = j["dim"].get<int>();
    std::vector<std::tuple<int, int, int, int, Rat>> m_entries;
    for (const auto& e : j["m"]) {
        if (!e.is_array() || e.size() != 5) throw input_error("malformed m entry");
        m_entries.emplace_back(e[0].get<int>(), e[1].get<int>(), e[2].get<int>(),
                               e[3].get<int>(), detail::json_rat(e[4]));
    }
    std::vector<std::tuple<int, int, int, int, Rat>> mbar_entries;
    for (const auto& e : j["mbar"]) {
        if (!e.is_array() || e.size() != 5) throw input_error("malformed mbar entry");
        mbar_entries.emplace_back(e[0].get<int>(), e[1].get<int>(), e[2].get<int>(),
                                  e[3].get<int>(), detail::json_rat(e[4]));
    }
    std::vector<std::tuple<int, int, Rat>> p_entries;
    for (const auto& e : j["P"]) {
        if (!e.is_array() || e.size() != 3) throw input_error("malformed P entry");
        p_entries.emplace_back(e[0].get<int>(), e[1].get<int>(), detail::json_rat(e[2]));
    }
    return make_system(dim, detail::json_names(j, dim), m_entries, mbar_entries, p_entries);
}

}  // namespace delta3

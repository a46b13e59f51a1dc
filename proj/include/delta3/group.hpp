#pragma once

#include <algorithm>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "json.hpp"

#include "delta3/rational.hpp"

namespace delta3 {

/// Finite group as a dense multiplication table.  Elements are the indices
/// 0..order-1; the identity is stored explicitly and need not be index 0.
struct FiniteGroup {
    int order = 0;
    std::vector<int> table;    // table[a*order+b] = a*b
    int identity = 0;
    std::vector<int> inverse;  // inverse[a]
    std::vector<std::string> names;

    int mul(int a, int b) const { return table[static_cast<size_t>(a) * order + b]; }
    int inv(int a) const { return inverse[a]; }
    const std::string& name(int a) const { return names[a]; }
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

/// Validates a multiplication table (closure, two-sided identity, inverses,
/// associativity) and produces the group.  Error messages name the first
/// offending element or triple.
inline GroupPtr group_from_table(const std::vector<std::vector<int>>& rows,
                                 std::vector<std::string> names = {}) {
    const int n = static_cast<int>(rows.size());
    if (n == 0) throw input_error("group table is empty");
    auto g = std::make_shared<FiniteGroup>();
    g->order = n;
    g->table.resize(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n)
            throw input_error("group table row " + std::to_string(i) + " has wrong length");
        for (int j = 0; j < n; ++j) {
            const int v = rows[i][j];
            if (v < 0 || v >= n)
                throw input_error("group table entry (" + std::to_string(i) + "," +
                                  std::to_string(j) + ") out of range");
            g->table[static_cast<size_t>(i) * n + j] = v;
        }
    }
    int id = -1;
    for (int e = 0; e < n; ++e) {
        bool ok = true;
        for (int a = 0; a < n && ok; ++a) ok = g->mul(e, a) == a && g->mul(a, e) == a;
        if (ok) { id = e; break; }
    }
    if (id < 0) throw input_error("group table has no two-sided identity");
    g->identity = id;
    g->inverse.assign(n, -1);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b)
            if (g->mul(a, b) == id && g->mul(b, a) == id) { g->inverse[a] = b; break; }
        if (g->inverse[a] < 0)
            throw input_error("group element " + std::to_string(a) + " has no inverse");
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (g->mul(g->mul(a, b), c) != g->mul(a, g->mul(b, c)))
                    throw input_error("group table not associative at (" + std::to_string(a) +
                                      "," + std::to_string(b) + "," + std::to_string(c) + ")");
    if (!names.empty()) {
        if (static_cast<int>(names.size()) != n)
            throw input_error("group names list has wrong length");
        g->names = std::move(names);
    } else {
        g->names.resize(n);
        for (int a = 0; a < n; ++a) g->names[a] = std::to_string(a);
    }
    return g;
}

inline GroupPtr cyclic_group(int n) {
    if (n < 1) throw input_error("cyclic group order must be positive");
    std::vector<std::vector<int>> rows(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) rows[a][b] = (a + b) % n;
    return group_from_table(rows);
}

namespace detail {

inline std::vector<std::vector<int>> permutations_lex(int n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> all;
    do all.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return all;
}

}  // namespace detail

/// Symmetric group on n letters; elements are permutations in lexicographic order
/// of their one-line form, so index 0 is the identity.  Product p*q acts by
/// (p*q)(i) = p(q(i)).
inline GroupPtr symmetric_group(int n) {
    if (n < 1 || n > 5) throw input_error("symmetric group supported for 1..5 letters");
    const auto perms = detail::permutations_lex(n);
    const int order = static_cast<int>(perms.size());
    std::vector<std::vector<int>> rows(order, std::vector<int>(order));
    std::vector<std::string> names(order);
    auto index_of = [&](const std::vector<int>& p) {
        return static_cast<int>(std::lower_bound(perms.begin(), perms.end(), p) - perms.begin());
    };
    for (int a = 0; a < order; ++a) {
        std::string nm;
        for (int i = 0; i < n; ++i) nm += std::to_string(perms[a][i]);
        names[a] = nm;
        for (int b = 0; b < order; ++b) {
            std::vector<int> comp(n);
            for (int i = 0; i < n; ++i) comp[i] = perms[a][perms[b][i]];
            rows[a][b] = index_of(comp);
        }
    }
    return group_from_table(rows, std::move(names));
}

/// +1/-1 per element for homomorphisms to {+-1} used by sign modules.
inline std::vector<int> cyclic_sign_vector(int n) {
    if (n % 2 != 0) throw input_error("cyclic group of odd order has no sign character");
    std::vector<int> s(n);
    for (int a = 0; a < n; ++a) s[a] = (a % 2 == 0) ? 1 : -1;
    return s;
}

inline std::vector<int> symmetric_sign_vector(int n) {
    const auto perms = detail::permutations_lex(n);
    std::vector<int> s(perms.size());
    for (size_t a = 0; a < perms.size(); ++a) {
        int inversions = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (perms[a][i] > perms[a][j]) ++inversions;
        s[a] = (inversions % 2 == 0) ? 1 : -1;
    }
    return s;
}

inline nlohmann::json group_to_json(const FiniteGroup& g) {
    nlohmann::json j;
    j["order"] = g.order;
    auto& t = j["table"] = nlohmann::json::array();
    for (int a = 0; a < g.order; ++a) {
        nlohmann::json row = nlohmann::json::array();
        for (int b = 0; b < g.order; ++b) row.push_back(g.mul(a, b));
        t.push_back(std::move(row));
    }
    j["names"] = g.names;
    return j;
}

inline GroupPtr group_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("table") || !j["table"].is_array())
        throw input_error("group json must be an object with a \"table\" array");
    std::vector<std::vector<int>> rows;
    for (const auto& row : j["table"]) {
        if (!row.is_array()) throw input_error("group table rows must be arrays");
        rows.push_back(row.get<std::vector<int>>());
    }
    if (j.contains("order") && j["order"].get<int>() != static_cast<int>(rows.size()))
        throw input_error("group order field disagrees with table size");
    std::vector<std::string> names;
    if (j.contains("names")) names = j["names"].get<std::vector<std::string>>();
    return group_from_table(rows, std::move(names));
}

}  // namespace delta3

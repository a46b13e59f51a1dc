#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "delta3/gmodule.hpp"

namespace delta3 {

/// Dense n-cochain: a total map G^n -> A stored as one coordinate block per tuple.
/// Tuples are indexed in mixed radix with the first argument most significant.
struct Cochain {
    int degree = 0;
    GroupPtr group;
    ModulePtr module;
    std::vector<std::int64_t> data;  // tuple_count * rank entries in [0, modulus)

    std::int64_t tuple_count() const {
        std::int64_t c = 1;
        for (int i = 0; i < degree; ++i) c *= group->order;
        return c;
    }

    std::int64_t* value(std::int64_t tuple_index) {
        return data.data() + tuple_index * module->rank;
    }
    const std::int64_t* value(std::int64_t tuple_index) const {
        return data.data() + tuple_index * module->rank;
    }

    std::int64_t tuple_index(const std::vector<int>& g) const {
        std::int64_t idx = 0;
        for (int x : g) idx = idx * group->order + x;
        return idx;
    }

    std::vector<int> tuple_decode(std::int64_t idx) const {
        std::vector<int> g(degree);
        for (int i = degree - 1; i >= 0; --i) {
            g[i] = static_cast<int>(idx % group->order);
            idx /= group->order;
        }
        return g;
    }

    bool operator==(const Cochain& o) const {
        return degree == o.degree && data == o.data;
    }
};

inline Cochain zero_cochain(GroupPtr group, ModulePtr module, int degree) {
    if (degree < 0) throw input_error("cochain degree must be nonnegative");
    Cochain c;
    c.degree = degree;
    c.group = std::move(group);
    c.module = module;
    c.data.assign(c.tuple_count() * module->rank, 0);
    return c;
}

inline Cochain random_cochain(GroupPtr group, ModulePtr module, int degree,
                              std::uint64_t seed) {
    Cochain c = zero_cochain(std::move(group), module, degree);
    std::mt19937_64 rng(seed);
    for (auto& v : c.data) v = static_cast<std::int64_t>(rng() % module->modulus);
    return c;
}

inline Cochain operator+(const Cochain& a, const Cochain& b) {
    if (a.degree != b.degree || a.group != b.group || a.module != b.module)
        throw input_error("cochain addition requires matching degree, group, and module");
    Cochain c = a;
    const std::int64_t m = a.module->modulus;
    for (size_t i = 0; i < c.data.size(); ++i) c.data[i] = (a.data[i] + b.data[i]) % m;
    return c;
}

inline Cochain operator-(const Cochain& a, const Cochain& b) {
    if (a.degree != b.degree || a.group != b.group || a.module != b.module)
        throw input_error("cochain subtraction requires matching degree, group, and module");
    Cochain c = a;
    const std::int64_t m = a.module->modulus;
    for (size_t i = 0; i < c.data.size(); ++i) c.data[i] = ((a.data[i] - b.data[i]) % m + m) % m;
    return c;
}

/// j-th face map C^n -> C^(n+1), 0 <= j <= n+1: drop into the bar-resolution faces
/// (act by the first argument, merge adjacent arguments, or forget the last one).
inline Cochain face_map(const Cochain& s, int j) {
    const int n = s.degree;
    if (j < 0 || j > n + 1) throw input_error("face index out of range");
    Cochain out = zero_cochain(s.group, s.module, n + 1);
    const int rank = s.module->rank;
    const std::int64_t count = out.tuple_count();
    std::vector<int> g, f(n);
    for (std::int64_t t = 0; t < count; ++t) {
        g = out.tuple_decode(t);
        if (j == 0) {
            for (int i = 0; i < n; ++i) f[i] = g[i + 1];
            s.module->apply(g[0], s.value(s.tuple_index(f)), out.value(t));
        } else if (j == n + 1) {
            for (int i = 0; i < n; ++i) f[i] = g[i];
            const std::int64_t* v = s.value(s.tuple_index(f));
            for (int r = 0; r < rank; ++r) out.value(t)[r] = v[r];
        } else {
            for (int i = 0; i < j - 1; ++i) f[i] = g[i];
            f[j - 1] = s.group->mul(g[j - 1], g[j]);
            for (int i = j; i < n; ++i) f[i] = g[i + 1];
            const std::int64_t* v = s.value(s.tuple_index(f));
            for (int r = 0; r < rank; ++r) out.value(t)[r] = v[r];
        }
    }
    return out;
}

/// Bar-complex differential C^n -> C^(n+1): alternating sum of the face maps.
inline Cochain differential(const Cochain& s) {
    const int n = s.degree;
    Cochain out = zero_cochain(s.group, s.module, n + 1);
    const int rank = s.module->rank;
    const std::int64_t m = s.module->modulus;
    const std::int64_t count = out.tuple_count();
    std::vector<int> g, f(n);
    std::vector<std::int64_t> tmp(rank);
    for (std::int64_t t = 0; t < count; ++t) {
        g = out.tuple_decode(t);
        std::int64_t* acc = out.value(t);
        for (int i = 0; i < n; ++i) f[i] = g[i + 1];
        s.module->apply(g[0], s.value(s.tuple_index(f)), tmp.data());
        for (int r = 0; r < rank; ++r) acc[r] = tmp[r];
        for (int j = 1; j <= n; ++j) {
            for (int i = 0; i < j - 1; ++i) f[i] = g[i];
            f[j - 1] = s.group->mul(g[j - 1], g[j]);
            for (int i = j; i < n; ++i) f[i] = g[i + 1];
            const std::int64_t* v = s.value(s.tuple_index(f));
            const int sign = (j % 2 == 0) ? 1 : -1;
            for (int r = 0; r < rank; ++r) acc[r] += sign * v[r];
        }
        for (int i = 0; i < n; ++i) f[i] = g[i];
        const std::int64_t* v = s.value(s.tuple_index(f));
        const int sign = ((n + 1) % 2 == 0) ? 1 : -1;
        for (int r = 0; r < rank; ++r) acc[r] = ((acc[r] + sign * v[r]) % m + m) % m;
    }
    return out;
}

inline bool is_cocycle(const Cochain& s) {
    Cochain d = differential(s);
    for (auto v : d.data)
        if (v != 0) return false;
    return true;
}

/// Action of the adjacent transposition (i, i+1) of the symmetric group on n+1
/// letters on C^n, for 1 <= i <= n.  The first transposition twists by the action
/// of the first argument; all of them negate and re-route arguments through
/// products with g_i and its inverse.
inline Cochain transposition_action(const Cochain& s, int i) {
    const int n = s.degree;
    if (i < 1 || i > n) throw input_error("transposition index out of range");
    Cochain out = zero_cochain(s.group, s.module, n);
    const FiniteGroup& G = *s.group;
    const int rank = s.module->rank;
    const std::int64_t m = s.module->modulus;
    const std::int64_t count = out.tuple_count();
    std::vector<int> g, f(n);
    std::vector<std::int64_t> tmp(rank);
    for (std::int64_t t = 0; t < count; ++t) {
        g = out.tuple_decode(t);
        f = g;
        if (i == 1) {
            f[0] = G.inv(g[0]);
            if (n >= 2) f[1] = G.mul(g[0], g[1]);
            s.module->apply(g[0], s.value(s.tuple_index(f)), tmp.data());
        } else {
            f[i - 2] = G.mul(g[i - 2], g[i - 1]);
            f[i - 1] = G.inv(g[i - 1]);
            if (i <= n - 1) f[i] = G.mul(g[i - 1], g[i]);
            const std::int64_t* v = s.value(s.tuple_index(f));
            for (int r = 0; r < rank; ++r) tmp[r] = v[r];
        }
        std::int64_t* acc = out.value(t);
        for (int r = 0; r < rank; ++r) acc[r] = (m - tmp[r] % m) % m;
    }
    return out;
}

/// Action of an arbitrary permutation of the n+1 letters, given in one-line form
/// (perm[i] = image of letter i, zero-based).  The permutation is decomposed into
/// adjacent transpositions by bubble sort; the verified braid/involution/
/// commutation relations make the result independent of the decomposition.
inline Cochain permutation_action(const Cochain& s, std::vector<int> perm) {
    const int n = s.degree;
    if (static_cast<int>(perm.size()) != n + 1)
        throw input_error("permutation must have n+1 letters");
    {
        std::vector<bool> seen(n + 1, false);
        for (int v : perm) {
            if (v < 0 || v > n || seen[v]) throw input_error("not a permutation");
            seen[v] = true;
        }
    }
    std::vector<int> ops;
    for (;;) {
        int j = -1;
        for (int k = 0; k + 1 <= n; ++k)
            if (perm[k] > perm[k + 1]) { j = k; break; }
        if (j < 0) break;
        std::swap(perm[j], perm[j + 1]);
        ops.push_back(j);
    }
    Cochain out = s;
    for (int j : ops) out = transposition_action(out, j + 1);
    return out;
}

/// Fixed under every adjacent transposition of the n+1 letters.
inline bool is_symmetric(const Cochain& s) {
    for (int i = 1; i <= s.degree; ++i)
        if (!(transposition_action(s, i) == s)) return false;
    return true;
}

/// Sum of the full orbit of s under the symmetric group on n+1 letters; the result
/// is always symmetric (the norm construction).
inline Cochain symmetrize_by_norm(const Cochain& s) {
    Cochain acc = zero_cochain(s.group, s.module, s.degree);
    for (const auto& p : detail::permutations_lex(s.degree + 1))
        acc = acc + permutation_action(s, p);
    return acc;
}

inline std::string tuple_key(const std::vector<int>& g) {
    std::string key;
    for (size_t i = 0; i < g.size(); ++i) {
        if (i) key += ',';
        key += std::to_string(g[i]);
    }
    return key;
}

inline nlohmann::json cochain_to_json(const Cochain& s) {
    nlohmann::json j;
    j["degree"] = s.degree;
    nlohmann::json vals = nlohmann::json::object();
    const std::int64_t count = s.tuple_count();
    for (std::int64_t t = 0; t < count; ++t) {
        std::vector<std::int64_t> coords(s.value(t), s.value(t) + s.module->rank);
        vals[tuple_key(s.tuple_decode(t))] = coords;
    }
    j["values"] = std::move(vals);
    return j;
}

/// Keys absent from "values" are zero.
inline Cochain cochain_from_json(GroupPtr group, ModulePtr module, const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("degree"))
        throw input_error("cochain json must contain \"degree\"");
    Cochain c = zero_cochain(std::move(group), module, j["degree"].get<int>());
    if (!j.contains("values")) return c;
    for (const auto& [key, coords] : j["values"].items()) {
        std::vector<int> g;
        if (!key.empty()) {
            size_t pos = 0;
            while (pos <= key.size()) {
                size_t comma = key.find(',', pos);
                if (comma == std::string::npos) comma = key.size();
                try {
                    g.push_back(std::stoi(key.substr(pos, comma - pos)));
                } catch (...) {
                    throw input_error("malformed cochain tuple key: " + key);
                }
                pos = comma + 1;
            }
        }
        if (static_cast<int>(g.size()) != c.degree)
            throw input_error("cochain tuple key has wrong arity: " + key);
        for (int x : g)
            if (x < 0 || x >= c.group->order)
                throw input_error("cochain tuple key mentions a non-element: " + key);
        auto vec = coords.get<std::vector<std::int64_t>>();
        if (static_cast<int>(vec.size()) != module->rank)
            throw input_error("cochain value for key " + key + " has wrong rank");
        std::int64_t* dst = c.value(c.tuple_index(g));
        for (int r = 0; r < module->rank; ++r) {
            std::int64_t v = vec[r] % module->modulus;
            dst[r] = v < 0 ? v + module->modulus : v;
        }
    }
    return c;
}

}  // namespace delta3

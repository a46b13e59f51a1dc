#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "delta3/group.hpp"

namespace delta3 {

/// G-module of the homocyclic form (Z/m)^rank.  The action stores one rank x rank
/// matrix mod m per group element; elements of the module are coordinate vectors
/// with entries in [0, m).
struct GModule {
    GroupPtr group;
    std::int64_t modulus = 0;
    int rank = 0;
    std::vector<std::vector<std::int64_t>> action;  // per element, row-major rank*rank

    bool trivial_action = false;  // cached: every matrix is the identity

    std::int64_t size() const {
        std::int64_t s = 1;
        for (int i = 0; i < rank; ++i) s *= modulus;
        return s;
    }

    /// out := action(g) * in  (mod m); out and in must not alias.
    void apply(int g, const std::int64_t* in, std::int64_t* out) const {
        if (trivial_action) {
            for (int i = 0; i < rank; ++i) out[i] = in[i];
            return;
        }
        const std::int64_t* mat = action[g].data();
        for (int i = 0; i < rank; ++i) {
            std::int64_t acc = 0;
            for (int j = 0; j < rank; ++j) acc += mat[i * rank + j] * in[j];
            out[i] = acc % modulus;
        }
    }

    std::vector<std::int64_t> apply(int g, const std::vector<std::int64_t>& in) const {
        std::vector<std::int64_t> out(rank);
        apply(g, in.data(), out.data());
        return out;
    }

    std::int64_t element_index(const std::int64_t* coords) const {
        std::int64_t idx = 0;
        for (int i = 0; i < rank; ++i) idx = idx * modulus + coords[i];
        return idx;
    }

    std::vector<std::int64_t> element_coords(std::int64_t idx) const {
        std::vector<std::int64_t> c(rank);
        for (int i = rank - 1; i >= 0; --i) {
            c[i] = idx % modulus;
            idx /= modulus;
        }
        return c;
    }
};

using ModulePtr = std::shared_ptr<const GModule>;

namespace detail {

inline BigInt int_det(const std::vector<std::int64_t>& mat, int k) {
    // Cofactor expansion; ranks here are tiny.
    if (k == 1) return mat[0];
    BigInt det = 0;
    std::vector<std::int64_t> minor((k - 1) * (k - 1));
    for (int c = 0; c < k; ++c) {
        for (int i = 1; i < k; ++i) {
            int mj = 0;
            for (int j = 0; j < k; ++j) {
                if (j == c) continue;
                minor[(i - 1) * (k - 1) + mj++] = mat[i * k + j];
            }
        }
        BigInt term = mat[c] * int_det(minor, k - 1);
        det += (c % 2 == 0) ? term : -term;
    }
    return det;
}

inline std::int64_t gcd64(std::int64_t a, std::int64_t b) {
    while (b) { a %= b; std::swap(a, b); }
    return a < 0 ? -a : a;
}

}  // namespace detail

/// Builds and fully validates a module: the identity must act as the identity
/// matrix, each matrix must be invertible mod m (unit determinant), and the action
/// must be a homomorphism, checked exhaustively.
inline ModulePtr make_gmodule(GroupPtr group, std::int64_t modulus, int rank,
                              std::vector<std::vector<std::int64_t>> action) {
    if (modulus < 2) throw input_error("module modulus must be at least 2");
    if (rank < 1) throw input_error("module rank must be at least 1");
    const int n = group->order;
    if (static_cast<int>(action.size()) != n)
        throw input_error("module action must give one matrix per group element");
    auto mod = std::make_shared<GModule>();
    mod->group = group;
    mod->modulus = modulus;
    mod->rank = rank;
    for (int g = 0; g < n; ++g) {
        auto& mat = action[g];
        if (static_cast<int>(mat.size()) != rank * rank)
            throw input_error("action matrix for element " + group->name(g) + " has wrong shape");
        for (auto& v : mat) { v %= modulus; if (v < 0) v += modulus; }
        BigInt det = detail::int_det(mat, rank) % modulus;
        std::int64_t d = static_cast<std::int64_t>(det);
        if (detail::gcd64(d, modulus) != 1)
            throw input_error("action matrix for element " + group->name(g) +
                              " is not invertible mod " + std::to_string(modulus));
    }
    mod->action = std::move(action);
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j) {
            std::int64_t want = (i == j) ? 1 % modulus : 0;
            if (mod->action[group->identity][i * rank + j] != want)
                throw input_error("identity element must act as the identity matrix");
        }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            // action(a)*action(b) == action(a*b) mod m
            const auto& ma = mod->action[a];
            const auto& mb = mod->action[b];
            const auto& mab = mod->action[group->mul(a, b)];
            for (int i = 0; i < rank; ++i)
                for (int j = 0; j < rank; ++j) {
                    std::int64_t acc = 0;
                    for (int t = 0; t < rank; ++t) acc += ma[i * rank + t] * mb[t * rank + j];
                    if ((acc - mab[i * rank + j]) % modulus != 0)
                        throw input_error("module action is not a homomorphism at (" +
                                          group->name(a) + "," + group->name(b) + ")");
                }
        }
    mod->trivial_action = true;
    for (int g = 0; g < n && mod->trivial_action; ++g)
        for (int i = 0; i < rank && mod->trivial_action; ++i)
            for (int j = 0; j < rank; ++j)
                if (mod->action[g][i * rank + j] != ((i == j) ? 1 % modulus : 0)) {
                    mod->trivial_action = false;
                    break;
                }
    return mod;
}

inline ModulePtr trivial_module(GroupPtr group, std::int64_t modulus, int rank = 1) {
    std::vector<std::vector<std::int64_t>> action(group->order,
                                                  std::vector<std::int64_t>(rank * rank, 0));
    for (auto& mat : action)
        for (int i = 0; i < rank; ++i) mat[i * rank + i] = 1 % modulus;
    return make_gmodule(std::move(group), modulus, rank, std::move(action));
}

/// Rank-1 module where each element acts by +1 or -1 according to `signs`.
inline ModulePtr sign_module(GroupPtr group, std::int64_t modulus, const std::vector<int>& signs) {
    if (static_cast<int>(signs.size()) != group->order)
        throw input_error("sign vector has wrong length");
    std::vector<std::vector<std::int64_t>> action;
    action.reserve(group->order);
    for (int s : signs) action.push_back({s >= 0 ? 1 % modulus : (modulus - 1) % modulus});
    return make_gmodule(std::move(group), modulus, 1, std::move(action));
}

inline nlohmann::json module_to_json(const GModule& a) {
    nlohmann::json j;
    j["modulus"] = a.modulus;
    j["rank"] = a.rank;
    nlohmann::json act = nlohmann::json::object();
    for (int g = 0; g < a.group->order; ++g) {
        nlohmann::json mat = nlohmann::json::array();
        for (int i = 0; i < a.rank; ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (int k = 0; k < a.rank; ++k) row.push_back(a.action[g][i * a.rank + k]);
            mat.push_back(std::move(row));
        }
        act[std::to_string(g)] = std::move(mat);
    }
    j["action"] = std::move(act);
    return j;
}

/// Elements missing from "action" default to the identity matrix.
inline ModulePtr module_from_json(GroupPtr group, const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("modulus") || !j.contains("rank"))
        throw input_error("module json must contain \"modulus\" and \"rank\"");
    const std::int64_t m = j["modulus"].get<std::int64_t>();
    const int rank = j["rank"].get<int>();
    if (m < 2 || rank < 1) throw input_error("module json has invalid modulus or rank");
    std::vector<std::vector<std::int64_t>> action(group->order,
                                                  std::vector<std::int64_t>(rank * rank, 0));
    for (auto& mat : action)
        for (int i = 0; i < rank; ++i) mat[i * rank + i] = 1 % m;
    if (j.contains("action")) {
        for (const auto& [key, mat] : j["action"].items()) {
            int g = -1;
            try { g = std::stoi(key); } catch (...) {}
            if (g < 0 || g >= group->order)
                throw input_error("module action key is not a group element: " + key);
            if (!mat.is_array() || static_cast<int>(mat.size()) != rank)
                throw input_error("module action matrix for element " + key + " has wrong shape");
            for (int i = 0; i < rank; ++i) {
                auto row = mat[i].get<std::vector<std::int64_t>>();
                if (static_cast<int>(row.size()) != rank)
                    throw input_error("module action matrix for element " + key +
                                      " has wrong shape");
                for (int k = 0; k < rank; ++k) action[g][i * rank + k] = row[k];
            }
        }
    }
    return make_gmodule(std::move(group), m, rank, std::move(action));
}

}  // namespace delta3

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "delta3/cochain.hpp"
#include "delta3/zlattice.hpp"

namespace delta3 {

/// Isomorphism type of a finite abelian group: invariant factors > 1 in
/// divisibility order.  Empty means the trivial group.
struct FiniteAbelianGroupDescriptor {
    std::vector<std::int64_t> invariant_factors;

    bool is_trivial() const { return invariant_factors.empty(); }

    std::string to_string() const {
        if (invariant_factors.empty()) return "0";
        std::string s;
        for (size_t i = 0; i < invariant_factors.size(); ++i) {
            if (i) s += " x ";
            s += "Z/" + std::to_string(invariant_factors[i]);
        }
        return s;
    }

    bool operator==(const FiniteAbelianGroupDescriptor& o) const {
        return invariant_factors == o.invariant_factors;
    }
};

inline nlohmann::json descriptor_to_json(const FiniteAbelianGroupDescriptor& d) {
    return nlohmann::json(d.invariant_factors);
}

/// Default ceiling on the dimension of any cochain space a computation may touch.
inline constexpr std::int64_t kDefaultMaxDim = 20000;

namespace detail {

inline std::int64_t cochain_dim(const FiniteGroup& g, const GModule& a, int degree) {
    std::int64_t d = a.rank;
    for (int i = 0; i < degree; ++i) {
        d *= g.order;
        if (d > (std::int64_t(1) << 40))
            throw input_error("cochain space dimension overflows any workable size");
    }
    return d;
}

inline void check_dim(const FiniteGroup& g, const GModule& a, int top_degree,
                      std::int64_t max_dim) {
    std::int64_t d = cochain_dim(g, a, top_degree);
    if (d > max_dim)
        throw input_error("cochain space dimension " + std::to_string(d) +
                          " exceeds the size limit " + std::to_string(max_dim) +
                          " (raise it with --max-dim)");
}

/// Matrix of a linear map C^n -> C^k, built column by column from images of the
/// standard basis cochains, entries reduced into [0, m).
template <class F>
ZMat map_matrix(GroupPtr group, ModulePtr module, int in_degree, F&& image) {
    Cochain basis = zero_cochain(group, module, in_degree);
    const int cols = static_cast<int>(basis.data.size());
    ZMat M;
    for (int j = 0; j < cols; ++j) {
        basis.data[j] = 1;
        Cochain img = image(basis);
        basis.data[j] = 0;
        if (M.cols == 0) M = ZMat(static_cast<int>(img.data.size()), cols);
        for (int i = 0; i < M.rows; ++i) M.at(i, j) = img.data[i];
    }
    if (cols == 0) throw internal_error("map_matrix: empty domain");
    return M;
}

inline ZMat reduce_mod(ZMat M, std::int64_t m) {
    for (auto& v : M.a) {
        v %= m;
        if (v < 0) v += m;
    }
    return M;
}

inline ZMat scaled_identity(int n, std::int64_t m) {
    ZMat I(n, n);
    for (int i = 0; i < n; ++i) I.at(i, i) = m;
    return I;
}

}  // namespace detail

/// Matrix of the differential C^n -> C^(n+1) over Z/m.
inline ZMat differential_matrix(GroupPtr group, ModulePtr module, int degree,
                                std::int64_t max_dim = kDefaultMaxDim) {
    detail::check_dim(*group, *module, degree + 1, max_dim);
    return detail::map_matrix(group, module, degree,
                              [](const Cochain& c) { return differential(c); });
}

/// Matrix of the adjacent-transposition action (i, i+1) on C^n.
inline ZMat transposition_matrix(GroupPtr group, ModulePtr module, int degree, int i,
                                 std::int64_t max_dim = kDefaultMaxDim) {
    detail::check_dim(*group, *module, degree, max_dim);
    return detail::map_matrix(group, module, degree,
                              [i](const Cochain& c) { return transposition_action(c, i); });
}

/// Stacked constraints (T_i - I) for i = 1..n whose mod-m kernel is the
/// symmetric-cochain subspace of C^n.  Zero rows when n = 0.
inline ZMat symmetric_constraints_matrix(GroupPtr group, ModulePtr module, int degree,
                                         std::int64_t max_dim = kDefaultMaxDim) {
    const std::int64_t n_dim = detail::cochain_dim(*group, *module, degree);
    detail::check_dim(*group, *module, degree, max_dim);
    ZMat M(0, static_cast<int>(n_dim));
    for (int i = 1; i <= degree; ++i) {
        ZMat T = transposition_matrix(group, module, degree, i, max_dim);
        for (int d = 0; d < T.cols; ++d) T.at(d, d) -= 1;
        M = (M.rows == 0) ? T : vstack(M, T);
    }
    return M;
}

/// Generators of the lattice of symmetric n-cochains (as vectors over Z containing
/// m*Z^N, so reduction mod m recovers exactly the fixed subspace).
inline ZMat symmetric_lattice(GroupPtr group, ModulePtr module, int degree,
                              std::int64_t max_dim = kDefaultMaxDim) {
    ZMat C = symmetric_constraints_matrix(group, module, degree, max_dim);
    return mod_kernel_lattice(C, module->modulus);
}

/// Generators of the lattice of n-cocycles.
inline ZMat cocycle_lattice(GroupPtr group, ModulePtr module, int degree,
                            std::int64_t max_dim = kDefaultMaxDim) {
    ZMat D = differential_matrix(group, module, degree, max_dim);
    return mod_kernel_lattice(D, module->modulus);
}

/// Generators of the lattice of symmetric n-cocycles.
inline ZMat symmetric_cocycle_lattice(GroupPtr group, ModulePtr module, int degree,
                                      std::int64_t max_dim = kDefaultMaxDim) {
    ZMat D = differential_matrix(group, module, degree, max_dim);
    ZMat C = symmetric_constraints_matrix(group, module, degree, max_dim);
    ZMat stacked = (C.rows == 0) ? D : vstack(D, C);
    return mod_kernel_lattice(stacked, module->modulus);
}

/// Generators of the lattice of n-coboundaries (image of C^(n-1), plus m*Z^N).
inline ZMat coboundary_lattice(GroupPtr group, ModulePtr module, int degree,
                               std::int64_t max_dim = kDefaultMaxDim) {
    const std::int64_t m = module->modulus;
    const int n_dim = static_cast<int>(detail::cochain_dim(*group, *module, degree));
    if (degree == 0) return detail::scaled_identity(n_dim, m);
    ZMat D = differential_matrix(group, module, degree - 1, max_dim);
    return hstack(detail::reduce_mod(D, m), detail::scaled_identity(n_dim, m));
}

/// Generators of the lattice of symmetric n-coboundaries: image of the symmetric
/// part of C^(n-1), plus m*Z^N.
inline ZMat symmetric_coboundary_lattice(GroupPtr group, ModulePtr module, int degree,
                                         std::int64_t max_dim = kDefaultMaxDim) {
    const std::int64_t m = module->modulus;
    const int n_dim = static_cast<int>(detail::cochain_dim(*group, *module, degree));
    if (degree == 0) return detail::scaled_identity(n_dim, m);
    ZMat D = differential_matrix(group, module, degree - 1, max_dim);
    ZMat S = symmetric_lattice(group, module, degree - 1, max_dim);
    ZMat img = detail::reduce_mod(mat_mul(D, S), m);
    return hstack(img, detail::scaled_identity(n_dim, m));
}

/// H^n(G, A): cocycles mod coboundaries, as invariant factors.
inline FiniteAbelianGroupDescriptor cohomology_group(GroupPtr group, ModulePtr module,
                                                     int degree,
                                                     std::int64_t max_dim = kDefaultMaxDim) {
    if (degree < 0) throw input_error("cohomology degree must be nonnegative");
    ZMat Z = cocycle_lattice(group, module, degree, max_dim);
    ZMat B = coboundary_lattice(group, module, degree, max_dim);
    return FiniteAbelianGroupDescriptor{lattice_quotient(Z, B)};
}

/// HS^n(G, A): symmetric cocycles mod boundaries of symmetric cochains.
inline FiniteAbelianGroupDescriptor symmetric_cohomology_group(
    GroupPtr group, ModulePtr module, int degree, std::int64_t max_dim = kDefaultMaxDim) {
    if (degree < 0) throw input_error("cohomology degree must be nonnegative");
    ZMat ZS = symmetric_cocycle_lattice(group, module, degree, max_dim);
    ZMat BS = symmetric_coboundary_lattice(group, module, degree, max_dim);
    return FiniteAbelianGroupDescriptor{lattice_quotient(ZS, BS)};
}

/// Kernel of the comparison map HS^n -> H^n: symmetric cocycles that bound some
/// (not necessarily symmetric) cochain, modulo symmetric coboundaries.
inline FiniteAbelianGroupDescriptor natural_map_kernel(GroupPtr group, ModulePtr module,
                                                       int degree,
                                                       std::int64_t max_dim = kDefaultMaxDim) {
    if (degree < 0) throw input_error("cohomology degree must be nonnegative");
    ZMat ZS = symmetric_cocycle_lattice(group, module, degree, max_dim);
    ZMat B = coboundary_lattice(group, module, degree, max_dim);
    ZMat I = lattice_intersection(ZS, B);
    ZMat BS = symmetric_coboundary_lattice(group, module, degree, max_dim);
    return FiniteAbelianGroupDescriptor{lattice_quotient(I, BS)};
}

/// A cochain tau with d(tau) = z, when one exists; with restrict_symmetric, tau is
/// required to be a symmetric cochain.  z must be a cocycle of degree >= 1 for the
/// question to make sense (degree 0 has no candidates below it).
inline std::optional<Cochain> coboundary_witness(const Cochain& z, bool restrict_symmetric,
                                                 std::int64_t max_dim = kDefaultMaxDim) {
    const int n = z.degree;
    if (n < 1) throw input_error("coboundary witnesses need degree at least 1");
    const std::int64_t m = z.module->modulus;
    ZMat D = differential_matrix(z.group, z.module, n - 1, max_dim);
    std::vector<std::int64_t> target = z.data;
    if (!restrict_symmetric) {
        auto x = solve_mod(detail::reduce_mod(D, m), target, m);
        if (!x) return std::nullopt;
        Cochain tau = zero_cochain(z.group, z.module, n - 1);
        tau.data = *x;
        return tau;
    }
    ZMat S = symmetric_lattice(z.group, z.module, n - 1, max_dim);
    ZMat MS = detail::reduce_mod(mat_mul(D, S), m);
    auto x = solve_mod(MS, target, m);
    if (!x) return std::nullopt;
    Cochain tau = zero_cochain(z.group, z.module, n - 1);
    for (int i = 0; i < S.rows; ++i) {
        BigInt acc = 0;
        for (int j = 0; j < S.cols; ++j) acc += S.at(i, j) * (*x)[j];
        acc %= m;
        if (acc < 0) acc += m;
        tau.data[i] = acc.convert_to<std::int64_t>();
    }
    return tau;
}

}  // namespace delta3

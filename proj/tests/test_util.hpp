#pragma once

// Shared helpers for the test suites: small named groups beyond the library
// constructors, and brute-force cochain enumeration used as an oracle against
// the lattice-based computations.

#include <cstdint>
#include <set>
#include <vector>

#include "delta3/cochain.hpp"
#include "delta3/gmodule.hpp"
#include "delta3/group.hpp"

namespace testutil {

inline delta3::GroupPtr klein_four_group() {
    return delta3::group_from_table(
        {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}},
        {"e", "a", "b", "ab"});
}

/// Every group of order at most six, one per isomorphism class.
inline std::vector<std::pair<std::string, delta3::GroupPtr>> groups_up_to_order_six() {
    return {
        {"1", delta3::cyclic_group(1)},
        {"C2", delta3::cyclic_group(2)},
        {"C3", delta3::cyclic_group(3)},
        {"C4", delta3::cyclic_group(4)},
        {"V4", klein_four_group()},
        {"C5", delta3::cyclic_group(5)},
        {"C6", delta3::cyclic_group(6)},
        {"S3", delta3::symmetric_group(3)},
    };
}

/// Writes the base-m digits of `code` into the cochain's coordinate block.
inline void fill_from_code(delta3::Cochain& c, std::int64_t code) {
    const std::int64_t m = c.module->modulus;
    for (auto& v : c.data) {
        v = code % m;
        code /= m;
    }
}

/// Number of coordinate slots (tuples times rank) of a cochain space.
inline std::int64_t slot_count(const delta3::Cochain& c) {
    return static_cast<std::int64_t>(c.data.size());
}

/// m^slots as a checked 64-bit count; returns -1 when it would exceed `cap`.
inline std::int64_t space_size(const delta3::Cochain& c, std::int64_t cap) {
    std::int64_t total = 1;
    for (std::int64_t i = 0; i < slot_count(c); ++i) {
        if (total > cap / c.module->modulus) return -1;
        total *= c.module->modulus;
    }
    return total;
}

struct BruteCounts {
    std::int64_t cocycles = 0;            // all cocycles in degree n
    std::int64_t symmetric_cocycles = 0;  // transposition-fixed cocycles
    std::int64_t coboundaries = 0;        // distinct images of degree n-1 cochains
    std::int64_t symmetric_coboundaries = 0;  // ... of transposition-fixed ones
};

/// Exhaustive counts in degree n over a space small enough to enumerate.
inline BruteCounts brute_counts(const delta3::GroupPtr& G, const delta3::ModulePtr& A, int n,
                                std::int64_t cap = std::int64_t{1} << 17) {
    using delta3::Cochain;
    BruteCounts out;
    Cochain c = delta3::zero_cochain(G, A, n);
    const std::int64_t total = space_size(c, cap);
    if (total < 0) throw delta3::input_error("cochain space too large for brute force");
    for (std::int64_t code = 0; code < total; ++code) {
        fill_from_code(c, code);
        if (!delta3::is_cocycle(c)) continue;
        ++out.cocycles;
        if (delta3::is_symmetric(c)) ++out.symmetric_cocycles;
    }
    if (n == 0) {
        out.coboundaries = 1;
        out.symmetric_coboundaries = 1;
        return out;
    }
    Cochain below = delta3::zero_cochain(G, A, n - 1);
    const std::int64_t below_total = space_size(below, cap);
    if (below_total < 0) throw delta3::input_error("cochain space too large for brute force");
    std::set<std::vector<std::int64_t>> images, symmetric_images;
    for (std::int64_t code = 0; code < below_total; ++code) {
        fill_from_code(below, code);
        const Cochain d = delta3::differential(below);
        images.insert(d.data);
        if (delta3::is_symmetric(below)) symmetric_images.insert(d.data);
    }
    out.coboundaries = static_cast<std::int64_t>(images.size());
    out.symmetric_coboundaries = static_cast<std::int64_t>(symmetric_images.size());
    return out;
}

inline std::int64_t descriptor_order(const std::vector<std::int64_t>& invariant_factors) {
    std::int64_t p = 1;
    for (std::int64_t f : invariant_factors) p *= f;
    return p;
}

}  // namespace testutil

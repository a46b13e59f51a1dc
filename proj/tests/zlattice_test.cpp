#include <gtest/gtest.h>

#include <cstdint>
#include <random>
#include <vector>

#include "delta3/zlattice.hpp"

using namespace delta3;

namespace {

ZMat from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
    ZMat m(static_cast<int>(rows.size()), rows.empty() ? 0 : static_cast<int>(rows[0].size()));
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) m.at(i, j) = rows[i][j];
    return m;
}

ZMat random_matrix(int rows, int cols, std::mt19937_64& rng, int span = 7) {
    ZMat m(rows, cols);
    for (auto& v : m.a) v = static_cast<std::int64_t>(rng() % (2 * span + 1)) - span;
    return m;
}

/// Rank over the rationals, computed by straightforward fraction-free row
/// elimination; independent of the column-echelon code under test.
int rational_rank(ZMat m) {
    int rank = 0;
    for (int col = 0; col < m.cols && rank < m.rows; ++col) {
        int pivot = -1;
        for (int i = rank; i < m.rows; ++i)
            if (m.at(i, col) != 0) { pivot = i; break; }
        if (pivot < 0) continue;
        detail::swap_rows(m, rank, pivot);
        for (int i = rank + 1; i < m.rows; ++i) {
            if (m.at(i, col) == 0) continue;
            const BigInt a = m.at(rank, col), b = m.at(i, col);
            for (int j = 0; j < m.cols; ++j) m.at(i, j) = m.at(i, j) * a - m.at(rank, j) * b;
        }
        ++rank;
    }
    return rank;
}

bool is_zero(const ZMat& m) {
    for (const auto& v : m.a)
        if (v != 0) return false;
    return true;
}

BigInt diagonal_product(const ZMat& m) {
    BigInt p = 1;
    for (int i = 0; i < std::min(m.rows, m.cols); ++i) p *= m.at(i, i);
    return p;
}

/// Is x in the column span of gens over the integers?
bool in_lattice(const ZMat& gens, const std::vector<std::int64_t>& x) {
    ZMat b;
    try {
        b = lattice_basis(gens);
    } catch (const internal_error&) {
        return false;  // not full rank; the tests only use full-rank lattices
    }
    ZMat g(gens.rows, 1);
    for (int i = 0; i < gens.rows; ++i) g.at(i, 0) = x[i];
    try {
        forward_solve(b, g);
        return true;
    } catch (const internal_error&) {
        return false;
    }
}

}  // namespace

TEST(ZLattice, EchelonStaircaseAndRank) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const int rows = 1 + static_cast<int>(rng() % 5);
        const int cols = 1 + static_cast<int>(rng() % 5);
        ZMat m = random_matrix(rows, cols, rng);
        const int oracle = rational_rank(m);
        ZMat e = m, v;
        const int rank = col_echelon(e, &v);
        EXPECT_EQ(rank, oracle);
        // Columns past the rank are zero.
        for (int j = rank; j < e.cols; ++j)
            for (int i = 0; i < e.rows; ++i) EXPECT_EQ(e.at(i, j), 0);
        // Leading rows strictly increase and pivots are positive.
        int prev = -1;
        for (int j = 0; j < rank; ++j) {
            int lead = -1;
            for (int i = 0; i < e.rows; ++i)
                if (e.at(i, j) != 0) { lead = i; break; }
            ASSERT_GE(lead, 0);
            EXPECT_GT(lead, prev);
            EXPECT_GT(e.at(lead, j), 0);
            prev = lead;
        }
        // The tracked transformation reproduces the echelon form.
        EXPECT_TRUE(is_zero([&] {
            ZMat d = mat_mul(m, v);
            for (size_t i = 0; i < d.a.size(); ++i) d.a[i] -= e.a[i];
            return d;
        }()));
    }
}

TEST(ZLattice, KernelColumns) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        const int rows = 1 + static_cast<int>(rng() % 4);
        const int cols = 1 + static_cast<int>(rng() % 5);
        const ZMat m = random_matrix(rows, cols, rng);
        const ZMat k = kernel_columns(m);
        EXPECT_TRUE(is_zero(mat_mul(m, k)));
        EXPECT_EQ(k.cols, cols - rational_rank(m));
        if (k.cols > 0) EXPECT_EQ(rational_rank(k), k.cols);
    }
}

TEST(ZLattice, ModKernelMembershipAndCompleteness) {
    std::mt19937_64 rng(37);
    for (std::int64_t m : {2, 3, 4, 6}) {
        for (int trial = 0; trial < 25; ++trial) {
            const int cols = 1 + static_cast<int>(rng() % 4);
            // Occasionally far more rows than columns, to exercise the row
            // compression fast path.
            const int rows = (trial % 3 == 0) ? cols + 8 + static_cast<int>(rng() % 20)
                                              : 1 + static_cast<int>(rng() % 4);
            const ZMat mat = random_matrix(rows, cols, rng);
            const ZMat gens = mod_kernel_lattice(mat, m);

            // Soundness: every generator solves the congruence.
            ZMat prod = mat_mul(mat, gens);
            for (const auto& v : prod.a) EXPECT_EQ(v % m, 0);

            // Completeness by counting: the number of solutions in the unit box
            // times the lattice index equals the box volume.
            std::int64_t solutions = 0;
            std::int64_t box = 1;
            for (int i = 0; i < cols; ++i) box *= m;
            std::vector<std::int64_t> x(cols);
            for (std::int64_t code = 0; code < box; ++code) {
                std::int64_t c = code;
                for (int i = 0; i < cols; ++i) {
                    x[i] = c % m;
                    c /= m;
                }
                bool ok = true;
                for (int i = 0; i < rows && ok; ++i) {
                    BigInt acc = 0;
                    for (int j = 0; j < cols; ++j) acc += mat.at(i, j) * x[j];
                    ok = acc % m == 0;
                }
                solutions += ok ? 1 : 0;
            }
            const BigInt index = diagonal_product(lattice_basis(gens));
            EXPECT_EQ(index * solutions, BigInt(box));
        }
    }
}

TEST(ZLattice, LatticeIntersection) {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 3);
        // Full-rank generators on both sides.
        ZMat x = random_matrix(n, n + 1, rng);
        ZMat y = random_matrix(n, n + 1, rng);
        for (int i = 0; i < n; ++i) {
            x.at(i, i) += 10;  // dominant diagonal keeps them full rank
            y.at(i, i) += 10;
        }
        if (rational_rank(x) < n || rational_rank(y) < n) continue;
        const ZMat inter = lattice_intersection(x, y);
        ASSERT_EQ(rational_rank(inter), n);
        for (int j = 0; j < inter.cols; ++j) {
            std::vector<std::int64_t> v(n);
            for (int i = 0; i < n; ++i) v[i] = static_cast<std::int64_t>(inter.at(i, j));
            EXPECT_TRUE(in_lattice(x, v));
            EXPECT_TRUE(in_lattice(y, v));
        }
        // Any multiple of both lattice indices lies in both lattices, hence in
        // the intersection.
        const BigInt dx = diagonal_product(lattice_basis(x));
        const BigInt dy = diagonal_product(lattice_basis(y));
        std::vector<std::int64_t> w(n);
        for (int i = 0; i < n; ++i)
            w[i] = static_cast<std::int64_t>(BigInt(dx * dy) * static_cast<std::int64_t>(rng() % 3));
        EXPECT_TRUE(in_lattice(inter, w));
    }
}

TEST(ZLattice, SmithDiagonalKnownValues) {
    EXPECT_EQ(smith_diagonal(from_rows({{2, 0}, {0, 3}})), (std::vector<BigInt>{1, 6}));
    EXPECT_EQ(smith_diagonal(from_rows({{2, 4}, {6, 8}})), (std::vector<BigInt>{2, 4}));
    EXPECT_EQ(smith_diagonal(from_rows({{1, 0}, {0, 1}})), (std::vector<BigInt>{1, 1}));
    EXPECT_EQ(smith_diagonal(from_rows({{0, 0}, {0, 0}})), (std::vector<BigInt>{}));
    // Divisibility chain on random matrices, and invariance under transpose.
    std::mt19937_64 rng(67);
    for (int trial = 0; trial < 25; ++trial) {
        const int rows = 1 + static_cast<int>(rng() % 4);
        const int cols = 1 + static_cast<int>(rng() % 4);
        const ZMat m = random_matrix(rows, cols, rng);
        const auto d = smith_diagonal(m);
        for (size_t i = 0; i + 1 < d.size(); ++i) {
            EXPECT_GT(d[i], 0);
            EXPECT_EQ(d[i + 1] % d[i], 0);
        }
        ZMat t(m.cols, m.rows);
        for (int i = 0; i < m.rows; ++i)
            for (int j = 0; j < m.cols; ++j) t.at(j, i) = m.at(i, j);
        EXPECT_EQ(smith_diagonal(t), d);
    }
}

TEST(ZLattice, SmithTransformsFactorization) {
    std::mt19937_64 rng(91);
    for (int trial = 0; trial < 25; ++trial) {
        const int rows = 1 + static_cast<int>(rng() % 4);
        const int cols = 1 + static_cast<int>(rng() % 4);
        const ZMat m = random_matrix(rows, cols, rng);
        const SmithTransforms st = smith_with_transforms(m);
        const ZMat prod = mat_mul(mat_mul(st.U, m), st.V);
        ASSERT_EQ(prod.rows, st.S.rows);
        ASSERT_EQ(prod.cols, st.S.cols);
        for (size_t i = 0; i < prod.a.size(); ++i) EXPECT_EQ(prod.a[i], st.S.a[i]);
        // Off-diagonal entries vanish.
        for (int i = 0; i < st.S.rows; ++i)
            for (int j = 0; j < st.S.cols; ++j)
                if (i != j) EXPECT_EQ(st.S.at(i, j), 0);
    }
}

TEST(ZLattice, SolveModPlantedAndImpossible) {
    std::mt19937_64 rng(101);
    for (std::int64_t m : {2, 3, 4, 6}) {
        for (int trial = 0; trial < 20; ++trial) {
            const int rows = 1 + static_cast<int>(rng() % 4);
            const int cols = 1 + static_cast<int>(rng() % 4);
            const ZMat mat = random_matrix(rows, cols, rng);
            std::vector<std::int64_t> planted(cols);
            for (auto& v : planted) v = static_cast<std::int64_t>(rng() % m);
            std::vector<std::int64_t> rhs(rows);
            for (int i = 0; i < rows; ++i) {
                BigInt acc = 0;
                for (int j = 0; j < cols; ++j) acc += mat.at(i, j) * planted[j];
                acc %= m;
                if (acc < 0) acc += m;
                rhs[i] = static_cast<std::int64_t>(acc);
            }
            const auto x = solve_mod(mat, rhs, m);
            ASSERT_TRUE(x.has_value());
            for (int i = 0; i < rows; ++i) {
                BigInt acc = 0;
                for (int j = 0; j < cols; ++j) acc += mat.at(i, j) * (*x)[j];
                EXPECT_EQ(((acc - rhs[i]) % m + m) % m, 0);
            }
        }
    }
    // 2x = 1 (mod 4) has no solution.
    EXPECT_FALSE(solve_mod(from_rows({{2}}), {1}, 4).has_value());
    // x + y = 1, x + y = 0 (mod 2): contradictory.
    EXPECT_FALSE(solve_mod(from_rows({{1, 1}, {1, 1}}), {1, 0}, 2).has_value());
}

TEST(ZLattice, LatticeQuotientKnownValues) {
    // Z^2 over the span of (2,0),(0,3): one cyclic factor of order 6.
    EXPECT_EQ(lattice_quotient(ZMat::identity(2), from_rows({{2, 0}, {0, 3}})),
              (std::vector<std::int64_t>{6}));
    // Z^2 over 2Z^2: two factors of order 2.
    EXPECT_EQ(lattice_quotient(ZMat::identity(2), from_rows({{2, 0}, {0, 2}})),
              (std::vector<std::int64_t>{2, 2}));
    // Equal lattices: trivial quotient.
    EXPECT_EQ(lattice_quotient(from_rows({{2, 1}, {0, 3}}), from_rows({{2, 1}, {0, 3}})),
              (std::vector<std::int64_t>{}));
}

TEST(ZLattice, ForwardSolveDetectsNonMembership) {
    const ZMat b = from_rows({{2, 0}, {0, 3}});
    EXPECT_NO_THROW(forward_solve(b, from_rows({{4}, {3}})));
    EXPECT_THROW(forward_solve(b, from_rows({{1}, {0}})), internal_error);
}

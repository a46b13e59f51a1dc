#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "delta3/rational.hpp"

namespace delta3 {

/// Dense integer matrix, row-major, arbitrary-precision entries.
struct ZMat {
    int rows = 0;
    int cols = 0;
    std::vector<BigInt> a;

    ZMat() = default;
    ZMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    BigInt& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const BigInt& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static ZMat identity(int n) {
        ZMat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }
};

namespace detail {

inline void swap_cols(ZMat& m, int j, int k) {
    if (j == k) return;
    for (int i = 0; i < m.rows; ++i) std::swap(m.at(i, j), m.at(i, k));
}

inline void swap_rows(ZMat& m, int i, int k) {
    if (i == k) return;
    for (int j = 0; j < m.cols; ++j) std::swap(m.at(i, j), m.at(k, j));
}

// col[j] -= q * col[k]
inline void addmul_col(ZMat& m, int j, int k, const BigInt& q) {
    if (q == 0) return;
    for (int i = 0; i < m.rows; ++i) m.at(i, j) -= q * m.at(i, k);
}

// row[i] -= q * row[k]
inline void addmul_row(ZMat& m, int i, int k, const BigInt& q) {
    if (q == 0) return;
    for (int j = 0; j < m.cols; ++j) m.at(i, j) -= q * m.at(k, j);
}

inline void negate_col(ZMat& m, int j) {
    for (int i = 0; i < m.rows; ++i) m.at(i, j) = -m.at(i, j);
}

}  // namespace detail

inline ZMat mat_mul(const ZMat& x, const ZMat& y) {
    if (x.cols != y.rows) throw internal_error("mat_mul: dimension mismatch");
    ZMat z(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const BigInt& v = x.at(i, k);
            if (v == 0) continue;
            for (int j = 0; j < y.cols; ++j) z.at(i, j) += v * y.at(k, j);
        }
    return z;
}

/// Side-by-side block matrix [x | y].
inline ZMat hstack(const ZMat& x, const ZMat& y) {
    if (x.rows != y.rows) throw internal_error("hstack: row mismatch");
    ZMat z(x.rows, x.cols + y.cols);
    for (int i = 0; i < x.rows; ++i) {
        for (int j = 0; j < x.cols; ++j) z.at(i, j) = x.at(i, j);
        for (int j = 0; j < y.cols; ++j) z.at(i, x.cols + j) = y.at(i, j);
    }
    return z;
}

/// Stacked block matrix [x; y].
inline ZMat vstack(const ZMat& x, const ZMat& y) {
    if (x.cols != y.cols) throw internal_error("vstack: column mismatch");
    ZMat z(x.rows + y.rows, x.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) z.at(i, j) = x.at(i, j);
    for (int i = 0; i < y.rows; ++i)
        for (int j = 0; j < x.cols; ++j) z.at(x.rows + i, j) = y.at(i, j);
    return z;
}

/// Column echelon form via unimodular column operations.  After the call, columns
/// 0..rank-1 of E form a staircase (column k's first nonzero row strictly increases
/// with k) and columns rank..cols-1 are zero.  If V is non-null it accumulates the
/// column transformation: E_out = E_in * V.
inline int col_echelon(ZMat& E, ZMat* V) {
    if (V) *V = ZMat::identity(E.cols);
    int lead = 0;
    for (int row = 0; row < E.rows && lead < E.cols; ++row) {
        for (;;) {
            // Pick the active column with the smallest nonzero entry in this row.
            int best = -1;
            for (int j = lead; j < E.cols; ++j) {
                const BigInt& x = E.at(row, j);
                if (x == 0) continue;
                if (best < 0 || abs(x) < abs(E.at(row, best))) best = j;
            }
            if (best < 0) break;  // row is zero over active columns
            detail::swap_cols(E, lead, best);
            if (V) detail::swap_cols(*V, lead, best);
            bool cleared = true;
            for (int j = lead + 1; j < E.cols; ++j) {
                if (E.at(row, j) == 0) continue;
                BigInt q = E.at(row, j) / E.at(row, lead);
                detail::addmul_col(E, j, lead, q);
                if (V) detail::addmul_col(*V, j, lead, q);
                if (E.at(row, j) != 0) cleared = false;  // remainder survives, iterate
            }
            if (cleared) {
                if (E.at(row, lead) < 0) {
                    detail::negate_col(E, lead);
                    if (V) detail::negate_col(*V, lead);
                }
                ++lead;
                break;
            }
        }
    }
    return lead;
}

/// Basis of the integer kernel of M (as columns of a cols x k matrix).
inline ZMat kernel_columns(const ZMat& M) {
    ZMat E = M, V;
    int rank = col_echelon(E, &V);
    ZMat K(M.cols, M.cols - rank);
    for (int j = rank; j < M.cols; ++j)
        for (int i = 0; i < M.cols; ++i) K.at(i, j - rank) = V.at(i, j);
    return K;
}

namespace detail {

/// Replace M by a matrix with the same solution set of M x = 0 (mod m) but at
/// most `cols` rows: reduce entries mod m, then echelonize the row space (via
/// column echelon on the transpose, a unimodular change that preserves the
/// solutions) and keep only the nonzero rows.
inline ZMat compress_rows_mod(const ZMat& M, std::int64_t m) {
    ZMat T(M.cols, M.rows);
    for (int i = 0; i < M.rows; ++i)
        for (int j = 0; j < M.cols; ++j) {
            BigInt r = M.at(i, j) % m;
            if (r < 0) r += m;
            T.at(j, i) = r;
        }
    int rank = col_echelon(T, nullptr);
    ZMat R(rank, M.cols);
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < M.cols; ++j) R.at(i, j) = T.at(j, i);
    return R;
}

}  // namespace detail

/// Generators (as columns) of the lattice { x in Z^cols : M x = 0 (mod m) }.
/// The result always contains m*e_j for every j, so the lattice has full rank and
/// reducing any generator mod m leaves the span unchanged (which is done here to
/// keep entries small).
inline ZMat mod_kernel_lattice(const ZMat& M_in, std::int64_t m) {
    // Tall systems first get their redundant rows squeezed out; the kernel pass
    // below is cubic in the row count, the squeeze only quadratic.
    const ZMat M = (M_in.rows > M_in.cols) ? detail::compress_rows_mod(M_in, m) : M_in;
    // Integer kernel of [M | mI] projects onto the first block exactly to the
    // x with Mx in m*Z^rows.
    ZMat A(M.rows, M.cols + M.rows);
    for (int i = 0; i < M.rows; ++i) {
        for (int j = 0; j < M.cols; ++j) A.at(i, j) = M.at(i, j);
        A.at(i, M.cols + i) = m;
    }
    ZMat K = kernel_columns(A);
    std::vector<std::vector<BigInt>> cols;
    for (int j = 0; j < K.cols; ++j) {
        std::vector<BigInt> col(M.cols);
        bool nonzero = false;
        for (int i = 0; i < M.cols; ++i) {
            BigInt r = K.at(i, j) % m;
            if (r < 0) r += m;
            col[i] = r;
            nonzero = nonzero || r != 0;
        }
        if (nonzero) cols.push_back(std::move(col));
    }
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    ZMat G(M.cols, static_cast<int>(cols.size()) + M.cols);
    for (int j = 0; j < static_cast<int>(cols.size()); ++j)
        for (int i = 0; i < M.cols; ++i) G.at(i, j) = cols[j][i];
    for (int i = 0; i < M.cols; ++i) G.at(i, static_cast<int>(cols.size()) + i) = m;
    return G;
}

/// Generators of the intersection of the lattices spanned by the columns of x
/// and of y: solve x*c = y*d over Z and push the coefficient combos through x.
inline ZMat lattice_intersection(const ZMat& x, const ZMat& y) {
    ZMat neg = y;
    for (auto& v : neg.a) v = -v;
    ZMat K = kernel_columns(hstack(x, neg));
    ZMat C(x.cols, K.cols);
    for (int i = 0; i < x.cols; ++i)
        for (int j = 0; j < K.cols; ++j) C.at(i, j) = K.at(i, j);
    return mat_mul(x, C);
}

/// Lower-triangular basis of the full-rank lattice spanned by the given columns.
inline ZMat lattice_basis(const ZMat& gens) {
    ZMat E = gens;
    int rank = col_echelon(E, nullptr);
    if (rank != gens.rows)
        throw internal_error("lattice_basis: generators do not span a full-rank lattice");
    ZMat B(gens.rows, gens.rows);
    for (int j = 0; j < gens.rows; ++j)
        for (int i = 0; i < gens.rows; ++i) B.at(i, j) = E.at(i, j);
    return B;
}

/// Solve B X = G for lower-triangular nonsingular B; every entry of X must come out
/// integral (i.e. the columns of G lie in the lattice spanned by B's columns).
inline ZMat forward_solve(const ZMat& B, const ZMat& G) {
    ZMat X(B.cols, G.cols);
    for (int s = 0; s < G.cols; ++s) {
        for (int i = 0; i < B.rows; ++i) {
            BigInt acc = G.at(i, s);
            for (int j = 0; j < i; ++j) acc -= B.at(i, j) * X.at(j, s);
            if (acc % B.at(i, i) != 0)
                throw internal_error("forward_solve: column outside the target lattice");
            X.at(i, s) = acc / B.at(i, i);
        }
    }
    return X;
}

/// Smith normal form diagonal of A (no transform tracking).  Entries are positive
/// and each divides the next.
inline std::vector<BigInt> smith_diagonal(ZMat A) {
    std::vector<BigInt> diag;
    int t = 0;
    const int lim = std::min(A.rows, A.cols);
    while (t < lim) {
        int pi = -1, pj = -1;
        for (int i = t; i < A.rows; ++i)
            for (int j = t; j < A.cols; ++j) {
                const BigInt& x = A.at(i, j);
                if (x == 0) continue;
                if (pi < 0 || abs(x) < abs(A.at(pi, pj))) { pi = i; pj = j; }
            }
        if (pi < 0) break;
        detail::swap_rows(A, t, pi);
        detail::swap_cols(A, t, pj);
        for (;;) {
            bool clean = true;
            for (int i = t + 1; i < A.rows; ++i) {
                if (A.at(i, t) == 0) continue;
                detail::addmul_row(A, i, t, A.at(i, t) / A.at(t, t));
                if (A.at(i, t) != 0) { detail::swap_rows(A, t, i); clean = false; }
            }
            for (int j = t + 1; j < A.cols; ++j) {
                if (A.at(t, j) == 0) continue;
                detail::addmul_col(A, j, t, A.at(t, j) / A.at(t, t));
                if (A.at(t, j) != 0) { detail::swap_cols(A, t, j); clean = false; }
            }
            if (!clean) continue;
            // Divisibility fix-up: the pivot must divide everything below-right.
            bool fixed = true;
            for (int i = t + 1; i < A.rows && fixed; ++i)
                for (int j = t + 1; j < A.cols && fixed; ++j)
                    if (A.at(i, j) % A.at(t, t) != 0) {
                        detail::addmul_row(A, t, i, BigInt(-1));
                        fixed = false;
                    }
            if (fixed) break;
        }
        if (A.at(t, t) < 0) A.at(t, t) = -A.at(t, t);
        diag.push_back(A.at(t, t));
        ++t;
    }
    return diag;
}

/// Invariant factors (those > 1, in divisibility order) of L1/L2 where L1 and L2 are
/// the full-rank lattices spanned by the given generator columns and L2 <= L1.
inline std::vector<std::int64_t> lattice_quotient(const ZMat& gens1, const ZMat& gens2) {
    ZMat B = lattice_basis(gens1);
    ZMat X = forward_solve(B, gens2);
    std::vector<BigInt> diag = smith_diagonal(X);
    if (static_cast<int>(diag.size()) != X.rows)
        throw internal_error("lattice_quotient: inner lattice is not full rank");
    std::vector<std::int64_t> factors;
    for (const BigInt& d : diag)
        if (d > 1) factors.push_back(static_cast<std::int64_t>(d));
    return factors;
}

struct SmithTransforms {
    ZMat S, U, V;  // S = U * A * V, with U and V unimodular
};

inline SmithTransforms smith_with_transforms(ZMat A) {
    SmithTransforms r;
    r.U = ZMat::identity(A.rows);
    r.V = ZMat::identity(A.cols);
    int t = 0;
    const int lim = std::min(A.rows, A.cols);
    while (t < lim) {
        int pi = -1, pj = -1;
        for (int i = t; i < A.rows; ++i)
            for (int j = t; j < A.cols; ++j) {
                const BigInt& x = A.at(i, j);
                if (x == 0) continue;
                if (pi < 0 || abs(x) < abs(A.at(pi, pj))) { pi = i; pj = j; }
            }
        if (pi < 0) break;
        detail::swap_rows(A, t, pi);
        detail::swap_rows(r.U, t, pi);
        detail::swap_cols(A, t, pj);
        detail::swap_cols(r.V, t, pj);
        for (;;) {
            bool clean = true;
            for (int i = t + 1; i < A.rows; ++i) {
                if (A.at(i, t) == 0) continue;
                BigInt q = A.at(i, t) / A.at(t, t);
                detail::addmul_row(A, i, t, q);
                detail::addmul_row(r.U, i, t, q);
                if (A.at(i, t) != 0) {
                    detail::swap_rows(A, t, i);
                    detail::swap_rows(r.U, t, i);
                    clean = false;
                }
            }
            for (int j = t + 1; j < A.cols; ++j) {
                if (A.at(t, j) == 0) continue;
                BigInt q = A.at(t, j) / A.at(t, t);
                detail::addmul_col(A, j, t, q);
                detail::addmul_col(r.V, j, t, q);
                if (A.at(t, j) != 0) {
                    detail::swap_cols(A, t, j);
                    detail::swap_cols(r.V, t, j);
                    clean = false;
                }
            }
            if (!clean) continue;
            bool fixed = true;
            for (int i = t + 1; i < A.rows && fixed; ++i)
                for (int j = t + 1; j < A.cols && fixed; ++j)
                    if (A.at(i, j) % A.at(t, t) != 0) {
                        detail::addmul_row(A, t, i, BigInt(-1));
                        detail::addmul_row(r.U, t, i, BigInt(-1));
                        fixed = false;
                    }
            if (fixed) break;
        }
        if (A.at(t, t) < 0) {
            A.at(t, t) = -A.at(t, t);
            for (int j = 0; j < r.V.rows; ++j) r.V.at(j, t) = -r.V.at(j, t);
        }
        ++t;
    }
    r.S = std::move(A);
    return r;
}

/// One solution of M x = v (mod m) with entries in [0, m), or nullopt if none exists.
inline std::optional<std::vector<std::int64_t>> solve_mod(const ZMat& M,
                                                          const std::vector<std::int64_t>& v,
                                                          std::int64_t m) {
    ZMat A(M.rows, M.cols + M.rows);
    for (int i = 0; i < M.rows; ++i) {
        for (int j = 0; j < M.cols; ++j) A.at(i, j) = M.at(i, j);
        A.at(i, M.cols + i) = m;
    }
    SmithTransforms st = smith_with_transforms(A);
    std::vector<BigInt> b(A.rows);
    for (int i = 0; i < A.rows; ++i) {
        BigInt acc = 0;
        for (int j = 0; j < A.rows; ++j) acc += st.U.at(i, j) * v[j];
        b[i] = acc;
    }
    std::vector<BigInt> w(A.cols);
    const int lim = std::min(A.rows, A.cols);
    for (int i = 0; i < A.rows; ++i) {
        if (i < lim && st.S.at(i, i) != 0) {
            if (b[i] % st.S.at(i, i) != 0) return std::nullopt;
            w[i] = b[i] / st.S.at(i, i);
        } else if (b[i] != 0) {
            return std::nullopt;
        }
    }
    std::vector<std::int64_t> x(M.cols);
    for (int i = 0; i < M.cols; ++i) {
        BigInt acc = 0;
        for (int j = 0; j < A.cols; ++j) acc += st.V.at(i, j) * w[j];
        acc %= m;
        if (acc < 0) acc += m;
        x[i] = static_cast<std::int64_t>(acc);
    }
    return x;
}

}  // namespace delta3

#include <gtest/gtest.h>

#include <set>
#include <string>

#include "delta3/evaluator.hpp"
#include "delta3/three_algebra.hpp"

namespace {

using namespace delta3;

SparseVec normalized(SparseVec v) {
    detail::aggregate(v);
    return v;
}

StrongThreeAlgebra pair_basis_algebra() {
    return build_dw(constant_one_cocycle(cyclic_group(2)));
}

StrongThreeAlgebra singleton_algebra() {
    return build_sixj(make_sixj(1, {Rat(1)}, {Rat(1)}));
}

// Three cells around an interior vertex of degree two: no merge applies, so the
// first move must be a flip.  Built by hand; the labels are per-test.
LabeledTriangulation flip_first_triangulation(int l0, int l1, int l2) {
    LabeledTriangulation tri;
    tri.complex.cells[0] = TriCell{{0, 1, 2}};
    tri.complex.cells[1] = TriCell{{3, 0, 2}};
    tri.complex.cells[2] = TriCell{{0, 3, 2}};
    auto link = [&tri](SideRef a, SideRef b) {
        tri.complex.glue[a] = b;
        tri.complex.glue[b] = a;
    };
    link({0, 2}, {1, 1});
    link({1, 2}, {2, 1});
    link({1, 0}, {2, 0});
    tri.complex.boundary = {SideRef{0, 0}, SideRef{0, 1}, SideRef{2, 2}};
    tri.complex.next_cell = 3;
    tri.complex.next_vertex = 4;
    tri.labels[0] = l0;
    tri.labels[1] = l1;
    tri.labels[2] = l2;
    return tri;
}

TEST(EvaluatorTest, SingleCellIsTheLabel) {
    const auto alg = pair_basis_algebra();
    for (int l = 0; l < alg.dim; ++l) {
        const SparseVec got = evaluate(single_cell_triangulation(l), alg, 5);
        const SparseVec want{{l, Rat(1)}};
        EXPECT_EQ(got, want);
    }
}

TEST(EvaluatorTest, BoundaryRotationIsApplied) {
    const auto alg = pair_basis_algebra();
    for (int l = 0; l < alg.dim; ++l) {
        LabeledTriangulation tri = single_cell_triangulation(l);
        tri.complex.boundary = {SideRef{0, 1}, SideRef{0, 2}, SideRef{0, 0}};
        EXPECT_EQ(evaluate(tri, alg, 0), normalized(alg.P[l]));
    }
}

TEST(EvaluatorTest, SubdivisionReproducesTheTripleProduct) {
    const auto alg = pair_basis_algebra();
    ASSERT_FALSE(alg.m.empty());
    const int d = alg.dim;
    for (const auto& [key, out] : alg.m) {
        const int i = static_cast<int>(key / (d * d));
        const int j = static_cast<int>((key / d) % d);
        const int k = static_cast<int>(key % d);
        LabeledTriangulation tri = single_cell_triangulation(0);
        subdivide(tri, 0, {i, j, k});
        EXPECT_EQ(evaluate(tri, alg, 3), normalized(out))
            << "product entry (" << i << "," << j << "," << k << ")";
    }
    // A triple with no product entry evaluates to zero.
    bool found_absent = false;
    for (int i = 0; i < d && !found_absent; ++i)
        for (int j = 0; j < d && !found_absent; ++j)
            for (int k = 0; k < d && !found_absent; ++k) {
                if (alg.m.count(alg.key3(i, j, k))) continue;
                found_absent = true;
                LabeledTriangulation tri = single_cell_triangulation(0);
                subdivide(tri, 0, {i, j, k});
                EXPECT_TRUE(evaluate(tri, alg, 3).empty());
            }
    EXPECT_TRUE(found_absent);
}

TEST(EvaluatorTest, MoveEnumerationOnTheSubdividedCell) {
    LabeledTriangulation tri = single_cell_triangulation(0);
    subdivide(tri, 0, {1, 2, 3});
    validate_complex(tri.complex);
    EXPECT_EQ(tri.complex.cells.size(), 3u);
    EXPECT_EQ(mergeable_vertices(tri.complex), (std::vector<int>{3}));
    const std::vector<SideRef> edges{{1, 1}, {1, 2}, {2, 2}};
    EXPECT_EQ(flippable_edges(tri.complex), edges);
}

TEST(EvaluatorTest, FlipMovePreservesValidity) {
    const auto alg = pair_basis_algebra();
    LabeledTriangulation tri = single_cell_triangulation(0);
    subdivide(tri, 0, {1, 2, 3});
    EvaluationState st;
    st.complex = tri.complex;
    st.terms = {{Rat(1), tri.labels}};
    const auto ppow = detail::rotation_powers(alg);
    const auto mbar = derive_mtilde(alg);
    apply_flip_move(st, alg, mbar, ppow, {1, 1}, 100000);
    validate_complex(st.complex);
    EXPECT_EQ(st.complex.cells.size(), 3u);
    for (const auto& t : st.terms) {
        EXPECT_EQ(t.labels.size(), st.complex.cells.size());
        for (const auto& [cell, label] : t.labels) {
            EXPECT_TRUE(st.complex.cells.count(cell));
            EXPECT_GE(label, 0);
            EXPECT_LT(label, alg.dim);
        }
    }
}

TEST(EvaluatorTest, FlipFirstComplexEvaluates) {
    const auto tri0 = flip_first_triangulation(0, 0, 0);
    validate_complex(tri0.complex);
    EXPECT_TRUE(mergeable_vertices(tri0.complex).empty());
    const std::vector<SideRef> edges{{0, 2}};
    EXPECT_EQ(flippable_edges(tri0.complex), edges);

    const auto ones = singleton_algebra();
    ASSERT_EQ(ones.dim, 1);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const SparseVec got = evaluate(tri0, ones, seed);
        const SparseVec want{{0, Rat(1)}};
        EXPECT_EQ(got, want);
    }

    const auto alg = pair_basis_algebra();
    const auto tri = flip_first_triangulation(1, 2, 3);
    const SparseVec first = evaluate(tri, alg, 0);
    for (std::uint64_t seed = 1; seed < 10; ++seed)
        EXPECT_EQ(evaluate(tri, alg, seed), first);
}

TEST(EvaluatorTest, EvaluationIsIndependentOfMoveOrder) {
    const auto alg = pair_basis_algebra();
    for (int sub = 1; sub <= 3; ++sub) {
        const auto tri = random_triangulation(alg.dim, sub, 11 + sub);
        const SparseVec first = evaluate(tri, alg, 0);
        for (std::uint64_t seed = 1; seed < 10; ++seed)
            EXPECT_EQ(evaluate(tri, alg, seed), first) << "subdivisions " << sub;
    }
}

TEST(EvaluatorTest, EmptyProductTableGivesEmptyResult) {
    const auto alg = make_strong(2, {}, {}, {{0, 0, Rat(1)}},
                                 {{0, 0, Rat(1)}, {1, 1, Rat(1)}});
    LabeledTriangulation tri = single_cell_triangulation(0);
    subdivide(tri, 0, {0, 0, 0});
    EXPECT_TRUE(evaluate(tri, alg, 2).empty());
}

TEST(EvaluatorTest, BudgetsAreEnforced) {
    const auto alg = pair_basis_algebra();
    const auto key = alg.m.begin()->first;
    const int d = alg.dim;
    LabeledTriangulation tri = single_cell_triangulation(0);
    subdivide(tri, 0, {static_cast<int>(key / (d * d)), static_cast<int>((key / d) % d),
                       static_cast<int>(key % d)});
    EXPECT_THROW(evaluate(tri, alg, 0, /*step_budget=*/0), input_error);
    EXPECT_THROW(evaluate(tri, alg, 0, 10000, /*term_budget=*/0), input_error);
}

TEST(EvaluatorTest, LabelsMustCoverTheCells) {
    const auto alg = pair_basis_algebra();
    LabeledTriangulation tri = single_cell_triangulation(0);
    tri.labels.clear();
    EXPECT_THROW(evaluate(tri, alg, 0), input_error);
    tri.labels[0] = alg.dim;  // out of range
    EXPECT_THROW(evaluate(tri, alg, 0), input_error);
}

TEST(EvaluatorTest, ComplexValidationRejectsBrokenGeometry) {
    Complex cx;
    cx.cells[0] = TriCell{{0, 0, 2}};
    cx.boundary = {SideRef{0, 0}, SideRef{0, 1}, SideRef{0, 2}};
    EXPECT_THROW(validate_complex(cx), input_error);

    Complex cyc = single_cell_triangulation(0).complex;
    cyc.boundary = {SideRef{0, 0}, SideRef{0, 2}, SideRef{0, 1}};
    EXPECT_THROW(validate_complex(cyc), input_error);
}

TEST(EvaluatorTest, JsonRoundTrip) {
    const auto tri = random_triangulation(4, 2, 7);
    const auto j = triangulation_to_json(tri);
    const auto back = triangulation_from_json(j);
    EXPECT_EQ(triangulation_to_json(back).dump(), j.dump());
    const auto alg = pair_basis_algebra();
    EXPECT_EQ(evaluate(back, alg, 1), evaluate(tri, alg, 1));

    auto no_boundary = j;
    no_boundary.erase("boundary");
    EXPECT_THROW(triangulation_from_json(no_boundary), input_error);

    auto short_boundary = j;
    short_boundary["boundary"].erase(2);
    EXPECT_THROW(triangulation_from_json(short_boundary), input_error);

    auto self_glued = j;
    ASSERT_FALSE(self_glued["gluing"].empty());
    self_glued["gluing"][0][1] = self_glued["gluing"][0][0];
    EXPECT_THROW(triangulation_from_json(self_glued), input_error);

    auto doubled = j;
    doubled["gluing"].push_back(doubled["gluing"][0]);
    EXPECT_THROW(triangulation_from_json(doubled), input_error);
}

TEST(EvaluatorTest, RandomTriangulationIsDeterministic) {
    const auto a = triangulation_to_json(random_triangulation(4, 3, 9)).dump();
    const auto b = triangulation_to_json(random_triangulation(4, 3, 9)).dump();
    EXPECT_EQ(a, b);
    std::set<std::string> distinct;
    for (std::uint64_t seed = 0; seed < 6; ++seed)
        distinct.insert(triangulation_to_json(random_triangulation(4, 3, seed)).dump());
    EXPECT_GE(distinct.size(), 2u);
}

}  // namespace

#include "egfem/assembly.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

using namespace egfem;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// one skewed triangle, so no symmetry hides an index mix-up
std::shared_ptr<const Mesh> single_triangle() {
    std::vector<Vec2> v = {{0.1, 0.2}, {1.3, 0.4}, {0.5, 1.1}};
    return std::make_shared<const Mesh>(v, std::vector<std::array<int, 3>>{{0, 1, 2}},
                                        std::vector<BoundaryEdge>{{{0, 1}}, {{1, 2}}, {{2, 0}}});
}

double tri_area(const Mesh& m) {
    const Vec2 a = m.vertices()[1] - m.vertices()[0], b = m.vertices()[2] - m.vertices()[0];
    return 0.5 * std::abs(a[0] * b[1] - a[1] * b[0]);
}

// gradients of the barycentric coordinates: grad lambda_i = rot(opposite edge) / (2|K|)
std::array<Vec2, 3> lambda_gradients(const Mesh& m) {
    const auto& x = m.vertices();
    const double two_area = 2.0 * tri_area(m);
    std::array<Vec2, 3> g;
    for (int i = 0; i < 3; ++i) {
        const Vec2 e = x[(i + 2) % 3] - x[(i + 1) % 3];
        g[i] = Vec2(-e[1], e[0]) / two_area;
    }
    return g;
}

// int_K l0^a l1^b l2^c = 2|K| a! b! c! / (a+b+c+2)!
double bary_monomial(double area, int a, int b, int c) {
    return 2.0 * area * factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 2);
}

Eigen::MatrixXd dense(const SparseMatrix& A) { return Eigen::MatrixXd(A); }

}  // namespace

TEST(Quadrature, DunavantExactForMonomials) {
    for (int deg = 1; deg <= kMaxQuadratureDegree; ++deg) {
        const QuadratureRule& r = dunavant_rule(deg);
        EXPECT_EQ(r.exactness_degree, deg);
        double wsum = 0.0;
        for (double w : r.weights) wsum += w;
        EXPECT_NEAR(wsum, 1.0, 1e-15);
        for (int a = 0; a <= deg; ++a)
            for (int b = 0; a + b <= deg; ++b) {
                double s = 0.0;
                for (int q = 0; q < r.size(); ++q)
                    s += 0.5 * r.weights[q] * std::pow(r.points[q][1], a) * std::pow(r.points[q][2], b);
                EXPECT_NEAR(s, factorial(a) * factorial(b) / factorial(a + b + 2), 1e-15) << deg << " " << a << b;
            }
        for (const auto& p : r.points) EXPECT_NEAR(p[0] + p[1] + p[2], 1.0, 1e-15);
    }
    EXPECT_THROW(dunavant_rule(0), InvalidArgument);
    EXPECT_THROW(dunavant_rule(7), InvalidArgument);
}

TEST(Quadrature, PointCountsMatchDunavantTables) {
    const int expected[] = {1, 3, 4, 6, 7, 12};
    for (int deg = 1; deg <= 6; ++deg) EXPECT_EQ(dunavant_rule(deg).size(), expected[deg - 1]);
}

TEST(Quadrature, GaussLineExact) {
    for (int deg = 1; deg <= 7; ++deg) {
        const LineRule r = gauss_line_rule(deg);
        for (int a = 0; a <= deg; ++a) {
            double s = 0.0;
            for (std::size_t q = 0; q < r.points.size(); ++q) s += r.weights[q] * std::pow(r.points[q], a);
            EXPECT_NEAR(s, 1.0 / (a + 1), 1e-15);
        }
    }
}

TEST(Basis, PartitionOfUnityAndNodalProperty) {
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (auto fam : {ElementFamily::P0(), ElementFamily::P1(), ElementFamily::P2(), ElementFamily::P3()}) {
        for (int trial = 0; trial < 20; ++trial) {
            double a = U(rng), b = U(rng);
            if (a + b > 1.0) a = 1.0 - a, b = 1.0 - b;
            const BasisValues bv = eval_basis(fam, {1.0 - a - b, a, b});
            EXPECT_NEAR(bv.values.sum(), 1.0, 1e-14);
            EXPECT_NEAR(bv.gradients.rowwise().sum().norm(), 0.0, 1e-13);
        }
        const auto nodes = lagrange_nodes(fam);
        ASSERT_EQ(static_cast<int>(nodes.size()), fam.local_size());
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            const BasisValues bv = eval_basis(fam, nodes[j]);
            for (std::size_t i = 0; i < nodes.size(); ++i) EXPECT_NEAR(bv.values[i], i == j ? 1.0 : 0.0, 1e-14);
        }
    }
}

TEST(Basis, GradientsMatchCentralDifferences) {
    const Barycentric p{0.2, 0.3, 0.5};
    const double h = 1e-6;
    for (auto fam : {ElementFamily::P1(), ElementFamily::P2(), ElementFamily::P3()}) {
        const BasisValues bv = eval_basis(fam, p);
        // reference coordinates are (lambda_1, lambda_2)
        const BasisValues px = eval_basis(fam, {p[0] - h, p[1] + h, p[2]});
        const BasisValues mx = eval_basis(fam, {p[0] + h, p[1] - h, p[2]});
        const BasisValues py = eval_basis(fam, {p[0] - h, p[1], p[2] + h});
        const BasisValues my = eval_basis(fam, {p[0] + h, p[1], p[2] - h});
        for (int i = 0; i < fam.local_size(); ++i) {
            EXPECT_NEAR(bv.gradients(0, i), (px.values[i] - mx.values[i]) / (2 * h), 1e-8);
            EXPECT_NEAR(bv.gradients(1, i), (py.values[i] - my.values[i]) / (2 * h), 1e-8);
        }
    }
}

TEST(FunctionSpace, DofCountsOnSixtyFourGrid) {
    auto mesh = std::make_shared<const Mesh>(generate_unit_square(64));
    EXPECT_EQ(build_space(mesh, ElementFamily::P0())->n_dofs(), 8192);
    EXPECT_EQ(build_space(mesh, ElementFamily::P1())->n_dofs(), 4225);
    EXPECT_EQ(build_space(mesh, ElementFamily::P2())->n_dofs(), 16641);
    EXPECT_EQ(build_space(mesh, ElementFamily::P3())->n_dofs(), 37249);
    EXPECT_EQ(build_space(mesh, ElementFamily::quadrature(4))->n_dofs(), 6 * 8192);
}

TEST(FunctionSpace, SharedDofsHaveConsistentCoordinates) {
    auto mesh = std::make_shared<const Mesh>(generate_unit_square(3));
    for (auto fam : {ElementFamily::P1(), ElementFamily::P2(), ElementFamily::P3()}) {
        auto V = build_space(mesh, fam);
        const auto nodes = lagrange_nodes(fam);
        for (int t = 0; t < mesh->num_triangles(); ++t) {
            const ElementGeometry g = element_geometry(*mesh, t);
            const auto dofs = V->cell_dofs(t);
            for (int i = 0; i < fam.local_size(); ++i)
                EXPECT_LT((g.map(nodes[i]) - V->dof_coords()[dofs[i]]).norm(), 1e-14);
        }
        // every boundary DOF lies on the boundary
        for (int d : V->dirichlet_dofs()) {
            const Vec2 x = V->dof_coords()[d];
            EXPECT_LT(std::min({x[0], x[1], 1.0 - x[0], 1.0 - x[1]}), 1e-14);
        }
    }
}

TEST(ElementMatrices, P1MassAndStiffnessMatchSymbolicForms) {
    auto mesh = single_triangle();
    auto V = build_space(mesh, ElementFamily::P1());
    const double area = tri_area(*mesh);
    const auto g = lambda_gradients(*mesh);
    const Eigen::MatrixXd M = dense(assemble_mass(*V, *V, 2));
    const Eigen::MatrixXd K = dense(assemble_stiffness(*V, 1));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            EXPECT_NEAR(M(i, j), area * (i == j ? 1.0 / 6.0 : 1.0 / 12.0), 1e-13);
            EXPECT_NEAR(K(i, j), area * g[i].dot(g[j]), 1e-13);
        }
}

TEST(ElementMatrices, P2MassMatchesBarycentricExpansion) {
    // P2 basis: l_i (2 l_i - 1) at vertices, 4 l_a l_b at the midpoint of edge (a,b)
    auto mesh = single_triangle();
    auto V = build_space(mesh, ElementFamily::P2());
    const double area = tri_area(*mesh);
    const auto nodes = lagrange_nodes(ElementFamily::P2());
    // express every basis function as a polynomial in barycentric monomials of degree <= 2
    using Poly = std::map<std::array<int, 3>, double>;
    std::vector<Poly> basis;
    for (const auto& n : nodes) {
        Poly p;
        int ones = 0, at = -1;
        for (int k = 0; k < 3; ++k)
            if (std::abs(n[k] - 1.0) < 1e-12) ones = 1, at = k;
        if (ones) {
            std::array<int, 3> sq{0, 0, 0}, lin{0, 0, 0};
            sq[at] = 2;
            lin[at] = 1;
            p[sq] = 2.0;
            p[lin] = -1.0;
        } else {
            std::array<int, 3> e{0, 0, 0};
            for (int k = 0; k < 3; ++k)
                if (n[k] > 0.25) e[k] = 1;
            p[e] = 4.0;
        }
        basis.push_back(p);
    }
    const Eigen::MatrixXd M = dense(assemble_mass(*V, *V, 4));
    const auto dofs = V->cell_dofs(0);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            double s = 0.0;
            for (const auto& [mi, ci] : basis[i])
                for (const auto& [mj, cj] : basis[j])
                    s += ci * cj * bary_monomial(area, mi[0] + mj[0], mi[1] + mj[1], mi[2] + mj[2]);
            EXPECT_NEAR(M(dofs[i], dofs[j]), s, 1e-13);
        }
}

TEST(ElementMatrices, P1TrilinearMassMatchesSymbolicForm) {
    auto mesh = single_triangle();
    auto V = build_space(mesh, ElementFamily::P1());
    const double area = tri_area(*mesh);
    const SparseTensor3 T = assemble_mass_trilinear(*V, *V, 3);
    EXPECT_EQ(static_cast<int>(T.nnz()), 27);
    for (std::size_t e = 0; e < T.nnz(); ++e) {
        std::array<int, 3> pw{0, 0, 0};
        ++pw[T.i()[e]];
        ++pw[T.j()[e]];
        ++pw[T.k()[e]];
        EXPECT_NEAR(T.values()[e], bary_monomial(area, pw[0], pw[1], pw[2]), 1e-13);
    }
}

TEST(ElementMatrices, BoundaryEdgeMassMatchesOneDimensionalForm) {
    std::vector<Vec2> v = {{0, 0}, {2, 0}, {0, 1}};
    std::vector<BoundaryEdge> b = {{{0, 1}, BoundaryTag::Neumann}, {{1, 2}}, {{2, 0}}};
    auto mesh = std::make_shared<const Mesh>(v, std::vector<std::array<int, 3>>{{0, 1, 2}}, b);
    auto V = build_space(mesh, ElementFamily::P1());
    const Eigen::MatrixXd B = dense(assemble_boundary_mass(*V, *V));
    const double L = 2.0;
    EXPECT_NEAR(B(0, 0), L / 3, 1e-14);
    EXPECT_NEAR(B(1, 1), L / 3, 1e-14);
    EXPECT_NEAR(B(0, 1), L / 6, 1e-14);
    EXPECT_NEAR(B(1, 0), L / 6, 1e-14);
    EXPECT_NEAR(B.row(2).norm() + B.col(2).norm(), 0.0, 1e-15);

    // no Neumann edges: empty
    auto square = std::make_shared<const Mesh>(generate_unit_square(2));
    auto W = build_space(square, ElementFamily::P1());
    EXPECT_EQ(assemble_boundary_mass(*W, *W).nonZeros(), 0);
}

#include "egfem/assembly.hpp"
#include "egfem/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace egfem;

namespace {

std::shared_ptr<const FunctionSpace> square_space(int n, ElementFamily fam = ElementFamily::P1()) {
    return build_space(std::make_shared<const Mesh>(generate_unit_square(n)), fam);
}

PointwiseFn fn(std::function<double(double)> f) {
    PointwiseFn p;
    p.value = [f](double u, const Vec2&, const Vec2&) { return f(u); };
    return p;
}

double max_abs(const SparseMatrix& A) { return A.nonZeros() ? A.coeffs().cwiseAbs().maxCoeff() : 0.0; }

DenseVector smooth(const FunctionSpace& V) {
    return interpolate(V, [](const Vec2& x) { return std::sin(3 * x[0]) + x[1] * x[1] - 0.3; });
}

}  // namespace

TEST(Load, ConstantOneSumsToArea) {
    auto V = square_space(5);
    EXPECT_NEAR(assemble_load(*V, [](const Vec2&) { return 1.0; }, 1).sum(), 1.0, 1e-14);
    EXPECT_EQ(assemble_load(*V, [](const Vec2&) { return 0.0; }, 3).norm(), 0.0);
}

TEST(Load, QuadraticSourceVanishesAtCorner) {
    auto d = [](const Vec2& x) {
        const double u = x[0] * x[1] * (x[0] + x[1]);
        return -2.0 * (x[0] + x[1]) + u * u;
    };
    EXPECT_NEAR(d(Vec2(1, 1)), 0.0, 1e-15);
}

TEST(Forms, TrilinearMassWithOnesIsLoadOfOne) {
    for (auto fam : {ElementFamily::P1(), ElementFamily::P2()}) {
        auto V = square_space(4);
        auto W = build_space(V->mesh_ptr(), fam);
        const SparseTensor3 T = assemble_mass_trilinear(*V, *W, product_degree({1, 1, fam.degree()}));
        const DenseVector one = t3_double_contract(T, DenseVector::Ones(V->n_dofs()), DenseVector::Ones(W->n_dofs()));
        const DenseVector ref = assemble_load(*V, [](const Vec2&) { return 1.0; }, 2);
        EXPECT_LE((one - ref).lpNorm<Eigen::Infinity>(), 1e-13);
    }
}

TEST(Forms, MassWithQuadratureSpaceIsPointEvaluation) {
    auto V = square_space(3);
    auto W = build_space(V->mesh_ptr(), ElementFamily::quadrature(3));
    const SparseMatrix M = assemble_mass(*V, *W, 3);
    // sum over i of M_ij = w_j |K| (the degree-3 rule has one negative weight per triangle)
    const DenseVector colsum = M.transpose() * DenseVector::Ones(V->n_dofs());
    EXPECT_NEAR(colsum.sum(), 1.0, 1e-14);
    const QuadratureRule& q = dunavant_rule(3);
    const double area = 1.0 / 18;  // 3x3 grid
    for (int j = 0; j < colsum.size(); ++j) EXPECT_NEAR(colsum[j], q.weights[j % q.weights.size()] * area, 1e-15);
}

TEST(Forms, StiffnessAnnihilatesConstantsAndIsSymmetric) {
    for (auto fam : {ElementFamily::P1(), ElementFamily::P2(), ElementFamily::P3()}) {
        auto V = square_space(3, fam);
        const SparseMatrix K = assemble_stiffness(*V, product_degree({fam.degree() - 1, fam.degree() - 1}));
        EXPECT_LE((K * DenseVector::Ones(V->n_dofs())).lpNorm<Eigen::Infinity>(), 1e-12);
        EXPECT_LE(max_abs(SparseMatrix(K - SparseMatrix(K.transpose()))), 1e-14);
    }
}

TEST(Forms, WeightedStiffnessTensorWithOnesIsStiffness) {
    auto V = square_space(4);
    for (auto fam : {ElementFamily::P0(), ElementFamily::P2(), ElementFamily::quadrature(2)}) {
        auto Wa = build_space(V->mesh_ptr(), fam);
        const SparseTensor3 T = assemble_weighted_stiffness_tensor(*V, *Wa, product_degree({0, 0, fam.degree()}));
        const SparseMatrix A = t3_contract_mode3(T, DenseVector::Ones(Wa->n_dofs()));
        EXPECT_LE(max_abs(SparseMatrix(A - assemble_stiffness(*V, 1))), 1e-13) << fam.name();
    }
}

TEST(Forms, TensorSquareTermEqualsQuadratureVector) {
    auto V = square_space(6);
    const DenseVector u = smooth(*V);
    const SparseTensor3 T = assemble_mass_trilinear(*V, *V, 3);
    const DenseVector sga = sga_nonlinear_vector(V, fn([](double x) { return x * x; }), u, 3);
    EXPECT_LE((t3_double_contract(T, u, u) - sga).lpNorm<Eigen::Infinity>(), 1e-15);
}

TEST(Forms, DirectionalDerivativeTensorEqualsConvectionVector) {
    auto V = square_space(6);
    const DenseVector u = smooth(*V);
    const SparseTensor3 N = assemble_directional_derivative_tensor(*V, 2);
    const DenseVector sga = sga_convection_vector(V, fn([](double x) { return x * x; }), u, 2);
    EXPECT_LE((t3_double_contract(N, u, u) - sga).lpNorm<Eigen::Infinity>(), 1e-14);
    // the matrix form with W = P2 and f = interpolant of u^2 gives the same vector
    auto W = build_space(V->mesh_ptr(), ElementFamily::P2());
    const DenseVector uw = interp_matrix(*V, *W) * u;
    const DenseVector f = uw.cwiseProduct(uw);
    EXPECT_LE((assemble_directional_derivative(*V, *W, 2) * f - sga).lpNorm<Eigen::Infinity>(), 1e-14);
}

TEST(Interpolation, MatrixReproducesFunctionsInV) {
    auto V = square_space(4, ElementFamily::P2());
    auto lin = [](const Vec2& x) { return 1.0 + 2.0 * x[0] - 0.5 * x[1] + x[0] * x[1]; };
    const DenseVector u = interpolate(*V, lin);
    for (auto fam : {ElementFamily::P0(), ElementFamily::P3(), ElementFamily::quadrature(5)}) {
        auto W = build_space(V->mesh_ptr(), fam);
        const DenseVector uw = interp_matrix(*V, *W) * u;
        for (int i = 0; i < W->n_dofs(); ++i) EXPECT_NEAR(uw[i], lin(W->dof_coords()[i]), 1e-13);
    }
}

TEST(Interpolation, GradientOperatorExactForQuadratics) {
    auto V = square_space(4, ElementFamily::P2());
    const DenseVector u = interpolate(*V, [](const Vec2& x) { return x[0] * x[0] + 3 * x[0] * x[1]; });
    auto W = build_space(V->mesh_ptr(), ElementFamily::quadrature(3));
    const auto G = interp_grad_matrices(*V, *W);
    const DenseVector g1 = G[0] * u, g2 = G[1] * u;
    for (int i = 0; i < W->n_dofs(); ++i) {
        const Vec2 x = W->dof_coords()[i];
        EXPECT_NEAR(g1[i], 2 * x[0] + 3 * x[1], 1e-12);
        EXPECT_NEAR(g2[i], 3 * x[0], 1e-12);
    }
    const SparseTensor3 T = interp_grad_tensor(*V, *W);
    EXPECT_EQ(T.dims()[0], 2);
    EXPECT_EQ(T.dims()[1], V->n_dofs());
    EXPECT_EQ(T.dims()[2], W->n_dofs());
}

TEST(Dirichlet, PoissonReproducesLinearSolutionExactly) {
    auto V = square_space(6);
    auto exact = [](const Vec2& x) { return 0.5 + x[0] - 2.0 * x[1]; };
    const SparseMatrix K = assemble_stiffness(*V, 1);
    const DirichletBC bc = make_dirichlet(*V, exact);
    const auto [A, b] = apply_dirichlet(K, DenseVector::Zero(V->n_dofs()), bc);
    const DenseVector u = solve_linear(A, b);
    EXPECT_LE((u - interpolate(*V, exact)).lpNorm<Eigen::Infinity>(), 1e-13);
    // symmetric elimination keeps the matrix symmetric
    EXPECT_LE(max_abs(SparseMatrix(A - SparseMatrix(A.transpose()))), 1e-15);

    const DirichletReduction red(K, bc);
    SparseMatrix R = red.reduced_pattern();
    red.reduce_matrix({K.valuePtr(), static_cast<std::size_t>(K.nonZeros())},
                      {R.valuePtr(), static_cast<std::size_t>(R.nonZeros())});
    const DenseVector ur = red.expand(
        solve_linear(R, red.reduce_rhs({K.valuePtr(), static_cast<std::size_t>(K.nonZeros())},
                                       DenseVector::Zero(V->n_dofs()))));
    EXPECT_LE((ur - u).lpNorm<Eigen::Infinity>(), 1e-13);
}

TEST(Dirichlet, RejectsDuplicateAndOutOfRangeDofs) {
    auto V = square_space(2);
    const SparseMatrix K = assemble_stiffness(*V, 1);
    const DenseVector b = DenseVector::Zero(V->n_dofs());
    EXPECT_THROW(apply_dirichlet(K, b, DirichletBC{{0, 0}, {1.0, 1.0}}), InvalidArgument);
    EXPECT_THROW(apply_dirichlet(K, b, DirichletBC{{99}, {1.0}}), InvalidArgument);
}

TEST(Counter, OnlySolutionDependentAssemblyCounts) {
    auto V = square_space(4);
    const DenseVector u = smooth(*V);
    const std::uint64_t c0 = quadrature_evaluations();
    (void)assemble_mass_trilinear(*V, *V, 3);
    (void)assemble_stiffness(*V, 1);
    EXPECT_EQ(quadrature_evaluations(), c0);
    (void)sga_nonlinear_vector(V, fn([](double x) { return x; }), u, 3);
    // 32 triangles x 4 points
    EXPECT_EQ(quadrature_evaluations() - c0, 32u * 4u);
}

TEST(Degrees, ProductDegreeClamps) {
    EXPECT_EQ(product_degree({0, 0}), 1);
    EXPECT_EQ(product_degree({1, 1, 2}), 4);
    EXPECT_EQ(product_degree({3, 3, 3}), 6);
}

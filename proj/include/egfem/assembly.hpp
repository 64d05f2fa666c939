#pragma once

#include "egfem/elements.hpp"
#include "egfem/tensor.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace egfem {

using ScalarField = std::function<double(const Vec2&)>;

/// Coefficient f(u, grad u, x) evaluated pointwise, with optional partials
/// for Newton. d_dgrad returns (df/dg1, df/dg2).
struct PointwiseFn {
    using Value = std::function<double(double, const Vec2&, const Vec2&)>;
    using GradPartial = std::function<Vec2(double, const Vec2&, const Vec2&)>;

    Value value;
    Value d_du;
    GradPartial d_dgrad;
    bool uses_gradient = false;

    double operator()(double u, const Vec2& g, const Vec2& x) const { return value(u, g, x); }
    [[nodiscard]] bool has_derivatives() const { return static_cast<bool>(d_du) && (!uses_gradient || d_dgrad); }
};

struct DirichletBC {
    std::vector<int> dofs;
    std::vector<double> values;
};

/// Nodal values of u_D at the Dirichlet DOFs of V.
DirichletBC make_dirichlet(const FunctionSpace& V, const ScalarField& u_D);

// Number of nonlinear-coefficient quadrature evaluations performed by the
// solution-dependent assembly routines below (sga_* and SgaAssembler).
std::uint64_t quadrature_evaluations();
void reset_quadrature_evaluations();

/// Exact degree of a product of polynomial factors, clamped to the rule range.
int product_degree(std::initializer_list<int> degrees);

/// K_ij = int grad phi_j . grad phi_i
SparseMatrix assemble_stiffness(const FunctionSpace& V, int quad_degree);
/// (M)_ij = int eta_j phi_i, N_V x N_W. Quadrature-embedded W uses its own rule,
/// giving w_l |K| phi_i(x_l) exactly.
SparseMatrix assemble_mass(const FunctionSpace& V, const FunctionSpace& W, int quad_degree);
/// T_ijk = int eta^a_k grad eta^b_j . grad phi_i, dims (N_V, N_b, N_a).
SparseTensor3 assemble_trilinear_stiffness(const FunctionSpace& V, const FunctionSpace& Wb, const FunctionSpace& Wa,
                                           int quad_degree);
/// K_a with W_b = V.
SparseTensor3 assemble_weighted_stiffness_tensor(const FunctionSpace& V, const FunctionSpace& Wa, int quad_degree);
/// T_ijk = int eta_k phi_j phi_i, dims (N_V, N_V, N_W).
SparseTensor3 assemble_mass_trilinear(const FunctionSpace& V, const FunctionSpace& W, int quad_degree);
/// N_ij = int eta_j (d1 phi_i + d2 phi_i).
SparseMatrix assemble_directional_derivative(const FunctionSpace& V, const FunctionSpace& W, int quad_degree);
/// N_ijk = int phi_k phi_j (d1 phi_i + d2 phi_i).
SparseTensor3 assemble_directional_derivative_tensor(const FunctionSpace& V, int quad_degree);
/// Line mass over the edges carrying `tag`; zero matrix when there are none.
SparseMatrix assemble_boundary_mass(const FunctionSpace& V, const FunctionSpace& Wg,
                                    BoundaryTag tag = BoundaryTag::Neumann);
DenseVector assemble_load(const FunctionSpace& V, const ScalarField& f, int quad_degree);

/// (Pi)_ij = phi_j(x_i^W), N_W x N_V.
SparseMatrix interp_matrix(const FunctionSpace& V, const FunctionSpace& W);
/// (Pi_grad)_ijk = (grad phi_j(x_k^W))_i, dims (2, N_V, N_W). A DOF shared by
/// several elements is evaluated in its owner (lowest-index) element.
SparseTensor3 interp_grad_tensor(const FunctionSpace& V, const FunctionSpace& W);
/// The two slices of interp_grad_tensor as N_W x N_V matrices.
std::array<SparseMatrix, 2> interp_grad_matrices(const FunctionSpace& V, const FunctionSpace& W);

/// Solution-dependent assembly on a fixed rule and a fixed sparsity pattern.
/// Reference bases are tabulated once; everything touching u is recomputed on
/// every call.
class SgaAssembler {
public:
    SgaAssembler(std::shared_ptr<const FunctionSpace> V, int quad_degree);

    [[nodiscard]] const SparseMatrix& pattern() const { return pattern_; }
    [[nodiscard]] int quad_degree() const { return rule_->exactness_degree; }
    [[nodiscard]] const FunctionSpace& space() const { return *V_; }

    void add_weighted_stiffness(const PointwiseFn& a, const DenseVector& u, std::span<double> values,
                                double scale = 1.0) const;
    void add_weighted_mass(const PointwiseFn& c, const DenseVector& u, std::span<double> values,
                           double scale = 1.0) const;
    /// out_i += scale * int c(u_h, grad u_h, x) phi_i
    void add_nonlinear_vector(const PointwiseFn& c, const DenseVector& u, DenseVector& out, double scale = 1.0) const;
    /// out_i += scale * int f(u_h, grad u_h, x) (d1 phi_i + d2 phi_i)
    void add_convection_vector(const PointwiseFn& f, const DenseVector& u, DenseVector& out,
                               double scale = 1.0) const;

    [[nodiscard]] SparseMatrix make_matrix(std::span<const double> values) const;

private:
    struct Point {
        double u;
        Vec2 grad;
        Vec2 x;
    };
    template <class Body>
    void for_each_point(const DenseVector& u, bool need_grad, Body&& body) const;

    std::shared_ptr<const FunctionSpace> V_;
    const QuadratureRule* rule_;
    int n_loc_;
    std::vector<double> ref_values_;  // nq x n_loc
    std::vector<Vec2> ref_grads_;     // nq x n_loc
    SparseMatrix pattern_;
    std::vector<int> slots_;  // n_el x n_loc x n_loc
};

SparseMatrix sga_weighted_stiffness(std::shared_ptr<const FunctionSpace> V, const PointwiseFn& a,
                                    const DenseVector& u, int quad_degree);
SparseMatrix sga_weighted_mass(std::shared_ptr<const FunctionSpace> V, const PointwiseFn& c, const DenseVector& u,
                               int quad_degree);
DenseVector sga_nonlinear_vector(std::shared_ptr<const FunctionSpace> V, const PointwiseFn& c,
                                 const DenseVector& u, int quad_degree);
DenseVector sga_convection_vector(std::shared_ptr<const FunctionSpace> V, const PointwiseFn& f,
                                  const DenseVector& u, int quad_degree);

/// Symmetric elimination: known columns move to the right-hand side, the
/// constrained rows and columns become identity with rhs = prescribed value.
std::pair<SparseMatrix, DenseVector> apply_dirichlet(const SparseMatrix& A, const DenseVector& rhs,
                                                     const DirichletBC& bc);

/// The same elimination precomputed for a fixed pattern, producing the
/// reduced system on the free DOFs only.
class DirichletReduction {
public:
    DirichletReduction() = default;
    DirichletReduction(const SparseMatrix& pattern, const DirichletBC& bc);

    [[nodiscard]] int n_full() const { return n_full_; }
    [[nodiscard]] int n_free() const { return static_cast<int>(free_.size()); }
    [[nodiscard]] const SparseMatrix& reduced_pattern() const { return reduced_; }

    /// Reduced matrix values from the full pattern's values.
    void reduce_matrix(std::span<const double> full, std::span<double> reduced) const;
    /// rhs_F - A_FD u_D, using the full pattern's values.
    [[nodiscard]] DenseVector reduce_rhs(std::span<const double> full, const DenseVector& rhs) const;
    /// Full vector with the prescribed values on the constrained DOFs.
    [[nodiscard]] DenseVector expand(const DenseVector& free_values) const;

private:
    int n_full_ = 0;
    std::vector<int> free_;                      // reduced index -> full index
    std::vector<double> dirichlet_value_;        // full index -> value (for constrained DOFs)
    std::vector<std::pair<int, int>> keep_;      // (full slot, reduced slot)
    std::vector<std::array<int, 3>> coupling_;   // (full slot, reduced row, full column)
    SparseMatrix reduced_;
};

}  // namespace egfem

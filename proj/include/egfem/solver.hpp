#pragma once

#include "egfem/assembly.hpp"
#include "egfem/model.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace egfem {

// ---------------------------------------------------------------- linear solves

/// Sparse direct solver that keeps the symbolic analysis while the sparsity
/// pattern is unchanged and the numeric factorization while the values are.
class LinearSolver {
public:
    enum class Kind { SymmetricLDLT, LU };
    explicit LinearSolver(Kind kind = Kind::SymmetricLDLT);
    ~LinearSolver();
    LinearSolver(LinearSolver&&) noexcept;
    LinearSolver& operator=(LinearSolver&&) noexcept;

    DenseVector solve(const SparseMatrix& A, const DenseVector& b);
    [[nodiscard]] int analyses() const;
    [[nodiscard]] int factorizations() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One-shot LU solve; throws SingularMatrix instead of returning NaN.
DenseVector solve_linear(const SparseMatrix& A, const DenseVector& b);

// ---------------------------------------------------------------- iteration

struct IterOptions {
    double tol = 1e-12;
    int max_iter = 500;
    double divergence_norm_cap = 1e8;
    bool keep_iterates = false;
};

enum class Status { Converged, MaxIter, Diverged };
std::string to_string(Status s);
Status parse_status(const std::string& s);

struct SolveResult {
    DenseVector u;
    std::map<std::string, DenseVector> aux;
    int iterations = 0;
    Status status = Status::MaxIter;
    double offline_s = 0.0;
    double online_s = 0.0;
    std::vector<double> update_norms;  // relative u-updates, one per iteration
    std::vector<DenseVector> iterates;  // when keep_iterates
    std::uint64_t online_quadrature_evaluations = 0;
    std::string message;
};

struct Method {
    enum class Kind { Sga, TensorSga, Egfem };
    Kind kind = Kind::Sga;
    ElementFamily family = ElementFamily::P1();
    std::string name = "sga";

    /// sga, tensor-sga, gfem, egfem-p0..p3, egfem-i1..i6
    static Method parse(const std::string& name);
    [[nodiscard]] bool is_reformulated() const { return kind != Kind::Sga; }
};

// ---------------------------------------------------------------- SGA

/// Offline part of the standard approach: solution-independent matrices,
/// load, and the fixed pattern used by the per-iteration assembly.
struct SgaSystem {
    std::shared_ptr<const FunctionSpace> V;
    ProblemSpec problem;
    std::shared_ptr<const SgaAssembler> assembler;
    std::vector<double> constant_values;  // a0 K (if a absent) + c_linear M on the assembler pattern
    DenseVector load;
    DirichletBC bc;
    DirichletReduction reduction;
    /// Factored offline when the operator does not depend on u.
    std::shared_ptr<LinearSolver> solver;
};

SgaSystem build_sga_system(const ProblemSpec& problem, std::shared_ptr<const FunctionSpace> V,
                           int quad_degree = -1);
/// F(u) without Dirichlet rows replaced.
DenseVector sga_residual(const SgaSystem& sys, const DenseVector& u);
/// The lagged Picard operator A(u) (full, before elimination) and rhs(u).
std::pair<SparseMatrix, DenseVector> sga_picard_operator(const SgaSystem& sys, const DenseVector& u);
SolveResult picard_sga(const SgaSystem& sys, const IterOptions& opts = {});
SolveResult picard_sga(const ProblemSpec& problem, std::shared_ptr<const FunctionSpace> V,
                       const IterOptions& opts = {}, int quad_degree = -1);
/// Newton with a dense central-difference Jacobian; reference only, small meshes.
SolveResult newton_sga_fd(const SgaSystem& sys, const IterOptions& opts = {});

// ---------------------------------------------------------------- reformulated methods

enum class AuxRole { Stiffness, WeightedMass, Vector, Convection };

struct AuxTerm {
    std::string name;  // "a", "c_tilde", "c", "f"
    AuxRole role = AuxRole::Vector;
    PointwiseFn fn;
    std::shared_ptr<const FunctionSpace> W;
    SparseMatrix pi_u;                    // N_W x N_V
    std::array<SparseMatrix, 2> pi_grad;  // empty unless fn uses the gradient
    SparseTensor3 tensor;                 // Stiffness, WeightedMass
    SparseMatrix matrix;                  // Vector (M^c), Convection (scale * N^f)

    [[nodiscard]] int size() const { return W->n_dofs(); }
    /// f(Pi_u u, Pi_grad u, x^W), evaluated at every DOF of W.
    [[nodiscard]] DenseVector evaluate(const DenseVector& u) const;
};

/// Everything the tensor-SGA, GFEM and EGFEM loops need, assembled once.
struct EgfemForms {
    std::shared_ptr<const FunctionSpace> V;
    Method method;
    std::vector<AuxTerm> aux;
    SparseMatrix constant;  // a0 K (if a absent) + c_linear M
    std::optional<SparseTensor3> tensor_vector;  // tensor-sga: F_u += T : (u (x) u)
    DenseVector load;
    DirichletBC bc;

    // Fixed-pattern machinery for the online loop.
    SparseMatrix pattern;
    std::vector<double> constant_values;
    std::vector<Mode3Scatter> scatters;  // one per tensor aux term, same order as aux
    DirichletReduction reduction;
    std::shared_ptr<LinearSolver> solver;  // factored offline when no tensor term touches the matrix

    [[nodiscard]] int system_size() const;
    [[nodiscard]] DenseVector initial_u() const;
};

EgfemForms build_forms(const ProblemSpec& problem, std::shared_ptr<const FunctionSpace> V, const Method& method);
/// Contracted Picard operator A(aux) (full, before elimination) and rhs(aux, u).
std::pair<SparseMatrix, DenseVector> egfem_picard_operator(const EgfemForms& forms, const DenseVector& u,
                                                           const std::vector<DenseVector>& aux);
SolveResult picard_egfem(const EgfemForms& forms, const IterOptions& opts = {});

/// z = (u, aux_1, ..., aux_m). Dirichlet rows read u_i - u_D,i.
DenseVector egfem_initial_state(const EgfemForms& forms);
DenseVector egfem_residual(const EgfemForms& forms, const DenseVector& z);
SparseMatrix egfem_jacobian(const EgfemForms& forms, const DenseVector& z);
SolveResult newton_egfem(const EgfemForms& forms, const IterOptions& opts = {});

// ---------------------------------------------------------------- Burgers

struct BurgersOptions {
    bool keep_trajectory = false;
};

struct BurgersResult {
    DenseVector u;
    std::vector<DenseVector> trajectory;  // u^0 .. u^N when kept
    int steps = 0;
    Status status = Status::Converged;
    double offline_s = 0.0;
    double online_s = 0.0;
    int system_size = 0;
    std::uint64_t online_quadrature_evaluations = 0;
    std::string message;
};

/// M (u^{n+1} - u^n) + dt (nu K u^{n+1} + s N(u^n) - d^{n+1}) = 0 with the
/// nonlinear term lagged according to the method.
BurgersResult semi_implicit_burgers(const ProblemSpec& problem, std::shared_ptr<const FunctionSpace> V,
                                    const Method& method, const BurgersOptions& opts = {});

}  // namespace egfem

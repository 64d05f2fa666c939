#include "egfem/solver.hpp"

#include "iteration.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace egfem {

BurgersResult semi_implicit_burgers(const ProblemSpec& problem, std::shared_ptr<const FunctionSpace> V,
                                    const Method& method, const BurgersOptions& opts) {
    EGFEM_REQUIRE(V != nullptr, InvalidArgument, "semi_implicit_burgers: null space");
    EGFEM_REQUIRE(problem.time_dependent && problem.convection && problem.exact_t && problem.d_t, InvalidArgument,
                  "semi_implicit_burgers: problem '" + problem.id + "' is not a time-dependent convection problem");
    EGFEM_REQUIRE(problem.dt > 0.0 && problem.T > 0.0, InvalidArgument, "semi_implicit_burgers: need dt > 0, T > 0");
    const int steps = static_cast<int>(std::lround(problem.T / problem.dt));
    EGFEM_REQUIRE(steps >= 1 && std::abs(steps * problem.dt - problem.T) <= 1e-9 * problem.T, InvalidArgument,
                  "semi_implicit_burgers: T must be a multiple of dt");

    BurgersResult res;
    const auto t_off = std::chrono::steady_clock::now();
    const int p = V->family().degree();
    const double dt = problem.dt;
    const SparseMatrix M = assemble_mass(*V, *V, product_degree({p, p}));
    SparseMatrix A = M + (dt * problem.a0) * assemble_stiffness(*V, product_degree({p - 1, p - 1}));
    A.makeCompressed();
    const DirichletBC bc = make_dirichlet(*V, [&](const Vec2& x) { return problem.exact_t(x, 0.0); });
    const DirichletReduction reduction(A, bc);
    SparseMatrix reduced = reduction.reduced_pattern();
    reduction.reduce_matrix({A.valuePtr(), static_cast<std::size_t>(A.nonZeros())},
                            {reduced.valuePtr(), static_cast<std::size_t>(reduced.nonZeros())});
    // u-independent: factored once, before the clock for the time loop starts

    std::shared_ptr<const SgaAssembler> assembler;
    std::optional<EgfemForms> forms;
    if (method.kind == Method::Kind::Sga) {
        assembler = std::make_shared<const SgaAssembler>(V, problem.sga_quad_degree);
    } else {
        ProblemSpec stationary = problem;
        stationary.d = nullptr;  // the time-dependent load is assembled per step
        forms = build_forms(stationary, V, method);
    }
    DenseVector u = interpolate(*V, [&](const Vec2& x) { return problem.exact_t(x, 0.0); });
    for (std::size_t k = 0; k < bc.dofs.size(); ++k) u[bc.dofs[k]] = bc.values[k];
    DenseVector f;
    if (forms && !forms->aux.empty()) f = forms->aux.front().evaluate(u);
    res.system_size = forms ? forms->system_size() : V->n_dofs();
    const std::span<const double> a_values{A.valuePtr(), static_cast<std::size_t>(A.nonZeros())};
    const auto solver = detail::make_solver(reduction, a_values, true);
    res.offline_s = detail::seconds_since(t_off);

    const auto t_on = std::chrono::steady_clock::now();
    const std::uint64_t q0 = quadrature_evaluations();
    if (opts.keep_trajectory) res.trajectory.push_back(u);
    for (int n = 0; n < steps; ++n) {
        const double t1 = (n + 1) * dt;
        DenseVector rhs = assemble_load(*V, [&](const Vec2& x) { return problem.d_t(x, t1); }, problem.load_quad_degree);
        // rhs = M u^n + dt (d^{n+1} - s N(u^n))
        DenseVector conv = DenseVector::Zero(V->n_dofs());
        switch (method.kind) {
            case Method::Kind::Sga:
                assembler->add_convection_vector(*problem.convection, u, conv, problem.convection_scale);
                break;
            case Method::Kind::TensorSga:
                conv = t3_double_contract(*forms->tensor_vector, u, u);
                break;
            case Method::Kind::Egfem:
                conv = forms->aux.front().matrix * f;
                break;
        }
        rhs = M * u + dt * (rhs - conv);
        try {
            u = reduction.expand(solver->solve(reduced, reduction.reduce_rhs(a_values, rhs)));
        } catch (const SingularMatrix& e) {
            res.status = Status::Diverged;
            res.message = "step " + std::to_string(n + 1) + ": " + e.what();
            break;
        }
        res.steps = n + 1;
        if (!u.allFinite()) {
            res.status = Status::Diverged;
            res.message = "non-finite state at step " + std::to_string(n + 1);
            break;
        }
        if (method.kind == Method::Kind::Egfem) f = forms->aux.front().evaluate(u);
        if (opts.keep_trajectory) res.trajectory.push_back(u);
    }
    res.u = std::move(u);
    res.online_s = detail::seconds_since(t_on);
    res.online_quadrature_evaluations = quadrature_evaluations() - q0;
    return res;
}

}  // namespace egfem

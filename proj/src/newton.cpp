#include "egfem/solver.hpp"

#include "iteration.hpp"

#include <Eigen/LU>

#include <chrono>

namespace egfem {

namespace {

std::vector<int> aux_offsets(const EgfemForms& f) {
    std::vector<int> off;
    int o = f.V->n_dofs();
    for (const auto& t : f.aux) {
        off.push_back(o);
        o += t.size();
    }
    return off;
}

std::vector<DenseVector> split_aux(const EgfemForms& f, const DenseVector& z) {
    const auto off = aux_offsets(f);
    std::vector<DenseVector> aux;
    for (std::size_t k = 0; k < f.aux.size(); ++k) aux.push_back(z.segment(off[k], f.aux[k].size()));
    return aux;
}

void require_newton_forms(const EgfemForms& f, const DenseVector& z) {
    EGFEM_REQUIRE(z.size() == f.system_size(), DimensionMismatch, "Newton state has the wrong length");
    for (const auto& t : f.aux)
        EGFEM_REQUIRE(t.fn.has_derivatives(), InvalidArgument, "coefficient '" + t.name + "' has no derivatives");
}

}  // namespace

DenseVector egfem_initial_state(const EgfemForms& forms) {
    DenseVector z(forms.system_size());
    const DenseVector u = forms.initial_u();
    z.head(u.size()) = u;
    const auto off = aux_offsets(forms);
    for (std::size_t k = 0; k < forms.aux.size(); ++k) z.segment(off[k], forms.aux[k].size()) = forms.aux[k].evaluate(u);
    return z;
}

DenseVector egfem_residual(const EgfemForms& forms, const DenseVector& z) {
    EGFEM_REQUIRE(z.size() == forms.system_size(), DimensionMismatch, "Newton state has the wrong length");
    const int n = forms.V->n_dofs();
    const DenseVector u = z.head(n);
    const auto aux = split_aux(forms, z);
    const auto [A, rhs] = egfem_picard_operator(forms, u, aux);
    DenseVector F(z.size());
    F.head(n) = A * u - rhs;
    for (std::size_t k = 0; k < forms.bc.dofs.size(); ++k) {
        const int d = forms.bc.dofs[k];
        F[d] = u[d] - forms.bc.values[k];
    }
    const auto off = aux_offsets(forms);
    for (std::size_t k = 0; k < forms.aux.size(); ++k)
        F.segment(off[k], forms.aux[k].size()) = aux[k] - forms.aux[k].evaluate(u);
    return F;
}

SparseMatrix egfem_jacobian(const EgfemForms& forms, const DenseVector& z) {
    require_newton_forms(forms, z);
    const int n = forms.V->n_dofs();
    const int N = forms.system_size();
    const DenseVector u = z.head(n);
    const auto aux = split_aux(forms, z);
    const auto off = aux_offsets(forms);

    std::vector<char> constrained(n, 0);
    for (int d : forms.bc.dofs) constrained[d] = 1;

    std::vector<Triplet> triplets;
    auto add_block = [&](const SparseMatrix& B, int row0, int col0, double scale, bool skip_constrained) {
        for (int r = 0; r < B.outerSize(); ++r) {
            if (skip_constrained && constrained[r]) continue;
            for (SparseMatrix::InnerIterator it(B, r); it; ++it)
                triplets.emplace_back(row0 + r, col0 + static_cast<int>(it.col()), scale * it.value());
        }
    };

    // dF_u/du: the contracted Picard operator, plus the tensor-sga term.
    add_block(egfem_picard_operator(forms, u, aux).first, 0, 0, 1.0, true);
    if (forms.tensor_vector) {
        add_block(t3_contract_mode3(*forms.tensor_vector, u), 0, 0, 1.0, true);
        add_block(t3_contract_mode2(*forms.tensor_vector, u), 0, 0, 1.0, true);
    }
    for (int d : forms.bc.dofs) triplets.emplace_back(d, d, 1.0);

    for (std::size_t k = 0; k < forms.aux.size(); ++k) {
        const AuxTerm& t = forms.aux[k];
        // dF_u/d(aux)
        if (t.role == AuxRole::Stiffness || t.role == AuxRole::WeightedMass)
            add_block(t3_contract_mode2(t.tensor, u), 0, off[k], 1.0, true);
        else
            add_block(t.matrix, 0, off[k], 1.0, true);

        // aux rows: I - (diag(df/du) Pi_u + sum_d diag(df/dg_d) S_d)
        const DenseVector uu = t.pi_u * u;
        DenseVector g1, g2;
        if (t.fn.uses_gradient) {
            g1 = t.pi_grad[0] * u;
            g2 = t.pi_grad[1] * u;
        }
        const auto& x = t.W->dof_coords();
        DenseVector du(t.size()), dg1 = DenseVector::Zero(t.size()), dg2 = DenseVector::Zero(t.size());
        for (int i = 0; i < t.size(); ++i) {
            const Vec2 g = t.fn.uses_gradient ? Vec2(g1[i], g2[i]) : Vec2::Zero();
            du[i] = t.fn.d_du(uu[i], g, x[i]);
            if (t.fn.uses_gradient) {
                const Vec2 dg = t.fn.d_dgrad(uu[i], g, x[i]);
                dg1[i] = dg[0];
                dg2[i] = dg[1];
            }
        }
        SparseMatrix D = du.asDiagonal() * t.pi_u;
        if (t.fn.uses_gradient) D += dg1.asDiagonal() * t.pi_grad[0] + dg2.asDiagonal() * t.pi_grad[1];
        add_block(D, off[k], 0, -1.0, false);
        for (int i = 0; i < t.size(); ++i) triplets.emplace_back(off[k] + i, off[k] + i, 1.0);
    }
    SparseMatrix J(N, N);
    J.setFromTriplets(triplets.begin(), triplets.end());
    J.makeCompressed();
    return J;
}

SolveResult newton_egfem(const EgfemForms& forms, const IterOptions& opts) {
    EGFEM_REQUIRE(opts.tol > 0.0 && opts.max_iter >= 1, InvalidArgument, "invalid iteration options");
    SolveResult r;
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t q0 = quadrature_evaluations();
    const int n = forms.V->n_dofs();
    const bool linear = forms.aux.empty() && !forms.tensor_vector;

    LinearSolver solver(LinearSolver::Kind::LU);
    DenseVector z = egfem_initial_state(forms);
    if (opts.keep_iterates) r.iterates.push_back(z.head(n));
    for (int it = 1; it <= opts.max_iter; ++it) {
        r.iterations = it;
        DenseVector delta;
        try {
            delta = solver.solve(egfem_jacobian(forms, z), egfem_residual(forms, z));
        } catch (const SingularMatrix& e) {
            r.status = Status::Diverged;
            r.message = std::string("singular Jacobian: ") + e.what();
            break;
        }
        DenseVector z_new = z - delta;
        const auto status = detail::check_update(z_new.head(n), z.head(n), opts, r);
        z = std::move(z_new);
        if (opts.keep_iterates) r.iterates.push_back(z.head(n));
        if (status) {
            r.status = *status;
            break;
        }
        if (linear) {
            r.status = Status::Converged;
            break;
        }
    }
    r.u = z.head(n);
    for (const auto& t : forms.aux) r.aux[t.name] = t.evaluate(r.u);
    r.online_s = detail::seconds_since(start);
    r.online_quadrature_evaluations = quadrature_evaluations() - q0;
    return r;
}

SolveResult newton_sga_fd(const SgaSystem& sys, const IterOptions& opts) {
    const int n = sys.V->n_dofs();
    EGFEM_REQUIRE(n <= 2000, InvalidArgument, "newton_sga_fd is a dense reference for small meshes only");
    SolveResult r;
    const auto start = std::chrono::steady_clock::now();

    auto residual = [&](const DenseVector& u) {
        DenseVector F = sga_residual(sys, u);
        for (std::size_t k = 0; k < sys.bc.dofs.size(); ++k) F[sys.bc.dofs[k]] = u[sys.bc.dofs[k]] - sys.bc.values[k];
        return F;
    };

    DenseVector u = detail::initial_guess(n, sys.bc);
    for (int it = 1; it <= opts.max_iter; ++it) {
        r.iterations = it;
        const DenseVector F = residual(u);
        Eigen::MatrixXd J(n, n);
        for (int j = 0; j < n; ++j) {
            const double h = 1e-6 * std::max(1.0, std::abs(u[j]));
            DenseVector up = u, um = u;
            up[j] += h;
            um[j] -= h;
            J.col(j) = (residual(up) - residual(um)) / (2.0 * h);
        }
        const DenseVector u_new = u - J.partialPivLu().solve(F);
        const auto status = detail::check_update(u_new, u, opts, r);
        u = u_new;
        if (status) {
            r.status = *status;
            break;
        }
        if (sys.problem.is_linear()) {
            r.status = Status::Converged;
            break;
        }
    }
    r.u = u;
    r.online_s = detail::seconds_since(start);
    return r;
}

}  // namespace egfem

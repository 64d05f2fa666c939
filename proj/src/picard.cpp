#include "egfem/solver.hpp"

#include "iteration.hpp"

#include <algorithm>
#include <chrono>

namespace egfem {

std::string to_string(Status s) {
    switch (s) {
        case Status::Converged: return "Converged";
        case Status::MaxIter: return "MaxIter";
        case Status::Diverged: return "Diverged";
    }
    return "?";
}

Status parse_status(const std::string& s) {
    if (s == "Converged") return Status::Converged;
    if (s == "MaxIter") return Status::MaxIter;
    if (s == "Diverged") return Status::Diverged;
    throw InvalidArgument("unknown status '" + s + "'");
}

Method Method::parse(const std::string& name) {
    Method m;
    m.name = name;
    if (name == "sga") {
        m.kind = Kind::Sga;
    } else if (name == "tensor-sga") {
        m.kind = Kind::TensorSga;
    } else if (name == "gfem") {
        m.kind = Kind::Egfem;
        m.family = ElementFamily::P1();
    } else if (name.rfind("egfem-", 0) == 0) {
        m.kind = Kind::Egfem;
        m.family = ElementFamily::parse(name.substr(6));
        // egfem-p1 is gfem under another name
    } else {
        throw InvalidArgument("unknown method '" + name + "'");
    }
    return m;
}

namespace detail {

DenseVector initial_guess(int n, const DirichletBC& bc) {
    DenseVector u = DenseVector::Zero(n);
    for (std::size_t k = 0; k < bc.dofs.size(); ++k) u[bc.dofs[k]] = bc.values[k];
    return u;
}

std::optional<Status> check_update(const DenseVector& u_new, const DenseVector& u_old, const IterOptions& opts,
                                   SolveResult& r) {
    if (!u_new.allFinite()) {
        r.message = "non-finite iterate";
        return Status::Diverged;
    }
    const double diff = (u_new - u_old).norm();
    const double rel = diff / std::max(u_new.norm(), 1e-300);
    r.update_norms.push_back(rel);
    if (diff > opts.divergence_norm_cap) {
        r.message = "update norm exceeded the divergence cap";
        return Status::Diverged;
    }
    if (rel <= opts.tol) return Status::Converged;
    return std::nullopt;
}

std::shared_ptr<LinearSolver> make_solver(const DirichletReduction& reduction, std::span<const double> values,
                                          bool constant) {
    auto solver = std::make_shared<LinearSolver>(LinearSolver::Kind::SymmetricLDLT);
    if (!constant || reduction.n_free() == 0) return solver;
    SparseMatrix reduced = reduction.reduced_pattern();
    reduction.reduce_matrix(values, {reduced.valuePtr(), static_cast<std::size_t>(reduced.nonZeros())});
    try {
        (void)solver->solve(reduced, DenseVector::Zero(reduced.rows()));
    } catch (const SingularMatrix&) {
        // reported by the first online solve
    }
    return solver;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

using detail::seconds_since;

// ---------------------------------------------------------------- SGA

SgaSystem build_sga_system(const ProblemSpec& problem, std::shared_ptr<const FunctionSpace> V, int quad_degree) {
    EGFEM_REQUIRE(V != nullptr, InvalidArgument, "build_sga_system: null space");
    SgaSystem sys;
    sys.V = V;
    sys.problem = problem;
    const int q = quad_degree > 0 ? quad_degree : problem.sga_quad_degree;
    sys.assembler = std::make_shared<const SgaAssembler>(V, q);
    const SparseMatrix& pattern = sys.assembler->pattern();
    sys.constant_values.assign(pattern.nonZeros(), 0.0);
    const int p = V->family().degree();
    if (!problem.a) {
        MatrixScatter(assemble_stiffness(*V, product_degree({p - 1, p - 1})), pattern)
            .accumulate(sys.constant_values, problem.a0);
    }
    if (problem.c_linear != 0.0) {
        MatrixScatter(assemble_mass(*V, *V, product_degree({p, p})), pattern)
            .accumulate(sys.constant_values, problem.c_linear);
    }
    sys.load = problem.d ? assemble_load(*V, problem.d, problem.load_quad_degree) : DenseVector::Zero(V->n_dofs());
    sys.bc = make_dirichlet(*V, problem.u_D ? problem.u_D : ScalarField([](const Vec2&) { return 0.0; }));
    sys.reduction = DirichletReduction(pattern, sys.bc);
    sys.solver = detail::make_solver(sys.reduction, sys.constant_values, !problem.a && !problem.c_tilde);
    return sys;
}

namespace {

void sga_operator_values(const SgaSystem& sys, const DenseVector& u, std::vector<double>& values, DenseVector& rhs) {
    const ProblemSpec& p = sys.problem;
    values = sys.constant_values;
    if (p.a) sys.assembler->add_weighted_stiffness(*p.a, u, values);
    if (p.c_tilde) sys.assembler->add_weighted_mass(*p.c_tilde, u, values);
    rhs = sys.load;
    if (p.c) sys.assembler->add_nonlinear_vector(*p.c, u, rhs, -1.0);
    if (p.convection) sys.assembler->add_convection_vector(*p.convection, u, rhs, -p.convection_scale);
}

}  // namespace

std::pair<SparseMatrix, DenseVector> sga_picard_operator(const SgaSystem& sys, const DenseVector& u) {
    std::vector<double> values;
    DenseVector rhs;
    sga_operator_values(sys, u, values, rhs);
    return {sys.assembler->make_matrix(values), rhs};
}

DenseVector sga_residual(const SgaSystem& sys, const DenseVector& u) {
    auto [A, rhs] = sga_picard_operator(sys, u);
    return A * u - rhs;
}

SolveResult picard_sga(const SgaSystem& sys, const IterOptions& opts) {
    EGFEM_REQUIRE(opts.tol > 0.0 && opts.max_iter >= 1, InvalidArgument, "invalid iteration options");
    SolveResult r;
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t q0 = quadrature_evaluations();

    LinearSolver& solver = *sys.solver;
    SparseMatrix reduced = sys.reduction.reduced_pattern();
    std::vector<double> values;
    DenseVector rhs;
    DenseVector u = detail::initial_guess(sys.V->n_dofs(), sys.bc);
    if (opts.keep_iterates) r.iterates.push_back(u);
    for (int it = 1; it <= opts.max_iter; ++it) {
        sga_operator_values(sys, u, values, rhs);
        sys.reduction.reduce_matrix(values, {reduced.valuePtr(), static_cast<std::size_t>(reduced.nonZeros())});
        DenseVector u_new;
        try {
            u_new = sys.reduction.expand(solver.solve(reduced, sys.reduction.reduce_rhs(values, rhs)));
        } catch (const SingularMatrix& e) {
            r.status = Status::Diverged;
            r.message = e.what();
            r.iterations = it;
            break;
        }
        r.iterations = it;
        const auto status = detail::check_update(u_new, u, opts, r);
        u = std::move(u_new);
        if (opts.keep_iterates) r.iterates.push_back(u);
        if (status) {
            r.status = *status;
            break;
        }
        if (sys.problem.is_linear()) {
            // nothing is lagged: the first solve is the solution
            r.status = Status::Converged;
            break;
        }
    }
    r.u = std::move(u);
    r.online_s = seconds_since(start);
    r.online_quadrature_evaluations = quadrature_evaluations() - q0;
    return r;
}

SolveResult picard_sga(const ProblemSpec& problem, std::shared_ptr<const FunctionSpace> V, const IterOptions& opts,
                       int quad_degree) {
    const auto start = std::chrono::steady_clock::now();
    const SgaSystem sys = build_sga_system(problem, std::move(V), quad_degree);
    const double offline = seconds_since(start);
    SolveResult r = picard_sga(sys, opts);
    r.offline_s = offline;
    return r;
}

// ---------------------------------------------------------------- reformulated methods

DenseVector AuxTerm::evaluate(const DenseVector& u) const {
    const DenseVector uu = pi_u * u;
    DenseVector g1, g2;
    if (fn.uses_gradient) {
        g1 = pi_grad[0] * u;
        g2 = pi_grad[1] * u;
    }
    const auto& x = W->dof_coords();
    DenseVector out(uu.size());
    for (Eigen::Index i = 0; i < uu.size(); ++i) {
        const Vec2 g = fn.uses_gradient ? Vec2(g1[i], g2[i]) : Vec2::Zero();
        out[i] = fn.value(uu[i], g, x[i]);
    }
    return out;
}

int EgfemForms::system_size() const {
    int n = V->n_dofs();
    for (const auto& t : aux) n += t.size();
    return n;
}

DenseVector EgfemForms::initial_u() const { return detail::initial_guess(V->n_dofs(), bc); }

EgfemForms build_forms(const ProblemSpec& problem, std::shared_ptr<const FunctionSpace> V, const Method& method) {
    EGFEM_REQUIRE(V != nullptr, InvalidArgument, "build_forms: null space");
    EGFEM_REQUIRE(method.is_reformulated(), InvalidArgument, "build_forms: the standard approach has no precomputed forms");
    EgfemForms f;
    f.V = V;
    f.method = method;
    const int p = V->family().degree();
    const int n = V->n_dofs();

    f.constant = SparseMatrix(n, n);
    if (!problem.a) f.constant = problem.a0 * assemble_stiffness(*V, product_degree({p - 1, p - 1}));
    if (problem.c_linear != 0.0) {
        SparseMatrix M = assemble_mass(*V, *V, product_degree({p, p}));
        f.constant = SparseMatrix(f.constant + problem.c_linear * M);
    }
    f.constant.makeCompressed();
    f.load = problem.d ? assemble_load(*V, problem.d, problem.load_quad_degree) : DenseVector::Zero(n);
    f.bc = make_dirichlet(*V, problem.u_D ? problem.u_D : ScalarField([](const Vec2&) { return 0.0; }));

    if (method.kind == Method::Kind::TensorSga) {
        EGFEM_REQUIRE(problem.square_nonlinearity && !problem.a && !problem.c_tilde &&
                          (problem.c.has_value() != problem.convection.has_value()),
                      InvalidArgument, "tensor-sga needs a single u^2 vector term (problem '" + problem.id + "')");
        if (problem.c) {
            f.tensor_vector = assemble_mass_trilinear(*V, *V, product_degree({p, p, p}));
        } else {
            // scale the flux tensor once so the loop is a plain double contraction
            const SparseTensor3 N = assemble_directional_derivative_tensor(*V, product_degree({p - 1, p, p}));
            std::vector<TensorEntry> e;
            e.reserve(N.nnz());
            for (std::size_t k = 0; k < N.nnz(); ++k)
                e.push_back({N.i()[k], N.j()[k], N.k()[k], problem.convection_scale * N.values()[k]});
            f.tensor_vector = SparseTensor3(N.dims(), std::move(e));
        }
    } else {
        const auto W = build_space(V->mesh_ptr(), method.family);
        const int w = W->family().is_quadrature() ? 0 : W->family().degree();
        auto make_term = [&](const std::string& name, AuxRole role, const PointwiseFn& fn) {
            AuxTerm t;
            t.name = name;
            t.role = role;
            t.fn = fn;
            t.W = W;
            t.pi_u = interp_matrix(*V, *W);
            if (fn.uses_gradient) t.pi_grad = interp_grad_matrices(*V, *W);
            switch (role) {
                case AuxRole::Stiffness:
                    t.tensor = assemble_weighted_stiffness_tensor(*V, *W, product_degree({p - 1, p - 1, w}));
                    break;
                case AuxRole::WeightedMass:
                    t.tensor = assemble_mass_trilinear(*V, *W, product_degree({p, p, w}));
                    break;
                case AuxRole::Vector:
                    t.matrix = assemble_mass(*V, *W, product_degree({p, w}));
                    break;
                case AuxRole::Convection:
                    t.matrix = problem.convection_scale * assemble_directional_derivative(*V, *W, product_degree({p - 1, w}));
                    t.matrix.makeCompressed();
                    break;
            }
            f.aux.push_back(std::move(t));
        };
        if (problem.a) make_term("a", AuxRole::Stiffness, *problem.a);
        if (problem.c_tilde) make_term("c_tilde", AuxRole::WeightedMass, *problem.c_tilde);
        if (problem.c) make_term("c", AuxRole::Vector, *problem.c);
        if (problem.convection) make_term("f", AuxRole::Convection, *problem.convection);
    }

    // Fixed pattern shared by every iteration.
    std::vector<SparseMatrix> patterns{f.constant};
    for (const auto& t : f.aux)
        if (t.role == AuxRole::Stiffness || t.role == AuxRole::WeightedMass) patterns.push_back(mode3_pattern(t.tensor));
    if (patterns.size() == 1 && f.constant.nonZeros() == 0) {
        // purely vector-type terms with no matrix at all cannot happen for an
        // elliptic problem, but keep the diagonal so the pattern is never empty
        SparseMatrix I(n, n);
        I.setIdentity();
        patterns.push_back(I);
    }
    std::vector<const SparseMatrix*> ptrs;
    for (const auto& m : patterns) ptrs.push_back(&m);
    f.pattern = pattern_union(ptrs);
    f.constant_values.assign(f.pattern.nonZeros(), 0.0);
    MatrixScatter(f.constant, f.pattern).accumulate(f.constant_values);
    for (const auto& t : f.aux)
        if (t.role == AuxRole::Stiffness || t.role == AuxRole::WeightedMass) f.scatters.emplace_back(t.tensor, f.pattern);
    f.reduction = DirichletReduction(f.pattern, f.bc);
    f.solver = detail::make_solver(f.reduction, f.constant_values, f.scatters.empty());
    return f;
}

namespace {

void egfem_operator_values(const EgfemForms& f, const DenseVector& u, const std::vector<DenseVector>& aux,
                           std::vector<double>& values, DenseVector& rhs) {
    values = f.constant_values;
    std::size_t s = 0;
    rhs = f.load;
    for (std::size_t k = 0; k < f.aux.size(); ++k) {
        const AuxTerm& t = f.aux[k];
        if (t.role == AuxRole::Stiffness || t.role == AuxRole::WeightedMass)
            f.scatters[s++].accumulate(aux[k], values);
        else
            rhs.noalias() -= t.matrix * aux[k];
    }
    if (f.tensor_vector) rhs -= t3_double_contract(*f.tensor_vector, u, u);
}

}  // namespace

std::pair<SparseMatrix, DenseVector> egfem_picard_operator(const EgfemForms& forms, const DenseVector& u,
                                                           const std::vector<DenseVector>& aux) {
    EGFEM_REQUIRE(aux.size() == forms.aux.size(), DimensionMismatch, "egfem_picard_operator: aux count mismatch");
    std::vector<double> values;
    DenseVector rhs;
    egfem_operator_values(forms, u, aux, values, rhs);
    SparseMatrix A = forms.pattern;
    std::copy(values.begin(), values.end(), A.valuePtr());
    return {A, rhs};
}

SolveResult picard_egfem(const EgfemForms& forms, const IterOptions& opts) {
    EGFEM_REQUIRE(opts.tol > 0.0 && opts.max_iter >= 1, InvalidArgument, "invalid iteration options");
    SolveResult r;
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t q0 = quadrature_evaluations();

    LinearSolver& solver = *forms.solver;
    SparseMatrix reduced = forms.reduction.reduced_pattern();
    std::vector<double> values;
    DenseVector rhs;
    DenseVector u = forms.initial_u();
    std::vector<DenseVector> aux;
    for (const auto& t : forms.aux) aux.push_back(t.evaluate(u));
    const bool linear = forms.aux.empty() && !forms.tensor_vector;
    if (opts.keep_iterates) r.iterates.push_back(u);
    for (int it = 1; it <= opts.max_iter; ++it) {
        egfem_operator_values(forms, u, aux, values, rhs);
        forms.reduction.reduce_matrix(values, {reduced.valuePtr(), static_cast<std::size_t>(reduced.nonZeros())});
        DenseVector u_new;
        try {
            u_new = forms.reduction.expand(solver.solve(reduced, forms.reduction.reduce_rhs(values, rhs)));
        } catch (const SingularMatrix& e) {
            r.status = Status::Diverged;
            r.message = e.what();
            r.iterations = it;
            break;
        }
        r.iterations = it;
        const auto status = detail::check_update(u_new, u, opts, r);
        u = std::move(u_new);
        if (opts.keep_iterates) r.iterates.push_back(u);
        if (status == Status::Diverged) {
            r.status = *status;
            break;
        }
        for (std::size_t k = 0; k < forms.aux.size(); ++k) aux[k] = forms.aux[k].evaluate(u);
        if (status) {
            r.status = *status;
            break;
        }
        if (linear) {
            r.status = Status::Converged;
            break;
        }
    }
    r.u = std::move(u);
    for (std::size_t k = 0; k < forms.aux.size(); ++k) r.aux[forms.aux[k].name] = std::move(aux[k]);
    r.online_s = seconds_since(start);
    r.online_quadrature_evaluations = quadrature_evaluations() - q0;
    return r;
}

}  // namespace egfem

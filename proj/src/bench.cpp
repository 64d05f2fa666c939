#include "egfem/bench.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>

namespace egfem {

L2Error compute_l2_error(const DenseVector& u, const FunctionSpace& V, const ScalarField& exact, int quad_degree) {
    EGFEM_REQUIRE(exact, InvalidArgument, "compute_l2_error: no exact solution");
    EGFEM_REQUIRE(u.size() == V.n_dofs(), DimensionMismatch, "compute_l2_error: coefficient vector has the wrong length");
    const QuadratureRule& rule = dunavant_rule(quad_degree);
    const Mesh& mesh = V.mesh();
    std::array<double, 10> phi{};
    std::array<Vec2, 10> grads{};
    double err2 = 0.0, norm2 = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const ElementGeometry geo = element_geometry(mesh, t);
        const auto dofs = V.cell_dofs(t);
        for (int q = 0; q < rule.size(); ++q) {
            const int n = eval_basis(V.family(), rule.points[q], phi, grads);
            double uh = 0.0;
            for (int i = 0; i < n; ++i) uh += u[dofs[i]] * phi[i];
            const double ex = exact(geo.map(rule.points[q]));
            const double w = rule.weights[q] * geo.area;
            err2 += w * (uh - ex) * (uh - ex);
            norm2 += w * ex * ex;
        }
    }
    L2Error e;
    e.absolute = std::sqrt(err2);
    if (norm2 > 0.0) {
        e.relative = e.absolute / std::sqrt(norm2);
    } else {
        e.relative = e.absolute;
        e.relative_is_absolute = true;
    }
    return e;
}

namespace {

void validate_method(const ProblemSpec& p, const std::string& name) {
    const Method m = Method::parse(name);
    const bool gradient_coefficient = p.a && p.a->uses_gradient;
    EGFEM_REQUIRE(!(name == "gfem" && gradient_coefficient), InvalidArgument,
                  "gfem is not applicable to '" + p.id + "': the coefficient depends on grad u");
    if (m.kind == Method::Kind::TensorSga) {
        EGFEM_REQUIRE(p.square_nonlinearity && !p.a && !p.c_tilde, InvalidArgument,
                      "tensor-sga needs a single u^2 nonlinearity; '" + p.id + "' has none");
    }
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

void validate_config(const BenchConfig& c) {
    const ProblemSpec p = make_problem(c.problem, c.params);
    EGFEM_REQUIRE(!c.methods.empty(), InvalidArgument, "no methods given");
    EGFEM_REQUIRE(!c.levels.empty(), InvalidArgument, "no mesh levels given");
    for (int l : c.levels) EGFEM_REQUIRE(l >= 0 && l <= 10, InvalidArgument, "mesh level must be in 0..10");
    EGFEM_REQUIRE(c.tol > 0.0, InvalidArgument, "tol must be positive");
    EGFEM_REQUIRE(c.max_iter >= 1, InvalidArgument, "max_iter must be at least 1");
    EGFEM_REQUIRE(c.repeats >= 1, InvalidArgument, "repeats must be at least 1");
    EGFEM_REQUIRE(c.quad_degree == -1 || (c.quad_degree >= 1 && c.quad_degree <= kMaxQuadratureDegree),
                  InvalidArgument, "quad degree must be in 1..6");
    for (const auto& m : c.methods) validate_method(p, m);
}

MethodRun run_method(const ProblemSpec& problem, const std::string& method_name, int level, const IterOptions& opts,
                     int quad_degree) {
    validate_method(problem, method_name);
    const Method method = Method::parse(method_name);
    MethodRun run;
    const auto t0 = std::chrono::steady_clock::now();
    auto mesh = std::make_shared<const Mesh>(problem_mesh(problem, level));
    run.V = build_space(mesh, ElementFamily::P1());
    const double setup_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (problem.time_dependent) {
        ProblemSpec p = problem;
        if (quad_degree > 0) p.sga_quad_degree = quad_degree;
        BurgersResult r = semi_implicit_burgers(p, run.V, method);
        run.u = std::move(r.u);
        run.system_size = r.system_size;
        run.iterations = r.steps;
        run.status = r.status;
        run.offline_s = setup_s + r.offline_s;
        run.online_s = r.online_s;
        run.online_quadrature_evaluations = r.online_quadrature_evaluations;
        run.message = r.message;
        return run;
    }

    SolveResult r;
    const auto t1 = std::chrono::steady_clock::now();
    if (method.kind == Method::Kind::Sga) {
        const SgaSystem sys = build_sga_system(problem, run.V, quad_degree);
        run.offline_s = setup_s + std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
        run.system_size = run.V->n_dofs();
        r = picard_sga(sys, opts);
    } else {
        const EgfemForms forms = build_forms(problem, run.V, method);
        run.offline_s = setup_s + std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
        run.system_size = forms.system_size();
        r = picard_egfem(forms, opts);
    }
    run.u = std::move(r.u);
    run.iterations = r.iterations;
    run.status = r.status;
    run.online_s = r.online_s;
    run.online_quadrature_evaluations = r.online_quadrature_evaluations;
    run.message = r.message;
    return run;
}

BenchReport run_benchmark(const BenchConfig& config) {
    validate_config(config);
    const ProblemSpec problem = make_problem(config.problem, config.params);
    IterOptions opts;
    opts.tol = config.tol;
    opts.max_iter = config.max_iter;

    BenchReport report;
    report.config = config;
    for (int level : config.levels) {
        const std::size_t first = report.rows.size();
        for (const auto& name : config.methods) {
            BenchRow row;
            row.problem = problem.id;
            row.method = name;
            row.level = level;
            try {
                run_method(problem, name, level, opts, config.quad_degree);  // warm-up
                std::vector<double> off, on;
                MethodRun last;
                for (int k = 0; k < config.repeats; ++k) {
                    last = run_method(problem, name, level, opts, config.quad_degree);
                    off.push_back(last.offline_s);
                    on.push_back(last.online_s);
                }
                row.system_size = last.system_size;
                row.iterations = last.iterations;
                row.status = last.status;
                row.offline_s = median(off);
                row.online_s = median(on);
                row.total_s = row.offline_s + row.online_s;
                if (problem.exact && last.u.allFinite())
                    row.rel_l2_error = compute_l2_error(last.u, *last.V, problem.exact).relative;
                else
                    row.rel_l2_error = std::numeric_limits<double>::quiet_NaN();
            } catch (const Error&) {
                // coefficient evaluated outside its domain, etc.: the row fails, the sweep goes on
                row.status = Status::Diverged;
                row.rel_l2_error = std::numeric_limits<double>::quiet_NaN();
            }
            report.rows.push_back(row);
        }
        const auto sga = std::find_if(report.rows.begin() + first, report.rows.end(),
                                      [](const BenchRow& r) { return r.method == "sga"; });
        if (sga != report.rows.end() && sga->online_s > 0.0) {
            for (auto it = report.rows.begin() + first; it != report.rows.end(); ++it)
                if (it->online_s > 0.0) it->speedup_vs_sga = sga->online_s / it->online_s;
        }
    }
    return report;
}

}  // namespace egfem

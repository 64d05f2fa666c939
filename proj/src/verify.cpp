#include "egfem/verify.hpp"

#include "egfem/problems.hpp"
#include "egfem/solver.hpp"

#include <cmath>
#include <random>

namespace egfem {

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

CheckResult quadrature_check() {
    // int over the reference triangle of x^a y^b = a! b! / (a+b+2)!, area 1/2
    CheckResult c{"quadrature monomials, degree 1..6", true, 0.0, 1e-14};
    for (int deg = 1; deg <= kMaxQuadratureDegree; ++deg) {
        const QuadratureRule& r = dunavant_rule(deg);
        for (int a = 0; a <= deg; ++a)
            for (int b = 0; a + b <= deg; ++b) {
                double s = 0.0;
                for (int q = 0; q < r.size(); ++q)
                    s += 0.5 * r.weights[q] * std::pow(r.points[q][1], a) * std::pow(r.points[q][2], b);
                c.value = std::max(c.value, std::abs(s - factorial(a) * factorial(b) / factorial(a + b + 2)));
            }
    }
    c.pass = c.value <= c.tol;
    return c;
}

CheckResult contraction_check() {
    CheckResult c{"contraction identities, 200 random tensors", true, 0.0, 1e-14};
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::uniform_int_distribution<int> dim(1, 12);
    for (int trial = 0; trial < 200; ++trial) {
        const std::array<int, 3> d{dim(rng), dim(rng), dim(rng)};
        std::vector<TensorEntry> e;
        const int nnz = std::uniform_int_distribution<int>(0, 60)(rng);
        for (int n = 0; n < nnz; ++n)
            e.push_back({std::uniform_int_distribution<int>(0, d[0] - 1)(rng),
                         std::uniform_int_distribution<int>(0, d[1] - 1)(rng),
                         std::uniform_int_distribution<int>(0, d[2] - 1)(rng), U(rng)});
        const SparseTensor3 T(d, e);
        DenseVector w(d[1]), v(d[2]);
        for (auto& x : w) x = U(rng);
        for (auto& x : v) x = U(rng);
        const DenseVector a = t3_double_contract(T, w, v);
        const DenseVector b = t3_contract_mode3(T, v) * w;
        const DenseVector cc = t3_contract_mode2(T, w) * v;
        c.value = std::max({c.value, (a - b).lpNorm<Eigen::Infinity>(), (a - cc).lpNorm<Eigen::Infinity>()});
    }
    c.pass = c.value <= c.tol;
    return c;
}

ProblemSpec stationary(const std::string& id) {
    ProblemSpec p = make_problem(id);
    if (p.time_dependent) p = burgers_step_problem(p, p.dt);
    return p;
}

DenseVector probe_state(const ProblemSpec& p, const FunctionSpace& V, unsigned seed) {
    // a smooth state near the solution; stays inside every coefficient's domain
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> U(-0.05, 0.05);
    const ScalarField ex = p.exact ? p.exact : ScalarField([](const Vec2& x) { return 0.1 * (1.0 - x.squaredNorm()); });
    DenseVector u = interpolate(V, ex);
    for (auto& x : u) x += U(rng);
    return u;
}

CheckResult case3_check(const std::string& id) {
    const ProblemSpec p = stationary(id);
    const int level = p.domain == "disk" ? 2 : 3;
    auto mesh = std::make_shared<const Mesh>(problem_mesh(p, level));
    auto V = build_space(mesh, ElementFamily::P1());
    const SgaSystem sys = build_sga_system(p, V);
    const EgfemForms forms = build_forms(p, V, Method::parse("egfem-i" + std::to_string(p.sga_quad_degree)));
    const DenseVector u = probe_state(p, *V, 3);
    std::vector<DenseVector> aux;
    for (const auto& t : forms.aux) aux.push_back(t.evaluate(u));
    const auto [As, bs] = sga_picard_operator(sys, u);
    const auto [Ae, be] = egfem_picard_operator(forms, u, aux);
    const double scale = std::max(1.0, SparseMatrix(As).coeffs().cwiseAbs().maxCoeff());
    CheckResult c{"SGA vs I_k operator, " + id, true, 0.0, 1e-13};
    c.value = std::max(SparseMatrix(As - Ae).coeffs().cwiseAbs().maxCoeff() / scale,
                       (bs - be).lpNorm<Eigen::Infinity>() / std::max(1.0, bs.lpNorm<Eigen::Infinity>()));
    c.pass = c.value <= c.tol;
    return c;
}

CheckResult jacobian_check(const std::string& id, const std::string& method) {
    const ProblemSpec p = stationary(id);
    auto mesh = std::make_shared<const Mesh>(problem_mesh(p, p.domain == "disk" ? 2 : 3));
    auto V = build_space(mesh, ElementFamily::P1());
    const EgfemForms forms = build_forms(p, V, Method::parse(method));
    DenseVector z = egfem_initial_state(forms);
    const int n = V->n_dofs();
    z.head(n) = probe_state(p, *V, 5);
    int off = n;
    for (const auto& t : forms.aux) {
        z.segment(off, t.size()) = t.evaluate(z.head(n));
        off += t.size();
    }
    const SparseMatrix J = egfem_jacobian(forms, z);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    CheckResult c{"Newton Jacobian vs central differences, " + id + " " + method, true, 0.0, 1e-6};
    for (int trial = 0; trial < 3; ++trial) {
        DenseVector v(z.size());
        for (auto& x : v) x = U(rng);
        const double h = 1e-6;
        const DenseVector fd = (egfem_residual(forms, z + h * v) - egfem_residual(forms, z - h * v)) / (2.0 * h);
        const DenseVector jv = J * v;
        c.value = std::max(c.value, (jv - fd).norm() / std::max(jv.norm(), 1e-300));
    }
    c.pass = c.value <= c.tol;
    return c;
}

}  // namespace

std::vector<CheckResult> run_verification() {
    std::vector<CheckResult> out;
    out.push_back(quadrature_check());
    out.push_back(contraction_check());
    for (const char* id : {"quadratic", "burgers", "superconductivity-a", "superconductivity-b", "superconductivity-c",
                           "biochemical", "plaplace", "minimal-surface"})
        out.push_back(case3_check(id));
    const std::vector<std::pair<std::string, std::string>> newton = {
        {"quadratic", "egfem-p2"},  {"burgers", "egfem-p2"},   {"superconductivity-a", "egfem-p2"},
        {"biochemical", "egfem-p2"}, {"plaplace", "egfem-p0"}, {"minimal-surface", "egfem-p0"}};
    for (const auto& [id, m] : newton) out.push_back(jacobian_check(id, m));
    return out;
}

}  // namespace egfem

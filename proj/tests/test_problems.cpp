#include "egfem/problems.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace egfem;

namespace {

// 4th-order central difference of g along direction e
template <class G>
double d4(const G& g, const Vec2& x, const Vec2& e, double h) {
    return (-g(x + 2 * h * e) + 8 * g(x + h * e) - 8 * g(x - h * e) + g(x - 2 * h * e)) / (12 * h);
}

Vec2 grad4(const ScalarField& u, const Vec2& x, double h) {
    return {d4(u, x, Vec2(1, 0), h), d4(u, x, Vec2(0, 1), h)};
}

double eval(const std::optional<PointwiseFn>& f, double u, const Vec2& g, const Vec2& x) {
    return f ? (*f)(u, g, x) : 0.0;
}

// -div(a grad u) + c_tilde(u) u + c_linear u + c(u) - s (d1 + d2) f(u), from the problem's own fields
double strong_form(const ProblemSpec& p, const ScalarField& u, const Vec2& x) {
    const double h = 1e-3;
    auto flux = [&](const Vec2& y, int comp) {
        const Vec2 g = grad4(u, y, h);
        const double a = p.a ? (*p.a)(u(y), g, y) : p.a0;
        return a * g[comp];
    };
    const double div = d4([&](const Vec2& y) { return flux(y, 0); }, x, Vec2(1, 0), h) +
                       d4([&](const Vec2& y) { return flux(y, 1); }, x, Vec2(0, 1), h);
    const double ux = u(x);
    const Vec2 g = grad4(u, x, h);
    double conv = 0.0;
    if (p.convection) {
        auto fu = [&](const Vec2& y) { return (*p.convection)(u(y), grad4(u, y, h), y); };
        conv = -p.convection_scale * (d4(fu, x, Vec2(1, 0), h) + d4(fu, x, Vec2(0, 1), h));
    }
    return -div + eval(p.c_tilde, ux, g, x) * ux + p.c_linear * ux + eval(p.c, ux, g, x) + conv;
}

std::vector<Vec2> interior_points(const ProblemSpec& p, int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> U(0.05, 0.95);
    std::vector<Vec2> pts;
    while (static_cast<int>(pts.size()) < n) {
        if (p.domain == "disk") {
            const Vec2 x(2 * U(rng) - 1, 2 * U(rng) - 1);
            // keep away from the origin, where the p-Laplace flux is not smooth
            if (x.norm() < 0.9 && x.norm() > 0.1) pts.push_back(x);
        } else {
            pts.emplace_back(U(rng), U(rng));
        }
    }
    return pts;
}

}  // namespace

TEST(Problems, ManufacturedSourcesSatisfyStrongForm) {
    for (const auto& id : problem_ids()) {
        const ProblemSpec p = make_problem(id);
        if (p.time_dependent) continue;
        for (const Vec2& x : interior_points(p, 25, 17)) {
            const double r = strong_form(p, p.exact, x) - p.d(x);
            EXPECT_LE(std::abs(r), 1e-6 * std::max(1.0, std::abs(p.d(x)))) << id << " at " << x.transpose();
        }
    }
}

TEST(Problems, SuperconductivitySourceHoldsForSmallViscosity) {
    for (double nu : {1e-2, 1e-3})
        for (auto form : {SuperconductivityForm::A, SuperconductivityForm::B, SuperconductivityForm::C}) {
            const ProblemSpec p = superconductivity_problem(nu, form);
            for (const Vec2& x : interior_points(p, 10, 3))
                EXPECT_LE(std::abs(strong_form(p, p.exact, x) - p.d(x)), 1e-6 * std::max(1.0, std::abs(p.d(x))));
        }
}

TEST(Problems, BurgersSourceSatisfiesSpaceTimeStrongForm) {
    const double nu = 1.0;
    const ProblemSpec p = burgers_problem(nu);
    for (double t : {0.0, 0.3, 1.0}) {
        const ProblemSpec step = [&] {
            ProblemSpec s = p;
            s.c_linear = 0.0;
            return s;
        }();
        const ScalarField u = [&](const Vec2& x) { return p.exact_t(x, t); };
        for (const Vec2& x : interior_points(p, 15, 5)) {
            const double ht = 1e-3;
            const double ut = (-p.exact_t(x, t + 2 * ht) + 8 * p.exact_t(x, t + ht) - 8 * p.exact_t(x, t - ht) +
                               p.exact_t(x, t - 2 * ht)) /
                              (12 * ht);
            const double r = ut + strong_form(step, u, x) - p.d_t(x, t);
            EXPECT_LE(std::abs(r), 1e-6 * std::max(1.0, std::abs(p.d_t(x, t))));
        }
    }
}

TEST(Problems, StepProblemShiftsMassAndLoad) {
    const ProblemSpec p = burgers_problem(1.0, 1.0, 1e-2);
    const ProblemSpec s = burgers_step_problem(p, 0.5);
    EXPECT_FALSE(s.time_dependent);
    EXPECT_DOUBLE_EQ(s.c_linear, 100.0);
    EXPECT_DOUBLE_EQ(s.d(Vec2(0.3, 0.6)), p.d_t(Vec2(0.3, 0.6), 0.5));
}

TEST(Problems, SpotValues) {
    EXPECT_NEAR(plaplace_problem(1.5).exact(Vec2(0, 0)), 1.0 / 12.0, 1e-15);
    EXPECT_NEAR(burgers_problem().exact_t(Vec2(0.5, 0.5), 0.0), 0.625, 1e-15);
    EXPECT_NEAR(quadratic_problem().d(Vec2(1, 1)), 0.0, 1e-15);
    const ProblemSpec pl = plaplace_problem(1.5);
    EXPECT_NEAR(pl.exact(Vec2(1, 0)), 0.0, 1e-15);
    // a(grad u) = 1 when |grad u| = 1, for any p
    for (double p : {1.5, 2.0, 3.0})
        EXPECT_NEAR((*plaplace_problem(p).a)(0.0, Vec2(0.6, 0.8), Vec2::Zero()), 1.0, 1e-14);
}

TEST(Problems, CoefficientDerivativesMatchDifferences) {
    const double h = 1e-6;
    for (const auto& id : problem_ids()) {
        const ProblemSpec p = make_problem(id);
        for (const auto* f : {&p.a, &p.c_tilde, &p.c, &p.convection}) {
            if (!*f) continue;
            const PointwiseFn& fn = **f;
            ASSERT_TRUE(fn.has_derivatives()) << id;
            const double u = 0.4;
            const Vec2 g(0.3, -0.7), x(0.2, 0.3);
            EXPECT_NEAR(fn.d_du(u, g, x), (fn(u + h, g, x) - fn(u - h, g, x)) / (2 * h), 1e-7) << id;
            if (fn.uses_gradient) {
                const Vec2 dg = fn.d_dgrad(u, g, x);
                EXPECT_NEAR(dg[0], (fn(u, g + Vec2(h, 0), x) - fn(u, g - Vec2(h, 0), x)) / (2 * h), 1e-7) << id;
                EXPECT_NEAR(dg[1], (fn(u, g + Vec2(0, h), x) - fn(u, g - Vec2(0, h), x)) / (2 * h), 1e-7) << id;
            }
        }
    }
}

TEST(Problems, BiochemicalRejectsNonPositiveDenominator) {
    const ProblemSpec p = biochemical_problem(1.0, 1.0);
    EXPECT_THROW((*p.c_tilde)(-1.0, Vec2::Zero(), Vec2::Zero()), DomainError);
    EXPECT_NO_THROW((*p.c_tilde)(-0.5, Vec2::Zero(), Vec2::Zero()));
}

TEST(Problems, FactoryValidation) {
    EXPECT_THROW(make_problem("heat"), InvalidArgument);
    EXPECT_THROW(superconductivity_problem(0.0), InvalidArgument);
    EXPECT_THROW(plaplace_problem(1.0), InvalidArgument);
    EXPECT_DOUBLE_EQ(make_problem("superconductivity-b", {{"nu", 1e-2}}).a0, 1e-2);
    for (const auto& id : problem_ids()) EXPECT_NO_THROW(make_problem(id));
}

TEST(Problems, MeshLevels) {
    EXPECT_EQ(problem_mesh(quadratic_problem(), 6).num_vertices(), 4225);
    EXPECT_EQ(problem_mesh(plaplace_problem(), 3).num_triangles(), 6 * 64);
    EXPECT_THROW(problem_mesh(quadratic_problem(), -1), InvalidArgument);
}

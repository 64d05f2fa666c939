#include "egfem/problems.hpp"

#include <cmath>
#include <numbers>

namespace egfem {

namespace {

constexpr double pi = std::numbers::pi;

PointwiseFn polynomial_fn(std::function<double(double)> f, std::function<double(double)> df) {
    PointwiseFn fn;
    fn.value = [f](double u, const Vec2&, const Vec2&) { return f(u); };
    fn.d_du = [df](double u, const Vec2&, const Vec2&) { return df(u); };
    return fn;
}

// x1 x2 (x1 + x2), shared by several benchmarks
double cubic(const Vec2& x) { return x[0] * x[1] * (x[0] + x[1]); }
double cubic_laplacian(const Vec2& x) { return 2.0 * (x[0] + x[1]); }

double param(const std::map<std::string, double>& params, const std::string& key, double fallback) {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

}  // namespace

ProblemSpec quadratic_problem(QuadraticVariant variant) {
    ProblemSpec p;
    p.c = polynomial_fn([](double u) { return u * u; }, [](double u) { return 2.0 * u; });
    p.square_nonlinearity = true;
    p.sga_quad_degree = 3;
    p.methods = {"sga", "tensor-sga", "gfem", "egfem-p2", "egfem-i3"};
    if (variant == QuadraticVariant::Polynomial) {
        p.id = "quadratic";
        p.exact = cubic;
        p.d = [](const Vec2& x) {
            const double u = cubic(x);
            return -cubic_laplacian(x) + u * u;
        };
    } else {
        p.id = "quadratic-trig";
        p.exact = [](const Vec2& x) { return std::sin(2 * pi * x[0]) * std::sin(2 * pi * x[1]); };
        p.d = [](const Vec2& x) {
            const double u = std::sin(2 * pi * x[0]) * std::sin(2 * pi * x[1]);
            return 8 * pi * pi * u + u * u;
        };
    }
    p.u_D = p.exact;
    return p;
}

namespace {

// u = P(x) S(x, t) with P = 10 x1 x2 (x1-1)(x2-1)
struct BurgersExact {
    double u, u1, u2, lap, ut;
};

BurgersExact burgers_exact(const Vec2& x, double t) {
    const double x1 = x[0], x2 = x[1];
    const double P = 10 * (x1 * x1 - x1) * (x2 * x2 - x2);
    const double P1 = 10 * (2 * x1 - 1) * (x2 * x2 - x2);
    const double P2 = 10 * (x1 * x1 - x1) * (2 * x2 - 1);
    const double P11 = 20 * (x2 * x2 - x2);
    const double P22 = 20 * (x1 * x1 - x1);
    const double ea = std::exp(-0.5 * t), eb = std::exp(-0.25 * t), ec = std::exp(-t);
    const double sa = std::sin(2 * x1 * t), ca = std::cos(2 * x1 * t);
    const double sb = std::sin(x2 * t), cb = std::cos(x2 * t);
    const double sc = std::sin(x1 * x2 * t), cc = std::cos(x1 * x2 * t);
    const double S = sa * ea + cb * eb + sc * ec;
    const double S1 = 2 * t * ca * ea + x2 * t * cc * ec;
    const double S2 = -t * sb * eb + x1 * t * cc * ec;
    const double S11 = -4 * t * t * sa * ea - x2 * x2 * t * t * sc * ec;
    const double S22 = -t * t * cb * eb - x1 * x1 * t * t * sc * ec;
    const double St = (2 * x1 * ca - 0.5 * sa) * ea + (-x2 * sb - 0.25 * cb) * eb + (x1 * x2 * cc - sc) * ec;
    BurgersExact e;
    e.u = P * S;
    e.u1 = P1 * S + P * S1;
    e.u2 = P2 * S + P * S2;
    e.lap = P11 * S + 2 * P1 * S1 + P * S11 + P22 * S + 2 * P2 * S2 + P * S22;
    e.ut = P * St;
    return e;
}

}  // namespace

ProblemSpec burgers_problem(double nu, double T, double dt) {
    EGFEM_REQUIRE(nu > 0.0 && T > 0.0 && dt > 0.0, InvalidArgument, "burgers_problem: nu, T, dt must be positive");
    ProblemSpec p;
    p.id = "burgers";
    p.a0 = nu;
    p.convection = polynomial_fn([](double u) { return u * u; }, [](double u) { return 2.0 * u; });
    p.convection_scale = -0.5;
    p.square_nonlinearity = true;
    p.sga_quad_degree = 2;
    p.time_dependent = true;
    p.T = T;
    p.dt = dt;
    p.params = {{"nu", nu}, {"T", T}, {"dt", dt}};
    p.methods = {"sga", "tensor-sga", "gfem", "egfem-p2", "egfem-i3"};
    p.exact_t = [](const Vec2& x, double t) { return burgers_exact(x, t).u; };
    p.d_t = [nu](const Vec2& x, double t) {
        const BurgersExact e = burgers_exact(x, t);
        return e.ut - nu * e.lap + e.u * (e.u1 + e.u2);
    };
    p.exact = [T](const Vec2& x) { return burgers_exact(x, T).u; };
    p.u_D = [](const Vec2&) { return 0.0; };
    return p;
}

ProblemSpec burgers_step_problem(const ProblemSpec& burgers, double t_next) {
    EGFEM_REQUIRE(burgers.time_dependent, InvalidArgument, "burgers_step_problem: not a time-dependent problem");
    ProblemSpec p = burgers;
    p.id = burgers.id + "-step";
    p.time_dependent = false;
    p.c_linear = 1.0 / burgers.dt;
    const SpaceTimeField d_t = burgers.d_t;
    p.d = [d_t, t_next](const Vec2& x) { return d_t(x, t_next); };
    const SpaceTimeField exact_t = burgers.exact_t;
    p.exact = [exact_t, t_next](const Vec2& x) { return exact_t(x, t_next); };
    return p;
}

ProblemSpec superconductivity_problem(double nu, SuperconductivityForm form) {
    EGFEM_REQUIRE(nu > 0.0, InvalidArgument, "superconductivity_problem: nu must be positive");
    ProblemSpec p;
    p.a0 = nu;
    p.sga_quad_degree = 4;
    p.params = {{"nu", nu}};
    switch (form) {
        case SuperconductivityForm::A:
            p.id = "superconductivity-a";
            p.c_tilde = polynomial_fn([](double u) { return u * u + 1.0; }, [](double u) { return 2.0 * u; });
            p.methods = {"sga", "gfem", "egfem-p2", "egfem-i4"};
            break;
        case SuperconductivityForm::B:
            p.id = "superconductivity-b";
            p.c_linear = 1.0;
            p.c = polynomial_fn([](double u) { return u * u * u; }, [](double u) { return 3.0 * u * u; });
            p.methods = {"sga", "gfem", "egfem-p3", "egfem-i4"};
            break;
        case SuperconductivityForm::C:
            p.id = "superconductivity-c";
            p.c = polynomial_fn([](double u) { return u * u * u + u; }, [](double u) { return 3.0 * u * u + 1.0; });
            p.methods = {"sga", "gfem", "egfem-p3", "egfem-i4"};
            break;
    }
    p.exact = [](const Vec2& x) {
        return std::sin(2 * pi * x[0]) * std::sin(2 * pi * x[1]) * std::exp(2 * x[0]) / 6.0;
    };
    p.u_D = p.exact;
    p.d = [nu](const Vec2& x) {
        const double s1 = std::sin(2 * pi * x[0]), c1 = std::cos(2 * pi * x[0]);
        const double s2 = std::sin(2 * pi * x[1]), E = std::exp(2 * x[0]);
        const double u = s1 * s2 * E / 6.0;
        const double lap = s2 * E * (s1 * (4.0 - 8.0 * pi * pi) + 8.0 * pi * c1) / 6.0;
        return -nu * lap + u * u * u + u;
    };
    return p;
}

ProblemSpec biochemical_problem(double sigma, double k) {
    EGFEM_REQUIRE(sigma > 0.0 && k > 0.0, InvalidArgument, "biochemical_problem: sigma and k must be positive");
    ProblemSpec p;
    p.id = "biochemical";
    p.sga_quad_degree = 2;
    p.params = {{"sigma", sigma}, {"k", k}};
    p.methods = {"sga", "gfem", "egfem-p0", "egfem-p2", "egfem-i2"};
    PointwiseFn ct;
    ct.value = [sigma, k](double u, const Vec2&, const Vec2&) {
        EGFEM_REQUIRE(k + u > 0.0, DomainError, "biochemical reaction evaluated with k + u <= 0");
        return sigma / (k + u);
    };
    ct.d_du = [sigma, k](double u, const Vec2&, const Vec2&) {
        EGFEM_REQUIRE(k + u > 0.0, DomainError, "biochemical reaction evaluated with k + u <= 0");
        return -sigma / ((k + u) * (k + u));
    };
    p.c_tilde = ct;
    p.exact = cubic;
    p.u_D = cubic;
    p.d = [sigma, k](const Vec2& x) {
        const double u = cubic(x);
        return -cubic_laplacian(x) + sigma * u / (k + u);
    };
    return p;
}

ProblemSpec plaplace_problem(double pp) {
    EGFEM_REQUIRE(pp > 1.0, InvalidArgument, "plaplace_problem: p must exceed 1");
    ProblemSpec p;
    p.id = "plaplace";
    p.domain = "disk";
    p.sga_quad_degree = 1;
    p.params = {{"p", pp}};
    p.methods = {"sga", "egfem-p0", "egfem-i1"};
    // |g|^{p-2} regularized at g = 0, where the exact solution has a critical point
    constexpr double eps2 = 1e-20;
    PointwiseFn a;
    a.uses_gradient = true;
    a.value = [pp](double, const Vec2& g, const Vec2&) { return std::pow(g.squaredNorm() + eps2, 0.5 * (pp - 2.0)); };
    a.d_du = [](double, const Vec2&, const Vec2&) { return 0.0; };
    a.d_dgrad = [pp](double, const Vec2& g, const Vec2&) {
        return Vec2((pp - 2.0) * std::pow(g.squaredNorm() + eps2, 0.5 * (pp - 4.0)) * g);
    };
    p.a = a;
    p.d = [](const Vec2&) { return 1.0; };
    p.u_D = [](const Vec2&) { return 0.0; };
    p.exact = [pp](const Vec2& x) {
        return std::pow(2.0, -1.0 / (pp - 1.0)) * (pp - 1.0) / pp * (1.0 - std::pow(x.norm(), pp / (pp - 1.0)));
    };
    return p;
}

ProblemSpec minimal_surface_problem() {
    ProblemSpec p;
    p.id = "minimal-surface";
    p.sga_quad_degree = 1;
    p.methods = {"sga", "egfem-p0", "egfem-i1"};
    PointwiseFn a;
    a.uses_gradient = true;
    a.value = [](double, const Vec2& g, const Vec2&) { return 1.0 / std::sqrt(1.0 + g.squaredNorm()); };
    a.d_du = [](double, const Vec2&, const Vec2&) { return 0.0; };
    a.d_dgrad = [](double, const Vec2& g, const Vec2&) {
        return Vec2(-std::pow(1.0 + g.squaredNorm(), -1.5) * g);
    };
    p.a = a;
    p.exact = cubic;
    p.u_D = cubic;
    p.d = [](const Vec2& x) {
        const double x1 = x[0], x2 = x[1];
        const Vec2 g(2 * x1 * x2 + x2 * x2, x1 * x1 + 2 * x1 * x2);
        Eigen::Matrix2d H;
        H << 2 * x2, 2 * x1 + 2 * x2, 2 * x1 + 2 * x2, 2 * x1;
        const double q = 1.0 + g.squaredNorm();
        const double lap = 2.0 * (x1 + x2);
        return -(lap * q - g.dot(H * g)) / std::pow(q, 1.5);
    };
    return p;
}

ProblemSpec make_problem(const std::string& id, const std::map<std::string, double>& params) {
    if (id == "quadratic") return quadratic_problem(QuadraticVariant::Polynomial);
    if (id == "quadratic-trig") return quadratic_problem(QuadraticVariant::Trig);
    if (id == "burgers")
        return burgers_problem(param(params, "nu", 1.0), param(params, "T", 1.0), param(params, "dt", 1e-2));
    if (id == "superconductivity-a" || id == "superconductivity-b" || id == "superconductivity-c") {
        const char f = id.back();
        const auto form = f == 'a' ? SuperconductivityForm::A : f == 'b' ? SuperconductivityForm::B : SuperconductivityForm::C;
        return superconductivity_problem(param(params, "nu", 1.0), form);
    }
    if (id == "biochemical") return biochemical_problem(param(params, "sigma", 1.0), param(params, "k", 1.0));
    if (id == "plaplace") return plaplace_problem(param(params, "p", 1.5));
    if (id == "minimal-surface") return minimal_surface_problem();
    throw InvalidArgument("unknown problem '" + id + "'");
}

std::vector<std::string> problem_ids() {
    return {"quadratic",           "quadratic-trig",      "burgers",     "superconductivity-a",
            "superconductivity-b", "superconductivity-c", "biochemical", "plaplace",
            "minimal-surface"};
}

Mesh problem_mesh(const ProblemSpec& problem, int level) {
    EGFEM_REQUIRE(level >= 0 && level <= 10, InvalidArgument, "mesh level must be in 0..10");
    if (problem.domain == "disk") return generate_unit_disk(level);
    return generate_unit_square(1 << level);
}

}  // namespace egfem

#pragma once

#include "egfem/assembly.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace egfem {

using SpaceTimeField = std::function<double(const Vec2&, double)>;

/// Coefficient roles of -div(a grad u) + c = d with b(u) = u. The reaction c
/// is split into the pieces a formulation treats differently:
///   c_tilde(u) u        weighted mass (lagged coefficient, implicit u)
///   c_linear u          plain mass
///   c(u)                lagged vector
///   convection_scale * int f(u) (d1 phi + d2 phi)   flux term (Burgers)
struct ProblemSpec {
    std::string id;
    std::string domain = "square";  // "square" or "disk"

    double a0 = 1.0;  // used when `a` is absent
    std::optional<PointwiseFn> a;
    std::optional<PointwiseFn> c_tilde;
    double c_linear = 0.0;
    std::optional<PointwiseFn> c;
    std::optional<PointwiseFn> convection;
    double convection_scale = -0.5;

    ScalarField d;
    ScalarField u_D;
    ScalarField exact;  // may be empty

    std::map<std::string, double> params;
    std::vector<std::string> methods;  // methods the benchmark offers for this problem
    int sga_quad_degree = 2;
    int load_quad_degree = 6;
    /// The single vector-type term (c or the convection flux) is exactly u^2,
    /// so it can be written as a trilinear form T : (u (x) u).
    bool square_nonlinearity = false;

    // Time-dependent problems (Burgers).
    bool time_dependent = false;
    SpaceTimeField exact_t;
    SpaceTimeField d_t;
    double T = 0.0;
    double dt = 0.0;

    [[nodiscard]] bool is_linear() const { return !a && !c_tilde && !c && !convection; }
    [[nodiscard]] int aux_count() const {
        return static_cast<int>(a.has_value()) + static_cast<int>(c_tilde.has_value()) +
               static_cast<int>(c.has_value()) + static_cast<int>(convection.has_value());
    }
};

}  // namespace egfem

#pragma once

#include "egfem/mesh.hpp"
#include "egfem/model.hpp"

#include <map>
#include <string>
#include <vector>

namespace egfem {

enum class QuadraticVariant { Polynomial, Trig };
enum class SuperconductivityForm { A, B, C };

/// -Lap u + u^2 = d on the unit square.
ProblemSpec quadratic_problem(QuadraticVariant variant = QuadraticVariant::Polynomial);
/// u_t - nu Lap u + u (d1 u + d2 u) = d, homogeneous Dirichlet data.
ProblemSpec burgers_problem(double nu = 1.0, double T = 1.0, double dt = 1e-2);
/// One implicit Burgers step posed as a stationary problem: c_linear = 1/dt and
/// d = d(., t_next). The caller adds M u^n / dt to the load.
ProblemSpec burgers_step_problem(const ProblemSpec& burgers, double t_next);
/// -nu Lap u + u^3 + u = d with the reaction split per formulation.
ProblemSpec superconductivity_problem(double nu = 1.0, SuperconductivityForm form = SuperconductivityForm::A);
/// -Lap u + sigma u / (k + u) = d.
ProblemSpec biochemical_problem(double sigma = 1.0, double k = 1.0);
/// -div(|grad u|^{p-2} grad u) = 1 on the unit disk, u = 0 on the circle.
ProblemSpec plaplace_problem(double p = 1.5);
/// -div(grad u / sqrt(1 + |grad u|^2)) = d on the unit square.
ProblemSpec minimal_surface_problem();

/// Problem ids: quadratic, quadratic-trig, burgers, superconductivity-a/-b/-c,
/// biochemical, plaplace, minimal-surface. Recognized parameters: nu, sigma,
/// k, p, T, dt.
ProblemSpec make_problem(const std::string& id, const std::map<std::string, double>& params = {});
std::vector<std::string> problem_ids();

/// Square level l is the 2^l x 2^l grid; disk level l is l refinements.
Mesh problem_mesh(const ProblemSpec& problem, int level);

}  // namespace egfem

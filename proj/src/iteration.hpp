#pragma once

// Helpers shared by the iteration loops; not part of the public interface.

#include "egfem/solver.hpp"

#include <chrono>
#include <optional>

namespace egfem::detail {

/// Zero on free DOFs, prescribed values on constrained ones.
DenseVector initial_guess(int n, const DirichletBC& bc);

/// Records the relative update and decides whether to stop.
std::optional<Status> check_update(const DenseVector& u_new, const DenseVector& u_old, const IterOptions& opts,
                                   SolveResult& r);

/// A solver for the reduced system; factored right away when `constant`.
std::shared_ptr<LinearSolver> make_solver(const DirichletReduction& reduction, std::span<const double> values,
                                          bool constant);

double seconds_since(std::chrono::steady_clock::time_point start);

}  // namespace egfem::detail

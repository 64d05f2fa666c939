#pragma once

#include <string>
#include <vector>

namespace egfem {

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;  // worst observed deviation
    double tol = 0.0;
};

/// Quick self-checks: quadrature vs closed-form monomial integrals, tensor
/// contraction identities, SGA vs I_k operator agreement, and Newton
/// Jacobians vs central differences. Small meshes only; a few seconds.
std::vector<CheckResult> run_verification();

}  // namespace egfem

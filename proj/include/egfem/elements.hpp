#pragma once

#include "egfem/common.hpp"
#include "egfem/mesh.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace egfem {

/// Barycentric coordinates (lambda_0, lambda_1, lambda_2) with respect to the
/// triangle vertices in local order.
using Barycentric = std::array<double, 3>;

enum class FamilyKind { LagrangeP0, LagrangeP1, LagrangeP2, LagrangeP3, QuadratureEmbedded };

class ElementFamily {
public:
    static ElementFamily P0() { return ElementFamily(FamilyKind::LagrangeP0, 0); }
    static ElementFamily P1() { return ElementFamily(FamilyKind::LagrangeP1, 1); }
    static ElementFamily P2() { return ElementFamily(FamilyKind::LagrangeP2, 2); }
    static ElementFamily P3() { return ElementFamily(FamilyKind::LagrangeP3, 3); }
    /// Space I_k built from the Dunavant rule of exactness degree k.
    static ElementFamily quadrature(int exactness_degree);
    /// Parses "P0".."P3" and "I1".."I6".
    static ElementFamily parse(const std::string& name);

    [[nodiscard]] FamilyKind kind() const { return kind_; }
    /// Polynomial degree for Lagrange kinds, exactness degree for I_k.
    [[nodiscard]] int degree() const { return degree_; }
    [[nodiscard]] bool is_lagrange() const { return kind_ != FamilyKind::QuadratureEmbedded; }
    [[nodiscard]] bool is_quadrature() const { return kind_ == FamilyKind::QuadratureEmbedded; }
    /// Continuous across element interfaces (P1-P3).
    [[nodiscard]] bool is_continuous() const { return is_lagrange() && degree_ >= 1; }
    [[nodiscard]] int local_size() const;
    [[nodiscard]] std::string name() const;

    friend bool operator==(const ElementFamily&, const ElementFamily&) = default;

private:
    ElementFamily(FamilyKind kind, int degree) : kind_(kind), degree_(degree) {}
    FamilyKind kind_;
    int degree_;
};

/// Symmetric rule on the reference triangle; weights sum to one and are
/// scaled by |K| at assembly.
struct QuadratureRule {
    std::vector<Barycentric> points;
    std::vector<double> weights;
    int exactness_degree = 0;

    [[nodiscard]] int size() const { return static_cast<int>(points.size()); }
};

/// Dunavant rules for exactness degree 1..6 (1, 3, 4, 6, 7, 12 points).
const QuadratureRule& dunavant_rule(int exactness_degree);
constexpr int kMaxQuadratureDegree = 6;

/// Gauss-Legendre rule on [0,1] with n points (weights sum to one).
struct LineRule {
    std::vector<double> points;
    std::vector<double> weights;
};
LineRule gauss_line_rule(int exactness_degree);

struct BasisValues {
    Eigen::VectorXd values;
    /// Reference-coordinate gradients, one column per local basis function.
    Eigen::Matrix<double, 2, Eigen::Dynamic> gradients;
};

/// Lagrange shape functions and their reference gradients at a point.
BasisValues eval_basis(ElementFamily family, const Barycentric& point);

/// Allocation-free variant used by the assembly kernels; returns the local size.
int eval_basis(ElementFamily family, const Barycentric& point, std::span<double> values, std::span<Vec2> gradients);

/// Barycentric coordinates of the local nodes of a Lagrange family.
std::vector<Barycentric> lagrange_nodes(ElementFamily family);

/// Affine map from the reference triangle (0,0),(1,0),(0,1).
struct ElementGeometry {
    Vec2 origin;
    Eigen::Matrix2d jacobian;
    Eigen::Matrix2d inverse_transpose;
    double area = 0.0;

    [[nodiscard]] Vec2 map(const Barycentric& b) const {
        return origin + jacobian * Vec2(b[1], b[2]);
    }
    [[nodiscard]] Vec2 physical_gradient(const Vec2& reference_gradient) const {
        return inverse_transpose * reference_gradient;
    }
};

ElementGeometry element_geometry(const Mesh& mesh, int triangle);

/// Degrees of freedom of a scalar finite element space over a mesh. Immutable.
///
/// Every DOF records an owner element and its barycentric location there;
/// DOFs shared between elements are owned by the lowest-index element.
class FunctionSpace {
public:
    FunctionSpace(std::shared_ptr<const Mesh> mesh, ElementFamily family);

    [[nodiscard]] const Mesh& mesh() const { return *mesh_; }
    [[nodiscard]] const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
    [[nodiscard]] ElementFamily family() const { return family_; }
    [[nodiscard]] int n_dofs() const { return n_dofs_; }
    [[nodiscard]] int local_size() const { return local_size_; }
    [[nodiscard]] std::span<const int> cell_dofs(int triangle) const {
        return {cell_dofs_.data() + static_cast<std::size_t>(triangle) * local_size_,
                static_cast<std::size_t>(local_size_)};
    }
    [[nodiscard]] const std::vector<Vec2>& dof_coords() const { return dof_coords_; }
    [[nodiscard]] int dof_owner(int dof) const { return dof_owner_[dof]; }
    [[nodiscard]] const Barycentric& dof_reference(int dof) const { return dof_reference_[dof]; }
    /// DOFs on Dirichlet-tagged edges; empty for discontinuous families.
    [[nodiscard]] const std::vector<int>& dirichlet_dofs() const { return dirichlet_dofs_; }
    /// The embedded rule for I_k spaces, nullptr otherwise.
    [[nodiscard]] const QuadratureRule* quadrature_rule() const { return rule_; }
    [[nodiscard]] bool shares_mesh(const FunctionSpace& other) const { return mesh_ == other.mesh_; }

private:
    std::shared_ptr<const Mesh> mesh_;
    ElementFamily family_;
    int n_dofs_ = 0;
    int local_size_ = 0;
    const QuadratureRule* rule_ = nullptr;
    std::vector<int> cell_dofs_;
    std::vector<Vec2> dof_coords_;
    std::vector<int> dof_owner_;
    std::vector<Barycentric> dof_reference_;
    std::vector<int> dirichlet_dofs_;
};

std::shared_ptr<const FunctionSpace> build_space(std::shared_ptr<const Mesh> mesh, ElementFamily family);

/// Coefficients of the nodal interpolant of f (Lagrange spaces) or the values
/// of f at the embedded quadrature points (I_k).
Eigen::VectorXd interpolate(const FunctionSpace& space, const std::function<double(const Vec2&)>& f);

}  // namespace egfem

#include "egfem/elements.hpp"

#include <algorithm>

namespace egfem {

ElementFamily ElementFamily::quadrature(int exactness_degree) {
    dunavant_rule(exactness_degree);  // validates the degree
    return ElementFamily(FamilyKind::QuadratureEmbedded, exactness_degree);
}

ElementFamily ElementFamily::parse(const std::string& name) {
    if (name.size() == 2 && (name[0] == 'P' || name[0] == 'p')) {
        switch (name[1]) {
            case '0': return P0();
            case '1': return P1();
            case '2': return P2();
            case '3': return P3();
            default: break;
        }
    }
    if (name.size() == 2 && (name[0] == 'I' || name[0] == 'i') && name[1] >= '1' && name[1] <= '9') {
        return quadrature(name[1] - '0');
    }
    throw InvalidArgument("unknown element family '" + name + "'");
}

int ElementFamily::local_size() const {
    switch (kind_) {
        case FamilyKind::LagrangeP0: return 1;
        case FamilyKind::LagrangeP1: return 3;
        case FamilyKind::LagrangeP2: return 6;
        case FamilyKind::LagrangeP3: return 10;
        case FamilyKind::QuadratureEmbedded: return dunavant_rule(degree_).size();
    }
    return 0;
}

std::string ElementFamily::name() const {
    return (is_quadrature() ? "I" : "P") + std::to_string(degree_);
}

namespace {

const std::array<Vec2, 3> kBarycentricGradients{Vec2(-1.0, -1.0), Vec2(1.0, 0.0), Vec2(0.0, 1.0)};

}  // namespace

int eval_basis(ElementFamily family, const Barycentric& p, std::span<double> values, std::span<Vec2> gradients) {
    EGFEM_REQUIRE(family.is_lagrange(), InvalidArgument,
                  "quadrature-embedded bases are never evaluated pointwise");
    const int n = family.local_size();
    EGFEM_REQUIRE(static_cast<int>(values.size()) >= n && static_cast<int>(gradients.size()) >= n,
                  InvalidArgument, "eval_basis: output buffers too small");
    const auto& dl = kBarycentricGradients;
    switch (family.kind()) {
        case FamilyKind::LagrangeP0:
            values[0] = 1.0;
            gradients[0] = Vec2::Zero();
            break;
        case FamilyKind::LagrangeP1:
            for (int i = 0; i < 3; ++i) {
                values[i] = p[i];
                gradients[i] = dl[i];
            }
            break;
        case FamilyKind::LagrangeP2:
            for (int i = 0; i < 3; ++i) {
                values[i] = p[i] * (2.0 * p[i] - 1.0);
                gradients[i] = (4.0 * p[i] - 1.0) * dl[i];
            }
            for (int l = 0; l < 3; ++l) {
                const int i = l, j = (l + 1) % 3;
                values[3 + l] = 4.0 * p[i] * p[j];
                gradients[3 + l] = 4.0 * (p[j] * dl[i] + p[i] * dl[j]);
            }
            break;
        case FamilyKind::LagrangeP3:
            for (int i = 0; i < 3; ++i) {
                values[i] = 0.5 * p[i] * (3.0 * p[i] - 1.0) * (3.0 * p[i] - 2.0);
                gradients[i] = 0.5 * (27.0 * p[i] * p[i] - 18.0 * p[i] + 2.0) * dl[i];
            }
            for (int l = 0; l < 3; ++l) {
                const int a = l, b = (l + 1) % 3;
                // Node closer to vertex a, then node closer to vertex b.
                const std::array<std::pair<int, int>, 2> nodes{{{a, b}, {b, a}}};
                for (int s = 0; s < 2; ++s) {
                    const auto [i, j] = nodes[s];
                    values[3 + 2 * l + s] = 4.5 * p[i] * p[j] * (3.0 * p[i] - 1.0);
                    gradients[3 + 2 * l + s] =
                        4.5 * ((6.0 * p[i] * p[j] - p[j]) * dl[i] + (3.0 * p[i] * p[i] - p[i]) * dl[j]);
                }
            }
            values[9] = 27.0 * p[0] * p[1] * p[2];
            gradients[9] = 27.0 * (p[1] * p[2] * dl[0] + p[0] * p[2] * dl[1] + p[0] * p[1] * dl[2]);
            break;
        case FamilyKind::QuadratureEmbedded:
            break;
    }
    return n;
}

BasisValues eval_basis(ElementFamily family, const Barycentric& point) {
    std::array<double, 10> v{};
    std::array<Vec2, 10> g{};
    const int n = eval_basis(family, point, v, g);
    BasisValues out;
    out.values.resize(n);
    out.gradients.resize(2, n);
    for (int i = 0; i < n; ++i) {
        out.values[i] = v[i];
        out.gradients.col(i) = g[i];
    }
    return out;
}

std::vector<Barycentric> lagrange_nodes(ElementFamily family) {
    EGFEM_REQUIRE(family.is_lagrange(), InvalidArgument, "lagrange_nodes: not a Lagrange family");
    constexpr double third = 1.0 / 3.0;
    auto vertex = [](int i) {
        Barycentric b{0.0, 0.0, 0.0};
        b[i] = 1.0;
        return b;
    };
    auto on_edge = [](int i, int j, double t) {
        Barycentric b{0.0, 0.0, 0.0};
        b[i] = 1.0 - t;
        b[j] = t;
        return b;
    };
    std::vector<Barycentric> nodes;
    switch (family.kind()) {
        case FamilyKind::LagrangeP0:
            nodes.push_back({third, third, third});
            break;
        case FamilyKind::LagrangeP1:
            for (int i = 0; i < 3; ++i) nodes.push_back(vertex(i));
            break;
        case FamilyKind::LagrangeP2:
            for (int i = 0; i < 3; ++i) nodes.push_back(vertex(i));
            for (int l = 0; l < 3; ++l) nodes.push_back(on_edge(l, (l + 1) % 3, 0.5));
            break;
        case FamilyKind::LagrangeP3:
            for (int i = 0; i < 3; ++i) nodes.push_back(vertex(i));
            for (int l = 0; l < 3; ++l) {
                nodes.push_back(on_edge(l, (l + 1) % 3, third));
                nodes.push_back(on_edge(l, (l + 1) % 3, 2.0 * third));
            }
            nodes.push_back({third, third, third});
            break;
        case FamilyKind::QuadratureEmbedded:
            break;
    }
    return nodes;
}

ElementGeometry element_geometry(const Mesh& mesh, int triangle) {
    const auto& tri = mesh.triangles()[triangle];
    const auto& x = mesh.vertices();
    ElementGeometry g;
    g.origin = x[tri[0]];
    g.jacobian.col(0) = x[tri[1]] - x[tri[0]];
    g.jacobian.col(1) = x[tri[2]] - x[tri[0]];
    const double det = g.jacobian.determinant();
    g.area = 0.5 * det;
    g.inverse_transpose << g.jacobian(1, 1), -g.jacobian(1, 0), -g.jacobian(0, 1), g.jacobian(0, 0);
    g.inverse_transpose /= det;
    return g;
}

FunctionSpace::FunctionSpace(std::shared_ptr<const Mesh> mesh, ElementFamily family)
    : mesh_(std::move(mesh)), family_(family) {
    EGFEM_REQUIRE(mesh_ != nullptr, InvalidArgument, "FunctionSpace: null mesh");
    const Mesh& m = *mesh_;
    const int nv = m.num_vertices(), ne = m.num_edges(), nt = m.num_triangles();
    local_size_ = family_.local_size();
    cell_dofs_.resize(static_cast<std::size_t>(nt) * local_size_);

    std::vector<Barycentric> local_nodes;
    if (family_.is_quadrature()) {
        rule_ = &dunavant_rule(family_.degree());
        local_nodes = rule_->points;
    } else {
        local_nodes = lagrange_nodes(family_);
    }

    switch (family_.kind()) {
        case FamilyKind::LagrangeP0: n_dofs_ = nt; break;
        case FamilyKind::LagrangeP1: n_dofs_ = nv; break;
        case FamilyKind::LagrangeP2: n_dofs_ = nv + ne; break;
        case FamilyKind::LagrangeP3: n_dofs_ = nv + 2 * ne + nt; break;
        case FamilyKind::QuadratureEmbedded: n_dofs_ = nt * local_size_; break;
    }

    for (int t = 0; t < nt; ++t) {
        int* dofs = cell_dofs_.data() + static_cast<std::size_t>(t) * local_size_;
        const auto& tri = m.triangles()[t];
        const auto& edges = m.triangle_edges(t);
        switch (family_.kind()) {
            case FamilyKind::LagrangeP0:
                dofs[0] = t;
                break;
            case FamilyKind::LagrangeP1:
                for (int i = 0; i < 3; ++i) dofs[i] = tri[i];
                break;
            case FamilyKind::LagrangeP2:
                for (int i = 0; i < 3; ++i) dofs[i] = tri[i];
                for (int l = 0; l < 3; ++l) dofs[3 + l] = nv + edges[l];
                break;
            case FamilyKind::LagrangeP3:
                for (int i = 0; i < 3; ++i) dofs[i] = tri[i];
                for (int l = 0; l < 3; ++l) {
                    // Global edge DOF 0 sits next to the lower vertex index.
                    const bool forward = tri[l] < tri[(l + 1) % 3];
                    dofs[3 + 2 * l] = nv + 2 * edges[l] + (forward ? 0 : 1);
                    dofs[4 + 2 * l] = nv + 2 * edges[l] + (forward ? 1 : 0);
                }
                dofs[9] = nv + 2 * ne + t;
                break;
            case FamilyKind::QuadratureEmbedded:
                for (int q = 0; q < local_size_; ++q) dofs[q] = t * local_size_ + q;
                break;
        }
    }

    dof_owner_.assign(n_dofs_, -1);
    dof_reference_.resize(n_dofs_);
    dof_coords_.resize(n_dofs_);
    for (int t = 0; t < nt; ++t) {
        const auto dofs = cell_dofs(t);
        ElementGeometry geo;
        bool have_geo = false;
        for (int l = 0; l < local_size_; ++l) {
            const int d = dofs[l];
            if (dof_owner_[d] >= 0) continue;
            if (!have_geo) {
                geo = element_geometry(m, t);
                have_geo = true;
            }
            dof_owner_[d] = t;
            dof_reference_[d] = local_nodes[l];
            dof_coords_[d] = geo.map(local_nodes[l]);
        }
    }

    if (family_.is_continuous()) {
        for (int b = 0; b < static_cast<int>(m.boundary_edges().size()); ++b) {
            if (m.boundary_edges()[b].tag != BoundaryTag::Dirichlet) continue;
            const auto [t, l] = m.boundary_edge_owner(b);
            const auto dofs = cell_dofs(t);
            dirichlet_dofs_.push_back(dofs[l]);
            dirichlet_dofs_.push_back(dofs[(l + 1) % 3]);
            if (family_.kind() == FamilyKind::LagrangeP2) {
                dirichlet_dofs_.push_back(dofs[3 + l]);
            } else if (family_.kind() == FamilyKind::LagrangeP3) {
                dirichlet_dofs_.push_back(dofs[3 + 2 * l]);
                dirichlet_dofs_.push_back(dofs[4 + 2 * l]);
            }
        }
        std::sort(dirichlet_dofs_.begin(), dirichlet_dofs_.end());
        dirichlet_dofs_.erase(std::unique(dirichlet_dofs_.begin(), dirichlet_dofs_.end()), dirichlet_dofs_.end());
    }
}

std::shared_ptr<const FunctionSpace> build_space(std::shared_ptr<const Mesh> mesh, ElementFamily family) {
    return std::make_shared<const FunctionSpace>(std::move(mesh), family);
}

Eigen::VectorXd interpolate(const FunctionSpace& space, const std::function<double(const Vec2&)>& f) {
    Eigen::VectorXd out(space.n_dofs());
    for (int i = 0; i < space.n_dofs(); ++i) out[i] = f(space.dof_coords()[i]);
    return out;
}

}  // namespace egfem

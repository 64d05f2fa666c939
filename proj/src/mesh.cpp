#include "egfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace egfem {

namespace {

std::array<int, 2> sorted_pair(int a, int b) { return a < b ? std::array{a, b} : std::array{b, a}; }

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

}  // namespace

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
           std::vector<BoundaryEdge> boundary_edges)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      boundary_edges_(std::move(boundary_edges)) {
    const int nv = num_vertices();
    EGFEM_REQUIRE(!triangles_.empty(), MeshError, "mesh has no triangles");

    for (std::size_t t = 0; t < triangles_.size(); ++t) {
        const auto& tri = triangles_[t];
        for (int v : tri) {
            EGFEM_REQUIRE(v >= 0 && v < nv, MeshError,
                          "triangle " + std::to_string(t) + " references vertex " + std::to_string(v) +
                              " out of range");
        }
        EGFEM_REQUIRE(tri[0] != tri[1] && tri[1] != tri[2] && tri[0] != tri[2], MeshError,
                      "triangle " + std::to_string(t) + " has repeated vertices");
        EGFEM_REQUIRE(signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]) > 0.0, MeshError,
                      "triangle " + std::to_string(t) + " is not counter-clockwise or is degenerate");
    }

    edges_.reserve(3 * triangles_.size());
    for (const auto& tri : triangles_) {
        for (int l = 0; l < 3; ++l) edges_.push_back(sorted_pair(tri[l], tri[(l + 1) % 3]));
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

    std::vector<int> edge_count(edges_.size(), 0);
    // +1 when traversed low->high, -1 otherwise; an interior edge must cancel.
    std::vector<int> edge_direction(edges_.size(), 0);
    std::vector<std::pair<int, int>> edge_owner(edges_.size(), {-1, -1});
    triangle_edges_.resize(triangles_.size());
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
        const auto& tri = triangles_[t];
        for (int l = 0; l < 3; ++l) {
            const int a = tri[l];
            const int b = tri[(l + 1) % 3];
            const int e = edge_index(a, b);
            triangle_edges_[t][l] = e;
            ++edge_count[e];
            edge_direction[e] += a < b ? 1 : -1;
            edge_owner[e] = {static_cast<int>(t), l};
        }
    }
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        EGFEM_REQUIRE(edge_count[e] <= 2, MeshError,
                      "edge (" + std::to_string(edges_[e][0]) + "," + std::to_string(edges_[e][1]) +
                          ") is shared by more than two triangles");
        EGFEM_REQUIRE(edge_count[e] == 1 || edge_direction[e] == 0, MeshError,
                      "inconsistent orientation across edge (" + std::to_string(edges_[e][0]) + "," +
                          std::to_string(edges_[e][1]) + ")");
    }

    std::vector<char> on_boundary_list(edges_.size(), 0);
    boundary_owner_.reserve(boundary_edges_.size());
    for (const auto& be : boundary_edges_) {
        const auto [a, b] = be.vertices;
        EGFEM_REQUIRE(a >= 0 && a < nv && b >= 0 && b < nv && a != b, MeshError,
                      "boundary edge references invalid vertices");
        const int e = edge_index(a, b);
        EGFEM_REQUIRE(e >= 0, MeshError,
                      "boundary edge (" + std::to_string(a) + "," + std::to_string(b) + ") is not a mesh edge");
        EGFEM_REQUIRE(edge_count[e] == 1, MeshError,
                      "boundary edge (" + std::to_string(a) + "," + std::to_string(b) + ") is an interior edge");
        EGFEM_REQUIRE(!on_boundary_list[e], MeshError,
                      "boundary edge (" + std::to_string(a) + "," + std::to_string(b) + ") listed twice");
        on_boundary_list[e] = 1;
        boundary_owner_.push_back(edge_owner[e]);
    }
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        EGFEM_REQUIRE(edge_count[e] == 2 || on_boundary_list[e], MeshError,
                      "topological boundary edge (" + std::to_string(edges_[e][0]) + "," +
                          std::to_string(edges_[e][1]) + ") has no boundary tag");
    }
}

int Mesh::edge_index(int a, int b) const {
    const auto key = sorted_pair(a, b);
    const auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
    if (it == edges_.end() || *it != key) return -1;
    return static_cast<int>(it - edges_.begin());
}

double Mesh::area(int t) const {
    const auto& tri = triangles_[t];
    return signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
}

double Mesh::total_area() const {
    double sum = 0.0;
    for (int t = 0; t < num_triangles(); ++t) sum += area(t);
    return sum;
}

std::vector<int> Mesh::boundary_vertices(BoundaryTag tag) const {
    std::vector<int> out;
    for (const auto& be : boundary_edges_) {
        if (be.tag != tag) continue;
        out.push_back(be.vertices[0]);
        out.push_back(be.vertices[1]);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Mesh generate_unit_square(int n) {
    EGFEM_REQUIRE(n >= 1, InvalidArgument, "generate_unit_square: n must be >= 1");
    const int np = n + 1;
    std::vector<Vec2> vertices;
    vertices.reserve(static_cast<std::size_t>(np) * np);
    for (int j = 0; j < np; ++j) {
        for (int i = 0; i < np; ++i) {
            vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
        }
    }
    auto vid = [np](int i, int j) { return j * np + i; };

    std::vector<std::array<int, 3>> triangles;
    triangles.reserve(2 * static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int v00 = vid(i, j), v10 = vid(i + 1, j), v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
            triangles.push_back({v00, v10, v11});
            triangles.push_back({v00, v11, v01});
        }
    }

    std::vector<BoundaryEdge> boundary;
    boundary.reserve(4 * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        boundary.push_back({{vid(i, 0), vid(i + 1, 0)}});
        boundary.push_back({{vid(n, i), vid(n, i + 1)}});
        boundary.push_back({{vid(i + 1, n), vid(i, n)}});
        boundary.push_back({{vid(0, i + 1), vid(0, i)}});
    }
    return Mesh(std::move(vertices), std::move(triangles), std::move(boundary));
}

Mesh refine_uniform(const Mesh& mesh) {
    const int nv = mesh.num_vertices();
    std::vector<Vec2> vertices = mesh.vertices();
    vertices.reserve(nv + mesh.num_edges());
    for (const auto& e : mesh.edges()) vertices.push_back(0.5 * (mesh.vertices()[e[0]] + mesh.vertices()[e[1]]));

    std::vector<std::array<int, 3>> triangles;
    triangles.reserve(4 * static_cast<std::size_t>(mesh.num_triangles()));
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& v = mesh.triangles()[t];
        const auto& e = mesh.triangle_edges(t);
        const int m01 = nv + e[0], m12 = nv + e[1], m20 = nv + e[2];
        triangles.push_back({v[0], m01, m20});
        triangles.push_back({m01, v[1], m12});
        triangles.push_back({m20, m12, v[2]});
        triangles.push_back({m01, m12, m20});
    }

    std::vector<BoundaryEdge> boundary;
    boundary.reserve(2 * mesh.boundary_edges().size());
    for (const auto& be : mesh.boundary_edges()) {
        const int mid = nv + mesh.edge_index(be.vertices[0], be.vertices[1]);
        boundary.push_back({{be.vertices[0], mid}, be.tag});
        boundary.push_back({{mid, be.vertices[1]}, be.tag});
    }
    return Mesh(std::move(vertices), std::move(triangles), std::move(boundary));
}

Mesh generate_unit_disk(int level) {
    EGFEM_REQUIRE(level >= 0, InvalidArgument, "generate_unit_disk: level must be >= 0");
    std::vector<Vec2> vertices{Vec2::Zero()};
    for (int k = 0; k < 6; ++k) {
        const double phi = k * std::numbers::pi / 3.0;
        vertices.emplace_back(std::cos(phi), std::sin(phi));
    }
    std::vector<std::array<int, 3>> triangles;
    std::vector<BoundaryEdge> boundary;
    for (int k = 0; k < 6; ++k) {
        const int a = 1 + k, b = 1 + (k + 1) % 6;
        triangles.push_back({0, a, b});
        boundary.push_back({{a, b}});
    }
    Mesh mesh(std::move(vertices), std::move(triangles), std::move(boundary));

    for (int r = 0; r < level; ++r) {
        Mesh fine = refine_uniform(mesh);
        std::vector<Vec2> projected = fine.vertices();
        for (int v : fine.boundary_vertices(BoundaryTag::Dirichlet)) projected[v].normalize();
        mesh = Mesh(std::move(projected), fine.triangles(), fine.boundary_edges());
    }
    return mesh;
}

}  // namespace egfem

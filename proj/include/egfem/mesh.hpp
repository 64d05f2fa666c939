#pragma once

#include "egfem/common.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <vector>

namespace egfem {

enum class BoundaryTag { Dirichlet, Neumann };

struct BoundaryEdge {
    std::array<int, 2> vertices;
    BoundaryTag tag = BoundaryTag::Dirichlet;
};

/// Conforming 2D triangulation. Immutable once constructed; the constructor
/// validates orientation, edge-manifoldness and boundary closure, and derives
/// the global edge numbering (sorted vertex pairs, ascending).
///
/// Local edge l of a triangle joins local vertices l and (l+1) mod 3.
class Mesh {
public:
    static constexpr int dim = 2;

    Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
         std::vector<BoundaryEdge> boundary_edges);

    [[nodiscard]] const std::vector<Vec2>& vertices() const { return vertices_; }
    [[nodiscard]] const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
    [[nodiscard]] const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_edges_; }

    [[nodiscard]] int num_vertices() const { return static_cast<int>(vertices_.size()); }
    [[nodiscard]] int num_triangles() const { return static_cast<int>(triangles_.size()); }
    [[nodiscard]] int num_edges() const { return static_cast<int>(edges_.size()); }

    /// Global edges as (lower, higher) vertex index pairs, sorted.
    [[nodiscard]] const std::vector<std::array<int, 2>>& edges() const { return edges_; }
    /// Global edge index of each local edge of triangle t.
    [[nodiscard]] const std::array<int, 3>& triangle_edges(int t) const { return triangle_edges_[t]; }
    /// Triangle adjacent to boundary edge b and the local edge index within it.
    [[nodiscard]] std::pair<int, int> boundary_edge_owner(int b) const { return boundary_owner_[b]; }

    [[nodiscard]] double area(int t) const;
    [[nodiscard]] double total_area() const;
    /// Vertices touched by a boundary edge with the given tag, sorted.
    [[nodiscard]] std::vector<int> boundary_vertices(BoundaryTag tag) const;
    [[nodiscard]] int edge_index(int a, int b) const;

private:
    std::vector<Vec2> vertices_;
    std::vector<std::array<int, 3>> triangles_;
    std::vector<BoundaryEdge> boundary_edges_;
    std::vector<std::array<int, 2>> edges_;
    std::vector<std::array<int, 3>> triangle_edges_;
    std::vector<std::pair<int, int>> boundary_owner_;
};

/// Structured mesh of [0,1]^2 with n cells per side; every cell is split along
/// its bottom-left to top-right diagonal. All boundary edges are Dirichlet.
Mesh generate_unit_square(int n);

/// Splits every triangle into four congruent children through its edge
/// midpoints. New vertices are numbered old_vertices + edge_index.
Mesh refine_uniform(const Mesh& mesh);

/// Hexagon fan around the origin refined `level` times; boundary vertices are
/// projected radially onto the unit circle after every refinement.
Mesh generate_unit_disk(int level);

struct MshOptions {
    /// Physical-group ids of line elements that become Neumann edges.
    std::set<int> neumann_physical_ids;
};

class MshError : public MeshError {
public:
    enum class Kind { Syntax, Version, ElementType, Reference };
    MshError(Kind kind, const std::string& what) : MeshError(what), kind_(kind) {}
    [[nodiscard]] Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Gmsh MSH 2.2 ASCII: 2-node lines (type 1) become boundary edges, 3-node
/// triangles (type 2) become cells, 1-node points (type 15) are skipped.
Mesh read_msh(const std::filesystem::path& path, const MshOptions& options = {});
Mesh parse_msh(std::istream& in, const MshOptions& options = {});

}  // namespace egfem

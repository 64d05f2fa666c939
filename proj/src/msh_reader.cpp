#include "egfem/mesh.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

namespace egfem {

namespace {

constexpr int kLine = 1;
constexpr int kTriangle = 2;
constexpr int kPoint = 15;

std::string next_line(std::istream& in, const char* context) {
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") != std::string::npos) return line;
    }
    throw MshError(MshError::Kind::Syntax, std::string("unexpected end of file in ") + context);
}

void expect(std::istream& in, const std::string& tag) {
    const std::string line = next_line(in, tag.c_str());
    if (line.rfind(tag, 0) != 0) {
        throw MshError(MshError::Kind::Syntax, "expected '" + tag + "', found '" + line + "'");
    }
}

void skip_section(std::istream& in, const std::string& name) {
    const std::string end = "$End" + name;
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind(end, 0) == 0) return;
    }
    throw MshError(MshError::Kind::Syntax, "unterminated section $" + name);
}

}  // namespace

Mesh parse_msh(std::istream& in, const MshOptions& options) {
    bool have_format = false;
    std::vector<int> node_ids;
    std::vector<Vec2> node_xy;
    std::unordered_map<int, int> node_index;
    struct Line {
        int a, b, physical;
    };
    std::vector<Line> lines;
    std::vector<std::array<int, 3>> triangles;

    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line == "$MeshFormat") {
            std::istringstream fmt(next_line(in, "$MeshFormat"));
            std::string version;
            int file_type = -1;
            fmt >> version >> file_type;
            if (version.empty() || version[0] != '2') {
                throw MshError(MshError::Kind::Version, "unsupported MSH version " + version + " (expected 2.2)");
            }
            if (file_type != 0) throw MshError(MshError::Kind::Version, "binary MSH files are not supported");
            expect(in, "$EndMeshFormat");
            have_format = true;
        } else if (line == "$Nodes") {
            if (!have_format) throw MshError(MshError::Kind::Syntax, "$Nodes before $MeshFormat");
            const int n = std::stoi(next_line(in, "$Nodes"));
            node_ids.reserve(n);
            node_xy.reserve(n);
            for (int i = 0; i < n; ++i) {
                std::istringstream row(next_line(in, "$Nodes"));
                int id;
                double x, y, z;
                if (!(row >> id >> x >> y >> z)) throw MshError(MshError::Kind::Syntax, "malformed node record");
                if (!node_index.emplace(id, i).second) {
                    throw MshError(MshError::Kind::Syntax, "duplicate node id " + std::to_string(id));
                }
                node_ids.push_back(id);
                node_xy.emplace_back(x, y);
            }
            expect(in, "$EndNodes");
        } else if (line == "$Elements") {
            const int n = std::stoi(next_line(in, "$Elements"));
            for (int e = 0; e < n; ++e) {
                std::istringstream row(next_line(in, "$Elements"));
                int id, type, ntags;
                if (!(row >> id >> type >> ntags)) throw MshError(MshError::Kind::Syntax, "malformed element record");
                std::vector<int> tags(ntags);
                for (int& t : tags) row >> t;
                int nnodes = 0;
                switch (type) {
                    case kPoint: nnodes = 1; break;
                    case kLine: nnodes = 2; break;
                    case kTriangle: nnodes = 3; break;
                    default:
                        throw MshError(MshError::Kind::ElementType,
                                       "element " + std::to_string(id) + " has unsupported type " +
                                           std::to_string(type) + " (only 2-node lines and 3-node triangles)");
                }
                std::array<int, 3> nodes{};
                for (int k = 0; k < nnodes; ++k) {
                    int node;
                    if (!(row >> node)) throw MshError(MshError::Kind::Syntax, "element record missing nodes");
                    const auto it = node_index.find(node);
                    if (it == node_index.end()) {
                        throw MshError(MshError::Kind::Reference, "element " + std::to_string(id) +
                                                                      " references undefined node " +
                                                                      std::to_string(node));
                    }
                    nodes[k] = it->second;
                }
                if (type == kLine) {
                    lines.push_back({nodes[0], nodes[1], ntags > 0 ? tags[0] : 0});
                } else if (type == kTriangle) {
                    triangles.push_back(nodes);
                }
            }
            expect(in, "$EndElements");
        } else if (line.size() > 1 && line[0] == '$') {
            skip_section(in, line.substr(1));
        }
    }
    if (!have_format) throw MshError(MshError::Kind::Syntax, "missing $MeshFormat section");
    if (triangles.empty()) throw MshError(MshError::Kind::Syntax, "no triangle elements");

    // Keep only nodes used by triangles, in file order.
    std::vector<int> remap(node_xy.size(), -1);
    for (const auto& t : triangles)
        for (int v : t) remap[v] = 0;
    std::vector<Vec2> vertices;
    for (std::size_t i = 0; i < remap.size(); ++i) {
        if (remap[i] == 0) {
            remap[i] = static_cast<int>(vertices.size());
            vertices.push_back(node_xy[i]);
        }
    }
    for (auto& t : triangles) {
        for (int& v : t) v = remap[v];
        const Vec2 d1 = vertices[t[1]] - vertices[t[0]];
        const Vec2 d2 = vertices[t[2]] - vertices[t[0]];
        if (d1.x() * d2.y() - d1.y() * d2.x() < 0.0) std::swap(t[1], t[2]);
    }
    std::vector<BoundaryEdge> boundary;
    boundary.reserve(lines.size());
    for (const auto& l : lines) {
        if (remap[l.a] < 0 || remap[l.b] < 0) {
            throw MshError(MshError::Kind::Reference, "boundary line references a node not used by any triangle");
        }
        const BoundaryTag tag =
            options.neumann_physical_ids.contains(l.physical) ? BoundaryTag::Neumann : BoundaryTag::Dirichlet;
        boundary.push_back({{remap[l.a], remap[l.b]}, tag});
    }
    return Mesh(std::move(vertices), std::move(triangles), std::move(boundary));
}

Mesh read_msh(const std::filesystem::path& path, const MshOptions& options) {
    std::ifstream in(path);
    EGFEM_REQUIRE(in.good(), MeshError, "cannot open mesh file " + path.string());
    return parse_msh(in, options);
}

}  // namespace egfem

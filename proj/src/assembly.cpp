#include "egfem/assembly.hpp"

#include <algorithm>
#include <atomic>
#include <string>

namespace egfem {

namespace {

std::atomic<std::uint64_t> g_quadrature_evaluations{0};

void require_same_mesh(const FunctionSpace& a, const FunctionSpace& b) {
    EGFEM_REQUIRE(a.shares_mesh(b), InvalidArgument, "spaces are defined on different meshes");
}

void require_lagrange(const FunctionSpace& s, const char* what) {
    EGFEM_REQUIRE(s.family().is_lagrange(), InvalidArgument,
                  std::string(what) + ": quadrature-embedded space " + s.family().name() + " not allowed here");
}

void require_gradient(const FunctionSpace& s, const char* what) {
    EGFEM_REQUIRE(s.family().is_lagrange() && s.family().degree() >= 1, InvalidArgument,
                  std::string(what) + ": space " + s.family().name() + " has no usable gradient");
}

// An embedded space fixes the rule; otherwise the requested degree is used.
const QuadratureRule& select_rule(std::initializer_list<const FunctionSpace*> spaces, int quad_degree) {
    const QuadratureRule* embedded = nullptr;
    for (const FunctionSpace* s : spaces) {
        if (!s->family().is_quadrature()) continue;
        EGFEM_REQUIRE(embedded == nullptr || embedded == s->quadrature_rule(), InvalidArgument,
                      "two different quadrature-embedded spaces in one form");
        embedded = s->quadrature_rule();
    }
    if (embedded) return *embedded;
    return dunavant_rule(std::max(1, quad_degree));
}

// Local basis of a space at the points of a rule. For an embedded space the
// basis is the quadrature-weighted delta, whose action at point q is the
// selector e_q (the weight is applied with the rule).
struct Tab {
    int n = 0;
    std::vector<double> val;
    std::vector<Vec2> grad;

    [[nodiscard]] const double* values(int q) const { return val.data() + static_cast<std::size_t>(q) * n; }
    [[nodiscard]] const Vec2* grads(int q) const { return grad.data() + static_cast<std::size_t>(q) * n; }
};

Tab tabulate(const FunctionSpace& s, const QuadratureRule& rule) {
    Tab tab;
    tab.n = s.local_size();
    const int nq = rule.size();
    tab.val.assign(static_cast<std::size_t>(nq) * tab.n, 0.0);
    tab.grad.assign(static_cast<std::size_t>(nq) * tab.n, Vec2::Zero());
    if (s.family().is_quadrature()) {
        for (int q = 0; q < nq; ++q) tab.val[static_cast<std::size_t>(q) * tab.n + q] = 1.0;
        return tab;
    }
    for (int q = 0; q < nq; ++q) {
        eval_basis(s.family(), rule.points[q], {tab.val.data() + static_cast<std::size_t>(q) * tab.n, std::size_t(tab.n)},
                   {tab.grad.data() + static_cast<std::size_t>(q) * tab.n, std::size_t(tab.n)});
    }
    return tab;
}

void physical_grads(const ElementGeometry& geo, const Vec2* ref, int n, Vec2* out) {
    for (int i = 0; i < n; ++i) out[i] = geo.inverse_transpose * ref[i];
}

SparseMatrix from_triplets(int rows, int cols, const std::vector<Triplet>& triplets) {
    SparseMatrix m(rows, cols);
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.makeCompressed();
    return m;
}

}  // namespace

std::uint64_t quadrature_evaluations() { return g_quadrature_evaluations.load(); }
void reset_quadrature_evaluations() { g_quadrature_evaluations = 0; }

int product_degree(std::initializer_list<int> degrees) {
    int sum = 0;
    for (int d : degrees) sum += std::max(0, d);
    return std::clamp(sum, 1, kMaxQuadratureDegree);
}

DirichletBC make_dirichlet(const FunctionSpace& V, const ScalarField& u_D) {
    DirichletBC bc;
    bc.dofs = V.dirichlet_dofs();
    bc.values.reserve(bc.dofs.size());
    for (int d : bc.dofs) bc.values.push_back(u_D(V.dof_coords()[d]));
    return bc;
}

SparseMatrix assemble_stiffness(const FunctionSpace& V, int quad_degree) {
    require_gradient(V, "assemble_stiffness");
    const QuadratureRule& rule = select_rule({&V}, quad_degree);
    const Tab tv = tabulate(V, rule);
    const Mesh& mesh = V.mesh();
    const int n = tv.n;
    std::vector<Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(mesh.num_triangles()) * n * n);
    std::vector<Vec2> g(n);
    Eigen::MatrixXd local(n, n);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const ElementGeometry geo = element_geometry(mesh, t);
        local.setZero();
        for (int q = 0; q < rule.size(); ++q) {
            const double w = rule.weights[q] * geo.area;
            physical_grads(geo, tv.grads(q), n, g.data());
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) local(i, j) += w * g[j].dot(g[i]);
        }
        const auto dofs = V.cell_dofs(t);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) triplets.emplace_back(dofs[i], dofs[j], local(i, j));
    }
    return from_triplets(V.n_dofs(), V.n_dofs(), triplets);
}

SparseMatrix assemble_mass(const FunctionSpace& V, const FunctionSpace& W, int quad_degree) {
    require_same_mesh(V, W);
    require_lagrange(V, "assemble_mass (test space)");
    const QuadratureRule& rule = select_rule({&V, &W}, quad_degree);
    const Tab tv = tabulate(V, rule), tw = tabulate(W, rule);
    const Mesh& mesh = V.mesh();
    std::vector<Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(mesh.num_triangles()) * tv.n * tw.n);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const double area = mesh.area(t);
        const auto vd = V.cell_dofs(t), wd = W.cell_dofs(t);
        for (int q = 0; q < rule.size(); ++q) {
            const double w = rule.weights[q] * area;
            const double* pv = tv.values(q);
            const double* pw = tw.values(q);
            for (int j = 0; j < tw.n; ++j) {
                if (pw[j] == 0.0) continue;
                for (int i = 0; i < tv.n; ++i) triplets.emplace_back(vd[i], wd[j], w * pw[j] * pv[i]);
            }
        }
    }
    return from_triplets(V.n_dofs(), W.n_dofs(), triplets);
}

SparseTensor3 assemble_trilinear_stiffness(const FunctionSpace& V, const FunctionSpace& Wb, const FunctionSpace& Wa,
                                           int quad_degree) {
    require_same_mesh(V, Wb);
    require_same_mesh(V, Wa);
    require_gradient(V, "assemble_trilinear_stiffness (test space)");
    require_gradient(Wb, "assemble_trilinear_stiffness (W_b)");
    const QuadratureRule& rule = select_rule({&V, &Wb, &Wa}, quad_degree);
    const Tab tv = tabulate(V, rule), tb = tabulate(Wb, rule), ta = tabulate(Wa, rule);
    const Mesh& mesh = V.mesh();
    std::vector<TensorEntry> entries;
    std::vector<Vec2> gv(tv.n), gb(tb.n);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const ElementGeometry geo = element_geometry(mesh, t);
        const auto vd = V.cell_dofs(t), bd = Wb.cell_dofs(t), ad = Wa.cell_dofs(t);
        for (int q = 0; q < rule.size(); ++q) {
            const double w = rule.weights[q] * geo.area;
            physical_grads(geo, tv.grads(q), tv.n, gv.data());
            physical_grads(geo, tb.grads(q), tb.n, gb.data());
            const double* pa = ta.values(q);
            for (int k = 0; k < ta.n; ++k) {
                if (pa[k] == 0.0) continue;
                for (int i = 0; i < tv.n; ++i)
                    for (int j = 0; j < tb.n; ++j)
                        entries.push_back({vd[i], bd[j], ad[k], w * pa[k] * gb[j].dot(gv[i])});
            }
        }
    }
    return SparseTensor3({V.n_dofs(), Wb.n_dofs(), Wa.n_dofs()}, std::move(entries));
}

SparseTensor3 assemble_weighted_stiffness_tensor(const FunctionSpace& V, const FunctionSpace& Wa, int quad_degree) {
    return assemble_trilinear_stiffness(V, V, Wa, quad_degree);
}

SparseTensor3 assemble_mass_trilinear(const FunctionSpace& V, const FunctionSpace& W, int quad_degree) {
    require_same_mesh(V, W);
    require_lagrange(V, "assemble_mass_trilinear (test space)");
    const QuadratureRule& rule = select_rule({&V, &W}, quad_degree);
    const Tab tv = tabulate(V, rule), tw = tabulate(W, rule);
    const Mesh& mesh = V.mesh();
    std::vector<TensorEntry> entries;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const double area = mesh.area(t);
        const auto vd = V.cell_dofs(t), wd = W.cell_dofs(t);
        for (int q = 0; q < rule.size(); ++q) {
            const double w = rule.weights[q] * area;
            const double* pv = tv.values(q);
            const double* pw = tw.values(q);
            for (int k = 0; k < tw.n; ++k) {
                if (pw[k] == 0.0) continue;
                for (int i = 0; i < tv.n; ++i)
                    for (int j = 0; j < tv.n; ++j) entries.push_back({vd[i], vd[j], wd[k], w * pw[k] * pv[j] * pv[i]});
            }
        }
    }
    return SparseTensor3({V.n_dofs(), V.n_dofs(), W.n_dofs()}, std::move(entries));
}

SparseMatrix assemble_directional_derivative(const FunctionSpace& V, const FunctionSpace& W, int quad_degree) {
    require_same_mesh(V, W);
    require_gradient(V, "assemble_directional_derivative (test space)");
    const QuadratureRule& rule = select_rule({&V, &W}, quad_degree);
    const Tab tv = tabulate(V, rule), tw = tabulate(W, rule);
    const Mesh& mesh = V.mesh();
    std::vector<Triplet> triplets;
    std::vector<Vec2> gv(tv.n);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const ElementGeometry geo = element_geometry(mesh, t);
        const auto vd = V.cell_dofs(t), wd = W.cell_dofs(t);
        for (int q = 0; q < rule.size(); ++q) {
            const double w = rule.weights[q] * geo.area;
            physical_grads(geo, tv.grads(q), tv.n, gv.data());
            const double* pw = tw.values(q);
            for (int j = 0; j < tw.n; ++j) {
                if (pw[j] == 0.0) continue;
                for (int i = 0; i < tv.n; ++i) triplets.emplace_back(vd[i], wd[j], w * pw[j] * (gv[i][0] + gv[i][1]));
            }
        }
    }
    return from_triplets(V.n_dofs(), W.n_dofs(), triplets);
}

SparseTensor3 assemble_directional_derivative_tensor(const FunctionSpace& V, int quad_degree) {
    require_gradient(V, "assemble_directional_derivative_tensor");
    const QuadratureRule& rule = select_rule({&V}, quad_degree);
    const Tab tv = tabulate(V, rule);
    const Mesh& mesh = V.mesh();
    const int n = tv.n;
    std::vector<TensorEntry> entries;
    std::vector<Vec2> gv(n);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const ElementGeometry geo = element_geometry(mesh, t);
        const auto vd = V.cell_dofs(t);
        for (int q = 0; q < rule.size(); ++q) {
            const double w = rule.weights[q] * geo.area;
            physical_grads(geo, tv.grads(q), n, gv.data());
            const double* pv = tv.values(q);
            for (int i = 0; i < n; ++i) {
                const double di = w * (gv[i][0] + gv[i][1]);
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k) entries.push_back({vd[i], vd[j], vd[k], di * pv[j] * pv[k]});
            }
        }
    }
    return SparseTensor3({V.n_dofs(), V.n_dofs(), V.n_dofs()}, std::move(entries));
}

SparseMatrix assemble_boundary_mass(const FunctionSpace& V, const FunctionSpace& Wg, BoundaryTag tag) {
    require_same_mesh(V, Wg);
    require_lagrange(V, "assemble_boundary_mass");
    require_lagrange(Wg, "assemble_boundary_mass");
    const Mesh& mesh = V.mesh();
    const LineRule line = gauss_line_rule(V.family().degree() + Wg.family().degree());
    std::vector<Triplet> triplets;
    std::array<double, 10> pv{}, pw{};
    std::array<Vec2, 10> scratch{};
    for (int b = 0; b < static_cast<int>(mesh.boundary_edges().size()); ++b) {
        if (mesh.boundary_edges()[b].tag != tag) continue;
        const auto [t, l] = mesh.boundary_edge_owner(b);
        const auto& tri = mesh.triangles()[t];
        const double length = (mesh.vertices()[tri[(l + 1) % 3]] - mesh.vertices()[tri[l]]).norm();
        const auto vd = V.cell_dofs(t), wd = Wg.cell_dofs(t);
        for (std::size_t q = 0; q < line.points.size(); ++q) {
            Barycentric p{0.0, 0.0, 0.0};
            p[l] = 1.0 - line.points[q];
            p[(l + 1) % 3] = line.points[q];
            const int nv = eval_basis(V.family(), p, pv, scratch);
            const int nw = eval_basis(Wg.family(), p, pw, scratch);
            const double w = line.weights[q] * length;
            for (int i = 0; i < nv; ++i)
                for (int j = 0; j < nw; ++j)
                    if (pv[i] != 0.0 && pw[j] != 0.0) triplets.emplace_back(vd[i], wd[j], w * pw[j] * pv[i]);
        }
    }
    return from_triplets(V.n_dofs(), Wg.n_dofs(), triplets);
}

DenseVector assemble_load(const FunctionSpace& V, const ScalarField& f, int quad_degree) {
    require_lagrange(V, "assemble_load");
    const QuadratureRule& rule = select_rule({&V}, quad_degree);
    const Tab tv = tabulate(V, rule);
    const Mesh& mesh = V.mesh();
    DenseVector out = DenseVector::Zero(V.n_dofs());
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const ElementGeometry geo = element_geometry(mesh, t);
        const auto vd = V.cell_dofs(t);
        for (int q = 0; q < rule.size(); ++q) {
            const double fw = rule.weights[q] * geo.area * f(geo.map(rule.points[q]));
            const double* pv = tv.values(q);
            for (int i = 0; i < tv.n; ++i) out[vd[i]] += fw * pv[i];
        }
    }
    return out;
}

SparseMatrix interp_matrix(const FunctionSpace& V, const FunctionSpace& W) {
    require_same_mesh(V, W);
    require_lagrange(V, "interp_matrix");
    std::vector<Triplet> triplets;
    std::array<double, 10> pv{};
    std::array<Vec2, 10> pg{};
    for (int d = 0; d < W.n_dofs(); ++d) {
        const int t = W.dof_owner(d);
        const int n = eval_basis(V.family(), W.dof_reference(d), pv, pg);
        const auto vd = V.cell_dofs(t);
        for (int j = 0; j < n; ++j)
            if (pv[j] != 0.0) triplets.emplace_back(d, vd[j], pv[j]);
    }
    return from_triplets(W.n_dofs(), V.n_dofs(), triplets);
}

std::array<SparseMatrix, 2> interp_grad_matrices(const FunctionSpace& V, const FunctionSpace& W) {
    require_same_mesh(V, W);
    require_lagrange(V, "interp_grad_matrices");
    std::array<std::vector<Triplet>, 2> triplets;
    std::array<double, 10> pv{};
    std::array<Vec2, 10> pg{};
    const Mesh& mesh = V.mesh();
    for (int d = 0; d < W.n_dofs(); ++d) {
        const int t = W.dof_owner(d);
        const ElementGeometry geo = element_geometry(mesh, t);
        const int n = eval_basis(V.family(), W.dof_reference(d), pv, pg);
        const auto vd = V.cell_dofs(t);
        for (int j = 0; j < n; ++j) {
            const Vec2 g = geo.physical_gradient(pg[j]);
            for (int c = 0; c < 2; ++c)
                if (g[c] != 0.0) triplets[c].emplace_back(d, vd[j], g[c]);
        }
    }
    return {from_triplets(W.n_dofs(), V.n_dofs(), triplets[0]), from_triplets(W.n_dofs(), V.n_dofs(), triplets[1])};
}

SparseTensor3 interp_grad_tensor(const FunctionSpace& V, const FunctionSpace& W) {
    const auto slices = interp_grad_matrices(V, W);
    std::vector<TensorEntry> entries;
    for (int c = 0; c < 2; ++c)
        for (int r = 0; r < slices[c].outerSize(); ++r)
            for (SparseMatrix::InnerIterator it(slices[c], r); it; ++it)
                entries.push_back({c, static_cast<int>(it.col()), r, it.value()});
    return SparseTensor3({2, V.n_dofs(), W.n_dofs()}, std::move(entries));
}

// ---------------------------------------------------------------------------

SgaAssembler::SgaAssembler(std::shared_ptr<const FunctionSpace> V, int quad_degree) : V_(std::move(V)) {
    EGFEM_REQUIRE(V_ != nullptr, InvalidArgument, "SgaAssembler: null space");
    require_gradient(*V_, "SgaAssembler");
    rule_ = &dunavant_rule(std::max(1, quad_degree));
    n_loc_ = V_->local_size();
    const Tab tab = tabulate(*V_, *rule_);
    ref_values_ = tab.val;
    ref_grads_ = tab.grad;

    const Mesh& mesh = V_->mesh();
    const int nt = mesh.num_triangles();
    std::vector<Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(nt) * n_loc_ * n_loc_);
    for (int t = 0; t < nt; ++t) {
        const auto d = V_->cell_dofs(t);
        for (int i = 0; i < n_loc_; ++i)
            for (int j = 0; j < n_loc_; ++j) triplets.emplace_back(d[i], d[j], 0.0);
    }
    pattern_ = from_triplets(V_->n_dofs(), V_->n_dofs(), triplets);
    slots_.resize(static_cast<std::size_t>(nt) * n_loc_ * n_loc_);
    for (int t = 0; t < nt; ++t) {
        const auto d = V_->cell_dofs(t);
        for (int i = 0; i < n_loc_; ++i)
            for (int j = 0; j < n_loc_; ++j)
                slots_[(static_cast<std::size_t>(t) * n_loc_ + i) * n_loc_ + j] = find_slot(pattern_, d[i], d[j]);
    }
}

template <class Body>
void SgaAssembler::for_each_point(const DenseVector& u, bool need_grad, Body&& body) const {
    EGFEM_REQUIRE(u.size() == V_->n_dofs(), DimensionMismatch, "SgaAssembler: coefficient vector length mismatch");
    const Mesh& mesh = V_->mesh();
    const int n = n_loc_, nq = rule_->size();
    std::array<Vec2, 10> g{};
    std::array<double, 10> ul{};
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const ElementGeometry geo = element_geometry(mesh, t);
        const auto d = V_->cell_dofs(t);
        for (int i = 0; i < n; ++i) ul[i] = u[d[i]];
        for (int q = 0; q < nq; ++q) {
            const double* pv = ref_values_.data() + static_cast<std::size_t>(q) * n;
            const Vec2* rg = ref_grads_.data() + static_cast<std::size_t>(q) * n;
            Point p;
            p.u = 0.0;
            p.grad.setZero();
            for (int i = 0; i < n; ++i) {
                g[i] = geo.inverse_transpose * rg[i];
                p.u += ul[i] * pv[i];
                if (need_grad) p.grad += ul[i] * g[i];
            }
            p.x = geo.map(rule_->points[q]);
            body(t, rule_->weights[q] * geo.area, pv, g.data(), p);
        }
    }
    g_quadrature_evaluations += static_cast<std::uint64_t>(mesh.num_triangles()) * nq;
}

void SgaAssembler::add_weighted_stiffness(const PointwiseFn& a, const DenseVector& u, std::span<double> values,
                                          double scale) const {
    const int n = n_loc_;
    for_each_point(u, a.uses_gradient, [&](int t, double w, const double*, const Vec2* g, const Point& p) {
        const double s = scale * w * a(p.u, p.grad, p.x);
        const int* slot = slots_.data() + static_cast<std::size_t>(t) * n * n;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) values[slot[i * n + j]] += s * g[j].dot(g[i]);
    });
}

void SgaAssembler::add_weighted_mass(const PointwiseFn& c, const DenseVector& u, std::span<double> values,
                                     double scale) const {
    const int n = n_loc_;
    for_each_point(u, c.uses_gradient, [&](int t, double w, const double* pv, const Vec2*, const Point& p) {
        const double s = scale * w * c(p.u, p.grad, p.x);
        const int* slot = slots_.data() + static_cast<std::size_t>(t) * n * n;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) values[slot[i * n + j]] += s * pv[j] * pv[i];
    });
}

void SgaAssembler::add_nonlinear_vector(const PointwiseFn& c, const DenseVector& u, DenseVector& out,
                                        double scale) const {
    EGFEM_REQUIRE(out.size() == V_->n_dofs(), DimensionMismatch, "add_nonlinear_vector: output length mismatch");
    const int n = n_loc_;
    for_each_point(u, c.uses_gradient, [&](int t, double w, const double* pv, const Vec2*, const Point& p) {
        const double s = scale * w * c(p.u, p.grad, p.x);
        const auto d = V_->cell_dofs(t);
        for (int i = 0; i < n; ++i) out[d[i]] += s * pv[i];
    });
}

void SgaAssembler::add_convection_vector(const PointwiseFn& f, const DenseVector& u, DenseVector& out,
                                         double scale) const {
    EGFEM_REQUIRE(out.size() == V_->n_dofs(), DimensionMismatch, "add_convection_vector: output length mismatch");
    const int n = n_loc_;
    for_each_point(u, f.uses_gradient, [&](int t, double w, const double*, const Vec2* g, const Point& p) {
        const double s = scale * w * f(p.u, p.grad, p.x);
        const auto d = V_->cell_dofs(t);
        for (int i = 0; i < n; ++i) out[d[i]] += s * (g[i][0] + g[i][1]);
    });
}

SparseMatrix SgaAssembler::make_matrix(std::span<const double> values) const {
    EGFEM_REQUIRE(static_cast<Eigen::Index>(values.size()) == pattern_.nonZeros(), DimensionMismatch,
                  "make_matrix: value count mismatch");
    SparseMatrix m = pattern_;
    std::copy(values.begin(), values.end(), m.valuePtr());
    return m;
}

SparseMatrix sga_weighted_stiffness(std::shared_ptr<const FunctionSpace> V, const PointwiseFn& a,
                                    const DenseVector& u, int quad_degree) {
    SgaAssembler as(std::move(V), quad_degree);
    std::vector<double> values(as.pattern().nonZeros(), 0.0);
    as.add_weighted_stiffness(a, u, values);
    return as.make_matrix(values);
}

SparseMatrix sga_weighted_mass(std::shared_ptr<const FunctionSpace> V, const PointwiseFn& c, const DenseVector& u,
                               int quad_degree) {
    SgaAssembler as(std::move(V), quad_degree);
    std::vector<double> values(as.pattern().nonZeros(), 0.0);
    as.add_weighted_mass(c, u, values);
    return as.make_matrix(values);
}

DenseVector sga_nonlinear_vector(std::shared_ptr<const FunctionSpace> V, const PointwiseFn& c,
                                 const DenseVector& u, int quad_degree) {
    SgaAssembler as(V, quad_degree);
    DenseVector out = DenseVector::Zero(V->n_dofs());
    as.add_nonlinear_vector(c, u, out);
    return out;
}

DenseVector sga_convection_vector(std::shared_ptr<const FunctionSpace> V, const PointwiseFn& f,
                                  const DenseVector& u, int quad_degree) {
    SgaAssembler as(V, quad_degree);
    DenseVector out = DenseVector::Zero(V->n_dofs());
    as.add_convection_vector(f, u, out);
    return out;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<char> constrained_mask(int n, const DirichletBC& bc) {
    EGFEM_REQUIRE(bc.dofs.size() == bc.values.size(), DimensionMismatch, "DirichletBC: dofs/values length mismatch");
    std::vector<char> mask(n, 0);
    for (int d : bc.dofs) {
        EGFEM_REQUIRE(d >= 0 && d < n, InvalidArgument, "DirichletBC: dof " + std::to_string(d) + " out of range");
        EGFEM_REQUIRE(!mask[d], InvalidArgument, "DirichletBC: dof " + std::to_string(d) + " listed twice");
        mask[d] = 1;
    }
    return mask;
}

}  // namespace

std::pair<SparseMatrix, DenseVector> apply_dirichlet(const SparseMatrix& A, const DenseVector& rhs,
                                                     const DirichletBC& bc) {
    EGFEM_REQUIRE(A.rows() == A.cols(), DimensionMismatch, "apply_dirichlet: matrix not square");
    EGFEM_REQUIRE(rhs.size() == A.rows(), DimensionMismatch, "apply_dirichlet: rhs length mismatch");
    const int n = static_cast<int>(A.rows());
    const auto mask = constrained_mask(n, bc);
    std::vector<double> value(n, 0.0);
    for (std::size_t k = 0; k < bc.dofs.size(); ++k) value[bc.dofs[k]] = bc.values[k];

    DenseVector b = rhs;
    std::vector<Triplet> triplets;
    triplets.reserve(A.nonZeros());
    for (int r = 0; r < n; ++r) {
        if (mask[r]) continue;
        for (SparseMatrix::InnerIterator it(A, r); it; ++it) {
            const int c = static_cast<int>(it.col());
            if (mask[c])
                b[r] -= it.value() * value[c];
            else
                triplets.emplace_back(r, c, it.value());
        }
    }
    for (int d : bc.dofs) {
        triplets.emplace_back(d, d, 1.0);
        b[d] = value[d];
    }
    return {from_triplets(n, n, triplets), b};
}

DirichletReduction::DirichletReduction(const SparseMatrix& pattern, const DirichletBC& bc) {
    EGFEM_REQUIRE(pattern.rows() == pattern.cols(), DimensionMismatch, "DirichletReduction: pattern not square");
    EGFEM_REQUIRE(pattern.isCompressed(), InvalidArgument, "DirichletReduction: pattern must be compressed");
    n_full_ = static_cast<int>(pattern.rows());
    const auto mask = constrained_mask(n_full_, bc);
    dirichlet_value_.assign(n_full_, 0.0);
    for (std::size_t k = 0; k < bc.dofs.size(); ++k) dirichlet_value_[bc.dofs[k]] = bc.values[k];

    std::vector<int> reduced_index(n_full_, -1);
    for (int i = 0; i < n_full_; ++i) {
        if (mask[i]) continue;
        reduced_index[i] = static_cast<int>(free_.size());
        free_.push_back(i);
    }
    std::vector<Triplet> triplets;
    for (int r : free_)
        for (SparseMatrix::InnerIterator it(pattern, r); it; ++it)
            if (!mask[it.col()]) triplets.emplace_back(reduced_index[r], reduced_index[it.col()], 0.0);
    reduced_ = from_triplets(n_free(), n_free(), triplets);

    const int* outer = pattern.outerIndexPtr();
    const int* inner = pattern.innerIndexPtr();
    for (int r : free_) {
        for (int s = outer[r]; s < outer[r + 1]; ++s) {
            const int c = inner[s];
            if (mask[c])
                coupling_.push_back({s, reduced_index[r], c});
            else
                keep_.emplace_back(s, find_slot(reduced_, reduced_index[r], reduced_index[c]));
        }
    }
}

void DirichletReduction::reduce_matrix(std::span<const double> full, std::span<double> reduced) const {
    for (const auto& [from, to] : keep_) reduced[to] = full[from];
}

DenseVector DirichletReduction::reduce_rhs(std::span<const double> full, const DenseVector& rhs) const {
    EGFEM_REQUIRE(rhs.size() == n_full_, DimensionMismatch, "reduce_rhs: length mismatch");
    DenseVector out(n_free());
    for (int k = 0; k < n_free(); ++k) out[k] = rhs[free_[k]];
    for (const auto& [slot, row, col] : coupling_) out[row] -= full[slot] * dirichlet_value_[col];
    return out;
}

DenseVector DirichletReduction::expand(const DenseVector& free_values) const {
    EGFEM_REQUIRE(free_values.size() == n_free(), DimensionMismatch, "expand: length mismatch");
    DenseVector out(n_full_);
    for (int i = 0; i < n_full_; ++i) out[i] = dirichlet_value_[i];
    for (int k = 0; k < n_free(); ++k) out[free_[k]] = free_values[k];
    return out;
}

}  // namespace egfem

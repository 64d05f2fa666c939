#include "egfem/solver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstring>

namespace egfem {

namespace {

using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

// A symmetric row-major matrix has the same arrays as its column-major form.
ColMatrix as_column_major_symmetric(const SparseMatrix& A) {
    return Eigen::Map<const ColMatrix>(A.rows(), A.cols(), A.nonZeros(), A.outerIndexPtr(), A.innerIndexPtr(),
                                       A.valuePtr());
}

void require_finite(const DenseVector& x) {
    EGFEM_REQUIRE(x.allFinite(), SingularMatrix, "linear solve produced non-finite values");
}

}  // namespace

struct LinearSolver::Impl {
    Kind kind;
    Eigen::SimplicialLDLT<ColMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;
    Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>> lu;
    std::vector<int> outer, inner;
    std::vector<double> values;
    bool analyzed = false, factored = false;
    int analyses = 0, factorizations = 0;

    bool same_pattern(const SparseMatrix& A) const {
        return analyzed && outer.size() == static_cast<std::size_t>(A.outerSize() + 1) &&
               inner.size() == static_cast<std::size_t>(A.nonZeros()) &&
               std::equal(outer.begin(), outer.end(), A.outerIndexPtr()) &&
               std::equal(inner.begin(), inner.end(), A.innerIndexPtr());
    }
    bool same_values(const SparseMatrix& A) const {
        return factored && std::memcmp(values.data(), A.valuePtr(), values.size() * sizeof(double)) == 0;
    }
};

LinearSolver::LinearSolver(Kind kind) : impl_(std::make_unique<Impl>()) { impl_->kind = kind; }
LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

int LinearSolver::analyses() const { return impl_->analyses; }
int LinearSolver::factorizations() const { return impl_->factorizations; }

DenseVector LinearSolver::solve(const SparseMatrix& A, const DenseVector& b) {
    EGFEM_REQUIRE(A.rows() == A.cols(), DimensionMismatch, "solve: matrix not square");
    EGFEM_REQUIRE(b.size() == A.rows(), DimensionMismatch, "solve: rhs length mismatch");
    EGFEM_REQUIRE(A.isCompressed(), InvalidArgument, "solve: matrix must be compressed");
    Impl& s = *impl_;
    if (A.rows() == 0) return DenseVector(0);

    const bool pattern_ok = s.same_pattern(A);
    const bool values_ok = pattern_ok && s.same_values(A);
    if (!values_ok) {
        const ColMatrix Ac = s.kind == Kind::SymmetricLDLT ? as_column_major_symmetric(A) : ColMatrix(A);
        if (!pattern_ok) {
            if (s.kind == Kind::SymmetricLDLT)
                s.ldlt.analyzePattern(Ac);
            else
                s.lu.analyzePattern(Ac);
            s.outer.assign(A.outerIndexPtr(), A.outerIndexPtr() + A.outerSize() + 1);
            s.inner.assign(A.innerIndexPtr(), A.innerIndexPtr() + A.nonZeros());
            s.analyzed = true;
            ++s.analyses;
        }
        s.factored = false;
        if (s.kind == Kind::SymmetricLDLT) {
            s.ldlt.factorize(Ac);
            EGFEM_REQUIRE(s.ldlt.info() == Eigen::Success, SingularMatrix, "LDLT factorization failed");
            const auto& D = s.ldlt.vectorD();
            const double scale = D.cwiseAbs().maxCoeff();
            EGFEM_REQUIRE(D.allFinite() && scale > 0.0 && D.cwiseAbs().minCoeff() > 1e-14 * scale, SingularMatrix,
                          "matrix is singular to working precision");
        } else {
            s.lu.factorize(Ac);
            EGFEM_REQUIRE(s.lu.info() == Eigen::Success, SingularMatrix, "LU factorization failed: " + s.lu.lastErrorMessage());
        }
        s.values.assign(A.valuePtr(), A.valuePtr() + A.nonZeros());
        s.factored = true;
        ++s.factorizations;
    }
    DenseVector x = s.kind == Kind::SymmetricLDLT ? DenseVector(s.ldlt.solve(b)) : DenseVector(s.lu.solve(b));
    require_finite(x);
    return x;
}

DenseVector solve_linear(const SparseMatrix& A, const DenseVector& b) {
    SparseMatrix Ac = A;
    Ac.makeCompressed();
    LinearSolver solver(LinearSolver::Kind::LU);
    return solver.solve(Ac, b);
}

}  // namespace egfem

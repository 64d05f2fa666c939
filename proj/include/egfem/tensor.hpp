#pragma once

#include "egfem/common.hpp"

#include <Eigen/Sparse>

#include <array>
#include <span>
#include <vector>

namespace egfem {

using DenseVector = Eigen::VectorXd;
/// Row-compressed, sorted, duplicate-free.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using Triplet = Eigen::Triplet<double, int>;

struct TensorEntry {
    int i = 0;
    int j = 0;
    int k = 0;
    double value = 0.0;
};

/// Third-order sparse tensor in coordinate format, lexicographically sorted by
/// (i, j, k) with duplicates merged at construction.
class SparseTensor3 {
public:
    SparseTensor3() = default;
    SparseTensor3(std::array<int, 3> dims, std::vector<TensorEntry> entries);

    [[nodiscard]] const std::array<int, 3>& dims() const { return dims_; }
    [[nodiscard]] std::size_t nnz() const { return values_.size(); }
    [[nodiscard]] std::span<const int> i() const { return i_; }
    [[nodiscard]] std::span<const int> j() const { return j_; }
    [[nodiscard]] std::span<const int> k() const { return k_; }
    [[nodiscard]] std::span<const double> values() const { return values_; }

private:
    std::array<int, 3> dims_{0, 0, 0};
    std::vector<int> i_, j_, k_;
    std::vector<double> values_;
};

/// (T . v)_ij = sum_k T_ijk v_k, shape (n1, n2).
SparseMatrix t3_contract_mode3(const SparseTensor3& t, const DenseVector& v);
/// (T ._2 v)_ik = sum_j T_ijk v_j, shape (n1, n3).
SparseMatrix t3_contract_mode2(const SparseTensor3& t, const DenseVector& v);
/// (T : (w (x) v))_i = sum_jk T_ijk w_j v_k, without forming w (x) v.
DenseVector t3_double_contract(const SparseTensor3& t, const DenseVector& w, const DenseVector& v);
DenseVector hadamard(const DenseVector& v, const DenseVector& w);

/// Union of the sparsity patterns of equally sized matrices, values zero.
SparseMatrix pattern_union(std::span<const SparseMatrix* const> matrices);
/// Pattern of the (i, j) pairs of a tensor, values zero.
SparseMatrix mode3_pattern(const SparseTensor3& t);

/// Repeated mode-3 contraction into a fixed target pattern. The slot of every
/// tensor entry is resolved once, so each contraction is a single pass over
/// the nonzeros accumulating in sorted-coordinate order.
class Mode3Scatter {
public:
    Mode3Scatter(const SparseTensor3& tensor, const SparseMatrix& pattern);
    /// values[slot] += sum_k T_ijk v_k for the entries of the tensor.
    void accumulate(const DenseVector& v, std::span<double> values, double scale = 1.0) const;

private:
    std::vector<int> k_;
    std::vector<double> values_;
    std::vector<int> slots_;
};

/// Scatter of a fixed matrix into a target pattern containing it.
class MatrixScatter {
public:
    MatrixScatter(const SparseMatrix& source, const SparseMatrix& pattern);
    void accumulate(std::span<double> values, double scale = 1.0) const;

private:
    std::vector<double> source_values_;
    std::vector<int> slots_;
};

/// Slot of entry (row, col) in a compressed row-major matrix, or -1.
int find_slot(const SparseMatrix& pattern, int row, int col);

}  // namespace egfem

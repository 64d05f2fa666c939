#include "egfem/tensor.hpp"

#include <algorithm>
#include <tuple>
#include <string>

namespace egfem {

namespace {

std::string dims_string(const std::array<int, 3>& d) {
    return "(" + std::to_string(d[0]) + "," + std::to_string(d[1]) + "," + std::to_string(d[2]) + ")";
}

void require_length(const DenseVector& v, int n, const char* what) {
    EGFEM_REQUIRE(v.size() == n, DimensionMismatch,
                  std::string(what) + ": vector length " + std::to_string(v.size()) + " != " + std::to_string(n));
}

}  // namespace

SparseTensor3::SparseTensor3(std::array<int, 3> dims, std::vector<TensorEntry> entries) : dims_(dims) {
    for (const auto& e : entries) {
        EGFEM_REQUIRE(e.i >= 0 && e.i < dims[0] && e.j >= 0 && e.j < dims[1] && e.k >= 0 && e.k < dims[2],
                      DimensionMismatch,
                      "tensor entry (" + std::to_string(e.i) + "," + std::to_string(e.j) + "," + std::to_string(e.k) +
                          ") outside dims " + dims_string(dims));
    }
    // Ties broken by value so the merged sums do not depend on insertion order.
    std::sort(entries.begin(), entries.end(), [](const TensorEntry& a, const TensorEntry& b) {
        return std::tie(a.i, a.j, a.k, a.value) < std::tie(b.i, b.j, b.k, b.value);
    });
    i_.reserve(entries.size());
    j_.reserve(entries.size());
    k_.reserve(entries.size());
    values_.reserve(entries.size());
    for (const auto& e : entries) {
        if (!i_.empty() && i_.back() == e.i && j_.back() == e.j && k_.back() == e.k) {
            values_.back() += e.value;
            continue;
        }
        i_.push_back(e.i);
        j_.push_back(e.j);
        k_.push_back(e.k);
        values_.push_back(e.value);
    }
}

SparseMatrix t3_contract_mode3(const SparseTensor3& t, const DenseVector& v) {
    require_length(v, t.dims()[2], "t3_contract_mode3");
    const SparseMatrix pattern = mode3_pattern(t);
    Mode3Scatter scatter(t, pattern);
    SparseMatrix out = pattern;
    scatter.accumulate(v, {out.valuePtr(), static_cast<std::size_t>(out.nonZeros())});
    return out;
}

SparseMatrix t3_contract_mode2(const SparseTensor3& t, const DenseVector& v) {
    require_length(v, t.dims()[1], "t3_contract_mode2");
    std::vector<Triplet> triplets;
    triplets.reserve(t.nnz());
    const auto ti = t.i(), tj = t.j(), tk = t.k();
    const auto tv = t.values();
    for (std::size_t e = 0; e < t.nnz(); ++e) triplets.emplace_back(ti[e], tk[e], tv[e] * v[tj[e]]);
    // Triplets within a row are already ordered by (j, k); setFromTriplets sums
    // duplicates in that order.
    SparseMatrix out(t.dims()[0], t.dims()[2]);
    out.setFromTriplets(triplets.begin(), triplets.end());
    return out;
}

DenseVector t3_double_contract(const SparseTensor3& t, const DenseVector& w, const DenseVector& v) {
    require_length(w, t.dims()[1], "t3_double_contract (w)");
    require_length(v, t.dims()[2], "t3_double_contract (v)");
    DenseVector out = DenseVector::Zero(t.dims()[0]);
    const auto ti = t.i(), tj = t.j(), tk = t.k();
    const auto tv = t.values();
    for (std::size_t e = 0; e < t.nnz(); ++e) out[ti[e]] += tv[e] * w[tj[e]] * v[tk[e]];
    return out;
}

DenseVector hadamard(const DenseVector& v, const DenseVector& w) {
    EGFEM_REQUIRE(v.size() == w.size(), DimensionMismatch, "hadamard: length mismatch");
    return v.cwiseProduct(w);
}

SparseMatrix pattern_union(std::span<const SparseMatrix* const> matrices) {
    EGFEM_REQUIRE(!matrices.empty(), InvalidArgument, "pattern_union: no matrices");
    const int rows = static_cast<int>(matrices.front()->rows());
    const int cols = static_cast<int>(matrices.front()->cols());
    std::vector<Triplet> triplets;
    for (const SparseMatrix* m : matrices) {
        EGFEM_REQUIRE(m->rows() == rows && m->cols() == cols, DimensionMismatch, "pattern_union: shape mismatch");
        for (int r = 0; r < rows; ++r)
            for (SparseMatrix::InnerIterator it(*m, r); it; ++it) triplets.emplace_back(r, it.col(), 0.0);
    }
    SparseMatrix out(rows, cols);
    out.setFromTriplets(triplets.begin(), triplets.end());
    out.makeCompressed();
    return out;
}

SparseMatrix mode3_pattern(const SparseTensor3& t) {
    std::vector<Triplet> triplets;
    triplets.reserve(t.nnz());
    const auto ti = t.i(), tj = t.j();
    for (std::size_t e = 0; e < t.nnz(); ++e) {
        if (e > 0 && ti[e] == ti[e - 1] && tj[e] == tj[e - 1]) continue;
        triplets.emplace_back(ti[e], tj[e], 0.0);
    }
    SparseMatrix out(t.dims()[0], t.dims()[1]);
    out.setFromTriplets(triplets.begin(), triplets.end());
    out.makeCompressed();
    return out;
}

int find_slot(const SparseMatrix& pattern, int row, int col) {
    const int* outer = pattern.outerIndexPtr();
    const int* inner = pattern.innerIndexPtr();
    const int* begin = inner + outer[row];
    const int* end = inner + outer[row + 1];
    const int* it = std::lower_bound(begin, end, col);
    if (it == end || *it != col) return -1;
    return static_cast<int>(it - inner);
}

Mode3Scatter::Mode3Scatter(const SparseTensor3& tensor, const SparseMatrix& pattern)
    : k_(tensor.k().begin(), tensor.k().end()), values_(tensor.values().begin(), tensor.values().end()) {
    EGFEM_REQUIRE(pattern.isCompressed(), InvalidArgument, "Mode3Scatter: pattern must be compressed");
    EGFEM_REQUIRE(pattern.rows() == tensor.dims()[0] && pattern.cols() == tensor.dims()[1], DimensionMismatch,
                  "Mode3Scatter: pattern shape does not match tensor");
    slots_.resize(tensor.nnz());
    const auto ti = tensor.i(), tj = tensor.j();
    for (std::size_t e = 0; e < tensor.nnz(); ++e) {
        if (e > 0 && ti[e] == ti[e - 1] && tj[e] == tj[e - 1]) {
            slots_[e] = slots_[e - 1];
            continue;
        }
        slots_[e] = find_slot(pattern, ti[e], tj[e]);
        EGFEM_REQUIRE(slots_[e] >= 0, InvalidArgument, "Mode3Scatter: pattern misses a tensor entry");
    }
}

void Mode3Scatter::accumulate(const DenseVector& v, std::span<double> values, double scale) const {
    const int* k = k_.data();
    const double* tv = values_.data();
    const int* slot = slots_.data();
    double* out = values.data();
    const std::size_t n = slots_.size();
    if (scale == 1.0) {
        for (std::size_t e = 0; e < n; ++e) out[slot[e]] += tv[e] * v[k[e]];
    } else {
        for (std::size_t e = 0; e < n; ++e) out[slot[e]] += scale * tv[e] * v[k[e]];
    }
}

MatrixScatter::MatrixScatter(const SparseMatrix& source, const SparseMatrix& pattern) {
    EGFEM_REQUIRE(source.rows() == pattern.rows() && source.cols() == pattern.cols(), DimensionMismatch,
                  "MatrixScatter: shape mismatch");
    for (int r = 0; r < source.outerSize(); ++r) {
        for (SparseMatrix::InnerIterator it(source, r); it; ++it) {
            const int slot = find_slot(pattern, r, static_cast<int>(it.col()));
            EGFEM_REQUIRE(slot >= 0, InvalidArgument, "MatrixScatter: pattern misses a matrix entry");
            slots_.push_back(slot);
            source_values_.push_back(it.value());
        }
    }
}

void MatrixScatter::accumulate(std::span<double> values, double scale) const {
    for (std::size_t e = 0; e < slots_.size(); ++e) values[slots_[e]] += scale * source_values_[e];
}

}  // namespace egfem

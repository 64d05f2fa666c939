#include "egfem/tensor.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace egfem;

namespace {

struct Dense3 {
    std::array<int, 3> d;
    std::vector<double> v;
    double& at(int i, int j, int k) { return v[(static_cast<std::size_t>(i) * d[1] + j) * d[2] + k]; }
};

struct RandomTensor {
    SparseTensor3 sparse;
    Dense3 dense;
};

RandomTensor random_tensor(std::mt19937& rng, int max_dim = 12, int max_nnz = 60) {
    std::uniform_int_distribution<int> dim(1, max_dim);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const std::array<int, 3> d{dim(rng), dim(rng), dim(rng)};
    Dense3 D{d, std::vector<double>(static_cast<std::size_t>(d[0]) * d[1] * d[2], 0.0)};
    std::vector<TensorEntry> e;
    const int nnz = std::uniform_int_distribution<int>(0, max_nnz)(rng);
    for (int n = 0; n < nnz; ++n) {
        TensorEntry t{std::uniform_int_distribution<int>(0, d[0] - 1)(rng),
                      std::uniform_int_distribution<int>(0, d[1] - 1)(rng),
                      std::uniform_int_distribution<int>(0, d[2] - 1)(rng), U(rng)};
        e.push_back(t);
        D.at(t.i, t.j, t.k) += t.value;  // duplicates sum
    }
    return {SparseTensor3(d, e), D};
}

DenseVector random_vector(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    DenseVector v(n);
    for (auto& x : v) x = U(rng);
    return v;
}

}  // namespace

TEST(Tensor, ContractionsMatchDenseOracle) {
    std::mt19937 rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        auto [T, D] = random_tensor(rng);
        const auto d = T.dims();
        const DenseVector w = random_vector(rng, d[1]), v = random_vector(rng, d[2]), y = random_vector(rng, d[1]);
        Eigen::MatrixXd m3 = Eigen::MatrixXd::Zero(d[0], d[1]), m2 = Eigen::MatrixXd::Zero(d[0], d[2]);
        DenseVector dc = DenseVector::Zero(d[0]);
        for (int i = 0; i < d[0]; ++i)
            for (int j = 0; j < d[1]; ++j)
                for (int k = 0; k < d[2]; ++k) {
                    m3(i, j) += D.at(i, j, k) * v[k];
                    m2(i, k) += D.at(i, j, k) * y[j];
                    dc[i] += D.at(i, j, k) * w[j] * v[k];
                }
        EXPECT_LE((Eigen::MatrixXd(t3_contract_mode3(T, v)) - m3).cwiseAbs().maxCoeff(), 1e-14);
        EXPECT_LE((Eigen::MatrixXd(t3_contract_mode2(T, y)) - m2).cwiseAbs().maxCoeff(), 1e-14);
        EXPECT_LE((t3_double_contract(T, w, v) - dc).lpNorm<Eigen::Infinity>(), 1e-14);
    }
}

TEST(Tensor, ContractionIdentitiesOnRandomInstances) {
    // T:(w (x) v) = (T.v) w = (T ._2 w) v
    std::mt19937 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        auto [T, D] = random_tensor(rng, 20, 200);
        const auto d = T.dims();
        const DenseVector w = random_vector(rng, d[1]), v = random_vector(rng, d[2]);
        const DenseVector a = t3_double_contract(T, w, v);
        EXPECT_LE((a - t3_contract_mode3(T, v) * w).lpNorm<Eigen::Infinity>(), 1e-14);
        EXPECT_LE((a - t3_contract_mode2(T, w) * v).lpNorm<Eigen::Infinity>(), 1e-14);
    }
}

TEST(Tensor, DuplicatesMergeIndependentlyOfOrder) {
    std::vector<TensorEntry> e = {{0, 1, 2, 1.0}, {1, 0, 0, 2.0}, {0, 1, 2, 0.5}};
    const SparseTensor3 a({2, 2, 3}, e);
    std::reverse(e.begin(), e.end());
    const SparseTensor3 b({2, 2, 3}, e);
    ASSERT_EQ(a.nnz(), 2u);
    ASSERT_EQ(b.nnz(), 2u);
    for (std::size_t n = 0; n < a.nnz(); ++n) {
        EXPECT_EQ(a.i()[n], b.i()[n]);
        EXPECT_EQ(a.j()[n], b.j()[n]);
        EXPECT_EQ(a.k()[n], b.k()[n]);
        EXPECT_EQ(a.values()[n], b.values()[n]);
    }
}

TEST(Tensor, RejectsOutOfRangeIndicesAndMismatchedVectors) {
    EXPECT_THROW(SparseTensor3({2, 2, 2}, {{0, 0, 2, 1.0}}), DimensionMismatch);
    EXPECT_THROW(SparseTensor3({2, 2, 2}, {{-1, 0, 0, 1.0}}), DimensionMismatch);
    const SparseTensor3 T({2, 3, 4}, {{1, 2, 3, 1.0}});
    EXPECT_THROW(t3_contract_mode3(T, DenseVector::Ones(3)), DimensionMismatch);
    EXPECT_THROW(t3_contract_mode2(T, DenseVector::Ones(4)), DimensionMismatch);
    EXPECT_THROW(t3_double_contract(T, DenseVector::Ones(3), DenseVector::Ones(3)), DimensionMismatch);
}

TEST(Tensor, EmptyTensorContractsToZero) {
    const SparseTensor3 T({3, 3, 3}, {});
    EXPECT_EQ(t3_contract_mode3(T, DenseVector::Ones(3)).nonZeros(), 0);
    EXPECT_EQ(t3_double_contract(T, DenseVector::Ones(3), DenseVector::Ones(3)).norm(), 0.0);
}

TEST(Tensor, Mode3ScatterMatchesContraction) {
    std::mt19937 rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        auto [T, D] = random_tensor(rng);
        const SparseMatrix P = mode3_pattern(T);
        const Mode3Scatter s(T, P);
        const DenseVector v = random_vector(rng, T.dims()[2]);
        std::vector<double> vals(P.nonZeros(), 0.0);
        s.accumulate(v, vals, 2.0);
        SparseMatrix A = P;
        std::copy(vals.begin(), vals.end(), A.valuePtr());
        const SparseMatrix ref = t3_contract_mode3(T, v);
        EXPECT_LE((Eigen::MatrixXd(A) - 2.0 * Eigen::MatrixXd(ref)).cwiseAbs().maxCoeff(), 1e-14);
    }
}

TEST(Tensor, ScatterRejectsPatternMissingEntries) {
    const SparseTensor3 T({2, 2, 1}, {{0, 1, 0, 1.0}});
    SparseMatrix P(2, 2);
    P.insert(0, 0) = 0.0;
    P.makeCompressed();
    EXPECT_THROW(Mode3Scatter(T, P), InvalidArgument);
}

TEST(Tensor, PatternUnionCoversEveryInput) {
    SparseMatrix a(3, 3), b(3, 3);
    a.insert(0, 1) = 1.0;
    b.insert(2, 0) = 1.0;
    b.insert(0, 1) = 3.0;
    a.makeCompressed();
    b.makeCompressed();
    const SparseMatrix* ms[] = {&a, &b};
    const SparseMatrix u = pattern_union(ms);
    EXPECT_EQ(u.nonZeros(), 2);
    EXPECT_GE(find_slot(u, 0, 1), 0);
    EXPECT_GE(find_slot(u, 2, 0), 0);
    EXPECT_LT(find_slot(u, 1, 1), 0);
}

TEST(Tensor, HadamardIsElementwise) {
    DenseVector a(3), b(3);
    a << 1, 2, 3;
    b << 4, 5, 6;
    DenseVector c = hadamard(a, b);
    EXPECT_EQ(c[0], 4);
    EXPECT_EQ(c[2], 18);
    EXPECT_THROW(hadamard(a, DenseVector::Ones(2)), DimensionMismatch);
}

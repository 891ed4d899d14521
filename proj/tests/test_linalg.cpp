#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "singsys/linalg.hpp"

using namespace singsys;

TEST(NullSpace, SamuelsonFHasOneDimensionalKernelAlongIncome) {
    Matrix F(3, 3);
    F << 0, 0, 0, 0, 1, 0, 0, -2.5, 1;
    const Matrix N = null_space(F);
    ASSERT_EQ(N.cols(), 1);
    EXPECT_NEAR(std::abs(N(0, 0)), 1.0, 1e-15);
    EXPECT_EQ(N(1, 0), 0.0);
    EXPECT_EQ(N(2, 0), 0.0);
    EXPECT_EQ(rank(F), 2);
}

TEST(NullSpace, ZeroMatrixIsAllFree) {
    const Matrix Z = Matrix::Zero(2, 3);
    EXPECT_EQ(null_space(Z).cols(), 3);
    EXPECT_EQ(rank(Z), 0);
}

TEST(NullSpace, ComplexKernelOfShiftedRotation) {
    // [[0, 1], [-1, 0]] has eigenvalue i with eigenvector (1, i)/sqrt(2).
    ComplexMatrix A(2, 2);
    A << Complex(0, -1), 1, -1, Complex(0, -1);
    const ComplexMatrix N = null_space(A);
    ASSERT_EQ(N.cols(), 1);
    EXPECT_LT((A * N).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(NullSpace, AbsoluteScaleTreatsNoiseAsZero) {
    Matrix W(1, 1);
    W << 1e-14;
    EXPECT_EQ(null_space(W).cols(), 0);                      // relative to itself: a pivot
    EXPECT_EQ(null_space(W, kNullSpaceTolerance, 1.0).cols(), 1);  // relative to 1: noise
}

TEST(NullSpace, PropertyRankMatchesSvdOnRandomLowRankMatrices) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Index m = 2 + trial % 4;
        const Eigen::Index r = trial % m;
        const Matrix A = r == 0 ? Matrix::Zero(m, m) : oracle::random_rank_deficient(rng, m, r);
        const Matrix N = null_space(A);
        EXPECT_EQ(rank(A), oracle::svd_rank(A)) << "trial " << trial;
        EXPECT_EQ(N.cols(), m - oracle::svd_rank(A));
        if (N.cols() > 0) {
            EXPECT_LT((A * N).cwiseAbs().maxCoeff(), 1e-12);
            EXPECT_EQ(oracle::svd_rank(N), N.cols());
        }
    }
}

TEST(LeastSquares, MinimumNormSolutionOfUnderdeterminedSystem) {
    Matrix A(1, 2);
    A << 1, 1;
    Vector b(1);
    b << 2;
    const Vector x = least_squares(A, b);
    EXPECT_NEAR(x(0), 1.0, 1e-14);
    EXPECT_NEAR(x(1), 1.0, 1e-14);
}

TEST(BlockDiagonal, HandlesEmptyBlocks) {
    const Matrix I2 = Matrix::Identity(2, 2);
    const Matrix empty(0, 0);
    EXPECT_EQ(block_diagonal(I2, empty), I2);
    EXPECT_EQ(block_diagonal(empty, I2), I2);
    const Matrix both = block_diagonal(I2, 3.0 * Matrix::Identity(1, 1));
    EXPECT_EQ(both(2, 2), 3.0);
    EXPECT_EQ(both(0, 2), 0.0);
}

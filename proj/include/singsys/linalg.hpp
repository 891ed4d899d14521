#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace singsys {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

/// Relative pivot threshold used when extracting null spaces.
inline constexpr double kNullSpaceTolerance = 1e-10;

/// Largest absolute entry, 0 for empty matrices.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& a) {
    if (a.size() == 0) {
        return 0.0;
    }
    return a.cwiseAbs().maxCoeff();
}

/// Result of Gauss-Jordan elimination with partial pivoting per column.
/// Columns whose best remaining pivot falls below the threshold are free.
template <typename Scalar>
struct RowEchelon {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> reduced;
    std::vector<Eigen::Index> pivot_columns;
    std::vector<Eigen::Index> free_columns;

    [[nodiscard]] Eigen::Index rank() const {
        return static_cast<Eigen::Index>(pivot_columns.size());
    }
};

/// Pivots at most rel_tol * scale are treated as zero; a negative scale means
/// "use the largest entry of a".
template <typename Derived>
RowEchelon<typename Derived::Scalar> row_reduce(const Eigen::MatrixBase<Derived>& a,
                                                double rel_tol = kNullSpaceTolerance,
                                                double scale = -1.0) {
    using Scalar = typename Derived::Scalar;
    RowEchelon<Scalar> out;
    out.reduced = a;
    auto& r = out.reduced;
    const double threshold = rel_tol * (scale < 0.0 ? max_abs(a) : scale);
    Eigen::Index row = 0;
    for (Eigen::Index col = 0; col < r.cols(); ++col) {
        if (row == r.rows()) {
            out.free_columns.push_back(col);
            continue;
        }
        Eigen::Index best = row;
        double best_abs = std::abs(r(row, col));
        for (Eigen::Index i = row + 1; i < r.rows(); ++i) {
            if (std::abs(r(i, col)) > best_abs) {
                best = i;
                best_abs = std::abs(r(i, col));
            }
        }
        if (best_abs <= threshold || best_abs == 0.0) {
            r.block(row, col, r.rows() - row, 1).setZero();
            out.free_columns.push_back(col);
            continue;
        }
        r.row(row).swap(r.row(best));
        const Scalar pivot = r(row, col);
        r.row(row) /= pivot;
        for (Eigen::Index i = 0; i < r.rows(); ++i) {
            if (i != row) {
                const Scalar factor = r(i, col);
                if (factor != Scalar(0)) {
                    r.row(i) -= factor * r.row(row);
                }
            }
        }
        out.pivot_columns.push_back(col);
        ++row;
    }
    return out;
}

/// Basis of the right null space, one unit-norm column per free variable.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> null_space(
    const Eigen::MatrixBase<Derived>& a, double rel_tol = kNullSpaceTolerance,
    double scale = -1.0) {
    using Scalar = typename Derived::Scalar;
    const auto echelon = row_reduce(a, rel_tol, scale);
    const auto n = a.cols();
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> basis(
        n, static_cast<Eigen::Index>(echelon.free_columns.size()));
    for (std::size_t j = 0; j < echelon.free_columns.size(); ++j) {
        const auto free_col = echelon.free_columns[j];
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x =
            Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n);
        x(free_col) = Scalar(1);
        for (std::size_t i = 0; i < echelon.pivot_columns.size(); ++i) {
            x(echelon.pivot_columns[i]) = -echelon.reduced(static_cast<Eigen::Index>(i), free_col);
        }
        basis.col(static_cast<Eigen::Index>(j)) = x / x.norm();
    }
    return basis;
}

/// Numerical rank by thresholded row reduction.
template <typename Derived>
Eigen::Index rank(const Eigen::MatrixBase<Derived>& a, double rel_tol = kNullSpaceTolerance,
                  double scale = -1.0) {
    return row_reduce(a, rel_tol, scale).rank();
}

/// Minimum-norm least-squares solution of a x = b.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, 1> least_squares(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    using Scalar = typename DerivedA::Scalar;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dense = a;
    Eigen::CompleteOrthogonalDecomposition<decltype(dense)> cod(dense);
    return cod.solve(b);
}

/// Block-diagonal assembly; either block may be empty.
inline Matrix block_diagonal(const Matrix& top_left, const Matrix& bottom_right) {
    const auto n1 = top_left.rows();
    const auto n2 = bottom_right.rows();
    Matrix out = Matrix::Zero(n1 + n2, top_left.cols() + bottom_right.cols());
    out.topLeftCorner(n1, top_left.cols()) = top_left;
    out.bottomRightCorner(n2, bottom_right.cols()) = bottom_right;
    return out;
}

}  // namespace singsys

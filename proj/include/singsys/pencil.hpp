#pragma once

#include <cmath>
#include <cstddef>
#include <algorithm>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "singsys/errors.hpp"
#include "singsys/linalg.hpp"
#include "singsys/polynomial.hpp"

namespace singsys {

/// Residual bound for the two block equations of the canonical form, scaled
/// by max(1, |F|, |G|).
inline constexpr double kDecompositionTolerance = 1e-9;
/// Interpolation systems with a larger condition number are rejected.
inline constexpr double kMaxInterpolationCondition = 1e12;

/// The pencil sF - G of two same-shape real matrices.
class MatrixPencil {
public:
    MatrixPencil(Matrix f, Matrix g) : f_(std::move(f)), g_(std::move(g)) {
        if (f_.rows() != g_.rows() || f_.cols() != g_.cols()) {
            throw InvalidPencil("pencil matrices differ in shape");
        }
        if (f_.size() == 0) {
            throw InvalidPencil("pencil matrices are empty");
        }
        if (!f_.allFinite() || !g_.allFinite()) {
            throw InvalidPencil("pencil matrices contain non-finite entries");
        }
    }

    [[nodiscard]] const Matrix& F() const { return f_; }
    [[nodiscard]] const Matrix& G() const { return g_; }
    [[nodiscard]] Eigen::Index rows() const { return f_.rows(); }
    [[nodiscard]] Eigen::Index cols() const { return f_.cols(); }
    [[nodiscard]] bool is_square() const { return rows() == cols(); }

    /// s F - G for a (possibly complex) value of s.
    template <typename Scalar>
    [[nodiscard]] Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> at(Scalar s) const {
        return s * f_.cast<Scalar>() - g_.cast<Scalar>();
    }

    /// Entry magnitude used to scale absolute thresholds.
    [[nodiscard]] double scale() const { return std::max(max_abs(f_), max_abs(g_)); }

private:
    Matrix f_;
    Matrix g_;
};

/// Coefficients of det(sF - G), by evaluation at m+1 Chebyshev nodes on [-1, 1]
/// followed by Vandermonde interpolation and trimming.
inline DetPolynomial pencil_det_poly(const MatrixPencil& pencil) {
    if (!pencil.is_square()) {
        throw NonSquarePencil("determinant polynomial needs a square pencil, got " +
                              std::to_string(pencil.rows()) + "x" +
                              std::to_string(pencil.cols()));
    }
    const Eigen::Index m = pencil.cols();
    const Eigen::Index nodes = m + 1;
    Matrix vandermonde(nodes, nodes);
    Vector values(nodes);
    for (Eigen::Index i = 0; i < nodes; ++i) {
        const double x = std::cos(std::numbers::pi * static_cast<double>(2 * i + 1) /
                                  static_cast<double>(2 * nodes));
        double power = 1.0;
        for (Eigen::Index j = 0; j < nodes; ++j) {
            vandermonde(i, j) = power;
            power *= x;
        }
        values(i) = pencil.at(x).fullPivLu().determinant();
    }
    Eigen::JacobiSVD<Matrix> svd(vandermonde);
    const auto& sv = svd.singularValues();
    if (sv(nodes - 1) == 0.0 || sv(0) / sv(nodes - 1) > kMaxInterpolationCondition) {
        throw NumericalBreakdown("determinant interpolation system is ill-conditioned");
    }
    const Vector coefficients = vandermonde.fullPivLu().solve(values);
    const double zero_threshold =
        kTrimTolerance * std::pow(static_cast<double>(m) * pencil.scale(), static_cast<double>(m));
    return trim(std::vector<double>(coefficients.data(), coefficients.data() + nodes),
                zero_threshold);
}

enum class Regularity { Regular, SingularShape, SingularDeterminant };

inline const char* to_string(Regularity r) {
    switch (r) {
        case Regularity::Regular:
            return "regular";
        case Regularity::SingularShape:
            return "singular (non-square)";
        case Regularity::SingularDeterminant:
            return "singular (det(sF-G) identically zero)";
    }
    return "unknown";
}

inline Regularity is_regular(const MatrixPencil& pencil) {
    if (!pencil.is_square()) {
        return Regularity::SingularShape;
    }
    try {
        return pencil_det_poly(pencil).is_zero() ? Regularity::SingularDeterminant
                                                 : Regularity::Regular;
    } catch (const NumericalBreakdown&) {
        return Regularity::SingularDeterminant;
    }
}

/// Finite eigenvalues with algebraic multiplicities plus the multiplicity q of
/// the infinite eigenvalue.
struct EigenStructure {
    std::vector<ClusteredRoot> finite_eigenvalues;
    DetPolynomial determinant;
    int p = 0;
    int q = 0;
    int m = 0;
};

/// Window for merging roots that the fixed clustering tolerance left apart.
inline constexpr double kMergeWindow = 1e-4;

namespace detail {

// The roots of an eigenvalue of multiplicity r split by roughly eps^(1/r) and
// can land outside kClusterTolerance. Clusters within the merge window of each
// other form a group; a group closed under conjugation is joined when sF - G is
// still numerically singular at its weighted mean. Distinct close eigenvalues
// fail that test and stay apart.
inline std::vector<ClusteredRoot> merge_split_roots(const MatrixPencil& pencil,
                                                    std::vector<ClusteredRoot> clusters) {
    const double f = max_abs(pencil.F());
    const double g = max_abs(pencil.G());
    const auto m = pencil.cols();
    const std::size_t n = clusters.size();
    std::vector<std::size_t> group(n);
    for (std::size_t i = 0; i < n; ++i) {
        group[i] = i;
    }
    // single linkage; labels propagate until stable
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const double window =
                    kMergeWindow * std::max(1.0, std::abs(clusters[i].value));
                if (group[j] < group[i] &&
                    std::abs(clusters[i].value - clusters[j].value) < window) {
                    group[i] = group[j];
                    changed = true;
                }
            }
        }
    }
    std::vector<ClusteredRoot> out;
    for (std::size_t label = 0; label < n; ++label) {
        std::vector<std::size_t> members;
        Complex weighted = 0.0;
        int multiplicity = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (group[i] == label) {
                members.push_back(i);
                weighted += clusters[i].value * static_cast<double>(clusters[i].multiplicity);
                multiplicity += clusters[i].multiplicity;
            }
        }
        if (members.empty()) {
            continue;
        }
        bool join = false;
        if (members.size() > 1) {
            const Complex mean = weighted / static_cast<double>(multiplicity);
            const double scale = std::max(std::abs(mean) * f + g, 1e-300);
            join = std::abs(mean.imag()) <= kClusterTolerance * std::max(1.0, std::abs(mean)) &&
                   rank(pencil.at(mean.real()), kNullSpaceTolerance, scale) < m;
            if (join) {
                out.push_back({Complex(mean.real(), 0.0), multiplicity});
            }
        }
        if (!join) {
            for (auto i : members) {
                out.push_back(clusters[i]);
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const ClusteredRoot& x, const ClusteredRoot& y) {
        if (x.value.real() != y.value.real()) {
            return x.value.real() < y.value.real();
        }
        return x.value.imag() > y.value.imag();
    });
    return out;
}

}  // namespace detail

inline EigenStructure eigenstructure(const MatrixPencil& pencil) {
    if (!pencil.is_square()) {
        throw IrregularPencil("eigenstructure needs a square pencil");
    }
    EigenStructure out;
    out.determinant = pencil_det_poly(pencil);
    if (out.determinant.is_zero()) {
        throw IrregularPencil("det(sF-G) vanishes identically");
    }
    out.m = static_cast<int>(pencil.cols());
    out.p = out.determinant.degree;
    out.q = out.m - out.p;
    out.finite_eigenvalues =
        detail::merge_split_roots(pencil, cluster_roots(polynomial_roots(out.determinant)));
    return out;
}

/// P F Q = diag(I_p, H_q), P G Q = diag(J_p, I_q).
struct WeierstrassForm {
    Matrix P;
    Matrix Q;
    Matrix J;  ///< p x p, real Jordan form; complex pairs as [[re, im], [-im, re]]
    Matrix H;  ///< q x q, nilpotent
    int p = 0;
    int q = 0;
    int q_star = 0;  ///< nilpotency index of H (0 when q == 0)
    double residual_F = 0.0;
    double residual_G = 0.0;

    [[nodiscard]] Matrix Q_p() const { return Q.leftCols(p); }
    [[nodiscard]] Matrix Q_q() const { return Q.rightCols(q); }
    [[nodiscard]] Matrix P_1() const { return P.topRows(p); }
    [[nodiscard]] Matrix P_2() const { return P.bottomRows(q); }
};

namespace detail {

struct FiniteBasis {
    Matrix vectors;
    Matrix J;
};

inline FiniteBasis finite_basis(const MatrixPencil& pencil, const EigenStructure& es) {
    const Matrix& F = pencil.F();
    const Matrix& G = pencil.G();
    const Eigen::Index m = pencil.cols();
    FiniteBasis out{Matrix(m, es.p), Matrix::Zero(es.p, es.p)};
    // Rank threshold scaled by |s| |F| + |G|: at an accurate eigenvalue sF - G is
    // itself nearly zero and cannot serve as its own scale.
    const auto magnitude = [&](Complex s) {
        return std::max(std::abs(s) * max_abs(F) + max_abs(G), 1e-300);
    };
    Eigen::Index col = 0;
    int jordan_blocks = 0;
    for (const auto& cluster : es.finite_eigenvalues) {
        const Complex lambda = cluster.value;
        if (lambda.imag() < 0.0) {
            continue;  // emitted together with its conjugate
        }
        if (lambda.imag() == 0.0) {
            const double s = lambda.real();
            const Matrix shifted = pencil.at(s);
            const Matrix basis = null_space(shifted, kNullSpaceTolerance, magnitude(lambda));
            const auto g = basis.cols();
            if (g == cluster.multiplicity) {
                for (Eigen::Index j = 0; j < g; ++j, ++col) {
                    out.vectors.col(col) = basis.col(j);
                    out.J(col, col) = s;
                }
            } else if (cluster.multiplicity == 2 && g == 1 && jordan_blocks == 0) {
                ++jordan_blocks;
                const Vector head = basis.col(0);
                const Vector rhs = F * head;
                const Vector tail = least_squares(Matrix(G - s * F), rhs);
                if (max_abs((G - s * F) * tail - rhs) > kDecompositionTolerance * std::max(1.0, pencil.scale())) {
                    throw NumericalBreakdown("finite Jordan chain is not solvable");
                }
                out.vectors.col(col) = head;
                out.vectors.col(col + 1) = tail;
                out.J(col, col) = s;
                out.J(col, col + 1) = 1.0;
                out.J(col + 1, col + 1) = s;
                col += 2;
            } else {
                throw UnsupportedJordanStructure(
                    "finite eigenvalue " + std::to_string(s) + " has algebraic multiplicity " +
                    std::to_string(cluster.multiplicity) + " but geometric multiplicity " +
                    std::to_string(g));
            }
        } else {
            const ComplexMatrix basis =
                null_space(pencil.at(lambda), kNullSpaceTolerance, magnitude(lambda));
            if (basis.cols() != cluster.multiplicity) {
                throw UnsupportedJordanStructure("defective complex eigenvalue");
            }
            for (Eigen::Index j = 0; j < basis.cols(); ++j, col += 2) {
                out.vectors.col(col) = basis.col(j).real();
                out.vectors.col(col + 1) = basis.col(j).imag();
                out.J(col, col) = lambda.real();
                out.J(col, col + 1) = lambda.imag();
                out.J(col + 1, col) = -lambda.imag();
                out.J(col + 1, col + 1) = lambda.real();
            }
        }
    }
    if (col != es.p) {
        throw NumericalBreakdown("finite eigenvector count does not match p");
    }
    return out;
}

struct InfiniteBasis {
    Matrix vectors;
    Matrix H;
    int q_star = 0;
};

// Chains of the infinite eigenvalue satisfy F x1 = 0, F x2 = G x1. Chains of
// length two start at null(F) vectors x1 with G x1 in range(F).
inline InfiniteBasis infinite_basis(const MatrixPencil& pencil, const EigenStructure& es) {
    const Matrix& F = pencil.F();
    const Matrix& G = pencil.G();
    const Eigen::Index m = pencil.cols();
    const int q = es.q;
    InfiniteBasis out{Matrix(m, q), Matrix::Zero(q, q), 0};
    const double scale = std::max(1.0, pencil.scale());
    const Matrix kernel = null_space(F, kNullSpaceTolerance, scale);
    const auto g = kernel.cols();
    if (q == 0) {
        if (g != 0) {
            throw NumericalBreakdown("F is rank deficient but the determinant has full degree");
        }
        return out;
    }
    if (g > q) {
        throw NumericalBreakdown("null space of F exceeds the infinite multiplicity");
    }
    if (g == q) {
        out.vectors = kernel;
        out.q_star = 1;
        return out;
    }
    const Matrix left_kernel = null_space(Matrix(F.transpose()), kNullSpaceTolerance, scale);
    const Matrix obstruction = left_kernel.transpose() * G * kernel;
    const Matrix chain_coeffs = null_space(obstruction, kNullSpaceTolerance, scale);
    const auto long_chains = chain_coeffs.cols();
    if (g + long_chains != q) {
        throw UnsupportedJordanStructure("infinite eigenvalue has Jordan chains longer than 2");
    }
    const Matrix simple_coeffs = null_space(Matrix(chain_coeffs.transpose()));
    Eigen::Index col = 0;
    for (Eigen::Index j = 0; j < simple_coeffs.cols(); ++j, ++col) {
        const Vector x = kernel * simple_coeffs.col(j);
        out.vectors.col(col) = x / x.norm();
    }
    for (Eigen::Index j = 0; j < long_chains; ++j, col += 2) {
        Vector head = kernel * chain_coeffs.col(j);
        head /= head.norm();
        const Vector rhs = G * head;
        const Vector tail = least_squares(F, rhs);
        if (max_abs(F * tail - rhs) > kDecompositionTolerance * scale) {
            throw NumericalBreakdown("infinite Jordan chain is not solvable");
        }
        out.vectors.col(col) = head;
        out.vectors.col(col + 1) = tail;
        out.H(col, col + 1) = 1.0;
    }
    out.q_star = 2;
    return out;
}

}  // namespace detail

/// Builds P and Q from generalized eigenvectors: Q = [Q_p | Q_q] spans the
/// deflating subspaces and P = [F Q_p | G Q_q]^{-1}.
///
/// Supported structures: semi-simple finite spectrum plus at most one real 2x2
/// Jordan block, and an infinite eigenvalue of nilpotency index at most 2.
inline WeierstrassForm weierstrass_decompose(const MatrixPencil& pencil) {
    const EigenStructure es = eigenstructure(pencil);
    const Matrix& F = pencil.F();
    const Matrix& G = pencil.G();
    const Eigen::Index m = pencil.cols();

    const auto finite = detail::finite_basis(pencil, es);
    const auto infinite = detail::infinite_basis(pencil, es);

    WeierstrassForm w;
    w.p = es.p;
    w.q = es.q;
    w.q_star = infinite.q_star;
    w.J = finite.J;
    w.H = infinite.H;
    w.Q.resize(m, m);
    w.Q << finite.vectors, infinite.vectors;

    Matrix stacked(m, m);
    stacked << F * finite.vectors, G * infinite.vectors;
    Eigen::FullPivLU<Matrix> lu(stacked);
    if (!lu.isInvertible()) {
        throw NumericalBreakdown("deflating subspaces are not complementary");
    }
    w.P = lu.inverse();
    if (std::abs(w.Q.fullPivLu().determinant()) == 0.0) {
        throw NumericalBreakdown("Q is singular");
    }

    const Matrix I_p = Matrix::Identity(w.p, w.p);
    const Matrix I_q = Matrix::Identity(w.q, w.q);
    w.residual_F = max_abs(w.P * F * w.Q - block_diagonal(I_p, w.H));
    w.residual_G = max_abs(w.P * G * w.Q - block_diagonal(w.J, I_q));
    const double tol = kDecompositionTolerance * std::max(1.0, pencil.scale());
    if (w.residual_F > tol || w.residual_G > tol) {
        throw NumericalBreakdown("canonical form residual " +
                                 std::to_string(std::max(w.residual_F, w.residual_G)) +
                                 " exceeds tolerance");
    }
    return w;
}

}  // namespace singsys

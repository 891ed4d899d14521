#pragma once

// Test-only reference computations. Nothing here calls into the library's
// numerical routines; each function reaches its answer by a different route.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Poly = std::vector<double>;  // ascending coefficients, untrimmed

inline Poly poly_mul(const Poly& x, const Poly& y) {
    Poly out(x.size() + y.size() - 1, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < y.size(); ++j) {
            out[i + j] += x[i] * y[j];
        }
    }
    return out;
}

inline void poly_add_into(Poly& acc, const Poly& x, double sign) {
    if (acc.size() < x.size()) {
        acc.resize(x.size(), 0.0);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc[i] += sign * x[i];
    }
}

namespace detail {

// Laplace expansion along the first row of the matrix of linear polynomials
// entries[i][j] = F_ij s - G_ij, restricted to the given rows/cols.
inline Poly cofactor(const std::vector<std::vector<Poly>>& entries, std::vector<std::size_t> rows,
                     std::vector<std::size_t> cols) {
    if (rows.size() == 1) {
        return entries[rows[0]][cols[0]];
    }
    Poly acc{0.0};
    const std::size_t r0 = rows[0];
    std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        std::vector<std::size_t> sub_cols;
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (j != c) sub_cols.push_back(cols[j]);
        }
        const Poly minor = cofactor(entries, sub_rows, sub_cols);
        poly_add_into(acc, poly_mul(entries[r0][cols[c]], minor), c % 2 == 0 ? 1.0 : -1.0);
    }
    return acc;
}

}  // namespace detail

/// det(sF - G) by symbolic cofactor expansion; length m + 1.
inline Poly cofactor_det_poly(const Eigen::MatrixXd& F, const Eigen::MatrixXd& G) {
    const auto m = static_cast<std::size_t>(F.rows());
    std::vector<std::vector<Poly>> entries(m, std::vector<Poly>(m));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const auto ii = static_cast<Eigen::Index>(i);
            const auto jj = static_cast<Eigen::Index>(j);
            entries[i][j] = {-G(ii, jj), F(ii, jj)};
        }
    }
    std::vector<std::size_t> idx(m);
    for (std::size_t i = 0; i < m; ++i) idx[i] = i;
    Poly out = detail::cofactor(entries, idx, idx);
    out.resize(m + 1, 0.0);
    return out;
}

/// Textbook quadratic formula for s^2 - sum s + product.
inline std::pair<std::complex<double>, std::complex<double>> quadratic_roots(double sum,
                                                                             double product) {
    const std::complex<double> disc = sum * sum - 4.0 * product;
    const std::complex<double> root = std::sqrt(disc);
    return {(sum + root) / 2.0, (sum - root) / 2.0};
}

/// Rank from singular values, relative threshold.
inline Eigen::Index svd_rank(const Eigen::MatrixXd& a, double rel_tol = 1e-9) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > rel_tol * s(0)) ++r;
    }
    return r;
}

/// Plain second-order recursion T_k = a(1+b) T_{k-1} - ab T_{k-2} + g(k).
template <typename Expenditure>
std::vector<double> income(double a, double b, double T0, double T1, std::int64_t horizon,
                           Expenditure g) {
    std::vector<double> T{T0, T1};
    for (std::int64_t k = 2; k <= horizon; ++k) {
        T.push_back(a * (1.0 + b) * T[static_cast<std::size_t>(k - 1)] -
                    a * b * T[static_cast<std::size_t>(k - 2)] + g(k));
    }
    return T;
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXd out(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = u(rng);
    return out;
}

/// F with exactly `rank` independent rows (the rest are combinations).
inline Eigen::MatrixXd random_rank_deficient(std::mt19937_64& rng, Eigen::Index m,
                                             Eigen::Index rank) {
    return random_matrix(rng, m, rank) * random_matrix(rng, rank, m);
}

}  // namespace oracle

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Eigenvalues>

#include "singsys/linalg.hpp"

namespace singsys {

/// Coefficient-trim tolerance, relative to the largest coefficient.
inline constexpr double kTrimTolerance = 1e-10;
/// Absolute separation under which two roots are counted as one repeated root.
inline constexpr double kClusterTolerance = 1e-7;

/// Real polynomial with ascending coefficients; coefficients[i] multiplies s^i.
/// degree == -1 encodes the identically-zero polynomial (coefficients empty).
struct DetPolynomial {
    std::vector<double> coefficients;
    int degree = -1;

    [[nodiscard]] bool is_zero() const { return degree < 0; }

    [[nodiscard]] double leading() const {
        return is_zero() ? 0.0 : coefficients[static_cast<std::size_t>(degree)];
    }

    template <typename T>
    [[nodiscard]] T operator()(const T& s) const {
        T acc{0};
        for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
            acc = acc * s + T{*it};
        }
        return acc;
    }
};

/// Drops trailing coefficients whose magnitude is at most rel_tol * max|c|.
/// When every coefficient is at most zero_threshold the result is the zero polynomial.
inline DetPolynomial trim(std::vector<double> coefficients, double zero_threshold,
                          double rel_tol = kTrimTolerance) {
    double largest = 0.0;
    for (double c : coefficients) {
        largest = std::max(largest, std::abs(c));
    }
    if (largest <= zero_threshold) {
        return {};
    }
    const double cut = rel_tol * largest;
    while (!coefficients.empty() && std::abs(coefficients.back()) <= cut) {
        coefficients.pop_back();
    }
    DetPolynomial out;
    out.degree = static_cast<int>(coefficients.size()) - 1;
    out.coefficients = std::move(coefficients);
    return out;
}

/// Roots as eigenvalues of the companion matrix of the monic normalization.
inline std::vector<Complex> polynomial_roots(const DetPolynomial& poly) {
    if (poly.degree <= 0) {
        return {};
    }
    const auto n = static_cast<Eigen::Index>(poly.degree);
    const double lead = poly.leading();
    Matrix companion = Matrix::Zero(n, n);
    for (Eigen::Index i = 1; i < n; ++i) {
        companion(i, i - 1) = 1.0;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        companion(i, n - 1) = -poly.coefficients[static_cast<std::size_t>(i)] / lead;
    }
    Eigen::EigenSolver<Matrix> solver(companion, /*computeEigenvectors=*/false);
    std::vector<Complex> roots(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        roots[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    }
    return roots;
}

struct ClusteredRoot {
    Complex value;
    int multiplicity = 1;
};

/// Groups roots closer than `tolerance` (single linkage) and replaces each group
/// by its mean. Clusters whose mean has |imag| <= tolerance are snapped to the
/// real axis. Output is sorted by ascending real part, then descending imag.
inline std::vector<ClusteredRoot> cluster_roots(const std::vector<Complex>& roots,
                                                double tolerance = kClusterTolerance) {
    const std::size_t n = roots.size();
    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) {
        parent[i] = i;
    }
    auto find = [&](std::size_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(roots[i] - roots[j]) < tolerance) {
                parent[find(i)] = find(j);
            }
        }
    }
    std::vector<ClusteredRoot> out;
    std::vector<std::size_t> owner;
    for (std::size_t i = 0; i < n; ++i) {
        const auto root = find(i);
        auto it = std::find(owner.begin(), owner.end(), root);
        if (it == owner.end()) {
            owner.push_back(root);
            out.push_back({roots[i], 1});
        } else {
            auto& c = out[static_cast<std::size_t>(it - owner.begin())];
            c.value += roots[i];
            ++c.multiplicity;
        }
    }
    for (auto& c : out) {
        c.value /= static_cast<double>(c.multiplicity);
        if (std::abs(c.value.imag()) <= tolerance) {
            c.value = {c.value.real(), 0.0};
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

}  // namespace singsys

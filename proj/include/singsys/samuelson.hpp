#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "singsys/descriptor.hpp"
#include "singsys/errors.hpp"
#include "singsys/linalg.hpp"
#include "singsys/pencil.hpp"
#include "singsys/polynomial.hpp"

namespace singsys::samuelson {

/// Equations of the singular model are written for k = 2, 3, ...
inline constexpr std::int64_t kStartIndex = 2;

/// Government expenditure G_k: either a constant or samples G_first, G_first+1, ...
class GovernmentExpenditure {
public:
    static GovernmentExpenditure constant(double value) {
        GovernmentExpenditure g;
        g.data_ = value;
        return g;
    }

    static GovernmentExpenditure sequence(std::vector<double> values, std::int64_t first_index = 0) {
        GovernmentExpenditure g;
        g.data_ = Samples{first_index, std::move(values)};
        return g;
    }

    [[nodiscard]] bool is_constant() const { return std::holds_alternative<double>(data_); }

    [[nodiscard]] bool has(std::int64_t k) const {
        if (const auto* s = std::get_if<Samples>(&data_)) {
            return k >= s->first && k - s->first < static_cast<std::int64_t>(s->values.size());
        }
        return true;
    }

    [[nodiscard]] double at(std::int64_t k) const {
        if (const auto* s = std::get_if<Samples>(&data_)) {
            if (!has(k)) {
                throw InsufficientExpenditureData("expenditure G_" + std::to_string(k) +
                                                  " is not available");
            }
            return s->values[static_cast<std::size_t>(k - s->first)];
        }
        return std::get<double>(data_);
    }

    /// Throws unless G_first .. G_last are all defined.
    void require(std::int64_t first, std::int64_t last) const {
        for (std::int64_t k = first; k <= last; ++k) {
            (void)at(k);
        }
    }

    [[nodiscard]] const std::vector<double>* samples() const {
        const auto* s = std::get_if<Samples>(&data_);
        return s ? &s->values : nullptr;
    }

private:
    struct Samples {
        std::int64_t first = 0;
        std::vector<double> values;
    };

    GovernmentExpenditure() = default;

    std::variant<double, Samples> data_;
};

/// Multiplier a in (0, 1), accelerator b > 0 and the expenditure path.
class SamuelsonParams {
public:
    SamuelsonParams(double a, double b, GovernmentExpenditure g)
        : a_(a), b_(b), g_(std::move(g)) {
        if (!(a > 0.0 && a < 1.0)) {
            throw InvalidParameters("multiplier must satisfy 0 < a < 1, got a = " +
                                    std::to_string(a));
        }
        if (!(b > 0.0) || !std::isfinite(b)) {
            throw InvalidParameters("accelerator must satisfy b > 0, got b = " +
                                    std::to_string(b));
        }
    }

    [[nodiscard]] double a() const { return a_; }
    [[nodiscard]] double b() const { return b_; }
    [[nodiscard]] const GovernmentExpenditure& expenditure() const { return g_; }

private:
    double a_;
    double b_;
    GovernmentExpenditure g_;
};

struct EconomicState {
    double T = 0.0;  ///< national income
    double C = 0.0;  ///< consumption
    double I = 0.0;  ///< private investment
};

/// States for k = start_index .. start_index + size - 1.
struct EconomicPath {
    std::int64_t start_index = kStartIndex;
    std::vector<EconomicState> states;

    [[nodiscard]] std::int64_t end_index() const {
        return start_index + static_cast<std::int64_t>(states.size()) - 1;
    }
    [[nodiscard]] const EconomicState& at(std::int64_t k) const {
        return states.at(static_cast<std::size_t>(k - start_index));
    }
};

inline MatrixPencil build_pencil(double a, double b) {
    Matrix F(3, 3);
    Matrix G(3, 3);
    // clang-format off
    F << 0.0, 0.0, 0.0,
         0.0, 1.0, 0.0,
         0.0,  -b, 1.0;
    G << -1.0, 1.0, 1.0,
            a, 0.0, 0.0,
          0.0,  -b, 0.0;
    // clang-format on
    return {std::move(F), std::move(G)};
}

/// F Y(k+1) = G Y(k) + V(k) with Y = (T, C, I) and V(k) = (G_k, 0, 0).
inline DescriptorSystem build_system(const SamuelsonParams& params) {
    const auto& g = params.expenditure();
    InputSequence inputs = [&] {
        if (g.is_constant()) {
            return InputSequence::constant(Vector{{g.at(0), 0.0, 0.0}});
        }
        std::vector<Vector> samples;
        for (std::int64_t k = 0; g.has(k); ++k) {
            samples.push_back(Vector{{g.at(k), 0.0, 0.0}});
        }
        if (samples.empty()) {
            throw InsufficientExpenditureData("expenditure sequence must start at k = 0");
        }
        return InputSequence::sampled(0, std::move(samples));
    }();
    return {build_pencil(params.a(), params.b()), std::move(inputs), kStartIndex};
}

/// Ground-truth recursion T_k = a(1+b) T_{k-1} - ab T_{k-2} + G_k, with
/// C_k = a T_{k-1} and I_k = ab (T_{k-1} - T_{k-2}). Returns k = 2 .. horizon.
inline EconomicPath recursion_oracle(const SamuelsonParams& params, double T0, double T1,
                                     std::int64_t horizon) {
    if (horizon < kStartIndex) {
        throw InvalidParameters("horizon must be at least 2");
    }
    const double a = params.a();
    const double b = params.b();
    params.expenditure().require(kStartIndex, horizon);
    EconomicPath path;
    double prev2 = T0;
    double prev1 = T1;
    for (std::int64_t k = kStartIndex; k <= horizon; ++k) {
        const double T = a * (1.0 + b) * prev1 - a * b * prev2 + params.expenditure().at(k);
        path.states.push_back({T, a * prev1, a * b * (prev1 - prev2)});
        prev2 = prev1;
        prev1 = T;
    }
    return path;
}

/// Finite pencil eigenvalues, roots of s^2 - a(1+b) s + ab.
struct Roots {
    Complex s1;
    Complex s2;
    double discriminant = 0.0;

    [[nodiscard]] bool is_double() const { return std::abs(s1 - s2) < kClusterTolerance; }
};

inline Roots roots(const SamuelsonParams& params) {
    const double a = params.a();
    const double b = params.b();
    const double sum = a * (1.0 + b);
    const double product = a * b;
    Roots r;
    r.discriminant = sum * sum - 4.0 * product;
    if (r.discriminant >= 0.0) {
        // sum > 0, so the '+' root has no cancellation; the other follows from Vieta.
        const double big = 0.5 * (sum + std::sqrt(r.discriminant));
        r.s1 = big;
        r.s2 = product / big;
    } else {
        const double im = 0.5 * std::sqrt(-r.discriminant);
        r.s1 = {0.5 * sum, im};
        r.s2 = {0.5 * sum, -im};
    }
    return r;
}

/// Mode weights of the homogeneous solution fitted to (T0, T1). On the double
/// root branch the solution is (c1 + c2 k) s^k with s = s1.
struct ClosedForm {
    Roots roots;
    Complex c1;
    Complex c2;
    bool double_root = false;

    /// h_n = (s1^n - s2^n) / (s1 - s2), or n s^{n-1} on the double root branch.
    [[nodiscard]] Complex impulse_response(std::int64_t n) const {
        if (n == 0) {
            return 0.0;
        }
        const double nn = static_cast<double>(n);
        if (double_root) {
            return nn * std::pow(roots.s1, nn - 1.0);
        }
        return (std::pow(roots.s1, nn) - std::pow(roots.s2, nn)) / (roots.s1 - roots.s2);
    }

    [[nodiscard]] Complex homogeneous(std::int64_t k) const {
        const double kk = static_cast<double>(k);
        if (double_root) {
            return (c1 + c2 * kk) * std::pow(roots.s1, kk);
        }
        return c1 * std::pow(roots.s1, kk) + c2 * std::pow(roots.s2, kk);
    }
};

inline ClosedForm closed_form_coefficients(const SamuelsonParams& params, double T0, double T1) {
    ClosedForm cf;
    cf.roots = roots(params);
    cf.double_root = cf.roots.is_double();
    if (cf.double_root) {
        const double s = 0.5 * params.a() * (1.0 + params.b());
        cf.roots.s1 = s;
        cf.roots.s2 = s;
        cf.c1 = T0;
        cf.c2 = T1 / s - T0;
    } else {
        const Complex s1 = cf.roots.s1;
        const Complex s2 = cf.roots.s2;
        cf.c2 = (T1 - s1 * T0) / (s2 - s1);
        cf.c1 = T0 - cf.c2;
    }
    return cf;
}

/// Mode decomposition plus impulse-response convolution of the expenditure:
/// T_k = c1 s1^k + c2 s2^k + sum_{i=2}^{k} h_{k-i+1} G_i.
inline EconomicPath closed_form_trajectory(const SamuelsonParams& params, double T0, double T1,
                                           std::int64_t horizon) {
    if (horizon < kStartIndex) {
        throw InvalidParameters("horizon must be at least 2");
    }
    params.expenditure().require(kStartIndex, horizon);
    const ClosedForm cf = closed_form_coefficients(params, T0, T1);
    std::vector<Complex> h(static_cast<std::size_t>(horizon + 1));
    for (std::int64_t n = 0; n <= horizon; ++n) {
        h[static_cast<std::size_t>(n)] = cf.impulse_response(n);
    }
    std::vector<double> T(static_cast<std::size_t>(horizon + 1));
    for (std::int64_t k = 0; k <= horizon; ++k) {
        Complex value = cf.homogeneous(k);
        for (std::int64_t i = kStartIndex; i <= k; ++i) {
            value += h[static_cast<std::size_t>(k - i + 1)] * params.expenditure().at(i);
        }
        T[static_cast<std::size_t>(k)] = value.real();
    }
    const double a = params.a();
    const double b = params.b();
    EconomicPath path;
    for (std::int64_t k = kStartIndex; k <= horizon; ++k) {
        const auto i = static_cast<std::size_t>(k);
        path.states.push_back({T[i], a * T[i - 1], a * b * (T[i - 1] - T[i - 2])});
    }
    return path;
}

/// Y_2 = (T2, a T1, ab (T1 - T0)) at k0 = 2.
inline InitialCondition consistent_initial_state(const SamuelsonParams& params, double T0,
                                                 double T1, double T2) {
    const double a = params.a();
    const double b = params.b();
    return {kStartIndex, Vector{{T2, a * T1, a * b * (T1 - T0)}}};
}

/// T2 continuing the recursion from (T0, T1).
inline double natural_t2(const SamuelsonParams& params, double T0, double T1) {
    const double a = params.a();
    const double b = params.b();
    return a * (1.0 + b) * T1 - a * b * T0 + params.expenditure().at(kStartIndex);
}

struct Regime {
    bool oscillatory = false;
    bool stable = false;
    double spectral_radius = 0.0;
};

inline Regime classify_regime(const SamuelsonParams& params) {
    const Roots r = roots(params);
    Regime out;
    out.oscillatory = r.discriminant < 0.0;
    out.spectral_radius = out.oscillatory ? std::sqrt(params.a() * params.b())
                                          : std::max(std::abs(r.s1), std::abs(r.s2));
    out.stable = out.spectral_radius < 1.0;
    return out;
}

inline EconomicPath to_economic_path(const Trajectory& trajectory) {
    EconomicPath path;
    path.start_index = trajectory.start_index;
    for (const auto& y : trajectory.states) {
        path.states.push_back({y(0), y(1), y(2)});
    }
    return path;
}

/// Solves the singular system through the canonical form, starting from
/// Y_2 = (T2, a T1, ab (T1 - T0)).
inline EconomicPath pencil_trajectory(const SamuelsonParams& params, double T0, double T1,
                                      double T2, std::int64_t horizon) {
    if (horizon < kStartIndex) {
        throw InvalidParameters("horizon must be at least 2");
    }
    params.expenditure().require(kStartIndex, horizon);
    const DescriptorSystem system = build_system(params);
    const WeierstrassForm wform = weierstrass_decompose(system.pencil());
    const auto ic = consistent_initial_state(params, T0, T1, T2);
    return to_economic_path(solve_ivp(system, wform, ic, horizon));
}

inline EconomicPath pencil_trajectory(const SamuelsonParams& params, double T0, double T1,
                                      std::int64_t horizon) {
    return pencil_trajectory(params, T0, T1, natural_t2(params, T0, T1), horizon);
}

/// Largest |x - y| over (T, C, I), each step scaled by max(1, running max of
/// the reference magnitude up to that step).
inline double max_relative_deviation(const EconomicPath& candidate, const EconomicPath& reference) {
    if (candidate.start_index != reference.start_index ||
        candidate.states.size() != reference.states.size()) {
        return std::numeric_limits<double>::infinity();
    }
    double scale = 1.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < reference.states.size(); ++i) {
        const auto& x = candidate.states[i];
        const auto& y = reference.states[i];
        scale = std::max({scale, std::abs(y.T), std::abs(y.C), std::abs(y.I)});
        const double d = std::max({std::abs(x.T - y.T), std::abs(x.C - y.C), std::abs(x.I - y.I)});
        worst = std::max(worst, d / scale);
    }
    return worst;
}

/// Largest |T_k - C_k - I_k - G_k| along a path, each step scaled as above.
inline double accounting_defect(const SamuelsonParams& params, const EconomicPath& path) {
    double scale = 1.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < path.states.size(); ++i) {
        const auto k = path.start_index + static_cast<std::int64_t>(i);
        const auto& s = path.states[i];
        const double g = params.expenditure().at(k);
        scale = std::max({scale, std::abs(s.T), std::abs(s.C), std::abs(s.I), std::abs(g)});
        worst = std::max(worst, std::abs(s.T - s.C - s.I - g) / scale);
    }
    return worst;
}

}  // namespace singsys::samuelson

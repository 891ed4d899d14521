#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "singsys/errors.hpp"
#include "singsys/linalg.hpp"
#include "singsys/pencil.hpp"

namespace singsys {

/// Residual bound of F Y(k+1) = G Y(k) + V(k), scaled by max(1, |Y|).
inline constexpr double kResidualTolerance = 1e-9;
/// Membership bound for consistent initial conditions, scaled by 1 + |Y0|.
inline constexpr double kConsistencyTolerance = 1e-8;

/// Input sequence V_k. Constant sequences have unbounded support; sampled
/// sequences cover [first_index, first_index + size).
class InputSequence {
public:
    static InputSequence constant(Vector value) {
        InputSequence s;
        s.dimension_ = value.size();
        s.data_ = std::move(value);
        return s;
    }

    static InputSequence zero(Eigen::Index dimension) {
        return constant(Vector::Zero(dimension));
    }

    static InputSequence sampled(std::int64_t first_index, std::vector<Vector> samples) {
        if (samples.empty()) {
            throw MissingInput("sampled input sequence is empty");
        }
        InputSequence s;
        s.dimension_ = samples.front().size();
        for (const auto& v : samples) {
            if (v.size() != s.dimension_) {
                throw MissingInput("sampled input sequence has inconsistent dimensions");
            }
        }
        s.data_ = Samples{first_index, std::move(samples)};
        return s;
    }

    [[nodiscard]] Eigen::Index dimension() const { return dimension_; }

    [[nodiscard]] bool has(std::int64_t k) const {
        if (const auto* samples = std::get_if<Samples>(&data_)) {
            return k >= samples->first &&
                   k - samples->first < static_cast<std::int64_t>(samples->values.size());
        }
        return true;
    }

    /// Last index with a defined value; nullopt for unbounded support.
    [[nodiscard]] std::optional<std::int64_t> last_index() const {
        if (const auto* samples = std::get_if<Samples>(&data_)) {
            return samples->first + static_cast<std::int64_t>(samples->values.size()) - 1;
        }
        return std::nullopt;
    }

    [[nodiscard]] const Vector& at(std::int64_t k) const {
        if (const auto* samples = std::get_if<Samples>(&data_)) {
            if (!has(k)) {
                throw MissingInput("input V_" + std::to_string(k) + " is not available");
            }
            return samples->values[static_cast<std::size_t>(k - samples->first)];
        }
        return std::get<Vector>(data_);
    }

private:
    struct Samples {
        std::int64_t first = 0;
        std::vector<Vector> values;
    };

    InputSequence() = default;

    Eigen::Index dimension_ = 0;
    std::variant<Vector, Samples> data_;
};

/// F Y(k+1) = G Y(k) + V(k) for k >= start_index, with a regular square pencil.
class DescriptorSystem {
public:
    DescriptorSystem(MatrixPencil pencil, InputSequence inputs, std::int64_t start_index)
        : pencil_(std::move(pencil)), inputs_(std::move(inputs)), start_index_(start_index) {
        const auto verdict = is_regular(pencil_);
        if (verdict != Regularity::Regular) {
            throw IrregularPencil(std::string("descriptor system needs a regular pencil: ") +
                                  to_string(verdict));
        }
        if (inputs_.dimension() != pencil_.rows()) {
            throw InvalidPencil("input dimension does not match the pencil");
        }
    }

    [[nodiscard]] const MatrixPencil& pencil() const { return pencil_; }
    [[nodiscard]] const InputSequence& inputs() const { return inputs_; }
    [[nodiscard]] std::int64_t start_index() const { return start_index_; }
    [[nodiscard]] Eigen::Index dimension() const { return pencil_.cols(); }

    /// Same pencil and inputs, equations counted from a later index.
    [[nodiscard]] DescriptorSystem starting_at(std::int64_t k0) const {
        DescriptorSystem copy = *this;
        copy.start_index_ = k0;
        return copy;
    }

private:
    MatrixPencil pencil_;
    InputSequence inputs_;
    std::int64_t start_index_;
};

struct Trajectory {
    std::int64_t start_index = 0;
    std::vector<Vector> states;

    [[nodiscard]] std::int64_t end_index() const {
        return start_index + static_cast<std::int64_t>(states.size()) - 1;
    }
    [[nodiscard]] const Vector& at(std::int64_t k) const {
        return states.at(static_cast<std::size_t>(k - start_index));
    }
    [[nodiscard]] double max_abs_state() const {
        double out = 0.0;
        for (const auto& y : states) {
            out = std::max(out, max_abs(y));
        }
        return out;
    }
};

/// Largest |F Y(k+1) - G Y(k) - V(k)| over consecutive states.
inline double trajectory_residual(const DescriptorSystem& system, const Trajectory& trajectory) {
    const Matrix& F = system.pencil().F();
    const Matrix& G = system.pencil().G();
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < trajectory.states.size(); ++i) {
        const auto k = trajectory.start_index + static_cast<std::int64_t>(i);
        const Vector r = F * trajectory.states[i + 1] - G * trajectory.states[i] -
                         system.inputs().at(k);
        worst = std::max(worst, max_abs(r));
    }
    return worst;
}

struct ForcedTerm {
    std::int64_t k = 0;
    Vector value;  ///< Q D_k
};

namespace detail {

/// Powers J^n and H^n by repeated multiplication, memoized per solve.
class PowerCache {
public:
    explicit PowerCache(const Matrix& base)
        : base_(base), powers_{Matrix::Identity(base.rows(), base.cols())} {}

    const Matrix& operator()(std::int64_t n) {
        while (static_cast<std::int64_t>(powers_.size()) <= n) {
            powers_.push_back(powers_.back() * base_);
        }
        return powers_[static_cast<std::size_t>(n)];
    }

private:
    Matrix base_;
    std::vector<Matrix> powers_;
};

class ForcedTermEvaluator {
public:
    ForcedTermEvaluator(const DescriptorSystem& system, const WeierstrassForm& w)
        : system_(system), w_(w), P1_(w.P_1()), P2_(w.P_2()), J_pow_(w.J), H_pow_(w.H) {}

    Vector operator()(std::int64_t k) {
        const auto start = system_.start_index();
        if (k < start) {
            throw MissingInput("forced term requested before the start index");
        }
        const auto lookahead_end = k + std::max(w_.q_star, 1) - 1;
        if (w_.q > 0 && !system_.inputs().has(lookahead_end)) {
            throw MissingInput("forced term at k=" + std::to_string(k) + " needs V up to k=" +
                               std::to_string(lookahead_end));
        }
        Vector d(w_.p + w_.q);
        Vector top = Vector::Zero(w_.p);
        for (std::int64_t i = start; i < k; ++i) {
            top += J_pow_(k - i - 1) * (P1_ * system_.inputs().at(i));
        }
        Vector bottom = Vector::Zero(w_.q);
        for (std::int64_t i = 0; i < w_.q_star; ++i) {
            bottom -= H_pow_(i) * (P2_ * system_.inputs().at(k + i));
        }
        d << top, bottom;
        return w_.Q * d;
    }

    const Matrix& J_power(std::int64_t n) { return J_pow_(n); }

private:
    const DescriptorSystem& system_;
    const WeierstrassForm& w_;
    Matrix P1_;
    Matrix P2_;
    PowerCache J_pow_;
    PowerCache H_pow_;
};

}  // namespace detail

/// Q D_k with D_k = [sum_{i=start}^{k-1} J^{k-i-1} P_1 V_i ; -sum_{i<q*} H^i P_2 V_{k+i}].
inline ForcedTerm forced_term(const DescriptorSystem& system, const WeierstrassForm& wform,
                              std::int64_t k) {
    detail::ForcedTermEvaluator eval(system, wform);
    return {k, eval(k)};
}

/// Y_k = Q_p J^{k-start} C + Q D_k for k = start .. horizon. Throws
/// NumericalBreakdown if the result fails the defining residual check.
inline Trajectory solve_general(const DescriptorSystem& system, const WeierstrassForm& wform,
                                const Vector& C, std::int64_t horizon) {
    if (horizon < system.start_index()) {
        throw InvalidParameters("horizon precedes the start index");
    }
    if (C.size() != wform.p) {
        throw InvalidParameters("mode vector must have p = " + std::to_string(wform.p) +
                                " entries");
    }
    detail::ForcedTermEvaluator eval(system, wform);
    const Matrix Q_p = wform.Q_p();
    Trajectory out;
    out.start_index = system.start_index();
    out.states.reserve(static_cast<std::size_t>(horizon - system.start_index() + 1));
    for (std::int64_t k = system.start_index(); k <= horizon; ++k) {
        Vector y = eval(k);
        if (wform.p > 0) {
            y += Q_p * (eval.J_power(k - system.start_index()) * C);
        }
        out.states.push_back(std::move(y));
    }
    const double residual = trajectory_residual(system, out);
    if (residual > kResidualTolerance * std::max(1.0, out.max_abs_state())) {
        throw NumericalBreakdown("trajectory residual " + std::to_string(residual) +
                                 " exceeds tolerance");
    }
    return out;
}

struct InitialCondition {
    std::int64_t k0 = 0;
    Vector Y0;
};

struct ConsistencyReport {
    bool consistent = false;
    double residual = 0.0;
    std::optional<Vector> Z;  ///< least-squares minimizer of |Q_p Z - (Y0 - Q D_k0)|
};

/// Y0 is consistent iff Y0 - Q D_k0 lies in colspan Q_p.
inline ConsistencyReport check_consistency(const DescriptorSystem& system,
                                           const WeierstrassForm& wform,
                                           const InitialCondition& ic) {
    if (ic.Y0.size() != system.dimension() || !ic.Y0.allFinite()) {
        return {false, std::numeric_limits<double>::infinity(), std::nullopt};
    }
    if (ic.k0 < system.start_index()) {
        throw InvalidParameters("initial index precedes the start index");
    }
    const Vector target = ic.Y0 - forced_term(system, wform, ic.k0).value;
    ConsistencyReport report;
    Vector fitted = Vector::Zero(target.size());
    if (wform.p > 0) {
        const Matrix Q_p = wform.Q_p();
        report.Z = least_squares(Q_p, target);
        fitted = Q_p * *report.Z;
    }
    report.residual = max_abs(Vector(target - fitted));
    report.consistent = report.residual < kConsistencyTolerance * (1.0 + max_abs(ic.Y0));
    return report;
}

/// Unique solution through a consistent initial state. The returned trajectory
/// starts at ic.k0.
inline Trajectory solve_ivp(const DescriptorSystem& system, const WeierstrassForm& wform,
                            const InitialCondition& ic, std::int64_t horizon) {
    const auto report = check_consistency(system, wform, ic);
    if (!report.consistent) {
        throw InconsistentIC("initial condition at k=" + std::to_string(ic.k0) +
                             " is not consistent (residual " + std::to_string(report.residual) +
                             ")");
    }
    // Counting equations from k0 moves the accumulated forced response into Z.
    const DescriptorSystem shifted = system.starting_at(ic.k0);
    const auto shifted_report = check_consistency(shifted, wform, ic);
    const Vector C = shifted_report.Z.value_or(Vector::Zero(0));
    auto trajectory = solve_general(shifted, wform, C, horizon);
    const double mismatch = max_abs(Vector(trajectory.states.front() - ic.Y0));
    if (mismatch > kConsistencyTolerance * (1.0 + max_abs(ic.Y0))) {
        throw NumericalBreakdown("trajectory does not reproduce the initial state");
    }
    return trajectory;
}

}  // namespace singsys

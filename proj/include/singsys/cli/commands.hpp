#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "singsys/cli/csv.hpp"
#include "singsys/cli/scenario.hpp"
#include "singsys/cli/svg.hpp"
#include "singsys/descriptor.hpp"
#include "singsys/pencil.hpp"
#include "singsys/samuelson.hpp"

namespace singsys::cli {

/// Relative deviation allowed between an engine and the recursion oracle.
inline constexpr double kVerifyTolerance = 1e-8;
/// Scaled bound on T_k - C_k - I_k - G_k along the pencil trajectory.
inline constexpr double kAccountingTolerance = 1e-9;

enum class Command { Simulate, Eigen, Verify, Plot };

/// Fixed 12 significant digits for human-readable reports.
inline std::string format12(double x) {
    if (x == 0.0) {
        x = 0.0;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline std::string format12(Complex z) {
    if (z.imag() == 0.0) {
        return format12(z.real());
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.12g%+.12gi", z.real() == 0.0 ? 0.0 : z.real(), z.imag());
    return buf;
}

inline std::string format_polynomial(const DetPolynomial& poly) {
    if (poly.is_zero()) {
        return "0";
    }
    std::string out;
    for (int i = poly.degree; i >= 0; --i) {
        const double c = poly.coefficients[static_cast<std::size_t>(i)];
        if (c == 0.0 && i != poly.degree) {
            continue;
        }
        const std::string magnitude = format12(std::abs(c));
        if (out.empty()) {
            out += c < 0.0 ? "-" : "";
        } else {
            out += c < 0.0 ? " - " : " + ";
        }
        const bool unit = magnitude == "1" && i > 0;
        if (!unit) {
            out += magnitude;
            if (i > 0) out += '*';
        }
        if (i == 1) {
            out += 's';
        } else if (i > 1) {
            out += "s^" + std::to_string(i);
        }
    }
    return out;
}

inline samuelson::EconomicPath run_engine(Engine engine, const samuelson::SamuelsonParams& params,
                                          const ScenarioConfig& cfg) {
    switch (engine) {
        case Engine::Pencil:
            return samuelson::pencil_trajectory(params, cfg.t0, cfg.t1, effective_t2(cfg, params),
                                                cfg.horizon);
        case Engine::ClosedForm:
            return samuelson::closed_form_trajectory(params, cfg.t0, cfg.t1, cfg.horizon);
        case Engine::Oracle:
            return samuelson::recursion_oracle(params, cfg.t0, cfg.t1, cfg.horizon);
        case Engine::VerifyAll:
            break;
    }
    throw ValidationError("engine verify_all is only valid for the verify command");
}

inline ConsistencyReport initial_state_consistency(const ScenarioConfig& cfg,
                                                   const samuelson::SamuelsonParams& params) {
    const auto system = samuelson::build_system(params);
    const auto wform = weierstrass_decompose(system.pencil());
    const auto ic =
        samuelson::consistent_initial_state(params, cfg.t0, cfg.t1, effective_t2(cfg, params));
    return check_consistency(system, wform, ic);
}

/// Rows for k = 0 .. horizon from the selected engine (oracle by default).
inline std::vector<CsvRow> simulate_rows(const ScenarioConfig& cfg) {
    const auto params = validate(cfg);
    const Engine engine = cfg.engine.value_or(Engine::Oracle);
    if (engine == Engine::VerifyAll) {
        throw ValidationError("engine verify_all is only valid for the verify command");
    }
    if (cfg.t2 && !initial_state_consistency(cfg, params).consistent) {
        throw ValidationError("initial condition is inconsistent: t2 must equal " +
                              format12(samuelson::natural_t2(params, cfg.t0, cfg.t1)) +
                              " so that T_2 = C_2 + I_2 + G_2");
    }
    const auto& g = params.expenditure();
    const auto path = run_engine(engine, params, cfg);
    std::vector<CsvRow> rows;
    rows.push_back({0, cfg.t0, std::nullopt, std::nullopt, g.at(0)});
    rows.push_back({1, cfg.t1, params.a() * cfg.t0, std::nullopt, g.at(1)});
    for (std::int64_t k = path.start_index; k <= path.end_index(); ++k) {
        const auto& s = path.at(k);
        rows.push_back({k, s.T, s.C, s.I, g.at(k)});
    }
    return rows;
}

inline std::string eigen_report(const ScenarioConfig& cfg) {
    const auto params = validate(cfg);
    const auto system = samuelson::build_system(params);
    const auto& pencil = system.pencil();
    const auto es = eigenstructure(pencil);
    const auto wform = weierstrass_decompose(pencil);
    const auto r = samuelson::roots(params);
    const auto regime = samuelson::classify_regime(params);

    std::string out;
    out += "a = " + format12(params.a()) + "\n";
    out += "b = " + format12(params.b()) + "\n";
    out += std::string("pencil: ") + to_string(is_regular(pencil)) + "\n";
    out += "det(sF-G) = " + format_polynomial(es.determinant) + "\n";
    out += "coefficients (ascending):";
    for (std::size_t i = 0; i < es.determinant.coefficients.size(); ++i) {
        out += (i == 0 ? " " : ", ") + format12(es.determinant.coefficients[i]);
    }
    out += "\n";
    out += "s1 = " + format12(r.s1) + "\n";
    out += "s2 = " + format12(r.s2) + "\n";
    out += "discriminant = " + format12(r.discriminant) + "\n";
    out += "finite eigenvalues (pencil):";
    for (std::size_t i = 0; i < es.finite_eigenvalues.size(); ++i) {
        const auto& e = es.finite_eigenvalues[i];
        out += (i == 0 ? " " : ", ") + format12(e.value);
        if (e.multiplicity > 1) out += " (x" + std::to_string(e.multiplicity) + ")";
    }
    out += "\n";
    out += "p = " + std::to_string(wform.p) + "\n";
    out += "q = " + std::to_string(wform.q) + "\n";
    out += "q_star = " + std::to_string(wform.q_star) + "\n";
    out += std::string("regime: ") + (regime.oscillatory ? "oscillatory" : "non-oscillatory") +
           ", " + (regime.stable ? "stable" : "unstable") + "\n";
    out += "spectral_radius = " + format12(regime.spectral_radius) + "\n";
    return out;
}

struct EngineDeviation {
    Engine engine = Engine::Oracle;
    bool ran = false;
    double relative = std::numeric_limits<double>::infinity();
    double absolute = std::numeric_limits<double>::infinity();
    std::string error;
};

struct VerifyReport {
    std::vector<EngineDeviation> engines;
    bool consistent = false;
    double consistency_residual = 0.0;
    double canonical_residual = 0.0;
    double accounting_defect = std::numeric_limits<double>::infinity();
    std::string eigen_summary;
    double tolerance = kVerifyTolerance;
    bool pass = false;
};

/// Test hook: lets a caller corrupt an engine's output before comparison.
struct VerifyHooks {
    std::function<void(Engine, samuelson::EconomicPath&)> tamper;
};

inline double max_absolute_deviation(const samuelson::EconomicPath& x,
                                     const samuelson::EconomicPath& y) {
    if (x.states.size() != y.states.size()) {
        return std::numeric_limits<double>::infinity();
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < x.states.size(); ++i) {
        worst = std::max({worst, std::abs(x.states[i].T - y.states[i].T),
                          std::abs(x.states[i].C - y.states[i].C),
                          std::abs(x.states[i].I - y.states[i].I)});
    }
    return worst;
}

inline VerifyReport run_verification(const ScenarioConfig& cfg, const VerifyHooks& hooks = {}) {
    const auto params = validate(cfg);
    VerifyReport report;
    const auto oracle = samuelson::recursion_oracle(params, cfg.t0, cfg.t1, cfg.horizon);

    const auto system = samuelson::build_system(params);
    const auto wform = weierstrass_decompose(system.pencil());
    report.canonical_residual = std::max(wform.residual_F, wform.residual_G);
    const auto consistency = initial_state_consistency(cfg, params);
    report.consistent = consistency.consistent;
    report.consistency_residual = consistency.residual;

    const auto r = samuelson::roots(params);
    const auto regime = samuelson::classify_regime(params);
    report.eigen_summary = "s1 = " + format12(r.s1) + ", s2 = " + format12(r.s2) +
                           ", p = " + std::to_string(wform.p) + ", q = " +
                           std::to_string(wform.q) + ", q_star = " +
                           std::to_string(wform.q_star) + ", " +
                           (regime.oscillatory ? "oscillatory" : "non-oscillatory") + ", " +
                           (regime.stable ? "stable" : "unstable");

    for (Engine engine : {Engine::Pencil, Engine::ClosedForm}) {
        EngineDeviation dev;
        dev.engine = engine;
        try {
            auto path = run_engine(engine, params, cfg);
            if (hooks.tamper) {
                hooks.tamper(engine, path);
            }
            dev.ran = true;
            dev.relative = samuelson::max_relative_deviation(path, oracle);
            dev.absolute = max_absolute_deviation(path, oracle);
            if (engine == Engine::Pencil) {
                report.accounting_defect = samuelson::accounting_defect(params, path);
            }
        } catch (const std::exception& e) {
            dev.error = e.what();
        }
        report.engines.push_back(dev);
    }

    report.pass = report.consistent && report.accounting_defect < kAccountingTolerance;
    for (const auto& dev : report.engines) {
        report.pass = report.pass && dev.ran && dev.relative < report.tolerance;
    }
    return report;
}

inline std::string format_verify_report(const VerifyReport& report) {
    std::string out;
    for (const auto& dev : report.engines) {
        out += "engine " + std::string(to_string(dev.engine)) + ": ";
        if (dev.ran) {
            out += "max relative deviation " + format12(dev.relative) + ", max absolute deviation " +
                   format12(dev.absolute);
            out += dev.relative < report.tolerance ? " [ok]" : " [FAIL]";
        } else {
            out += "failed: " + dev.error + " [FAIL]";
        }
        out += "\n";
    }
    out += std::string("initial state: ") + (report.consistent ? "consistent" : "INCONSISTENT") +
           " (residual " + format12(report.consistency_residual) + ")\n";
    out += "canonical form residual: " + format12(report.canonical_residual) + "\n";
    out += "accounting identity defect: " + format12(report.accounting_defect) + "\n";
    out += "eigen: " + report.eigen_summary + "\n";
    out += "tolerance: " + format12(report.tolerance) + "\n";
    out += std::string("result: ") + (report.pass ? "PASS" : "FAIL") + "\n";
    return out;
}

inline std::string plot_svg(const ScenarioConfig& cfg) {
    const auto rows = simulate_rows(cfg);
    const std::string title = "Samuelson model a=" + format12(cfg.a) + " b=" + format12(cfg.b);
    return render_svg(series_from_rows(rows), title);
}

namespace detail {

inline void emit(const ScenarioConfig& cfg, std::ostream& out, std::string_view content) {
    if (cfg.out) {
        write_file(*cfg.out, content);
    } else {
        out << content;
        if (!out) {
            throw IoError("failed to write output");
        }
    }
}

}  // namespace detail

/// Runs one command and maps every failure onto the documented exit codes.
inline int run_command(Command command, const ScenarioConfig& cfg, std::ostream& out,
                       std::ostream& err, const VerifyHooks& hooks = {}) {
    try {
        switch (command) {
            case Command::Simulate:
                detail::emit(cfg, out, write_csv(simulate_rows(cfg)));
                return kExitOk;
            case Command::Plot:
                detail::emit(cfg, out, plot_svg(cfg));
                return kExitOk;
            case Command::Eigen:
                detail::emit(cfg, out, eigen_report(cfg));
                return kExitOk;
            case Command::Verify: {
                if (cfg.engine && *cfg.engine != Engine::VerifyAll) {
                    throw ValidationError("verify requires engine verify_all");
                }
                const auto report = run_verification(cfg, hooks);
                detail::emit(cfg, out, format_verify_report(report));
                return report.pass ? kExitOk : kExitVerification;
            }
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const InvalidParameters& e) {
        err << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const InsufficientExpenditureData& e) {
        err << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        err << "computation failed: " << e.what() << "\n";
        return kExitVerification;
    }
}

}  // namespace singsys::cli

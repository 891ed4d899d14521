#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "singsys/samuelson.hpp"

namespace singsys::cli {

/// Exit codes of the command-line front end.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 1,
    kExitValidation = 2,
    kExitIo = 3,
    kExitVerification = 4,
};

/// Malformed configuration text or flag value.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Well-formed configuration that violates a model constraint.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::int64_t kMaxHorizon = 100000;

enum class Engine { Pencil, ClosedForm, Oracle, VerifyAll };

inline std::string_view to_string(Engine e) {
    switch (e) {
        case Engine::Pencil:
            return "pencil";
        case Engine::ClosedForm:
            return "closed_form";
        case Engine::Oracle:
            return "oracle";
        case Engine::VerifyAll:
            return "verify_all";
    }
    return "unknown";
}

struct ScenarioConfig {
    double a = 0.5;
    double b = 1.0;
    double t0 = 0.0;
    double t1 = 0.0;
    std::optional<double> t2;
    double gbar = 1.0;
    std::vector<double> expenditure;  ///< G_0, G_1, ...; overrides gbar when non-empty
    std::int64_t horizon = 20;
    std::optional<Engine> engine;  ///< simulate/plot default to the oracle
    std::optional<std::string> out;
};

namespace detail {

inline std::string_view strip(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline double parse_real(std::string_view key, std::string_view text) {
    text = strip(text);
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw ConfigError("invalid number for '" + std::string(key) + "': '" +
                          std::string(text) + "'");
    }
    return value;
}

inline std::int64_t parse_integer(std::string_view key, std::string_view text) {
    text = strip(text);
    std::int64_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc{} || ptr != end) {
        throw ConfigError("invalid integer for '" + std::string(key) + "': '" +
                          std::string(text) + "'");
    }
    return value;
}

}  // namespace detail

inline Engine parse_engine(std::string_view text) {
    text = detail::strip(text);
    if (text == "pencil") return Engine::Pencil;
    if (text == "closed_form") return Engine::ClosedForm;
    if (text == "oracle") return Engine::Oracle;
    if (text == "verify_all") return Engine::VerifyAll;
    throw ConfigError("unknown engine '" + std::string(text) +
                      "' (expected pencil, closed_form, oracle or verify_all)");
}

/// Applies one key=value setting; used for both config files and flags.
inline void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value) {
    key = detail::strip(key);
    if (key == "a") {
        cfg.a = detail::parse_real(key, value);
    } else if (key == "b") {
        cfg.b = detail::parse_real(key, value);
    } else if (key == "t0") {
        cfg.t0 = detail::parse_real(key, value);
    } else if (key == "t1") {
        cfg.t1 = detail::parse_real(key, value);
    } else if (key == "t2") {
        cfg.t2 = detail::parse_real(key, value);
    } else if (key == "gbar") {
        cfg.gbar = detail::parse_real(key, value);
        cfg.expenditure.clear();
    } else if (key == "expenditure") {
        std::vector<double> values;
        std::string_view rest = value;
        while (true) {
            const auto comma = rest.find(',');
            values.push_back(detail::parse_real(key, rest.substr(0, comma)));
            if (comma == std::string_view::npos) {
                break;
            }
            rest.remove_prefix(comma + 1);
        }
        cfg.expenditure = std::move(values);
    } else if (key == "horizon") {
        cfg.horizon = detail::parse_integer(key, value);
    } else if (key == "engine") {
        cfg.engine = parse_engine(value);
    } else if (key == "out") {
        const auto path = detail::strip(value);
        if (path.empty()) {
            throw ConfigError("empty output path");
        }
        cfg.out = std::string(path);
    } else {
        throw ConfigError("unknown configuration key '" + std::string(key) + "'");
    }
}

/// Flat key = value lines; '#' starts a comment.
inline void apply_config_text(ScenarioConfig& cfg, std::string_view text) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = detail::strip(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
    }
}

inline ScenarioConfig parse_config_text(std::string_view text) {
    ScenarioConfig cfg;
    apply_config_text(cfg, text);
    return cfg;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write '" + path + "'");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw IoError("failed while writing '" + path + "'");
    }
}

inline samuelson::GovernmentExpenditure expenditure_of(const ScenarioConfig& cfg) {
    if (cfg.expenditure.empty()) {
        return samuelson::GovernmentExpenditure::constant(cfg.gbar);
    }
    return samuelson::GovernmentExpenditure::sequence(cfg.expenditure, 0);
}

/// Checks model constraints and builds the parameter object.
inline samuelson::SamuelsonParams validate(const ScenarioConfig& cfg) {
    if (cfg.horizon < 3 || cfg.horizon > kMaxHorizon) {
        throw ValidationError("horizon must lie in [3, " + std::to_string(kMaxHorizon) +
                              "], got " + std::to_string(cfg.horizon));
    }
    if (!cfg.expenditure.empty() &&
        static_cast<std::int64_t>(cfg.expenditure.size()) < cfg.horizon + 1) {
        throw ValidationError("expenditure list needs " + std::to_string(cfg.horizon + 1) +
                              " values (G_0 .. G_horizon), got " +
                              std::to_string(cfg.expenditure.size()));
    }
    try {
        return {cfg.a, cfg.b, expenditure_of(cfg)};
    } catch (const InvalidParameters& e) {
        throw ValidationError(e.what());
    }
}

/// T2 from the configuration, or the recursion continuation when absent.
inline double effective_t2(const ScenarioConfig& cfg, const samuelson::SamuelsonParams& params) {
    return cfg.t2.value_or(samuelson::natural_t2(params, cfg.t0, cfg.t1));
}

}  // namespace singsys::cli

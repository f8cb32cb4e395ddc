#pragma once

// Command front end: run configuration, CSV tables and verification reports.
// Everything here returns text so the tool binary only handles I/O.

#include <charconv>
#include <cmath>
#include <limits>
#include <locale>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "dislokon/error.hpp"
#include "dislokon/model.hpp"
#include "dislokon/oracle.hpp"
#include "dislokon/spectra.hpp"

namespace dislokon::cli {

/// Table scenarios. `linear_n1` is the n = 1 linear-potential ground state at
/// the cyclotron frequency fixed by frequency_n1.
enum class TableScenario { landau, hardwall, linear, linear_n1 };

constexpr std::string_view to_string(TableScenario s) noexcept {
    switch (s) {
    case TableScenario::landau: return "landau";
    case TableScenario::hardwall: return "hardwall";
    case TableScenario::linear: return "linear";
    case TableScenario::linear_n1: return "linear-n1";
    }
    return "unknown";
}

inline std::optional<TableScenario> parse_table_scenario(std::string_view name) {
    if (name == "landau") return TableScenario::landau;
    if (name == "hardwall") return TableScenario::hardwall;
    if (name == "linear") return TableScenario::linear;
    if (name == "linear-n1") return TableScenario::linear_n1;
    return std::nullopt;
}

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FluxSweep {
    double start = 0.0;
    double stop = 0.0;
    int steps = 2;

    double step() const { return (stop - start) / (steps - 1); }
    double at(int i) const { return i == steps - 1 ? stop : start + i * step(); }
};

struct RunConfig {
    PhysicalParams params{.b0 = 1.0, .r0 = std::nullopt};
    int n_max = 0;
    int l_min = 0;
    int l_max = 0;
    std::vector<double> k_values{0.0};
    TableScenario scenario = TableScenario::landau;
    std::optional<std::string> output_path;
    std::optional<FluxSweep> sweep;
    int grid_n = kDefaultGridN;
    double tol = 1e-4;

    void validate() const {
        try {
            params.validate();
        } catch (const Error& e) {
            throw ConfigError(e.what());
        }
        if (l_min > l_max)
            throw ConfigError("l range is empty: l-min " + std::to_string(l_min) + " > l-max " +
                              std::to_string(l_max));
        if (n_max < 0)
            throw ConfigError("n-max must be >= 0");
        if (k_values.empty())
            throw ConfigError("at least one k value is required");
        if (sweep && sweep->steps < 2)
            throw ConfigError("sweep needs at least 2 steps");
        if (sweep && !(sweep->stop > sweep->start))
            throw ConfigError("sweep stop must exceed start");
        if (grid_n < 1)
            throw ConfigError("grid-n must be positive");
        if (!(tol > 0.0))
            throw ConfigError("tol must be positive");
    }
};

/// Raw key/value settings, from a config file and/or command-line flags.
using Settings = std::map<std::string, std::string, std::less<>>;

/// Keys accepted in config files and as --flags, in echo order.
inline const std::vector<std::string_view>& setting_keys() {
    static const std::vector<std::string_view> keys{
        "scenario", "mass", "charge", "b0", "flux", "chi", "omega0", "nu", "r0", "n-max",
        "l-min", "l-max", "k", "sweep", "grid-n", "tol", "out"};
    return keys;
}

/// Parses `key = value` lines; '#' starts a comment.
inline Settings parse_settings(std::string_view text) {
    Settings out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        const auto trim = [](std::string_view s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string_view::npos) return std::string_view{};
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        std::string key(trim(line.substr(0, eq)));
        if (key.starts_with("--"))
            key.erase(0, 2);
        out[key] = std::string(trim(line.substr(eq + 1)));
    }
    return out;
}

namespace detail {

inline double parse_real(std::string_view key, std::string_view text) {
    double v = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    if (!text.empty() && *first == '+')
        ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v))
        throw ConfigError("bad number for " + std::string(key) + ": '" + std::string(text) + "'");
    return v;
}

inline int parse_int(std::string_view key, std::string_view text) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError("bad integer for " + std::string(key) + ": '" + std::string(text) + "'");
    return v;
}

inline std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    while (true) {
        const auto pos = text.find(sep);
        parts.push_back(text.substr(0, pos));
        if (pos == std::string_view::npos)
            break;
        text = text.substr(pos + 1);
    }
    return parts;
}

} // namespace detail

/// Builds and validates a run configuration. Unknown keys are rejected.
inline RunConfig build_config(const Settings& settings) {
    RunConfig cfg;
    cfg.grid_n = default_grid_n();
    for (const auto& [key, value] : settings) {
        if (key == "scenario") {
            const auto s = parse_table_scenario(value);
            if (!s)
                throw ConfigError("unknown scenario '" + value + "'");
            cfg.scenario = *s;
        } else if (key == "mass") {
            cfg.params.m = detail::parse_real(key, value);
        } else if (key == "charge") {
            cfg.params.q = detail::parse_real(key, value);
        } else if (key == "b0") {
            cfg.params.b0 = detail::parse_real(key, value);
        } else if (key == "flux") {
            cfg.params.phi_b = detail::parse_real(key, value);
        } else if (key == "chi") {
            cfg.params.chi = detail::parse_real(key, value);
        } else if (key == "omega0") {
            cfg.params.omega0 = detail::parse_real(key, value);
        } else if (key == "nu") {
            cfg.params.nu = detail::parse_real(key, value);
        } else if (key == "r0") {
            cfg.params.r0 = detail::parse_real(key, value);
        } else if (key == "n-max") {
            cfg.n_max = detail::parse_int(key, value);
        } else if (key == "l-min") {
            cfg.l_min = detail::parse_int(key, value);
        } else if (key == "l-max") {
            cfg.l_max = detail::parse_int(key, value);
        } else if (key == "k") {
            cfg.k_values.clear();
            for (auto part : detail::split(value, ','))
                cfg.k_values.push_back(detail::parse_real(key, part));
        } else if (key == "sweep") {
            const auto parts = detail::split(value, ':');
            if (parts.size() != 3)
                throw ConfigError("sweep must be start:stop:steps, got '" + value + "'");
            cfg.sweep = FluxSweep{detail::parse_real(key, parts[0]), detail::parse_real(key, parts[1]),
                                  detail::parse_int(key, parts[2])};
        } else if (key == "grid-n") {
            cfg.grid_n = detail::parse_int(key, value);
        } else if (key == "tol") {
            cfg.tol = detail::parse_real(key, value);
        } else if (key == "out") {
            cfg.output_path = value;
        } else {
            throw ConfigError("unknown setting '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

/// 17 significant digits with a '.' separator, independent of the global locale.
inline std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace detail {

inline void echo_config(std::ostringstream& os, std::string_view command, const RunConfig& cfg) {
    const auto& p = cfg.params;
    os << "# dislokon " << command << '\n';
    os << "# scenario=" << to_string(cfg.scenario) << '\n';
    os << "# mass=" << format_real(p.m) << '\n';
    os << "# charge=" << format_real(p.q) << '\n';
    os << "# b0=" << format_real(p.b0) << '\n';
    os << "# flux=" << format_real(p.phi_b) << '\n';
    os << "# chi=" << format_real(p.chi) << '\n';
    os << "# omega0=" << format_real(p.omega0) << '\n';
    os << "# nu=" << format_real(p.nu) << '\n';
    os << "# r0=" << (p.r0 ? format_real(*p.r0) : std::string("none")) << '\n';
    os << "# n-max=" << cfg.n_max << '\n';
    os << "# l-min=" << cfg.l_min << '\n';
    os << "# l-max=" << cfg.l_max << '\n';
    os << "# k=";
    for (std::size_t i = 0; i < cfg.k_values.size(); ++i)
        os << (i ? "," : "") << format_real(cfg.k_values[i]);
    os << '\n';
    if (cfg.sweep)
        os << "# sweep=" << format_real(cfg.sweep->start) << ':' << format_real(cfg.sweep->stop) << ':'
           << cfg.sweep->steps << '\n';
}

inline int first_radial(TableScenario s) {
    return s == TableScenario::linear || s == TableScenario::linear_n1 ? 1 : 0;
}

inline int last_radial(const RunConfig& cfg) {
    return cfg.scenario == TableScenario::linear_n1 ? 1 : cfg.n_max;
}

inline EnergyLevel compute_level(TableScenario s, const PhysicalParams& p, const QuantumNumbers& qn) {
    switch (s) {
    case TableScenario::landau: return energy_landau(p, qn);
    case TableScenario::hardwall: return energy_hardwall_approx(p, qn);
    case TableScenario::linear: return energy_linear(p, qn);
    case TableScenario::linear_n1: return energy_ground_n1(p, qn);
    }
    throw Error(ErrorKind::InvalidParams, "unknown scenario");
}

struct RowResult {
    std::optional<EnergyLevel> level;
    std::string status;
};

inline RowResult try_level(TableScenario s, const PhysicalParams& p, const QuantumNumbers& qn) {
    try {
        auto level = compute_level(s, p, qn);
        const std::string status = level.regime_warning() ? "low-regime-ratio" : "ok";
        return {level, status};
    } catch (const Error& e) {
        return {std::nullopt, std::string(to_string(e.kind()))};
    }
}

} // namespace detail

/// One row per (n, l, k), ordered by n, then l, then k. Formula errors are
/// reported in the status column; the table is always complete.
inline std::string cmd_spectrum(const RunConfig& cfg) {
    cfg.validate();
    std::ostringstream os;
    os.imbue(std::locale::classic());
    detail::echo_config(os, "spectrum", cfg);
    os << "scenario,n,l,k,l_eff,e_squared,e_plus,e_minus,status\n";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int n = detail::first_radial(cfg.scenario); n <= detail::last_radial(cfg); ++n) {
        for (int l = cfg.l_min; l <= cfg.l_max; ++l) {
            for (double k : cfg.k_values) {
                const QuantumNumbers qn{n, l, k};
                const auto row = detail::try_level(cfg.scenario, cfg.params, qn);
                const double l_eff = effective_angular_momentum(cfg.params, qn);
                os << to_string(cfg.scenario) << ',' << n << ',' << l << ',' << format_real(k) << ','
                   << format_real(l_eff) << ',' << format_real(row.level ? row.level->e_squared : nan) << ','
                   << format_real(row.level ? row.level->e_plus : nan) << ','
                   << format_real(row.level ? row.level->e_minus : nan) << ',' << row.status << '\n';
            }
        }
    }
    return os.str();
}

/// E+ over the flux grid. `period_rel_diff` holds
/// (E(phi + 2pi/q, l) - E(phi, l - 1)) / |E(phi, l - 1)| wherever phi + 2pi/q
/// is itself a grid point; it is empty elsewhere.
inline std::string cmd_sweep_flux(const RunConfig& cfg) {
    cfg.validate();
    if (!cfg.sweep)
        throw ConfigError("sweep command needs --sweep start:stop:steps");
    const auto& sweep = *cfg.sweep;

    std::ostringstream os;
    os.imbue(std::locale::classic());
    detail::echo_config(os, "sweep", cfg);
    os << "phi_b,n,l,k,e_plus,period_rel_diff,status\n";

    std::optional<double> period;
    if (cfg.params.q != 0.0)
        period = cfg.params.flux_period();
    const double step = sweep.step();
    const auto aligned_index = [&](double phi) -> std::optional<int> {
        if (!period)
            return std::nullopt;
        const double target = phi + *period;
        const double pos = (target - sweep.start) / step;
        const double j = std::round(pos);
        if (j < 0.0 || j >= sweep.steps || std::abs(pos - j) > 1e-9)
            return std::nullopt;
        return static_cast<int>(j);
    };

    for (int i = 0; i < sweep.steps; ++i) {
        PhysicalParams p = cfg.params;
        p.phi_b = sweep.at(i);
        const auto shifted = aligned_index(p.phi_b);
        for (int n = detail::first_radial(cfg.scenario); n <= detail::last_radial(cfg); ++n) {
            for (int l = cfg.l_min; l <= cfg.l_max; ++l) {
                for (double k : cfg.k_values) {
                    const QuantumNumbers qn{n, l, k};
                    const auto row = detail::try_level(cfg.scenario, p, qn);
                    std::string check;
                    if (shifted && row.level) {
                        PhysicalParams ahead = cfg.params;
                        ahead.phi_b = sweep.at(*shifted);
                        const auto forward = detail::try_level(cfg.scenario, ahead, qn);
                        const auto lowered = detail::try_level(cfg.scenario, p, QuantumNumbers{n, l - 1, k});
                        if (forward.level && lowered.level)
                            check = format_real((forward.level->e_plus - lowered.level->e_plus) /
                                                std::abs(lowered.level->e_plus));
                    }
                    os << format_real(p.phi_b) << ',' << n << ',' << l << ',' << format_real(k) << ','
                       << format_real(row.level ? row.level->e_plus : std::numeric_limits<double>::quiet_NaN())
                       << ',' << check << ',' << row.status << '\n';
                }
            }
        }
    }
    return os.str();
}

struct VerifyOutcome {
    std::string text;
    int exit_code = 0; ///< 0 when every state verified within tolerance, else 1
};

namespace detail {

inline std::string describe(const OracleReport& r, std::string_view status) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << "closed_tau=" << format_real(r.closed_form_tau) << " numeric_tau=" << format_real(r.numeric_tau)
       << " fine_tau=" << format_real(r.fine_tau)
       << " richardson_tau=" << format_real(r.richardson_tau.value_or(std::nan("")));
    if (r.exact_tau)
        os << " exact_tau=" << format_real(*r.exact_tau);
    os << " rel_err=" << format_real(r.rel_err) << " e_closed=" << format_real(r.closed_form_e)
       << " e_numeric=" << format_real(r.numeric_e) << " omega=" << format_real(r.cyclotron)
       << " r_max=" << format_real(r.r_max) << " grid_n=" << r.grid_n << " status=" << status;
    return os.str();
}

} // namespace detail

/// Oracle report lines for every configured state. `linear` and `linear-n1`
/// both verify the constrained n = 1 ground state.
inline VerifyOutcome cmd_verify(const RunConfig& cfg, double tol) {
    cfg.validate();
    Scenario scenario = Scenario::landau;
    switch (cfg.scenario) {
    case TableScenario::landau: scenario = Scenario::landau; break;
    case TableScenario::hardwall: scenario = Scenario::hardwall; break;
    case TableScenario::linear:
    case TableScenario::linear_n1: scenario = Scenario::linear; break;
    }
    const int n_first = scenario == Scenario::linear ? 1 : 0;
    const int n_last = scenario == Scenario::linear ? 1 : cfg.n_max;

    VerifyOutcome out;
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << "# dislokon verify scenario=" << to_string(scenario) << " tol=" << format_real(tol) << '\n';
    for (int n = n_first; n <= n_last; ++n) {
        for (int l = cfg.l_min; l <= cfg.l_max; ++l) {
            for (double k : cfg.k_values) {
                os << "n=" << n << " l=" << l << " k=" << format_real(k) << ' ';
                try {
                    const auto report = verify_scenario(cfg.params, QuantumNumbers{n, l, k}, scenario, tol,
                                                        cfg.grid_n);
                    os << detail::describe(report, "pass") << '\n';
                } catch (const MismatchError& e) {
                    os << detail::describe(e.report(), "fail") << '\n';
                    out.exit_code = 1;
                } catch (const Error& e) {
                    os << "status=" << to_string(e.kind()) << " message=\"" << e.what() << "\"\n";
                    out.exit_code = 1;
                }
            }
        }
    }
    out.text = os.str();
    return out;
}

} // namespace dislokon::cli

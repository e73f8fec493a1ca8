// cli.hpp — Run configuration (flat key = value documents), output writers and command dispatch

#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "jcm/errors.hpp"
#include "jcm/experiments.hpp"
#include "jcm/svg.hpp"

namespace jcm {

/// Single-trajectory run used by the `evolve` command.
struct EvolveSpec {
    double theta0 = 0.0;
    double phi0 = 0.0;
    int n = 1;
    bool perpendicular = false;  // overrides theta0/phi0 with the perpendicular state

    bool operator==(const EvolveSpec&) const = default;
};

struct RunConfig {
    SweepSpec sweep;             // model, space, integrator knobs and the grid
    EvolveSpec evolve;
    std::string output_dir;
    bool emit_svg = true;
    bool timestamp = true;

    bool operator==(const RunConfig&) const = default;
};

inline constexpr const char* kOutputRootEnv = "JCM_OUTPUT_ROOT";

inline std::string default_output_dir()
{
    const char* root = std::getenv(kOutputRootEnv);
    return root && *root ? std::string(root) : std::string("jcm-output");
}

// --- parsing -----------------------------------------------------------------

struct ConfigEntry {
    std::string key;
    std::string value;
    std::string origin;  // "line 3" or "--set"
    std::size_t line = 0;
    std::size_t key_col = 1;
    std::size_t value_col = 1;

    std::string where(bool at_value) const
    {
        if (line == 0) return origin;
        return "line " + std::to_string(line) + ", column " + std::to_string(at_value ? value_col : key_col);
    }
};

namespace detail {

inline std::string_view trim(std::string_view s, std::size_t* lead = nullptr)
{
    std::size_t a = 0, b = s.size();
    while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
    while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
    if (lead) *lead = a;
    return s.substr(a, b - a);
}

inline bool valid_key(std::string_view k)
{
    if (k.empty()) return false;
    for (char c : k)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) return false;
    return k.front() != '.' && k.back() != '.';
}

} // namespace detail

/// Splits a document into key = value entries. '#' starts a comment.
inline std::vector<ConfigEntry> tokenize_config(std::string_view text)
{
    std::vector<ConfigEntry> out;
    std::size_t line_no = 0, pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        ++line_no;
        pos = eol + 1;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        std::size_t lead = 0;
        if (detail::trim(line, &lead).empty()) {
            if (eol == text.size()) break;
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ", column " + std::to_string(line.size() + 1) +
                              ": expected 'key = value'");
        }
        std::size_t klead = 0, vlead = 0;
        const std::string_view key = detail::trim(line.substr(0, eq), &klead);
        const std::string_view value = detail::trim(line.substr(eq + 1), &vlead);
        ConfigEntry e{std::string(key), std::string(value), "", line_no, klead + 1, eq + 2 + vlead};
        if (!detail::valid_key(key)) throw ConfigError(e.where(false) + ": malformed key '" + e.key + "'");
        if (value.empty()) throw ConfigError(e.where(true) + ": missing value for '" + e.key + "'");
        out.push_back(std::move(e));
        if (eol == text.size()) break;
    }
    return out;
}

/// Parses a `--set key=value` argument.
inline ConfigEntry parse_override(const std::string& arg)
{
    const std::size_t eq = arg.find('=');
    if (eq == std::string::npos) throw ConfigError("--set " + arg + ": expected key=value");
    ConfigEntry e{std::string(detail::trim(std::string_view(arg).substr(0, eq))),
                  std::string(detail::trim(std::string_view(arg).substr(eq + 1))), "--set " + arg, 0, 1, 1};
    if (!detail::valid_key(e.key)) throw ConfigError("--set " + arg + ": malformed key");
    if (e.value.empty()) throw ConfigError("--set " + arg + ": missing value");
    return e;
}

namespace detail {

inline double parse_double(const ConfigEntry& e, std::string_view s)
{
    s = trim(s);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw ConfigError(e.where(true) + ": '" + std::string(s) + "' is not a finite number (" + e.key + ")");
    }
    return v;
}

inline long long parse_int(const ConfigEntry& e, std::string_view s)
{
    s = trim(s);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigError(e.where(true) + ": '" + std::string(s) + "' is not an integer (" + e.key + ")");
    }
    return v;
}

inline std::size_t parse_count(const ConfigEntry& e)
{
    const long long v = parse_int(e, e.value);
    if (v < 0) throw ConfigError(e.where(true) + ": " + e.key + " must be >= 0");
    return static_cast<std::size_t>(v);
}

inline bool parse_bool(const ConfigEntry& e)
{
    if (e.value == "true" || e.value == "yes" || e.value == "1") return true;
    if (e.value == "false" || e.value == "no" || e.value == "0") return false;
    throw ConfigError(e.where(true) + ": '" + e.value + "' is not a boolean (" + e.key + ")");
}

template <class T, class F>
std::vector<T> parse_list(const ConfigEntry& e, F&& item)
{
    std::vector<T> out;
    std::string_view s = e.value;
    while (true) {
        const std::size_t comma = s.find(',');
        out.push_back(item(e, s.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        s = s.substr(comma + 1);
    }
    return out;
}

struct GridKeys {
    std::optional<double> start, stop;
    std::optional<std::size_t> points;
    bool explicit_list = false;
};

} // namespace detail

/// Builds a validated RunConfig. Precedence: built-in defaults for the sweep
/// kind, then the document, then overrides in order.
inline RunConfig parse_config(std::string_view text, const std::vector<ConfigEntry>& overrides = {},
                              std::optional<SweepKind> kind_hint = std::nullopt)
{
    std::vector<ConfigEntry> entries = tokenize_config(text);
    {
        std::map<std::string, std::size_t> seen;
        for (const auto& e : entries) {
            if (auto it = seen.find(e.key); it != seen.end()) {
                throw ConfigError(e.where(false) + ": duplicate key '" + e.key + "' (first set on line " +
                                  std::to_string(it->second) + ")");
            }
            seen[e.key] = e.line;
        }
    }
    entries.insert(entries.end(), overrides.begin(), overrides.end());

    std::optional<SweepKind> kind;
    for (const auto& e : entries) {
        if (e.key != "sweep.kind") continue;
        kind = parse_sweep_kind(e.value);
        if (!kind) {
            throw ConfigError(e.where(true) + ": unknown sweep.kind '" + e.value +
                              "' (negativity_theta, negativity_delta, gp_theta, gp_delta, bloch_traj)");
        }
    }
    if (kind_hint) {
        if (kind && *kind != *kind_hint) {
            throw ConfigError(std::string("sweep.kind = ") + to_string(*kind) + " conflicts with the command (" +
                              to_string(*kind_hint) + ")");
        }
        kind = kind_hint;
    }
    if (!kind) throw ConfigError("sweep.kind is required");

    RunConfig cfg;
    cfg.sweep = default_sweep(*kind);
    cfg.output_dir = default_output_dir();
    detail::GridKeys grid;
    bool delta_set = false;

    using Setter = std::function<void(const ConfigEntry&)>;
    ModelParams& m = cfg.sweep.base_params;
    const std::map<std::string, Setter> table = {
        {"sweep.kind", [](const ConfigEntry&) {}},
        {"model.delta", [&](const ConfigEntry& e) { m.delta = detail::parse_double(e, e.value); delta_set = true; }},
        {"model.chi", [&](const ConfigEntry& e) { m.chi = detail::parse_double(e, e.value); }},
        {"model.g", [&](const ConfigEntry& e) { m.g = detail::parse_double(e, e.value); }},
        {"model.gamma", [&](const ConfigEntry& e) { m.gamma = detail::parse_double(e, e.value); }},
        {"model.p", [&](const ConfigEntry& e) { m.p = detail::parse_double(e, e.value); }},
        {"model.p_z", [&](const ConfigEntry& e) { m.p_z = detail::parse_double(e, e.value); }},
        {"space.n_max", [&](const ConfigEntry& e) { cfg.sweep.space.n_max = detail::parse_count(e); }},
        {"integrator.steps_per_period",
         [&](const ConfigEntry& e) { cfg.sweep.steps_per_period = detail::parse_count(e); }},
        {"integrator.record_stride", [&](const ConfigEntry& e) { cfg.sweep.record_stride = detail::parse_count(e); }},
        {"integrator.horizon_periods",
         [&](const ConfigEntry& e) { cfg.sweep.horizon_periods = detail::parse_double(e, e.value); }},
        {"sweep.grid",
         [&](const ConfigEntry& e) {
             cfg.sweep.grid = detail::parse_list<double>(e, detail::parse_double);
             grid.explicit_list = true;
         }},
        {"sweep.grid_start", [&](const ConfigEntry& e) { grid.start = detail::parse_double(e, e.value); }},
        {"sweep.grid_stop", [&](const ConfigEntry& e) { grid.stop = detail::parse_double(e, e.value); }},
        {"sweep.grid_points", [&](const ConfigEntry& e) { grid.points = detail::parse_count(e); }},
        {"sweep.m_values",
         [&](const ConfigEntry& e) {
             cfg.sweep.m_values = detail::parse_list<int>(
                 e, [](const ConfigEntry& x, std::string_view s) { return static_cast<int>(detail::parse_int(x, s)); });
         }},
        {"sweep.workers", [&](const ConfigEntry& e) { cfg.sweep.workers = detail::parse_count(e); }},
        {"evolve.theta0", [&](const ConfigEntry& e) { cfg.evolve.theta0 = detail::parse_double(e, e.value); }},
        {"evolve.phi0", [&](const ConfigEntry& e) { cfg.evolve.phi0 = detail::parse_double(e, e.value); }},
        {"evolve.n", [&](const ConfigEntry& e) { cfg.evolve.n = static_cast<int>(detail::parse_int(e, e.value)); }},
        {"evolve.perpendicular", [&](const ConfigEntry& e) { cfg.evolve.perpendicular = detail::parse_bool(e); }},
        {"output.dir", [&](const ConfigEntry& e) { cfg.output_dir = e.value; }},
        {"output.svg", [&](const ConfigEntry& e) { cfg.emit_svg = detail::parse_bool(e); }},
        {"output.timestamp", [&](const ConfigEntry& e) { cfg.timestamp = detail::parse_bool(e); }},
    };

    for (const auto& e : entries) {
        const auto it = table.find(e.key);
        if (it == table.end()) throw ConfigError(e.where(false) + ": unknown key '" + e.key + "'");
        it->second(e);
    }

    const bool any_range = grid.start || grid.stop || grid.points;
    if (any_range) {
        if (grid.explicit_list) throw ConfigError("sweep.grid conflicts with sweep.grid_start/stop/points");
        if (!(grid.start && grid.stop && grid.points)) {
            throw ConfigError("sweep.grid_start, sweep.grid_stop and sweep.grid_points must be given together");
        }
        cfg.sweep.grid = linspace(*grid.start, *grid.stop, *grid.points);
    }
    if (is_theta_sweep(*kind) && !delta_set) m.delta = m.chi;
    if (*kind == SweepKind::bloch_traj && !grid.explicit_list && !any_range) cfg.sweep.grid = {m.chi, m.chi + 2.0 * m.g};

    try {
        cfg.sweep.validate();
        if (cfg.evolve.n < 1) throw std::invalid_argument("evolve.n must be >= 1");
        if (!std::isfinite(cfg.evolve.theta0) || !std::isfinite(cfg.evolve.phi0)) {
            throw std::invalid_argument("evolve.theta0 and evolve.phi0 must be finite");
        }
        if (cfg.output_dir.empty()) throw std::invalid_argument("output.dir must not be empty");
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid configuration: ") + e.what());
    }
    return cfg;
}

/// Canonical document for a configuration; parse_config(serialize(c)) == c.
inline std::string serialize(const RunConfig& c)
{
    std::ostringstream os;
    os << std::setprecision(std::numeric_limits<double>::max_digits10);
    const ModelParams& m = c.sweep.base_params;
    os << "sweep.kind = " << to_string(c.sweep.kind) << '\n';
    os << "sweep.grid = ";
    for (std::size_t i = 0; i < c.sweep.grid.size(); ++i) os << (i ? ", " : "") << c.sweep.grid[i];
    os << '\n';
    os << "sweep.m_values = ";
    for (std::size_t i = 0; i < c.sweep.m_values.size(); ++i) os << (i ? ", " : "") << c.sweep.m_values[i];
    os << '\n';
    os << "sweep.workers = " << c.sweep.workers << '\n';
    os << "model.delta = " << m.delta << '\n';
    os << "model.chi = " << m.chi << '\n';
    os << "model.g = " << m.g << '\n';
    os << "model.gamma = " << m.gamma << '\n';
    os << "model.p = " << m.p << '\n';
    os << "model.p_z = " << m.p_z << '\n';
    os << "space.n_max = " << c.sweep.space.n_max << '\n';
    os << "integrator.steps_per_period = " << c.sweep.steps_per_period << '\n';
    os << "integrator.record_stride = " << c.sweep.record_stride << '\n';
    os << "integrator.horizon_periods = " << c.sweep.horizon_periods << '\n';
    os << "evolve.theta0 = " << c.evolve.theta0 << '\n';
    os << "evolve.phi0 = " << c.evolve.phi0 << '\n';
    os << "evolve.n = " << c.evolve.n << '\n';
    os << "evolve.perpendicular = " << (c.evolve.perpendicular ? "true" : "false") << '\n';
    os << "output.dir = " << c.output_dir << '\n';
    os << "output.svg = " << (c.emit_svg ? "true" : "false") << '\n';
    os << "output.timestamp = " << (c.timestamp ? "true" : "false") << '\n';
    return os.str();
}

// --- outputs ---------------------------------------------------------------

inline std::string utc_timestamp()
{
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline std::filesystem::path prepare_output_dir(const std::string& dir)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    const fs::path p(dir);
    fs::create_directories(p, ec);
    if (ec || !fs::is_directory(p)) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
    const fs::path probe = p / ".jcm-write-test";
    {
        std::ofstream f(probe);
        if (!f) throw IoError("output directory '" + dir + "' is not writable");
    }
    fs::remove(probe, ec);
    return p;
}

template <class Writer>
inline void write_file(const std::filesystem::path& path, Writer&& w)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
    w(f);
    f.flush();
    if (!f) throw IoError("write to '" + path.string() + "' failed");
}

namespace detail {

inline std::string fmt_param(const char* name, double v)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s=%.3g", name, std::abs(v) < 1e-12 ? 0.0 : v);
    return buf;
}

} // namespace detail

/// Human-readable remarks for the run header.
inline std::vector<std::string> config_notes(const RunConfig& c)
{
    std::vector<std::string> notes;
    const ModelParams& m = c.sweep.base_params;
    const SweepKind k = c.sweep.kind;
    if (k == SweepKind::negativity_delta || k == SweepKind::gp_delta || k == SweepKind::bloch_traj) {
        const auto [lo, hi] = std::minmax_element(c.sweep.grid.begin(), c.sweep.grid.end());
        if (m.chi >= *lo && m.chi <= *hi) {
            notes.push_back("resonance: the delta grid contains the n = 1 resonance delta = chi = " +
                            detail::fmt_param("", m.chi).substr(1));
        }
    } else if (is_resonant(m, 1)) {
        notes.push_back("resonance: delta = chi satisfies delta = chi(2n-1) for n = 1");
    } else {
        for (int n = 2; n <= 4; ++n)
            if (is_resonant(m, n)) notes.push_back("resonance: delta = chi(2n-1) holds for n = " + std::to_string(n));
    }
    if (m.p == 0.0) notes.push_back("atomic relaxation p = 0 (not stated for the figures; override with model.p)");
    return notes;
}

/// Writes the SVG renderings of a sweep. Returns the files written; an empty
/// result writes nothing and reports a warning.
inline std::vector<std::filesystem::path> emit_svg(const SweepResult& res, const std::filesystem::path& dir,
                                                   std::ostream& warn)
{
    std::vector<std::filesystem::path> files;
    if (res.empty()) {
        warn << "warning: empty result, no SVG written\n";
        return files;
    }
    const std::string kind = to_string(res.spec.kind);
    const char* pname = is_theta_sweep(res.spec.kind) ? "theta0" : "delta";

    switch (res.spec.kind) {
    case SweepKind::negativity_theta:
    case SweepKind::negativity_delta: {
        svg::LineChart closed{kind + ": closed", "t g", "negativity", {}}, open{kind + ": open", "t g", "negativity", {}};
        const std::size_t n = res.spec.grid.size();
        for (std::size_t i = 0; i < n; ++i) {
            svg::Series s{detail::fmt_param(pname, res.spec.grid[i]), {}, {}, {svg::ramp_color(i, n), 1.0, ""}};
            svg::Series o = s;
            for (const auto& r : res.negativity) {
                if (r.param != res.spec.grid[i]) continue;
                s.x.push_back(r.t);
                s.y.push_back(r.neg_closed);
                o.x.push_back(r.t);
                o.y.push_back(r.neg_open);
            }
            closed.series.push_back(std::move(s));
            open.series.push_back(std::move(o));
        }
        files.push_back(dir / (kind + "_closed.svg"));
        write_file(files.back(), [&](std::ostream& os) { closed.render(os); });
        files.push_back(dir / (kind + "_open.svg"));
        write_file(files.back(), [&](std::ostream& os) { open.render(os); });
        break;
    }
    case SweepKind::gp_theta:
    case SweepKind::gp_delta: {
        svg::LineChart chart{kind + ": delta phi = phi_g - phi_u (wrapped)", pname, "delta phi [rad]", {}};
        const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
        for (std::size_t j = 0; j < res.spec.m_values.size(); ++j) {
            const int m = res.spec.m_values[j];
            svg::Series s{"tau = " + std::to_string(m) + "T", {}, {}, {colors[j % 5], 1.4, ""}};
            for (const auto& r : res.phases) {
                if (r.phase.m != m) continue;
                s.x.push_back(r.param);
                s.y.push_back(r.phase.valid() ? r.phase.delta_phi_wrapped : std::numeric_limits<double>::quiet_NaN());
            }
            chart.series.push_back(std::move(s));
        }
        files.push_back(dir / (kind + ".svg"));
        write_file(files.back(), [&](std::ostream& os) { chart.render(os); });
        break;
    }
    case SweepKind::bloch_traj: {
        for (const auto& c : res.bloch) {
            svg::BlochView view;
            view.title = c.name + " (" + detail::fmt_param("delta", c.params.delta) + ", " +
                         detail::fmt_param("chi", c.params.chi) + ")";
            auto pts = [](const std::vector<BlochSample>& s) {
                std::vector<std::array<double, 3>> p;
                for (const auto& b : s) p.push_back(b.r.r());
                return p;
            };
            view.series.push_back({"unitary", pts(c.unitary), {"#000000", 1.6, ""}});
            view.series.push_back({"rho projection", pts(c.rho_proj), {"#7fc8f8", 1.4, ""}});
            if (c.tracking_ok) view.series.push_back({"eigenvector", pts(c.eigvec), {"#1f4fd8", 1.4, "5,3"}});
            view.arrows.push_back({c.axis, {"#000000", 2.0, ""}, "rotation axis"});
            const BlochVector r0 = c.unitary.front().r;
            view.arrows.push_back({r0.r(), {"#2ca02c", 2.0, ""}, "initial state"});
            files.push_back(dir / ("bloch_" + c.name + ".svg"));
            write_file(files.back(), [&](std::ostream& os) { view.render(os); });
            if (!c.tracking_ok) warn << "warning: " << c.name << ": eigenvector path missing (" << c.note << ")\n";
        }
        break;
    }
    }
    return files;
}

// --- evolve ----------------------------------------------------------------

struct EvolveRow {
    double t = 0.0;
    double neg_closed = 0.0, neg_open = 0.0;
    double phi_u = 0.0, phi_g = 0.0, delta_phi_wrapped = 0.0;
    double omega_plus = 1.0;
};

/// Closed and open evolution of one initial state over the configured
/// horizon, with negativities and both geometric phases along the way.
inline std::vector<EvolveRow> run_evolve(const RunConfig& c)
{
    const SweepSpec& s = c.sweep;
    const ModelParams& m = s.base_params;
    const InitialStateSpec init =
        c.evolve.perpendicular ? perpendicular_state(m, c.evolve.n) : InitialStateSpec{c.evolve.theta0, c.evolve.phi0, c.evolve.n};
    const double period = rabi_period(m, init.n);
    IntegratorConfig cfg{period / static_cast<double>(s.steps_per_period), s.horizon_periods * period, 1};

    const StateVector psi0 = initial_state(init, s.space);
    const PureTrajectory closed = evolve_closed(hamiltonian(m, s.space), psi0, cfg, s.space, m.closed());
    const DensityTrajectory open = evolve_lindblad(lindblad_spec(m, s.space), projector(psi0), cfg, s.space, m);
    const PhaseSeries pu = unitary_phase_series(closed);
    const EigenTrack track = track_dominant_eigenvector(open);
    const PhaseSeries pg = open_pure_start_phase_series(track);

    std::vector<EvolveRow> rows;
    for (std::size_t k = 0; k < closed.size(); k += s.record_stride) {
        EvolveRow r;
        r.t = closed.times[k];
        r.neg_closed = negativity(closed.states[k], s.space);
        r.neg_open = negativity(open.states[k], s.space);
        r.phi_u = pu.phase[k];
        r.phi_g = pg.phase[k];
        r.delta_phi_wrapped = std::isfinite(r.phi_u) && std::isfinite(r.phi_g) ? wrap_increment(r.phi_g - r.phi_u)
                                                                              : std::numeric_limits<double>::quiet_NaN();
        r.omega_plus = track.eigenvalue[k];
        rows.push_back(r);
    }
    return rows;
}

// --- dispatch --------------------------------------------------------------

enum class Command { evolve, sweep, bloch, validate_config };

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitTruncation = 2, kExitTracking = 3, kExitIo = 4 };

/// Runs a validated configuration and writes its outputs. Failures are
/// reported on `err` and mapped to exit codes.
inline int dispatch(Command cmd, const RunConfig& c, std::ostream& log, std::ostream& err)
{
    try {
        if (cmd == Command::validate_config) {
            log << serialize(c);
            for (const auto& n : config_notes(c)) log << "# " << n << '\n';
            return kExitOk;
        }
        const std::filesystem::path dir = prepare_output_dir(c.output_dir);
        Provenance prov;
        if (c.timestamp) prov.timestamp = utc_timestamp();
        prov.extra = config_notes(c);
        for (const auto& n : prov.extra) log << "note: " << n << '\n';

        if (cmd == Command::evolve) {
            const std::vector<EvolveRow> rows = run_evolve(c);
            const auto path = dir / "evolve.csv";
            write_file(path, [&](std::ostream& os) {
                SweepSpec header = c.sweep;
                header.grid = {c.evolve.perpendicular ? perpendicular_state(c.sweep.base_params, c.evolve.n).theta0
                                                      : c.evolve.theta0};
                write_provenance(os, header, prov);
                os << "# evolve: n = " << c.evolve.n << ", phi0 = " << c.evolve.phi0
                   << (c.evolve.perpendicular ? ", perpendicular start" : "") << '\n';
                os << std::setprecision(std::numeric_limits<double>::max_digits10);
                os << "t,neg_closed,neg_open,phi_u,phi_g,delta_phi_wrapped,omega_plus\n";
                for (const auto& r : rows) {
                    os << r.t << ',' << r.neg_closed << ',' << r.neg_open << ',' << r.phi_u << ',' << r.phi_g << ','
                       << r.delta_phi_wrapped << ',' << r.omega_plus << '\n';
                }
            });
            log << "wrote " << path.string() << " (" << rows.size() << " rows)\n";
            if (c.emit_svg && !rows.empty()) {
                svg::LineChart chart{"evolve: negativity", "t g", "negativity", {}};
                svg::Series sc{"closed", {}, {}, {"#000000", 1.4, ""}}, so{"open", {}, {}, {"#1f77b4", 1.4, ""}};
                for (const auto& r : rows) {
                    sc.x.push_back(r.t);
                    sc.y.push_back(r.neg_closed);
                    so.x.push_back(r.t);
                    so.y.push_back(r.neg_open);
                }
                chart.series = {sc, so};
                write_file(dir / "evolve.svg", [&](std::ostream& os) { chart.render(os); });
            }
            return kExitOk;
        }

        const SweepResult res = run_sweep(c.sweep);
        const auto path = dir / (std::string(to_string(c.sweep.kind)) + ".csv");
        write_file(path, [&](std::ostream& os) { write_csv(os, res, prov); });
        log << "wrote " << path.string() << " (" << res.rows() << " rows)\n";
        std::size_t invalid = 0, degraded = 0;
        for (const auto& r : res.phases) {
            invalid += r.phase.valid() ? 0 : 1;
            degraded += r.phase.valid() && r.phase.degraded() ? 1 : 0;
        }
        if (invalid) err << "warning: " << invalid << " phase rows flagged invalid\n";
        if (degraded) err << "warning: " << degraded << " phase rows flagged degraded (omega_plus < 0.05)\n";
        if (c.emit_svg) {
            for (const auto& f : emit_svg(res, dir, err)) log << "wrote " << f.string() << '\n';
        } else {
            log << "SVG output disabled\n";
        }
        return kExitOk;
    } catch (const IoError& e) {
        err << "error (I/O): " << e.what() << '\n';
        return kExitIo;
    } catch (const TruncationError& e) {
        err << "error (truncation): " << e.what() << '\n';
        return kExitTruncation;
    } catch (const TrackingError& e) {
        err << "error (tracking): " << e.what() << '\n';
        return kExitTracking;
    } catch (const SingularPhaseError& e) {
        err << "error (singular phase): " << e.what() << '\n';
        return kExitTracking;
    } catch (const StateHealthError& e) {
        err << "error (numerical health): " << e.what() << '\n';
        return kExitTracking;
    } catch (const ConvergenceError& e) {
        err << "error (numerical): " << e.what() << '\n';
        return kExitTracking;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}

} // namespace jcm

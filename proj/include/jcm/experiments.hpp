// experiments.hpp — Parameter sweeps behind the negativity, phase-robustness and Bloch-path figures

#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "jcm/dynamics.hpp"
#include "jcm/errors.hpp"
#include "jcm/geomphase.hpp"
#include "jcm/hilbert.hpp"
#include "jcm/information.hpp"
#include "jcm/model.hpp"

namespace jcm {

inline constexpr const char* kVersion = "0.1.0";

enum class SweepKind { negativity_theta, negativity_delta, gp_theta, gp_delta, bloch_traj };

inline const char* to_string(SweepKind k)
{
    switch (k) {
    case SweepKind::negativity_theta: return "negativity_theta";
    case SweepKind::negativity_delta: return "negativity_delta";
    case SweepKind::gp_theta: return "gp_theta";
    case SweepKind::gp_delta: return "gp_delta";
    case SweepKind::bloch_traj: return "bloch_traj";
    }
    return "?";
}

inline std::optional<SweepKind> parse_sweep_kind(const std::string& s)
{
    for (SweepKind k : {SweepKind::negativity_theta, SweepKind::negativity_delta, SweepKind::gp_theta,
                        SweepKind::gp_delta, SweepKind::bloch_traj})
        if (s == to_string(k)) return k;
    return std::nullopt;
}

inline bool is_theta_sweep(SweepKind k) { return k == SweepKind::negativity_theta || k == SweepKind::gp_theta; }

/// n evenly spaced values from a to b inclusive.
inline std::vector<double> linspace(double a, double b, std::size_t n)
{
    if (n == 0) return {};
    if (n == 1) return {a};
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    v.back() = b;
    return v;
}

struct SweepSpec {
    SweepKind kind = SweepKind::gp_delta;
    std::vector<double> grid;          // θ₀ for theta sweeps, Δ otherwise
    ModelParams base_params{};         // γ, p, p_z here are the open-system rates
    std::vector<int> m_values{1, 2, 3};
    SpaceSpec space{};
    std::size_t steps_per_period = kDefaultStepsPerPeriod;
    std::size_t record_stride = 20;    // time-series sweeps only
    double horizon_periods = 6.0;      // time-series sweeps only
    std::size_t workers = 0;           // 0: one per hardware thread

    bool operator==(const SweepSpec&) const = default;

    void validate() const
    {
        base_params.validate();
        if (grid.empty()) throw std::invalid_argument("sweep.grid must not be empty");
        for (double v : grid)
            if (!std::isfinite(v)) throw std::invalid_argument("sweep.grid contains a non-finite value");
        const bool up = grid.size() < 2 || grid[1] > grid[0];
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (up ? !(grid[i] > grid[i - 1]) : !(grid[i] < grid[i - 1])) {
                throw std::invalid_argument("sweep.grid must be strictly monotone");
            }
        if (is_theta_sweep(kind)) {
            if (!is_resonant(base_params, 1)) {
                throw std::invalid_argument("model.delta must equal model.chi for " + std::string(to_string(kind)) +
                                            " (resonance Δ = χ)");
            }
            const double hi = kind == SweepKind::negativity_theta ? 0.5 * std::numbers::pi : 2.0 * std::numbers::pi;
            for (double v : grid)
                if (v < -1e-12 || v > hi + 1e-12) {
                    throw std::invalid_argument("sweep.grid: θ₀ = " + std::to_string(v) + " outside [0, " +
                                                std::to_string(hi) + "]");
                }
        }
        if (kind == SweepKind::gp_theta || kind == SweepKind::gp_delta) {
            if (m_values.empty()) throw std::invalid_argument("sweep.m_values must not be empty");
            for (int m : m_values)
                if (m < 1) throw std::invalid_argument("sweep.m_values entries must be >= 1");
        }
        if (space.n_max < 1) throw std::invalid_argument("space.n_max must be >= 1");
        if (steps_per_period < 4) throw std::invalid_argument("integrator.steps_per_period must be >= 4");
        if (record_stride < 1) throw std::invalid_argument("integrator.record_stride must be >= 1");
        if (!(horizon_periods > 0.0) || !std::isfinite(horizon_periods)) {
            throw std::invalid_argument("integrator.horizon_periods must be positive");
        }
    }
};

/// Defaults per figure: θ₀ ∈ {0, π/16, …, π/2}, 64 θ₀ over [0, 2π], 81 Δ over
/// [−4, 4]; χ = 0.5 where the figure needs resonance, χ = 0 for the Δ
/// negativity sweep and the Bloch paths.
inline SweepSpec default_sweep(SweepKind kind)
{
    SweepSpec s;
    s.kind = kind;
    switch (kind) {
    case SweepKind::negativity_theta:
        s.grid = linspace(0.0, 0.5 * std::numbers::pi, 9);
        break;
    case SweepKind::negativity_delta:
        s.base_params.chi = 0.0;
        s.base_params.delta = 0.0;
        s.grid = linspace(-4.0, 4.0, 81);
        break;
    case SweepKind::gp_theta:
        s.grid = linspace(0.0, 2.0 * std::numbers::pi, 64);
        break;
    case SweepKind::gp_delta:
        s.grid = linspace(-4.0, 4.0, 81);
        break;
    case SweepKind::bloch_traj:
        s.base_params.chi = 0.0;
        s.base_params.delta = 0.0;
        s.grid = {0.0, 2.0};
        s.horizon_periods = 3.0;
        break;
    }
    return s;
}

// --- results -------------------------------------------------------------

struct NegativityRow {
    double param = 0.0;
    double t = 0.0;
    double neg_closed = 0.0;
    double neg_open = 0.0;
};

struct PhaseRow {
    double param = 0.0;
    PhaseResult phase;
};

struct BlochSample {
    double t = 0.0;
    BlochVector r;
};

struct BlochCase {
    std::string name;  // "resonant", "off_resonant", ...
    ModelParams params;
    InitialStateSpec initial;
    std::array<double, 3> axis{};  // unit rotation axis
    std::vector<BlochSample> unitary, rho_proj, eigvec;
    PlanarityReport unitary_planarity, rho_planarity, eigvec_planarity;
    bool tracking_ok = true;
    std::string note;
};

struct SweepResult {
    SweepSpec spec;
    std::vector<NegativityRow> negativity;
    std::vector<PhaseRow> phases;
    std::vector<BlochCase> bloch;

    std::size_t rows() const
    {
        std::size_t n = negativity.size() + phases.size();
        for (const auto& c : bloch) n += c.unitary.size() + c.rho_proj.size() + c.eigvec.size();
        return n;
    }
    bool empty() const { return rows() == 0; }
};

// --- worker pool -----------------------------------------------------------

/// Evaluates f(0) … f(count−1) on up to `workers` threads and returns the
/// results in index order. The exception of the lowest failing index is
/// rethrown.
template <class F>
auto parallel_map(std::size_t count, F&& f, std::size_t workers = 0) -> std::vector<decltype(f(std::size_t{}))>
{
    using R = decltype(f(std::size_t{}));
    std::vector<std::optional<R>> slots(count);
    std::vector<std::exception_ptr> errors(count);
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, count);

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                slots[i].emplace(f(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<R> out;
    out.reserve(count);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

// --- negativity sweeps ---------------------------------------------------

/// 𝒩(t) for the closed and open evolution of one initial state on a common
/// grid reaching `horizon_periods` Rabi periods of sector n.
inline std::vector<NegativityRow> negativity_series(const ModelParams& params, const InitialStateSpec& initial,
                                                    double param, const SweepSpec& spec)
{
    const double period = rabi_period(params, initial.n);
    IntegratorConfig cfg;
    cfg.dt = period / static_cast<double>(spec.steps_per_period);
    cfg.t_final = spec.horizon_periods * period;
    cfg.record_stride = spec.record_stride;

    const StateVector psi0 = initial_state(initial, spec.space);
    const PureTrajectory closed = evolve_closed(hamiltonian(params, spec.space), psi0, cfg, spec.space, params.closed());
    const DensityTrajectory open =
        evolve_lindblad(lindblad_spec(params, spec.space), projector(psi0), cfg, spec.space, params);

    std::vector<NegativityRow> rows(closed.size());
    for (std::size_t k = 0; k < closed.size(); ++k) {
        rows[k] = {param, closed.times[k], negativity(closed.states[k], spec.space), negativity(open.states[k], spec.space)};
    }
    return rows;
}

namespace detail {

inline void append_points(SweepResult& res, std::vector<std::vector<NegativityRow>>&& chunks)
{
    for (auto& c : chunks) res.negativity.insert(res.negativity.end(), c.begin(), c.end());
}

inline void append_points(SweepResult& res, std::vector<std::vector<PhaseRow>>&& chunks)
{
    for (auto& c : chunks) res.phases.insert(res.phases.end(), c.begin(), c.end());
}

inline ModelParams at_delta(const ModelParams& base, double delta)
{
    ModelParams p = base;
    p.delta = delta;
    return p;
}

inline void require_kind(const SweepSpec& spec, SweepKind kind)
{
    if (spec.kind != kind) {
        throw std::invalid_argument(std::string("sweep kind is ") + to_string(spec.kind) + ", expected " +
                                    to_string(kind));
    }
    spec.validate();
}

} // namespace detail

/// Fig. 1: resonant 𝒩(t) for each θ₀.
inline SweepResult run_negativity_theta(const SweepSpec& spec)
{
    detail::require_kind(spec, SweepKind::negativity_theta);
    SweepResult res{spec, {}, {}, {}};
    detail::append_points(res, parallel_map(
                                   spec.grid.size(),
                                   [&](std::size_t i) {
                                       return negativity_series(spec.base_params, {spec.grid[i], 0.0, 1},
                                                                spec.grid[i], spec);
                                   },
                                   spec.workers));
    return res;
}

/// Fig. 2: 𝒩(t) for each Δ from the perpendicular initial state.
inline SweepResult run_negativity_delta(const SweepSpec& spec)
{
    detail::require_kind(spec, SweepKind::negativity_delta);
    SweepResult res{spec, {}, {}, {}};
    detail::append_points(res, parallel_map(
                                   spec.grid.size(),
                                   [&](std::size_t i) {
                                       const ModelParams p = detail::at_delta(spec.base_params, spec.grid[i]);
                                       return negativity_series(p, perpendicular_state(p), spec.grid[i], spec);
                                   },
                                   spec.workers));
    return res;
}

// --- phase sweeps --------------------------------------------------------

namespace detail {

inline std::vector<PhaseRow> phase_rows(const ModelParams& p, const InitialStateSpec& init, double param,
                                        const SweepSpec& spec)
{
    const std::vector<PhaseResult> r =
        phase_checkpoints(p, init, spec.m_values, PhaseRunOptions{spec.space, spec.steps_per_period});
    std::vector<PhaseRow> rows;
    rows.reserve(r.size());
    for (const auto& x : r) rows.push_back({param, x});
    return rows;
}

} // namespace detail

/// Fig. 3: δφ(θ₀; m) at resonance.
inline SweepResult run_gp_theta(const SweepSpec& spec)
{
    detail::require_kind(spec, SweepKind::gp_theta);
    SweepResult res{spec, {}, {}, {}};
    detail::append_points(res, parallel_map(
                                   spec.grid.size(),
                                   [&](std::size_t i) {
                                       return detail::phase_rows(spec.base_params, {spec.grid[i], 0.0, 1},
                                                                 spec.grid[i], spec);
                                   },
                                   spec.workers));
    return res;
}

/// Fig. 4: δφ(Δ; m) from the perpendicular initial state.
inline SweepResult run_gp_delta(const SweepSpec& spec)
{
    detail::require_kind(spec, SweepKind::gp_delta);
    SweepResult res{spec, {}, {}, {}};
    detail::append_points(res, parallel_map(
                                   spec.grid.size(),
                                   [&](std::size_t i) {
                                       const ModelParams p = detail::at_delta(spec.base_params, spec.grid[i]);
                                       return detail::phase_rows(p, perpendicular_state(p), spec.grid[i], spec);
                                   },
                                   spec.workers));
    return res;
}

// --- Bloch paths -----------------------------------------------------------

inline BlochCase bloch_case(const ModelParams& params, const SweepSpec& spec)
{
    BlochCase c;
    c.params = params;
    c.name = is_resonant(params, 1) ? "resonant" : "off_resonant";
    c.initial = perpendicular_state(params);
    c.axis = sector_analytics(params, 1).unit_axis();

    const double period = rabi_period(params, 1);
    IntegratorConfig cfg;
    cfg.dt = period / static_cast<double>(spec.steps_per_period);
    cfg.t_final = spec.horizon_periods * period;
    cfg.record_stride = 1;  // tracking needs every step

    const StateVector psi0 = initial_state(c.initial, spec.space);
    const PureTrajectory closed = evolve_closed(hamiltonian(params, spec.space), psi0, cfg, spec.space, params.closed());
    const DensityTrajectory open =
        evolve_lindblad(lindblad_spec(params, spec.space), projector(psi0), cfg, spec.space, params);

    for (std::size_t k = 0; k < closed.size(); k += spec.record_stride) {
        c.unitary.push_back({closed.times[k], bloch_project_n1(closed.states[k], spec.space)});
        c.rho_proj.push_back({open.times[k], bloch_project_n1(open.states[k], spec.space)});
    }
    try {
        const EigenTrack track = track_dominant_eigenvector(open);
        for (std::size_t k = 0; k < track.vectors.size(); k += spec.record_stride) {
            c.eigvec.push_back({track.times[k], bloch_project_n1(track.vectors[k], spec.space)});
        }
    } catch (const TrackingError& e) {
        c.tracking_ok = false;
        c.note = e.what();
    }

    auto report = [&](const std::vector<BlochSample>& s) {
        std::vector<BlochVector> path;
        path.reserve(s.size());
        for (const auto& x : s) path.push_back(x.r);
        return planarity(path, c.axis);
    };
    c.unitary_planarity = report(c.unitary);
    c.rho_planarity = report(c.rho_proj);
    if (c.tracking_ok) c.eigvec_planarity = report(c.eigvec);
    return c;
}

/// Fig. 5: unitary, ρ-projection and tracked-eigenvector Bloch paths, one
/// case per Δ in the grid, each from its perpendicular state.
inline SweepResult run_bloch_traj(const SweepSpec& spec)
{
    detail::require_kind(spec, SweepKind::bloch_traj);
    SweepResult res{spec, {}, {}, {}};
    res.bloch = parallel_map(
        spec.grid.size(),
        [&](std::size_t i) { return bloch_case(detail::at_delta(spec.base_params, spec.grid[i]), spec); },
        spec.workers);
    // Keep names unique when the grid holds several cases of one kind.
    std::map<std::string, std::size_t> counts;
    for (const auto& b : res.bloch) ++counts[b.name];
    for (std::size_t i = 0; i < res.bloch.size(); ++i)
        if (counts[res.bloch[i].name] > 1) res.bloch[i].name += "_" + std::to_string(i);
    return res;
}

inline SweepResult run_sweep(const SweepSpec& spec)
{
    switch (spec.kind) {
    case SweepKind::negativity_theta: return run_negativity_theta(spec);
    case SweepKind::negativity_delta: return run_negativity_delta(spec);
    case SweepKind::gp_theta: return run_gp_theta(spec);
    case SweepKind::gp_delta: return run_gp_delta(spec);
    case SweepKind::bloch_traj: return run_bloch_traj(spec);
    }
    throw std::invalid_argument("run_sweep: unknown sweep kind");
}

// --- CSV output ----------------------------------------------------------

struct Provenance {
    std::string timestamp;            // empty: line omitted
    std::vector<std::string> extra;   // additional header lines, without '#'
};

inline const char* phase_flag(const PhaseResult& r)
{
    switch (r.status) {
    case PhaseStatus::singular: return "singular";
    case PhaseStatus::tracking_failed: return "tracking_failed";
    case PhaseStatus::ok: break;
    }
    return r.degraded() ? "degraded" : "ok";
}

namespace detail {

inline void write_list(std::ostream& os, const std::vector<double>& v)
{
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
}

} // namespace detail

inline void write_provenance(std::ostream& os, const SweepSpec& s, const Provenance& prov)
{
    const auto old_prec = os.precision(std::numeric_limits<double>::max_digits10);
    const ModelParams& m = s.base_params;
    os << "# jcm " << kVersion << '\n';
    if (!prov.timestamp.empty()) os << "# generated: " << prov.timestamp << '\n';
    os << "# sweep.kind = " << to_string(s.kind) << '\n';
    os << "# model: delta = " << m.delta << ", chi = " << m.chi << ", g = " << m.g << ", gamma = " << m.gamma
       << ", p = " << m.p << ", p_z = " << m.p_z << '\n';
    os << "# space.n_max = " << s.space.n_max << '\n';
    os << "# integrator: RK4, dt = T/" << s.steps_per_period << " with T = 2*pi/Omega_{1,chi} per point";
    if (s.kind == SweepKind::negativity_theta || s.kind == SweepKind::negativity_delta ||
        s.kind == SweepKind::bloch_traj) {
        os << ", record_stride = " << s.record_stride << ", horizon = " << s.horizon_periods << " T";
    }
    os << '\n';
    os << "# grid (" << (is_theta_sweep(s.kind) ? "theta0" : "delta") << ", " << s.grid.size() << " points): ";
    detail::write_list(os, s.grid);
    os << '\n';
    if (s.kind == SweepKind::gp_theta || s.kind == SweepKind::gp_delta) {
        os << "# m_values: ";
        for (std::size_t i = 0; i < s.m_values.size(); ++i) os << (i ? ", " : "") << s.m_values[i];
        os << '\n';
    }
    for (const auto& e : prov.extra) os << "# " << e << '\n';
    os.precision(old_prec);
}

inline void write_csv(std::ostream& os, const SweepResult& res, const Provenance& prov = {})
{
    write_provenance(os, res.spec, prov);
    const auto old_prec = os.precision(std::numeric_limits<double>::max_digits10);
    switch (res.spec.kind) {
    case SweepKind::negativity_theta:
    case SweepKind::negativity_delta:
        os << "param,t,neg_closed,neg_open\n";
        for (const auto& r : res.negativity) os << r.param << ',' << r.t << ',' << r.neg_closed << ',' << r.neg_open << '\n';
        break;
    case SweepKind::gp_theta:
    case SweepKind::gp_delta:
        os << "param,m,tau,phi_u,phi_g,delta_phi_wrapped,delta_phi_raw,omega_plus,valid,flag\n";
        for (const auto& r : res.phases) {
            const PhaseResult& p = r.phase;
            os << r.param << ',' << p.m << ',' << p.checkpoint_time << ',' << p.phi_u << ',' << p.phi_g << ','
               << p.delta_phi_wrapped << ',' << p.delta_phi << ',' << p.omega_plus << ',' << (p.valid() ? 1 : 0)
               << ',' << phase_flag(p) << '\n';
        }
        break;
    case SweepKind::bloch_traj:
        for (const auto& c : res.bloch) {
            os << "# case " << c.name << ": delta = " << c.params.delta << ", theta0 = " << c.initial.theta0
               << ", planarity unitary = " << c.unitary_planarity.max_off_plane
               << ", rho_proj = " << c.rho_planarity.max_off_plane;
            if (c.tracking_ok) os << ", eigvec = " << c.eigvec_planarity.max_off_plane;
            os << '\n';
            if (!c.tracking_ok) os << "# warning: case " << c.name << " eigvec series missing: " << c.note << '\n';
        }
        os << "case,series,t,x,y,z,weight\n";
        for (const auto& c : res.bloch) {
            auto emit = [&](const char* series, const std::vector<BlochSample>& s) {
                for (const auto& b : s) {
                    os << c.name << ',' << series << ',' << b.t << ',' << b.r.x << ',' << b.r.y << ',' << b.r.z << ','
                       << b.r.weight << '\n';
                }
            };
            emit("unitary", c.unitary);
            emit("rho_proj", c.rho_proj);
            emit("eigvec", c.eigvec);
        }
        break;
    }
    os.precision(old_prec);
}

} // namespace jcm

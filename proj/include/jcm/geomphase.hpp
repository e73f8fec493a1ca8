// geomphase.hpp — Kinematic geometric phases for pure and mixed-state trajectories
//
// All phases use the discrete Pancharatnam chain
//     φ(t_N) = arg⟨ψ(t₀)|ψ(t_N)⟩ − Σ_k arg⟨ψ(t_k)|ψ(t_{k+1})⟩,
// which is invariant under per-sample phase changes at any step size. The
// chain is evaluated at full and half resolution and Richardson-combined.
// Time series are unwrapped by accumulating increments in (−π, π].

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "jcm/dynamics.hpp"
#include "jcm/errors.hpp"
#include "jcm/linalg.hpp"
#include "jcm/model.hpp"

namespace jcm {

inline constexpr double kMinStepOverlap = 0.5;
inline constexpr double kSingularOverlap = 1e-8;
inline constexpr double kAmbiguousOverlap = 1e-6;
inline constexpr double kPureStartTolerance = 1e-8;
inline constexpr double kDegradedEigenvalue = 0.05;

/// Maps an increment into (−π, π]. Values within 1e-9 of −π count as +π, so
/// exact half-turns (antipodal crossings on a great circle) unwrap the same
/// way every time instead of following rounding noise.
inline double wrap_increment(double x)
{
    constexpr double pi = std::numbers::pi;
    x = std::remainder(x, 2.0 * pi);
    if (x <= -pi + 1e-9) x += 2.0 * pi;
    return x;
}

struct PhaseSeries {
    std::vector<double> times;
    std::vector<double> phase;     // unwrapped; NaN where singular
    std::vector<bool> singular;    // reference overlap vanished at this sample
};

struct EigenTrack {
    std::vector<double> times;
    std::vector<double> eigenvalue;
    std::vector<StateVector> vectors;
    double overlap_floor = 1.0;
    double min_eigenvalue = 0.0;  // smallest eigenvalue of ρ seen along the run
};

namespace detail {

// Sample preceding k on the half-resolution chain 0, 2, 4, ... (even k) or
// 0, 1, 3, 5, ... (odd k).
inline std::size_t coarse_predecessor(std::size_t k) { return k >= 2 ? k - 2 : 0; }

/// Kinematic phase series over one or more eigenbranches:
///     arg Σ_b √(w_b(t₀) w_b(t)) ⟨ψ_b(t₀)|ψ_b(t)⟩ e^{−i Σ_j arg⟨ψ_b(t_j)|ψ_b(t_{j+1})⟩}.
/// The chain is evaluated on the full grid and on the half-resolution grid;
/// their Richardson combination cancels the leading O(dt²) polygon error
/// while keeping the result exactly gauge invariant.
inline PhaseSeries kinematic_series(std::span<const EigenTrack> branches, bool weighted)
{
    if (branches.empty() || branches.front().vectors.empty()) {
        throw std::invalid_argument("kinematic_series: no samples");
    }
    const std::vector<double>& times = branches.front().times;
    const std::size_t samples = times.size();
    for (const auto& b : branches) {
        if (b.vectors.size() != samples || b.times.size() != samples) {
            throw std::invalid_argument("kinematic_series: branches sampled on different grids");
        }
    }

    PhaseSeries out;
    out.times = times;
    out.phase.assign(samples, 0.0);
    out.singular.assign(samples, false);

    const std::size_t nb = branches.size();
    std::vector<std::vector<double>> fine(nb, std::vector<double>(samples, 0.0));
    std::vector<std::vector<double>> coarse(nb, std::vector<double>(samples, 0.0));
    for (std::size_t b = 0; b < nb; ++b) {
        const auto& v = branches[b].vectors;
        for (std::size_t k = 1; k < samples; ++k) {
            const Complex step = inner(v[k - 1], v[k]);
            if (std::abs(step) < kMinStepOverlap) {
                throw TrackingError("consecutive overlap " + std::to_string(std::abs(step)) + " at t = " +
                                    std::to_string(times[k]) + "; grid too coarse");
            }
            fine[b][k] = fine[b][k - 1] + std::arg(step);
            const std::size_t j = coarse_predecessor(k);
            coarse[b][k] = coarse[b][j] + std::arg(inner(v[j], v[k]));
        }
    }

    auto weight = [&](std::size_t b, std::size_t k) {
        if (!weighted) return 1.0;
        const auto& w = branches[b].eigenvalue;
        return std::sqrt(std::max(w.front(), 0.0) * std::max(w[k], 0.0));
    };

    double last_raw = 0.0, last_phase = 0.0;
    for (std::size_t k = 1; k < samples; ++k) {
        Complex zf{}, zc{};
        double scale = 0.0;
        for (std::size_t b = 0; b < nb; ++b) {
            const double w = weight(b, k);
            const Complex ov = w * inner(branches[b].vectors.front(), branches[b].vectors[k]);
            zf += ov * std::exp(-kI * fine[b][k]);
            zc += ov * std::exp(-kI * coarse[b][k]);
            scale += w;
        }
        if (!(scale > 0.0) || std::abs(zf) < kSingularOverlap * scale) {
            out.phase[k] = std::numeric_limits<double>::quiet_NaN();
            out.singular[k] = true;
            continue;
        }
        const double raw = std::arg(zf);
        last_phase += wrap_increment(raw - last_raw);
        last_raw = raw;
        out.phase[k] = last_phase - wrap_increment(std::arg(zc) - raw) / 3.0;
    }
    return out;
}

inline std::size_t sample_at_time(std::span<const double> times, double t_end)
{
    const double tol = 1e-9 * std::max(1.0, std::abs(t_end));
    auto it = std::lower_bound(times.begin(), times.end(), t_end - tol);
    if (it == times.end() || std::abs(*it - t_end) > tol) {
        throw std::invalid_argument("t_end = " + std::to_string(t_end) + " is not on the sampling grid");
    }
    return static_cast<std::size_t>(it - times.begin());
}

inline double phase_at(const PhaseSeries& s, std::size_t k)
{
    if (s.singular[k]) {
        throw SingularPhaseError("phase undefined at t = " + std::to_string(s.times[k]) +
                                 ": state is orthogonal to the initial state");
    }
    return s.phase[k];
}

} // namespace detail

/// Unwrapped Pancharatnam phase of a sequence of pure states.
inline PhaseSeries pancharatnam_series(std::span<const StateVector> states, std::span<const double> times)
{
    if (states.empty() || states.size() != times.size()) {
        throw std::invalid_argument("pancharatnam_series: need matching non-empty states and times");
    }
    EigenTrack path;
    path.times.assign(times.begin(), times.end());
    path.vectors.assign(states.begin(), states.end());
    path.eigenvalue.assign(states.size(), 1.0);
    return detail::kinematic_series(std::span<const EigenTrack>(&path, 1), false);
}

inline PhaseSeries unitary_phase_series(const PureTrajectory& traj)
{
    return pancharatnam_series(traj.states, traj.times);
}

/// φ_u at t_end for a closed-system trajectory.
inline double phase_unitary(const PureTrajectory& traj, double t_end)
{
    const PhaseSeries s = unitary_phase_series(traj);
    return detail::phase_at(s, detail::sample_at_time(traj.times, t_end));
}

// --- eigenvector tracking -----------------------------------------------------

namespace detail {

struct BranchStep {
    std::size_t column = 0;
    Complex overlap{};
};

// Picks the eigenvector with the largest |⟨prev|v⟩|. Fails when the runner-up
// is within kAmbiguousOverlap or the best overlap is too small.
inline BranchStep follow_branch(const EigenDecomposition& eig, std::span<const Complex> prev, double t)
{
    const std::size_t n = eig.eigenvalues.size();
    double best = -1.0, second = -1.0;
    BranchStep step;
    for (std::size_t j = 0; j < n; ++j) {
        Complex ov{};
        for (std::size_t i = 0; i < n; ++i) ov += std::conj(prev[i]) * eig.eigenvectors(i, j);
        const double mag = std::abs(ov);
        if (mag > best) {
            second = best;
            best = mag;
            step = {j, ov};
        } else if (mag > second) {
            second = mag;
        }
    }
    if (best < kMinStepOverlap) {
        throw TrackingError("eigenvector track lost at t = " + std::to_string(t) + " (overlap " + std::to_string(best) +
                            ")");
    }
    if (best - second < kAmbiguousOverlap) {
        throw TrackingError("eigenvector track ambiguous at t = " + std::to_string(t) +
                            ": two eigenvectors overlap equally with the tracked branch");
    }
    return step;
}

// Column of `eig`, rephased so that ⟨prev|v⟩ is real and positive.
inline StateVector gauge_fixed(const EigenDecomposition& eig, const BranchStep& step)
{
    StateVector v = eig.vector(step.column);
    const Complex phase = std::conj(step.overlap) / std::abs(step.overlap);
    for (auto& z : v) z *= phase;
    return v;
}

} // namespace detail

inline constexpr double kBranchWeightFloor = 1e-12;

/// Follows every eigenbranch of ρ(t) whose initial eigenvalue exceeds
/// `min_weight`. Each branch continues through the eigenvector of maximal
/// overlap with its previous vector; two branches claiming the same
/// eigenvector is reported as a crossing.
inline std::vector<EigenTrack> track_eigenbranches(const DensityTrajectory& traj,
                                                   double min_weight = kBranchWeightFloor)
{
    if (traj.size() == 0) throw std::invalid_argument("track_eigenbranches: empty trajectory");
    EigenDecomposition eig = hermitian_eig(traj.states.front());
    std::vector<EigenTrack> tracks;
    for (std::size_t k = 0; k < eig.eigenvalues.size(); ++k) {
        if (eig.eigenvalues[k] <= min_weight) continue;
        EigenTrack t;
        t.times.reserve(traj.size());
        t.eigenvalue.reserve(traj.size());
        t.vectors.reserve(traj.size());
        t.times.push_back(traj.times.front());
        t.eigenvalue.push_back(eig.eigenvalues[k]);
        t.vectors.push_back(eig.vector(k));
        tracks.push_back(std::move(t));
    }
    if (tracks.empty()) throw TrackingError("track_eigenbranches: initial state has no positive eigenvalue");
    double lmin = eig.eigenvalues.back();

    std::vector<std::size_t> used;
    for (std::size_t s = 1; s < traj.size(); ++s) {
        eig = hermitian_eig(traj.states[s], eig.eigenvectors);
        lmin = std::min(lmin, eig.eigenvalues.back());
        used.clear();
        for (auto& t : tracks) {
            const detail::BranchStep step = detail::follow_branch(eig, t.vectors.back(), traj.times[s]);
            if (std::find(used.begin(), used.end(), step.column) != used.end()) {
                throw TrackingError("eigenbranches cross at t = " + std::to_string(traj.times[s]));
            }
            used.push_back(step.column);
            t.overlap_floor = std::min(t.overlap_floor, std::abs(step.overlap));
            t.times.push_back(traj.times[s]);
            t.eigenvalue.push_back(eig.eigenvalues[step.column]);
            t.vectors.push_back(detail::gauge_fixed(eig, step));
        }
    }
    for (auto& t : tracks) t.min_eigenvalue = lmin;
    return tracks;
}

/// Follows the eigenvector of ρ(t) whose eigenvalue is 1 at t₀, always
/// continuing through the eigenvector of maximal overlap with the previous
/// one (not necessarily the largest eigenvalue).
inline EigenTrack track_dominant_eigenvector(const DensityTrajectory& traj)
{
    if (traj.size() == 0) throw std::invalid_argument("track_dominant_eigenvector: empty trajectory");
    const double top = hermitian_eig(traj.states.front()).eigenvalues.front();
    if (top < 1.0 - kPureStartTolerance) {
        throw TrackingError("track_dominant_eigenvector: initial state is not pure (largest eigenvalue " +
                            std::to_string(top) + ")");
    }
    return std::move(track_eigenbranches(traj, 0.5).front());
}

inline PhaseSeries open_pure_start_phase_series(const EigenTrack& track)
{
    return detail::kinematic_series(std::span<const EigenTrack>(&track, 1), false);
}

/// φ_g at t_end from the tracked dominant eigenvector.
inline double phase_open_pure_start(const EigenTrack& track, double t_end)
{
    const PhaseSeries s = open_pure_start_phase_series(track);
    return detail::phase_at(s, detail::sample_at_time(track.times, t_end));
}

/// Mixed-state phase series summed over every eigenbranch with
/// non-negligible initial weight.
inline PhaseSeries open_general_phase_series(const DensityTrajectory& traj)
{
    const std::vector<EigenTrack> tracks = track_eigenbranches(traj);
    return detail::kinematic_series(tracks, true);
}

inline double phase_open_general(const DensityTrajectory& traj, double t_end)
{
    const PhaseSeries s = open_general_phase_series(traj);
    return detail::phase_at(s, detail::sample_at_time(traj.times, t_end));
}

// --- robustness metric ---------------------------------------------------------

enum class PhaseStatus { ok, singular, tracking_failed };

inline const char* to_string(PhaseStatus s)
{
    switch (s) {
    case PhaseStatus::ok: return "ok";
    case PhaseStatus::singular: return "singular";
    case PhaseStatus::tracking_failed: return "tracking_failed";
    }
    return "unknown";
}

struct PhaseResult {
    double phi_u = 0.0;
    double phi_g = 0.0;
    double delta_phi = 0.0;          // φ_g − φ_u, unwrapped
    double delta_phi_wrapped = 0.0;  // same, in (−π, π]
    double checkpoint_time = 0.0;    // τ = m·2π/Ω
    int m = 1;
    double omega_plus = 1.0;         // tracked eigenvalue at τ
    PhaseStatus status = PhaseStatus::ok;
    std::string note;

    bool valid() const noexcept { return status == PhaseStatus::ok; }
    bool degraded() const noexcept { return omega_plus < kDegradedEigenvalue; }
};

struct PhaseRunOptions {
    SpaceSpec space{};
    std::size_t steps_per_period = kDefaultStepsPerPeriod;
};

/// Closed and open evolutions on the same grid, phases read at τ = m·T for
/// each requested m, T = 2π/Ω_{n,χ} of the initial state's sector.
inline std::vector<PhaseResult> phase_checkpoints(const ModelParams& params, const InitialStateSpec& initial,
                                                  std::span<const int> m_values, const PhaseRunOptions& opts = {})
{
    params.validate();
    if (m_values.empty()) throw std::invalid_argument("phase_checkpoints: no checkpoints requested");
    for (int m : m_values)
        if (m < 1) throw std::invalid_argument("phase_checkpoints: m must be >= 1");
    const int m_max = *std::max_element(m_values.begin(), m_values.end());

    const double period = 2.0 * std::numbers::pi / rabi_frequency(params, initial.n);
    IntegratorConfig cfg;
    cfg.dt = period / static_cast<double>(opts.steps_per_period);
    cfg.t_final = m_max * period;
    cfg.record_stride = 1;

    const StateVector psi0 = initial_state(initial, opts.space);
    const PureTrajectory closed =
        evolve_closed(hamiltonian(params, opts.space), psi0, cfg, opts.space, params.closed());
    const PhaseSeries phi_u = unitary_phase_series(closed);

    std::vector<PhaseResult> results;
    results.reserve(m_values.size());
    auto base_result = [&](int m) {
        PhaseResult r;
        r.m = m;
        r.checkpoint_time = m * period;
        return r;
    };

    PhaseSeries phi_g;
    EigenTrack track;
    try {
        // Positivity is checked on the tracking spectra instead of a second
        // decomposition per sample.
        HealthTolerances tol;
        tol.check_positivity = false;
        const DensityTrajectory open =
            evolve_lindblad(lindblad_spec(params, opts.space), projector(psi0), cfg, opts.space, params, tol);
        track = track_dominant_eigenvector(open);
        if (track.min_eigenvalue < HealthTolerances{}.min_eigenvalue) {
            throw StateHealthError("phase_checkpoints: negative eigenvalue " + std::to_string(track.min_eigenvalue) +
                                   "; reduce dt");
        }
        phi_g = open_pure_start_phase_series(track);
    } catch (const TrackingError& e) {
        for (int m : m_values) {
            PhaseResult r = base_result(m);
            r.status = PhaseStatus::tracking_failed;
            r.note = e.what();
            r.phi_u = r.phi_g = r.delta_phi = r.delta_phi_wrapped = std::numeric_limits<double>::quiet_NaN();
            results.push_back(r);
        }
        return results;
    }

    for (int m : m_values) {
        PhaseResult r = base_result(m);
        const std::size_t k = closed.sample_at_step(static_cast<std::size_t>(m) * opts.steps_per_period);
        r.omega_plus = track.eigenvalue[k];
        if (phi_u.singular[k] || phi_g.singular[k]) {
            r.status = PhaseStatus::singular;
            r.note = "reference overlap vanishes at the checkpoint";
            r.phi_u = r.phi_g = r.delta_phi = r.delta_phi_wrapped = std::numeric_limits<double>::quiet_NaN();
        } else {
            r.phi_u = phi_u.phase[k];
            r.phi_g = phi_g.phase[k];
            r.delta_phi = r.phi_g - r.phi_u;
            r.delta_phi_wrapped = wrap_increment(r.delta_phi);
        }
        results.push_back(r);
    }
    return results;
}

/// δφ = φ_g − φ_u after τ = m·2π/Ω.
inline PhaseResult delta_phi(const ModelParams& params, const InitialStateSpec& initial, int m,
                             const PhaseRunOptions& opts = {})
{
    const int ms[] = {m};
    return phase_checkpoints(params, initial, ms, opts).front();
}

} // namespace jcm

// dynamics.hpp — Schrödinger and Lindblad time evolution with fixed-step RK4

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "jcm/errors.hpp"
#include "jcm/hilbert.hpp"
#include "jcm/linalg.hpp"
#include "jcm/model.hpp"

namespace jcm {

struct CollapseOp {
    ComplexMatrix op;
    double rate = 0.0;
};

struct LindbladSpec {
    ComplexMatrix hamiltonian;
    std::vector<CollapseOp> collapse_ops;

    void validate() const
    {
        if (!hamiltonian.is_square()) throw DimensionError("LindbladSpec: Hamiltonian is not square");
        if (hermiticity_error(hamiltonian) >= 1e-10 * std::max(1.0, frobenius_norm(hamiltonian))) {
            throw NotHermitianError("LindbladSpec: Hamiltonian is not Hermitian");
        }
        for (const auto& c : collapse_ops) {
            c.op.require_same_shape(hamiltonian, "LindbladSpec collapse operator");
            if (!(c.rate >= 0.0) || !std::isfinite(c.rate)) throw std::invalid_argument("LindbladSpec: negative rate");
        }
    }
};

/// Ĥ plus γ𝒟(â), p𝒟(σ̂₋) and p_z𝒟(σ̂_z).
inline LindbladSpec lindblad_spec(const ModelParams& m, const SpaceSpec& space)
{
    LindbladSpec s;
    s.hamiltonian = hamiltonian(m, space);
    s.collapse_ops.push_back({annihilation(space), m.gamma});
    s.collapse_ops.push_back({sigma_minus(space), m.p});
    s.collapse_ops.push_back({sigma_z(space), m.p_z});
    return s;
}

/// 𝒟(Ô)ρ = ÔρÔ† − ½{Ô†Ô, ρ}
inline ComplexMatrix dissipator(const ComplexMatrix& op, const ComplexMatrix& rho)
{
    op.require_same_shape(rho, "dissipator");
    const ComplexMatrix od = dagger(op);
    const ComplexMatrix odo = od * op;
    return op * rho * od - 0.5 * (odo * rho + rho * odo);
}

/// −i[Ĥ,ρ] + Σ rate·𝒟(Ô)ρ, evaluated term by term.
inline ComplexMatrix lindblad_rhs(const LindbladSpec& spec, const ComplexMatrix& rho)
{
    spec.hamiltonian.require_same_shape(rho, "lindblad_rhs");
    ComplexMatrix out = -kI * commutator(spec.hamiltonian, rho);
    for (const auto& c : spec.collapse_ops) {
        if (c.rate == 0.0) continue;
        out += c.rate * dissipator(c.op, rho);
    }
    return out;
}

namespace detail {

struct Entry {
    std::size_t row;
    std::size_t col;
    Complex value;
};

inline std::vector<Entry> nonzeros(const ComplexMatrix& a)
{
    std::vector<Entry> out;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (a(i, j) != Complex{}) out.push_back({i, j, a(i, j)});
    return out;
}

} // namespace detail

/// Precomputed form of the Lindblad generator used inside the integrator:
/// ρ̇ = −i(H_eff ρ − ρ H_eff†) + Σ L ρ L†, with L = √rate·Ô and
/// H_eff = Ĥ − (i/2)Σ L†L. The operators are stored as nonzero lists, since
/// every one of them is sparse in the Fock basis.
class LindbladGenerator {
public:
    explicit LindbladGenerator(const LindbladSpec& spec)
    {
        spec.validate();
        dim_ = spec.hamiltonian.rows();
        ComplexMatrix h_eff = spec.hamiltonian;
        for (const auto& c : spec.collapse_ops) {
            if (c.rate == 0.0) continue;
            const ComplexMatrix l = std::sqrt(c.rate) * c.op;
            h_eff -= 0.5 * kI * (dagger(l) * l);
            jumps_.push_back(detail::nonzeros(l));
        }
        // −i H_eff, so the coherent part is a ρ + ρ a† with a = −i H_eff.
        h_ = detail::nonzeros(-kI * h_eff);
    }

    std::size_t dim() const noexcept { return dim_; }

    void operator()(ComplexMatrix& out, const ComplexMatrix& rho) const
    {
        const std::size_t n = dim_;
        if (out.rows() != n || out.cols() != n) out = ComplexMatrix(n, n);
        auto o = out.entries();
        auto r = rho.entries();
        std::fill(o.begin(), o.end(), Complex{});
        for (const auto& e : h_) {
            const Complex* src = r.data() + e.col * n;
            Complex* dst = o.data() + e.row * n;
            const Complex v = e.value;
            const Complex vc = std::conj(v);
            for (std::size_t j = 0; j < n; ++j) dst[j] += v * src[j];          // a ρ
            for (std::size_t i = 0; i < n; ++i) o[i * n + e.row] += r[i * n + e.col] * vc;  // ρ a†
        }
        for (const auto& l : jumps_)
            for (const auto& a : l)
                for (const auto& b : l) o[a.row * n + b.row] += a.value * r[a.col * n + b.col] * std::conj(b.value);
    }

    ComplexMatrix operator()(const ComplexMatrix& rho) const
    {
        ComplexMatrix out(dim(), dim());
        (*this)(out, rho);
        return out;
    }

private:
    std::size_t dim_ = 0;
    std::vector<detail::Entry> h_;
    std::vector<std::vector<detail::Entry>> jumps_;
};

// --- low-excitation oracle -------------------------------------------------

/// Indices of |g0⟩, |e0⟩, |g1⟩, |e1⟩, |g2⟩ in the flat basis.
inline constexpr std::size_t kLowExcitationStates = 5;

namespace detail {

// Sector of each low-excitation index: g0 → 0, {e0, g1} → 1, {e1, g2} → 2.
inline int lowex_sector(std::size_t i) { return i == 0 ? 0 : (i <= 2 ? 1 : 2); }

} // namespace detail

/// Hand-written derivatives for the low-excitation block (n ≤ 2), entry by
/// entry. Only ρ₀₀, ρ₁₁, ρ₂₂, ρ₃₃, ρ₄₄, ρ₁₂ and ρ₃₄ (plus their conjugates)
/// are propagated; the input must not populate anything else.
inline ComplexMatrix lowex_rhs_oracle(const ModelParams& m, const ComplexMatrix& rho)
{
    if (!rho.is_square() || rho.rows() < kLowExcitationStates) {
        throw DimensionError("lowex_rhs_oracle: need at least the five lowest basis states");
    }
    const std::size_t dim = rho.rows();
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            const bool inside = i < kLowExcitationStates && j < kLowExcitationStates &&
                                detail::lowex_sector(i) == detail::lowex_sector(j);
            if (!inside && std::abs(rho(i, j)) > 0.0) {
                throw std::invalid_argument("lowex_rhs_oracle: density matrix has support outside the "
                                            "low-excitation sector blocks at (" +
                                            std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }

    const double g = m.g, gamma = m.gamma, p = m.p, pz = m.p_z;
    const double s2 = std::sqrt(2.0);
    const Complex i1 = kI;
    auto r = [&](std::size_t a, std::size_t b) { return rho(a, b); };

    ComplexMatrix d(dim, dim);
    d(0, 0) = p * r(1, 1) + gamma * r(2, 2);
    d(1, 1) = -i1 * g * (r(2, 1) - r(1, 2)) - p * r(1, 1) + gamma * r(3, 3);
    d(2, 2) = -i1 * g * (r(1, 2) - r(2, 1)) - gamma * r(2, 2) + 2.0 * gamma * r(4, 4) + p * r(3, 3);
    d(1, 2) = -i1 * g * (r(2, 2) - r(1, 1)) - i1 * (m.delta - m.chi) * r(1, 2) - 0.5 * gamma * r(1, 2) -
              0.5 * p * r(1, 2) + gamma * s2 * r(3, 4) - 2.0 * pz * r(1, 2);
    d(3, 3) = i1 * s2 * g * (r(3, 4) - r(4, 3)) - (p + gamma) * r(3, 3);
    // Coupling term written as −i√2g(ρ₄₄ − ρ₃₃), the same orientation as the
    // n = 1 coherence above (upper state |e1⟩ first).
    d(3, 4) = -i1 * s2 * g * (r(4, 4) - r(3, 3)) - i1 * (m.delta - 3.0 * m.chi) * r(3, 4) -
              (0.5 * p + 1.5 * gamma + 2.0 * pz) * r(3, 4);
    d(4, 4) = -i1 * s2 * g * (r(3, 4) - r(4, 3)) - 2.0 * gamma * r(4, 4);
    d(2, 1) = std::conj(d(1, 2));
    d(4, 3) = std::conj(d(3, 4));
    return d;
}

// --- integration ------------------------------------------------------------

struct IntegratorConfig {
    double dt = 0.0;
    double t_final = 0.0;
    std::size_t record_stride = 1;

    std::size_t steps() const
    {
        if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("integrator.dt must be positive");
        if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw std::invalid_argument("integrator.t_final must be >= 0");
        if (record_stride == 0) throw std::invalid_argument("integrator.record_stride must be >= 1");
        return static_cast<std::size_t>(std::llround(t_final / dt));
    }
};

inline constexpr std::size_t kDefaultStepsPerPeriod = 2000;

/// Grid with dt = (2π/Ω_{1,χ}) / steps_per_period, ending exactly after
/// `periods` Rabi periods of sector 1.
inline IntegratorConfig period_grid(const ModelParams& m, double periods,
                                    std::size_t steps_per_period = kDefaultStepsPerPeriod,
                                    std::size_t record_stride = 1)
{
    IntegratorConfig c;
    c.dt = rabi_period(m, 1) / static_cast<double>(steps_per_period);
    c.t_final = periods * rabi_period(m, 1);
    c.record_stride = record_stride;
    return c;
}

template <class State>
struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<State> states;
    std::vector<std::size_t> step_index;  // integrator step of each sample
    ModelParams params;
    IntegratorConfig config;
    SpaceSpec space;
    double max_norm_drift = 0.0;  // closed runs: largest |‖ψ‖−1| seen before renormalisation

    std::size_t size() const noexcept { return states.size(); }

    /// Sample index recorded at integrator step `step`.
    std::size_t sample_at_step(std::size_t step) const
    {
        auto it = std::lower_bound(step_index.begin(), step_index.end(), step);
        if (it == step_index.end() || *it != step) {
            throw std::out_of_range("TrajectoryRecord: step " + std::to_string(step) + " was not recorded");
        }
        return static_cast<std::size_t>(it - step_index.begin());
    }
};

using PureTrajectory = TrajectoryRecord<StateVector>;
using DensityTrajectory = TrajectoryRecord<ComplexMatrix>;

namespace detail {

inline bool should_record(std::size_t k, std::size_t steps, std::size_t stride) { return k % stride == 0 || k == steps; }

inline void guard_truncation(double top, double t)
{
    if (top >= kTruncationTolerance) {
        throw TruncationError("population " + std::to_string(top) + " reached the highest Fock level at t = " +
                              std::to_string(t) + "; increase n_max");
    }
}

} // namespace detail

/// ψ̇ = −iĤψ with classical RK4. The state is renormalised after every step.
inline PureTrajectory evolve_closed(const ComplexMatrix& h, StateVector psi, const IntegratorConfig& config,
                                    const SpaceSpec& space, const ModelParams& params = {})
{
    if (!h.is_square() || h.rows() != psi.size() || h.rows() != space.dim()) {
        throw DimensionError("evolve_closed: Hamiltonian, state and space dimensions disagree");
    }
    const double n0 = norm(psi);
    if (std::abs(n0 - 1.0) > 1e-10) throw std::invalid_argument("evolve_closed: initial state is not normalized");

    const std::size_t steps = config.steps();
    const std::size_t dim = psi.size();
    PureTrajectory rec;
    rec.params = params;
    rec.config = config;
    rec.space = space;

    // −iH, so each stage is a plain matrix–vector product.
    ComplexMatrix gen = -kI * h;
    StateVector k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    auto deriv = [&](StateVector& out, const StateVector& v) {
        for (std::size_t i = 0; i < dim; ++i) {
            Complex s{};
            for (std::size_t j = 0; j < dim; ++j) s += gen(i, j) * v[j];
            out[i] = s;
        }
    };

    const double dt = config.dt;
    for (std::size_t k = 0;; ++k) {
        if (detail::should_record(k, steps, config.record_stride)) {
            const double t = static_cast<double>(k) * dt;
            detail::guard_truncation(top_level_population(psi, space), t);
            rec.times.push_back(t);
            rec.states.push_back(psi);
            rec.step_index.push_back(k);
        }
        if (k == steps) break;
        deriv(k1, psi);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = psi[i] + 0.5 * dt * k1[i];
        deriv(k2, tmp);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = psi[i] + 0.5 * dt * k2[i];
        deriv(k3, tmp);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = psi[i] + dt * k3[i];
        deriv(k4, tmp);
        for (std::size_t i = 0; i < dim; ++i) psi[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        const double nrm = norm(psi);
        rec.max_norm_drift = std::max(rec.max_norm_drift, std::abs(nrm - 1.0));
        for (auto& z : psi) z /= nrm;
    }
    return rec;
}

struct HealthTolerances {
    double trace = 1e-9;
    double hermiticity = 1e-9;
    double min_eigenvalue = -1e-8;
    bool check_positivity = true;
};

struct StateHealth {
    double trace_error = 0.0;
    double hermiticity_error = 0.0;
    double min_eigenvalue = 0.0;
};

inline StateHealth state_health(const ComplexMatrix& rho)
{
    StateHealth h;
    h.trace_error = std::abs(trace(rho) - 1.0);
    h.hermiticity_error = hermiticity_error(rho);
    h.min_eigenvalue = hermitian_eig(rho).eigenvalues.back();
    return h;
}

/// RK4 integration of the Lindblad equation on the full density matrix.
/// Trace, Hermiticity, positivity and truncation are checked at every
/// recorded sample.
inline DensityTrajectory evolve_lindblad(const LindbladSpec& spec, ComplexMatrix rho, const IntegratorConfig& config,
                                         const SpaceSpec& space, const ModelParams& params = {},
                                         const HealthTolerances& tol = {})
{
    spec.hamiltonian.require_same_shape(rho, "evolve_lindblad");
    if (rho.rows() != space.dim()) throw DimensionError("evolve_lindblad: state does not match the space");
    const std::size_t steps = config.steps();
    LindbladGenerator rhs(spec);
    const std::size_t n = rho.rows();

    DensityTrajectory rec;
    rec.params = params;
    rec.config = config;
    rec.space = space;

    ComplexMatrix k1(n, n), k2(n, n), k3(n, n), k4(n, n), tmp(n, n);
    const double dt = config.dt;
    auto axpy = [&](ComplexMatrix& out, const ComplexMatrix& base, double h, const ComplexMatrix& d) {
        auto o = out.entries();
        auto b = base.entries();
        auto dd = d.entries();
        for (std::size_t i = 0; i < o.size(); ++i) o[i] = b[i] + h * dd[i];
    };

    for (std::size_t k = 0;; ++k) {
        if (detail::should_record(k, steps, config.record_stride)) {
            const double t = static_cast<double>(k) * dt;
            const double tr_err = std::abs(trace(rho) - 1.0);
            const double herm = hermiticity_error(rho);
            if (tr_err >= tol.trace || herm >= tol.hermiticity) {
                throw StateHealthError("evolve_lindblad: trace/Hermiticity drift at t = " + std::to_string(t));
            }
            if (tol.check_positivity) {
                const double lmin = hermitian_eig(rho).eigenvalues.back();
                if (lmin < tol.min_eigenvalue) {
                    throw StateHealthError("evolve_lindblad: negative eigenvalue " + std::to_string(lmin) +
                                           " at t = " + std::to_string(t) + "; reduce dt");
                }
            }
            detail::guard_truncation(top_level_population(rho, space), t);
            rec.times.push_back(t);
            rec.states.push_back(rho);
            rec.step_index.push_back(k);
        }
        if (k == steps) break;
        rhs(k1, rho);
        axpy(tmp, rho, 0.5 * dt, k1);
        rhs(k2, tmp);
        axpy(tmp, rho, 0.5 * dt, k2);
        rhs(k3, tmp);
        axpy(tmp, rho, dt, k3);
        rhs(k4, tmp);
        auto r = rho.entries();
        for (std::size_t i = 0; i < r.size(); ++i) {
            r[i] += dt / 6.0 * (k1.entries()[i] + 2.0 * k2.entries()[i] + 2.0 * k3.entries()[i] + k4.entries()[i]);
        }
    }
    return rec;
}

/// Debug dump: one row per sample, `t` followed by Re/Im of every entry in
/// row-major order.
inline void write_trajectory_csv(std::ostream& os, const DensityTrajectory& rec)
{
    const std::size_t n = rec.space.dim();
    os << "t";
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) os << ",re_" << i << '_' << j << ",im_" << i << '_' << j;
    os << '\n';
    os << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t s = 0; s < rec.size(); ++s) {
        os << rec.times[s];
        for (const auto& z : rec.states[s].entries()) os << ',' << z.real() << ',' << z.imag();
        os << '\n';
    }
}

} // namespace jcm

// model.hpp — Kerr-nonlinear Jaynes–Cummings Hamiltonian and its per-sector analytics

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "jcm/errors.hpp"
#include "jcm/hilbert.hpp"
#include "jcm/linalg.hpp"

namespace jcm {

/// Physical parameters, all in units of the coupling g.
struct ModelParams {
    double delta = 0.5;   // atom–cavity detuning Δ
    double chi = 0.5;     // Kerr strength χ
    double g = 1.0;       // coupling
    double gamma = 0.1;   // cavity loss
    double p = 0.0;       // atomic relaxation
    double p_z = 0.01;    // pure dephasing

    void validate() const
    {
        if (!(g > 0.0) || !std::isfinite(g)) throw std::invalid_argument("model.g must be positive");
        if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("model.gamma must be >= 0");
        if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("model.p must be >= 0");
        if (!(p_z >= 0.0) || !std::isfinite(p_z)) throw std::invalid_argument("model.p_z must be >= 0");
        if (!std::isfinite(delta)) throw std::invalid_argument("model.delta must be finite");
        if (!std::isfinite(chi)) throw std::invalid_argument("model.chi must be finite");
    }

    ModelParams closed() const
    {
        ModelParams c = *this;
        c.gamma = c.p = c.p_z = 0.0;
        return c;
    }

    bool has_dissipation() const noexcept { return gamma > 0.0 || p > 0.0 || p_z > 0.0; }

    bool operator==(const ModelParams&) const = default;
};

/// Δ − χ(2n − 1); zero on the sector-n resonance.
inline double effective_detuning(const ModelParams& m, int n) { return m.delta - m.chi * (2.0 * n - 1.0); }

/// Ω_{n,χ}
inline double rabi_frequency(const ModelParams& m, int n)
{
    const double d = effective_detuning(m, n);
    return std::sqrt(d * d + 4.0 * m.g * m.g * n);
}

/// 2π / Ω_{n,χ}
inline double rabi_period(const ModelParams& m, int n = 1) { return 2.0 * std::numbers::pi / rabi_frequency(m, n); }

inline bool is_resonant(const ModelParams& m, int n, double tol = 1e-12)
{
    const double scale = std::max({1.0, std::abs(m.delta), std::abs(m.chi) * (2.0 * n - 1.0)});
    return std::abs(effective_detuning(m, n)) <= tol * scale;
}

/// Ĥ = (Δ/2)σ̂_z + χn̂² + g(σ̂₊â + σ̂₋â†)
inline ComplexMatrix hamiltonian(const ModelParams& m, const SpaceSpec& spec)
{
    const ComplexMatrix sz = sigma_z(spec);
    const ComplexMatrix n = number_op(spec);
    const ComplexMatrix a = annihilation(spec);
    const ComplexMatrix sm = sigma_minus(spec);
    const ComplexMatrix coupling = dagger(sm) * a;
    return 0.5 * m.delta * sz + m.chi * (n * n) + m.g * (coupling + dagger(coupling));
}

inline void require_sector(int n, const char* who)
{
    if (n < 1) throw std::invalid_argument(std::string(who) + ": sector n must be >= 1 (n = 0 has no 2x2 block)");
}

/// 2×2 block of Ĥ in the sector basis {|e,n−1⟩, |g,n⟩}.
inline ComplexMatrix sector_block(const ModelParams& m, int n)
{
    require_sector(n, "sector_block");
    const double off = m.g * std::sqrt(static_cast<double>(n));
    const double nm1 = n - 1.0;
    return ComplexMatrix::from_rows({{0.5 * m.delta + m.chi * nm1 * nm1, off},
                                     {off, -0.5 * m.delta + m.chi * n * n}});
}

struct SectorAnalytics {
    int n = 1;
    double omega_n_chi = 0.0;   // Ω_{n,χ}
    double eff_detuning = 0.0;  // Δ̃(n)
    double energy_plus = 0.0;   // E₊ⁿ
    double energy_minus = 0.0;  // E₋ⁿ
    double theta_n = 0.0;       // polar angle of the rotation axis, measured from +z
    double e0_n = 0.0;          // E₀(n), the block's trace / 2

    /// Rotation axis n⃗ = (g√n, 0, Δ̃/2), unnormalized.
    std::array<double, 3> axis{};

    std::array<double, 3> unit_axis() const
    {
        const double r = 0.5 * omega_n_chi;
        return {axis[0] / r, axis[1] / r, axis[2] / r};
    }
};

inline SectorAnalytics sector_analytics(const ModelParams& m, int n)
{
    require_sector(n, "sector_analytics");
    SectorAnalytics s;
    s.n = n;
    s.eff_detuning = effective_detuning(m, n);
    s.omega_n_chi = rabi_frequency(m, n);
    const double half = n - 0.5;
    const double centre = m.chi * half * half + m.chi / 4.0;
    s.energy_plus = centre + 0.5 * s.omega_n_chi;
    s.energy_minus = centre - 0.5 * s.omega_n_chi;
    const double nm1 = n - 1.0;
    s.e0_n = 0.5 * (m.chi * nm1 * nm1 + m.chi * n * n);
    const double gx = m.g * std::sqrt(static_cast<double>(n));
    s.axis = {gx, 0.0, 0.5 * s.eff_detuning};
    s.theta_n = std::atan2(gx, 0.5 * s.eff_detuning);
    return s;
}

/// Dressed eigenvectors of one sector, as 2-vectors in {|e,n−1⟩, |g,n⟩}.
/// `plus` pairs with E₊ⁿ and `minus` with E₋ⁿ.
struct DressedPair {
    std::array<Complex, 2> plus;
    std::array<Complex, 2> minus;
    double norm_plus = 1.0;   // N₊
    double norm_minus = 1.0;  // N₋
};

inline DressedPair dressed_states(const ModelParams& m, int n)
{
    require_sector(n, "dressed_states");
    const SectorAnalytics s = sector_analytics(m, n);
    const double coupling = m.g * std::sqrt(static_cast<double>(n));
    // |g,n⟩ amplitude −Δ̃/2 ± Ω/2 against |e,n−1⟩ amplitude g√n.
    const double gp = -0.5 * s.eff_detuning + 0.5 * s.omega_n_chi;
    const double gm = -0.5 * s.eff_detuning - 0.5 * s.omega_n_chi;
    DressedPair d;
    d.norm_plus = std::hypot(coupling, gp);
    d.norm_minus = std::hypot(coupling, gm);
    d.plus = {coupling / d.norm_plus, gp / d.norm_plus};
    d.minus = {coupling / d.norm_minus, gm / d.norm_minus};
    return d;
}

/// Embeds a sector 2-vector {|e,n−1⟩, |g,n⟩} into the full space.
inline StateVector embed_sector(const std::array<Complex, 2>& amp, int n, const SpaceSpec& spec)
{
    require_sector(n, "embed_sector");
    if (static_cast<std::size_t>(n) > spec.n_max) {
        throw TruncationError("sector n = " + std::to_string(n) + " does not fit in n_max = " +
                              std::to_string(spec.n_max));
    }
    StateVector v(spec.dim());
    v[flat_index({Atom::e, static_cast<std::size_t>(n - 1)}, spec)] = amp[0];
    v[flat_index({Atom::g, static_cast<std::size_t>(n)}, spec)] = amp[1];
    return v;
}

/// Closed-form resonant evolution of |g,n⟩:
/// e^{−iE₀t}[cos(Ωt/2)|g,n⟩ − i sin(Ωt/2)|e,n−1⟩]
inline StateVector resonant_evolution_oracle(const ModelParams& m, int n, double t, const SpaceSpec& spec)
{
    require_sector(n, "resonant_evolution_oracle");
    if (!is_resonant(m, n, 1e-12)) {
        throw std::invalid_argument("resonant_evolution_oracle: parameters are off resonance for sector " +
                                    std::to_string(n));
    }
    const double omega = rabi_frequency(m, n);
    const double half = n - 0.5;
    const Complex phase = std::exp(-kI * (m.chi * half * half + m.chi / 4.0) * t);
    return embed_sector({-kI * phase * std::sin(0.5 * omega * t), phase * std::cos(0.5 * omega * t)}, n, spec);
}

/// cos(θ₀/2)|e,n−1⟩ + e^{iφ₀} sin(θ₀/2)|g,n⟩
struct InitialStateSpec {
    double theta0 = 0.0;
    double phi0 = 0.0;
    int n = 1;
};

inline StateVector initial_state(const InitialStateSpec& s, const SpaceSpec& spec)
{
    if (!std::isfinite(s.theta0) || !std::isfinite(s.phi0)) throw std::invalid_argument("initial_state: non-finite angle");
    return embed_sector({std::cos(0.5 * s.theta0), std::exp(kI * s.phi0) * std::sin(0.5 * s.theta0)}, s.n, spec);
}

/// Initial state whose Bloch vector is orthogonal to the sector's rotation
/// axis, so that the unitary path is a great circle.
inline InitialStateSpec perpendicular_state(const ModelParams& m, int n = 1)
{
    const SectorAnalytics s = sector_analytics(m, n);
    return {s.theta_n + 0.5 * std::numbers::pi, 0.0, n};
}

} // namespace jcm

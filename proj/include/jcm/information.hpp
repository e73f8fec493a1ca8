// information.hpp — Negativity, n=1 Bloch projection and trajectory planarity

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "jcm/errors.hpp"
#include "jcm/hilbert.hpp"
#include "jcm/linalg.hpp"

namespace jcm {

/// Transposes the atomic indices only: ρ^{T_A}[(n,a),(m,b)] = ρ[(n,b),(m,a)].
inline ComplexMatrix partial_transpose_atom(const ComplexMatrix& rho, const SpaceSpec& spec)
{
    if (!rho.is_square() || rho.rows() != spec.dim()) {
        throw DimensionError("partial_transpose_atom: expected a " + std::to_string(spec.dim()) + "x" +
                             std::to_string(spec.dim()) + " density matrix");
    }
    const std::size_t nc = spec.cavity_dim();
    ComplexMatrix out(rho.rows(), rho.cols());
    for (std::size_t n = 0; n < nc; ++n)
        for (std::size_t m = 0; m < nc; ++m)
            for (std::size_t a = 0; a < 2; ++a)
                for (std::size_t b = 0; b < 2; ++b) out(2 * n + a, 2 * m + b) = rho(2 * n + b, 2 * m + a);
    return out;
}

struct NegativityTerms {
    double from_negative_eigenvalues = 0.0;  // Σ_{λ<0} |λ|
    double from_trace_norm = 0.0;            // (‖ρ^{T_A}‖₁ − 1) / 2
};

inline NegativityTerms negativity_terms(const ComplexMatrix& rho, const SpaceSpec& spec)
{
    const ComplexMatrix pt = partial_transpose_atom(rho, spec);
    NegativityTerms t;
    for (double lam : hermitian_eig(pt).eigenvalues)
        if (lam < 0.0) t.from_negative_eigenvalues += -lam;
    t.from_trace_norm = 0.5 * (trace_norm(pt) - 1.0);
    return t;
}

inline constexpr double kNegativityAgreement = 1e-10;

/// Negativity of the atom–cavity cut. Both standard expressions are evaluated
/// and must agree.
inline double negativity(const ComplexMatrix& rho, const SpaceSpec& spec)
{
    const NegativityTerms t = negativity_terms(rho, spec);
    if (std::abs(t.from_negative_eigenvalues - t.from_trace_norm) > kNegativityAgreement) {
        throw ConvergenceError("negativity: eigenvalue sum and trace-norm expressions disagree by " +
                               std::to_string(std::abs(t.from_negative_eigenvalues - t.from_trace_norm)));
    }
    return t.from_negative_eigenvalues;
}

inline double negativity(std::span<const Complex> psi, const SpaceSpec& spec) { return negativity(projector(psi), spec); }

// --- Bloch representation of the n = 1 sector --------------------------------

/// Bloch vector in the {|e0⟩ = |0⟩, |g1⟩ = |1⟩} qubit, plus the sector's
/// population. y follows ⟨σ_y⟩ = 2 Im⟨g1|ρ|e0⟩.
struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double weight = 0.0;

    std::array<double, 3> r() const { return {x, y, z}; }
    double length() const { return std::sqrt(x * x + y * y + z * z); }
};

inline BlochVector bloch_project_n1(const ComplexMatrix& rho, const SpaceSpec& spec)
{
    const std::size_t e0 = flat_index({Atom::e, 0}, spec);
    const std::size_t g1 = flat_index({Atom::g, 1}, spec);
    const double a = rho(e0, e0).real();
    const double d = rho(g1, g1).real();
    const Complex c = rho(e0, g1);
    return {2.0 * c.real(), 2.0 * rho(g1, e0).imag(), a - d, a + d};
}

inline BlochVector bloch_project_n1(std::span<const Complex> psi, const SpaceSpec& spec)
{
    return bloch_project_n1(projector(psi), spec);
}

inline double dot(const std::array<double, 3>& a, const std::array<double, 3>& b)
{
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

struct PlanarityReport {
    std::array<double, 3> plane_normal{};
    double max_off_plane = 0.0;  // max |r·n̂| / |r|
    std::size_t samples_used = 0;
};

inline constexpr double kPlanarityFloor = 1e-6;

/// How far a Bloch path strays from the plane through the origin with the
/// given normal, relative to the vector length at each sample.
inline PlanarityReport planarity(std::span<const BlochVector> path, const std::array<double, 3>& reference_normal)
{
    const double nn = std::sqrt(dot(reference_normal, reference_normal));
    if (!(nn > 0.0)) throw std::invalid_argument("planarity: zero normal");
    PlanarityReport rep;
    rep.plane_normal = {reference_normal[0] / nn, reference_normal[1] / nn, reference_normal[2] / nn};
    for (const auto& b : path) {
        const double len = b.length();
        if (len <= kPlanarityFloor) continue;
        rep.max_off_plane = std::max(rep.max_off_plane, std::abs(dot(b.r(), rep.plane_normal)) / len);
        ++rep.samples_used;
    }
    if (rep.samples_used < 2) {
        throw std::invalid_argument("planarity: fewer than two samples with |r| > " + std::to_string(kPlanarityFloor));
    }
    return rep;
}

} // namespace jcm

// hilbert.hpp — Truncated atom ⊗ cavity space and its primitive operators
//
// Basis ordering is |g0⟩, |e0⟩, |g1⟩, |e1⟩, ... : the atom is the fast index,
// so full-space operators are kron(cavity_op, atom_op).

#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "jcm/errors.hpp"
#include "jcm/linalg.hpp"

namespace jcm {

enum class Atom { g = 0, e = 1 };

struct SpaceSpec {
    std::size_t n_max = 4;  // highest Fock level kept

    static constexpr std::size_t atom_dim = 2;
    std::size_t cavity_dim() const noexcept { return n_max + 1; }
    std::size_t dim() const noexcept { return atom_dim * cavity_dim(); }

    bool operator==(const SpaceSpec&) const = default;
};

struct BasisIndex {
    Atom atom = Atom::g;
    std::size_t photons = 0;
};

inline std::size_t flat_index(BasisIndex b, const SpaceSpec& spec)
{
    if (b.photons > spec.n_max) {
        throw TruncationError("flat_index: photon number " + std::to_string(b.photons) +
                              " exceeds n_max = " + std::to_string(spec.n_max));
    }
    return 2 * b.photons + (b.atom == Atom::e ? 1 : 0);
}

inline BasisIndex basis_label(std::size_t index, const SpaceSpec& spec)
{
    if (index >= spec.dim()) throw DimensionError("basis_label: index out of range");
    return {index % 2 == 1 ? Atom::e : Atom::g, index / 2};
}

inline StateVector basis_state(BasisIndex b, const SpaceSpec& spec)
{
    StateVector v(spec.dim());
    v[flat_index(b, spec)] = 1.0;
    return v;
}

namespace ops {

inline ComplexMatrix atom_identity() { return ComplexMatrix::identity(2); }
inline ComplexMatrix cavity_identity(const SpaceSpec& spec) { return ComplexMatrix::identity(spec.cavity_dim()); }

// Single-mode operators on the cavity factor alone.
inline ComplexMatrix cavity_annihilation(const SpaceSpec& spec)
{
    ComplexMatrix a(spec.cavity_dim(), spec.cavity_dim());
    for (std::size_t n = 1; n <= spec.n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

// Atomic factor in the {g, e} ordering used by the flat index.
inline ComplexMatrix atom_sigma_minus() { return ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}}); }
inline ComplexMatrix atom_sigma_z() { return ComplexMatrix::diagonal({-1.0, 1.0}); }

} // namespace ops

/// I_atom ⊗ â on the full space.
inline ComplexMatrix annihilation(const SpaceSpec& spec)
{
    return kron(ops::cavity_annihilation(spec), ops::atom_identity());
}

inline ComplexMatrix creation(const SpaceSpec& spec) { return dagger(annihilation(spec)); }

/// σ̂₋ : |e,n⟩ → |g,n⟩
inline ComplexMatrix sigma_minus(const SpaceSpec& spec)
{
    return kron(ops::cavity_identity(spec), ops::atom_sigma_minus());
}

inline ComplexMatrix sigma_plus(const SpaceSpec& spec) { return dagger(sigma_minus(spec)); }

/// +1 on e, −1 on g.
inline ComplexMatrix sigma_z(const SpaceSpec& spec) { return kron(ops::cavity_identity(spec), ops::atom_sigma_z()); }

inline ComplexMatrix number_op(const SpaceSpec& spec)
{
    ComplexMatrix n(spec.dim(), spec.dim());
    for (std::size_t i = 0; i < spec.dim(); ++i) n(i, i) = static_cast<double>(i / 2);
    return n;
}

/// â†â + σ̂₊σ̂₋
inline ComplexMatrix excitation_op(const SpaceSpec& spec)
{
    ComplexMatrix n(spec.dim(), spec.dim());
    for (std::size_t i = 0; i < spec.dim(); ++i) n(i, i) = static_cast<double>(i / 2 + i % 2);
    return n;
}

/// Population of the highest kept Fock level (both atomic states).
inline double top_level_population(const ComplexMatrix& rho, const SpaceSpec& spec)
{
    const std::size_t g = flat_index({Atom::g, spec.n_max}, spec);
    const std::size_t e = flat_index({Atom::e, spec.n_max}, spec);
    return rho(g, g).real() + rho(e, e).real();
}

inline double top_level_population(std::span<const Complex> psi, const SpaceSpec& spec)
{
    const std::size_t g = flat_index({Atom::g, spec.n_max}, spec);
    const std::size_t e = flat_index({Atom::e, spec.n_max}, spec);
    return std::norm(psi[g]) + std::norm(psi[e]);
}

inline constexpr double kTruncationTolerance = 1e-10;

} // namespace jcm

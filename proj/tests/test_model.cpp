// test_model.cpp — Hamiltonian, sector analytics, dressed states and initial states

#include <gtest/gtest.h>

#include <numbers>

#include "jcm/information.hpp"
#include "jcm/model.hpp"
#include "support.hpp"

using namespace jcm;

namespace {

constexpr double pi = std::numbers::pi;
const SpaceSpec space{4};

ModelParams resonant(double chi = 0.5)
{
    ModelParams m;
    m.delta = chi;
    m.chi = chi;
    return m;
}

std::size_t idx(Atom a, std::size_t n) { return flat_index({a, n}, space); }

ModelParams random_params(jcm::test::Rng& rng)
{
    std::uniform_real_distribution<double> u(-3.0, 3.0), pos(0.2, 2.0);
    ModelParams m;
    m.delta = u(rng);
    m.chi = u(rng);
    m.g = pos(rng);
    return m;
}

} // namespace

TEST(Hamiltonian, MatrixElements)
{
    const ModelParams m = resonant();
    const ComplexMatrix h = hamiltonian(m, space);
    EXPECT_NEAR(std::abs(h(idx(Atom::e, 0), idx(Atom::g, 1)) - m.g), 0.0, 1e-15);
    EXPECT_NEAR(h(idx(Atom::g, 1), idx(Atom::g, 1)).real(), -m.delta / 2 + m.chi, 1e-15);
    EXPECT_LT(hermiticity_error(h), 1e-15);
}

TEST(Hamiltonian, ConservesExcitationNumber)
{
    jcm::test::Rng rng(11);
    for (int i = 0; i < 10; ++i) {
        const ComplexMatrix h = hamiltonian(random_params(rng), space);
        EXPECT_LT(frobenius_norm(commutator(h, excitation_op(space))), 1e-12);
    }
}

TEST(SectorBlock, Examples)
{
    ModelParams m;
    m.delta = m.chi = 0.0;
    EXPECT_EQ(sector_block(m, 1), ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}));
    EXPECT_NEAR(sector_block(m, 2)(0, 1).real(), std::sqrt(2.0), 1e-15);
    EXPECT_THROW(sector_block(m, 0), std::invalid_argument);
}

TEST(SectorBlock, EmbeddedInFullHamiltonian)
{
    jcm::test::Rng rng(12);
    const ModelParams m = random_params(rng);
    const ComplexMatrix h = hamiltonian(m, space);
    for (int n = 1; n <= 4; ++n) {
        const ComplexMatrix b = sector_block(m, n);
        const std::size_t i0 = idx(Atom::e, n - 1), i1 = idx(Atom::g, n);
        EXPECT_NEAR(std::abs(h(i0, i0) - b(0, 0)), 0.0, 1e-13);
        EXPECT_NEAR(std::abs(h(i0, i1) - b(0, 1)), 0.0, 1e-13);
        EXPECT_NEAR(std::abs(h(i1, i1) - b(1, 1)), 0.0, 1e-13);
    }
}

// Eq. (4) closed form against direct diagonalization of the block.
TEST(SectorAnalytics, EnergiesMatchBlockSpectrum)
{
    jcm::test::Rng rng(13);
    for (int rep = 0; rep < 50; ++rep) {
        const ModelParams m = random_params(rng);
        for (int n = 1; n <= 4; ++n) {
            const SectorAnalytics s = sector_analytics(m, n);
            const auto ev = hermitian_eigenvalues(sector_block(m, n));
            EXPECT_NEAR(ev[0], s.energy_plus, 1e-10);
            EXPECT_NEAR(ev[1], s.energy_minus, 1e-10);
            EXPECT_NEAR(s.energy_plus - s.energy_minus, s.omega_n_chi, 1e-12);
        }
    }
}

TEST(SectorAnalytics, ResonantSectorOne)
{
    const ModelParams m = resonant(0.5);
    const SectorAnalytics s = sector_analytics(m, 1);
    EXPECT_NEAR(s.eff_detuning, 0.0, 1e-15);
    EXPECT_NEAR(s.omega_n_chi, 2.0 * m.g, 1e-15);
    EXPECT_NEAR(s.energy_plus, m.chi / 2 + m.g, 1e-15);
    EXPECT_NEAR(s.energy_minus, m.chi / 2 - m.g, 1e-15);
    const auto ax = s.unit_axis();
    EXPECT_NEAR(ax[0], 1.0, 1e-15);
    EXPECT_NEAR(ax[1], 0.0, 1e-15);
    EXPECT_NEAR(ax[2], 0.0, 1e-15);
    // Numerical cross-check of χ/2 ± g.
    const auto ev = hermitian_eigenvalues(sector_block(m, 1));
    EXPECT_NEAR(ev[0], m.chi / 2 + 1.0, 1e-14);
    EXPECT_NEAR(ev[1], m.chi / 2 - 1.0, 1e-14);
}

TEST(SectorAnalytics, SimpleValues)
{
    ModelParams m;
    m.delta = m.chi = 0.0;
    EXPECT_NEAR(rabi_frequency(m, 1), 2.0, 1e-15);
    ModelParams m2;
    m2.chi = 0.4;
    m2.delta = 3 * m2.chi;
    EXPECT_NEAR(effective_detuning(m2, 2), 0.0, 1e-15);
    EXPECT_TRUE(is_resonant(m2, 2));
    EXPECT_FALSE(is_resonant(m2, 1));
}

TEST(DressedStates, ResonantForm)
{
    const DressedPair d = dressed_states(resonant(), 1);
    const double r = 1.0 / std::sqrt(2.0);
    // E₊ pairs with the symmetric combination (|e0⟩ + |g1⟩)/√2.
    EXPECT_NEAR(std::abs(d.plus[0] * r + d.plus[1] * r), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(d.minus[0] * r - d.minus[1] * r), 1.0, 1e-14);
}

TEST(DressedStates, EigenpairsAndOrthogonality)
{
    jcm::test::Rng rng(14);
    for (int rep = 0; rep < 30; ++rep) {
        const ModelParams m = random_params(rng);
        const ComplexMatrix h = hamiltonian(m, space);
        for (int n = 1; n <= 4; ++n) {
            const DressedPair d = dressed_states(m, n);
            const SectorAnalytics s = sector_analytics(m, n);
            const StateVector p = embed_sector(d.plus, n, space), q = embed_sector(d.minus, n, space);
            const StateVector hp = jcm::apply(h, p), hq = jcm::apply(h, q);
            for (std::size_t i = 0; i < space.dim(); ++i) {
                EXPECT_LT(std::abs(hp[i] - s.energy_plus * p[i]), 1e-12);
                EXPECT_LT(std::abs(hq[i] - s.energy_minus * q[i]), 1e-12);
            }
            EXPECT_LT(std::abs(inner(p, q)), 1e-13);
            EXPECT_NEAR(norm(p), 1.0, 1e-14);
        }
    }
}

TEST(ResonantOracle, Examples)
{
    const ModelParams m = resonant();
    const double omega = rabi_frequency(m, 1);
    const double e0 = m.chi * 0.25 + m.chi / 4;
    EXPECT_LT(jcm::test::max_abs_diff(resonant_evolution_oracle(m, 1, 0.0, space), basis_state({Atom::g, 1}, space)),
              1e-15);
    const double period = 2 * pi / omega;
    StateVector full = basis_state({Atom::g, 1}, space);
    for (auto& z : full) z *= -std::exp(-kI * e0 * period);
    EXPECT_LT(jcm::test::max_abs_diff(resonant_evolution_oracle(m, 1, period, space), full), 1e-14);
    StateVector half = basis_state({Atom::e, 0}, space);
    for (auto& z : half) z *= -kI * std::exp(-kI * e0 * (pi / omega));
    EXPECT_LT(jcm::test::max_abs_diff(resonant_evolution_oracle(m, 1, pi / omega, space), half), 1e-14);

    ModelParams off = m;
    off.delta = 2.0;
    EXPECT_THROW(resonant_evolution_oracle(off, 1, 0.1, space), std::invalid_argument);
}

TEST(InitialState, Examples)
{
    EXPECT_EQ(initial_state({0.0, 0.0, 1}, space), basis_state({Atom::e, 0}, space));
    const StateVector s = initial_state({pi / 2, 0.0, 1}, space);
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(s[idx(Atom::e, 0)].real(), r, 1e-15);
    EXPECT_NEAR(s[idx(Atom::g, 1)].real(), r, 1e-15);
    // Eigenvector at Δ = χ.
    const StateVector hs = jcm::apply(hamiltonian(resonant(), space), s);
    const double e = inner(s, hs).real();
    for (std::size_t i = 0; i < space.dim(); ++i) EXPECT_LT(std::abs(hs[i] - e * s[i]), 1e-14);
    EXPECT_THROW(initial_state({0.0, 0.0, 5}, space), TruncationError);
}

TEST(PerpendicularState, ResonantPassesThroughPoles)
{
    const ModelParams m = resonant();
    const InitialStateSpec p = perpendicular_state(m);
    const BlochVector b = bloch_project_n1(initial_state(p, space), space);
    // Rotation about x from a point in the yz-plane: starts at a pole.
    EXPECT_NEAR(std::abs(b.z), 1.0, 1e-14);
    EXPECT_NEAR(b.x, 0.0, 1e-14);
}

TEST(PerpendicularState, LargeDetuningApproachesEquator)
{
    ModelParams m;
    m.chi = 0.0;
    m.delta = 1e4;
    const BlochVector b = bloch_project_n1(initial_state(perpendicular_state(m), space), space);
    EXPECT_LT(std::abs(b.z), 1e-3);
    const auto ax = sector_analytics(m, 1).unit_axis();
    EXPECT_GT(ax[2], 1.0 - 1e-6);
}

TEST(PerpendicularState, OrthogonalToAxisForRandomParams)
{
    jcm::test::Rng rng(15);
    for (int rep = 0; rep < 100; ++rep) {
        const ModelParams m = random_params(rng);
        const BlochVector b = bloch_project_n1(initial_state(perpendicular_state(m), space), space);
        EXPECT_LT(std::abs(dot(b.r(), sector_analytics(m, 1).axis)), 1e-12);
    }
}

TEST(ModelParams, Validation)
{
    ModelParams m;
    m.gamma = -0.1;
    try {
        m.validate();
        FAIL();
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("model.gamma"), std::string::npos);
    }
    ModelParams g0;
    g0.g = 0.0;
    EXPECT_THROW(g0.validate(), std::invalid_argument);
}

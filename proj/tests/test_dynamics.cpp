// test_dynamics.cpp — Lindblad generator, low-excitation oracle and RK4 integrators

#include <gtest/gtest.h>

#include <numbers>
#include <sstream>

#include "jcm/dynamics.hpp"
#include "support.hpp"

using namespace jcm;
using jcm::test::max_abs_diff;

namespace {

constexpr double pi = std::numbers::pi;

ModelParams random_open_params(jcm::test::Rng& rng)
{
    std::uniform_real_distribution<double> u(-3.0, 3.0), rate(0.0, 0.5), pos(0.3, 2.0);
    ModelParams m;
    m.delta = u(rng);
    m.chi = u(rng);
    m.g = pos(rng);
    m.gamma = rate(rng);
    m.p = rate(rng);
    m.p_z = rate(rng);
    return m;
}

// Block-diagonal density matrix supported on {g0}, {e0, g1}, {e1, g2}.
ComplexMatrix random_lowex_density(jcm::test::Rng& rng, const SpaceSpec& space)
{
    ComplexMatrix rho(space.dim(), space.dim());
    std::uniform_real_distribution<double> u(0.0, 1.0);
    rho(0, 0) = u(rng);
    for (std::size_t base : {std::size_t{1}, std::size_t{3}}) {
        const ComplexMatrix b = jcm::test::random_density(rng, 2, 2);
        const double w = u(rng);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) rho(base + i, base + j) = w * b(i, j);
    }
    rho *= 1.0 / trace(rho).real();
    return rho;
}

} // namespace

TEST(Dissipator, TraceFreeAndHermitian)
{
    jcm::test::Rng rng(21);
    const SpaceSpec space{3};
    const ComplexMatrix rho = jcm::test::random_density(rng, space.dim(), 3);
    for (const ComplexMatrix& op : {annihilation(space), sigma_minus(space), sigma_z(space)}) {
        const ComplexMatrix d = dissipator(op, rho);
        EXPECT_LT(std::abs(trace(d)), 1e-13);
        EXPECT_LT(hermiticity_error(d), 1e-13);
    }
}

TEST(Dissipator, DecayOfExcitedAtom)
{
    const SpaceSpec space{1};
    const ComplexMatrix rho = projector(basis_state({Atom::e, 0}, space));
    const ComplexMatrix d = dissipator(sigma_minus(space), rho);
    EXPECT_NEAR(d(1, 1).real(), -1.0, 1e-15);
    EXPECT_NEAR(d(0, 0).real(), 1.0, 1e-15);
}

// The hand-written low-excitation equations serve as the independent oracle
// for the generic generator.
TEST(LowExcitationOracle, MatchesGenericRhs)
{
    jcm::test::Rng rng(22);
    const SpaceSpec space{3};
    for (int rep = 0; rep < 100; ++rep) {
        const ModelParams m = random_open_params(rng);
        const ComplexMatrix rho = random_lowex_density(rng, space);
        const ComplexMatrix oracle = lowex_rhs_oracle(m, rho);
        const LindbladSpec spec = lindblad_spec(m, space);
        EXPECT_LT(max_abs_diff(lindblad_rhs(spec, rho), oracle), 1e-12);
        EXPECT_LT(max_abs_diff(LindbladGenerator(spec)(rho), oracle), 1e-12);
    }
}

TEST(LowExcitationOracle, RejectsOutOfBlockSupport)
{
    const SpaceSpec space{3};
    ComplexMatrix rho = projector(basis_state({Atom::g, 3}, space));
    EXPECT_THROW(lowex_rhs_oracle(ModelParams{}, rho), std::invalid_argument);
    EXPECT_THROW(lowex_rhs_oracle(ModelParams{}, ComplexMatrix(3, 3)), DimensionError);
}

TEST(LindbladGenerator, MatchesTermByTermRhs)
{
    jcm::test::Rng rng(23);
    for (std::size_t n_max : {1u, 3u, 6u}) {
        const SpaceSpec space{n_max};
        const ModelParams m = random_open_params(rng);
        const LindbladSpec spec = lindblad_spec(m, space);
        const LindbladGenerator gen(spec);
        const ComplexMatrix rho = jcm::test::random_density(rng, space.dim(), space.dim());
        EXPECT_LT(max_abs_diff(gen(rho), lindblad_rhs(spec, rho)), 1e-12);
    }
}

TEST(LindbladSpec, Validation)
{
    const SpaceSpec space{2};
    LindbladSpec s = lindblad_spec(ModelParams{}, space);
    EXPECT_NO_THROW(s.validate());
    s.collapse_ops[0].rate = -1.0;
    EXPECT_THROW(s.validate(), std::invalid_argument);
    LindbladSpec bad = lindblad_spec(ModelParams{}, space);
    bad.hamiltonian(0, 1) += 1.0;
    EXPECT_THROW(bad.validate(), NotHermitianError);
}

TEST(Integrator, PeriodGridShape)
{
    ModelParams m;
    m.delta = m.chi = 0.5;
    const IntegratorConfig c = period_grid(m, 3.0, 2000, 10);
    EXPECT_EQ(c.steps(), 6000u);
    EXPECT_NEAR(c.dt, pi / 2000.0, 1e-15);
    IntegratorConfig bad;
    EXPECT_THROW(bad.steps(), std::invalid_argument);
}

TEST(EvolveClosed, MatchesResonantOracle)
{
    ModelParams m;
    m.delta = m.chi = 0.5;
    const SpaceSpec space{3};
    const IntegratorConfig cfg = period_grid(m, 3.0, 2000, 1);
    const PureTrajectory tr = evolve_closed(hamiltonian(m, space), basis_state({Atom::g, 1}, space), cfg, space, m);
    ASSERT_EQ(tr.size(), 6001u);
    double worst = 0.0;
    for (std::size_t k = 0; k < tr.size(); ++k)
        worst = std::max(worst, max_abs_diff(tr.states[k], resonant_evolution_oracle(m, 1, tr.times[k], space)));
    EXPECT_LT(worst, 1e-8);
    EXPECT_EQ(tr.sample_at_step(6000), 6000u);
}

TEST(EvolveClosed, StrideRecordsEndpoint)
{
    ModelParams m;
    const SpaceSpec space{3};
    IntegratorConfig cfg;
    cfg.dt = 0.01;
    cfg.t_final = 0.105;
    cfg.record_stride = 4;
    const PureTrajectory tr = evolve_closed(hamiltonian(m, space), basis_state({Atom::e, 0}, space), cfg, space);
    // steps = 11 (rounded): 0, 4, 8, 11
    ASSERT_EQ(tr.step_index, (std::vector<std::size_t>{0, 4, 8, 11}));
    EXPECT_THROW(tr.sample_at_step(5), std::out_of_range);
}

TEST(EvolveClosed, RejectsBadInput)
{
    const SpaceSpec space{2};
    IntegratorConfig cfg;
    cfg.dt = 0.1;
    cfg.t_final = 1.0;
    StateVector psi = basis_state({Atom::g, 1}, space);
    psi[0] = 1.0;
    EXPECT_THROW(evolve_closed(hamiltonian(ModelParams{}, space), psi, cfg, space), std::invalid_argument);
    EXPECT_THROW(evolve_closed(hamiltonian(ModelParams{}, SpaceSpec{3}), basis_state({Atom::g, 1}, space), cfg, space),
                 DimensionError);
}

TEST(EvolveLindblad, ZeroRatesReproduceClosedEvolution)
{
    ModelParams m;
    m.delta = 1.3;
    m.chi = 0.4;
    m.gamma = m.p = m.p_z = 0.0;
    const SpaceSpec space{4};
    const IntegratorConfig cfg = period_grid(m, 2.0, 1000, 50);
    const StateVector psi0 = initial_state({0.7, 0.3, 1}, space);
    const PureTrajectory closed = evolve_closed(hamiltonian(m, space), psi0, cfg, space, m);
    const DensityTrajectory open = evolve_lindblad(lindblad_spec(m, space), projector(psi0), cfg, space, m);
    ASSERT_EQ(open.size(), closed.size());
    for (std::size_t k = 0; k < open.size(); ++k) EXPECT_LT(max_abs_diff(open.states[k], projector(closed.states[k])), 1e-9);
}

TEST(EvolveLindblad, PreservesTraceHermiticityPositivity)
{
    jcm::test::Rng rng(24);
    const SpaceSpec space{4};
    for (int rep = 0; rep < 3; ++rep) {
        ModelParams m = random_open_params(rng);
        m.p = 0.05;
        const IntegratorConfig cfg = period_grid(m, 2.0, 2000, 100);
        const DensityTrajectory tr =
            evolve_lindblad(lindblad_spec(m, space), projector(initial_state({1.1, 0.4, 1}, space)), cfg, space, m);
        for (const auto& rho : tr.states) {
            const StateHealth h = state_health(rho);
            EXPECT_LT(h.trace_error, 1e-12);
            EXPECT_LT(h.hermiticity_error, 1e-12);
            EXPECT_GT(h.min_eigenvalue, -1e-10);
        }
    }
}

TEST(EvolveLindblad, HealthCheckRejectsUnnormalizedState)
{
    const SpaceSpec space{2};
    IntegratorConfig cfg;
    cfg.dt = 0.01;
    cfg.t_final = 0.1;
    const ComplexMatrix rho = 2.0 * projector(basis_state({Atom::g, 0}, space));
    EXPECT_THROW(evolve_lindblad(lindblad_spec(ModelParams{}, space), rho, cfg, space), StateHealthError);
}

TEST(TruncationGuard, TopLevelPopulationThrows)
{
    ModelParams m;
    const SpaceSpec space{1};
    IntegratorConfig cfg;
    cfg.dt = 0.01;
    cfg.t_final = 0.1;
    const StateVector psi = basis_state({Atom::g, 1}, space);
    EXPECT_THROW(evolve_closed(hamiltonian(m, space), psi, cfg, space), TruncationError);
    EXPECT_THROW(evolve_lindblad(lindblad_spec(m, space), projector(psi), cfg, space), TruncationError);
    // Same state fits comfortably with one more level.
    const SpaceSpec wider{3};
    EXPECT_NO_THROW(evolve_closed(hamiltonian(m, wider), basis_state({Atom::g, 1}, wider), cfg, wider));
}

TEST(TrajectoryCsv, HeaderAndRows)
{
    IntegratorConfig cfg;
    cfg.dt = 0.1;
    cfg.t_final = 0.2;
    const ModelParams m;
    const SpaceSpec space{2};
    const DensityTrajectory tr =
        evolve_lindblad(lindblad_spec(m, space), projector(basis_state({Atom::e, 0}, space)), cfg, space, m);
    std::ostringstream os;
    write_trajectory_csv(os, tr);
    std::istringstream in(os.str());
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header.rfind("t,re_0_0,im_0_0,re_0_1", 0), 0u);
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    EXPECT_EQ(rows, tr.size());
}

// test_information.cpp — Negativity, partial transpose and Bloch projection

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <numbers>

#include "jcm/dynamics.hpp"
#include "jcm/information.hpp"
#include "support.hpp"

using namespace jcm;

namespace {

constexpr double pi = std::numbers::pi;

// Independent oracle: partial transpose built from an explicit
// (cavity, atom) index reshape and diagonalized with Eigen.
double negativity_oracle(const ComplexMatrix& rho, std::size_t cavity_dim)
{
    const Eigen::Index d = static_cast<Eigen::Index>(2 * cavity_dim);
    Eigen::MatrixXcd pt(d, d);
    for (std::size_t n = 0; n < cavity_dim; ++n)
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t m = 0; m < cavity_dim; ++m)
                for (std::size_t b = 0; b < 2; ++b)
                    pt(static_cast<Eigen::Index>(n * 2 + a), static_cast<Eigen::Index>(m * 2 + b)) =
                        rho(n * 2 + b, m * 2 + a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pt);
    double s = 0.0;
    for (Eigen::Index i = 0; i < d; ++i)
        if (es.eigenvalues()(i) < 0.0) s -= es.eigenvalues()(i);
    return s;
}

} // namespace

TEST(Negativity, ProductStateIsZero)
{
    const SpaceSpec space{3};
    EXPECT_NEAR(negativity(basis_state({Atom::g, 0}, space), space), 0.0, 1e-15);
    // |+⟩_atom ⊗ |1⟩_cavity
    StateVector v(space.dim());
    v[flat_index({Atom::g, 1}, space)] = 1.0 / std::sqrt(2.0);
    v[flat_index({Atom::e, 1}, space)] = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(negativity(v, space), 0.0, 1e-14);
}

TEST(Negativity, MaximallyEntangledIsHalf)
{
    const SpaceSpec space{3};
    const StateVector v = initial_state({pi / 2, 0.0, 1}, space);
    EXPECT_NEAR(negativity(v, space), 0.5, 1e-14);
    const NegativityTerms t = negativity_terms(projector(v), space);
    EXPECT_NEAR(t.from_negative_eigenvalues, t.from_trace_norm, 1e-14);
}

TEST(Negativity, AgreesWithEigenOracleOnRandomStates)
{
    jcm::test::Rng rng(31);
    for (std::size_t n_max : {1u, 2u, 4u}) {
        const SpaceSpec space{n_max};
        for (int rep = 0; rep < 10; ++rep) {
            const std::size_t rank = 1 + static_cast<std::size_t>(rep) % space.dim();
            const ComplexMatrix rho = jcm::test::random_density(rng, space.dim(), rank);
            const NegativityTerms t = negativity_terms(rho, space);
            EXPECT_NEAR(t.from_negative_eigenvalues, t.from_trace_norm, 1e-11);
            EXPECT_NEAR(negativity(rho, space), negativity_oracle(rho, space.cavity_dim()), 1e-11);
        }
    }
}

TEST(Negativity, InvariantUnderLocalUnitaries)
{
    jcm::test::Rng rng(32);
    const SpaceSpec space{2};
    const ComplexMatrix rho = jcm::test::random_density(rng, space.dim(), 2);
    const ComplexMatrix ua = hermitian_eig(jcm::test::random_hermitian(rng, 2)).eigenvectors;
    const ComplexMatrix uc = hermitian_eig(jcm::test::random_hermitian(rng, 3)).eigenvectors;
    const ComplexMatrix u = kron(uc, ua);
    EXPECT_NEAR(negativity(u * rho * dagger(u), space), negativity(rho, space), 1e-11);
}

TEST(Negativity, ResonantRabiClosedForm)
{
    ModelParams m;
    m.delta = m.chi = 0.5;
    const SpaceSpec space{3};
    const double omega = rabi_frequency(m, 1);
    for (double t : {0.0, 0.3, 0.785, 1.9, 4.0}) {
        const StateVector psi = resonant_evolution_oracle(m, 1, t, space);
        EXPECT_NEAR(negativity(psi, space), std::abs(std::sin(omega * t)) / 2.0, 1e-12);
    }
}

TEST(Negativity, RejectsWrongDimension)
{
    EXPECT_THROW(negativity(ComplexMatrix::identity(5), SpaceSpec{2}), DimensionError);
}

TEST(PartialTranspose, IsInvolution)
{
    jcm::test::Rng rng(33);
    const SpaceSpec space{3};
    const ComplexMatrix rho = jcm::test::random_density(rng, space.dim(), 4);
    EXPECT_EQ(partial_transpose_atom(partial_transpose_atom(rho, space), space), rho);
    EXPECT_NEAR(std::abs(trace(partial_transpose_atom(rho, space)) - 1.0), 0.0, 1e-14);
}

TEST(Bloch, PolesAndEquator)
{
    const SpaceSpec space{2};
    const BlochVector up = bloch_project_n1(basis_state({Atom::e, 0}, space), space);
    EXPECT_DOUBLE_EQ(up.z, 1.0);
    EXPECT_DOUBLE_EQ(up.weight, 1.0);
    const BlochVector down = bloch_project_n1(basis_state({Atom::g, 1}, space), space);
    EXPECT_DOUBLE_EQ(down.z, -1.0);
    const BlochVector px = bloch_project_n1(initial_state({pi / 2, 0.0, 1}, space), space);
    EXPECT_NEAR(px.x, 1.0, 1e-15);
    const BlochVector py = bloch_project_n1(initial_state({pi / 2, pi / 2, 1}, space), space);
    EXPECT_NEAR(py.y, 1.0, 1e-15);
    EXPECT_NEAR(py.x, 0.0, 1e-15);
}

TEST(Bloch, GeneralSpinorAngles)
{
    const SpaceSpec space{2};
    for (double theta : {0.2, 1.0, 2.5})
        for (double phi : {-1.0, 0.4, 3.0}) {
            const BlochVector b = bloch_project_n1(initial_state({theta, phi, 1}, space), space);
            EXPECT_NEAR(b.x, std::sin(theta) * std::cos(phi), 1e-14);
            EXPECT_NEAR(b.y, std::sin(theta) * std::sin(phi), 1e-14);
            EXPECT_NEAR(b.z, std::cos(theta), 1e-14);
            EXPECT_NEAR(b.length(), 1.0, 1e-14);
        }
}

TEST(Bloch, WeightTracksLeakage)
{
    const SpaceSpec space{2};
    ComplexMatrix rho = 0.25 * projector(basis_state({Atom::g, 0}, space));
    rho += 0.75 * projector(basis_state({Atom::e, 0}, space));
    const BlochVector b = bloch_project_n1(rho, space);
    EXPECT_NEAR(b.weight, 0.75, 1e-15);
    EXPECT_NEAR(b.z, 0.75, 1e-15);
}

TEST(Planarity, GreatCircleIsPlanar)
{
    std::vector<BlochVector> path;
    for (int k = 0; k < 50; ++k) {
        const double a = 2 * pi * k / 50.0;
        path.push_back({0.0, std::sin(a), std::cos(a), 1.0});
    }
    const PlanarityReport r = planarity(path, {2.0, 0.0, 0.0});
    EXPECT_LT(r.max_off_plane, 1e-15);
    EXPECT_EQ(r.samples_used, 50u);
    EXPECT_NEAR(r.plane_normal[0], 1.0, 1e-15);
}

TEST(Planarity, LatitudeCircleIsNot)
{
    std::vector<BlochVector> path;
    const double theta = 1.0;
    for (int k = 0; k < 50; ++k) {
        const double a = 2 * pi * k / 50.0;
        path.push_back({std::sin(theta) * std::cos(a), std::sin(theta) * std::sin(a), std::cos(theta), 1.0});
    }
    EXPECT_NEAR(planarity(path, {0.0, 0.0, 1.0}).max_off_plane, std::cos(theta), 1e-14);
}

TEST(Planarity, FloorAndErrors)
{
    std::vector<BlochVector> path{{0.0, 0.0, 0.0, 0.0}, {1.0, 0.0, 0.0, 1.0}, {0.0, 1.0, 0.0, 1.0}};
    EXPECT_EQ(planarity(path, {0.0, 0.0, 1.0}).samples_used, 2u);
    EXPECT_THROW(planarity(path, {0.0, 0.0, 0.0}), std::invalid_argument);
    path.pop_back();
    EXPECT_THROW(planarity(path, {0.0, 0.0, 1.0}), std::invalid_argument);
}

// support.hpp — Shared helpers for the test suite: seeded random objects and Eigen bridges

#pragma once

#include <complex>
#include <random>

#include <Eigen/Dense>

#include "jcm/linalg.hpp"

namespace jcm::test {

using Rng = std::mt19937_64;
using EMat = Eigen::MatrixXcd;

inline Complex random_complex(Rng& rng)
{
    std::normal_distribution<double> n(0.0, 1.0);
    return {n(rng), n(rng)};
}

inline ComplexMatrix random_matrix(Rng& rng, std::size_t r, std::size_t c)
{
    ComplexMatrix m(r, c);
    for (auto& z : m.entries()) z = random_complex(rng);
    return m;
}

inline ComplexMatrix random_hermitian(Rng& rng, std::size_t n)
{
    const ComplexMatrix a = random_matrix(rng, n, n);
    return 0.5 * (a + dagger(a));
}

/// Random density matrix A A† / tr(A A†) of the given rank.
inline ComplexMatrix random_density(Rng& rng, std::size_t n, std::size_t rank)
{
    const ComplexMatrix a = random_matrix(rng, n, rank);
    ComplexMatrix rho = a * dagger(a);
    rho *= 1.0 / trace(rho).real();
    return rho;
}

inline StateVector random_state(Rng& rng, std::size_t n)
{
    StateVector v(n);
    for (auto& z : v) z = random_complex(rng);
    const double nv = norm(v);
    for (auto& z : v) z /= nv;
    return v;
}

inline EMat to_eigen(const ComplexMatrix& m)
{
    EMat e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
    return e;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.entries().size(); ++i) d = std::max(d, std::abs(a.entries()[i] - b.entries()[i]));
    return d;
}

inline double max_abs_diff(const StateVector& a, const StateVector& b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

} // namespace jcm::test

// linalg.hpp — Dense complex matrices, Kronecker products and a Jacobi Hermitian eigensolver

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jcm/errors.hpp"

namespace jcm {

using Complex = std::complex<double>;
using StateVector = std::vector<Complex>;

inline constexpr Complex kI{0.0, 1.0};

/// Dense row-major complex matrix. Used for operators, density matrices and
/// eigenvector bases alike.
class ComplexMatrix {
public:
    ComplexMatrix() = default;

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Complex{}) {}

    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries))
    {
        if (data_.size() != rows_ * cols_) {
            throw DimensionError("ComplexMatrix: entry count " + std::to_string(data_.size()) +
                                 " does not match " + std::to_string(rows_) + "x" +
                                 std::to_string(cols_));
        }
        for (const auto& z : data_) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                throw std::invalid_argument("ComplexMatrix: non-finite entry");
            }
        }
    }

    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows)
    {
        const std::size_t r = rows.size();
        const std::size_t c = r == 0 ? 0 : rows.begin()->size();
        std::vector<Complex> entries;
        entries.reserve(r * c);
        for (const auto& row : rows) {
            if (row.size() != c) throw DimensionError("ComplexMatrix::from_rows: ragged rows");
            entries.insert(entries.end(), row.begin(), row.end());
        }
        return ComplexMatrix(r, c, std::move(entries));
    }

    static ComplexMatrix identity(std::size_t n)
    {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diagonal(std::span<const double> values)
    {
        ComplexMatrix m(values.size(), values.size());
        for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
        return m;
    }

    static ComplexMatrix diagonal(std::initializer_list<double> values)
    {
        return diagonal(std::span<const double>(values.begin(), values.size()));
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }
    bool empty() const noexcept { return data_.empty(); }

    Complex& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<Complex> entries() noexcept { return data_; }
    std::span<const Complex> entries() const noexcept { return data_; }

    StateVector column(std::size_t j) const
    {
        StateVector v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o)
    {
        require_same_shape(o, "operator+=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }

    ComplexMatrix& operator-=(const ComplexMatrix& o)
    {
        require_same_shape(o, "operator-=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }

    ComplexMatrix& operator*=(Complex s) noexcept
    {
        for (auto& z : data_) z *= s;
        return *this;
    }

    bool operator==(const ComplexMatrix&) const = default;

    void require_same_shape(const ComplexMatrix& o, const char* what) const
    {
        if (rows_ != o.rows_ || cols_ != o.cols_) {
            throw DimensionError(std::string(what) + ": shape mismatch " + std::to_string(rows_) + "x" +
                                 std::to_string(cols_) + " vs " + std::to_string(o.rows_) + "x" +
                                 std::to_string(o.cols_));
        }
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

inline ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
inline ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
inline ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
inline ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }

inline ComplexMatrix scale(ComplexMatrix a, Complex s) { return a *= s; }
inline ComplexMatrix add(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
inline ComplexMatrix sub(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }

// out = a * b. Zero entries of `a` are skipped, so sparse left operands
// (ladder operators, Hamiltonians) cost far less than a full product.
inline void matmul_into(ComplexMatrix& out, const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.cols() != b.rows()) {
        throw DimensionError("matmul: inner dimensions " + std::to_string(a.cols()) + " and " +
                             std::to_string(b.rows()) + " differ");
    }
    if (out.rows() != a.rows() || out.cols() != b.cols()) out = ComplexMatrix(a.rows(), b.cols());
    auto o = out.entries();
    std::fill(o.begin(), o.end(), Complex{});
    const std::size_t n = b.cols();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Complex* orow = o.data() + i * n;
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik.real() == 0.0 && aik.imag() == 0.0) continue;
            const Complex* brow = b.entries().data() + k * n;
            for (std::size_t j = 0; j < n; ++j) orow[j] += aik * brow[j];
        }
    }
}

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b)
{
    ComplexMatrix out(a.rows(), b.cols());
    matmul_into(out, a, b);
    return out;
}

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return matmul(a, b); }

inline void dagger_into(ComplexMatrix& out, const ComplexMatrix& a)
{
    if (out.rows() != a.cols() || out.cols() != a.rows()) out = ComplexMatrix(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
}

inline ComplexMatrix dagger(const ComplexMatrix& a)
{
    ComplexMatrix out(a.cols(), a.rows());
    dagger_into(out, a);
    return out;
}

inline ComplexMatrix transpose(const ComplexMatrix& a)
{
    ComplexMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

/// Kronecker product; `a` indexes the outer (slow) block.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b)
{
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex{}) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return out;
}

inline Complex trace(const ComplexMatrix& a)
{
    if (!a.is_square()) throw DimensionError("trace: matrix is not square");
    Complex t{};
    for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

inline double frobenius_norm(const ComplexMatrix& a)
{
    double s = 0.0;
    for (const auto& z : a.entries()) s += std::norm(z);
    return std::sqrt(s);
}

inline double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b)
{
    a.require_same_shape(b, "frobenius_distance");
    double s = 0.0;
    for (std::size_t k = 0; k < a.entries().size(); ++k) s += std::norm(a.entries()[k] - b.entries()[k]);
    return std::sqrt(s);
}

/// ‖a − a†‖_F
inline double hermiticity_error(const ComplexMatrix& a)
{
    if (!a.is_square()) throw DimensionError("hermiticity_error: matrix is not square");
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) s += std::norm(a(i, j) - std::conj(a(j, i)));
    return std::sqrt(s);
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

// --- vectors ---------------------------------------------------------------

/// ⟨a|b⟩
inline Complex inner(std::span<const Complex> a, std::span<const Complex> b)
{
    if (a.size() != b.size()) throw DimensionError("inner: length mismatch");
    Complex s{};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

inline double norm(std::span<const Complex> v) { return std::sqrt(std::real(inner(v, v))); }

inline StateVector apply(const ComplexMatrix& m, std::span<const Complex> v)
{
    if (m.cols() != v.size()) throw DimensionError("apply: operator/vector size mismatch");
    StateVector out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Complex s{};
        for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

/// |a⟩⟨b|
inline ComplexMatrix outer(std::span<const Complex> a, std::span<const Complex> b)
{
    ComplexMatrix out(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out(i, j) = a[i] * std::conj(b[j]);
    return out;
}

inline ComplexMatrix projector(std::span<const Complex> v) { return outer(v, v); }

/// ⟨v|M|v⟩
inline Complex expectation(const ComplexMatrix& m, std::span<const Complex> v) { return inner(v, jcm::apply(m, v)); }

// --- Hermitian eigenproblem -----------------------------------------------

struct EigenDecomposition {
    std::vector<double> eigenvalues;  // descending
    ComplexMatrix eigenvectors;       // column k pairs with eigenvalues[k]
    int sweeps = 0;

    StateVector vector(std::size_t k) const { return eigenvectors.column(k); }
};

struct JacobiOptions {
    int max_sweeps = 64;
    double relative_tolerance = 1e-15;
};

namespace detail {

inline double off_diagonal_norm2(const ComplexMatrix& a)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return s;
}

inline void require_hermitian(const ComplexMatrix& a, const char* who)
{
    if (!a.is_square()) throw DimensionError(std::string(who) + ": matrix is not square");
    const double scale = std::max(1.0, frobenius_norm(a));
    if (hermiticity_error(a) >= 1e-8 * scale) {
        throw NotHermitianError(std::string(who) + ": input is not Hermitian");
    }
}

// In-place cyclic Jacobi on `a`, accumulating rotations into `v`.
inline int jacobi_sweeps(ComplexMatrix& a, ComplexMatrix& v, const JacobiOptions& opts)
{
    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();
    const double fro = frobenius_norm(a);
    const double scale2 = std::max(fro * fro, 1e-300);
    const double tol2 = opts.relative_tolerance * opts.relative_tolerance * scale2;

    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        if (off_diagonal_norm2(a) <= tol2) return sweep;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag == 0.0) continue;
                const Complex e = apq / mag;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * mag);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 0.5 / theta;
                } else {
                    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const Complex se = s * e;
                const Complex sec = s * std::conj(e);

                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = c * akp - sec * akq;
                    a(k, q) = se * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = c * apk - se * aqk;
                    a(q, k) = sec * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = app - t * mag;
                a(q, q) = aqq + t * mag;
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex vkp = v(k, p);
                    const Complex vkq = v(k, q);
                    v(k, p) = c * vkp - sec * vkq;
                    v(k, q) = se * vkp + c * vkq;
                }
            }
        }
    }
    if (off_diagonal_norm2(a) <= tol2) return opts.max_sweeps;
    throw ConvergenceError("hermitian_eig: Jacobi iteration did not converge");
}

inline EigenDecomposition sorted_decomposition(const ComplexMatrix& diag, const ComplexMatrix& v, int sweeps)
{
    const std::size_t n = diag.rows();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return diag(i, i).real() > diag(j, j).real(); });
    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    out.sweeps = sweeps;
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = diag(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
    }
    return out;
}

} // namespace detail

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
/// Eigenvalues come back in descending order; eigenvectors are the columns of
/// `eigenvectors`. Near-degenerate eigenvalues are returned in arbitrary order.
inline EigenDecomposition hermitian_eig(const ComplexMatrix& a, const JacobiOptions& opts = {})
{
    detail::require_hermitian(a, "hermitian_eig");
    ComplexMatrix work = a;
    ComplexMatrix v = ComplexMatrix::identity(a.rows());
    const int sweeps = detail::jacobi_sweeps(work, v, opts);
    return detail::sorted_decomposition(work, v, sweeps);
}

/// Same as above, but starts the rotation from a unitary guess (typically the
/// eigenbasis of a nearby matrix), which cuts the sweep count along smooth
/// trajectories.
inline EigenDecomposition hermitian_eig(const ComplexMatrix& a, const ComplexMatrix& basis_guess,
                                        const JacobiOptions& opts = {})
{
    detail::require_hermitian(a, "hermitian_eig");
    a.require_same_shape(basis_guess, "hermitian_eig(guess)");
    ComplexMatrix work = dagger(basis_guess) * a * basis_guess;
    // Restore exact Hermiticity lost in the basis change.
    for (std::size_t i = 0; i < work.rows(); ++i)
        for (std::size_t j = i + 1; j < work.cols(); ++j) {
            const Complex m = 0.5 * (work(i, j) + std::conj(work(j, i)));
            work(i, j) = m;
            work(j, i) = std::conj(m);
        }
    ComplexMatrix v = basis_guess;
    const int sweeps = detail::jacobi_sweeps(work, v, opts);
    return detail::sorted_decomposition(work, v, sweeps);
}

/// Eigenvalues only, descending.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a) { return hermitian_eig(a).eigenvalues; }

/// Sum of singular values. Hermitian input uses Σ|λ|; anything else goes
/// through the spectrum of a†a.
inline double trace_norm(const ComplexMatrix& a)
{
    if (!a.is_square()) throw DimensionError("trace_norm: matrix is not square");
    const double scale = std::max(1.0, frobenius_norm(a));
    if (hermiticity_error(a) < 1e-12 * scale) {
        double s = 0.0;
        for (double lam : hermitian_eig(a).eigenvalues) s += std::abs(lam);
        return s;
    }
    double s = 0.0;
    for (double lam : hermitian_eig(dagger(a) * a).eigenvalues) s += std::sqrt(std::max(lam, 0.0));
    return s;
}

} // namespace jcm

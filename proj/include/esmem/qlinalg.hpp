#pragma once

// Small dense complex linear algebra for 1-3 qubit systems (dim 2, 4, 8).

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace esmem {

using Complex = std::complex<double>;
using StateVector = std::vector<Complex>;

namespace tol {
inline constexpr double kValidation = 1e-10;  // input checks (Hermiticity, density matrices)
inline constexpr double kAlgebraic = 1e-12;   // exact identities (unitarity, closed forms)
}  // namespace tol

class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim);
    ComplexMatrix(std::size_t dim, std::initializer_list<Complex> row_major);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix zero(std::size_t dim) { return ComplexMatrix(dim); }
    static ComplexMatrix diagonal(std::span<const Complex> diag);
    // |ket><bra|
    static ComplexMatrix outer(std::span<const Complex> ket, std::span<const Complex> bra);
    static ComplexMatrix projector(std::span<const Complex> ket) { return outer(ket, ket); }

    std::size_t dim() const noexcept { return dim_; }
    Complex& operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
    const Complex& operator()(std::size_t row, std::size_t col) const { return data_[row * dim_ + col]; }
    std::span<const Complex> entries() const noexcept { return data_; }
    std::span<Complex> entries() noexcept { return data_; }

    ComplexMatrix adjoint() const;
    Complex trace() const;
    double max_abs() const;  // max-norm over entries

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(Complex scale);

    StateVector apply(std::span<const Complex> vec) const;
    Complex expectation(std::span<const Complex> vec) const;  // <v|M|v>

    bool is_hermitian(double tolerance = tol::kValidation) const;
    bool is_unitary(double tolerance = tol::kAlgebraic) const;
    bool is_density_matrix(double tolerance = tol::kValidation) const;

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex scale, ComplexMatrix m);

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
Complex inner(std::span<const Complex> bra, std::span<const Complex> ket);  // <bra|ket>
double norm_sq(std::span<const Complex> vec);
StateVector kron(std::span<const Complex> a, std::span<const Complex> b);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

struct HermitianEigen {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // eigenvectors as columns
};

// Throws NonHermitianInput when h fails is_hermitian(tol::kValidation).
HermitianEigen eigh(const ComplexMatrix& h);

// exp(scale * h) for Hermitian h via its eigendecomposition.
ComplexMatrix expm_hermitian(const ComplexMatrix& h, Complex scale);

// cos(angle/2) I - i sin(angle/2) (axis . sigma), i.e. exp(-i angle axis.sigma / 2).
// Throws ZeroAxis for a vanishing axis with nonzero angle and InvalidArgument
// when the axis is not normalized.
ComplexMatrix su2_exp(const std::array<double, 3>& axis, double angle);

// Row-major entries of su2_exp without allocation. No validation; a zero
// axis yields the identity.
std::array<Complex, 4> su2_elements(const std::array<double, 3>& axis, double angle) noexcept;

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix hadamard();

}  // namespace esmem

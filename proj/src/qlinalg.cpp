#include "esmem/qlinalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "esmem/error.hpp"

namespace esmem {

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, Complex{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::initializer_list<Complex> row_major)
    : dim_(dim), data_(row_major) {
    if (data_.size() != dim * dim) {
        throw Error(ErrorCode::InvalidArgument,
                    "expected " + std::to_string(dim * dim) + " entries, got " + std::to_string(data_.size()));
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
    ComplexMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> ket, std::span<const Complex> bra) {
    if (ket.size() != bra.size()) throw Error(ErrorCode::InvalidArgument, "outer: size mismatch");
    ComplexMatrix m(ket.size());
    for (std::size_t r = 0; r < ket.size(); ++r)
        for (std::size_t c = 0; c < bra.size(); ++c) m(r, c) = ket[r] * std::conj(bra[c]);
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(dim_);
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c) m(c, r) = std::conj((*this)(r, c));
    return m;
}

Complex ComplexMatrix::trace() const {
    Complex t{0.0, 0.0};
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    if (other.dim_ != dim_) throw Error(ErrorCode::InvalidArgument, "matrix sum: dimension mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    if (other.dim_ != dim_) throw Error(ErrorCode::InvalidArgument, "matrix difference: dimension mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
    for (auto& z : data_) z *= scale;
    return *this;
}

StateVector ComplexMatrix::apply(std::span<const Complex> vec) const {
    if (vec.size() != dim_) throw Error(ErrorCode::InvalidArgument, "apply: dimension mismatch");
    StateVector out(dim_, Complex{0.0, 0.0});
    for (std::size_t r = 0; r < dim_; ++r) {
        Complex acc{0.0, 0.0};
        for (std::size_t c = 0; c < dim_; ++c) acc += (*this)(r, c) * vec[c];
        out[r] = acc;
    }
    return out;
}

Complex ComplexMatrix::expectation(std::span<const Complex> vec) const {
    return inner(vec, apply(vec));
}

bool ComplexMatrix::is_hermitian(double tolerance) const {
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = r; c < dim_; ++c)
            if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tolerance) return false;
    return true;
}

bool ComplexMatrix::is_unitary(double tolerance) const {
    return max_abs_diff(adjoint() * (*this), identity(dim_)) <= tolerance;
}

bool ComplexMatrix::is_density_matrix(double tolerance) const {
    if (dim_ == 0 || !is_hermitian(tolerance)) return false;
    if (std::abs(trace() - Complex{1.0, 0.0}) > tolerance) return false;
    const auto eig = eigh(*this);
    return std::all_of(eig.values.begin(), eig.values.end(), [&](double v) { return v >= -tolerance; });
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw Error(ErrorCode::InvalidArgument, "matrix product: dimension mismatch");
    const std::size_t n = a.dim();
    ComplexMatrix out(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t k = 0; k < n; ++k) {
            const Complex ark = a(r, k);
            if (ark == Complex{0.0, 0.0}) continue;
            for (std::size_t c = 0; c < n; ++c) out(r, c) += ark * b(k, c);
        }
    return out;
}

ComplexMatrix operator*(Complex scale, ComplexMatrix m) { return m *= scale; }

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw Error(ErrorCode::InvalidArgument, "max_abs_diff: dimension mismatch");
    double m = 0.0;
    const auto ea = a.entries();
    const auto eb = b.entries();
    for (std::size_t i = 0; i < ea.size(); ++i) m = std::max(m, std::abs(ea[i] - eb[i]));
    return m;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

Complex inner(std::span<const Complex> bra, std::span<const Complex> ket) {
    if (bra.size() != ket.size()) throw Error(ErrorCode::InvalidArgument, "inner: size mismatch");
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < bra.size(); ++i) acc += std::conj(bra[i]) * ket[i];
    return acc;
}

double norm_sq(std::span<const Complex> vec) {
    double acc = 0.0;
    for (const auto& z : vec) acc += std::norm(z);
    return acc;
}

StateVector kron(std::span<const Complex> a, std::span<const Complex> b) {
    StateVector out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a)
        for (const auto& y : b) out.push_back(x * y);
    return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t na = a.dim();
    const std::size_t nb = b.dim();
    ComplexMatrix out(na * nb);
    for (std::size_t ar = 0; ar < na; ++ar)
        for (std::size_t ac = 0; ac < na; ++ac) {
            const Complex s = a(ar, ac);
            for (std::size_t br = 0; br < nb; ++br)
                for (std::size_t bc = 0; bc < nb; ++bc) out(ar * nb + br, ac * nb + bc) = s * b(br, bc);
        }
    return out;
}

HermitianEigen eigh(const ComplexMatrix& h) {
    if (!h.is_hermitian(tol::kValidation)) {
        throw Error(ErrorCode::NonHermitianInput, "matrix is not Hermitian within " + std::to_string(tol::kValidation));
    }
    const auto n = static_cast<Eigen::Index>(h.dim());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) {
            // symmetrize so tiny anti-Hermitian residue cannot leak into the solver
            m(r, c) = 0.5 * (h(r, c) + std::conj(h(c, r)));
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);

    HermitianEigen out;
    out.values.resize(h.dim());
    out.vectors = ComplexMatrix(h.dim());
    for (Eigen::Index i = 0; i < n; ++i) {
        out.values[i] = solver.eigenvalues()(i);
        for (Eigen::Index r = 0; r < n; ++r) out.vectors(r, i) = solver.eigenvectors()(r, i);
    }
    return out;
}

ComplexMatrix expm_hermitian(const ComplexMatrix& h, Complex scale) {
    const auto eig = eigh(h);
    const std::size_t n = h.dim();
    std::vector<Complex> phases(n);
    for (std::size_t i = 0; i < n; ++i) phases[i] = std::exp(scale * eig.values[i]);
    ComplexMatrix out(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            Complex acc{0.0, 0.0};
            for (std::size_t k = 0; k < n; ++k) acc += eig.vectors(r, k) * phases[k] * std::conj(eig.vectors(c, k));
            out(r, c) = acc;
        }
    return out;
}

std::array<Complex, 4> su2_elements(const std::array<double, 3>& axis, double angle) noexcept {
    const double c = std::cos(0.5 * angle);
    const double s = std::sin(0.5 * angle);
    const auto [nx, ny, nz] = axis;
    // c I - i s (nx X + ny Y + nz Z)
    return {Complex{c, -s * nz}, Complex{-s * ny, -s * nx}, Complex{s * ny, -s * nx}, Complex{c, s * nz}};
}

ComplexMatrix su2_exp(const std::array<double, 3>& axis, double angle) {
    const double norm = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
    if (norm < 1e-15) {
        if (angle != 0.0) throw Error(ErrorCode::ZeroAxis, "rotation axis has zero length");
        return ComplexMatrix::identity(2);
    }
    if (std::abs(norm - 1.0) > tol::kAlgebraic) {
        throw Error(ErrorCode::InvalidArgument, "rotation axis must be normalized, |axis| = " + std::to_string(norm));
    }
    const auto e = su2_elements(axis, angle);
    return ComplexMatrix(2, {e[0], e[1], e[2], e[3]});
}

ComplexMatrix pauli_x() { return ComplexMatrix(2, {0.0, 1.0, 1.0, 0.0}); }
ComplexMatrix pauli_y() { return ComplexMatrix(2, {0.0, Complex{0.0, -1.0}, Complex{0.0, 1.0}, 0.0}); }
ComplexMatrix pauli_z() { return ComplexMatrix(2, {1.0, 0.0, 0.0, -1.0}); }

ComplexMatrix hadamard() {
    const double r = 1.0 / std::sqrt(2.0);
    return ComplexMatrix(2, {r, r, r, -r});
}

}  // namespace esmem

#include "doctest.h"

#include <numbers>

#include "esmem/error.hpp"
#include "esmem/model.hpp"
#include "esmem/qlinalg.hpp"
#include "test_support.hpp"

using namespace esmem;
using esmem::testing::random_hermitian;

TEST_CASE("kron of identities is the identity") {
    CHECK(kron(ComplexMatrix::identity(2), ComplexMatrix::identity(2)) == ComplexMatrix::identity(4));
}

TEST_CASE("kron(sx, sx) leaves |++> invariant") {
    const auto xx = kron(pauli_x(), pauli_x());
    const auto pp = product_state("++");
    const auto out = xx.apply(pp);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(out[i] - pp[i]) < 1e-15);
}

TEST_CASE("kron(sz, I) diagonal entries") {
    const auto m = kron(pauli_z(), ComplexMatrix::identity(2));
    CHECK(m(0, 0) == Complex{1.0, 0.0});
    CHECK(m(2, 2) == Complex{-1.0, 0.0});
    CHECK(m.dim() == 4);
}

TEST_CASE("kron is associative entry by entry") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const auto a = esmem::testing::random_matrix(2, rng);
        const auto b = esmem::testing::random_matrix(2, rng);
        const auto c = esmem::testing::random_matrix(2, rng);
        const auto left = kron(kron(a, b), c);
        const auto right = kron(a, kron(b, c));
        // each entry is a product of three factors; only the association order differs
        CHECK(max_abs_diff(left, right) <= 4e-16 * left.max_abs());
    }
}

TEST_CASE("expm of the zero matrix is the identity") {
    CHECK(max_abs_diff(expm_hermitian(ComplexMatrix::zero(4), Complex{0.0, -2.5}), ComplexMatrix::identity(4)) <
          1e-15);
}

TEST_CASE("expm(sz/2, -i pi) = diag(-i, +i)") {
    const auto u = expm_hermitian(Complex{0.5, 0.0} * pauli_z(), Complex{0.0, -std::numbers::pi});
    const ComplexMatrix expected(2, {Complex{0.0, -1.0}, 0.0, 0.0, Complex{0.0, 1.0}});
    CHECK(max_abs_diff(u, expected) < 1e-12);
}

TEST_CASE("random Hermitian propagators are unitary and invert each other") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> t_dist(-3.0, 3.0);
    for (std::size_t dim : {2u, 4u, 8u}) {
        for (int trial = 0; trial < 10; ++trial) {
            const auto h = random_hermitian(dim, rng);
            const double t = t_dist(rng);
            const auto u = expm_hermitian(h, Complex{0.0, -t});
            const auto v = expm_hermitian(h, Complex{0.0, t});
            CHECK(max_abs_diff(u * v, ComplexMatrix::identity(dim)) < 1e-12);
            CHECK(u.is_unitary(1e-12));
        }
    }
}

TEST_CASE("conjugation preserves trace and Hermiticity of density matrices") {
    std::mt19937_64 rng(5);
    const auto h = random_hermitian(4, rng);
    const auto u = expm_hermitian(h, Complex{0.0, -0.7});
    const auto rho = product_state_density("+0");
    const auto out = u * rho * u.adjoint();
    CHECK(std::abs(out.trace() - Complex{1.0, 0.0}) < 1e-12);
    CHECK(out.is_hermitian(1e-12));
    CHECK(out.is_density_matrix(1e-10));
}

TEST_CASE("expm rejects non-Hermitian input") {
    ComplexMatrix m(2);
    m(0, 1) = 1.0;
    try {
        expm_hermitian(m, Complex{0.0, -1.0});
        FAIL("expected NonHermitianInput");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonHermitianInput);
    }
}

TEST_CASE("eigendecomposition reconstructs the input") {
    std::mt19937_64 rng(8);
    for (std::size_t dim : {2u, 4u, 8u}) {
        const auto h = random_hermitian(dim, rng);
        const auto eig = eigh(h);
        for (std::size_t i = 1; i < dim; ++i) CHECK(eig.values[i] >= eig.values[i - 1]);
        std::vector<Complex> diag(eig.values.begin(), eig.values.end());
        const auto rebuilt = eig.vectors * ComplexMatrix::diagonal(diag) * eig.vectors.adjoint();
        CHECK(max_abs_diff(rebuilt, h) < 1e-10);
    }
}

TEST_CASE("su2_exp closed forms") {
    CHECK(max_abs_diff(su2_exp({0.0, 0.0, 1.0}, 0.0), ComplexMatrix::identity(2)) < 1e-15);
    CHECK(max_abs_diff(su2_exp({1.0, 0.0, 0.0}, std::numbers::pi), Complex{0.0, -1.0} * pauli_x()) < 1e-15);
}

TEST_CASE("su2_exp matches the dense exponential for random axes") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> angle(-10.0, 10.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = esmem::testing::random_unit_vector(rng);
        const double a = angle(rng);
        const auto generator = Complex{0.5 * n[0], 0.0} * pauli_x() + Complex{0.5 * n[1], 0.0} * pauli_y() +
                               Complex{0.5 * n[2], 0.0} * pauli_z();
        CHECK(max_abs_diff(su2_exp(n, a), expm_hermitian(generator, Complex{0.0, -a})) < 1e-12);
    }
}

TEST_CASE("su2_exp validates its axis") {
    CHECK_NOTHROW(su2_exp({0.0, 0.0, 0.0}, 0.0));
    try {
        su2_exp({0.0, 0.0, 0.0}, 1.0);
        FAIL("expected ZeroAxis");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ZeroAxis);
    }
    CHECK_THROWS_AS(su2_exp({2.0, 0.0, 0.0}, 1.0), Error);
}

TEST_CASE("density-matrix predicate") {
    CHECK(product_state_density("+").is_density_matrix());
    CHECK((Complex{0.5, 0.0} * ComplexMatrix::identity(2)).is_density_matrix());
    CHECK_FALSE(ComplexMatrix::identity(2).is_density_matrix());  // trace 2
    const ComplexMatrix negative(2, {1.5, 0.0, 0.0, -0.5});
    CHECK_FALSE(negative.is_density_matrix());
    CHECK(kron(pauli_x(), pauli_y()).is_unitary(1e-12));
}

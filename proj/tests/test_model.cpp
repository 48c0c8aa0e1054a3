#include "doctest.h"

#include <cmath>
#include <numbers>

#include "esmem/error.hpp"
#include "esmem/model.hpp"

using namespace esmem;

namespace {

SystemParams two_qubits(double j, double omega0 = 0.0, FrameMode mode = FrameMode::EffectiveZeroSplitting) {
    SystemParams p;
    p.n_qubits = 2;
    p.j_coupling = j;
    p.omega0 = omega0;
    p.frame_mode = mode;
    return p;
}

std::vector<double> eigenvalues(const ComplexMatrix& h) { return eigh(h).values; }

}  // namespace

TEST_CASE("lab-frame H0 spectrum for two qubits") {
    const auto values = eigenvalues(build_h0(two_qubits(1.0, 1.0, FrameMode::LabFrame)));
    const std::vector<double> expected{-1.0, 0.0, 0.0, 1.0};
    for (std::size_t i = 0; i < 4; ++i) CHECK(values[i] == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("effective zero splitting removes H0") {
    CHECK(build_h0(two_qubits(1.0, 5.0)).max_abs() == 0.0);
}

TEST_CASE("single-qubit H0 is diagonal") {
    SystemParams p;
    p.n_qubits = 1;
    p.omega0 = 2.0;
    p.frame_mode = FrameMode::LabFrame;
    const auto h = build_h0(p);
    CHECK(h(0, 0) == Complex{1.0, 0.0});
    CHECK(h(1, 1) == Complex{-1.0, 0.0});
    CHECK(h(0, 1) == Complex{0.0, 0.0});
}

TEST_CASE("H_ES spectrum, gap and ground space") {
    const auto h = build_hes(two_qubits(1.0));
    const auto values = eigenvalues(h);
    CHECK(values[0] == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(values[1] == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(values[2] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(values[3] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(values[2] - values[1] == doctest::Approx(1.0));

    const auto eig = eigh(h);
    ComplexMatrix ground = ComplexMatrix::zero(4);
    for (std::size_t k = 0; k < 2; ++k) {
        StateVector v(4);
        for (std::size_t r = 0; r < 4; ++r) v[r] = eig.vectors(r, k);
        ground += ComplexMatrix::projector(v);
    }
    const auto expected = ComplexMatrix::projector(product_state("++")) + ComplexMatrix::projector(product_state("--"));
    CHECK(max_abs_diff(ground, expected) < 1e-10);
}

TEST_CASE("H_ES edge cases") {
    CHECK(build_hes(two_qubits(0.0)).max_abs() == 0.0);
    SystemParams one;
    one.n_qubits = 1;
    try {
        build_hes(one);
        FAIL("expected NotApplicable");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotApplicable);
    }
}

TEST_CASE("three-qubit ground space is spanned by |+++> and |--->") {
    SystemParams p;
    p.n_qubits = 3;
    p.j_coupling = 1.0;
    const auto h = build_hes(p);
    for (const char* label : {"+++", "---"}) {
        const auto psi = product_state(label);
        const auto hpsi = h.apply(psi);
        for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(hpsi[i] + 1.0 * psi[i]) < 1e-12);
    }
    const auto values = eigenvalues(h);
    CHECK(values[0] == doctest::Approx(-1.0));
    CHECK(values[1] == doctest::Approx(-1.0));
    CHECK(values[2] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("X-parity stabilizers commute with H_ES") {
    const auto h = build_hes(two_qubits(1.3));
    const auto g = pauli_operator(2, 0, Axis::X) * pauli_operator(2, 1, Axis::X);
    CHECK(commutator(g, h).max_abs() < 1e-12);

    SystemParams p;
    p.n_qubits = 3;
    const auto h3 = build_hes(p);
    const auto g12 = pauli_operator(3, 0, Axis::X) * pauli_operator(3, 1, Axis::X);
    const auto g23 = pauli_operator(3, 1, Axis::X) * pauli_operator(3, 2, Axis::X);
    CHECK(commutator(g12, h3).max_abs() < 1e-12);
    CHECK(commutator(g23, h3).max_abs() < 1e-12);
}

TEST_CASE("noise Hamiltonian examples") {
    auto p = two_qubits(1.0);
    p.gamma = 1.0;
    std::vector<std::array<double, 3>> fields{{0.0, 0.0, 1.0}, {0.0, 0.0, 0.0}};
    const auto expected = spin_operator(2, 0, Axis::Z);
    CHECK(max_abs_diff(build_noise_hamiltonian(p, fields), expected) < 1e-15);
    fields = {{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
    CHECK(build_noise_hamiltonian(p, fields).max_abs() == 0.0);

    p.gamma = 2.0;
    fields = {{1.0, -0.5, 0.25}, {0.0, 3.0, 0.0}};
    ComplexMatrix manual = ComplexMatrix::zero(4);
    manual += Complex{2.0, 0.0} * spin_operator(2, 0, Axis::X);
    manual += Complex{-1.0, 0.0} * spin_operator(2, 0, Axis::Y);
    manual += Complex{0.5, 0.0} * spin_operator(2, 0, Axis::Z);
    manual += Complex{6.0, 0.0} * spin_operator(2, 1, Axis::Y);
    CHECK(max_abs_diff(build_noise_hamiltonian(p, fields), manual) < 1e-15);
}

TEST_CASE("spin operator algebra") {
    const int n = 3;
    for (int i = 0; i < n; ++i) {
        for (Axis a : kAxes) {
            const auto s = spin_operator(n, i, a);
            CHECK(s.is_hermitian(1e-15));
            CHECK(max_abs_diff(s * s, Complex{0.25, 0.0} * ComplexMatrix::identity(8)) < 1e-15);
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                for (Axis b : kAxes) CHECK(commutator(s, spin_operator(n, j, b)).max_abs() < 1e-15);
            }
        }
        // [I_x, I_y] = i I_z on the same qubit
        const auto c = commutator(spin_operator(n, i, Axis::X), spin_operator(n, i, Axis::Y));
        CHECK(max_abs_diff(c, Complex{0.0, 1.0} * spin_operator(n, i, Axis::Z)) < 1e-15);
    }
}

TEST_CASE("qubit 0 is the most significant tensor factor") {
    const auto z0 = pauli_operator(2, 0, Axis::Z);
    CHECK(max_abs_diff(z0, kron(pauli_z(), ComplexMatrix::identity(2))) == 0.0);
}

TEST_CASE("product states") {
    const auto plus = product_state("+");
    CHECK(std::abs(plus[0] - Complex{1 / std::sqrt(2.0), 0}) < 1e-15);
    const auto r = product_state("r");
    const auto sy = pauli_y();
    CHECK(std::abs(sy.expectation(r) - Complex{1.0, 0.0}) < 1e-15);
    CHECK(product_state("01")[1] == Complex{1.0, 0.0});
    CHECK_THROWS(product_state("2"));
    CHECK_THROWS(product_state(""));
}

TEST_CASE("K operators at t = 0 are the bare spin operators") {
    const auto p = two_qubits(1.0);
    for (int i = 0; i < 2; ++i)
        for (Axis a : kAxes) CHECK(max_abs_diff(k_operator(p, i, a, 0.0), spin_operator(2, i, a)) < 1e-15);
}

TEST_CASE("K_y and K_z at a quarter period become two-body operators") {
    const auto p = two_qubits(1.0);
    const double t = std::numbers::pi / 2.0;
    const auto k = k_operator(p, 0, Axis::Z, t);
    const auto expected = Complex{-2.0, 0.0} * spin_operator(2, 0, Axis::Y) * spin_operator(2, 1, Axis::X);
    CHECK(max_abs_diff(k, expected) < 1e-12);
    const auto ky = k_operator(p, 0, Axis::Y, t);
    const auto expected_y = Complex{2.0, 0.0} * spin_operator(2, 0, Axis::Z) * spin_operator(2, 1, Axis::X);
    CHECK(max_abs_diff(ky, expected_y) < 1e-12);
}

TEST_CASE("K operators equal the Heisenberg-picture conjugation under H_ES") {
    for (double j : {0.7, 1.0, 2.5}) {
        const auto p = two_qubits(j);
        const auto h = build_hes(p);
        for (int step = 0; step <= 50; ++step) {
            const double t = 0.13 * step;
            const auto u = expm_hermitian(h, Complex{0.0, -t});
            for (int i = 0; i < 2; ++i) {
                for (Axis a : kAxes) {
                    const auto heisenberg = u.adjoint() * spin_operator(2, i, a) * u;
                    CHECK(max_abs_diff(k_operator(p, i, a, t), heisenberg) < 1e-12);
                }
            }
        }
    }
}

TEST_CASE("K_ix is time independent") {
    const auto p = two_qubits(1.0);
    for (double t : {0.3, 1.7, 12.0})
        CHECK(max_abs_diff(k_operator(p, 1, Axis::X, t), spin_operator(2, 1, Axis::X)) == 0.0);
}

TEST_CASE("K operators only exist for two qubits") {
    SystemParams p;
    p.n_qubits = 3;
    CHECK_THROWS_AS(k_operator(p, 0, Axis::Z, 1.0), Error);
}

TEST_CASE("parameter validation and lab-frame warnings") {
    auto p = two_qubits(1.0);
    p.noise.tau0 = 1.0;
    CHECK_NOTHROW(p.validate());
    p.n_qubits = 0;
    CHECK_THROWS_AS(p.validate(), Error);
    p.n_qubits = 2;
    p.j_coupling = -1.0;
    CHECK_THROWS_AS(p.validate(), Error);

    auto lab = two_qubits(1.0, 2.0, FrameMode::LabFrame);
    lab.noise.tau0 = 1.0;
    lab.noise.amplitude_sq = {0.0, 0.0, 0.01};
    CHECK_FALSE(lab.warnings().empty());  // omega0 is not >> J
    lab.omega0 = 1000.0;
    CHECK(lab.warnings().empty());
    CHECK(two_qubits(1.0, 2.0).warnings().empty());
}

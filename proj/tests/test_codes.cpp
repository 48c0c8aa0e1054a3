#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "esmem/codes.hpp"
#include "esmem/error.hpp"
#include "esmem/model.hpp"

using namespace esmem;

namespace {

LogicalQubit random_logical(std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    Complex a{n(rng), n(rng)}, b{n(rng), n(rng)};
    const double norm = std::sqrt(std::norm(a) + std::norm(b));
    return LogicalQubit{a / norm, b / norm, Encoding::Bare};
}

StateVector apply(const ComplexMatrix& m, const StateVector& v) { return m.apply(v); }

}  // namespace

TEST_CASE("rotated CNOT equals the Hadamard-conjugated CNOT") {
    const ComplexMatrix cnot(4, {1, 0, 0, 0,  //
                                 0, 1, 0, 0,  //
                                 0, 0, 0, 1,  //
                                 0, 0, 1, 0});
    const auto hh = kron(hadamard(), hadamard());
    CHECK(max_abs_diff(rotated_cnot(), hh * cnot * hh) < 1e-15);
    // |-,+> -> |-,->
    const auto out = rotated_cnot().apply(product_state("-+"));
    const auto expected = product_state("--");
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(out[i] - expected[i]) < 1e-15);
}

TEST_CASE("encoding basis states") {
    const auto zero = encode_two_qubit({1.0, 0.0});
    const auto one = encode_two_qubit({0.0, 1.0});
    const auto pp = product_state("++");
    const auto mm = product_state("--");
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::abs(zero[i] - pp[i]) < 1e-12);
        CHECK(std::abs(one[i] - mm[i]) < 1e-12);
    }
}

TEST_CASE("encoding matches the explicit superposition") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const auto q = random_logical(rng);
        const auto encoded = encode_two_qubit(q);
        const auto pp = product_state("++");
        const auto mm = product_state("--");
        for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(encoded[i] - (q.c0 * pp[i] + q.c1 * mm[i])) < 1e-12);
    }
}

TEST_CASE("encode then decode is the identity") {
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 100; ++trial) {
        const auto q = random_logical(rng);
        const auto back = decode_two_qubit(encode_two_qubit(q));
        CHECK(std::abs(back.c0 - q.c0) < 1e-12);
        CHECK(std::abs(back.c1 - q.c1) < 1e-12);
        CHECK(back.is_normalized());
    }
    const auto plain = decode_two_qubit(product_state("++"));
    CHECK(std::abs(plain.c0 - Complex{1.0, 0.0}) < 1e-12);
    CHECK(std::abs(plain.c1) < 1e-12);
}

TEST_CASE("decoding rejects states outside the code space") {
    const auto flipped = apply(pauli_operator(2, 0, Axis::Z), encode_two_qubit({1.0, 0.0}));
    CHECK(code_space_overlap(flipped) < 1e-12);
    try {
        decode_two_qubit(flipped);
        FAIL("expected OutOfCodeSpace");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OutOfCodeSpace);
    }
}

TEST_CASE("code states are ground states of the coupling Hamiltonian") {
    SystemParams p;
    p.n_qubits = 2;
    p.j_coupling = 1.0;
    const auto h = build_hes(p);
    std::mt19937_64 rng(12);
    const auto psi = encode_two_qubit(random_logical(rng));
    CHECK(std::abs(h.expectation(psi) - Complex{-0.5, 0.0}) < 1e-12);
}

TEST_CASE("stabilizer expectation values") {
    std::mt19937_64 rng(13);
    const auto psi = encode_two_qubit(random_logical(rng));
    CHECK(measure_stabilizers(psi, Encoding::TwoQubitPhase)[0] == doctest::Approx(1.0).epsilon(1e-12));
    const auto flipped = apply(pauli_operator(2, 1, Axis::Z), psi);
    CHECK(measure_stabilizers(flipped, Encoding::TwoQubitPhase)[0] == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("sigma_x errors commute with the phase-code stabilizers") {
    std::mt19937_64 rng(14);
    const auto psi = encode_two_qubit(random_logical(rng));
    const auto g = pauli_operator(2, 0, Axis::X) * pauli_operator(2, 1, Axis::X);
    for (int q = 0; q < 2; ++q) {
        const auto x = pauli_operator(2, q, Axis::X);
        CHECK(commutator(x, g).max_abs() < 1e-15);
        const auto hit = apply(x, psi);
        CHECK(measure_stabilizers(hit, Encoding::TwoQubitPhase)[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(code_space_overlap(hit) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("three-qubit single flips have distinct syndromes that the lookup inverts") {
    const auto psi = product_state("+++");
    const std::array<std::array<int, 2>, 3> expected{{{-1, 1}, {-1, -1}, {1, -1}}};
    for (int q = 0; q < 3; ++q) {
        const auto hit = apply(pauli_operator(3, q, Axis::Z), psi);
        const auto s = measure_stabilizers(hit, Encoding::ThreeQubitPhase);
        const std::array<int, 2> syndrome{static_cast<int>(std::lround(s[0])), static_cast<int>(std::lround(s[1]))};
        CHECK(syndrome == expected[q]);
        CHECK(correction_for(syndrome) == q);
    }
    CHECK_FALSE(correction_for({1, 1}).has_value());
    const auto s = measure_stabilizers(psi, Encoding::ThreeQubitPhase);
    CHECK(s[0] == doctest::Approx(1.0));
    CHECK(s[1] == doctest::Approx(1.0));
}

TEST_CASE("majority-vote decoding fails exactly on two or more flips") {
    // enumerate the 8 flip patterns and decode them by hand
    for (int pattern = 0; pattern < 8; ++pattern) {
        StateVector psi = product_state("+++");
        for (int q = 0; q < 3; ++q)
            if (pattern & (1 << q)) psi = apply(pauli_operator(3, q, Axis::Z), psi);
        const auto s = measure_stabilizers(psi, Encoding::ThreeQubitPhase);
        const std::array<int, 2> syndrome{static_cast<int>(std::lround(s[0])), static_cast<int>(std::lround(s[1]))};
        if (const auto fix = correction_for(syndrome)) psi = apply(pauli_operator(3, *fix, Axis::Z), psi);
        const auto x3 = pauli_operator(3, 0, Axis::X) * pauli_operator(3, 1, Axis::X) * pauli_operator(3, 2, Axis::X);
        const bool failed = x3.expectation(psi).real() < 0.0;
        CAPTURE(pattern);
        CHECK(failed == (__builtin_popcount(static_cast<unsigned>(pattern)) >= 2));
    }
}

TEST_CASE("a single correction round without errors never fails") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto r = active_correction_round(0.0, seed);
        CHECK_FALSE(r.logical_error);
        CHECK_FALSE(r.applied_correction.has_value());
    }
    for (std::uint64_t seed = 0; seed < 20; ++seed) CHECK(active_correction_round(1.0, seed).logical_error);
}

TEST_CASE("Monte Carlo logical failure matches the exact binomial law") {
    for (double eps : {0.01, 0.05}) {
        const auto summary = run_active_correction_mc(eps, 100000, 2024);
        const double exact = 3 * eps * eps * (1 - eps) + eps * eps * eps;
        const double sd = std::sqrt(exact * (1 - exact) / 100000.0);
        CAPTURE(eps);
        CHECK(std::abs(summary.rate - exact) < 4.0 * sd);
        CHECK(summary.rounds == 100000);
    }
}

TEST_CASE("Monte Carlo runs are reproducible") {
    const auto a = run_active_correction_mc(0.1, 5000, 7);
    const auto b = run_active_correction_mc(0.1, 5000, 7);
    CHECK(a.failures == b.failures);
    CHECK_THROWS_AS(run_active_correction_mc(1.5, 10, 1), Error);
}

#include "doctest.h"

#include <cmath>
#include <sstream>

#include "esmem/analytic.hpp"
#include "esmem/error.hpp"

using namespace esmem;

namespace {

SystemParams memory(std::array<double, 3> h2, double tau0, double j, double omega0 = 0.0) {
    SystemParams p;
    p.n_qubits = 2;
    p.gamma = 1.0;
    p.j_coupling = j;
    p.omega0 = omega0;
    p.frame_mode = omega0 > 0.0 ? FrameMode::LabFrame : FrameMode::EffectiveZeroSplitting;
    p.noise.amplitude_sq = h2;
    p.noise.tau0 = tau0;
    return p;
}

double lorentzian(double h2, double tau0, double w) { return h2 * tau0 / (1.0 + w * w * tau0 * tau0); }

}  // namespace

TEST_CASE("z-only noise: rates reduce to the zero-frequency and J-frequency spectra") {
    const double h2 = 0.04, tau0 = 1.0, j = 3.0;
    const auto r = rates_with_suppression(memory({0, 0, h2}, tau0, j));
    CHECK(r.inv_t1 == 0.0);
    CHECK(r.inv_t1_0 == 0.0);
    CHECK(r.inv_t2x == doctest::Approx(lorentzian(h2, tau0, j)).epsilon(1e-14));
    CHECK(r.inv_t2y == doctest::Approx(lorentzian(h2, tau0, j)).epsilon(1e-14));
    CHECK(r.inv_t2 == doctest::Approx(h2 * tau0 / 10.0).epsilon(1e-14));
    CHECK(r.inv_t2_0 == doctest::Approx(h2 * tau0).epsilon(1e-14));
    CHECK(r.inv_t2_0 / r.inv_t2 == doctest::Approx(enhancement(j * tau0)).epsilon(1e-14));
}

TEST_CASE("zero coupling reproduces the baseline") {
    const auto p = memory({0.1, 0.2, 0.3}, 0.7, 0.0, 5.0);
    const auto r = rates_with_suppression(p);
    CHECK(r.inv_t2 == doctest::Approx(r.inv_t2_0).epsilon(1e-14));
    CHECK(r.inv_t1 == doctest::Approx(r.inv_t1_0).epsilon(1e-14));
}

TEST_CASE("rates are continuous as J goes to zero") {
    const auto p0 = memory({0.1, 0.2, 0.3}, 0.7, 0.0, 5.0);
    const auto p1 = memory({0.1, 0.2, 0.3}, 0.7, 1e-9, 5.0);
    CHECK(rates_with_suppression(p1).inv_t2 == doctest::Approx(rates_with_suppression(p0).inv_t2).epsilon(1e-12));
}

TEST_CASE("isotropic noise far above the splitting and the coupling") {
    const double h2 = 1.0, tau0 = 1.0, w0 = 1e4, j = 10.0;
    const auto r = rates_with_suppression(memory({h2, h2, h2}, tau0, j, w0));
    const double kx = lorentzian(h2, tau0, w0);
    const double ky = 0.5 * (lorentzian(h2, tau0, w0 + j) + lorentzian(h2, tau0, w0 - j));
    const double kz = lorentzian(h2, tau0, j);
    CHECK(r.inv_t2x == doctest::Approx(ky + kz).epsilon(1e-14));
    CHECK(r.inv_t2y == doctest::Approx(kx + kz).epsilon(1e-14));
    CHECK(r.inv_t1 == doctest::Approx(kx + ky).epsilon(1e-14));
    CHECK(r.inv_t2 == doctest::Approx(0.5 * r.inv_t1 + kz).epsilon(1e-14));
    // dephasing dominated by k_zz(J) = H^2 tau0 / 101
    CHECK(r.inv_t2 == doctest::Approx(h2 * tau0 / 101.0).epsilon(1e-6));
}

TEST_CASE("baseline longitudinal rate is suppressed by the splitting") {
    const auto r = rates_baseline(memory({1.0, 1.0, 1.0}, 1.0, 1.0, 100.0));
    CHECK(r.inv_t1_0 == doctest::Approx(2.0 / 10001.0).epsilon(1e-14));
    CHECK(r.inv_t1_0 / r.inv_t2_0 < 1e-3);
}

TEST_CASE("no noise, no decay") {
    const auto r = rates_with_suppression(memory({0, 0, 0}, 1.0, 1.0));
    CHECK(r.inv_t2 == 0.0);
    CHECK(r.inv_t1 == 0.0);
    CHECK(r.inv_t2_0 == 0.0);
}

TEST_CASE("enhancement factor") {
    CHECK(enhancement(0.0) == 1.0);
    CHECK(enhancement(100.0) == 10001.0);
    CHECK(enhancement(200.0) == 40001.0);
    CHECK(enhancement(200.0) / enhancement(100.0) == doctest::Approx(4.0).epsilon(1e-3));
    CHECK_THROWS_AS(enhancement(-1.0), Error);
}

TEST_CASE("enhancement equals the ratio of z-only rates for any coupling") {
    for (double jt : {0.0, 0.3, 1.0, 7.0, 1e3}) {
        const auto r = rates_with_suppression(memory({0, 0, 0.5}, 2.0, jt / 2.0));
        CHECK(r.inv_t2_0 / r.inv_t2 == doctest::Approx(enhancement(jt)).epsilon(1e-12));
    }
}

TEST_CASE("phase-flip probability") {
    CHECK(phase_flip_probability({0.01, 1.0}) == doctest::Approx(1.0 - std::exp(-0.01)).epsilon(1e-15));
    CHECK(phase_flip_probability({0.01, 1.0}) == doctest::Approx(9.95e-3).epsilon(1e-3));
    CHECK_THROWS_AS(phase_flip_probability({0.0, 1.0}), Error);
}

TEST_CASE("active correction effective T2 at dt / T2^0 = 0.01") {
    const double eps = 1.0 - std::exp(-0.01);
    const double oracle = -0.01 / std::log(1.0 - 3.0 * eps * eps);
    const double t2eff = active_correction_effective_t2({0.01, 1.0});
    CHECK(t2eff == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(t2eff == doctest::Approx(33.663).epsilon(1e-4));
    // small-eps law T2^0 / (3 dt)
    CHECK(std::abs(t2eff / (1.0 / 0.03) - 1.0) < 0.02);
}

TEST_CASE("active correction degrades monotonically with the interval") {
    double previous = std::numeric_limits<double>::infinity();
    for (double x = 1e-4; x < 0.3; x *= 1.5) {
        const double t = active_correction_effective_t2({x, 1.0});
        CHECK(t < previous);
        previous = t;
    }
}

TEST_CASE("active correction saturates when the failure reaches one") {
    try {
        active_correction_effective_t2({5.0, 1.0});
        FAIL("expected Saturated");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Saturated);
    }
}

TEST_CASE("exact majority-vote failure enumerates flip patterns") {
    for (double eps : {0.0, 0.01, 0.05, 0.3, 1.0}) {
        double failure = 0.0;
        for (int pattern = 0; pattern < 8; ++pattern) {
            const int flips = __builtin_popcount(static_cast<unsigned>(pattern));
            if (flips >= 2) failure += std::pow(eps, flips) * std::pow(1.0 - eps, 3 - flips);
        }
        CHECK(exact_logical_failure(eps) == doctest::Approx(failure).epsilon(1e-14));
    }
    CHECK(exact_logical_failure(0.05) == doctest::Approx(7.25e-3).epsilon(1e-12));
    CHECK(active_correction_effective_t2_exact({0.01, 1.0}) > active_correction_effective_t2({0.01, 1.0}));
}

TEST_CASE("comparison table rows") {
    const auto rows = comparison_table();
    REQUIRE(rows.size() == 3);
    const double expected[3][3] = {{100, 10, 300}, {1e4, 100, 3e4}, {1e6, 1000, 3e6}};
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(rows[i].enhancement == expected[i][0]);
        CHECK(rows[i].j_tau0 == doctest::Approx(expected[i][1]).epsilon(1e-12));
        CHECK(rows[i].t2_0_over_dt == expected[i][2]);
        CHECK(rows[i].j_tau0_exact == doctest::Approx(std::sqrt(expected[i][0] - 1.0)).epsilon(1e-14));
        // the exact root satisfies the defining equation
        const double t2eff = active_correction_effective_t2({1.0 / rows[i].t2_0_over_dt_exact, 1.0});
        CHECK(t2eff == doctest::Approx(expected[i][0]).epsilon(1e-9));
        CHECK(rows[i].t2_0_over_dt_exact == doctest::Approx(expected[i][2]).epsilon(0.02));
    }
}

TEST_CASE("comparison table CSV") {
    std::ostringstream out;
    write_table_csv(out, comparison_table());
    CHECK(out.str() == "enhancement,j_tau0,t2_0_over_dt\n100,10,300\n10000,100,30000\n1000000,1000,3000000\n");
}

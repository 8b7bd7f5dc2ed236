#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "uwlink/frequency.hpp"

using namespace uwlink;

namespace {

// Frozen from the independent 50-digit evaluation.
constexpr double kFStar100m = 370.996455578;
constexpr double kFStar1km = 20.7690336732;
constexpr double kFStar10km = 5.9875770338;
constexpr double kFStar100km = 1.02712957165;
constexpr double kC0At1km = 1.16477042555e-8;
constexpr double kC1At1km = 235.15234978;
constexpr double kC2At1km = 9.62972101386e-6;
constexpr double kLeadConstant = 4.20973415581e-13;  // 2*pi*I_ref*1e5

}  // namespace

TEST_CASE("slope formula agrees with a finite difference of the source level") {
    for (double d : {1e3, 1e5}) {
        for (double f : {5.0, 20.0, 80.0}) {
            const double h = f * 1e-6;
            const double fd = (source_level_db(0.0, d, f + h) -
                               source_level_db(0.0, d, f - h)) /
                              (2.0 * h);
            const double an = d_source_level_d_freq(f, d);
            CHECK(std::abs(an - fd) < 1e-6 * (1.0 + std::abs(an)));
        }
    }
}

TEST_CASE("slope signs at the extremes") {
    CHECK(d_source_level_d_freq(1e-3, 1000.0) < 0.0);
    CHECK(d_source_level_d_freq(1e-2, 100.0) < 0.0);
    CHECK(d_source_level_d_freq(1e3, 1000.0) > 0.0);
    CHECK_THROWS_AS(d_source_level_d_freq(0.0, 1000.0), std::domain_error);
    CHECK_THROWS_AS(d_source_level_d_freq(1.0, 0.0), std::domain_error);
}

TEST_CASE("optimal frequency at the anchor distances") {
    CHECK(optimal_frequency_khz(100.0) == doctest::Approx(kFStar100m).epsilon(1e-8));
    CHECK(optimal_frequency_khz(1000.0) == doctest::Approx(kFStar1km).epsilon(1e-8));
    CHECK(optimal_frequency_khz(10000.0) == doctest::Approx(kFStar10km).epsilon(1e-8));
    CHECK(optimal_frequency_khz(100000.0) == doctest::Approx(kFStar100km).epsilon(1e-8));
    // Spec-level sanity band for the 1 km point.
    CHECK(optimal_frequency_khz(1000.0) > 20.6);
    CHECK(optimal_frequency_khz(1000.0) < 21.0);
}

TEST_CASE("optimal frequency agrees with a dense grid minimization") {
    // Independent oracle: argmin of the source level over 10^4 grid points.
    for (double d : {300.0, 1000.0, 30000.0}) {
        double best_f = 0.0;
        double best_sl = 1e300;
        const double f_hi = 500.0;
        for (int i = 1; i <= 10000; ++i) {
            const double f = f_hi * i / 10000.0;
            const double sl = source_level_db(0.0, d, f);
            if (sl < best_sl) {
                best_sl = sl;
                best_f = f;
            }
        }
        CHECK(std::abs(optimal_frequency_khz(d) - best_f) <= f_hi / 10000.0);
    }
}

TEST_CASE("root residual and local minimality") {
    for (double d : {100.0, 550.0, 1000.0, 10000.0, 100000.0}) {
        const double f = optimal_frequency_khz(d);
        CHECK(std::abs(d_source_level_d_freq(f, d)) < 1e-8);
        const double sl = source_level_db(0.0, d, f);
        CHECK(sl <= source_level_db(0.0, d, f * 1.001));
        CHECK(sl <= source_level_db(0.0, d, f * 0.999));
    }
}

TEST_CASE("optimal frequency strictly decreasing over a 50-point log grid") {
    double prev = 1e300;
    for (int i = 0; i < 50; ++i) {
        const double d = 100.0 * std::pow(1000.0, i / 49.0);
        const double f = optimal_frequency_khz(d);
        CHECK(f < prev);
        prev = f;
    }
}

TEST_CASE("optimal frequency rejects distances outside the model range") {
    CHECK_THROWS_AS(optimal_frequency_khz(50.0), std::domain_error);
    CHECK_THROWS_AS(optimal_frequency_khz(2e5), std::domain_error);
    // Bracket expansion engages below ~270 m where f* exceeds 200 kHz.
    CHECK(optimal_frequency_khz(150.0) > 200.0);
}

TEST_CASE("derived constants at 1 km") {
    const ChannelEnv env;
    const DerivedConstants dc = derive_constants(1000.0, env);
    CHECK(dc.f_star_khz == doctest::Approx(kFStar1km).epsilon(1e-9));
    CHECK(dc.c0_w == doctest::Approx(kC0At1km).epsilon(1e-9));
    CHECK(dc.c1 == doctest::Approx(kC1At1km).epsilon(1e-9));
    CHECK(dc.c2_s_per_bit == doctest::Approx(kC2At1km).epsilon(1e-9));
    CHECK(dc.c1 == doctest::Approx(std::pow(dc.f_star_khz, 1.8)).epsilon(1e-15));
    CHECK(dc.c2_s_per_bit == doctest::Approx(1.0 / (5000.0 * dc.f_star_khz)).epsilon(1e-15));
    const double lead = 2.0 * std::numbers::pi * ChannelEnv::reference_intensity_w_m2 * 1e5;
    CHECK(lead == doctest::Approx(kLeadConstant).epsilon(1e-10));
}

TEST_CASE("reduced constants reproduce the linear snr") {
    const ChannelEnv env;
    for (double d : {100.0, 1000.0, 31623.0, 100000.0}) {
        const DerivedConstants dc = derive_constants(d, env);
        for (double pt : {1e-8, 1e-3, 1.0, 50.0}) {
            const double lin = std::pow(
                10.0, snr_per_bit_db(pt, d, dc.f_star_khz, env) / 10.0);
            CHECK(dc.c1 * pt / dc.c0_w == doctest::Approx(lin).epsilon(1e-9));
        }
    }
}

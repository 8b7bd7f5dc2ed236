#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "doctest.h"
#include "uwlink/objective.hpp"

using namespace uwlink;

namespace {

ProblemInstance instance_at(double d, double p0) {
    ProblemInstance inst;
    inst.env = ChannelEnv{};
    inst.constants = derive_constants(d, inst.env);
    inst.p_acc_min = p0;
    inst.validate();
    return inst;
}

// Deterministic uniform sampler for property checks.
struct MiniRng {
    std::uint64_t s = 0x243F6A8885A308D3ULL;
    double next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return static_cast<double>(s >> 11) * 0x1.0p-53;
    }
};

}  // namespace

TEST_CASE("problem instance validation") {
    CHECK_NOTHROW(instance_at(1000.0, 0.98));
    CHECK_THROWS_AS(instance_at(1000.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(instance_at(1000.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(instance_at(1000.0, 0.4), std::domain_error);
    CHECK_THROWS_AS(instance_at(1000.0, 1.2), std::domain_error);
}

TEST_CASE("energy per attempt") {
    ChannelEnv env;
    env.electronics_power_w = 0.0;
    CHECK(energy_per_attempt_j({0.0, 500.0}, 12.0, env) == 0.0);
    CHECK(energy_per_attempt_j({1.0, 1000.0}, 1.0, env) ==
          doctest::Approx(1.2).epsilon(1e-15));
    env.electronics_power_w = 1e-6;
    CHECK(energy_per_attempt_j({2.25e-7, 183.0}, 20.8, env) ==
          doctest::Approx(1.1173557692307692e-8).epsilon(1e-12));
    CHECK_THROWS_AS(energy_per_attempt_j({1.0, 0.0}, 1.0, env), std::domain_error);
    CHECK_THROWS_AS(energy_per_attempt_j({1.0, 100.0}, 0.0, env), std::domain_error);
}

TEST_CASE("energy per bit factors as attempt energy over acceptance and payload") {
    const ChannelEnv env;
    const double d = 1000.0;
    const double f = 20.0;
    for (double pt : {1e-7, 1e-5, 1e-2}) {
        for (double length : {40.0, 200.0, 1000.0}) {
            const DesignPoint p{pt, length};
            const double acc = packet_acceptance(snr_per_bit_db(pt, d, f, env), length);
            const double expect = energy_per_attempt_j(p, f, env) /
                                  (acc * (length - env.overhead_bits()));
            CHECK(energy_per_bit_j(p, f, d, env) ==
                  doctest::Approx(expect).epsilon(1e-12));
        }
    }
    // Perfect channel with zero overhead: energy per attempt over length.
    ChannelEnv bare;
    bare.header_bits = 0.0;
    bare.trailer_bits = 0.0;
    const double strong = power_from_source_level_w(source_level_db(200.0, d, f), bare);
    CHECK(energy_per_bit_j({strong, 64.0}, f, d, bare) ==
          doctest::Approx(energy_per_attempt_j({strong, 64.0}, f, bare) / 64.0)
              .epsilon(1e-12));
    CHECK_THROWS_AS(energy_per_bit_j({1.0, 32.0}, f, d, ChannelEnv{}), std::domain_error);
}

TEST_CASE("reduced objective limits") {
    const ProblemInstance inst = instance_at(1000.0, 0.99);
    const double m = inst.env.overhead_bits();
    // Zero power: acceptance collapses to 0.5 per bit.
    for (double length : {m + 1.0, 100.0, 300.0}) {
        const double expect = inst.constants.c2_s_per_bit * length * 5.0 *
                              inst.env.electronics_power_w /
                              ((length - m) * std::pow(0.5, length));
        CHECK(reduced_objective_j({0.0, length}, inst) ==
              doctest::Approx(expect).epsilon(1e-9));
    }
    // Large power grows linearly while acceptance saturates.
    CHECK(reduced_objective_j({1e3, 100.0}, inst) <
          reduced_objective_j({1e6, 100.0}, inst));
    CHECK_THROWS_AS(reduced_objective_j({1.0, m}, inst), std::domain_error);
}

TEST_CASE("log objective is the log of the objective and keeps the argmin") {
    const ProblemInstance inst = instance_at(1000.0, 0.99);
    MiniRng rng;
    for (int i = 0; i < 200; ++i) {
        const double length = 33.0 + 600.0 * rng.next();
        const double pt = min_power_for_reliability_w(length, inst) *
                          std::pow(10.0, 3.0 * rng.next());
        const double direct = reduced_objective_j({pt, length}, inst);
        CHECK(std::exp(log_reduced_objective({pt, length}, inst)) ==
              doctest::Approx(direct).epsilon(1e-12));
    }
    // Coarse argmin agreement between the two forms.
    double best_raw = 1e300;
    double best_log = 1e300;
    double arg_raw = 0.0;
    double arg_log = 0.0;
    for (int j = 0; j < 500; ++j) {
        const double length = 33.0 + j;
        const double pt = min_power_for_reliability_w(length, inst);
        const double raw = reduced_objective_j({pt, length}, inst);
        const double lg = log_reduced_objective({pt, length}, inst);
        if (raw < best_raw) {
            best_raw = raw;
            arg_raw = length;
        }
        if (lg < best_log) {
            best_log = lg;
            arg_log = length;
        }
    }
    CHECK(arg_raw == arg_log);
}

TEST_CASE("reduced objective equals the full chain at the optimal frequency") {
    MiniRng rng;
    int tested = 0;
    while (tested < 100) {
        const double d = 100.0 * std::pow(1000.0, rng.next());
        const double p0 = 0.55 + 0.44 * rng.next();
        const ProblemInstance inst = instance_at(d, p0);
        const double length = (inst.env.overhead_bits() + 1.0) + 500.0 * rng.next();
        const double pt = min_power_for_reliability_w(length, inst) *
                          std::pow(10.0, 3.0 * rng.next());
        const DesignPoint p{pt, length};
        const double reduced = reduced_objective_j(p, inst);
        const double full =
            energy_per_bit_j(p, inst.constants.f_star_khz, d, inst.env);
        CHECK(reduced == doctest::Approx(full).epsilon(1e-9));
        ++tested;
    }
}

TEST_CASE("reliability power floor inverts the acceptance constraint") {
    for (double p0 : {0.51, 0.98, 0.99, 0.9999}) {
        const ProblemInstance inst = instance_at(5000.0, 0.98 /*placeholder*/);
        ProblemInstance with_p0 = inst;
        with_p0.p_acc_min = p0;
        for (double length : {1.0, 33.0, 183.0, 2000.0}) {
            const double pt = min_power_for_reliability_w(length, with_p0);
            CHECK(pt >= 0.0);
            CHECK(acceptance_at({pt, length}, with_p0) ==
                  doctest::Approx(p0).epsilon(1e-9));
        }
    }
    const ProblemInstance inst = instance_at(5000.0, 0.98);
    // Threshold near one forces the power up without bound.
    ProblemInstance hi = inst;
    hi.p_acc_min = 1.0 - 1e-9;
    CHECK(min_power_for_reliability_w(33.0, hi) >
          1e5 * min_power_for_reliability_w(33.0, inst));
    CHECK_THROWS_AS(min_power_for_reliability_w(0.5, inst), std::domain_error);
}

TEST_CASE("power floor is increasing in both threshold and length") {
    // The literal inversion of the acceptance constraint: longer packets and
    // stricter thresholds both demand more power.
    const ProblemInstance base = instance_at(10000.0, 0.98);
    for (double length : {1.0, 33.0, 100.0, 640.0}) {
        double prev = 0.0;
        for (double p0 : {0.51, 0.7, 0.9, 0.98, 0.995}) {
            ProblemInstance inst = base;
            inst.p_acc_min = p0;
            const double pt = min_power_for_reliability_w(length, inst);
            CHECK(pt > prev);
            prev = pt;
        }
    }
    double prev = 0.0;
    for (double length = 1.0; length <= 4097.0; length *= 2.0) {
        const double pt = min_power_for_reliability_w(length, base);
        CHECK(pt > prev);
        prev = pt;
    }
}

TEST_CASE("constraints and feasible-set geometry") {
    const ProblemInstance inst = instance_at(1000.0, 0.99);
    const double m = inst.env.overhead_bits();
    CHECK(constraints({1.0, m + 1.0}, inst).h2_bits == 0.0);
    // On the h1 boundary the acceptance meets the threshold exactly.
    for (double length : {m + 1.0, 120.0, 400.0}) {
        const double pt = min_power_for_reliability_w(length, inst);
        const ConstraintValues cv = constraints({pt, length}, inst);
        CHECK(std::abs(cv.h1_w) <= 1e-18);
        CHECK(acceptance_at({pt, length}, inst) ==
              doctest::Approx(inst.p_acc_min).epsilon(1e-9));
        // Feasibility implies positive power automatically.
        if (cv.feasible()) {
            CHECK(pt >= 0.0);
        }
    }
    // Fixed length: a half-line in power. Fixed power: an interval in length.
    const double floor = min_power_for_reliability_w(100.0, inst);
    CHECK(constraints({floor * 2.0, 100.0}, inst).feasible());
    CHECK_FALSE(constraints({floor * 0.5, 100.0}, inst).feasible());
    const double pt_fixed = min_power_for_reliability_w(200.0, inst);
    CHECK(constraints({pt_fixed, 150.0}, inst).feasible());       // below the curve
    CHECK_FALSE(constraints({pt_fixed, 260.0}, inst).feasible()); // beyond the curve
    CHECK_FALSE(constraints({pt_fixed, m + 0.5}, inst).feasible()); // below min length
}

TEST_CASE("objective lower bound from the acceptance factor") {
    const ProblemInstance inst = instance_at(10000.0, 0.98);
    MiniRng rng;
    for (int i = 0; i < 200; ++i) {
        const double length = 33.0 + 600.0 * rng.next();
        const double pt = min_power_for_reliability_w(length, inst) *
                          std::pow(10.0, 2.0 * rng.next());
        const double bound = std::log(5.0 * inst.env.electronics_power_w + 6.0 * pt) +
                             std::log(inst.constants.c2_s_per_bit);
        CHECK(log_reduced_objective({pt, length}, inst) >= bound);
    }
}

TEST_CASE("analytic partials match finite differences") {
    const ProblemInstance inst = instance_at(1000.0, 0.99);
    MiniRng rng;
    for (int i = 0; i < 50; ++i) {
        const double length = 40.0 + 400.0 * rng.next();
        const double pt = min_power_for_reliability_w(length, inst) *
                          std::pow(10.0, 2.0 * rng.next());
        const DesignPoint p{pt, length};
        const double hp = pt * 1e-6;
        const double fd_p = (log_reduced_objective({pt + hp, length}, inst) -
                             log_reduced_objective({pt - hp, length}, inst)) /
                            (2.0 * hp);
        const double an_p = d_log_objective_d_power(p, inst);
        CHECK(std::abs(an_p - fd_p) < 1e-5 * (1.0 + std::abs(an_p)));
        const double hl = length * 1e-6;
        const double fd_l = (log_reduced_objective({pt, length + hl}, inst) -
                             log_reduced_objective({pt, length - hl}, inst)) /
                            (2.0 * hl);
        const double an_l = d_log_objective_d_length(p, inst);
        CHECK(std::abs(an_l - fd_l) < 1e-5 * (1.0 + std::abs(an_l)));
        const double fd_q = (min_power_for_reliability_w(length + hl, inst) -
                             min_power_for_reliability_w(length - hl, inst)) /
                            (2.0 * hl);
        const double an_q = d_min_power_d_length(length, inst);
        CHECK(std::abs(an_q - fd_q) < 1e-5 * (std::abs(an_q) + 1e-300));
        CHECK(an_q > 0.0);
    }
    // Near zero power the acceptance gain dominates: objective decreasing.
    CHECK(d_log_objective_d_power({1e-12, 100.0}, inst) < 0.0);
}

TEST_CASE("snr ratio bijection round trips") {
    const ProblemInstance inst = instance_at(1000.0, 0.99);
    for (double x : {1e-6, 0.1, 0.5, 0.9, 0.999999}) {
        const double pt = power_from_snr_ratio_x(x, inst);
        CHECK(snr_ratio_x(pt, inst) == doctest::Approx(x).epsilon(1e-12));
    }
}

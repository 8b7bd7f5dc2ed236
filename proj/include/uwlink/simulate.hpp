// Seeded Monte Carlo of the send-until-accepted link: every delivery
// retransmits the packet until the receiver accepts it, and the energy of
// every attempt is charged. Validates the analytic acceptance ratio and
// energy per payload bit.
//
// RNG: SplitMix64. Each delivery runs on its own substream derived from
// (seed, delivery index) by the SplitMix64 finalizer, so reports are
// bit-identical no matter how deliveries are scheduled.

#pragma once

#include <cstdint>

#include "uwlink/channel.hpp"
#include "uwlink/objective.hpp"

namespace uwlink {

enum class SampleMode {
    PerPacket,  // one Bernoulli draw per attempt with the acceptance ratio
    PerBit      // independent bit-error draws, accept iff zero errors
};

struct SimConfig {
    long trials = 100000;              // independent packet deliveries
    std::uint64_t seed = 1;
    SampleMode mode = SampleMode::PerPacket;
    long max_attempts_cap = 1000000;   // safety cap per delivery
};

struct SimReport {
    double empirical_p_acc = 0.0;
    double empirical_p_acc_stderr = 0.0;
    double mean_attempts = 0.0;
    double empirical_e_b_j = 0.0;        // energy per successful payload bit
    double empirical_e_b_stderr_j = 0.0;
    double t1_s = 0.0;                   // one-way link delay d/v
    double t2_s = 0.0;                   // packet transmit time L/(1000 f)
    double delay_ratio = 0.0;            // t1/t2
    long completed_deliveries = 0;
    long capped_deliveries = 0;          // excluded from the statistics
    bool stderr_degenerate = false;      // fewer than two completed deliveries
};

SimReport simulate(const DesignPoint& point, double frequency_khz,
                   double distance_m, const ChannelEnv& env, const SimConfig& cfg);

// (d/v) / (L/(1000 f)): how many packet transmit times fit in one link delay.
double delay_ratio(const DesignPoint& point, double frequency_khz,
                   double distance_m, const ChannelEnv& env);

}  // namespace uwlink

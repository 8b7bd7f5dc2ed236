#include "uwlink/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uwlink {

namespace {

// SplitMix64: tiny splittable generator. One instance per delivery, keyed by
// (seed, delivery index), keeps reports independent of scheduling.
struct SplitMix64 {
    std::uint64_t state;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
        return SplitMix64{mix(seed + 0x9E3779B97F4A7C15ULL * (index + 1))};
    }

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        return mix(state);
    }

    double next_double() {  // uniform in [0, 1)
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }
};

}  // namespace

double delay_ratio(const DesignPoint& point, double frequency_khz, double distance_m,
                   const ChannelEnv& env) {
    env.validate();
    if (!(frequency_khz > 0.0) || !(distance_m > 0.0) || !(point.length_bits >= 1.0)) {
        throw std::domain_error("delay_ratio requires positive inputs");
    }
    const double t1 = distance_m / env.sound_speed_mps;
    const double t2 = point.length_bits / (1000.0 * frequency_khz);
    return t1 / t2;
}

SimReport simulate(const DesignPoint& point, double frequency_khz, double distance_m,
                   const ChannelEnv& env, const SimConfig& cfg) {
    env.validate();
    if (cfg.trials < 1 || cfg.max_attempts_cap < 1) {
        throw std::domain_error("simulate requires trials >= 1 and max_attempts_cap >= 1");
    }
    const double snr = snr_per_bit_db(point.power_w, distance_m, frequency_khz, env);
    const double bit_error = ber_bpsk(snr);
    const double p_acc = packet_acceptance(snr, point.length_bits);
    // Fractional lengths round up for the bit-level draws.
    const long bits = static_cast<long>(std::ceil(point.length_bits));
    const double e_attempt = energy_per_attempt_j(point, frequency_khz, env);
    const double payload = point.length_bits - env.overhead_bits();
    if (!(payload > 0.0)) {
        throw std::domain_error("simulate requires a positive payload");
    }

    long completed = 0;
    long capped = 0;
    double attempts_sum = 0.0;
    double attempts_sq_sum = 0.0;
    for (long t = 0; t < cfg.trials; ++t) {
        SplitMix64 rng = SplitMix64::substream(cfg.seed, static_cast<std::uint64_t>(t));
        long attempts = 0;
        bool delivered = false;
        while (!delivered && attempts < cfg.max_attempts_cap) {
            ++attempts;
            if (cfg.mode == SampleMode::PerPacket) {
                delivered = rng.next_double() < p_acc;
            } else {
                delivered = true;
                for (long b = 0; b < bits; ++b) {
                    if (rng.next_double() < bit_error) {
                        delivered = false;
                        break;  // attempt already lost
                    }
                }
            }
        }
        if (!delivered) {
            ++capped;
            continue;
        }
        ++completed;
        attempts_sum += static_cast<double>(attempts);
        attempts_sq_sum += static_cast<double>(attempts) * static_cast<double>(attempts);
    }

    SimReport rep;
    rep.completed_deliveries = completed;
    rep.capped_deliveries = capped;
    rep.t1_s = distance_m / env.sound_speed_mps;
    rep.t2_s = point.length_bits / (1000.0 * frequency_khz);
    rep.delay_ratio = rep.t1_s / rep.t2_s;
    rep.stderr_degenerate = completed < 2;
    if (completed == 0) {
        rep.empirical_p_acc = 0.0;
        rep.mean_attempts = 0.0;
        rep.empirical_e_b_j = 0.0;
        rep.empirical_p_acc_stderr = std::nan("");
        rep.empirical_e_b_stderr_j = std::nan("");
        return rep;
    }
    const double n = static_cast<double>(completed);
    rep.mean_attempts = attempts_sum / n;
    // One success per completed delivery, so the acceptance estimate is
    // successes over attempts; delta-method standard error of the geometric
    // rate: p*sqrt((1-p)/n).
    rep.empirical_p_acc = n / attempts_sum;
    rep.empirical_e_b_j = attempts_sum * e_attempt / (n * payload);
    if (completed >= 2) {
        const double var_attempts =
            (attempts_sq_sum - attempts_sum * attempts_sum / n) / (n - 1.0);
        const double sd = std::sqrt(std::max(var_attempts, 0.0));
        rep.empirical_p_acc_stderr =
            rep.empirical_p_acc * std::sqrt((1.0 - rep.empirical_p_acc) / n);
        rep.empirical_e_b_stderr_j = e_attempt * sd / (std::sqrt(n) * payload);
    } else {
        rep.empirical_p_acc_stderr = std::nan("");
        rep.empirical_e_b_stderr_j = std::nan("");
    }
    return rep;
}

}  // namespace uwlink

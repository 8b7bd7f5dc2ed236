#include "uwlink/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace uwlink {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_positive(double v, const char* name) {
    if (!(v > 0.0)) {
        throw std::domain_error(std::string(name) + " must be positive");
    }
}

}  // namespace

void ChannelEnv::validate() const {
    require_positive(depth_m, "depth_m");
    require_positive(sound_speed_mps, "sound_speed_mps");
    if (!(electronics_power_w >= 0.0)) {
        throw std::domain_error("electronics_power_w must be nonnegative");
    }
    if (!(header_bits >= 0.0) || !(trailer_bits >= 0.0)) {
        throw std::domain_error("header_bits and trailer_bits must be nonnegative");
    }
}

void LinkPoint::validate(const ChannelEnv& env) const {
    env.validate();
    require_positive(distance_m, "distance_m");
    require_positive(frequency_khz, "frequency_khz");
    if (!(power_w >= 0.0)) {
        throw std::domain_error("power_w must be nonnegative");
    }
    if (!(length_bits > env.overhead_bits())) {
        throw std::domain_error("length_bits must exceed header + trailer");
    }
    if (distance_m < min_distance_m || distance_m > max_distance_m) {
        throw std::domain_error("distance_m outside the calibrated range [100, 100000]");
    }
}

double absorption_db_per_km(double frequency_khz) {
    require_positive(frequency_khz, "frequency_khz");
    const double f2 = frequency_khz * frequency_khz;
    return 0.11 * f2 / (1.0 + f2) + 44.0 * f2 / (4100.0 + f2) + 2.75e-4 * f2 + 0.003;
}

double noise_level_db(double frequency_khz) {
    require_positive(frequency_khz, "frequency_khz");
    return 50.0 - 18.0 * std::log10(frequency_khz);
}

double transmission_loss_db(double distance_m, double frequency_khz) {
    require_positive(distance_m, "distance_m");
    return 10.0 * std::log10(distance_m) +
           absorption_db_per_km(frequency_khz) * distance_m * 1e-3;
}

double source_level_db(double snr_bit_db, double distance_m, double frequency_khz) {
    // SL = SNR + TL + NL - DI with NL = 50 - 18 lg f and DI = 0.
    return 50.0 + snr_bit_db + transmission_loss_db(distance_m, frequency_khz) -
           18.0 * std::log10(frequency_khz);
}

double power_from_source_level_w(double source_level_db, const ChannelEnv& env) {
    env.validate();
    return kTwoPi * env.depth_m * std::pow(10.0, source_level_db / 10.0) *
           ChannelEnv::reference_intensity_w_m2;
}

double snr_per_bit_db(double power_w, double distance_m, double frequency_khz,
                      const ChannelEnv& env) {
    env.validate();
    require_positive(power_w, "power_w");
    require_positive(distance_m, "distance_m");
    const double alpha = absorption_db_per_km(frequency_khz);
    return 10.0 * (std::log10(power_w) -
                   std::log10(kTwoPi * env.depth_m * ChannelEnv::reference_intensity_w_m2) -
                   std::log10(distance_m)) -
           50.0 - alpha * distance_m * 1e-3 + 18.0 * std::log10(frequency_khz);
}

double ber_bpsk(double snr_bit_db) {
    const double g = std::pow(10.0, snr_bit_db / 10.0);
    if (std::isinf(g)) {
        return 0.0;
    }
    // 0.5*(1 - sqrt(g/(1+g))) rewritten to avoid cancellation at high SNR.
    const double x = std::sqrt(g / (1.0 + g));
    return 0.5 / ((1.0 + g) * (1.0 + x));
}

double packet_acceptance(double snr_bit_db, double length_bits) {
    if (!(length_bits >= 1.0)) {
        throw std::domain_error("length_bits must be at least 1");
    }
    // (1 - ber)^L through the log so long packets cannot underflow.
    return std::exp(length_bits * std::log1p(-ber_bpsk(snr_bit_db)));
}

}  // namespace uwlink

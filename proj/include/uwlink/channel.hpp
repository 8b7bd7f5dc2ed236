// Underwater acoustic physical layer: Thorp absorption, ambient noise,
// transmission loss, source level, intensity/power conversion, per-bit SNR,
// BPSK bit error rate under Rayleigh fading, and packet acceptance ratio.
//
// Unit conventions, used repo-wide: distances in meters, frequencies in kHz,
// powers in watts, levels in dB, packet lengths in bits (positive reals).
// All functions are pure and thread-safe.

#pragma once

namespace uwlink {

// Fixed environment and protocol constants for a link.
struct ChannelEnv {
    double depth_m = 10.0;              // water depth H
    double electronics_power_w = 1e-6;  // electronics power per attempt
    double header_bits = 16.0;          // packet header length
    double trailer_bits = 16.0;         // packet trailer length
    double sound_speed_mps = 1500.0;    // acoustic propagation speed

    // Omnidirectional hydrophones: zero directivity gain.
    static constexpr double directivity_index_db = 0.0;
    // Reference intensity for the source-level / intensity conversion, W/m^2.
    static constexpr double reference_intensity_w_m2 = 0.67e-18;

    double overhead_bits() const { return header_bits + trailer_bits; }

    // Throws std::domain_error on invalid values.
    void validate() const;
};

// One fully specified operating point of a link. The model is calibrated
// for distances between 100 m and 100 km.
struct LinkPoint {
    double distance_m = 0.0;
    double frequency_khz = 0.0;
    double power_w = 0.0;
    double length_bits = 0.0;

    static constexpr double min_distance_m = 100.0;
    static constexpr double max_distance_m = 100000.0;

    void validate(const ChannelEnv& env) const;
};

// Thorp seawater absorption coefficient, dB/km. f in kHz, f > 0.
double absorption_db_per_km(double frequency_khz);

// Ambient noise level approximation 50 - 18*lg(f), dB. f in kHz, f > 0.
double noise_level_db(double frequency_khz);

// Spreading plus absorption loss over distance_m meters, dB.
double transmission_loss_db(double distance_m, double frequency_khz);

// Source level that delivers snr_bit_db at the receiver: SL = SNR + TL + NL - DI.
double source_level_db(double snr_bit_db, double distance_m, double frequency_khz);

// Transmit power that produces the given source level at 1 m in depth_m water.
double power_from_source_level_w(double source_level_db, const ChannelEnv& env);

// Per-bit SNR in dB delivered by power_w at the receiver; exact algebraic
// inverse of source_level_db/power_from_source_level_w.
double snr_per_bit_db(double power_w, double distance_m, double frequency_khz,
                      const ChannelEnv& env);

// Average BPSK bit error rate in a Rayleigh fading channel,
// 0.5*(1 - sqrt(g/(1+g))) with g the linear SNR. Any real (or -inf) input.
double ber_bpsk(double snr_bit_db);

// Probability that an length_bits packet arrives with zero bit errors.
// length_bits >= 1.
double packet_acceptance(double snr_bit_db, double length_bits);

}  // namespace uwlink

// Power-optimal carrier frequency and the reduced-model constants.
//
// For a fixed distance there is a single frequency that minimizes the source
// level (and hence the transmit power): absorption pushes the optimum down,
// the falling noise spectrum pushes it up. The root of dSL/df locates it.
// Once the frequency is pinned, the whole channel chain collapses into three
// per-distance constants (c0, c1, c2) so that the linear SNR is c1*P_t/c0 and
// the packet transmit time is c2*L.

#pragma once

#include "uwlink/channel.hpp"

namespace uwlink {

struct DerivedConstants {
    double distance_m = 0.0;
    double f_star_khz = 0.0;   // power-optimal carrier frequency
    double c0_w = 0.0;         // linear-SNR denominator constant, watts
    double c1 = 0.0;           // frequency gain factor f*^1.8
    double c2_s_per_bit = 0.0; // seconds per bit at rate f* kb/s, 1/(5000 f*)
};

// Partial derivative of the source level with respect to frequency, dB/kHz.
double d_source_level_d_freq(double frequency_khz, double distance_m);

// Frequency where d_source_level_d_freq crosses zero, by bisection on
// [1e-3, 200] kHz with geometric upper-bracket expansion. distance_m must
// lie in [100, 100000]. Throws std::runtime_error if no bracket is found or
// the root is not a local minimum of the source level.
double optimal_frequency_khz(double distance_m);

// f*, c0, c1, c2 for the given distance. c0 is built from first principles:
// 2*pi*I_ref*1e5 * 10^(absorption(f*)*d*1e-4) * d * H.
DerivedConstants derive_constants(double distance_m, const ChannelEnv& env);

}  // namespace uwlink

#include "uwlink/frequency.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace uwlink {

namespace {

constexpr double kBracketLoKhz = 1e-3;
constexpr double kBracketHiKhz = 200.0;
constexpr double kBracketMaxKhz = 1e6;
constexpr int kMaxBisectIter = 200;

}  // namespace

double d_source_level_d_freq(double frequency_khz, double distance_m) {
    if (!(frequency_khz > 0.0) || !(distance_m > 0.0)) {
        throw std::domain_error("d_source_level_d_freq requires positive inputs");
    }
    const double f = frequency_khz;
    const double f2 = f * f;
    const double t1 = 2.2e-4 / ((1.0 + f2) * (1.0 + f2));
    const double t2 = 360.8 / ((4100.0 + f2) * (4100.0 + f2));
    return (t1 + t2 + 5.5e-7) * f * distance_m - 18.0 / (f * std::numbers::ln10);
}

double optimal_frequency_khz(double distance_m) {
    if (!(distance_m >= 100.0 && distance_m <= 100000.0)) {
        throw std::domain_error("optimal_frequency_khz requires distance_m in [100, 100000]");
    }
    double lo = kBracketLoKhz;
    double hi = kBracketHiKhz;
    if (!(d_source_level_d_freq(lo, distance_m) < 0.0)) {
        throw std::runtime_error("optimal_frequency_khz: slope not negative at lower bracket");
    }
    // The slope is negative near zero and eventually positive; expand the
    // upper end until the sign change is inside the bracket.
    while (d_source_level_d_freq(hi, distance_m) <= 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > kBracketMaxKhz) {
            throw std::runtime_error("optimal_frequency_khz: no sign change up to 1e6 kHz");
        }
    }
    for (int i = 0; i < kMaxBisectIter && hi - lo > 1e-12 * lo; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (d_source_level_d_freq(mid, distance_m) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double f_star = 0.5 * (lo + hi);

    // The root is assumed unique; verify it actually is a local minimum.
    const double sl = source_level_db(0.0, distance_m, f_star);
    if (sl > source_level_db(0.0, distance_m, f_star * (1.0 + 1e-3)) ||
        sl > source_level_db(0.0, distance_m, f_star * (1.0 - 1e-3))) {
        throw std::runtime_error("optimal_frequency_khz: root is not a source-level minimum");
    }
    return f_star;
}

DerivedConstants derive_constants(double distance_m, const ChannelEnv& env) {
    env.validate();
    DerivedConstants out;
    out.distance_m = distance_m;
    out.f_star_khz = optimal_frequency_khz(distance_m);
    const double lead = 2.0 * std::numbers::pi * ChannelEnv::reference_intensity_w_m2 * 1e5;
    out.c0_w = lead *
               std::pow(10.0, absorption_db_per_km(out.f_star_khz) * distance_m * 1e-4) *
               distance_m * env.depth_m;
    out.c1 = std::pow(out.f_star_khz, 1.8);
    out.c2_s_per_bit = 1.0 / (5000.0 * out.f_star_khz);
    return out;
}

}  // namespace uwlink

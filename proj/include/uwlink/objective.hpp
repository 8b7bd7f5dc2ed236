// Energy objective and constraints of the transmit-design problem.
//
// The decision variables are the transmit power and the packet length. The
// objective is the expected energy spent per successfully delivered payload
// bit; the constraints are a reliability floor on the packet acceptance
// ratio (h1) and a minimum packet length of one payload bit (h2).

#pragma once

#include "uwlink/channel.hpp"
#include "uwlink/frequency.hpp"

namespace uwlink {

struct DesignPoint {
    double power_w = 0.0;      // transmit power
    double length_bits = 0.0;  // packet length, positive real
};

struct ProblemInstance {
    ChannelEnv env;
    DerivedConstants constants;
    double p_acc_min = 0.98;  // reliability threshold, open interval (0.5, 1)

    // Throws std::domain_error on invalid values. The threshold bound is
    // enforced with a 1e-12 guard band.
    void validate() const;
};

struct ConstraintValues {
    double h1_w = 0.0;     // power_w minus the reliability power floor
    double h2_bits = 0.0;  // length_bits minus (header + trailer + 1)
    bool feasible() const { return h1_w >= 0.0 && h2_bits >= 0.0; }
};

// Energy of a single transmission attempt at rate frequency_khz kb/s:
// (L / (1000 f)) * (1.2 P_t + P_c). The 1.2 charges the receiver with one
// fifth of the transmit energy.
double energy_per_attempt_j(const DesignPoint& point, double frequency_khz,
                            const ChannelEnv& env);

// Expected energy per successful payload bit through the full channel chain.
// Requires length_bits > header + trailer.
double energy_per_bit_j(const DesignPoint& point, double frequency_khz,
                        double distance_m, const ChannelEnv& env);

// Same quantity written with the reduced-model constants (valid at f = f*).
double reduced_objective_j(const DesignPoint& point, const ProblemInstance& inst);

// ln of reduced_objective_j, evaluated in expanded form so large packet
// lengths cannot underflow the acceptance factor.
double log_reduced_objective(const DesignPoint& point, const ProblemInstance& inst);

// Exact packet acceptance ratio at the point, via the reduced constants.
double acceptance_at(const DesignPoint& point, const ProblemInstance& inst);

// Smallest transmit power satisfying the reliability constraint at the given
// packet length: exact inversion of the acceptance formula at equality.
double min_power_for_reliability_w(double length_bits, const ProblemInstance& inst);

ConstraintValues constraints(const DesignPoint& point, const ProblemInstance& inst);

// Analytic partials of log_reduced_objective, used for stationarity checks
// and KKT multiplier recovery.
double d_log_objective_d_power(const DesignPoint& point, const ProblemInstance& inst);
double d_log_objective_d_length(const DesignPoint& point, const ProblemInstance& inst);

// Analytic d/dL of min_power_for_reliability_w (= -dh1/dL).
double d_min_power_d_length(double length_bits, const ProblemInstance& inst);

// X = sqrt(c1 P / (c0 + c1 P)) and its inverse P = c0 X^2 / (c1 (1 - X^2)).
double snr_ratio_x(double power_w, const ProblemInstance& inst);
double power_from_snr_ratio_x(double x, const ProblemInstance& inst);

}  // namespace uwlink

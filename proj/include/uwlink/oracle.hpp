// Brute-force reference minimizers. These certify the analytic solutions and
// never reuse them: feasible-grid scan, alternating per-coordinate golden
// refinement, plus a golden sweep along the active reliability boundary.

#pragma once

#include "uwlink/objective.hpp"

namespace uwlink {

struct OracleOptions {
    int power_points = 400;        // log grid in transmit power
    int length_points = 400;       // linear grid in packet length
    int freq_points = 64;          // log grid in frequency (joint problem only)
    double length_hi_factor = 20;  // L grid upper bound, times (header+trailer)
    int refine_rounds = 50;        // alternating coordinate passes
    double refine_tol = 1e-10;     // relative parameter resolution
};

struct OracleResult {
    DesignPoint point;
    double frequency_khz = 0.0;  // grid/search frequency (f* for the reduced problem)
    double objective_log = 0.0;  // ln energy per payload bit at point
    OracleOptions grid;          // resolution the result was produced with
    bool refined = false;
};

// Global minimizer of log_reduced_objective over the exact feasible set.
OracleResult minimize_reduced(const ProblemInstance& inst,
                              const OracleOptions& opts = {});

// Global minimizer of energy_per_bit_j over (power, length, frequency)
// subject to the acceptance threshold, through the full channel chain.
OracleResult minimize_original(double distance_m, const ChannelEnv& env,
                               double p_acc_min, const OracleOptions& opts = {});

// 100*|analytic - oracle|/|oracle|. Throws std::domain_error when the
// reference value is closer to zero than 1e-300.
double relative_error_pct(double analytic, double oracle);

}  // namespace uwlink

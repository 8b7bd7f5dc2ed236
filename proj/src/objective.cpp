#include "uwlink/objective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uwlink {

namespace {

constexpr double kThresholdGuard = 1e-12;

void require_payload(double length_bits, const ChannelEnv& env) {
    if (!(length_bits > env.overhead_bits())) {
        throw std::domain_error("packet length must exceed header + trailer");
    }
}

}  // namespace

void ProblemInstance::validate() const {
    env.validate();
    if (!(constants.c0_w > 0.0 && constants.c1 > 0.0 && constants.c2_s_per_bit > 0.0 &&
          constants.f_star_khz > 0.0)) {
        throw std::domain_error("derived constants must be positive");
    }
    if (!(p_acc_min > 0.5 + kThresholdGuard && p_acc_min < 1.0 - kThresholdGuard)) {
        throw std::domain_error("p_acc_min must lie in the open interval (0.5, 1)");
    }
}

double energy_per_attempt_j(const DesignPoint& point, double frequency_khz,
                            const ChannelEnv& env) {
    if (!(frequency_khz > 0.0) || !(point.length_bits > 0.0)) {
        throw std::domain_error("energy_per_attempt_j requires positive frequency and length");
    }
    return (point.length_bits / (1000.0 * frequency_khz)) *
           (1.2 * point.power_w + env.electronics_power_w);
}

double energy_per_bit_j(const DesignPoint& point, double frequency_khz,
                        double distance_m, const ChannelEnv& env) {
    require_payload(point.length_bits, env);
    const double snr = snr_per_bit_db(point.power_w, distance_m, frequency_khz, env);
    const double acc = packet_acceptance(snr, point.length_bits);
    return energy_per_attempt_j(point, frequency_khz, env) /
           (acc * (point.length_bits - env.overhead_bits()));
}

double snr_ratio_x(double power_w, const ProblemInstance& inst) {
    const double cp = inst.constants.c1 * power_w;
    return std::sqrt(cp / (inst.constants.c0_w + cp));
}

double power_from_snr_ratio_x(double x, const ProblemInstance& inst) {
    return inst.constants.c0_w * x * x / (inst.constants.c1 * (1.0 - x * x));
}

double acceptance_at(const DesignPoint& point, const ProblemInstance& inst) {
    const double x = snr_ratio_x(point.power_w, inst);
    return std::exp(point.length_bits * std::log(0.5 + 0.5 * x));
}

double reduced_objective_j(const DesignPoint& point, const ProblemInstance& inst) {
    return std::exp(log_reduced_objective(point, inst));
}

double log_reduced_objective(const DesignPoint& point, const ProblemInstance& inst) {
    require_payload(point.length_bits, inst.env);
    if (!(point.power_w >= 0.0)) {
        throw std::domain_error("power_w must be nonnegative");
    }
    const double x = snr_ratio_x(point.power_w, inst);
    const double payload = point.length_bits - inst.env.overhead_bits();
    return std::log(inst.constants.c2_s_per_bit) + std::log(point.length_bits) +
           std::log(5.0 * inst.env.electronics_power_w + 6.0 * point.power_w) -
           std::log(payload) - point.length_bits * std::log(0.5 + 0.5 * x);
}

double min_power_for_reliability_w(double length_bits, const ProblemInstance& inst) {
    inst.validate();
    if (!(length_bits >= 1.0)) {
        throw std::domain_error("length_bits must be at least 1");
    }
    // Invert (0.5 + 0.5 X)^L = p_acc_min. With y = p_acc_min^(1/L):
    // X = 2y - 1, and P = c0 X^2 / (4 c1 y (1 - y)). expm1 keeps 1 - y
    // accurate when L is large.
    const double em = std::expm1(std::log(inst.p_acc_min) / length_bits);  // y - 1 < 0
    const double y = 1.0 + em;
    const double x = 2.0 * y - 1.0;
    return inst.constants.c0_w * x * x / (4.0 * inst.constants.c1 * y * (-em));
}

ConstraintValues constraints(const DesignPoint& point, const ProblemInstance& inst) {
    ConstraintValues out;
    out.h1_w = point.power_w - min_power_for_reliability_w(
                                   std::max(point.length_bits, 1.0), inst);
    out.h2_bits = point.length_bits - (inst.env.overhead_bits() + 1.0);
    return out;
}

double d_log_objective_d_power(const DesignPoint& point, const ProblemInstance& inst) {
    const double x = snr_ratio_x(point.power_w, inst);
    const double x2 = x * x;
    return 6.0 / (5.0 * inst.env.electronics_power_w + 6.0 * point.power_w) -
           point.length_bits * inst.constants.c1 * (1.0 - x2) * (1.0 - x) /
               (2.0 * inst.constants.c0_w * x);
}

double d_log_objective_d_length(const DesignPoint& point, const ProblemInstance& inst) {
    const double x = snr_ratio_x(point.power_w, inst);
    return 1.0 / point.length_bits -
           1.0 / (point.length_bits - inst.env.overhead_bits()) -
           std::log(0.5 + 0.5 * x);
}

double d_min_power_d_length(double length_bits, const ProblemInstance& inst) {
    // dq/dy * dy/dL with q = c0 (2y-1)^2 / (4 c1 y (1-y)) and y = p0^(1/L);
    // positive: longer packets need more power to keep the acceptance ratio.
    const double c = std::log(inst.p_acc_min);
    const double em = std::expm1(c / length_bits);
    const double y = 1.0 + em;
    return -inst.constants.c0_w * c * (2.0 * y - 1.0) /
           (4.0 * inst.constants.c1 * length_bits * length_bits * y * em * em);
}

}  // namespace uwlink

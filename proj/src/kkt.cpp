#include "uwlink/kkt.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace uwlink {

namespace {

// Bisection on [lo, hi] given the endpoint signs (sign_lo applies at lo).
// Runs until the interval collapses at machine width so the residual
// certificates have margin. Purely sign-driven; no derivatives.
double bisect(const std::function<double(double)>& fn, double lo, double hi,
              bool negative_at_lo, int max_iter = 500) {
    for (int i = 0; i < max_iter; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        const double v = fn(mid);
        if ((v < 0.0) == negative_at_lo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

KktSolution finish(KktCase tag, DesignPoint point, const ProblemInstance& inst) {
    KktSolution sol;
    sol.case_tag = tag;
    sol.point = point;
    sol.lambda1_active = (tag == KktCase::Case1 || tag == KktCase::Case2Approx);
    sol.lambda2_active = (tag == KktCase::Case1 || tag == KktCase::Case3);
    sol.objective_log = log_reduced_objective(point, inst);
    sol.p_acc = acceptance_at(point, inst);
    const ConstraintValues cv = constraints(point, inst);
    sol.feasible_strict = cv.feasible();
    sol.feasible = (sol.p_acc >= inst.p_acc_min - kFeasibilityPaccTol) && cv.h2_bits >= 0.0;
    return sol;
}

// Centered finite difference of the log objective in log-space of the
// coordinate, i.e. the dimensionless sensitivity d ln E / d ln u.
double log_space_partial(const ProblemInstance& inst, const DesignPoint& at,
                         bool wrt_power) {
    const double h = 1e-5;
    DesignPoint up = at;
    DesignPoint dn = at;
    if (wrt_power) {
        up.power_w *= std::exp(h);
        dn.power_w *= std::exp(-h);
    } else {
        up.length_bits *= std::exp(h);
        dn.length_bits *= std::exp(-h);
    }
    return (log_reduced_objective(up, inst) - log_reduced_objective(dn, inst)) / (2.0 * h);
}

}  // namespace

std::string_view to_string(KktCase c) {
    switch (c) {
        case KktCase::Case1: return "case1";
        case KktCase::Case2Approx: return "case2_approx";
        case KktCase::Case3: return "case3";
        case KktCase::Case4: return "case4";
    }
    return "unknown";
}

KktSolution solve_case1(const ProblemInstance& inst) {
    inst.validate();
    DesignPoint point;
    point.length_bits = inst.env.overhead_bits() + 1.0;
    point.power_w = min_power_for_reliability_w(point.length_bits, inst);
    return finish(KktCase::Case1, point, inst);
}

double case1_objective_closed_form(const ProblemInstance& inst) {
    const double m1 = inst.env.overhead_bits() + 1.0;
    const double y = std::pow(inst.p_acc_min, 1.0 / m1);
    const double bracket = 5.0 * inst.env.electronics_power_w -
                           3.0 * inst.constants.c0_w * (1.0 - 2.0 * y) * (1.0 - 2.0 * y) /
                               (2.0 * inst.constants.c1 * (y - 1.0) * y);
    return std::log(inst.constants.c2_s_per_bit) + std::log(bracket) -
           m1 * std::log(y) + std::log(m1);
}

Case2Intermediates case2_intermediates(const ProblemInstance& inst) {
    inst.validate();
    const double c = std::log(inst.p_acc_min);
    const double m = inst.env.overhead_bits();
    const double c0 = inst.constants.c0_w;
    const double c1 = inst.constants.c1;
    const double pc = inst.env.electronics_power_w;
    Case2Intermediates out;
    out.a = c * m * (9.0 * c0 - 10.0 * c1 * pc) + 3.0 * c0 * c * c + 3.0 * c0 * m * m;
    out.b = (c * (10.0 * c1 * pc - 9.0 * c0) - 6.0 * c0 * m) / (2.0 * c1 * c);
    const double length = m + std::sqrt(out.a / (3.0 * c0));
    out.y_linearized = 1.0 + c / length;
    return out;
}

KktSolution solve_case2_approx(const ProblemInstance& inst) {
    const Case2Intermediates mid = case2_intermediates(inst);
    if (!(mid.a > 0.0)) {
        throw std::runtime_error("solve_case2_approx: composite constant A is not positive");
    }
    const double c = std::log(inst.p_acc_min);
    DesignPoint point;
    point.length_bits = inst.env.overhead_bits() + std::sqrt(mid.a / (3.0 * inst.constants.c0_w));
    point.power_w = -(inst.constants.c0_w / (4.0 * inst.constants.c1)) *
                    (c / point.length_bits + point.length_bits / c + 3.0);
    return finish(KktCase::Case2Approx, point, inst);
}

KktSolution solve_case3(const ProblemInstance& inst) {
    inst.validate();
    const double length = inst.env.overhead_bits() + 1.0;
    const double c0 = inst.constants.c0_w;
    const double c1pc = inst.constants.c1 * inst.env.electronics_power_w;
    const double a0 = 5.0 * c1pc * length;
    const double a1 = -12.0 * c0 - 5.0 * c1pc * length;
    const double a2 = (6.0 * c0 - 5.0 * c1pc) * length;
    const double a3 = -a2;
    const auto cubic = [&](double x) { return a0 + x * (a1 + x * (a2 + x * a3)); };
    // Endpoint signs are structural: +a0 at 0, -12 c0 at 1.
    if (!(cubic(1e-12) > 0.0) || !(cubic(1.0 - 1e-12) < 0.0)) {
        throw std::runtime_error("solve_case3: endpoint signs violated");
    }
    const double x = bisect(cubic, 0.0, 1.0, false);
    DesignPoint point;
    point.length_bits = length;
    point.power_w = power_from_snr_ratio_x(x, inst);
    return finish(KktCase::Case3, point, inst);
}

KktSolution solve_case4(const ProblemInstance& inst) {
    inst.validate();
    const double m = inst.env.overhead_bits();
    const double c0 = inst.constants.c0_w;
    const double c1pc = inst.constants.c1 * inst.env.electronics_power_w;
    // Power-stationarity length at a given X; also the f1 term of the
    // interior system.
    const auto stationary_length = [&](double x) {
        return 12.0 * c0 * x /
               ((1.0 - x) * (5.0 * c1pc + (6.0 * c0 - 5.0 * c1pc) * x * x));
    };
    // Length-stationarity term: with g = ln((1+X)/2) < 0 the closed form of
    // the L root of 1/L - 1/(L-m) = g, negated.
    const auto balance = [&](double x) {
        const double g = std::log(0.5 * (1.0 + x));
        return stationary_length(x) + std::sqrt(m * g * (m * g - 4.0)) / (2.0 * g) - 0.5 * m;
    };
    if (!(balance(1e-9) < 0.0)) {
        throw std::runtime_error("solve_case4: lower endpoint sign violated");
    }
    double hi = 1.0 - 1e-9;
    if (!(balance(hi) > 0.0)) {
        throw std::runtime_error("solve_case4: upper endpoint sign violated");
    }
    const double x = bisect(balance, 1e-9, hi, true);
    DesignPoint point;
    point.length_bits = stationary_length(x);
    point.power_w = power_from_snr_ratio_x(x, inst);

    // Interior point: both dimensionless sensitivities must vanish.
    const double gp = log_space_partial(inst, point, true);
    const double gl = log_space_partial(inst, point, false);
    if (std::abs(gp) > 1e-4 || std::abs(gl) > 1e-4) {
        throw std::runtime_error("solve_case4: stationarity verification failed");
    }
    return finish(KktCase::Case4, point, inst);
}

SolveResult solve(const ProblemInstance& inst) {
    SolveResult out{{solve_case1(inst), solve_case2_approx(inst), solve_case3(inst),
                     solve_case4(inst)},
                    0};
    bool found = false;
    for (std::size_t i = 0; i < out.cases.size(); ++i) {
        if (!out.cases[i].feasible) {
            continue;
        }
        if (!found || out.cases[i].objective_log < out.cases[out.best_index].objective_log) {
            out.best_index = i;
            found = true;
        }
    }
    if (!found) {
        throw std::runtime_error("solve: no feasible case");
    }
    return out;
}

Multipliers recover_multipliers(const KktSolution& sol, const ProblemInstance& inst) {
    // Stationarity in power: dlnE/dP = lambda1 (dh1/dP = 1, dh2/dP = 0).
    // Stationarity in length: dlnE/dL = lambda1 dh1/dL + lambda2.
    Multipliers out;
    out.lambda1 = sol.lambda1_active ? d_log_objective_d_power(sol.point, inst) : 0.0;
    const double dh1_dl = -d_min_power_d_length(sol.point.length_bits, inst);
    out.lambda2 = sol.lambda2_active
                      ? d_log_objective_d_length(sol.point, inst) - out.lambda1 * dh1_dl
                      : 0.0;
    return out;
}

}  // namespace uwlink

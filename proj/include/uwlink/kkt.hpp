// Case-by-case solution of the first-order optimality system of the reduced
// design problem. The two inequality constraints produce four activity
// patterns; each case pins the design point either in closed form or through
// a bracketed scalar root, and the best feasible candidate wins.

#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include "uwlink/objective.hpp"

namespace uwlink {

enum class KktCase { Case1, Case2Approx, Case3, Case4 };

std::string_view to_string(KktCase c);

struct KktSolution {
    KktCase case_tag = KktCase::Case1;
    DesignPoint point;
    bool lambda1_active = false;  // reliability constraint multiplier nonzero
    bool lambda2_active = false;  // length constraint multiplier nonzero
    double objective_log = 0.0;   // exact log_reduced_objective at point
    double p_acc = 0.0;           // exact acceptance ratio at point
    bool feasible = false;        // tolerant: p_acc >= p_acc_min - 1e-3, h2 >= 0
    bool feasible_strict = false; // exact h1 >= 0 and h2 >= 0
};

// Composite constants of the Case-2 closed form. a > 0 whenever the
// reliability threshold is below one; y_linearized is the first-order
// expansion of p_acc_min^(1/L) at the Case-2 length.
struct Case2Intermediates {
    double a = 0.0;
    double b = 0.0;
    double y_linearized = 0.0;
};

struct Multipliers {
    double lambda1 = 0.0;  // recovered from the power stationarity equation
    double lambda2 = 0.0;  // recovered from the length stationarity equation
};

// Tolerance on the reliability constraint when flagging tolerant feasibility.
inline constexpr double kFeasibilityPaccTol = 1e-3;

// Both constraints active: minimum-length packet at the reliability floor.
// Always feasible by construction.
KktSolution solve_case1(const ProblemInstance& inst);

// Closed-form objective of Case 1 (independent route, for cross-checking).
double case1_objective_closed_form(const ProblemInstance& inst);

// Reliability constraint active, length free: closed-form approximate
// solution obtained by linearizing p_acc_min^(1/L). Feasibility is evaluated
// against the exact constraint, not the linearized one.
KktSolution solve_case2_approx(const ProblemInstance& inst);
Case2Intermediates case2_intermediates(const ProblemInstance& inst);

// Length constraint active, power free: bracketed cubic root in X.
KktSolution solve_case3(const ProblemInstance& inst);

// Interior stationary point: bracketed root in X, length recovered from the
// power-stationarity relation, full gradient verified by finite differences.
KktSolution solve_case4(const ProblemInstance& inst);

struct SolveResult {
    std::array<KktSolution, 4> cases;
    std::size_t best_index = 0;  // feasible candidate with minimal objective
    const KktSolution& best() const { return cases[best_index]; }
};

// Runs all four cases and selects the best feasible candidate.
// Throws std::runtime_error if no case is feasible (cannot happen: Case 1 is).
SolveResult solve(const ProblemInstance& inst);

// Multipliers recovered from the analytic stationarity equations at the
// solution point. Used for dual-feasibility checks only; meaningful sign
// guarantees exist only for the selected (optimal) solution.
Multipliers recover_multipliers(const KktSolution& sol, const ProblemInstance& inst);

}  // namespace uwlink

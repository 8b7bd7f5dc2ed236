#include "uwlink/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace uwlink {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Probe {
    double x = 0.0;
    double value = kInf;
};

// Golden-section minimization on [lo, hi]; returns the best point actually
// evaluated (endpoints included), so a caller can never regress by taking it.
template <typename F>
Probe golden_min(F&& fn, double lo, double hi, double rel_tol, int max_iter = 300) {
    constexpr double kGolden = 0.6180339887498949;
    Probe best;
    const auto eval = [&](double x) {
        const double v = fn(x);
        if (v < best.value) {
            best = {x, v};
        }
        return v;
    };
    eval(lo);
    eval(hi);
    double a = lo;
    double b = hi;
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1 = eval(x1);
    double f2 = eval(x2);
    const double scale = std::max(std::abs(lo), std::abs(hi));
    for (int i = 0; i < max_iter && (b - a) > rel_tol * (scale + 1e-300); ++i) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = eval(x2);
        }
    }
    return best;
}

// Largest length in [l_feasible, l_hi] whose power floor stays below pt.
// Relies on the floor being increasing in length.
double feasible_length_sup(const ProblemInstance& inst, double pt, double l_feasible,
                           double l_hi) {
    if (min_power_for_reliability_w(l_hi, inst) <= pt) {
        return l_hi;
    }
    double lo = l_feasible;
    double hi = l_hi;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (min_power_for_reliability_w(mid, inst) <= pt) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

struct Candidate {
    DesignPoint point;
    double value = kInf;
};

void consider(Candidate& best, const DesignPoint& p, double v) {
    if (v < best.value) {
        best = {p, v};
    }
}

}  // namespace

OracleResult minimize_reduced(const ProblemInstance& inst, const OracleOptions& opts) {
    inst.validate();
    const double m = inst.env.overhead_bits();
    const double l_lo = m + 1.0;
    const double l_hi = std::max(opts.length_hi_factor * m, l_lo + 1.0);
    const double corner_floor = min_power_for_reliability_w(l_lo, inst);
    const double pt_lo = corner_floor / 10.0;
    const double pt_hi = 1e6 * corner_floor;

    const auto objective = [&](double pt, double length) {
        return log_reduced_objective({pt, length}, inst);
    };

    // Feasible-grid scan: linear in length, logarithmic in power, plus the
    // reliability-boundary point of every length row.
    Candidate best;
    const int np = std::max(2, opts.power_points);
    const int nl = std::max(2, opts.length_points);
    const double lpt = std::log(pt_lo);
    const double lpt_step = (std::log(pt_hi) - lpt) / (np - 1);
    std::vector<double> lengths(nl);
    for (int j = 0; j < nl; ++j) {
        lengths[j] = l_lo + (l_hi - l_lo) * j / (nl - 1);
    }
    for (int j = 0; j < nl; ++j) {
        const double length = lengths[j];
        const double floor = min_power_for_reliability_w(length, inst);
        consider(best, {floor, length}, objective(floor, length));
        for (int i = 0; i < np; ++i) {
            const double pt = std::exp(lpt + lpt_step * i);
            if (pt < floor) {
                continue;
            }
            consider(best, {pt, length}, objective(pt, length));
        }
    }
    if (!(best.value < kInf)) {
        throw std::runtime_error("minimize_reduced: empty feasible grid");
    }

    // Alternating per-coordinate golden refinement, feasibility-clamped.
    Candidate refined = best;
    for (int round = 0; round < opts.refine_rounds; ++round) {
        const Candidate before = refined;
        const double floor = min_power_for_reliability_w(refined.point.length_bits, inst);
        const Probe p = golden_min(
            [&](double u) { return objective(std::exp(u), refined.point.length_bits); },
            std::log(floor), std::log(pt_hi), opts.refine_tol);
        consider(refined, {std::exp(p.x), refined.point.length_bits}, p.value);
        const double l_up =
            feasible_length_sup(inst, refined.point.power_w, refined.point.length_bits, l_hi);
        const Probe q = golden_min(
            [&](double length) { return objective(refined.point.power_w, length); }, l_lo,
            l_up, opts.refine_tol);
        consider(refined, {refined.point.power_w, q.x}, q.value);
        const double move =
            std::abs(refined.point.power_w - before.point.power_w) /
                (before.point.power_w + 1e-300) +
            std::abs(refined.point.length_bits - before.point.length_bits) /
                before.point.length_bits;
        if (move < opts.refine_tol) {
            break;
        }
    }

    // Sweep along the active reliability boundary: scan the length grid, then
    // golden inside the bracketing cells.
    Candidate boundary;
    const auto phi = [&](double length) {
        return objective(min_power_for_reliability_w(length, inst), length);
    };
    int best_j = 0;
    double best_phi = kInf;
    for (int j = 0; j < nl; ++j) {
        const double v = phi(lengths[j]);
        if (v < best_phi) {
            best_phi = v;
            best_j = j;
        }
    }
    const double bl = lengths[std::max(0, best_j - 2)];
    const double bh = lengths[std::min(nl - 1, best_j + 2)];
    const Probe pb = golden_min(phi, bl, bh, 1e-13, 400);
    consider(boundary, {min_power_for_reliability_w(pb.x, inst), pb.x}, pb.value);

    Candidate final = best;
    consider(final, refined.point, refined.value);
    consider(final, boundary.point, boundary.value);

    OracleResult out;
    out.point = final.point;
    out.frequency_khz = inst.constants.f_star_khz;
    out.objective_log = final.value;
    out.grid = opts;
    out.refined = true;
    return out;
}

namespace {

// Full-chain helpers for the joint problem; no reduced constants involved.
struct JointProblem {
    double distance_m;
    ChannelEnv env;
    double p_acc_min;

    double objective(double pt, double length, double f) const {
        return std::log(energy_per_bit_j({pt, length}, f, distance_m, env));
    }

    bool feasible(double pt, double length, double f) const {
        const double snr = snr_per_bit_db(pt, distance_m, f, env);
        return packet_acceptance(snr, length) >= p_acc_min;
    }

    // Reliability power floor through the channel chain: the SNR whose
    // acceptance equals the threshold, mapped back to transmit power. The
    // (1 + 1e-12) nudge keeps the rounded acceptance on the feasible side.
    double power_floor(double length, double f) const {
        const double em = std::expm1(std::log(p_acc_min) / length);  // y - 1
        const double y = 1.0 + em;
        const double x = 2.0 * y - 1.0;
        const double gamma_req = x * x / (4.0 * y * (-em));
        const double snr_req = 10.0 * std::log10(gamma_req);
        return power_from_source_level_w(source_level_db(snr_req, distance_m, f), env) *
               (1.0 + 1e-12);
    }

    double feasible_length_sup(double pt, double f, double l_feasible, double l_hi) const {
        if (power_floor(l_hi, f) <= pt) {
            return l_hi;
        }
        double lo = l_feasible;
        double hi = l_hi;
        for (int i = 0; i < 80; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (power_floor(mid, f) <= pt) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return lo;
    }
};

struct JointCandidate {
    DesignPoint point;
    double frequency_khz = 0.0;
    double value = kInf;
};

}  // namespace

OracleResult minimize_original(double distance_m, const ChannelEnv& env,
                               double p_acc_min, const OracleOptions& opts) {
    env.validate();
    if (!(p_acc_min > 0.5 && p_acc_min < 1.0)) {
        throw std::domain_error("p_acc_min must lie in the open interval (0.5, 1)");
    }
    const JointProblem prob{distance_m, env, p_acc_min};
    const double m = env.overhead_bits();
    const double l_lo = m + 1.0;
    const double l_hi = std::max(opts.length_hi_factor * m, l_lo + 1.0);
    const double f_lo = 0.2;
    const double f_hi = 200.0;

    // The joint grid is decimated relative to the reduced grid; the boundary
    // sweep below recovers the resolution where it matters.
    const int nf = std::max(8, opts.freq_points);
    const int nl = std::max(16, opts.length_points / 4);
    const int np = std::max(16, opts.power_points / 4);

    JointCandidate best;
    for (int k = 0; k < nf; ++k) {
        const double f = f_lo * std::pow(f_hi / f_lo, static_cast<double>(k) / (nf - 1));
        const double row_lo = prob.power_floor(l_lo, f) / 10.0;
        const double row_hi = prob.power_floor(l_hi, f) * 1e4;
        if (!std::isfinite(row_lo) || !std::isfinite(row_hi)) {
            continue;  // absorption overflow: frequency unusable at this range
        }
        for (int j = 0; j < nl; ++j) {
            const double length = l_lo + (l_hi - l_lo) * j / (nl - 1);
            const double floor = prob.power_floor(length, f);
            const double vb = prob.objective(floor, length, f);
            if (vb < best.value) {
                best = {{floor, length}, f, vb};
            }
            for (int i = 0; i < np; ++i) {
                const double pt =
                    row_lo * std::pow(row_hi / row_lo, static_cast<double>(i) / (np - 1));
                if (pt < floor) {
                    continue;
                }
                const double v = prob.objective(pt, length, f);
                if (v < best.value) {
                    best = {{pt, length}, f, v};
                }
            }
        }
    }
    if (!(best.value < kInf)) {
        throw std::runtime_error("minimize_original: empty feasible grid");
    }

    // Interior refinement: alternating golden lines in power, length and
    // frequency. The frequency line is penalized outside the feasible set.
    JointCandidate cur = best;
    for (int round = 0; round < opts.refine_rounds; ++round) {
        const JointCandidate before = cur;
        const double floor = prob.power_floor(cur.point.length_bits, cur.frequency_khz);
        const Probe p = golden_min(
            [&](double u) {
                return prob.objective(std::exp(u), cur.point.length_bits, cur.frequency_khz);
            },
            std::log(floor), std::log(floor * 1e8), opts.refine_tol);
        if (p.value < cur.value) {
            cur.point.power_w = std::exp(p.x);
            cur.value = p.value;
        }
        const double l_up = prob.feasible_length_sup(cur.point.power_w, cur.frequency_khz,
                                                     cur.point.length_bits, l_hi);
        const Probe q = golden_min(
            [&](double length) {
                return prob.objective(cur.point.power_w, length, cur.frequency_khz);
            },
            l_lo, l_up, opts.refine_tol);
        if (q.value < cur.value) {
            cur.point.length_bits = q.x;
            cur.value = q.value;
        }
        const Probe r = golden_min(
            [&](double f) {
                if (!prob.feasible(cur.point.power_w, cur.point.length_bits, f)) {
                    return kInf;
                }
                return prob.objective(cur.point.power_w, cur.point.length_bits, f);
            },
            std::max(f_lo, cur.frequency_khz / 1.25), std::min(f_hi, cur.frequency_khz * 1.25),
            opts.refine_tol);
        if (r.value < cur.value) {
            cur.frequency_khz = r.x;
            cur.value = r.value;
        }
        const double move = std::abs(cur.value - before.value) /
                            (std::abs(before.value) + 1e-300);
        if (move < opts.refine_tol) {
            break;
        }
    }

    // Boundary sweep over (frequency, length) with the power pinned to the
    // reliability floor; smooth in both coordinates, so this is the
    // high-accuracy path.
    JointCandidate bound = best;
    bound.point.power_w = prob.power_floor(best.point.length_bits, best.frequency_khz);
    bound.value =
        prob.objective(bound.point.power_w, bound.point.length_bits, bound.frequency_khz);
    const auto psi = [&](double f, double length) {
        return prob.objective(prob.power_floor(length, f), length, f);
    };
    for (int round = 0; round < opts.refine_rounds; ++round) {
        const double prev = bound.value;
        const Probe pf = golden_min(
            [&](double f) { return psi(f, bound.point.length_bits); },
            std::max(f_lo, bound.frequency_khz / 1.5),
            std::min(f_hi, bound.frequency_khz * 1.5), opts.refine_tol);
        if (pf.value < bound.value) {
            bound.frequency_khz = pf.x;
            bound.point.power_w = prob.power_floor(bound.point.length_bits, pf.x);
            bound.value = pf.value;
        }
        const Probe pl = golden_min(
            [&](double length) { return psi(bound.frequency_khz, length); }, l_lo, l_hi,
            opts.refine_tol);
        if (pl.value < bound.value) {
            bound.point.length_bits = pl.x;
            bound.point.power_w = prob.power_floor(pl.x, bound.frequency_khz);
            bound.value = pl.value;
        }
        if (std::abs(bound.value - prev) < opts.refine_tol * std::abs(prev)) {
            break;
        }
    }

    JointCandidate final = best;
    if (cur.value < final.value) {
        final = cur;
    }
    if (bound.value < final.value) {
        final = bound;
    }

    OracleResult out;
    out.point = final.point;
    out.frequency_khz = final.frequency_khz;
    out.objective_log = final.value;
    out.grid = opts;
    out.refined = true;
    return out;
}

double relative_error_pct(double analytic, double oracle) {
    if (!(std::isfinite(analytic) && std::isfinite(oracle))) {
        throw std::domain_error("relative_error_pct requires finite inputs");
    }
    if (std::abs(oracle) < 1e-300) {
        throw std::domain_error("relative_error_pct: reference too close to zero");
    }
    return 100.0 * std::abs(analytic - oracle) / std::abs(oracle);
}

}  // namespace uwlink

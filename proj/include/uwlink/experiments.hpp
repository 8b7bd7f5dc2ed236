// Experiment sweeps shared by the CLI and the verification suites: frequency
// sweep, single-instance solve bundle, the relative-error table, the figure
// data sweeps with their qualitative checks, and a simulation bundle.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "uwlink/kkt.hpp"
#include "uwlink/oracle.hpp"
#include "uwlink/simulate.hpp"

namespace uwlink {

ProblemInstance make_instance(double distance_m, double p_acc_min,
                              const ChannelEnv& env);

struct FreqSweepRow {
    double distance_m;
    double f_star_khz;
};
std::vector<FreqSweepRow> freq_sweep(double d_lo_m, double d_hi_m, int points);

struct SolveBundle {
    double distance_m = 0.0;
    double p_acc_min = 0.0;
    DerivedConstants constants;
    SolveResult kkt;
    OracleResult oracle;               // reduced-problem reference
    double err_pct_objective = 0.0;    // selected vs oracle, energy basis
    double err_pct_log_objective = 0.0;// selected vs oracle, log basis
    double delay_ratio = 0.0;          // T1/T2 at the selected design
};
SolveBundle run_solve(double distance_m, double p_acc_min, const ChannelEnv& env,
                      const OracleOptions& opts = {});

struct Table1Cell {
    double p_acc_min;
    double distance_m;
    double err_pct_objective;
    double err_pct_log_objective;
};
std::vector<Table1Cell> run_table1(const ChannelEnv& env,
                                   const std::vector<double>& p_acc_mins,
                                   const std::vector<double>& distances_m,
                                   const OracleOptions& opts = {});

// Tabular sweep result: unit-annotated header, numeric rows, and the named
// qualitative checks appended to the CSV as trailer rows.
struct Check {
    std::string name;
    bool pass;
};
struct FigData {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::vector<Check> checks;
    bool all_pass() const;
};

struct SweepGrid {
    double d_lo_m = 1000.0;
    double d_hi_m = 100000.0;
    int points = 13;
    std::vector<double> p_acc_mins = {0.98, 0.985, 0.99};
};

// fig4: acceptance decay of the reliability-blind candidates.
// fig5: acceptance of the reliability-constrained candidates vs threshold.
// fig6: objective comparison of Case 1, Case 2 and the joint-problem oracle.
// fig7: link delay over packet transmit time at the selected designs.
// fig8: optimum objective growth in distance and threshold.
FigData run_fig(const std::string& which, const ChannelEnv& env,
                const SweepGrid& grid, const OracleOptions& opts = {});

struct SimulateBundle {
    double distance_m = 0.0;
    double p_acc_min = 0.0;
    DesignPoint design;
    double frequency_khz = 0.0;
    double analytic_p_acc = 0.0;
    double analytic_e_b_j = 0.0;
    SimConfig config;
    SimReport report;
    double p_acc_sigma = 0.0;  // |empirical - analytic| in standard errors
    double e_b_sigma = 0.0;
};
SimulateBundle run_simulate(double distance_m, double p_acc_min,
                            const ChannelEnv& env, const SimConfig& cfg);

// Serialization. CSV is RFC-4180-style with a mandatory header row and
// locale-independent formatting; JSON objects carry "schema": 1.
void write_csv(std::ostream& os, const FigData& data);
void write_freq_csv(std::ostream& os, const std::vector<FreqSweepRow>& rows);
void write_table1_csv(std::ostream& os, const std::vector<Table1Cell>& cells,
                      const std::vector<double>& p_acc_mins,
                      const std::vector<double>& distances_m);
nlohmann::json to_json(const SolveBundle& bundle);
nlohmann::json to_json(const SimulateBundle& bundle);
std::string format_double(double v);

}  // namespace uwlink

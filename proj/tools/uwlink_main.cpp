// Command-line front end: exposes the library computations and emits the
// experiment sweeps as CSV or JSON. Table and figure commands embed their
// qualitative checks and exit nonzero when one fails.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "uwlink/experiments.hpp"

namespace {

using nlohmann::json;
using namespace uwlink;

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file: " + path);
    }
    json cfg;
    in >> cfg;
    return cfg;
}

// Precedence: explicit flag > config file > built-in default.
template <typename T>
void apply_config(const CLI::Option* opt, const json& cfg, const char* key, T& target) {
    if (opt != nullptr && opt->count() > 0) {
        return;
    }
    if (cfg.contains(key)) {
        target = cfg.at(key).get<T>();
    }
}

int emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return 0;
    }
    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "cannot write to " << out_path << "\n";
        return 2;
    }
    out << content;
    return 0;
}

std::string fig_json(const FigData& data) {
    json rows = json::array();
    for (const auto& r : data.rows) {
        rows.push_back(r);
    }
    json checks = json::array();
    for (const Check& c : data.checks) {
        checks.push_back({{"name", c.name}, {"pass", c.pass}});
    }
    const json j = {{"schema", 1},          {"command", "figdata"}, {"which", data.name},
                    {"header", data.header}, {"rows", rows},         {"checks", checks}};
    return j.dump(2) + "\n";
}

struct EnvFlags {
    CLI::Option* depth = nullptr;
    CLI::Option* pc = nullptr;
    CLI::Option* mu = nullptr;
    CLI::Option* tau = nullptr;
};

EnvFlags add_env_flags(CLI::App* cmd, ChannelEnv& env) {
    EnvFlags f;
    f.depth = cmd->add_option("--depth", env.depth_m, "Water depth, meters");
    f.pc = cmd->add_option("--pc", env.electronics_power_w,
                           "Electronics power per attempt, watts");
    f.mu = cmd->add_option("--mu", env.header_bits, "Header length, bits");
    f.tau = cmd->add_option("--tau", env.trailer_bits, "Trailer length, bits");
    return f;
}

void apply_env_config(const EnvFlags& f, const json& cfg, ChannelEnv& env) {
    apply_config(f.depth, cfg, "depth_m", env.depth_m);
    apply_config(f.pc, cfg, "pc_w", env.electronics_power_w);
    apply_config(f.mu, cfg, "mu_bits", env.header_bits);
    apply_config(f.tau, cfg, "tau_bits", env.trailer_bits);
    if (cfg.contains("speed_mps")) {
        env.sound_speed_mps = cfg.at("speed_mps").get<double>();
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Underwater acoustic link energy optimizer"};
    app.require_subcommand(1);

    // freq ------------------------------------------------------------
    auto* cmd_freq = app.add_subcommand("freq", "Optimal carrier frequency sweep");
    double fr_dmin = 100.0;
    double fr_dmax = 100000.0;
    int fr_points = 50;
    std::string fr_out;
    std::string fr_config;
    std::string fr_format = "csv";
    auto* fr_dmin_o = cmd_freq->add_option("--dmin", fr_dmin, "Sweep start, meters");
    auto* fr_dmax_o = cmd_freq->add_option("--dmax", fr_dmax, "Sweep end, meters");
    auto* fr_points_o = cmd_freq->add_option("--points", fr_points, "Number of rows");
    cmd_freq->add_option("--out", fr_out, "Write output to a file");
    cmd_freq->add_option("--config", fr_config, "JSON config file");
    cmd_freq->add_option("--format", fr_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    // solve -----------------------------------------------------------
    auto* cmd_solve = app.add_subcommand("solve", "Solve one design instance");
    double sv_d = 10000.0;
    double sv_p0 = 0.98;
    ChannelEnv sv_env;
    std::string sv_out;
    std::string sv_config;
    std::string sv_format = "json";
    auto* sv_d_o = cmd_solve->add_option("--d", sv_d, "Node distance, meters");
    auto* sv_p0_o = cmd_solve->add_option("--pacc0", sv_p0,
                                          "Packet acceptance threshold, in (0.5, 1)");
    const EnvFlags sv_envf = add_env_flags(cmd_solve, sv_env);
    cmd_solve->add_option("--out", sv_out, "Write output to a file");
    cmd_solve->add_option("--config", sv_config, "JSON config file");
    cmd_solve->add_option("--format", sv_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    // table1 ----------------------------------------------------------
    auto* cmd_table = app.add_subcommand("table1", "Relative-error table");
    ChannelEnv tb_env;
    std::string tb_out;
    std::string tb_config;
    std::string tb_format = "csv";
    const EnvFlags tb_envf = add_env_flags(cmd_table, tb_env);
    cmd_table->add_option("--out", tb_out, "Write output to a file");
    cmd_table->add_option("--config", tb_config, "JSON config file");
    cmd_table->add_option("--format", tb_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    // figdata ---------------------------------------------------------
    auto* cmd_fig = app.add_subcommand("figdata", "Figure data sweeps");
    std::string fg_which;
    double fg_dmin = 0.0;
    double fg_dmax = 0.0;
    int fg_points = 0;
    std::vector<double> fg_p0s;
    ChannelEnv fg_env;
    std::string fg_out;
    std::string fg_config;
    std::string fg_format = "csv";
    cmd_fig->add_option("--which", fg_which, "fig4|fig5|fig6|fig7|fig8")
        ->required()
        ->check(CLI::IsMember({"fig4", "fig5", "fig6", "fig7", "fig8"}));
    auto* fg_dmin_o = cmd_fig->add_option("--dmin", fg_dmin, "Sweep start, meters");
    auto* fg_dmax_o = cmd_fig->add_option("--dmax", fg_dmax, "Sweep end, meters");
    auto* fg_points_o = cmd_fig->add_option("--points", fg_points, "Rows per threshold");
    cmd_fig->add_option("--pacc0", fg_p0s, "Thresholds, repeatable");
    const EnvFlags fg_envf = add_env_flags(cmd_fig, fg_env);
    cmd_fig->add_option("--out", fg_out, "Write output to a file");
    cmd_fig->add_option("--config", fg_config, "JSON config file");
    cmd_fig->add_option("--format", fg_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    // simulate ----------------------------------------------------------
    auto* cmd_sim = app.add_subcommand("simulate", "Monte Carlo at the solved design");
    double sm_d = 10000.0;
    double sm_p0 = 0.99;
    ChannelEnv sm_env;
    SimConfig sm_cfg;
    std::string sm_mode = "per_packet";
    std::string sm_out;
    std::string sm_config;
    std::string sm_format = "json";
    auto* sm_d_o = cmd_sim->add_option("--d", sm_d, "Node distance, meters");
    auto* sm_p0_o = cmd_sim->add_option("--pacc0", sm_p0,
                                        "Packet acceptance threshold, in (0.5, 1)");
    auto* sm_trials_o = cmd_sim->add_option("--trials", sm_cfg.trials, "Deliveries");
    auto* sm_seed_o = cmd_sim->add_option("--seed", sm_cfg.seed, "RNG seed");
    cmd_sim->add_option("--mode", sm_mode, "per_packet or per_bit")
        ->check(CLI::IsMember({"per_packet", "per_bit"}));
    cmd_sim->add_option("--cap", sm_cfg.max_attempts_cap, "Attempt cap per delivery");
    const EnvFlags sm_envf = add_env_flags(cmd_sim, sm_env);
    cmd_sim->add_option("--out", sm_out, "Write output to a file");
    cmd_sim->add_option("--config", sm_config, "JSON config file");
    cmd_sim->add_option("--format", sm_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_freq->parsed()) {
            json cfg = fr_config.empty() ? json::object() : load_config(fr_config);
            apply_config(fr_dmin_o, cfg, "dmin_m", fr_dmin);
            apply_config(fr_dmax_o, cfg, "dmax_m", fr_dmax);
            apply_config(fr_points_o, cfg, "points", fr_points);
            const auto rows = freq_sweep(fr_dmin, fr_dmax, fr_points);
            bool monotone = true;
            for (std::size_t i = 1; i < rows.size(); ++i) {
                monotone = monotone && rows[i].f_star_khz < rows[i - 1].f_star_khz;
            }
            std::string text;
            if (fr_format == "csv") {
                std::ostringstream os;
                write_freq_csv(os, rows);
                text = os.str();
            } else {
                json jr = json::array();
                for (const auto& r : rows) {
                    jr.push_back({{"d_m", r.distance_m}, {"f_star_khz", r.f_star_khz}});
                }
                json checks = json::array();
                checks.push_back({{"name", "f_star_decreasing"}, {"pass", monotone}});
                text = json{{"schema", 1}, {"command", "freq"}, {"rows", jr},
                            {"checks", checks}}
                           .dump(2) +
                       "\n";
            }
            const int rc = emit(fr_out, text);
            return rc != 0 ? rc : (monotone ? 0 : 1);
        }

        if (cmd_solve->parsed()) {
            json cfg = sv_config.empty() ? json::object() : load_config(sv_config);
            apply_config(sv_d_o, cfg, "d_m", sv_d);
            apply_config(sv_p0_o, cfg, "pacc0", sv_p0);
            apply_env_config(sv_envf, cfg, sv_env);
            const SolveBundle b = run_solve(sv_d, sv_p0, sv_env);
            std::string text;
            if (sv_format == "json") {
                text = to_json(b).dump(2) + "\n";
            } else {
                std::ostringstream os;
                os << "case,power_w,length_bits,ln_eb,p_acc,feasible,selected\n";
                for (const KktSolution& s : b.kkt.cases) {
                    os << to_string(s.case_tag) << "," << format_double(s.point.power_w)
                       << "," << format_double(s.point.length_bits) << ","
                       << format_double(s.objective_log) << "," << format_double(s.p_acc)
                       << "," << (s.feasible ? "true" : "false") << ","
                       << (s.case_tag == b.kkt.best().case_tag ? "true" : "false") << "\n";
                }
                os << "oracle," << format_double(b.oracle.point.power_w) << ","
                   << format_double(b.oracle.point.length_bits) << ","
                   << format_double(b.oracle.objective_log) << ",,,\n";
                text = os.str();
            }
            return emit(sv_out, text);
        }

        if (cmd_table->parsed()) {
            json cfg = tb_config.empty() ? json::object() : load_config(tb_config);
            apply_env_config(tb_envf, cfg, tb_env);
            const std::vector<double> p0s = {0.980, 0.985, 0.990};
            std::vector<double> ds;
            for (int km = 10; km <= 100; km += 10) {
                ds.push_back(1000.0 * km);
            }
            const auto cells = run_table1(tb_env, p0s, ds);
            bool within = true;
            for (const Table1Cell& c : cells) {
                within = within && c.err_pct_objective <= 0.05;
            }
            std::string text;
            if (tb_format == "csv") {
                std::ostringstream os;
                write_table1_csv(os, cells, p0s, ds);
                text = os.str();
            } else {
                json jc = json::array();
                for (const Table1Cell& c : cells) {
                    jc.push_back({{"pacc0", c.p_acc_min},
                                  {"d_m", c.distance_m},
                                  {"relerr_pct", c.err_pct_objective},
                                  {"relerr_pct_log", c.err_pct_log_objective}});
                }
                json checks = json::array();
                checks.push_back({{"name", "all_entries_below_0.05pct"}, {"pass", within}});
                text = json{{"schema", 1}, {"command", "table1"}, {"cells", jc},
                            {"checks", checks}}
                           .dump(2) +
                       "\n";
            }
            const int rc = emit(tb_out, text);
            return rc != 0 ? rc : (within ? 0 : 1);
        }

        if (cmd_fig->parsed()) {
            json cfg = fg_config.empty() ? json::object() : load_config(fg_config);
            SweepGrid grid;
            if (fg_which == "fig6" || fg_which == "fig8") {
                grid.d_lo_m = 10000.0;
                grid.points = 10;
            }
            if (fg_which == "fig7") {
                grid.p_acc_mins = {0.98, 0.99};
            }
            apply_config(fg_dmin_o, cfg, "dmin_m", fg_dmin);
            apply_config(fg_dmax_o, cfg, "dmax_m", fg_dmax);
            apply_config(fg_points_o, cfg, "points", fg_points);
            if (fg_dmin_o->count() > 0 || cfg.contains("dmin_m")) {
                grid.d_lo_m = fg_dmin;
            }
            if (fg_dmax_o->count() > 0 || cfg.contains("dmax_m")) {
                grid.d_hi_m = fg_dmax;
            }
            if (fg_points_o->count() > 0 || cfg.contains("points")) {
                grid.points = fg_points;
            }
            if (!fg_p0s.empty()) {
                grid.p_acc_mins = fg_p0s;
            } else if (cfg.contains("pacc0_list")) {
                grid.p_acc_mins = cfg.at("pacc0_list").get<std::vector<double>>();
            }
            apply_env_config(fg_envf, cfg, fg_env);
            const FigData data = run_fig(fg_which, fg_env, grid);
            std::string text;
            if (fg_format == "csv") {
                std::ostringstream os;
                write_csv(os, data);
                text = os.str();
            } else {
                text = fig_json(data);
            }
            const int rc = emit(fg_out, text);
            return rc != 0 ? rc : (data.all_pass() ? 0 : 1);
        }

        if (cmd_sim->parsed()) {
            json cfg = sm_config.empty() ? json::object() : load_config(sm_config);
            apply_config(sm_d_o, cfg, "d_m", sm_d);
            apply_config(sm_p0_o, cfg, "pacc0", sm_p0);
            apply_config(sm_trials_o, cfg, "trials", sm_cfg.trials);
            apply_config(sm_seed_o, cfg, "seed", sm_cfg.seed);
            apply_env_config(sm_envf, cfg, sm_env);
            sm_cfg.mode = sm_mode == "per_bit" ? SampleMode::PerBit : SampleMode::PerPacket;
            const SimulateBundle b = run_simulate(sm_d, sm_p0, sm_env, sm_cfg);
            std::string text;
            if (sm_format == "json") {
                text = to_json(b).dump(2) + "\n";
            } else {
                std::ostringstream os;
                os << "key,value\n"
                   << "empirical_p_acc," << format_double(b.report.empirical_p_acc) << "\n"
                   << "analytic_p_acc," << format_double(b.analytic_p_acc) << "\n"
                   << "empirical_e_b_j," << format_double(b.report.empirical_e_b_j) << "\n"
                   << "analytic_e_b_j," << format_double(b.analytic_e_b_j) << "\n"
                   << "mean_attempts," << format_double(b.report.mean_attempts) << "\n"
                   << "delay_ratio," << format_double(b.report.delay_ratio) << "\n";
                text = os.str();
            }
            return emit(sm_out, text);
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 0;
}

// jinxin: kernel tables, single runs and the decay / epsilon studies.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 4 a study ran but missed its tolerance.

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include "jinxin/config.hpp"
#include "jinxin/errors.hpp"
#include "jinxin/harness.hpp"
#include "jinxin/kernels.hpp"
#include "jinxin/model.hpp"
#include "jinxin/solvers.hpp"
#include "jinxin/trajectory_io.hpp"

namespace {

using namespace jinxin;

constexpr int kOk = 0;
constexpr int kConfig = 2;
constexpr int kNumerical = 3;
constexpr int kTolerance = 4;

struct Options {
    std::string config;
    std::string out;
    std::size_t jobs = 0;
    bool seedless = false;
};

RunConfig resolve(const Options& o) {
    RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
    if (!o.out.empty()) {
        cfg.output_dir = o.out;
    } else if (const char* env = std::getenv("JINXIN_OUT"); env != nullptr && *env != '\0') {
        cfg.output_dir = env;
    }
    if (o.jobs > 0) cfg.epsilon.jobs = o.jobs;
    cfg.decay.data = cfg.data;
    cfg.epsilon.data = cfg.data;
    cfg.bgk.data = cfg.data;
    return cfg;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.output_dir) / name).string();
}

void emit_summary(const RunConfig& cfg, const std::string& name, const std::string& text) {
    write_atomically(out_path(cfg, name), [&](std::ostream& os) { os << text; });
    std::cout << text;
}

int finish_study(const RunConfig& cfg, const StudyResult& r, const std::string& stem) {
    write_atomically(out_path(cfg, stem + ".csv"), [&](std::ostream& os) { write_study_csv(os, r); });
    if (r.profile)
        write_atomically(out_path(cfg, stem + "_profile.csv"), [&](std::ostream& os) { write_table_csv(os, *r.profile); });
    std::ostringstream summary;
    write_summary(summary, r);
    emit_summary(cfg, stem + "_summary.txt", summary.str());
    return r.pass ? kOk : kTolerance;
}

int cmd_green_table(const RunConfig& cfg) {
    const std::string path = out_path(cfg, "green_table.csv");
    write_atomically(path, [&](std::ostream& os) { write_kernel_table(os, cfg.green_xi, cfg.green_t, cfg.model); });
    std::cout << "green_table=" << path << "\nrows=" << cfg.green_xi.size() * cfg.green_t.size() << '\n';
    return kOk;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

int cmd_simulate(const RunConfig& cfg) {
    const Grid g = cfg.grid();
    const SolverConfig sc = cfg.solver();
    const StateCD w0 = initial_state(cfg.data, cfg.model, g);

    Trajectory traj;
    const char* solver = "cd";
    switch (cfg.simulate_solver) {
        case SimulateSolver::ConservativeDissipative:
            traj = nonlinear_jinxin_solve(w0, sc, cfg.model, g);
            break;
        case SimulateSolver::Kinetic:
            solver = "bgk";
            traj = bgk_solve(uv_to_bgk(cd_to_uv(w0, cfg.model), cfg.model), sc, cfg.model, g);
            break;
        case SimulateSolver::Parabolic:
            solver = "parabolic";
            traj = parabolic_solve(w0.w1, sc, cfg.model, g, cfg.simulate_corrected);
            break;
    }

    if (cfg.simulate_format != TrajectoryFormat::Binary)
        write_atomically(out_path(cfg, "trajectory.csv"), [&](std::ostream& os) { write_trajectory_csv(os, traj); });
    if (cfg.simulate_format != TrajectoryFormat::Csv)
        write_atomically(out_path(cfg, "trajectory.jxt"), [&](std::ostream& os) { write_trajectory_binary(os, traj); },
                         true);

    double mass0 = 0.0;
    for (double x : w0.w1) mass0 += x;
    mass0 *= g.dx();
    double drift = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        double m = 0.0;
        for (double x : traj.density(i)) m += x;
        drift = std::max(drift, std::abs(m * g.dx() - mass0));
    }
    const double scale = std::max(std::abs(mass0), l1_norm(w0.w1, g));
    const double rel_drift = scale > 0.0 ? drift / scale : drift;

    std::ostringstream s;
    s << "solver=" << solver << "\nframes=" << traj.size() << "\ndt=" << sc.dt << "\nt_final=" << sc.t_final
      << "\nmass_drift=" << rel_drift << "\nmax_imag_residue=" << traj.max_imag_residue << '\n';
    if (cfg.model.h.is_zero() && cfg.simulate_solver != SimulateSolver::Parabolic) {
        // The Duhamel integral vanishes: the exact propagator is the reference.
        double worst = 0.0;
        for (std::size_t i = 0; i < traj.size(); ++i) {
            const StateCD ref = linear_propagate(w0, traj.times[i], cfg.model, g);
            const StateCD got = traj.cd(i);
            worst = std::max({worst, max_abs_diff(got.w1, ref.w1), max_abs_diff(got.w2, ref.w2)});
        }
        s << "reference=linear_propagate\nreference_discrepancy=" << worst << '\n';
    } else {
        s << "reference=none\n";
    }
    emit_summary(cfg, "simulate_summary.txt", s.str());
    return kOk;
}

int cmd_decay_study(const RunConfig& cfg) {
    return finish_study(cfg, decay_study(cfg.model, cfg.grid(), cfg.decay), "decay_study");
}

int cmd_epsilon_study(const RunConfig& cfg) {
    return finish_study(cfg, epsilon_study(cfg.model, cfg.epsilon_grid(), cfg.epsilon), "epsilon_study");
}

int cmd_bgk_check(const RunConfig& cfg) {
    return finish_study(cfg, bgk_check(cfg.model, cfg.grid(), cfg.bgk), "bgk_check");
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        if (std::string(argv[i]).rfind("--seedless=", 0) == 0) {
            std::cerr << "error: --seedless takes no value (the tool uses no randomness)\n";
            return kConfig;
        }
    }

    std::ostringstream defaults;
    write_config(defaults, RunConfig{});
    CLI::App app{"Jin-Xin relaxation system: kernels, simulations and decay / diffusive-limit studies"};
    app.footer("Default configuration (config/defaults.conf):\n\n" + defaults.str());
    app.require_subcommand(1);

    Options opts;
    app.add_option("--config", opts.config, "Configuration file ([section] key = value)");
    app.add_option("--out", opts.out, "Output directory (fallback: $JINXIN_OUT, then [output] dir)");
    app.add_option("--jobs", opts.jobs, "Maximum concurrent solver runs")->check(CLI::PositiveNumber);
    app.add_flag("--seedless", opts.seedless, "Accepted for script compatibility; no randomness is used");

    struct Command {
        const char* name;
        const char* help;
        int (*run)(const RunConfig&);
    };
    const Command commands[] = {
        {"green-table", "Export the kernel split over the [green] xi/t grids", cmd_green_table},
        {"simulate", "Run one solver and export the trajectory", cmd_simulate},
        {"decay-study", "Long-time decay exponents", cmd_decay_study},
        {"epsilon-study", "Convergence to the parabolic limit as epsilon -> 0", cmd_epsilon_study},
        {"bgk-check", "Kinetic vs conservative-dissipative solver agreement", cmd_bgk_check},
    };
    for (const Command& c : commands) {
        auto* sub = app.add_subcommand(c.name, c.help);
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfig;
    }

    try {
        const RunConfig cfg = resolve(opts);
        for (const Command& c : commands)
            if (app.got_subcommand(c.name)) return c.run(cfg);
    } catch (const ParameterError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kConfig;
    } catch (const ContractError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kConfig;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumerical;
    }
    return kConfig;
}

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "jinxin/harness.hpp"
#include "jinxin/params.hpp"
#include "jinxin/solvers.hpp"

namespace jinxin {

enum class SimulateSolver { ConservativeDissipative, Kinetic, Parabolic };
enum class TrajectoryFormat { Csv, Binary, Both };

/// Everything a CLI run needs. Defaults here are the documented defaults and
/// must match config/defaults.conf.
struct RunConfig {
    ModelParams model{0.1, 1.0, 0.0, Nonlinearity::quadratic(0.5)};
    std::size_t grid_n = 8192;
    double grid_length = 2000.0;
    InitialData data;

    /// dt = 0 selects default_time_step.
    double dt = 0.0;
    double t_final = 5.0;
    bool dealias = true;
    double blowup_factor = 1e6;
    std::vector<double> record{0.0, 1.0, 2.0, 3.0, 4.0, 5.0};

    std::vector<double> green_xi{0.0, 1e-3, 0.1, 1.0, 10.0, 1e3};
    std::vector<double> green_t{0.0, 0.01, 1.0, 10.0};

    DecayStudyConfig decay;

    EpsilonStudyConfig epsilon;
    /// 0 reuses the [grid] values.
    std::size_t epsilon_grid_n = 4096;
    double epsilon_grid_length = 1280.0;

    BgkCheckConfig bgk;

    SimulateSolver simulate_solver = SimulateSolver::ConservativeDissipative;
    TrajectoryFormat simulate_format = TrajectoryFormat::Csv;
    bool simulate_corrected = false;

    std::string output_dir = "out";

    Grid grid() const { return Grid(grid_n, grid_length); }
    Grid epsilon_grid() const;
    SolverConfig solver() const;
    /// Cross-field checks (ParameterError); parsing already checked each value.
    void validate() const;
};

/// Parses `[section]` / `key = value` text; `#` and `;` start comments.
/// Unknown sections or keys and malformed values throw ParameterError naming
/// the line. Keys absent from the text keep their defaults.
RunConfig parse_config(std::istream& is, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

/// Every key with its current value, in the same format parse_config reads.
void write_config(std::ostream& os, const RunConfig& cfg);

}  // namespace jinxin

#pragma once

#include <array>
#include <span>
#include <vector>

#include "jinxin/grid.hpp"
#include "jinxin/params.hpp"

namespace jinxin {

/// Conserved density u and flux-like variable v.
struct StateUV {
    std::vector<double> u;
    std::vector<double> v;
};

/// Kinetic (BGK) densities: u = f1 + f2, v = (lambda/epsilon)(f1 - f2).
struct StateBGK {
    std::vector<double> f1;
    std::vector<double> f2;
};

/// Conservative-dissipative variables: w1 = u,
/// w2 = epsilon (v - a u) / sqrt(lambda^2 - a^2 epsilon^2).
struct StateCD {
    std::vector<double> w1;
    std::vector<double> w2;
};

struct Maxwellians {
    std::vector<double> m1;
    std::vector<double> m2;
};

using Matrix2 = std::array<std::array<double, 2>, 2>;

Maxwellians maxwellians(std::span<const double> u, const ModelParams& p);

StateBGK uv_to_bgk(const StateUV& s, const ModelParams& p);
StateUV bgk_to_uv(const StateBGK& s, const ModelParams& p);

/// Both directions require lambda^2 - a^2 epsilon^2 > 0 (ParameterError otherwise).
StateCD uv_to_cd(const StateUV& s, const ModelParams& p);
StateUV cd_to_uv(const StateCD& s, const ModelParams& p);

/// Constant right symmetrizer [[1, a eps^2], [a eps^2, lambda^2 eps^2]].
Matrix2 symmetrizer(const ModelParams& p);

/// (u0, f(u0) - lambda^2 d/dx u0), with a spectral derivative.
StateUV well_prepared_data(std::span<const double> u0, const ModelParams& p, const Grid& g);

/// amplitude * exp(-x^2 / (2 sigma^2)) sampled on the grid.
std::vector<double> gaussian(const Grid& g, double amplitude, double sigma);

}  // namespace jinxin

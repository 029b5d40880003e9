#include "jinxin/model.hpp"

#include <cmath>

#include "jinxin/errors.hpp"
#include "jinxin/spectral.hpp"

namespace jinxin {

namespace {

void require_same_size(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ContractError("state components have different sizes");
}

}  // namespace

Maxwellians maxwellians(std::span<const double> u, const ModelParams& p) {
    Maxwellians m{std::vector<double>(u.size()), std::vector<double>(u.size())};
    const double scale = p.epsilon / (2.0 * p.lambda);
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double half = 0.5 * u[i];
        const double shift = scale * flux(u[i], p);
        m.m1[i] = half + shift;
        m.m2[i] = half - shift;
    }
    return m;
}

StateBGK uv_to_bgk(const StateUV& s, const ModelParams& p) {
    require_same_size(s.u, s.v);
    const double r = p.epsilon / p.lambda;
    StateBGK out{std::vector<double>(s.u.size()), std::vector<double>(s.u.size())};
    for (std::size_t i = 0; i < s.u.size(); ++i) {
        out.f1[i] = 0.5 * (s.u[i] + r * s.v[i]);
        out.f2[i] = 0.5 * (s.u[i] - r * s.v[i]);
    }
    return out;
}

StateUV bgk_to_uv(const StateBGK& s, const ModelParams& p) {
    require_same_size(s.f1, s.f2);
    const double r = p.lambda / p.epsilon;
    StateUV out{std::vector<double>(s.f1.size()), std::vector<double>(s.f1.size())};
    for (std::size_t i = 0; i < s.f1.size(); ++i) {
        out.u[i] = s.f1[i] + s.f2[i];
        out.v[i] = r * (s.f1[i] - s.f2[i]);
    }
    return out;
}

StateCD uv_to_cd(const StateUV& s, const ModelParams& p) {
    p.validate();
    require_same_size(s.u, s.v);
    const double scale = p.epsilon / p.reduced_speed();
    StateCD out{s.u, std::vector<double>(s.u.size())};
    for (std::size_t i = 0; i < s.u.size(); ++i) out.w2[i] = scale * (s.v[i] - p.a * s.u[i]);
    return out;
}

StateUV cd_to_uv(const StateCD& s, const ModelParams& p) {
    p.validate();
    require_same_size(s.w1, s.w2);
    const double scale = p.reduced_speed() / p.epsilon;
    StateUV out{s.w1, std::vector<double>(s.w1.size())};
    for (std::size_t i = 0; i < s.w1.size(); ++i) out.v[i] = p.a * s.w1[i] + scale * s.w2[i];
    return out;
}

Matrix2 symmetrizer(const ModelParams& p) {
    const double e2 = p.epsilon * p.epsilon;
    return {{{1.0, p.a * e2}, {p.a * e2, p.lambda * p.lambda * e2}}};
}

StateUV well_prepared_data(std::span<const double> u0, const ModelParams& p, const Grid& g) {
    if (u0.size() != g.size()) throw ContractError("initial datum does not match the grid");
    const std::vector<double> du = derivative(u0, g, 1);
    StateUV out{std::vector<double>(u0.begin(), u0.end()), std::vector<double>(u0.size())};
    const double l2 = p.lambda * p.lambda;
    for (std::size_t i = 0; i < u0.size(); ++i) out.v[i] = flux(u0[i], p) - l2 * du[i];
    return out;
}

std::vector<double> gaussian(const Grid& g, double amplitude, double sigma) {
    if (!(sigma > 0.0)) throw ParameterError("gaussian width must be positive");
    std::vector<double> out(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double x = g.x(j);
        out[j] = amplitude * std::exp(-x * x / (2.0 * sigma * sigma));
    }
    return out;
}

}  // namespace jinxin

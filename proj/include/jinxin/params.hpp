#pragma once

#include <span>
#include <string>
#include <vector>

namespace jinxin {

/// Polynomial nonlinearity h(u) = sum_k coeffs[k] * u^(k+2).
///
/// Starting at the quadratic power keeps h(0) = 0 and h'(0) = 0, so the flux
/// f(u) = a u + h(u) always has f(0) = 0 and f'(0) = a.
struct Nonlinearity {
    std::string name = "quadratic";
    std::vector<double> coeffs{0.5};

    static Nonlinearity none();
    static Nonlinearity quadratic(double c);
    static Nonlinearity polynomial(std::vector<double> coeffs);

    double value(double u) const;
    bool is_zero() const;
};

struct ModelParams {
    double epsilon = 0.1;
    double lambda = 1.0;
    double a = 0.0;
    Nonlinearity h{};

    /// Throws ParameterError unless epsilon > 0, lambda > 0 and
    /// lambda^2 - a^2 epsilon^2 > 0.
    void validate() const;

    /// sqrt(lambda^2 - a^2 epsilon^2); the speed scale of the C-D form.
    double reduced_speed() const;

    ModelParams with_epsilon(double eps) const;
};

double flux(double u, const ModelParams& p);
std::vector<double> f_eval(std::span<const double> u, const ModelParams& p);

}  // namespace jinxin

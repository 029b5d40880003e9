#include "jinxin/params.hpp"

#include <cmath>
#include <sstream>

#include "jinxin/errors.hpp"

namespace jinxin {

Nonlinearity Nonlinearity::none() { return {"none", {}}; }

Nonlinearity Nonlinearity::quadratic(double c) { return {"quadratic", {c}}; }

Nonlinearity Nonlinearity::polynomial(std::vector<double> coeffs) {
    return {"polynomial", std::move(coeffs)};
}

double Nonlinearity::value(double u) const {
    // Horner on u^2 * (c0 + c1 u + c2 u^2 + ...)
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * u + *it;
    return acc * u * u;
}

bool Nonlinearity::is_zero() const {
    for (double c : coeffs)
        if (c != 0.0) return false;
    return true;
}

void ModelParams::validate() const {
    std::ostringstream msg;
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        msg << "epsilon must be positive and finite (got " << epsilon << ")";
        throw ParameterError(msg.str());
    }
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        msg << "lambda must be positive and finite (got " << lambda << ")";
        throw ParameterError(msg.str());
    }
    if (!std::isfinite(a)) throw ParameterError("a must be finite");
    if (!(lambda * lambda - a * a * epsilon * epsilon > 0.0)) {
        msg << "lambda^2 - a^2 epsilon^2 must be positive (lambda=" << lambda << ", a=" << a
            << ", epsilon=" << epsilon << ")";
        throw ParameterError(msg.str());
    }
    for (double c : h.coeffs)
        if (!std::isfinite(c)) throw ParameterError("nonlinearity coefficients must be finite");
}

double ModelParams::reduced_speed() const {
    return std::sqrt(lambda * lambda - a * a * epsilon * epsilon);
}

ModelParams ModelParams::with_epsilon(double eps) const {
    ModelParams p = *this;
    p.epsilon = eps;
    return p;
}

double flux(double u, const ModelParams& p) { return p.a * u + p.h.value(u); }

std::vector<double> f_eval(std::span<const double> u, const ModelParams& p) {
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = flux(u[i], p);
    return out;
}

}  // namespace jinxin

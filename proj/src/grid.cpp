#include "jinxin/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "jinxin/errors.hpp"

namespace jinxin {

Grid::Grid(std::size_t n, double length) : n_(n), length_(length), dx_(0.0) {
    if (n < 8 || (n & (n - 1)) != 0) {
        std::ostringstream msg;
        msg << "grid size must be a power of two >= 8 (got " << n << ")";
        throw ParameterError(msg.str());
    }
    if (!(length > 0.0) || !std::isfinite(length)) throw ParameterError("grid length must be positive");
    dx_ = length_ / static_cast<double>(n_);
}

double Grid::x(std::size_t j) const { return -0.5 * length_ + static_cast<double>(j) * dx_; }

std::vector<double> Grid::nodes() const {
    std::vector<double> out(n_);
    for (std::size_t j = 0; j < n_; ++j) out[j] = x(j);
    return out;
}

long Grid::wavenumber(std::size_t j) const {
    return j <= n_ / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(n_);
}

double Grid::xi(std::size_t j) const {
    return 2.0 * std::numbers::pi * static_cast<double>(wavenumber(j)) / length_;
}

bool Grid::is_aliased(std::size_t j) const {
    return 3 * static_cast<std::size_t>(std::labs(wavenumber(j))) > n_;
}

}  // namespace jinxin

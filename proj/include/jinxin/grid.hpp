#pragma once

#include <cstddef>
#include <vector>

namespace jinxin {

/// Periodic grid on [-length/2, length/2) with n nodes, n a power of two.
///
/// Storage index j of a spectral coefficient maps to the signed wavenumber
/// k = j for j <= n/2 and k = j - n otherwise (FFT ordering); the physical
/// frequency is xi_k = 2 pi k / length. Index n/2 is the Nyquist mode.
class Grid {
public:
    Grid(std::size_t n, double length);

    std::size_t size() const { return n_; }
    double length() const { return length_; }
    double dx() const { return dx_; }

    double x(std::size_t j) const;
    std::vector<double> nodes() const;

    long wavenumber(std::size_t j) const;
    double xi(std::size_t j) const;
    bool is_nyquist(std::size_t j) const { return j == n_ / 2; }
    /// Modes removed by the 2/3 rule: |k| > n/3.
    bool is_aliased(std::size_t j) const;

    bool operator==(const Grid& other) const = default;

private:
    std::size_t n_;
    double length_;
    double dx_;
};

}  // namespace jinxin

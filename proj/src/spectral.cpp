#include "jinxin/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "jinxin/errors.hpp"

namespace jinxin {

namespace {

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

double parity(std::size_t j) { return (j & 1U) ? -1.0 : 1.0; }

}  // namespace

double SpectralField::conjugate_asymmetry() const {
    const std::size_t n = values.size();
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t mirror = (n - j) % n;
        worst = std::max(worst, std::abs(values[mirror] - std::conj(values[j])));
    }
    return worst;
}

Fft::Fft(const Grid& grid)
    : grid_(grid), buffer_(reinterpret_cast<cplx*>(fftw_alloc_complex(grid.size()))) {
    const int n = static_cast<int>(grid.size());
    std::lock_guard<std::mutex> lock(planner_mutex());
    forward_plan_ = fftw_plan_dft_1d(n, as_fftw(buffer_), as_fftw(buffer_), FFTW_FORWARD,
                                     FFTW_ESTIMATE);
    backward_plan_ = fftw_plan_dft_1d(n, as_fftw(buffer_), as_fftw(buffer_), FFTW_BACKWARD,
                                      FFTW_ESTIMATE);
    if (forward_plan_ == nullptr || backward_plan_ == nullptr) throw NumericalError("FFTW planning failed");
}

Fft::~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward_plan_);
    fftw_destroy_plan(backward_plan_);
    fftw_free(buffer_);
}

SpectralField Fft::forward(std::span<const double> field) {
    const std::size_t n = grid_.size();
    if (field.size() != n) throw ContractError("field size does not match the grid");
    for (std::size_t j = 0; j < n; ++j) buffer_[j] = cplx(field[j], 0.0);
    fftw_execute(forward_plan_);
    // The grid starts at -L/2, which contributes a phase (-1)^k.
    SpectralField out{std::vector<cplx>(n)};
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) out.values[j] = buffer_[j] * (scale * parity(j));
    return out;
}

std::vector<double> Fft::inverse(const SpectralField& spec, double* residue) {
    const std::size_t n = grid_.size();
    if (spec.size() != n) throw ContractError("spectrum size does not match the grid");
    for (std::size_t j = 0; j < n; ++j) buffer_[j] = spec.values[j] * parity(j);
    fftw_execute(backward_plan_);
    std::vector<double> out(n);
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        out[j] = buffer_[j].real();
        worst = std::max(worst, std::abs(buffer_[j].imag()));
    }
    if (residue != nullptr) *residue = worst;
    return out;
}

SpectralField spectral_derivative(const SpectralField& spec, const Grid& grid, int order) {
    SpectralField out = spec;
    for (std::size_t j = 0; j < spec.size(); ++j) {
        if (grid.is_nyquist(j) && (order % 2) != 0) {
            out.values[j] = 0.0;
            continue;
        }
        const cplx ik(0.0, grid.xi(j));
        for (int m = 0; m < order; ++m) out.values[j] *= ik;
    }
    return out;
}

void dealias(SpectralField& spec, const Grid& grid) {
    for (std::size_t j = 0; j < spec.size(); ++j)
        if (grid.is_aliased(j)) spec.values[j] = 0.0;
}

std::vector<double> derivative(std::span<const double> field, const Grid& grid, int order) {
    Fft fft(grid);
    return fft.inverse(spectral_derivative(fft.forward(field), grid, order));
}

}  // namespace jinxin

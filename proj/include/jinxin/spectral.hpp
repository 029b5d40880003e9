#pragma once

#include <complex>
#include <span>
#include <vector>

#include "jinxin/grid.hpp"

struct fftw_plan_s;

namespace jinxin {

using cplx = std::complex<double>;

/// Fourier coefficients of a field on a Grid, normalised so that
/// u(x_j) = sum_k values[k] exp(i xi_k x_j).
struct SpectralField {
    std::vector<cplx> values;

    std::size_t size() const { return values.size(); }
    cplx& operator[](std::size_t j) { return values[j]; }
    const cplx& operator[](std::size_t j) const { return values[j]; }

    /// max_k |c(-k) - conj(c(k))|, zero for the transform of a real field.
    double conjugate_asymmetry() const;
};

/// FFTW-backed transform pair for one grid.
///
/// Owns its plans and scratch buffer, so a single instance must not be used
/// from two threads at once; create one per solver run instead.
class Fft {
public:
    explicit Fft(const Grid& grid);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    const Grid& grid() const { return grid_; }

    SpectralField forward(std::span<const double> field);
    /// Inverse transform; the imaginary residue (max |Im|) is written to
    /// *residue when given.
    std::vector<double> inverse(const SpectralField& spec, double* residue = nullptr);

private:
    Grid grid_;
    // fftw_malloc'd so alignment, and hence the chosen codelets, never vary.
    cplx* buffer_;
    fftw_plan_s* forward_plan_;
    fftw_plan_s* backward_plan_;
};

/// Multiply by (i xi)^order; odd orders drop the Nyquist mode.
SpectralField spectral_derivative(const SpectralField& spec, const Grid& grid, int order = 1);
/// Zero the modes removed by the 2/3 rule.
void dealias(SpectralField& spec, const Grid& grid);

/// One-shot helper; allocates an Fft internally.
std::vector<double> derivative(std::span<const double> field, const Grid& grid, int order = 1);

}  // namespace jinxin

#pragma once
#include <complex>
#include <vector>

#include "gpvortex/grid.hpp"

namespace gpvortex {

/**
 * FFT workspace for one grid size. Owns FFTW plans (created under a global
 * mutex; FFTW planning is not thread-safe) and an aligned scratch buffer.
 * Plans use FFTW_ESTIMATE so repeated runs are bit-for-bit reproducible.
 * One workspace per thread; execution itself needs no lock.
 */
class SpectralWorkspace {
public:
    explicit SpectralWorkspace(const GridSpec& grid);
    ~SpectralWorkspace();
    SpectralWorkspace(const SpectralWorkspace&) = delete;
    SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

    const GridSpec& grid() const { return grid_; }

    // In-place unnormalized forward DFT (sum e^{-ik.x}).
    void forward(std::vector<std::complex<double>>& data) const;
    // In-place inverse DFT including the 1/M^2 normalization.
    void inverse(std::vector<std::complex<double>>& data) const;

private:
    GridSpec grid_;
    void* fwd_plan_ = nullptr;
    void* bwd_plan_ = nullptr;
    std::complex<double>* buffer_ = nullptr;  // FFTW-aligned scratch
};

}  // namespace gpvortex

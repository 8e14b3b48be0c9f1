#include "gpvortex/spectral.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>

namespace gpvortex {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

SpectralWorkspace::SpectralWorkspace(const GridSpec& grid) : grid_(grid) {
    const int M = grid_.points;
    buffer_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * grid_.size()));
    if (!buffer_) throw std::bad_alloc();
    auto* raw = reinterpret_cast<fftw_complex*>(buffer_);
    std::lock_guard lock(planner_mutex());
    fwd_plan_ = fftw_plan_dft_2d(M, M, raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_plan_ = fftw_plan_dft_2d(M, M, raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!fwd_plan_ || !bwd_plan_) throw std::runtime_error("SpectralWorkspace: FFTW planning failed");
}

SpectralWorkspace::~SpectralWorkspace() {
    std::lock_guard lock(planner_mutex());
    if (fwd_plan_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_plan_));
    if (bwd_plan_) fftw_destroy_plan(static_cast<fftw_plan>(bwd_plan_));
    fftw_free(buffer_);
}

void SpectralWorkspace::forward(std::vector<std::complex<double>>& data) const {
    if (data.size() != grid_.size())
        throw std::invalid_argument("SpectralWorkspace::forward: size mismatch");
    std::memcpy(buffer_, data.data(), sizeof(std::complex<double>) * data.size());
    fftw_execute(static_cast<fftw_plan>(fwd_plan_));
    std::memcpy(data.data(), buffer_, sizeof(std::complex<double>) * data.size());
}

void SpectralWorkspace::inverse(std::vector<std::complex<double>>& data) const {
    if (data.size() != grid_.size())
        throw std::invalid_argument("SpectralWorkspace::inverse: size mismatch");
    std::memcpy(buffer_, data.data(), sizeof(std::complex<double>) * data.size());
    fftw_execute(static_cast<fftw_plan>(bwd_plan_));
    const double scale = 1.0 / static_cast<double>(grid_.size());
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = buffer_[i] * scale;
}

}  // namespace gpvortex

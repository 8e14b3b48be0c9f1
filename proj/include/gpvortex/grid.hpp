#pragma once
#include <cstddef>

namespace gpvortex {

/** Uniform periodic square grid covering [-extent, extent)^2 with points^2 samples. */
struct GridSpec {
    double extent = 8.0;  // half-width L of the box
    int points = 256;     // samples per axis, must be a power of two (FFT path)

    GridSpec() = default;
    GridSpec(double extent_, int points_);

    double spacing() const { return 2.0 * extent / points; }
    double coord(int i) const { return -extent + spacing() * i; }
    // FFT-ordered wavenumber for index i: k = (pi/L) * m with m in [-M/2, M/2).
    double wavenumber(int i) const;
    std::size_t size() const { return static_cast<std::size_t>(points) * points; }
    std::size_t index(int ix, int iy) const { return static_cast<std::size_t>(ix) * points + iy; }

    bool operator==(const GridSpec&) const = default;
};

}  // namespace gpvortex

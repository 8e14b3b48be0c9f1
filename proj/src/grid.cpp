#include "gpvortex/grid.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

namespace gpvortex {

namespace {
bool is_power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }
}  // namespace

GridSpec::GridSpec(double extent_, int points_) : extent(extent_), points(points_) {
    if (!(extent > 0.0))
        throw std::invalid_argument("GridSpec: extent must be positive, got " + std::to_string(extent));
    if (points < 8 || !is_power_of_two(points))
        throw std::invalid_argument("GridSpec: points must be a power of two >= 8, got " +
                                    std::to_string(points));
}

double GridSpec::wavenumber(int i) const {
    const int m = (i < points / 2) ? i : i - points;
    return std::numbers::pi / extent * m;
}

}  // namespace gpvortex

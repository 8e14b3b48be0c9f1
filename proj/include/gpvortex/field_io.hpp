#pragma once
#include <string>

#include "gpvortex/field.hpp"

namespace gpvortex {

/**
 * Binary snapshot format, little-endian throughout:
 *   extent  f64 | points u64 | time f64 | points^2 x (re f64, im f64)
 * Samples are x-major (row ix = x, column iy = y), matching ComplexField2D.
 * A JSON sidecar `<path>.json` mirrors the header for tool consumption.
 */
void write_field(const std::string& path, const ComplexField2D& f);
ComplexField2D read_field(const std::string& path);

}  // namespace gpvortex

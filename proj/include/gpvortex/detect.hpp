#pragma once

#include <vector>

#include "gpvortex/field.hpp"

namespace gpvortex {

/** One detected phase singularity, refined to sub-cell accuracy. */
struct VortexObservation {
    double x = 0.0, y = 0.0;
    int charge = 0;
    // |psi| at the refined point (bilinear model) relative to max |psi|;
    // should be ~0 for a genuine zero, larger values flag a poor fit.
    double residual = 0.0;
};

struct DetectOptions {
    // Plaquettes whose centre lies outside this disc are ignored (the phase
    // is numerically meaningless where the density underflows). A value <= 0
    // selects 0.45 * extent; callers normally pass ~4x the cloud width.
    double disc_radius = -1.0;
};

/**
 * Locate quantised vortices as the plaquettes of the grid whose wrapped phase
 * circulation is +-2 pi, then refine each to sub-cell accuracy by solving for
 * the zero of the bilinear interpolant of psi on that cell. A zero sitting
 * exactly on a node or edge is reported once. Throws if same-signed zeros end
 * up closer than one cell (or a single plaquette carries |winding| >= 2):
 * such cores cannot be separated and the grid must be refined.
 * Results are sorted by (x, y).
 */
std::vector<VortexObservation> detect_vortices(const ComplexField2D& field,
                                               const DetectOptions& opt = {});

}  // namespace gpvortex

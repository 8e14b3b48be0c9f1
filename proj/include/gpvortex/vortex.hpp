#pragma once

namespace gpvortex {

/** One point vortex: position and topological charge. */
struct VortexSpec {
    double x = 0.0, y = 0.0;
    int charge = +1;
};

}  // namespace gpvortex

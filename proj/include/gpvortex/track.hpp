#pragma once

#include <string>
#include <vector>

#include "gpvortex/detect.hpp"

namespace gpvortex {

/** All detections at one output instant. */
struct DetectionFrame {
    double t = 0.0;
    std::vector<VortexObservation> observations;
};

/** One sample of a track; coasted points hold the last seen position. */
struct TrackPoint {
    double t = 0.0;
    double x = 0.0, y = 0.0;
    int charge = 0;
    bool coasted = false;
};

struct VortexTrack {
    int id = -1;
    std::vector<TrackPoint> points;
};

/** t, type in {creation, annihilation, crossing, charge_flip}, location. */
struct TrackEvent {
    double t = 0.0;
    std::string type;
    double x = 0.0, y = 0.0;
};

struct AssociateOptions {
    double v_max = 10.0;             // gate: max credible vortex speed
    int max_coast = 2;               // frames a track may survive unmatched
    double pair_radius = 0.5;        // clustering radius for birth/death events
    double crossing_radius = 0.15;   // opposite-charge approach closer than this = crossing
    double charge_flip_penalty = 0.05;  // assignment cost added for a charge mismatch
    double ambiguity_ratio = 0.1;    // second-best within this fraction of the gate = ambiguous
};

struct TrackingResult {
    std::vector<VortexTrack> tracks;
    std::vector<TrackEvent> events;
    std::vector<double> ambiguous_times;  // frames where an assignment was nearly degenerate
};

/**
 * Frame-to-frame association by exact minimum-cost matching (exhaustive
 * bitmask DP; vortex counts are small). Cost is Euclidean distance, gated at
 * v_max * (time since the track was last seen), plus a small penalty for a
 * charge mismatch; a matched mismatch is recorded as a charge_flip. Unmatched
 * tracks coast up to max_coast frames before being declared dead.
 *
 * Event synthesis: births (beyond the first frame) and deaths are clustered
 * within pair_radius into creation/annihilation events, timed at the midpoint
 * of the straddling frames. An opposite-charge pair approaching below
 * crossing_radius and separating again is a crossing; positional continuity
 * cannot distinguish pass-through from bounce-with-flipped-charges, so a
 * companion charge_flip is recorded at the same point.
 */
TrackingResult track_vortices(const std::vector<DetectionFrame>& frames,
                              const AssociateOptions& opt = {});

/** Per-frame vortex count and total charge, with the basic topological checks. */
struct CountSeries {
    std::vector<double> times;
    std::vector<int> counts;
    std::vector<int> total_charge;
    bool parity_ok = true;          // N >= |Q| and N == Q (mod 2) at every frame
    std::vector<double> charge_change_times;  // frames where total charge moved
};

CountSeries count_series(const std::vector<DetectionFrame>& frames);

/** Trapezoidal time average of the count over [t0, t1]. */
double average_count(const CountSeries& series, double t0, double t1);

}  // namespace gpvortex

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gpvortex/closed_form.hpp"
#include "gpvortex/solver.hpp"
#include "gpvortex/track.hpp"

namespace gpvortex {

inline constexpr const char* kToolName = "gpvortex";
inline constexpr const char* kToolVersion = "1.0.0";

/**
 * One experiment: a vortex configuration, an interaction strength, and a set
 * of engines to run side by side over [0, duration]:
 *   closed_form  - the analytic wave function, rasterised per frame
 *   ritz_basis   - project the t=0 analytic state onto the broadened basis,
 *                  advance the per-mode phases, resynthesize
 *   gpe_numeric  - imprint the vortices on the relaxed ground state and
 *                  integrate the full equation with the split-step scheme
 * Every engine feeds the same detector/tracker, so outputs are comparable.
 */
struct ScenarioConfig {
    std::string name = "scenario";
    VortexFamily family = VortexFamily::single;
    double x0 = 1.0;
    double beta = 0.0;
    std::vector<std::string> engines{"gpe_numeric"};
    double extent = 8.0;
    int points = 256;
    double duration = 6.283185307179586;  // 2 pi
    double output_interval = 0.01;
    double dt = 1e-3;
    double detect_radius = 0.0;  // <= 0 selects 4 * sigma(beta)
    int basis_degree = 12;
    std::string output_dir = "gpvortex-out";
    std::vector<VortexSpec> vortices;  // non-empty overrides the family placement
    bool keep_fields = false;          // also write initial/final field snapshots
    AssociateOptions tracking;
};

/** Strict parse: unknown keys anywhere are an error, defaults fill gaps. */
ScenarioConfig scenario_from_json_text(const std::string& text);
ScenarioConfig load_scenario(const std::string& path);
std::string scenario_to_json_text(const ScenarioConfig& cfg);

/** Everything one engine produced for one scenario. */
struct EngineOutput {
    std::string engine;
    std::vector<DetectionFrame> frames;
    TrackingResult tracking;
    CountSeries counts;
    EvolutionLog log;                 // numeric engine only
    std::optional<double> omega_fit;  // precession fit of the longest track
    double captured_weight = 1.0;     // ritz_basis projection quality
    bool basis_truncated = false;
    ComplexField2D initial_field, final_field;  // filled when keep_fields
};

struct ScenarioResult {
    ScenarioConfig config;
    std::vector<EngineOutput> outputs;
};

ScenarioResult run_scenario(const ScenarioConfig& cfg);

/** Write manifest.json, plot.py and one subdirectory of data files per engine. */
void write_outputs(const ScenarioResult& result);

/**
 * Angular frequency of the longest track about the origin: least-squares
 * slope of its unwrapped azimuth. nullopt when there is no usable track
 * (too few points or the track sits at the centre).
 */
std::optional<double> fit_precession_omega(const TrackingResult& tracking);

/** One numeric run of the precession experiment: a single off-centre vortex
 * orbited for two analytic periods, its frequency fitted from the tracked
 * azimuth. `omega_numeric` is empty when the orbit could not be tracked. */
struct PrecessionRow {
    double x0 = 0.0;
    double beta = 0.0;
    double omega_analytic = 0.0;
    std::optional<double> omega_numeric;
};

/** Least-squares slope of measured frequency against interaction strength at
 * one displacement; empty when any of that displacement's rows is invalid. */
struct PrecessionFit {
    double x0 = 0.0;
    std::optional<double> c;
};

struct PrecessionResult {
    std::vector<PrecessionRow> rows;  // x0-major, beta-minor order
    std::vector<PrecessionFit> fits;  // one per x0
    double coefficient_analytic = 0.0;
};

/**
 * Measure the precession frequency of a single vortex numerically over a grid
 * of displacements and interaction strengths. Each run copies `base` (grid,
 * dt, cadence, tracking), forces the single-vortex family with the given x0
 * and beta, and sets the duration to two analytic periods rounded to the
 * output cadence. Nothing is written to disk. `on_row`, when set, is invoked
 * after each run with that run's row (progress reporting).
 */
PrecessionResult precession_experiment(const std::vector<double>& x0s,
                                       const std::vector<double>& betas,
                                       const ScenarioConfig& base,
                                       const std::function<void(const PrecessionRow&)>& on_row = {});

/** One row of a parameter sweep, one per (value, engine). */
struct SweepRow {
    double value = 0.0;
    std::string engine;
    std::string dir;
    double average_count = 0.0;
    int max_count = 0;
    std::optional<double> omega_fit;
};

/**
 * Run the scenario once per value of `key` ("beta" or "x0"), each point in
 * its own subdirectory of base.output_dir; points execute on up to `workers`
 * threads and results are independent of scheduling order.
 * Writes <output_dir>/sweep_summary.json and returns the rows.
 */
std::vector<SweepRow> run_sweep(const ScenarioConfig& base, const std::string& key,
                                const std::vector<double>& values, int workers);

/**
 * Frame-by-frame comparison of two engine output directories. Position
 * deviations are measured between same-charge matched pairs only; detections
 * without a same-charge partner in the other set are counted as unmatched.
 * Event times are compared per event type (nearest-time pairing).
 */
struct ComparisonReport {
    long frames_compared = 0;
    long count_mismatch_frames = 0;
    int max_count_difference = 0;
    long unmatched_observations = 0;
    double max_position_deviation = 0.0;
    double mean_position_deviation = 0.0;
    long events_compared = 0;
    long unmatched_events = 0;
    double max_event_time_offset = 0.0;
    std::string to_json_text() const;
};

ComparisonReport compare_directories(const std::string& dir_a, const std::string& dir_b);

}  // namespace gpvortex

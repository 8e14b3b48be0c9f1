#pragma once

#include <string>
#include <vector>

#include "gpvortex/solver.hpp"
#include "gpvortex/track.hpp"

namespace gpvortex {

/** Shortest exact decimal (%.17g): identical files on identical runs. */
std::string format_double(double v);

// CSV exports. Columns are fixed; every writer creates parent directories.
// trajectories.csv: t,vortex_index,x,y,charge,family,beta,x0 (real points only)
void write_trajectories_csv(const std::string& path, const TrackingResult& tracking,
                            const std::string& family, double beta, double x0);
// events.csv: t,event_type,x,y
void write_events_csv(const std::string& path, const std::vector<TrackEvent>& events);
// detections.csv: t,x,y,charge,residual
void write_detections_csv(const std::string& path, const std::vector<DetectionFrame>& frames);
// counts.csv: t,N
void write_counts_csv(const std::string& path, const CountSeries& series);
// energy.csv: t,norm,energy (numeric engines)
void write_energy_csv(const std::string& path, const EvolutionLog& log);
// tracks.json: full track list including coasted points
void write_tracks_json(const std::string& path, const TrackingResult& tracking);

}  // namespace gpvortex

#include "gpvortex/output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace gpvortex {

namespace {

std::ofstream open_for_write(const std::string& path) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_trajectories_csv(const std::string& path, const TrackingResult& tracking,
                            const std::string& family, double beta, double x0) {
    auto out = open_for_write(path);
    out << "t,vortex_index,x,y,charge,family,beta,x0\n";
    const std::string tail = "," + family + "," + format_double(beta) + "," + format_double(x0);
    for (const auto& track : tracking.tracks)
        for (const auto& p : track.points) {
            if (p.coasted) continue;
            out << format_double(p.t) << ',' << track.id << ',' << format_double(p.x) << ','
                << format_double(p.y) << ',' << p.charge << tail << '\n';
        }
}

void write_events_csv(const std::string& path, const std::vector<TrackEvent>& events) {
    auto out = open_for_write(path);
    out << "t,event_type,x,y\n";
    for (const auto& e : events)
        out << format_double(e.t) << ',' << e.type << ',' << format_double(e.x) << ','
            << format_double(e.y) << '\n';
}

void write_detections_csv(const std::string& path, const std::vector<DetectionFrame>& frames) {
    auto out = open_for_write(path);
    out << "t,x,y,charge,residual\n";
    for (const auto& f : frames)
        for (const auto& o : f.observations)
            out << format_double(f.t) << ',' << format_double(o.x) << ',' << format_double(o.y)
                << ',' << o.charge << ',' << format_double(o.residual) << '\n';
}

void write_counts_csv(const std::string& path, const CountSeries& series) {
    auto out = open_for_write(path);
    out << "t,N\n";
    for (std::size_t i = 0; i < series.times.size(); ++i)
        out << format_double(series.times[i]) << ',' << series.counts[i] << '\n';
}

void write_energy_csv(const std::string& path, const EvolutionLog& log) {
    auto out = open_for_write(path);
    out << "t,norm,energy\n";
    for (std::size_t i = 0; i < log.times.size(); ++i)
        out << format_double(log.times[i]) << ',' << format_double(log.norms[i]) << ','
            << format_double(log.energies[i]) << '\n';
}

void write_tracks_json(const std::string& path, const TrackingResult& tracking) {
    nlohmann::json root;
    root["tracks"] = nlohmann::json::array();
    for (const auto& track : tracking.tracks) {
        nlohmann::json jt;
        jt["id"] = track.id;
        jt["points"] = nlohmann::json::array();
        for (const auto& p : track.points)
            jt["points"].push_back({{"t", p.t},
                                    {"x", p.x},
                                    {"y", p.y},
                                    {"charge", p.charge},
                                    {"coasted", p.coasted}});
        root["tracks"].push_back(std::move(jt));
    }
    root["ambiguous_times"] = tracking.ambiguous_times;
    auto out = open_for_write(path);
    out << root.dump(2) << '\n';
}

}  // namespace gpvortex

#include "gpvortex/track.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

namespace gpvortex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct LiveTrack {
    int id = -1;
    int charge = 0;
    double x = 0.0, y = 0.0;  // last real (non-coasted) position
    double t_last_real = 0.0;
    int misses = 0;
    // Backdated vanish estimate, filled at the first missed frame.
    double pending_t = 0.0, pending_x = 0.0, pending_y = 0.0;
    std::vector<TrackPoint> points;
};

// Exact minimum-cost assignment over the (tiny) track/observation sets.
// assign[i] = observation index or -1. Falls back to greedy matching if the
// observation count would make the bitmask DP large; real scenes have <= ~8.
std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost,
                                     const std::vector<double>& unmatched_track,
                                     double unmatched_obs, int m) {
    const int T = static_cast<int>(cost.size());
    std::vector<int> assign(T, -1);
    if (m == 0 || T == 0) return assign;

    if (m > 12) {
        std::vector<std::array<double, 3>> edges;  // cost, track, obs
        for (int i = 0; i < T; ++i)
            for (int j = 0; j < m; ++j)
                if (cost[i][j] < kInf) edges.push_back({cost[i][j], double(i), double(j)});
        std::sort(edges.begin(), edges.end());
        std::vector<bool> used_obs(m, false);
        for (const auto& e : edges) {
            const int i = int(e[1]), j = int(e[2]);
            if (assign[i] == -1 && !used_obs[j]) {
                assign[i] = j;
                used_obs[j] = true;
            }
        }
        return assign;
    }

    const int full = 1 << m;
    std::vector<std::vector<double>> dp(T + 1, std::vector<double>(full, 0.0));
    std::vector<std::vector<int>> choice(T, std::vector<int>(full, -1));
    for (int mask = 0; mask < full; ++mask)
        dp[T][mask] = unmatched_obs * (m - __builtin_popcount(mask));
    for (int i = T - 1; i >= 0; --i) {
        for (int mask = 0; mask < full; ++mask) {
            double best = dp[i + 1][mask] + unmatched_track[i];
            int pick = -1;
            for (int j = 0; j < m; ++j) {
                if (mask & (1 << j)) continue;
                if (cost[i][j] >= kInf) continue;
                const double c = cost[i][j] + dp[i + 1][mask | (1 << j)];
                if (c < best) {
                    best = c;
                    pick = j;
                }
            }
            dp[i][mask] = best;
            choice[i][mask] = pick;
        }
    }
    int mask = 0;
    for (int i = 0; i < T; ++i) {
        const int j = choice[i][mask];
        assign[i] = j;
        if (j >= 0) mask |= (1 << j);
    }
    return assign;
}

// Union-find clustering of points within `radius` (and optionally a time gap).
std::vector<int> cluster_points(const std::vector<std::array<double, 3>>& pts, double radius,
                                double max_dt) {
    const int n = static_cast<int>(pts.size());
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (std::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]) > radius) continue;
            if (max_dt > 0.0 && std::abs(pts[i][2] - pts[j][2]) > max_dt) continue;
            parent[find(i)] = find(j);
        }
    for (int i = 0; i < n; ++i) parent[i] = find(i);
    return parent;
}

struct Episode {
    double min_sep = kInf;
    double t_min = 0.0, cx = 0.0, cy = 0.0;
};

}  // namespace

TrackingResult track_vortices(const std::vector<DetectionFrame>& frames,
                              const AssociateOptions& opt) {
    TrackingResult result;
    if (frames.empty()) return result;
    if (!(opt.v_max > 0.0)) throw std::invalid_argument("track_vortices: v_max must be positive");

    std::vector<LiveTrack> live;
    std::vector<VortexTrack> finished;
    std::map<std::pair<int, int>, Episode> episodes;
    int next_id = 0;

    auto start_track = [&](double t, const VortexObservation& o) {
        LiveTrack tr;
        tr.id = next_id++;
        tr.charge = o.charge;
        tr.x = o.x;
        tr.y = o.y;
        tr.t_last_real = t;
        tr.points.push_back({t, o.x, o.y, o.charge, false});
        live.push_back(std::move(tr));
    };

    auto finish_track = [&](LiveTrack& tr) {
        while (!tr.points.empty() && tr.points.back().coasted) tr.points.pop_back();
        VortexTrack out;
        out.id = tr.id;
        out.points = std::move(tr.points);
        finished.push_back(std::move(out));
        for (auto it = episodes.begin(); it != episodes.end();)
            if (it->first.first == tr.id || it->first.second == tr.id)
                it = episodes.erase(it);
            else
                ++it;
    };

    for (const auto& o : frames[0].observations) start_track(frames[0].t, o);

    for (std::size_t k = 1; k < frames.size(); ++k) {
        const double t = frames[k].t;
        const double t_prev = frames[k - 1].t;
        const double dt_frame = t - t_prev;
        if (!(dt_frame > 0.0))
            throw std::invalid_argument("track_vortices: frame times must be increasing");
        const auto& obs = frames[k].observations;
        const int m = static_cast<int>(obs.size());
        const int T = static_cast<int>(live.size());

        std::vector<std::vector<double>> cost(T, std::vector<double>(m, kInf));
        std::vector<double> gate(T, 0.0);
        for (int i = 0; i < T; ++i) {
            gate[i] = opt.v_max * (t - live[i].t_last_real);
            for (int j = 0; j < m; ++j) {
                const double d = std::hypot(obs[j].x - live[i].x, obs[j].y - live[i].y);
                if (d > gate[i]) continue;
                cost[i][j] = d + (obs[j].charge != live[i].charge ? opt.charge_flip_penalty : 0.0);
            }
        }
        const double unmatched_obs = opt.v_max * dt_frame;
        const std::vector<int> assign = min_cost_assignment(cost, gate, unmatched_obs, m);

        // Near-degenerate alternatives are flagged, not silently resolved.
        bool frame_ambiguous = false;
        for (int i = 0; i < T && !frame_ambiguous; ++i) {
            if (assign[i] < 0) continue;
            for (int j = 0; j < m; ++j) {
                if (j == assign[i] || cost[i][j] >= kInf) continue;
                if (cost[i][j] < cost[i][assign[i]] + opt.ambiguity_ratio * unmatched_obs) {
                    frame_ambiguous = true;
                    break;
                }
            }
        }
        if (frame_ambiguous) result.ambiguous_times.push_back(t);

        std::vector<bool> obs_used(m, false);
        std::vector<LiveTrack*> confirmed_dead;
        for (int i = 0; i < T; ++i) {
            LiveTrack& tr = live[i];
            if (assign[i] >= 0) {
                const auto& o = obs[assign[i]];
                obs_used[assign[i]] = true;
                if (o.charge != tr.charge) {
                    result.events.push_back({t, "charge_flip", o.x, o.y});
                    tr.charge = o.charge;
                }
                tr.x = o.x;
                tr.y = o.y;
                tr.t_last_real = t;
                tr.misses = 0;
                tr.points.push_back({t, o.x, o.y, o.charge, false});
            } else {
                if (tr.misses == 0) {
                    tr.pending_t = 0.5 * (t_prev + t);
                    tr.pending_x = tr.x;
                    tr.pending_y = tr.y;
                }
                ++tr.misses;
                tr.points.push_back({t, tr.x, tr.y, tr.charge, true});
                if (tr.misses > opt.max_coast) confirmed_dead.push_back(&tr);
            }
        }

        // Deaths confirmed this frame, clustered into annihilation events.
        if (!confirmed_dead.empty()) {
            std::vector<std::array<double, 3>> pts;
            for (const auto* tr : confirmed_dead)
                pts.push_back({tr->pending_x, tr->pending_y, tr->pending_t});
            const auto parent = cluster_points(pts, opt.pair_radius, 1.5 * dt_frame);
            std::map<int, std::vector<int>> groups;
            for (int i = 0; i < (int)pts.size(); ++i) groups[parent[i]].push_back(i);
            for (const auto& [root, members] : groups) {
                double cx = 0, cy = 0, ct = 0;
                for (int i : members) {
                    cx += pts[i][0];
                    cy += pts[i][1];
                    ct += pts[i][2];
                }
                const double n = static_cast<double>(members.size());
                result.events.push_back({ct / n, "annihilation", cx / n, cy / n});
            }
        }

        // Births: unmatched observations open new tracks; clusters of births
        // after the first frame are creation events, backdated half a frame.
        std::vector<std::array<double, 3>> births;
        for (int j = 0; j < m; ++j)
            if (!obs_used[j]) {
                start_track(t, obs[j]);
                births.push_back({obs[j].x, obs[j].y, 0.5 * (t_prev + t)});
            }
        if (!births.empty()) {
            const auto parent = cluster_points(births, opt.pair_radius, 0.0);
            std::map<int, std::vector<int>> groups;
            for (int i = 0; i < (int)births.size(); ++i) groups[parent[i]].push_back(i);
            for (const auto& [root, members] : groups) {
                double cx = 0, cy = 0, ct = 0;
                for (int i : members) {
                    cx += births[i][0];
                    cy += births[i][1];
                    ct += births[i][2];
                }
                const double n = static_cast<double>(members.size());
                result.events.push_back({ct / n, "creation", cx / n, cy / n});
            }
        }

        // Retire dead tracks before the crossing scan.
        for (auto it = live.begin(); it != live.end();)
            if (it->misses > opt.max_coast) {
                finish_track(*it);
                it = live.erase(it);
            } else {
                ++it;
            }

        // Opposite-charge close approaches: open an episode below the radius,
        // close it (and emit the events) once the pair separates again.
        auto prev_position = [](const LiveTrack& tr, double& px, double& py) {
            if (tr.points.size() < 2) return false;
            const auto& p = tr.points[tr.points.size() - 2];
            px = p.x;
            py = p.y;
            return true;
        };
        for (std::size_t a = 0; a < live.size(); ++a)
            for (std::size_t b = a + 1; b < live.size(); ++b) {
                const auto key = std::make_pair(std::min(live[a].id, live[b].id),
                                                std::max(live[a].id, live[b].id));
                const double sep = std::hypot(live[a].x - live[b].x, live[a].y - live[b].y);
                // Opening an episode requires an approach from above: a pair
                // born inside the radius (a creation burst) is not a crossing.
                double pax, pay, pbx, pby;
                const bool approached =
                    prev_position(live[a], pax, pay) && prev_position(live[b], pbx, pby) &&
                    std::hypot(pax - pbx, pay - pby) >= opt.crossing_radius;
                auto it = episodes.find(key);
                if (it == episodes.end()) {
                    if (approached && live[a].charge * live[b].charge < 0 &&
                        sep < opt.crossing_radius) {
                        Episode e;
                        e.min_sep = sep;
                        e.t_min = t;
                        e.cx = 0.5 * (live[a].x + live[b].x);
                        e.cy = 0.5 * (live[a].y + live[b].y);
                        episodes[key] = e;
                    }
                } else if (sep < opt.crossing_radius) {
                    if (sep < it->second.min_sep) {
                        it->second.min_sep = sep;
                        it->second.t_min = t;
                        it->second.cx = 0.5 * (live[a].x + live[b].x);
                        it->second.cy = 0.5 * (live[a].y + live[b].y);
                    }
                } else {
                    // A crossing cannot be told apart from a bounce with
                    // flipped charges; both readings are recorded.
                    result.events.push_back({it->second.t_min, "crossing", it->second.cx,
                                             it->second.cy});
                    result.events.push_back({it->second.t_min, "charge_flip", it->second.cx,
                                             it->second.cy});
                    episodes.erase(it);
                }
            }
    }

    for (auto& tr : live) finish_track(tr);
    std::sort(finished.begin(), finished.end(),
              [](const VortexTrack& a, const VortexTrack& b) { return a.id < b.id; });
    result.tracks = std::move(finished);
    std::stable_sort(result.events.begin(), result.events.end(),
                     [](const TrackEvent& a, const TrackEvent& b) { return a.t < b.t; });
    return result;
}

CountSeries count_series(const std::vector<DetectionFrame>& frames) {
    CountSeries s;
    for (const auto& f : frames) {
        int q = 0;
        for (const auto& o : f.observations) q += o.charge;
        const int n = static_cast<int>(f.observations.size());
        s.times.push_back(f.t);
        s.counts.push_back(n);
        s.total_charge.push_back(q);
        if (n < std::abs(q) || ((n - q) % 2 + 2) % 2 != 0) s.parity_ok = false;
        if (s.total_charge.size() >= 2 && q != s.total_charge[s.total_charge.size() - 2])
            s.charge_change_times.push_back(f.t);
    }
    return s;
}

double average_count(const CountSeries& series, double t0, double t1) {
    if (!(t1 > t0)) throw std::invalid_argument("average_count: need t1 > t0");
    double integral = 0.0, covered = 0.0;
    bool any = false;
    for (std::size_t i = 0; i + 1 < series.times.size(); ++i) {
        const double a = std::max(series.times[i], t0);
        const double b = std::min(series.times[i + 1], t1);
        if (b <= a) continue;
        // Linear interpolation of the count between samples (trapezoid rule).
        const double ta = series.times[i], tb = series.times[i + 1];
        const double na = series.counts[i], nb = series.counts[i + 1];
        auto value_at = [&](double tt) { return na + (nb - na) * (tt - ta) / (tb - ta); };
        integral += 0.5 * (value_at(a) + value_at(b)) * (b - a);
        covered += b - a;
        any = true;
    }
    if (!any) throw std::invalid_argument("average_count: window does not overlap the series");
    return integral / covered;
}

}  // namespace gpvortex

// gpvortex: vortex dynamics in a trapped 2D condensate.
//
//   run <scenario.json>       run a scenario (analytic / basis / numeric engines)
//   sweep <scenario.json>     run it across a list of beta or x0 values
//   compare <dirA> <dirB>     frame-by-frame comparison of two engine outputs
//   detect <field-file>       list the vortices of a stored field
//
// Exit codes: 0 success, 2 configuration error, 3 runtime failure. Failures
// also leave an error.json manifest in the output directory (or the CWD).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gpvortex/detect.hpp"
#include "gpvortex/field_io.hpp"
#include "gpvortex/output.hpp"
#include "gpvortex/scenario.hpp"

namespace {

using gpvortex::ScenarioConfig;
using nlohmann::json;

void write_error_manifest(const std::string& dir, const std::string& type,
                          const std::string& message) {
    try {
        std::filesystem::create_directories(dir.empty() ? "." : dir);
        std::ofstream out(std::filesystem::path(dir.empty() ? "." : dir) / "error.json");
        json j;
        j["type"] = type;
        j["error"] = message;
        out << j.dump(2) << '\n';
    } catch (...) {
        // The manifest is best-effort; the exit code still reports the failure.
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open scenario file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Apply "a.b.c=value" onto a JSON document; the value is parsed as JSON when
// possible so numbers/bools/arrays work, otherwise taken as a bare string.
void apply_override(json& doc, const std::string& spec) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string::npos || eq == 0)
        throw std::invalid_argument("--set expects key.path=value, got: " + spec);
    const std::string path = spec.substr(0, eq);
    const std::string value_text = spec.substr(eq + 1);
    json value;
    try {
        value = json::parse(value_text);
    } catch (const json::exception&) {
        value = value_text;
    }
    json* node = &doc;
    std::size_t start = 0;
    for (;;) {
        const std::size_t dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos
                                                                            : dot - start);
        if (key.empty()) throw std::invalid_argument("empty key segment in --set " + spec);
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

ScenarioConfig load_with_overrides(const std::string& path, const std::vector<std::string>& sets,
                                   const std::string& output_override) {
    json doc = json::parse(read_text_file(path));
    for (const auto& s : sets) apply_override(doc, s);
    if (!output_override.empty()) doc["output_dir"] = output_override;
    return gpvortex::scenario_from_json_text(doc.dump());
}

// "beta=0:1:0.1" -> key "beta", values 0, 0.1, ..., 1; also accepts a comma
// list "x0=0.5,1,1.5" or a single value.
std::pair<std::string, std::vector<double>> parse_param(const std::string& spec) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string::npos || eq == 0)
        throw std::invalid_argument("--param expects key=start:stop:step or key=v1,v2,..., got: " +
                                    spec);
    const std::string key = spec.substr(0, eq);
    const std::string rest = spec.substr(eq + 1);
    std::vector<double> values;
    if (rest.find(':') != std::string::npos) {
        double start, stop, step;
        char colon1, colon2;
        std::istringstream ss(rest);
        if (!(ss >> start >> colon1 >> stop >> colon2 >> step) || colon1 != ':' || colon2 != ':')
            throw std::invalid_argument("bad range in --param: " + rest);
        if (!(step > 0.0) || stop < start)
            throw std::invalid_argument("--param range needs stop >= start and step > 0");
        for (double v = start; v <= stop + 0.5 * step; v += step) values.push_back(v);
    } else {
        std::istringstream ss(rest);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            values.push_back(std::stod(item));
        }
    }
    if (values.empty()) throw std::invalid_argument("--param produced no values: " + spec);
    return {key, values};
}

int default_workers() {
    if (const char* env = std::getenv("GPVORTEX_WORKERS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

void print_run_summary(const gpvortex::ScenarioResult& result) {
    for (const auto& eo : result.outputs) {
        int max_count = 0;
        for (int c : eo.counts.counts) max_count = std::max(max_count, c);
        std::cout << eo.engine << ": " << eo.frames.size() << " frames, max N = " << max_count
                  << ", events = " << eo.tracking.events.size();
        if (eo.omega_fit) std::cout << ", omega_fit = " << *eo.omega_fit;
        std::cout << '\n';
    }
    std::cout << "outputs in " << result.config.output_dir << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vortex dynamics in a trapped two-dimensional condensate"};
    app.require_subcommand(1);

    std::string scenario_path, output_override, param_spec;
    std::vector<std::string> sets;
    int workers = default_workers();

    CLI::App* run = app.add_subcommand("run", "run a scenario described by a JSON file");
    run->add_option("scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--output", output_override, "override the output directory");
    run->add_option("--set", sets, "override a config key, e.g. --set grid.points=128");

    CLI::App* sweep = app.add_subcommand("sweep", "run a scenario over a parameter list");
    sweep->add_option("scenario", scenario_path, "scenario JSON file")->required();
    sweep->add_option("--param", param_spec, "key=start:stop:step or key=v1,v2,... (beta or x0)")
        ->required();
    sweep->add_option("--workers", workers, "concurrent sweep points (env GPVORTEX_WORKERS)");
    sweep->add_option("--output", output_override, "override the output directory");
    sweep->add_option("--set", sets, "override a config key before sweeping");

    std::string dir_a, dir_b;
    CLI::App* compare = app.add_subcommand("compare", "compare two engine output directories");
    compare->add_option("dirA", dir_a, "first engine directory")->required();
    compare->add_option("dirB", dir_b, "second engine directory")->required();

    std::string field_path;
    double detect_radius = 0.0;
    CLI::App* detect = app.add_subcommand("detect", "list the vortices of a stored field");
    detect->add_option("field", field_path, "field file written by a scenario run")->required();
    detect->add_option("--radius", detect_radius, "detection disc radius (default 0.45*extent)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    std::string manifest_dir = ".";
    try {
        try {
            if (*run) {
                ScenarioConfig cfg = load_with_overrides(scenario_path, sets, output_override);
                manifest_dir = cfg.output_dir;
                const auto result = gpvortex::run_scenario(cfg);
                gpvortex::write_outputs(result);
                print_run_summary(result);
            } else if (*sweep) {
                ScenarioConfig cfg = load_with_overrides(scenario_path, sets, output_override);
                manifest_dir = cfg.output_dir;
                const auto [key, values] = parse_param(param_spec);
                const auto rows = gpvortex::run_sweep(cfg, key, values, workers);
                for (const auto& row : rows)
                    std::cout << key << " = " << row.value << "  engine = " << row.engine
                              << "  <N> = " << row.average_count
                              << "  max N = " << row.max_count << '\n';
                std::cout << "summary in " << cfg.output_dir << "/sweep_summary.json\n";
            } else if (*compare) {
                const auto report = gpvortex::compare_directories(dir_a, dir_b);
                std::cout << report.to_json_text() << '\n';
            } else if (*detect) {
                const auto field = gpvortex::read_field(field_path);
                const auto obs =
                    gpvortex::detect_vortices(field, gpvortex::DetectOptions{detect_radius});
                std::cout << "t,x,y,charge,residual\n";
                for (const auto& o : obs)
                    std::cout << gpvortex::format_double(field.time) << ','
                              << gpvortex::format_double(o.x) << ','
                              << gpvortex::format_double(o.y) << ',' << o.charge << ','
                              << gpvortex::format_double(o.residual) << '\n';
            }
        } catch (const json::exception& e) {
            throw std::invalid_argument(std::string("JSON error: ") + e.what());
        }
    } catch (const std::invalid_argument& e) {
        write_error_manifest(manifest_dir, "config", e.what());
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        write_error_manifest(manifest_dir, "runtime", e.what());
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}

#include "qlab/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qlab {

using nlohmann::json;

double convert_time(double t_ms, double j_hz) {
    if (!(j_hz > 0.0)) throw ConfigError("convert_time: J/(2pi) must be positive");
    return 2.0 * 3.14159265358979323846 * j_hz * t_ms / 1000.0;
}

std::vector<double> ExperimentConfig::dimensionless_times() const {
    std::vector<double> result;
    result.reserve(times.values.size());
    for (double t : times.values) {
        if (times.unit == TimeUnit::milliseconds) {
            if (!j_hz) throw ConfigError("/times: unit \"ms\" requires /model/j_hz");
            result.push_back(convert_time(t, *j_hz));
        } else {
            result.push_back(t);
        }
    }
    return result;
}

void ExperimentConfig::validate() const {
    if (sites < 1) throw ConfigError("/model/sites: must be >= 1");
    if (particles < 0) throw ConfigError("/model/particles: must be >= 0");
    if (!(j_over_u > 0.0)) throw ConfigError("/model/j_over_u: must be > 0");
    if (j_hz && !(*j_hz > 0.0)) throw ConfigError("/model/j_hz: must be > 0");
    if (times.values.empty()) throw ConfigError("/times: no time points resolved");
    for (std::size_t i = 1; i < times.values.size(); ++i) {
        if (times.values[i] < times.values[i - 1]) {
            throw ConfigError("/times: values must be non-decreasing");
        }
    }
    for (int v : volumes) {
        if (v < 1 || v > sites) throw ConfigError("/volumes: entries must be in 1..sites");
    }
    for (const auto& subsystem : subsystems) {
        if (subsystem.empty()) throw ConfigError("/subsystems: empty subsystem");
        for (int s : subsystem) {
            if (s < 0 || s >= sites) throw ConfigError("/subsystems: site index out of range");
        }
    }
    if (ensembles.microcanonical_window <= 0.0) {
        throw ConfigError("/ensembles/microcanonical_window: must be > 0");
    }
    if (ensembles.gc_number_target_delta <= 0.0 ||
        ensembles.gc_number_target_delta >= particles) {
        throw ConfigError("/ensembles/gc_number_target_delta: must be in (0, N)");
    }
    if (interference.shots < 1) throw ConfigError("/interference/shots: must be >= 1");
    if (interference.parity_flip_probability < 0.0 ||
        interference.parity_flip_probability > 1.0) {
        throw ConfigError("/interference/parity_flip_probability: must be in [0, 1]");
    }
    if (interference.bootstrap_resamples < 1) {
        throw ConfigError("/interference/bootstrap_resamples: must be >= 1");
    }
    if (!(interference.purity_floor > 0.0)) {
        throw ConfigError("/interference/purity_floor: must be > 0");
    }
    for (const auto& subsystem : interference.subsystems) {
        if (subsystem.empty()) throw ConfigError("/interference/subsystems: empty subsystem");
        for (int s : subsystem) {
            if (s < 0 || s >= sites) {
                throw ConfigError("/interference/subsystems: site index out of range");
            }
        }
    }
    if (threads < 0) throw ConfigError("/threads: must be >= 0 (0 = auto)");
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ConfigError("config error at " + path + ": " + message);
}

void expect_keys(const json& node, const std::string& path,
                 const std::vector<std::string>& allowed) {
    for (const auto& [key, value] : node.items()) {
        bool known = false;
        for (const auto& name : allowed) known = known || key == name;
        if (!known) fail(path + "/" + key, "unknown key");
    }
}

double number_at(const json& node, const std::string& path) {
    if (!node.is_number()) fail(path, "expected a number");
    return node.get<double>();
}

int integer_at(const json& node, const std::string& path) {
    if (!node.is_number_integer()) fail(path, "expected an integer");
    return node.get<int>();
}

std::vector<std::vector<int>> site_sets_at(const json& node, const std::string& path) {
    if (!node.is_array()) fail(path, "expected an array of site lists");
    std::vector<std::vector<int>> sets;
    for (std::size_t i = 0; i < node.size(); ++i) {
        const auto& entry = node[i];
        const std::string entry_path = path + "/" + std::to_string(i);
        if (!entry.is_array()) fail(entry_path, "expected a list of site indices");
        std::vector<int> sites;
        for (std::size_t j = 0; j < entry.size(); ++j) {
            sites.push_back(integer_at(entry[j], entry_path + "/" + std::to_string(j)));
        }
        sets.push_back(std::move(sites));
    }
    return sets;
}

TimeGrid parse_times(const json& node) {
    TimeGrid grid;
    if (!node.is_object()) fail("/times", "expected an object");
    expect_keys(node, "/times", {"unit", "values", "start", "stop", "count"});
    const std::string unit = node.value("unit", "tJ");
    if (unit == "tJ") {
        grid.unit = TimeUnit::dimensionless;
    } else if (unit == "ms") {
        grid.unit = TimeUnit::milliseconds;
    } else {
        fail("/times/unit", "expected \"tJ\" or \"ms\", got \"" + unit + "\"");
    }

    const bool has_values = node.contains("values");
    const bool has_range = node.contains("start") || node.contains("stop") || node.contains("count");
    if (has_values == has_range) {
        fail("/times", "exactly one of \"values\" or \"start\"/\"stop\"/\"count\" must be given");
    }
    if (has_values) {
        if (!node["values"].is_array()) fail("/times/values", "expected an array");
        for (std::size_t i = 0; i < node["values"].size(); ++i) {
            grid.values.push_back(
                number_at(node["values"][i], "/times/values/" + std::to_string(i)));
        }
    } else {
        if (!node.contains("start") || !node.contains("stop") || !node.contains("count")) {
            fail("/times", "range mode needs all of \"start\", \"stop\", \"count\"");
        }
        const double start = number_at(node["start"], "/times/start");
        const double stop = number_at(node["stop"], "/times/stop");
        const int count = integer_at(node["count"], "/times/count");
        if (count < 1) fail("/times/count", "must be >= 1");
        if (stop < start) fail("/times/stop", "must be >= start");
        for (int k = 0; k < count; ++k) {
            grid.values.push_back(count == 1 ? start
                                             : start + (stop - start) * k / (count - 1));
        }
    }
    return grid;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config error at /: expected an object");
    expect_keys(root, "",
                {"model", "times", "volumes", "subsystems", "partition_mode",
                 "entropy_offset_per_site", "ensembles", "interference", "seed", "output_dir",
                 "threads"});

    ExperimentConfig config;

    if (root.contains("model")) {
        const auto& model = root["model"];
        if (!model.is_object()) fail("/model", "expected an object");
        expect_keys(model, "/model", {"sites", "particles", "j_over_u", "j_hz"});
        if (model.contains("sites")) config.sites = integer_at(model["sites"], "/model/sites");
        if (model.contains("particles")) {
            config.particles = integer_at(model["particles"], "/model/particles");
        }
        if (model.contains("j_over_u")) {
            config.j_over_u = number_at(model["j_over_u"], "/model/j_over_u");
        }
        if (model.contains("j_hz")) {
            if (model["j_hz"].is_null()) {
                config.j_hz.reset();
            } else {
                config.j_hz = number_at(model["j_hz"], "/model/j_hz");
            }
        }
    }

    if (root.contains("times")) {
        config.times = parse_times(root["times"]);
    } else {
        config.times.unit = TimeUnit::dimensionless;
        config.times.values.clear();
        for (int k = 0; k < 41; ++k) config.times.values.push_back(8.294 * k / 40.0);
    }

    if (root.contains("volumes")) {
        if (!root["volumes"].is_array()) fail("/volumes", "expected an array");
        config.volumes.clear();
        for (std::size_t i = 0; i < root["volumes"].size(); ++i) {
            config.volumes.push_back(
                integer_at(root["volumes"][i], "/volumes/" + std::to_string(i)));
        }
    }

    if (root.contains("subsystems")) {
        config.subsystems = site_sets_at(root["subsystems"], "/subsystems");
    }
    if (config.subsystems.empty()) {
        for (int s = 0; s < config.sites; ++s) config.subsystems.push_back({s});
    }

    if (root.contains("partition_mode")) {
        const std::string mode = root["partition_mode"].get<std::string>();
        if (mode == "contiguous") {
            config.partition_mode = PartitionMode::contiguous;
        } else if (mode == "all_subsets") {
            config.partition_mode = PartitionMode::all_subsets;
        } else {
            fail("/partition_mode", "expected \"contiguous\" or \"all_subsets\"");
        }
    }

    if (root.contains("entropy_offset_per_site")) {
        config.entropy_offset_per_site =
            number_at(root["entropy_offset_per_site"], "/entropy_offset_per_site");
    }

    if (root.contains("ensembles")) {
        const auto& node = root["ensembles"];
        if (!node.is_object()) fail("/ensembles", "expected an object");
        expect_keys(node, "/ensembles", {"microcanonical_window", "gc_number_target_delta"});
        if (node.contains("microcanonical_window")) {
            config.ensembles.microcanonical_window =
                number_at(node["microcanonical_window"], "/ensembles/microcanonical_window");
        }
        if (node.contains("gc_number_target_delta")) {
            config.ensembles.gc_number_target_delta =
                number_at(node["gc_number_target_delta"], "/ensembles/gc_number_target_delta");
        }
    }

    if (root.contains("interference")) {
        const auto& node = root["interference"];
        if (!node.is_object()) fail("/interference", "expected an object");
        expect_keys(node, "/interference",
                    {"shots", "parity_flip_probability", "bootstrap_resamples", "purity_floor",
                     "subsystems", "times"});
        if (node.contains("shots")) {
            config.interference.shots = integer_at(node["shots"], "/interference/shots");
        }
        if (node.contains("parity_flip_probability")) {
            config.interference.parity_flip_probability = number_at(
                node["parity_flip_probability"], "/interference/parity_flip_probability");
        }
        if (node.contains("bootstrap_resamples")) {
            config.interference.bootstrap_resamples =
                integer_at(node["bootstrap_resamples"], "/interference/bootstrap_resamples");
        }
        if (node.contains("purity_floor")) {
            config.interference.purity_floor =
                number_at(node["purity_floor"], "/interference/purity_floor");
        }
        if (node.contains("subsystems")) {
            config.interference.subsystems =
                site_sets_at(node["subsystems"], "/interference/subsystems");
        }
        if (node.contains("times")) {
            if (!node["times"].is_array()) fail("/interference/times", "expected an array");
            for (std::size_t i = 0; i < node["times"].size(); ++i) {
                config.interference.times.push_back(
                    number_at(node["times"][i], "/interference/times/" + std::to_string(i)));
            }
        }
    }
    if (config.interference.subsystems.empty()) {
        std::vector<int> all;
        for (int s = 0; s < config.sites; ++s) all.push_back(s);
        config.interference.subsystems.push_back(all);
    }
    if (config.interference.times.empty()) {
        config.interference.times.push_back(8.294);
    }

    if (root.contains("seed")) {
        if (!root["seed"].is_number_integer() && !root["seed"].is_number_unsigned()) {
            fail("/seed", "expected an integer");
        }
        config.seed = root["seed"].get<std::uint64_t>();
    }
    if (root.contains("output_dir")) config.output_dir = root["output_dir"].get<std::string>();
    if (root.contains("threads")) config.threads = integer_at(root["threads"], "/threads");

    config.validate();
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string config_to_json(const ExperimentConfig& config) {
    json root;
    root["model"]["sites"] = config.sites;
    root["model"]["particles"] = config.particles;
    root["model"]["j_over_u"] = config.j_over_u;
    if (config.j_hz) {
        root["model"]["j_hz"] = *config.j_hz;
    } else {
        root["model"]["j_hz"] = nullptr;
    }
    root["times"]["unit"] = config.times.unit == TimeUnit::milliseconds ? "ms" : "tJ";
    root["times"]["values"] = config.times.values;
    root["volumes"] = config.volumes;
    root["subsystems"] = config.subsystems;
    root["partition_mode"] =
        config.partition_mode == PartitionMode::contiguous ? "contiguous" : "all_subsets";
    root["entropy_offset_per_site"] = config.entropy_offset_per_site;
    root["ensembles"]["microcanonical_window"] = config.ensembles.microcanonical_window;
    root["ensembles"]["gc_number_target_delta"] = config.ensembles.gc_number_target_delta;
    root["interference"]["shots"] = config.interference.shots;
    root["interference"]["parity_flip_probability"] = config.interference.parity_flip_probability;
    root["interference"]["bootstrap_resamples"] = config.interference.bootstrap_resamples;
    root["interference"]["purity_floor"] = config.interference.purity_floor;
    root["interference"]["subsystems"] = config.interference.subsystems;
    root["interference"]["times"] = config.interference.times;
    if (config.seed) {
        root["seed"] = *config.seed;
    } else {
        root["seed"] = nullptr;
    }
    root["output_dir"] = config.output_dir;
    root["threads"] = config.threads;
    return root.dump(2);
}

}  // namespace qlab

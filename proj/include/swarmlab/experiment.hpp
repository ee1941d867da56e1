#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "swarmlab/errors.hpp"
#include "swarmlab/graph.hpp"
#include "swarmlab/pso.hpp"
#include "swarmlab/routing.hpp"
#include "swarmlab/swarm.hpp"

#ifndef SWARMLAB_VERSION
#define SWARMLAB_VERSION "0.0.0"
#endif

namespace swarmlab {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Digests
// ---------------------------------------------------------------------------

// FNV-1a, 64-bit. Not cryptographic; it only has to tell identical artifact
// bytes from different ones.
[[nodiscard]] inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

[[nodiscard]] inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Config schema
// ---------------------------------------------------------------------------

enum class ExperimentKind { route, swarm, sweep, pso };

[[nodiscard]] inline std::string_view kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::route: return "route";
        case ExperimentKind::swarm: return "swarm";
        case ExperimentKind::sweep: return "sweep";
        case ExperimentKind::pso: return "pso";
    }
    throw ValidationError("unknown experiment kind");
}

struct RouteSpec {
    std::filesystem::path graph_file;
    RoutingConfig config;
};

struct SwarmSpec {
    ScenarioConfig config;
    std::optional<std::filesystem::path> topology_file;
};

struct SweepSpec {
    ScenarioConfig config;
    std::optional<std::filesystem::path> topology_file;
    std::vector<double> levels;
    std::vector<std::uint64_t> seeds;
};

struct PsoSpec {
    PsoConfig config;
    ObjectiveSpec objective;
};

/**
 * One experiment: a kind, an explicit seed, input paths, the kind-specific
 * parameter block, and the output directory. parse_config materializes
 * every default, so echo() round-trips through parse_config unchanged in
 * meaning.
 */
struct ExperimentConfig {
    ExperimentKind kind{ExperimentKind::route};
    std::uint64_t seed{0};
    std::filesystem::path output{"out"};
    std::variant<RouteSpec, SwarmSpec, SweepSpec, PsoSpec> spec{RouteSpec{}};

    [[nodiscard]] json echo() const;
};

namespace cfg {

inline void check_keys(const json& obj, std::span<const std::string_view> allowed,
                       const std::string& context) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ValidationError(context + ": unknown field '" + key + "'");
        }
    }
}

inline void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                       const std::string& context) {
    check_keys(obj, std::span<const std::string_view>(allowed.begin(), allowed.size()), context);
}

[[nodiscard]] inline double get_double(const json& obj, const std::string& field, double def) {
    if (!obj.contains(field)) return def;
    if (!obj[field].is_number()) throw ValidationError("field '" + field + "' must be a number");
    return obj[field].get<double>();
}

[[nodiscard]] inline int get_int(const json& obj, const std::string& field, int def) {
    if (!obj.contains(field)) return def;
    if (!obj[field].is_number_integer()) {
        throw ValidationError("field '" + field + "' must be an integer");
    }
    return obj[field].get<int>();
}

[[nodiscard]] inline bool get_bool(const json& obj, const std::string& field, bool def) {
    if (!obj.contains(field)) return def;
    if (!obj[field].is_boolean()) throw ValidationError("field '" + field + "' must be a boolean");
    return obj[field].get<bool>();
}

[[nodiscard]] inline std::string get_string(const json& obj, const std::string& field,
                                            const std::string& def) {
    if (!obj.contains(field)) return def;
    if (!obj[field].is_string()) throw ValidationError("field '" + field + "' must be a string");
    return obj[field].get<std::string>();
}

[[nodiscard]] inline std::string require_string(const json& obj, const std::string& field) {
    if (!obj.contains(field)) throw ValidationError("missing required field '" + field + "'");
    if (!obj[field].is_string()) throw ValidationError("field '" + field + "' must be a string");
    return obj[field].get<std::string>();
}

[[nodiscard]] inline Vec2 get_vec2(const json& obj, const std::string& field, Vec2 def) {
    if (!obj.contains(field)) return def;
    const json& v = obj[field];
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw ValidationError("field '" + field + "' must be an [x, y] pair");
    }
    return Vec2{v[0].get<double>(), v[1].get<double>()};
}

[[nodiscard]] inline std::filesystem::path resolve(const std::filesystem::path& p,
                                                   const std::filesystem::path& base_dir) {
    if (p.is_absolute()) return p.lexically_normal();
    return (base_dir / p).lexically_normal();
}

inline ControlParams parse_control(const json& obj) {
    ControlParams c;
    c.p = get_double(obj, "p", c.p);
    c.agefactor = get_double(obj, "agefactor", c.agefactor);
    c.delta = get_double(obj, "delta", c.delta);
    c.alpha = get_double(obj, "alpha", c.alpha);
    c.beta = get_double(obj, "beta", c.beta);
    return c;
}

inline RouteSpec parse_route(const json& top, const json& block,
                             const std::filesystem::path& base_dir) {
    check_keys(block, {"source", "destination", "n_ants", "iterations", "p", "agefactor",
                       "delta", "alpha", "beta", "update_mode", "max_walk_length",
                       "reinforce_shortest", "tau_max", "initial_pheromone"},
               "route block");
    RouteSpec spec;
    spec.graph_file = resolve(require_string(top, "graph"), base_dir);
    RoutingConfig& c = spec.config;
    c.source = require_string(block, "source");
    c.destination = require_string(block, "destination");
    c.n_ants = get_int(block, "n_ants", c.n_ants);
    c.iterations = get_int(block, "iterations", c.iterations);
    c.control = parse_control(block);
    c.update_mode = parse_update_mode(get_string(block, "update_mode",
                                                 std::string(update_mode_name(c.update_mode))));
    c.max_walk_length = get_int(block, "max_walk_length", c.max_walk_length);
    c.reinforce_shortest_path = get_bool(block, "reinforce_shortest", c.reinforce_shortest_path);
    c.tau_max = get_double(block, "tau_max", c.tau_max);
    c.initial_pheromone = get_double(block, "initial_pheromone", c.initial_pheromone);
    return spec;
}

inline ScenarioConfig parse_scenario(const json& block, const char* context) {
    ScenarioConfig c;
    c.n_agents = get_int(block, "n_agents", c.n_agents);
    c.arena.width = get_double(block, "arena_width", c.arena.width);
    c.arena.height = get_double(block, "arena_height", c.arena.height);
    SwarmParams& p = c.params;
    p.v_max = get_double(block, "v_max", p.v_max);
    p.turn_noise = get_double(block, "turn_noise", p.turn_noise);
    p.detect_radius = get_double(block, "detect_radius", p.detect_radius);
    p.claim_radius = get_double(block, "claim_radius", p.claim_radius);
    p.crowd_radius = get_double(block, "crowd_radius", p.crowd_radius);
    p.crowd_damping = get_double(block, "crowd_damping", p.crowd_damping);
    p.delta_desired = get_double(block, "delta_desired", p.delta_desired);
    p.max_steps = get_int(block, "max_steps", p.max_steps);
    p.slot_fraction = get_double(block, "slot_fraction", p.slot_fraction);
    c.start_center = get_vec2(block, "start_center", c.start_center);
    c.start_spread = get_double(block, "start_spread", c.start_spread);
    c.topology_center = get_vec2(block, "topology_center", c.topology_center);
    c.topology_radius = get_double(block, "topology_radius", c.topology_radius);
    (void)context;
    return c;
}

inline constexpr std::array<std::string_view, 16> kScenarioKeys = {
    "n_agents", "arena_width", "arena_height", "v_max", "turn_noise", "detect_radius",
    "claim_radius", "crowd_radius", "crowd_damping", "delta_desired", "max_steps",
    "slot_fraction", "start_center", "start_spread", "topology_center", "topology_radius"};

inline SwarmSpec parse_swarm(const json& top, const json& block,
                             const std::filesystem::path& base_dir) {
    check_keys(block, kScenarioKeys, "swarm block");
    SwarmSpec spec;
    spec.config = parse_scenario(block, "swarm");
    if (top.contains("topology")) {
        spec.topology_file = resolve(require_string(top, "topology"), base_dir);
        spec.config.slots = load_topology(*spec.topology_file);
    }
    return spec;
}

inline SweepSpec parse_sweep(const json& top, const json& block,
                             const std::filesystem::path& base_dir) {
    std::vector<std::string_view> keys(kScenarioKeys.begin(), kScenarioKeys.end());
    keys.push_back("levels");
    keys.push_back("seeds");
    check_keys(block, keys, "sweep block");
    SweepSpec spec;
    spec.config = parse_scenario(block, "sweep");
    if (!block.contains("levels") || !block["levels"].is_array() || block["levels"].empty()) {
        throw ValidationError("field 'levels' must be a non-empty array of numbers");
    }
    for (const auto& v : block["levels"]) {
        if (!v.is_number()) throw ValidationError("field 'levels' must contain only numbers");
        spec.levels.push_back(v.get<double>());
    }
    if (!block.contains("seeds") || !block["seeds"].is_array() || block["seeds"].empty()) {
        throw ValidationError("field 'seeds' must be a non-empty array of unsigned integers");
    }
    for (const auto& v : block["seeds"]) {
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
            throw ValidationError("field 'seeds' must contain only unsigned integers");
        }
        spec.seeds.push_back(v.get<std::uint64_t>());
    }
    if (top.contains("topology")) {
        spec.topology_file = resolve(require_string(top, "topology"), base_dir);
        spec.config.slots = load_topology(*spec.topology_file);
    }
    return spec;
}

inline PsoSpec parse_pso(const json& block) {
    check_keys(block, {"objective", "dimensions", "n_particles", "iterations", "bounds",
                       "inertia", "cognitive", "social", "topology", "ring_neighbors"},
               "pso block");
    PsoSpec spec;
    spec.objective.name = parse_objective(get_string(block, "objective", "sphere"));
    spec.objective.dimensions = get_int(block, "dimensions", spec.objective.dimensions);
    PsoConfig& c = spec.config;
    c.dimensions = spec.objective.dimensions;
    c.n_particles = get_int(block, "n_particles", c.n_particles);
    c.iterations = get_int(block, "iterations", c.iterations);
    c.inertia = get_double(block, "inertia", c.inertia);
    c.cognitive = get_double(block, "cognitive", c.cognitive);
    c.social = get_double(block, "social", c.social);
    std::string topo = get_string(block, "topology", "global");
    if (topo == "global") {
        c.topology = PsoTopology::global;
    } else if (topo == "ring") {
        c.topology = PsoTopology::ring;
    } else {
        throw ValidationError("field 'topology' must be 'global' or 'ring', got '" + topo + "'");
    }
    c.ring_neighbors = get_int(block, "ring_neighbors", c.ring_neighbors);
    if (block.contains("bounds")) {
        const json& b = block["bounds"];
        auto interval = [](const json& v) -> std::pair<double, double> {
            if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
                throw ValidationError("field 'bounds' intervals must be [lo, hi] number pairs");
            }
            return {v[0].get<double>(), v[1].get<double>()};
        };
        if (b.is_array() && b.size() == 2 && b[0].is_number()) {
            c.bounds.assign(static_cast<std::size_t>(c.dimensions), interval(b));
        } else if (b.is_array()) {
            for (const auto& v : b) c.bounds.push_back(interval(v));
        } else {
            throw ValidationError("field 'bounds' must be [lo, hi] or a per-dimension array of pairs");
        }
    }
    return spec;
}

} // namespace cfg

// Parses and fully validates a config document. Relative input paths
// resolve against base_dir (the config file's directory when loaded from
// disk).
[[nodiscard]] inline ExperimentConfig parse_config(const json& doc,
                                                   const std::filesystem::path& base_dir) {
    if (!doc.is_object()) throw ValidationError("config must be a JSON object");
    cfg::check_keys(doc, {"kind", "seed", "output", "graph", "topology", "route", "swarm",
                          "sweep", "pso"},
                    "config");
    ExperimentConfig config;

    std::string kind = cfg::require_string(doc, "kind");
    if (kind != "route" && kind != "swarm" && kind != "sweep" && kind != "pso") {
        throw ValidationError("field 'kind' must be one of route, swarm, sweep, pso; got '" + kind + "'");
    }
    int blocks = static_cast<int>(doc.contains("route")) + static_cast<int>(doc.contains("swarm")) +
                 static_cast<int>(doc.contains("sweep")) + static_cast<int>(doc.contains("pso"));
    if (blocks != 1) {
        throw ValidationError("config must contain exactly one of the blocks route, swarm, sweep, pso");
    }
    if (!doc.contains(kind)) {
        throw ValidationError("field 'kind' is '" + kind + "' but no '" + kind + "' block is present");
    }
    const json& block = doc[kind];
    if (!block.is_object()) throw ValidationError("field '" + kind + "' must be an object");

    if (doc.contains("seed")) {
        const json& s = doc["seed"];
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
            throw ValidationError("field 'seed' must be an unsigned integer");
        }
        config.seed = s.get<std::uint64_t>();
    }
    config.output = cfg::get_string(doc, "output", "out");

    if (kind == "route") {
        config.kind = ExperimentKind::route;
        config.spec = cfg::parse_route(doc, block, base_dir);
        if (doc.contains("topology")) {
            throw ValidationError("field 'topology' is not used by route experiments");
        }
    } else if (kind == "swarm") {
        config.kind = ExperimentKind::swarm;
        config.spec = cfg::parse_swarm(doc, block, base_dir);
        if (doc.contains("graph")) throw ValidationError("field 'graph' is not used by swarm experiments");
    } else if (kind == "sweep") {
        config.kind = ExperimentKind::sweep;
        config.spec = cfg::parse_sweep(doc, block, base_dir);
        if (doc.contains("graph")) throw ValidationError("field 'graph' is not used by sweep experiments");
    } else {
        config.kind = ExperimentKind::pso;
        config.spec = cfg::parse_pso(block);
        if (doc.contains("graph")) throw ValidationError("field 'graph' is not used by pso experiments");
        if (doc.contains("topology")) throw ValidationError("field 'topology' is not used by pso experiments");
    }

    // Fail on bad numbers at load time, not at run time.
    if (const auto* r = std::get_if<RouteSpec>(&config.spec)) {
        r->config.control.validate();
    } else if (const auto* s = std::get_if<SwarmSpec>(&config.spec)) {
        s->config.validate();
    } else if (const auto* w = std::get_if<SweepSpec>(&config.spec)) {
        w->config.validate();
    } else if (const auto* p = std::get_if<PsoSpec>(&config.spec)) {
        p->objective.validate();
        p->config.resolved(p->objective).validate();
    }
    return config;
}

[[nodiscard]] inline ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ValidationError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return parse_config(doc, std::filesystem::absolute(path).parent_path());
}

inline json ExperimentConfig::echo() const {
    json doc;
    doc["kind"] = std::string(kind_name(kind));
    doc["seed"] = seed;
    doc["output"] = output.string();

    auto scenario_block = [](const ScenarioConfig& c) {
        json b;
        b["n_agents"] = c.n_agents;
        b["arena_width"] = c.arena.width;
        b["arena_height"] = c.arena.height;
        b["v_max"] = c.params.v_max;
        b["turn_noise"] = c.params.turn_noise;
        b["detect_radius"] = c.params.detect_radius;
        b["claim_radius"] = c.params.claim_radius;
        b["crowd_radius"] = c.params.crowd_radius;
        b["crowd_damping"] = c.params.crowd_damping;
        b["delta_desired"] = c.params.delta_desired;
        b["max_steps"] = c.params.max_steps;
        b["slot_fraction"] = c.params.slot_fraction;
        b["start_center"] = {c.start_center.x, c.start_center.y};
        b["start_spread"] = c.start_spread;
        b["topology_center"] = {c.topology_center.x, c.topology_center.y};
        b["topology_radius"] = c.topology_radius;
        return b;
    };

    if (const auto* r = std::get_if<RouteSpec>(&spec)) {
        doc["graph"] = r->graph_file.string();
        json b;
        b["source"] = r->config.source;
        b["destination"] = r->config.destination;
        b["n_ants"] = r->config.n_ants;
        b["iterations"] = r->config.iterations;
        b["p"] = r->config.control.p;
        b["agefactor"] = r->config.control.agefactor;
        b["delta"] = r->config.control.delta;
        b["alpha"] = r->config.control.alpha;
        b["beta"] = r->config.control.beta;
        b["update_mode"] = std::string(update_mode_name(r->config.update_mode));
        b["max_walk_length"] = r->config.max_walk_length;
        b["reinforce_shortest"] = r->config.reinforce_shortest_path;
        b["tau_max"] = r->config.tau_max;
        b["initial_pheromone"] = r->config.initial_pheromone;
        doc["route"] = b;
    } else if (const auto* s = std::get_if<SwarmSpec>(&spec)) {
        if (s->topology_file) doc["topology"] = s->topology_file->string();
        doc["swarm"] = scenario_block(s->config);
    } else if (const auto* w = std::get_if<SweepSpec>(&spec)) {
        if (w->topology_file) doc["topology"] = w->topology_file->string();
        json b = scenario_block(w->config);
        b["levels"] = w->levels;
        b["seeds"] = w->seeds;
        doc["sweep"] = b;
    } else if (const auto* p = std::get_if<PsoSpec>(&spec)) {
        json b;
        b["objective"] = std::string(objective_name(p->objective.name));
        b["dimensions"] = p->objective.dimensions;
        PsoConfig resolved = p->config.resolved(p->objective);
        b["n_particles"] = resolved.n_particles;
        b["iterations"] = resolved.iterations;
        b["inertia"] = resolved.inertia;
        b["cognitive"] = resolved.cognitive;
        b["social"] = resolved.social;
        b["topology"] = resolved.topology == PsoTopology::global ? "global" : "ring";
        b["ring_neighbors"] = resolved.ring_neighbors;
        json bounds = json::array();
        for (const auto& [lo, hi] : resolved.bounds) bounds.push_back({lo, hi});
        b["bounds"] = bounds;
        doc["pso"] = b;
    }
    return doc;
}

// ---------------------------------------------------------------------------
// Run driver
// ---------------------------------------------------------------------------

struct RunManifest {
    json config_echo;
    std::string version;
    std::string rng;
    std::string digest_algorithm;
    double duration_seconds{};
    std::map<std::string, std::string> outputs; // artifact filename -> digest

    [[nodiscard]] json to_json() const {
        json doc;
        doc["version"] = version;
        doc["rng"] = rng;
        doc["digest_algorithm"] = digest_algorithm;
        doc["duration_seconds"] = duration_seconds;
        doc["config"] = config_echo;
        doc["outputs"] = outputs;
        return doc;
    }

    [[nodiscard]] static RunManifest from_json(const json& doc) {
        RunManifest m;
        m.config_echo = doc.at("config");
        m.version = doc.at("version").get<std::string>();
        m.rng = doc.at("rng").get<std::string>();
        m.digest_algorithm = doc.at("digest_algorithm").get<std::string>();
        m.duration_seconds = doc.at("duration_seconds").get<double>();
        m.outputs = doc.at("outputs").get<std::map<std::string, std::string>>();
        return m;
    }
};

[[nodiscard]] inline RunManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open manifest file: " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ValidationError("manifest " + path.string() + " is not valid JSON: " + e.what());
    }
    return RunManifest::from_json(doc);
}

/**
 * Runs the configured experiment and writes its artifacts under
 * config.output: one CSV named after the kind plus manifest.json. Nothing
 * is written anywhere else. Every artifact byte is a pure function of
 * (config, seed); only the manifest's duration field varies between runs.
 */
[[nodiscard]] inline RunManifest run_experiment(const ExperimentConfig& config) {
    auto started = std::chrono::steady_clock::now();

    std::string artifact_name;
    std::string artifact_bytes;
    {
        std::ostringstream out;
        if (const auto* r = std::get_if<RouteSpec>(&config.spec)) {
            Graph graph = load_graph(r->graph_file);
            RoutingReport report = run_colony(graph, r->config, config.seed);
            write_routing_csv(report, out);
            artifact_name = "route.csv";
        } else if (const auto* s = std::get_if<SwarmSpec>(&config.spec)) {
            ScenarioResult result = run_scenario(s->config, config.seed);
            write_metrics_csv(result.series, out);
            artifact_name = "swarm.csv";
        } else if (const auto* w = std::get_if<SweepSpec>(&config.spec)) {
            SweepResult result = sweep_ordering(w->config, w->levels, w->seeds);
            write_sweep_csv(result, out);
            artifact_name = "sweep.csv";
        } else if (const auto* p = std::get_if<PsoSpec>(&config.spec)) {
            PsoConfig resolved = p->config.resolved(p->objective);
            PsoReport report = run_pso(resolved, p->objective, config.seed);
            write_pso_csv(report, out);
            artifact_name = "pso.csv";
        } else {
            throw ValidationError("config has no experiment block");
        }
        artifact_bytes = out.str();
    }

    std::filesystem::create_directories(config.output);
    auto artifact_path = config.output / artifact_name;
    {
        std::ofstream f(artifact_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write artifact: " + artifact_path.string());
        f << artifact_bytes;
    }

    RunManifest manifest;
    manifest.config_echo = config.echo();
    manifest.version = SWARMLAB_VERSION;
    manifest.rng = Rng::name();
    manifest.digest_algorithm = "fnv1a-64";
    manifest.outputs[artifact_name] = hex64(fnv1a64(artifact_bytes));
    manifest.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    auto manifest_path = config.output / "manifest.json";
    std::ofstream mf(manifest_path, std::ios::binary);
    if (!mf) throw std::runtime_error("cannot write manifest: " + manifest_path.string());
    mf << manifest.to_json().dump(2) << '\n';
    return manifest;
}

} // namespace swarmlab

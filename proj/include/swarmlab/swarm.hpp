#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "swarmlab/csv.hpp"
#include "swarmlab/errors.hpp"
#include "swarmlab/rng.hpp"

namespace swarmlab {

struct Vec2 {
    double x{};
    double y{};

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    [[nodiscard]] double norm() const { return std::hypot(x, y); }

    bool operator==(const Vec2&) const = default;
};

[[nodiscard]] inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

// Axis-aligned arena [0, width] x [0, height].
struct Arena {
    double width{100.0};
    double height{100.0};

    [[nodiscard]] bool contains(Vec2 p) const {
        return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
    }
};

/**
 * Motion and matching parameters.
 *
 *   v_max          cruise speed of a free agent, distance per step
 *   turn_noise     half-width of the per-step heading perturbation (radians)
 *   detect_radius  distance to the slot centroid that triggers the beacon
 *   claim_radius   distance at which a slot can be claimed
 *   crowd_radius   distance to a claimed slot inside which damping applies
 *   crowd_damping  per-step speed multiplier while crowded (gamma)
 *   delta_desired  target ordering factor; the run stops once reached
 *   slot_fraction  slots per agent used when slots are generated
 */
struct SwarmParams {
    double v_max{1.0};
    double turn_noise{0.5};
    double detect_radius{10.0};
    double claim_radius{0.5};
    double crowd_radius{2.0};
    double crowd_damping{0.98};
    double delta_desired{0.40};
    int max_steps{10000};
    double slot_fraction{0.40};

    void validate() const {
        auto finite_pos = [](double v, const char* name) {
            if (!std::isfinite(v) || v <= 0.0) {
                throw ValidationError(std::string(name) + " must be a positive finite real, got " +
                                      std::to_string(v));
            }
        };
        finite_pos(v_max, "v_max");
        finite_pos(detect_radius, "detect_radius");
        finite_pos(claim_radius, "claim_radius");
        if (!std::isfinite(turn_noise) || turn_noise < 0.0) {
            throw ValidationError("turn_noise must be >= 0, got " + std::to_string(turn_noise));
        }
        if (!std::isfinite(crowd_radius) || crowd_radius < 0.0) {
            throw ValidationError("crowd_radius must be >= 0, got " + std::to_string(crowd_radius));
        }
        if (!(crowd_damping > 0.0) || crowd_damping >= 1.0) {
            throw ValidationError("crowd_damping must lie in (0, 1), got " + std::to_string(crowd_damping));
        }
        if (!(delta_desired > 0.0) || delta_desired > 1.0) {
            throw ValidationError("delta_desired must lie in (0, 1], got " + std::to_string(delta_desired));
        }
        if (max_steps < 1) throw ValidationError("max_steps must be >= 1, got " + std::to_string(max_steps));
        if (!(slot_fraction > 0.0) || slot_fraction > 1.0) {
            throw ValidationError("slot_fraction must lie in (0, 1], got " + std::to_string(slot_fraction));
        }
    }
};

struct AgentState {
    Vec2 position;
    double heading{};
    double speed{};
    bool matched{false};
    int claimed_slot{-1}; // -1 while unmatched

    // Matched agents are pinned; velocity is defined as zero for them.
    [[nodiscard]] Vec2 velocity() const {
        if (matched) return {};
        return {speed * std::cos(heading), speed * std::sin(heading)};
    }
};

struct TopologySpec {
    std::vector<Vec2> slots;
    double claim_radius{0.5};

    void validate() const {
        if (slots.empty()) throw ValidationError("topology must define at least one slot");
        if (!(claim_radius > 0.0)) throw ValidationError("claim_radius must be > 0");
        for (std::size_t i = 0; i < slots.size(); ++i) {
            for (std::size_t j = i + 1; j < slots.size(); ++j) {
                if (slots[i] == slots[j]) {
                    throw ValidationError("topology slots must be pairwise distinct");
                }
            }
        }
    }

    [[nodiscard]] Vec2 centroid() const {
        Vec2 c;
        for (Vec2 s : slots) c = c + s;
        return c * (1.0 / static_cast<double>(slots.size()));
    }
};

struct SwarmWorld {
    std::vector<AgentState> agents;
    TopologySpec topology;
    Arena arena;
    SwarmParams params;
    std::vector<int> slot_owner; // agent index per slot, -1 while unclaimed
    bool beacon_active{false};
    Vec2 beacon_position;
    int step{0};

    [[nodiscard]] int matched_count() const {
        int n = 0;
        for (const auto& a : agents) n += a.matched ? 1 : 0;
        return n;
    }
};

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

// Delta: fraction of agents holding a slot.
[[nodiscard]] inline double ordering_factor(const SwarmWorld& world) {
    if (world.agents.empty()) throw ValidationError("ordering factor of an empty swarm is undefined");
    return static_cast<double>(world.matched_count()) / static_cast<double>(world.agents.size());
}

struct MeanVelocity {
    Vec2 vector;
    double magnitude{};
};

// Component-wise average of agent velocities; matched agents contribute
// zero, so opposing headings cancel.
[[nodiscard]] inline MeanVelocity mean_velocity(const SwarmWorld& world) {
    if (world.agents.empty()) throw ValidationError("mean velocity of an empty swarm is undefined");
    Vec2 sum;
    for (const auto& a : world.agents) sum = sum + a.velocity();
    MeanVelocity mv;
    mv.vector = sum * (1.0 / static_cast<double>(world.agents.size()));
    mv.magnitude = mv.vector.norm();
    return mv;
}

[[nodiscard]] inline double mean_unmatched_speed(const SwarmWorld& world) {
    double sum = 0.0;
    int n = 0;
    for (const auto& a : world.agents) {
        if (!a.matched) {
            sum += a.speed;
            ++n;
        }
    }
    return n == 0 ? 0.0 : sum / n;
}

struct SwarmMetrics {
    int step{};
    double delta{};
    double mean_v{};
    bool beacon_active{};

    bool operator==(const SwarmMetrics&) const = default;
};

[[nodiscard]] inline SwarmMetrics measure(const SwarmWorld& world) {
    SwarmMetrics m;
    m.step = world.step;
    m.delta = ordering_factor(world);
    m.mean_v = mean_velocity(world).magnitude;
    m.beacon_active = world.beacon_active;
    return m;
}

// ---------------------------------------------------------------------------
// World transition
// ---------------------------------------------------------------------------

namespace detail {

inline void reflect_into(Vec2& p, double& heading, const Arena& arena) {
    // A step is short relative to the arena, but reflect iteratively so a
    // spawn next to a corner cannot escape.
    for (int guard = 0; guard < 8; ++guard) {
        bool bounced = false;
        if (p.x < 0.0) { p.x = -p.x; heading = std::numbers::pi - heading; bounced = true; }
        if (p.x > arena.width) { p.x = 2.0 * arena.width - p.x; heading = std::numbers::pi - heading; bounced = true; }
        if (p.y < 0.0) { p.y = -p.y; heading = -heading; bounced = true; }
        if (p.y > arena.height) { p.y = 2.0 * arena.height - p.y; heading = -heading; bounced = true; }
        if (!bounced) return;
    }
    p.x = std::clamp(p.x, 0.0, arena.width);
    p.y = std::clamp(p.y, 0.0, arena.height);
}

// Nearest slot passing `unclaimed_only`; ties resolve to the lowest slot
// index because the scan keeps strict improvements only.
[[nodiscard]] inline std::optional<int> nearest_slot(const SwarmWorld& world, Vec2 from,
                                                     bool unclaimed_only) {
    std::optional<int> best;
    double best_d = 0.0;
    for (std::size_t k = 0; k < world.topology.slots.size(); ++k) {
        if (unclaimed_only && world.slot_owner[k] != -1) continue;
        double d = distance(from, world.topology.slots[k]);
        if (!best || d < best_d) {
            best = static_cast<int>(k);
            best_d = d;
        }
    }
    return best;
}

[[nodiscard]] inline bool crowded(const SwarmWorld& world, Vec2 p) {
    for (std::size_t k = 0; k < world.topology.slots.size(); ++k) {
        if (world.slot_owner[k] == -1) continue;
        if (distance(p, world.topology.slots[k]) <= world.params.crowd_radius) return true;
    }
    return false;
}

// Claim pass, agent-index order. Also used once at scenario start so that
// agents spawned on slots match at step 0.
inline void resolve_claims(SwarmWorld& world) {
    for (std::size_t i = 0; i < world.agents.size(); ++i) {
        AgentState& a = world.agents[i];
        if (a.matched) continue;
        std::optional<int> slot;
        double best_d = 0.0;
        for (std::size_t k = 0; k < world.topology.slots.size(); ++k) {
            if (world.slot_owner[k] != -1) continue;
            double d = distance(a.position, world.topology.slots[k]);
            if (d <= world.params.claim_radius && (!slot || d < best_d)) {
                slot = static_cast<int>(k);
                best_d = d;
            }
        }
        if (slot) {
            world.slot_owner[static_cast<std::size_t>(*slot)] = static_cast<int>(i);
            a.matched = true;
            a.claimed_slot = *slot;
            a.speed = 0.0;
        }
    }
}

} // namespace detail

/**
 * One synchronous tick. Movement happens first against the beacon and claim
 * state snapshotted at entry, then the beacon check, then claims in agent
 * index order. Claims are permanent and matched agents never move again.
 *
 * Movement, per unmatched agent in index order:
 *   beacon off  heading drifts by one uniform draw in +-turn_noise, the
 *               agent advances at v_max and reflects off the walls
 *   beacon on   the agent turns straight toward the nearest unclaimed slot
 *               (nearest slot at all once every slot is claimed) and
 *               advances at most to the target point
 * Either way an agent standing within crowd_radius of a claimed slot moves
 * at its previous speed times crowd_damping instead of v_max; the factor
 * compounds while it stays crowded and resets once it leaves.
 */
template <typename R>
[[nodiscard]] SwarmWorld step_world(const SwarmWorld& world, R& rng) {
    SwarmWorld next = world;
    const SwarmParams& prm = world.params;
    bool beacon = world.beacon_active;

    for (std::size_t i = 0; i < next.agents.size(); ++i) {
        AgentState& a = next.agents[i];
        if (a.matched) continue;

        double speed = detail::crowded(world, a.position)
                           ? std::min(a.speed * prm.crowd_damping, prm.v_max)
                           : prm.v_max;
        if (!beacon) {
            a.heading += rng.symmetric(prm.turn_noise);
            a.speed = speed;
            Vec2 p = a.position + a.velocity();
            detail::reflect_into(p, a.heading, next.arena);
            a.position = p;
        } else {
            auto target = detail::nearest_slot(world, a.position, true);
            if (!target) target = detail::nearest_slot(world, a.position, false);
            Vec2 goal = next.topology.slots[static_cast<std::size_t>(*target)];
            double d = distance(a.position, goal);
            if (d > 0.0) {
                a.heading = std::atan2(goal.y - a.position.y, goal.x - a.position.x);
            }
            // The approach never oversteps the target, and the recorded
            // speed is the distance actually covered so damping compounds
            // from real motion.
            double advance = std::min(speed, d);
            a.speed = advance;
            a.position = a.position + Vec2{std::cos(a.heading), std::sin(a.heading)} * advance;
            detail::reflect_into(a.position, a.heading, next.arena);
        }
    }

    if (!next.beacon_active) {
        Vec2 centroid = next.topology.centroid();
        for (const auto& a : next.agents) {
            if (!a.matched && distance(a.position, centroid) <= prm.detect_radius) {
                next.beacon_active = true;
                next.beacon_position = a.position;
                break;
            }
        }
    }

    detail::resolve_claims(next);
    next.step = world.step + 1;
    return next;
}

// ---------------------------------------------------------------------------
// Scenario driver
// ---------------------------------------------------------------------------

/**
 * World recipe. Agents spawn uniformly in a square of side start_spread
 * around start_center (clamped to the arena), heading at the slot centroid
 * at full speed: a deployment column entering the arena together. Slots
 * come from `slots` when given, otherwise round(slot_fraction * n_agents)
 * of them are placed evenly on a circle around topology_center.
 */
struct ScenarioConfig {
    int n_agents{20};
    Arena arena{};
    SwarmParams params{};
    Vec2 start_center{25.0, 50.0};
    double start_spread{10.0};
    Vec2 topology_center{50.0, 50.0};
    double topology_radius{8.0};
    std::vector<Vec2> slots; // optional explicit layout

    void validate() const {
        params.validate();
        if (n_agents < 1) throw ValidationError("n_agents must be >= 1, got " + std::to_string(n_agents));
        if (!(arena.width > 0.0) || !(arena.height > 0.0)) {
            throw ValidationError("arena sides must be > 0");
        }
        if (!std::isfinite(start_spread) || start_spread < 0.0) {
            throw ValidationError("start_spread must be >= 0, got " + std::to_string(start_spread));
        }
        if (!arena.contains(start_center)) throw ValidationError("start_center must lie inside the arena");
        if (slots.empty()) {
            if (!(topology_radius > 0.0)) {
                throw ValidationError("topology_radius must be > 0, got " + std::to_string(topology_radius));
            }
            if (!arena.contains(topology_center)) {
                throw ValidationError("topology_center must lie inside the arena");
            }
        }
    }

    [[nodiscard]] int slot_count() const {
        if (!slots.empty()) return static_cast<int>(slots.size());
        return static_cast<int>(std::lround(params.slot_fraction * n_agents));
    }
};

template <typename R>
[[nodiscard]] SwarmWorld make_world(const ScenarioConfig& config, R& rng) {
    config.validate();
    SwarmWorld world;
    world.arena = config.arena;
    world.params = config.params;

    if (!config.slots.empty()) {
        world.topology.slots = config.slots;
    } else {
        int k = config.slot_count();
        if (k < 1) {
            throw ValidationError("slot_fraction " + std::to_string(config.params.slot_fraction) +
                                  " with " + std::to_string(config.n_agents) + " agents yields no slots");
        }
        world.topology.slots.reserve(static_cast<std::size_t>(k));
        for (int s = 0; s < k; ++s) {
            double angle = 2.0 * std::numbers::pi * s / k;
            world.topology.slots.push_back(config.topology_center +
                                           Vec2{std::cos(angle), std::sin(angle)} * config.topology_radius);
        }
    }
    world.topology.claim_radius = config.params.claim_radius;
    world.topology.validate();
    for (Vec2 s : world.topology.slots) {
        if (!world.arena.contains(s)) throw ValidationError("topology slot outside the arena");
    }
    world.slot_owner.assign(world.topology.slots.size(), -1);

    Vec2 aim = world.topology.centroid();
    world.agents.reserve(static_cast<std::size_t>(config.n_agents));
    for (int i = 0; i < config.n_agents; ++i) {
        AgentState a;
        double half = config.start_spread / 2.0;
        a.position.x = std::clamp(config.start_center.x + rng.symmetric(half), 0.0, world.arena.width);
        a.position.y = std::clamp(config.start_center.y + rng.symmetric(half), 0.0, world.arena.height);
        Vec2 to_goal = aim - a.position;
        a.heading = (to_goal.norm() > 0.0) ? std::atan2(to_goal.y, to_goal.x) : 0.0;
        a.speed = config.params.v_max;
        world.agents.push_back(a);
    }
    detail::resolve_claims(world);
    return world;
}

struct ScenarioResult {
    std::vector<SwarmMetrics> series; // step 0 first, then one row per tick
    bool attained{false};
    SwarmWorld final_world;
};

// Steps until the ordering factor reaches delta_desired or max_steps ticks
// have run, whichever is first.
[[nodiscard]] inline ScenarioResult run_scenario(const ScenarioConfig& config, std::uint64_t seed) {
    config.validate();
    Rng rng(seed);
    SwarmWorld world = make_world(config, rng);

    ScenarioResult result;
    result.series.push_back(measure(world));
    result.attained = result.series.back().delta >= config.params.delta_desired;
    while (!result.attained && world.step < config.params.max_steps) {
        world = step_world(world, rng);
        result.series.push_back(measure(world));
        result.attained = result.series.back().delta >= config.params.delta_desired;
    }
    result.final_world = std::move(world);
    return result;
}

// ---------------------------------------------------------------------------
// Ordering sweep
// ---------------------------------------------------------------------------

struct SweepRow {
    double level{};
    double mean_v{}; // |V| / v_max, averaged over seeds
    int attained_count{};

    bool operator==(const SweepRow&) const = default;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<std::vector<double>> per_seed_v;  // [level][seed], normalized
    std::vector<std::vector<bool>> per_seed_attained;

    bool operator==(const SweepResult&) const = default;
};

/**
 * For each level, reruns the scenario with delta_desired set to that level
 * and records |V| / v_max at the terminal step: the first step where the
 * measured ordering factor reaches the level, or the last step of the
 * budget when the level is never reached.
 */
[[nodiscard]] inline SweepResult sweep_ordering(const ScenarioConfig& config,
                                                const std::vector<double>& levels,
                                                const std::vector<std::uint64_t>& seeds) {
    if (levels.empty()) throw ValidationError("levels must be non-empty");
    if (seeds.empty()) throw ValidationError("seeds must be non-empty");
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (!(levels[i] > 0.0) || levels[i] > 1.0) {
            throw ValidationError("levels must lie in (0, 1], got " + std::to_string(levels[i]));
        }
        if (i > 0 && levels[i] <= levels[i - 1]) {
            throw ValidationError("levels must be strictly ascending");
        }
    }
    config.validate();

    SweepResult result;
    for (double level : levels) {
        ScenarioConfig run_cfg = config;
        run_cfg.params.delta_desired = level;
        SweepRow row;
        row.level = level;
        std::vector<double> vs;
        std::vector<bool> att;
        vs.reserve(seeds.size());
        for (std::uint64_t seed : seeds) {
            ScenarioResult r = run_scenario(run_cfg, seed);
            double v = r.series.back().mean_v / config.params.v_max;
            vs.push_back(v);
            att.push_back(r.attained);
            row.mean_v += v;
            row.attained_count += r.attained ? 1 : 0;
        }
        row.mean_v /= static_cast<double>(seeds.size());
        result.rows.push_back(row);
        result.per_seed_v.push_back(std::move(vs));
        result.per_seed_attained.push_back(std::move(att));
    }
    return result;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline void write_metrics_csv(const std::vector<SwarmMetrics>& series, std::ostream& os) {
    os << "step,delta,mean_v,beacon\n";
    for (const auto& m : series) {
        csv_row(os, m.step, m.delta, m.mean_v, m.beacon_active ? 1 : 0);
    }
}

inline void write_sweep_csv(const SweepResult& result, std::ostream& os) {
    os << "level,mean_v\n";
    for (const auto& row : result.rows) {
        csv_row(os, row.level, row.mean_v);
    }
}

// Text format: one slot per line as "x y"; '#' comments and blank lines
// are allowed.
inline std::vector<Vec2> parse_topology(std::istream& in, const std::string& source_name = "<stream>") {
    std::vector<Vec2> slots;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double x = 0.0, y = 0.0;
        if (!(ls >> x)) continue;
        if (!(ls >> y)) {
            throw ValidationError(source_name + ":" + std::to_string(line_no) + ": expected 'x y'");
        }
        std::string extra;
        if (ls >> extra) {
            throw ValidationError(source_name + ":" + std::to_string(line_no) +
                                  ": trailing token '" + extra + "'");
        }
        slots.push_back(Vec2{x, y});
    }
    return slots;
}

inline std::vector<Vec2> load_topology(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open topology file: " + path.string());
    return parse_topology(in, path.filename().string());
}

} // namespace swarmlab

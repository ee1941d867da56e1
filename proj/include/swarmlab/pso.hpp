#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "swarmlab/csv.hpp"
#include "swarmlab/errors.hpp"
#include "swarmlab/rng.hpp"

namespace swarmlab {

// ---------------------------------------------------------------------------
// Objectives
// ---------------------------------------------------------------------------

enum class ObjectiveName { sphere, rastrigin, rosenbrock };

[[nodiscard]] inline std::string_view objective_name(ObjectiveName n) {
    switch (n) {
        case ObjectiveName::sphere: return "sphere";
        case ObjectiveName::rastrigin: return "rastrigin";
        case ObjectiveName::rosenbrock: return "rosenbrock";
    }
    throw ValidationError("unknown objective");
}

[[nodiscard]] inline ObjectiveName parse_objective(std::string_view name) {
    if (name == "sphere") return ObjectiveName::sphere;
    if (name == "rastrigin") return ObjectiveName::rastrigin;
    if (name == "rosenbrock") return ObjectiveName::rosenbrock;
    throw ValidationError("objective must be one of sphere, rastrigin, rosenbrock; got '" +
                          std::string(name) + "'");
}

/**
 * Benchmark objective, minimized. All three have analytic minimum 0:
 * sphere and rastrigin at the origin, rosenbrock at (1, ..., 1).
 */
struct ObjectiveSpec {
    ObjectiveName name{ObjectiveName::sphere};
    int dimensions{2};

    void validate() const {
        if (dimensions < 1) {
            throw ValidationError("objective dimensions must be >= 1, got " + std::to_string(dimensions));
        }
        if (name == ObjectiveName::rosenbrock && dimensions < 2) {
            throw ValidationError("rosenbrock needs at least 2 dimensions");
        }
    }

    [[nodiscard]] double evaluate(std::span<const double> x) const {
        if (static_cast<int>(x.size()) != dimensions) {
            throw ValidationError("objective called with " + std::to_string(x.size()) +
                                  " coordinates, expected " + std::to_string(dimensions));
        }
        switch (name) {
            case ObjectiveName::sphere: {
                double s = 0.0;
                for (double v : x) s += v * v;
                return s;
            }
            case ObjectiveName::rastrigin: {
                double s = 10.0 * dimensions;
                for (double v : x) s += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v);
                return s;
            }
            case ObjectiveName::rosenbrock: {
                double s = 0.0;
                for (std::size_t i = 0; i + 1 < x.size(); ++i) {
                    double a = x[i + 1] - x[i] * x[i];
                    double b = 1.0 - x[i];
                    s += 100.0 * a * a + b * b;
                }
                return s;
            }
        }
        throw ValidationError("unknown objective");
    }

    // Conventional search box per benchmark.
    [[nodiscard]] std::pair<double, double> default_bounds() const {
        return name == ObjectiveName::rosenbrock ? std::pair{-5.0, 10.0} : std::pair{-5.12, 5.12};
    }
};

// ---------------------------------------------------------------------------
// Swarm state and configuration
// ---------------------------------------------------------------------------

struct Particle {
    std::vector<double> position;
    std::vector<double> velocity;
    std::vector<double> best_position;
    double best_fitness{};

    bool operator==(const Particle&) const = default;
};

enum class PsoTopology { global, ring };

/**
 * Canonical inertia-weight PSO settings. The defaults are the standard
 * constricted values w = 0.729, c1 = c2 = 1.49445. `bounds` holds one
 * [lo, hi] interval per dimension; positions clamp to it and a clamped
 * component has its velocity zeroed.
 */
struct PsoConfig {
    int n_particles{20};
    int dimensions{2};
    std::vector<std::pair<double, double>> bounds; // empty: filled from the objective
    double inertia{0.729};
    double cognitive{1.49445};
    double social{1.49445};
    PsoTopology topology{PsoTopology::global};
    int ring_neighbors{1}; // k neighbours on each side when topology == ring
    int iterations{100};

    void validate() const {
        if (n_particles < 2) throw ValidationError("n_particles must be >= 2, got " + std::to_string(n_particles));
        if (dimensions < 1) throw ValidationError("dimensions must be >= 1, got " + std::to_string(dimensions));
        if (iterations < 1) throw ValidationError("iterations must be >= 1, got " + std::to_string(iterations));
        if (ring_neighbors < 0) {
            throw ValidationError("ring_neighbors must be >= 0, got " + std::to_string(ring_neighbors));
        }
        if (!std::isfinite(inertia) || !std::isfinite(cognitive) || !std::isfinite(social)) {
            throw ValidationError("inertia, cognitive, and social weights must be finite");
        }
        if (static_cast<int>(bounds.size()) != dimensions) {
            throw ValidationError("bounds must list one interval per dimension");
        }
        for (const auto& [lo, hi] : bounds) {
            if (!(lo < hi)) {
                throw ValidationError("bounds must be non-degenerate, got [" + std::to_string(lo) +
                                      ", " + std::to_string(hi) + "]");
            }
        }
    }

    [[nodiscard]] PsoConfig resolved(const ObjectiveSpec& objective) const {
        PsoConfig c = *this;
        c.dimensions = objective.dimensions;
        if (c.bounds.empty()) {
            c.bounds.assign(static_cast<std::size_t>(c.dimensions), objective.default_bounds());
        }
        return c;
    }
};

// Position of the best personal best among the neighbours of `index`.
// Global topology sees the whole swarm; ring(k) sees k on each side,
// cyclically. Ties resolve to the lowest particle index.
[[nodiscard]] inline const std::vector<double>& neighborhood_best(const std::vector<Particle>& swarm,
                                                                  int index, const PsoConfig& config) {
    int n = static_cast<int>(swarm.size());
    if (n == 0) throw ValidationError("neighborhood of an empty swarm is undefined");
    if (index < 0 || index >= n) {
        throw ValidationError("particle index " + std::to_string(index) + " out of range");
    }
    int best = -1;
    if (config.topology == PsoTopology::global) {
        for (int i = 0; i < n; ++i) {
            if (best == -1 || swarm[static_cast<std::size_t>(i)].best_fitness <
                                  swarm[static_cast<std::size_t>(best)].best_fitness) {
                best = i;
            }
        }
    } else {
        int k = std::min(config.ring_neighbors, n / 2);
        for (int off = -k; off <= k; ++off) {
            int i = ((index + off) % n + n) % n;
            if (best == -1 || swarm[static_cast<std::size_t>(i)].best_fitness <
                                  swarm[static_cast<std::size_t>(best)].best_fitness) {
                best = i;
            }
        }
    }
    return swarm[static_cast<std::size_t>(best)].best_position;
}

namespace detail {

inline void require_finite_fitness(double f, int particle, std::span<const double> x) {
    if (std::isfinite(f)) return;
    std::string at = "(";
    for (std::size_t d = 0; d < x.size(); ++d) {
        if (d > 0) at += ", ";
        at += format_double(x[d]);
    }
    at += ")";
    throw ValidationError("objective returned a non-finite value for particle " +
                          std::to_string(particle) + " at " + at);
}

} // namespace detail

// Fresh swarm: positions uniform inside the bounds, velocities uniform in
// +-(hi - lo) / 2 per component, personal bests at the initial positions.
template <typename R>
[[nodiscard]] std::vector<Particle> make_swarm(const PsoConfig& config,
                                               const ObjectiveSpec& objective, R& rng) {
    config.validate();
    objective.validate();
    std::vector<Particle> swarm(static_cast<std::size_t>(config.n_particles));
    for (int i = 0; i < config.n_particles; ++i) {
        Particle& p = swarm[static_cast<std::size_t>(i)];
        p.position.resize(static_cast<std::size_t>(config.dimensions));
        p.velocity.resize(static_cast<std::size_t>(config.dimensions));
        for (int d = 0; d < config.dimensions; ++d) {
            auto [lo, hi] = config.bounds[static_cast<std::size_t>(d)];
            p.position[static_cast<std::size_t>(d)] = rng.uniform(lo, hi);
            p.velocity[static_cast<std::size_t>(d)] = rng.symmetric((hi - lo) / 2.0);
        }
        p.best_position = p.position;
        p.best_fitness = objective.evaluate(p.position);
        detail::require_finite_fitness(p.best_fitness, i, p.position);
    }
    return swarm;
}

/**
 * One synchronous PSO iteration. Every particle reads the personal bests as
 * they stood at entry (neighbourhood bests are merged before the move, not
 * during), then per component:
 *
 *   v <- w v + c1 r1 (pbest - x) + c2 r2 (nbest - x)
 *   x <- clamp(x + v)            (velocity zeroed on clamped components)
 *
 * r1 and r2 are fresh uniform [0, 1) draws per component; the draw order is
 * particle-major, r1 before r2 within each component.
 */
template <typename R>
[[nodiscard]] std::vector<Particle> pso_step(const std::vector<Particle>& swarm,
                                             const PsoConfig& config,
                                             const ObjectiveSpec& objective, R& rng) {
    config.validate();
    if (static_cast<int>(swarm.size()) != config.n_particles) {
        throw ValidationError("swarm size does not match n_particles");
    }
    std::vector<Particle> next = swarm;
    for (int i = 0; i < config.n_particles; ++i) {
        const std::vector<double>& nbest = neighborhood_best(swarm, i, config);
        Particle& p = next[static_cast<std::size_t>(i)];
        for (int d = 0; d < config.dimensions; ++d) {
            auto dd = static_cast<std::size_t>(d);
            double r1 = rng.uniform01();
            double r2 = rng.uniform01();
            p.velocity[dd] = config.inertia * p.velocity[dd] +
                             config.cognitive * r1 * (p.best_position[dd] - p.position[dd]) +
                             config.social * r2 * (nbest[dd] - p.position[dd]);
            p.position[dd] += p.velocity[dd];
            auto [lo, hi] = config.bounds[dd];
            if (p.position[dd] < lo) {
                p.position[dd] = lo;
                p.velocity[dd] = 0.0;
            } else if (p.position[dd] > hi) {
                p.position[dd] = hi;
                p.velocity[dd] = 0.0;
            }
        }
        double f = objective.evaluate(p.position);
        detail::require_finite_fitness(f, i, p.position);
        if (f < p.best_fitness) {
            p.best_fitness = f;
            p.best_position = p.position;
        }
    }
    return next;
}

// ---------------------------------------------------------------------------
// Run driver
// ---------------------------------------------------------------------------

struct PsoReport {
    std::vector<double> best_fitness_series; // index 0 is the initial swarm
    std::vector<double> best_position;
    double best_fitness{};

    bool operator==(const PsoReport&) const = default;
};

namespace detail {

[[nodiscard]] inline int swarm_best_index(const std::vector<Particle>& swarm) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(swarm.size()); ++i) {
        if (swarm[static_cast<std::size_t>(i)].best_fitness <
            swarm[static_cast<std::size_t>(best)].best_fitness) {
            best = i;
        }
    }
    return best;
}

} // namespace detail

// Continues from an existing swarm; used directly by tests that pin the
// initial state, and by run_pso below.
template <typename R>
[[nodiscard]] PsoReport run_pso(const PsoConfig& config, const ObjectiveSpec& objective,
                                std::vector<Particle> swarm, R& rng) {
    config.validate();
    PsoReport report;
    report.best_fitness_series.reserve(static_cast<std::size_t>(config.iterations) + 1);
    report.best_fitness_series.push_back(
        swarm[static_cast<std::size_t>(detail::swarm_best_index(swarm))].best_fitness);
    for (int it = 0; it < config.iterations; ++it) {
        swarm = pso_step(swarm, config, objective, rng);
        report.best_fitness_series.push_back(
            swarm[static_cast<std::size_t>(detail::swarm_best_index(swarm))].best_fitness);
    }
    int best = detail::swarm_best_index(swarm);
    report.best_position = swarm[static_cast<std::size_t>(best)].best_position;
    report.best_fitness = swarm[static_cast<std::size_t>(best)].best_fitness;
    return report;
}

[[nodiscard]] inline PsoReport run_pso(const PsoConfig& config, const ObjectiveSpec& objective,
                                       std::uint64_t seed) {
    PsoConfig resolved = config.resolved(objective);
    resolved.validate();
    objective.validate();
    Rng rng(seed);
    auto swarm = make_swarm(resolved, objective, rng);
    return run_pso(resolved, objective, std::move(swarm), rng);
}

// One row per iteration: iteration,best_fitness (iteration 0 is the freshly
// initialized swarm).
inline void write_pso_csv(const PsoReport& report, std::ostream& os) {
    os << "iteration,best_fitness\n";
    for (std::size_t i = 0; i < report.best_fitness_series.size(); ++i) {
        csv_row(os, static_cast<int>(i), report.best_fitness_series[i]);
    }
}

} // namespace swarmlab

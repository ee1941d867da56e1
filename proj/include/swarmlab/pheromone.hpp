#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "swarmlab/errors.hpp"
#include "swarmlab/graph.hpp"

namespace swarmlab {

namespace detail {

inline void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw ValidationError(std::string(name) + " must be finite");
    }
}

} // namespace detail

// tau after one evaporation round: tau * (1 - p). Evaporation never turns
// pheromone negative because p stays in [0, 1].
[[nodiscard]] inline double evaporation_update(double tau, double p) {
    detail::require_finite(tau, "tau");
    detail::require_finite(p, "p");
    if (tau < 0.0) throw ValidationError("tau must be >= 0, got " + std::to_string(tau));
    if (p < 0.0 || p > 1.0) throw ValidationError("p must lie in [0, 1], got " + std::to_string(p));
    return tau * (1.0 - p);
}

// Deposit contributed by an ant that took `hops` moves: agefactor ^ hops.
// Older (longer) walks contribute strictly less when agefactor < 1.
[[nodiscard]] inline double aging_deposit(double agefactor, int hops) {
    detail::require_finite(agefactor, "agefactor");
    if (hops < 0) throw ValidationError("hops must be >= 0, got " + std::to_string(hops));
    if (agefactor <= 0.0 || agefactor > 1.0) {
        throw ValidationError("agefactor must lie in (0, 1], got " + std::to_string(agefactor));
    }
    return std::pow(agefactor, static_cast<double>(hops));
}

// Damped pull of tau toward tau_max: tau + delta * (tau_max - tau).
// The increment shrinks as tau approaches the ceiling, never overshoots.
[[nodiscard]] inline double smoothing_update(double tau_old, double delta, double tau_max) {
    detail::require_finite(tau_old, "tau_old");
    detail::require_finite(delta, "delta");
    detail::require_finite(tau_max, "tau_max");
    if (tau_max <= 0.0) throw ValidationError("tau_max must be > 0, got " + std::to_string(tau_max));
    if (tau_old < 0.0 || tau_old > tau_max) {
        throw ValidationError("tau_old must lie in [0, tau_max], got " + std::to_string(tau_old));
    }
    if (delta <= 0.0 || delta >= 1.0) {
        throw ValidationError("delta must lie in (0, 1), got " + std::to_string(delta));
    }
    return tau_old + delta * (tau_max - tau_old);
}

[[nodiscard]] inline double clamp_pheromone(double tau, double tau_min, double tau_max) {
    detail::require_finite(tau, "tau");
    if (tau_min > tau_max) {
        throw ValidationError("tau_min must be <= tau_max, got [" + std::to_string(tau_min) +
                              ", " + std::to_string(tau_max) + "]");
    }
    return std::clamp(tau, tau_min, tau_max);
}

/**
 * Knobs shared by the pheromone update rules and edge selection.
 *
 *   p          evaporation rate in [0, 1]
 *   agefactor  base of the hop-count penalty, in (0, 1]
 *   delta      smoothing pull toward tau_max, in (0, 1)
 *   alpha      pheromone exponent, >= 0
 *   beta       heuristic exponent, >= 0
 */
struct ControlParams {
    double p{0.1};
    double agefactor{0.9};
    double delta{0.33};
    double alpha{1.0};
    double beta{1.0};

    void validate() const {
        detail::require_finite(p, "p");
        detail::require_finite(agefactor, "agefactor");
        detail::require_finite(delta, "delta");
        detail::require_finite(alpha, "alpha");
        detail::require_finite(beta, "beta");
        if (p < 0.0 || p > 1.0) throw ValidationError("p must lie in [0, 1], got " + std::to_string(p));
        if (agefactor <= 0.0 || agefactor > 1.0) {
            throw ValidationError("agefactor must lie in (0, 1], got " + std::to_string(agefactor));
        }
        if (delta <= 0.0 || delta >= 1.0) {
            throw ValidationError("delta must lie in (0, 1), got " + std::to_string(delta));
        }
        if (alpha < 0.0) throw ValidationError("alpha must be >= 0, got " + std::to_string(alpha));
        if (beta < 0.0) throw ValidationError("beta must be >= 0, got " + std::to_string(beta));
    }
};

/**
 * Per-edge pheromone levels for one graph, bounded to [tau_min, tau_max].
 *
 * Deposits clamp by default; evaporation leaves values untouched unless
 * clamping is requested, since decay cannot leave the legal range anyway
 * when the stored value is legal.
 */
class PheromoneStore {
public:
    explicit PheromoneStore(const Graph& graph, double initial = 0.0,
                            double tau_min = 0.0, double tau_max = 100.0)
        : tau_(static_cast<std::size_t>(graph.edge_count()), initial),
          tau_min_(tau_min), tau_max_(tau_max) {
        if (tau_min_ > tau_max_) {
            throw ValidationError("tau_min must be <= tau_max");
        }
        if (initial < tau_min_ || initial > tau_max_) {
            throw ValidationError("initial pheromone must lie in [tau_min, tau_max]");
        }
    }

    [[nodiscard]] std::size_t size() const { return tau_.size(); }
    [[nodiscard]] double get(int e) const { return tau_.at(static_cast<std::size_t>(e)); }
    [[nodiscard]] double tau_min() const { return tau_min_; }
    [[nodiscard]] double tau_max() const { return tau_max_; }

    void set(int e, double value) {
        detail::require_finite(value, "pheromone value");
        if (value < 0.0) throw ValidationError("pheromone value must be >= 0");
        tau_.at(static_cast<std::size_t>(e)) = value;
    }

    void deposit(int e, double amount, bool clamp = true) {
        detail::require_finite(amount, "deposit amount");
        double v = get(e) + amount;
        tau_.at(static_cast<std::size_t>(e)) = clamp ? clamp_pheromone(v, tau_min_, tau_max_) : v;
    }

    void evaporate_all(double p, bool clamp = false) {
        for (double& t : tau_) {
            t = evaporation_update(t, p);
            if (clamp) t = clamp_pheromone(t, tau_min_, tau_max_);
        }
    }

private:
    std::vector<double> tau_;
    double tau_min_;
    double tau_max_;
};

struct EdgeProbability {
    int edge{};
    double probability{};
};

struct EdgeDistribution {
    std::vector<EdgeProbability> entries;

    void validate() const {
        double sum = 0.0;
        for (const auto& ep : entries) {
            if (!(ep.probability >= 0.0 && ep.probability <= 1.0)) {
                throw ValidationError("probability out of [0, 1]");
            }
            sum += ep.probability;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            throw ValidationError("probabilities sum to " + std::to_string(sum) + ", not 1");
        }
    }
};

namespace detail {

// Weight numerators tau^alpha * eta^beta over the given edges, normalized.
// An all-zero row degenerates to the uniform distribution so that a node
// with candidates always yields a usable distribution.
inline EdgeDistribution normalize_weights(const Graph& graph, const PheromoneStore& store,
                                          const ControlParams& params,
                                          std::span<const int> edges) {
    EdgeDistribution dist;
    dist.entries.reserve(edges.size());
    double total = 0.0;
    for (int e : edges) {
        double w = std::pow(store.get(e), params.alpha) * std::pow(graph.eta(e), params.beta);
        if (!std::isfinite(w)) {
            throw ValidationError("non-finite selection weight on edge index " + std::to_string(e));
        }
        dist.entries.push_back(EdgeProbability{e, w});
        total += w;
    }
    if (total <= 0.0) {
        double u = 1.0 / static_cast<double>(dist.entries.size());
        for (auto& ep : dist.entries) ep.probability = u;
    } else {
        for (auto& ep : dist.entries) ep.probability /= total;
    }
    return dist;
}

} // namespace detail

// Distribution over the outgoing edges of `node` with probabilities
// proportional to tau^alpha * eta^beta. A node without outgoing edges is a
// dead end and an error; walking code must handle that case before asking.
[[nodiscard]] inline EdgeDistribution transition_probabilities(int node, const Graph& graph,
                                                               const PheromoneStore& store,
                                                               const ControlParams& params) {
    params.validate();
    if (node < 0 || node >= graph.node_count()) {
        throw ValidationError("unknown node index: " + std::to_string(node));
    }
    auto edges = graph.out_edges(node);
    if (edges.empty()) {
        throw ValidationError("node " + graph.node_id(node) + " has no outgoing edges");
    }
    return detail::normalize_weights(graph, store, params, edges);
}

[[nodiscard]] inline EdgeDistribution transition_probabilities(std::string_view node, const Graph& graph,
                                                               const PheromoneStore& store,
                                                               const ControlParams& params) {
    return transition_probabilities(graph.require_node(node), graph, store, params);
}

// Roulette-wheel draw from a distribution. Consumes exactly one uniform.
template <typename R>
[[nodiscard]] int select_edge(const EdgeDistribution& dist, R& rng) {
    if (dist.entries.empty()) throw ValidationError("cannot select from an empty distribution");
    double u = rng.uniform01();
    double acc = 0.0;
    for (const auto& ep : dist.entries) {
        acc += ep.probability;
        if (u < acc) return ep.edge;
    }
    return dist.entries.back().edge; // guards rounding shortfall in acc
}

} // namespace swarmlab

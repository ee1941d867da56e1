#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "swarmlab/graph.hpp"
#include "swarmlab/pheromone.hpp"
#include "swarmlab/rng.hpp"

using namespace swarmlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Two-edge fan used by the selection tests: S with edges to A and B.
Graph fan_graph(double cost_a, double cost_b) {
    Graph g;
    g.add_edge("S", "A", cost_a);
    g.add_edge("S", "B", cost_b);
    return g;
}

} // namespace

TEST_CASE("evaporation update", "[pheromone]") {
    CHECK_THAT(evaporation_update(10.0, 0.1), WithinAbs(9.0, 1e-9));
    CHECK_THAT(evaporation_update(7.0, 1.0), WithinAbs(0.0, 1e-9));
    CHECK(evaporation_update(0.0, 0.5) == 0.0);

    CHECK_THROWS_AS(evaporation_update(1.0, -0.1), ValidationError);
    CHECK_THROWS_AS(evaporation_update(1.0, 1.5), ValidationError);
    CHECK_THROWS_AS(evaporation_update(-2.0, 0.5), ValidationError);
    CHECK_THROWS_AS(evaporation_update(std::nan(""), 0.5), ValidationError);
}

TEST_CASE("repeated evaporation is pure contraction with no drift", "[pheromone]") {
    Rng rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        double tau0 = rng.uniform(0.0, 150.0);
        double p = rng.uniform01();
        int k = 1 + static_cast<int>(rng.uniform01() * 50.0);

        double via_op = tau0;
        double direct = tau0;
        for (int i = 0; i < k; ++i) {
            via_op = evaporation_update(via_op, p);
            direct = direct * (1.0 - p);
        }
        CHECK(via_op == direct); // same arithmetic, bit for bit
        CHECK_THAT(via_op, WithinAbs(tau0 * std::pow(1.0 - p, k), 1e-9));
        CHECK(via_op <= tau0);
    }
}

TEST_CASE("aging deposit", "[pheromone]") {
    CHECK_THAT(aging_deposit(0.9, 2), WithinAbs(0.81, 1e-9));
    CHECK(aging_deposit(0.5, 10) == 0.0009765625); // exact in binary
    CHECK(aging_deposit(1.0, 7) == 1.0);
    CHECK(aging_deposit(0.9, 0) == 1.0);

    CHECK_THROWS_AS(aging_deposit(0.9, -1), ValidationError);
    CHECK_THROWS_AS(aging_deposit(0.0, 2), ValidationError);
    CHECK_THROWS_AS(aging_deposit(1.1, 2), ValidationError);
}

TEST_CASE("aging deposit strictly decreases with hop count", "[pheromone]") {
    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        double agefactor = rng.uniform(0.1, 0.99);
        for (int hops = 0; hops < 60; ++hops) {
            CHECK(aging_deposit(agefactor, hops + 1) < aging_deposit(agefactor, hops));
        }
    }
}

TEST_CASE("smoothing update", "[pheromone]") {
    CHECK_THAT(smoothing_update(0.0, 0.33, 100.0), WithinAbs(33.0, 1e-9));
    CHECK_THAT(smoothing_update(50.0, 0.33, 100.0), WithinAbs(66.5, 1e-9));
    CHECK(smoothing_update(100.0, 0.33, 100.0) == 100.0);

    CHECK_THROWS_AS(smoothing_update(120.0, 0.33, 100.0), ValidationError);
    CHECK_THROWS_AS(smoothing_update(-1.0, 0.33, 100.0), ValidationError);
    CHECK_THROWS_AS(smoothing_update(1.0, 0.0, 100.0), ValidationError);
    CHECK_THROWS_AS(smoothing_update(1.0, 1.0, 100.0), ValidationError);
    CHECK_THROWS_AS(smoothing_update(1.0, 0.33, 0.0), ValidationError);
}

TEST_CASE("iterated smoothing follows the closed form and saturates", "[pheromone]") {
    Rng rng(303);
    for (int trial = 0; trial < 100; ++trial) {
        double tau_max = rng.uniform(1.0, 200.0);
        double tau0 = rng.uniform(0.0, tau_max);
        double delta = rng.uniform(0.05, 0.95);
        int n = 1 + static_cast<int>(rng.uniform01() * 40.0);

        double tau = tau0;
        double prev_increment = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            double next = smoothing_update(tau, delta, tau_max);
            double increment = next - tau;
            CHECK(next >= tau);
            CHECK(next <= tau_max);
            // The pull weakens as tau climbs; once the gap underflows the
            // addition the value simply stops moving.
            if (increment > 0.0) CHECK(increment < prev_increment);
            prev_increment = increment;
            tau = next;
        }
        double closed = tau_max - (tau_max - tau0) * std::pow(1.0 - delta, n);
        CHECK_THAT(tau, WithinRel(closed, 1e-9));
    }
}

TEST_CASE("clamp pheromone", "[pheromone]") {
    CHECK(clamp_pheromone(120.0, 0.0, 100.0) == 100.0);
    CHECK(clamp_pheromone(-3.0, 0.0, 100.0) == 0.0);
    CHECK(clamp_pheromone(42.0, 0.0, 100.0) == 42.0);
    CHECK(clamp_pheromone(5.0, 5.0, 5.0) == 5.0);

    CHECK_THROWS_AS(clamp_pheromone(1.0, 10.0, 0.0), ValidationError);
}

TEST_CASE("pheromone store bounds and updates", "[pheromone]") {
    Graph g = fan_graph(1.0, 1.0);
    PheromoneStore store(g, 1.0);
    CHECK(store.size() == 2);
    CHECK(store.get(0) == 1.0);

    store.deposit(0, 250.0); // clamps at tau_max
    CHECK(store.get(0) == 100.0);
    store.deposit(1, 2.5);
    CHECK_THAT(store.get(1), WithinAbs(3.5, 1e-12));

    store.evaporate_all(0.5);
    CHECK(store.get(0) == 50.0);
    CHECK_THAT(store.get(1), WithinAbs(1.75, 1e-12));

    CHECK_THROWS_AS(store.set(0, -1.0), ValidationError);
    CHECK_THROWS_AS(PheromoneStore(g, 5.0, 0.0, 1.0), ValidationError);
    CHECK_THROWS_AS(PheromoneStore(g, 0.0, 2.0, 1.0), ValidationError);
}

TEST_CASE("transition probabilities on the worked two-edge fan", "[pheromone]") {
    Graph g = fan_graph(1.0, 1.0);
    PheromoneStore store(g, 0.0);
    store.set(0, 3.0);
    store.set(1, 1.0);
    ControlParams params; // alpha = beta = 1

    auto dist = transition_probabilities("S", g, store, params);
    REQUIRE(dist.entries.size() == 2);
    dist.validate();
    CHECK_THAT(dist.entries[0].probability, WithinAbs(0.75, 1e-9));
    CHECK_THAT(dist.entries[1].probability, WithinAbs(0.25, 1e-9));
}

TEST_CASE("all-zero numerators fall back to uniform", "[pheromone]") {
    Graph g;
    g.add_edge("S", "A", 1.0);
    g.add_edge("S", "B", 2.0);
    g.add_edge("S", "C", 3.0);
    g.add_edge("S", "D", 4.0);
    PheromoneStore store(g, 0.0); // tau = 0 everywhere, alpha = 1 kills every weight
    ControlParams params;

    auto dist = transition_probabilities("S", g, store, params);
    REQUIRE(dist.entries.size() == 4);
    for (const auto& ep : dist.entries) CHECK(ep.probability == 0.25);
}

TEST_CASE("alpha = beta = 0 is uniform regardless of tau and eta", "[pheromone]") {
    Graph g = fan_graph(1.0, 9.0);
    PheromoneStore store(g, 0.0);
    store.set(0, 7.0);
    ControlParams params;
    params.alpha = 0.0;
    params.beta = 0.0;

    auto dist = transition_probabilities("S", g, store, params);
    CHECK(dist.entries[0].probability == 0.5);
    CHECK(dist.entries[1].probability == 0.5);
}

TEST_CASE("transition probability errors", "[pheromone]") {
    Graph g = fan_graph(1.0, 1.0);
    PheromoneStore store(g, 1.0);
    ControlParams params;

    CHECK_THROWS_AS(transition_probabilities("A", g, store, params), ValidationError); // dead end
    CHECK_THROWS_AS(transition_probabilities("missing", g, store, params), ValidationError);
    params.p = 1.5;
    CHECK_THROWS_AS(transition_probabilities("S", g, store, params), ValidationError);
}

TEST_CASE("exponent bias picks the expected argmax", "[pheromone]") {
    Rng rng(5150);
    for (int trial = 0; trial < 100; ++trial) {
        int fan = 2 + static_cast<int>(rng.uniform01() * 5.0);
        Graph g;
        int best_tau = 0, best_eta = 0;
        double max_tau = -1.0, min_cost = std::numeric_limits<double>::infinity();
        std::vector<double> taus;
        for (int i = 0; i < fan; ++i) {
            double cost = rng.uniform(0.5, 5.0);
            g.add_edge("S", "T" + std::to_string(i), cost);
            double tau = rng.uniform(0.1, 10.0);
            taus.push_back(tau);
            if (tau > max_tau) {
                max_tau = tau;
                best_tau = i;
            }
            if (cost < min_cost) {
                min_cost = cost;
                best_eta = i;
            }
        }
        PheromoneStore store(g, 0.0);
        for (int i = 0; i < fan; ++i) store.set(i, taus[static_cast<std::size_t>(i)]);

        ControlParams params;
        params.alpha = rng.uniform(0.5, 3.0);
        params.beta = 0.0;
        auto dist = transition_probabilities("S", g, store, params);
        auto argmax = [](const EdgeDistribution& d) {
            int best = 0;
            for (std::size_t i = 1; i < d.entries.size(); ++i) {
                if (d.entries[i].probability > d.entries[best].probability) best = static_cast<int>(i);
            }
            return best;
        };
        CHECK(argmax(dist) == best_tau);

        params.alpha = 0.0;
        params.beta = rng.uniform(0.5, 3.0);
        dist = transition_probabilities("S", g, store, params);
        CHECK(argmax(dist) == best_eta);
    }
}

TEST_CASE("probabilities are invariant under pheromone rescaling", "[pheromone]") {
    Rng rng(31337);
    for (int trial = 0; trial < 50; ++trial) {
        int fan = 2 + static_cast<int>(rng.uniform01() * 4.0);
        Graph g;
        std::vector<double> taus;
        for (int i = 0; i < fan; ++i) {
            g.add_edge("S", "T" + std::to_string(i), rng.uniform(0.5, 5.0));
            taus.push_back(rng.uniform(0.1, 10.0));
        }
        ControlParams params;
        params.alpha = rng.uniform(0.5, 2.5);
        params.beta = rng.uniform(0.0, 2.5);

        PheromoneStore base(g, 0.0);
        PheromoneStore scaled(g, 0.0);
        double c = rng.uniform(0.01, 9.0);
        for (int i = 0; i < fan; ++i) {
            base.set(i, taus[static_cast<std::size_t>(i)]);
            scaled.set(i, c * taus[static_cast<std::size_t>(i)]);
        }
        auto d0 = transition_probabilities("S", g, base, params);
        auto d1 = transition_probabilities("S", g, scaled, params);
        for (std::size_t i = 0; i < d0.entries.size(); ++i) {
            CHECK_THAT(d1.entries[i].probability, WithinAbs(d0.entries[i].probability, 1e-12));
        }
    }
}

TEST_CASE("select_edge matches the distribution over many draws", "[pheromone]") {
    Graph g = fan_graph(1.0, 1.0);
    PheromoneStore store(g, 0.0);
    store.set(0, 3.0);
    store.set(1, 1.0);
    ControlParams params;
    auto dist = transition_probabilities("S", g, store, params);

    Rng rng(424242);
    const int draws = 100000;
    int first = 0;
    for (int i = 0; i < draws; ++i) {
        if (select_edge(dist, rng) == 0) ++first;
    }
    double freq = static_cast<double>(first) / draws;
    CHECK_THAT(freq, WithinAbs(0.75, 0.01));

    EdgeDistribution empty;
    CHECK_THROWS_AS(select_edge(empty, rng), ValidationError);
}

TEST_CASE("distribution validation catches bad rows", "[pheromone]") {
    EdgeDistribution d;
    d.entries = {{0, 0.6}, {1, 0.6}};
    CHECK_THROWS_AS(d.validate(), ValidationError);
    d.entries = {{0, 1.2}, {1, -0.2}};
    CHECK_THROWS_AS(d.validate(), ValidationError);
    d.entries = {{0, 0.25}, {1, 0.75}};
    CHECK_NOTHROW(d.validate());
}

TEST_CASE("every update output stays finite on random valid input", "[pheromone]") {
    Rng rng(864);
    for (int trial = 0; trial < 1000; ++trial) {
        double tau = rng.uniform(0.0, 1000.0);
        double p = rng.uniform01();
        CHECK(std::isfinite(evaporation_update(tau, p)));

        double agefactor = rng.uniform(0.01, 1.0);
        int hops = static_cast<int>(rng.uniform01() * 200.0);
        CHECK(std::isfinite(aging_deposit(agefactor, hops)));

        double tau_max = rng.uniform(1.0, 500.0);
        double tau_old = rng.uniform(0.0, tau_max);
        double delta = rng.uniform(0.01, 0.99);
        CHECK(std::isfinite(smoothing_update(tau_old, delta, tau_max)));

        CHECK(std::isfinite(clamp_pheromone(tau, 0.0, tau_max)));
    }
}

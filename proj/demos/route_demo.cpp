// Minimal library walkthrough: build a graph in code, run the colony, and
// print how the table converges.
#include <iostream>

#include "swarmlab/routing.hpp"

int main() {
    swarmlab::Graph g;
    g.add_edge("A", "B", 1.0);
    g.add_edge("B", "E", 1.5);
    g.add_edge("A", "C", 2.0);
    g.add_edge("C", "D", 2.0);
    g.add_edge("D", "E", 2.0);
    g.add_edge("B", "D", 4.0);

    swarmlab::RoutingConfig config;
    config.source = "A";
    config.destination = "E";
    config.iterations = 50;

    auto report = swarmlab::run_colony(g, config, 7);
    std::cout << "reference shortest path: " << report.shortest_path << "\n";
    std::cout << "strongest recorded path: " << report.best_path
              << " (strength " << report.best_strength << ")\n";
    std::cout << "final shortest-path share of ants: " << report.final_shortest_frequency << "\n";
    return 0;
}

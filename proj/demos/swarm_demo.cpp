// Runs the default perimeter-forming scenario and prints the milestone
// steps where the ordering factor first crosses each tenth.
#include <cstdio>

#include "swarmlab/swarm.hpp"

int main() {
    swarmlab::ScenarioConfig config;
    auto result = swarmlab::run_scenario(config, 3);

    double next_milestone = 0.1;
    for (const auto& m : result.series) {
        if (m.delta >= next_milestone) {
            std::printf("step %5d  delta %.2f  |V| %.3f  beacon %d\n",
                        m.step, m.delta, m.mean_v, m.beacon_active ? 1 : 0);
            next_milestone += 0.1;
        }
    }
    const auto& last = result.series.back();
    std::printf("finished at step %d with delta %.2f (%s)\n", last.step, last.delta,
                result.attained ? "target reached" : "target not reached");
    return 0;
}

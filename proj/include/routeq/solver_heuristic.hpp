#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>

#include "routeq/pareto.hpp"

namespace routeq {

struct HeuristicConfig {
    ObjectiveSpec spec;
    int runs = 10;            // independent restarts whose archives are merged
    int directions = 20;      // scalarization sub-problems per run
    int iterations = 2000;    // perturbation cycles per direction
    int perturbation = 3;     // random relocations per perturbation
    uint64_t seed = 1;
    int jobs = 0;             // parallel runs; 0 = hardware
};

// key=value text form ("spec=distance:gini", "runs=10", ...)
HeuristicConfig parse_heuristic_config(std::istream& in);
void write_heuristic_config(std::ostream& out, const HeuristicConfig& config);

// Multi-directional iterated local search: per run and direction, minimizes
// cost + lambda_d * normalized balance (epsilon-constraint on the largest
// workload for Lex) by greedy construction, inter/intra relocate, swap and
// 2-opt descent, and random-relocation perturbation. Every local optimum is
// re-sequenced (Held-Karp per route on small instances) and offered to the
// archive. Deterministic for a fixed (seed, runs) pair.
ParetoArchive solve_heuristic(const Instance& inst, const HeuristicConfig& config);

// Non-dominated union of fronts sharing one instance and spec; a known
// cost-optimal solution is inserted too when supplied.
ParetoArchive merge_reference(std::span<const ParetoArchive> fronts,
                              const std::optional<Solution>& known_optimum = std::nullopt);

}  // namespace routeq

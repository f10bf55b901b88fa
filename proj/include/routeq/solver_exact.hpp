#pragma once

#include <functional>
#include <span>
#include <vector>

#include "routeq/equity.hpp"
#include "routeq/pareto.hpp"

namespace routeq {

struct EnumerationLimits {
    int max_customers = 22;
    int max_vehicles = 6;
};

struct EnumerationStats {
    unsigned long long feasible_count = 0;
    ResourceTotals totals;  // workload totals observed across all feasible solutions
    double seconds = 0.0;
};

struct ExactResult {
    std::vector<ParetoArchive> archives;  // aligned with the specs argument
    EnumerationStats stats;
};

// Visits every set-partition of the customers into exactly K nonempty
// capacity-feasible groups once (pinned-anchor symmetry break: parts are
// generated in increasing order of their smallest customer), each group
// sequenced by its Held-Karp-optimal tour. Deterministic order. Materializes a
// Solution per partition, so this is for small instances and tests; the solver
// below shares the same recursion with a leaner leaf.
void enumerate_feasible(const Instance& inst,
                        const std::function<void(const Solution&)>& visit,
                        const EnumerationLimits& limits = {});

// One sweep over all feasible solutions filling one Pareto archive per spec.
// Distance + non-monotonic archives are consistency-filtered at the end.
// jobs > 1 splits the enumeration by first-part prefix across OpenMP workers;
// private archives merge deterministically (the merged archive is a pure
// function of the feasible set, independent of insertion order).
ExactResult solve_exact(const Instance& inst, std::span<const ObjectiveSpec> specs,
                        int jobs = 0, const EnumerationLimits& limits = {});

// Single-threaded reference path kept for testing and benchmarking; the
// parallel solver must produce identical archives.
ExactResult solve_exact_serial(const Instance& inst, std::span<const ObjectiveSpec> specs,
                               const EnumerationLimits& limits = {});

}  // namespace routeq

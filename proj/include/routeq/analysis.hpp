#pragma once

#include <span>
#include <utility>
#include <vector>

#include "routeq/pareto.hpp"

namespace routeq {

// Area dominated by a minimization front inside the box bounded by ref.
// Points outside the box are clipped; dominated points contribute nothing.
double hypervolume(std::span<const std::pair<double, double>> front,
                   std::pair<double, double> ref);

// Objective points of an archive for hypervolume/trade-off work. Lex fronts
// map to rank coordinates: rank 1 is the lex-best (costliest) entry.
std::vector<std::pair<double, double>> objective_points(const ParetoArchive& archive);
// Rank of an arbitrary lex key on a reference front's scale: 1 + number of
// reference keys strictly lex-smaller.
double lex_rank_on(const ParetoArchive& reference, const std::vector<double>& key);

// One instance's fronts for all specs under study (aligned with a spec list).
struct FrontSet {
    const Instance* instance = nullptr;
    std::span<const ParetoArchive> archives;
};

struct AgreementMatrix {
    std::vector<ObjectiveSpec> specs;
    std::vector<double> cells;    // specs.size()^2, row = source A, col = target B; NaN undefined
    std::vector<int> samples;     // instances contributing per cell

    double at(size_t a, size_t b) const { return cells[a * specs.size() + b]; }
};

// Re-evaluates each objective's front under every other objective, discarding
// newly dominated points, and reports attained hypervolume as a percentage of
// the target's own (nadir-referenced) hypervolume, averaged over instances.
// Cells whose target front is degenerate on an instance exclude that instance.
AgreementMatrix cross_agreement(std::span<const FrontSet> instances,
                                std::span<const ObjectiveSpec> specs);

struct OverlapReport {
    Resource resource = Resource::Distance;
    size_t union_size = 0;
    // per function: counts of solutions found by all functions (A), shared
    // with a strict subset (B), unique to this function (C), missed由 it (D)
    struct Row {
        EquityFunction function;
        size_t a = 0, b = 0, c = 0, d = 0;
    };
    std::vector<Row> rows;
};

// Classifies the union of six fronts (one per equity function, same resource
// and instance); union identity is (cost, descending workload vector).
OverlapReport overlap_categories(std::span<const ParetoArchive> fronts_by_function,
                                 Resource resource);

// Fraction of the n+K undirected depot-inclusive edges (multiset) two
// solutions share; a single-customer route contributes its depot edge twice.
double edge_similarity(const Instance& inst, const Solution& a, const Solution& b);

struct SimilarityReport {
    bool degenerate = false;            // fewer than 2 entries
    std::vector<double> all_pairs;      // shared-edge fractions, all unordered pairs
    std::vector<double> consecutive;    // cost-adjacent pairs
    double median_all = 0.0;
    double median_consecutive = 0.0;
};

SimilarityReport similarity_distributions(const ParetoArchive& archive);

// (relative cost increase, balance normalized to [0,1]) per front entry; a
// constant-balance front maps to all zeros. Lex uses rank coordinates.
std::vector<std::pair<double, double>> tradeoff_normalize(const ParetoArchive& archive,
                                                          long long cost_optimum);

}  // namespace routeq

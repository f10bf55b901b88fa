#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "routeq/instance.hpp"

namespace routeq {

enum class Resource { Distance, Load, Stops };
enum class SumClass { ConstantSum, VariableSum };

// Load and Stops totals are conserved across feasible solutions; Distance is not.
constexpr SumClass sum_class(Resource r) {
    return r == Resource::Distance ? SumClass::VariableSum : SumClass::ConstantSum;
}
const char* to_string(Resource r);
Resource parse_resource(const std::string& text);

// Per-route workloads of one solution under one resource.
struct WorkloadVector {
    Resource resource = Resource::Distance;
    std::vector<double> values;       // one per route, in canonical route order
    std::vector<double> sorted_desc;  // same values, nonincreasing

    static WorkloadVector of(Resource r, std::vector<double> values);
};

// A feasible solution: exactly K nonempty routes covering every customer once,
// each within capacity. Routes are canonicalized (direction: smaller endpoint
// first; order: tour length desc, then load desc, then sequence) so that two
// solutions with identical route sets compare equal.
class Solution {
public:
    Solution(const Instance& inst, std::vector<std::vector<int>> routes);

    const std::vector<std::vector<int>>& routes() const { return routes_; }
    long long cost() const { return cost_; }

    bool operator==(const Solution& other) const { return routes_ == other.routes_; }
    // Canonical total order used to pick one representative among solutions
    // with equal objective vectors.
    bool operator<(const Solution& other) const { return routes_ < other.routes_; }

private:
    friend Solution make_solution_unchecked(const Instance&, std::vector<std::vector<int>>&&,
                                            long long);
    Solution() = default;
    std::vector<std::vector<int>> routes_;
    long long cost_ = 0;
};

// Trusted fast path for solvers: routes must already be valid; cost is taken
// as given. Canonicalization still applies.
Solution make_solution_unchecked(const Instance& inst, std::vector<std::vector<int>>&& routes,
                                 long long cost);

long long route_length(const Instance& inst, const std::vector<int>& route);
long long route_demand(const Instance& inst, const std::vector<int>& route);

WorkloadVector workload_vector(const Instance& inst, const Solution& sol, Resource r);

// Shortest depot-to-depot tour over the given customers via Held-Karp DP.
// Ties break toward the lexicographically smallest customer sequence.
// Throws CapabilityError for more than kHeldKarpLimit customers.
inline constexpr int kHeldKarpLimit = 20;
std::pair<std::vector<int>, long long> tsp_optimal_order(const Instance& inst,
                                                         std::vector<int> subset);

// True iff no intra-route relocate, exchange, or 2-opt reversal strictly
// shortens any route. The heuristic-regime stand-in for per-route TSP
// optimality.
bool is_sequencing_local_optimum(const Instance& inst, const Solution& sol);
bool is_route_local_optimum(const Instance& inst, const std::vector<int>& route);
// Applies those moves until none improves; returns the improved route in place.
void improve_route_sequencing(const Instance& inst, std::vector<int>& route);

// Optimal tour lengths for every capacity-feasible customer subset of a small
// instance (n <= 22), shared read-only by the solvers. Sequences are
// reconstructed on demand with the same lexicographic tie-break as
// tsp_optimal_order.
class TourTable {
public:
    explicit TourTable(const Instance& inst);

    // Tour length of a feasible subset given as a customer bitmask (bit i-1 = customer i).
    int32_t length(uint32_t mask) const {
        uint32_t h = (mask * 2654435761u) >> shift_;
        while (keys_[h] != mask) h = (h + 1) & hash_mask_;
        return len_[h];
    }
    long long demand(uint32_t mask) const;
    std::vector<int> sequence(uint32_t mask) const;
    size_t feasible_count() const { return masks_.size(); }

private:
    const Instance* inst_;
    std::vector<uint32_t> masks_;     // feasible masks ascending
    std::vector<uint32_t> id_;        // mask -> index into masks_ (dense, 2^n)
    std::vector<uint64_t> offset_;    // per feasible mask, into dp_
    std::vector<int32_t> dp_;         // dp[mask][j]: best depot->mask path ending at j
    std::vector<uint32_t> keys_;      // open-addressing hash: mask -> length
    std::vector<int32_t> len_;
    uint32_t hash_mask_ = 0, shift_ = 0;
};

// Line-oriented solution text: one "route" line per route plus cost and the
// three workload vectors. Used by the analysis pipeline and golden tests.
void write_solutions(std::ostream& out, const Instance& inst,
                     const std::vector<Solution>& sols);
std::vector<Solution> read_solutions(std::istream& in, const Instance& inst);

}  // namespace routeq

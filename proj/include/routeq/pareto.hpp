#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "routeq/equity.hpp"
#include "routeq/model.hpp"

namespace routeq {

// One of the 18 balance objectives: a workload resource paired with an equity
// function. Text form "<resource>:<function>", e.g. "distance:gini".
struct ObjectiveSpec {
    Resource resource = Resource::Distance;
    EquityFunction function = EquityFunction::Max;

    bool operator==(const ObjectiveSpec&) const = default;
    std::string text() const;
    // The sequencing filters bind only where a variable-sum resource meets a
    // non-monotonic function.
    bool filtered() const {
        return resource == Resource::Distance && !is_monotone(function);
    }
};

ObjectiveSpec parse_spec(const std::string& text);
// All 18 combinations: resources outer (distance, load, stops), functions
// inner (max, lex, range, mad, stdev, gini).
std::vector<ObjectiveSpec> all_specs();
int spec_index(const ObjectiveSpec& spec);

enum class Regime { Exact, Heuristic };

// a dominates b iff a is no worse in both coordinates and better in one.
bool dominates(long long cost_a, const BalanceValue& a, long long cost_b,
               const BalanceValue& b);

// Sequencing admissibility: Exact regime demands Held-Karp-length routes,
// Heuristic regime demands intra-route local optimality. Inactive for
// monotonic functions and constant-sum resources.
bool admissible(const Instance& inst, const Solution& sol, const ObjectiveSpec& spec,
                Regime regime);

enum class InsertStatus { Added, Dominated, Duplicate, Inadmissible };

// Non-dominated set of (solution, cost, balance) under one spec, sorted by
// cost ascending. Duplicate objective vectors keep the canonically smallest
// solution. finalize() applies the workload-consistency filter where the
// spec requires it.
class ParetoArchive {
public:
    struct Entry {
        Solution solution;
        long long cost;
        BalanceValue balance;
        WorkloadVector workload;  // under spec.resource
    };

    ParetoArchive(const Instance& inst, ObjectiveSpec spec, Regime regime = Regime::Exact);

    InsertStatus insert(const Solution& sol);
    // Fast path for solvers that already evaluated the objective.
    InsertStatus insert_evaluated(const Solution& sol, long long cost, BalanceValue balance);

    // Would (cost, balance) be added or collide with an equal objective vector?
    bool would_accept(long long cost, const BalanceValue& balance) const;

    // Applies the workload-consistency filter (Distance + non-monotonic only):
    // drops entries whose cost is strictly higher than another entry's while no
    // sorted workload position is strictly lower.
    void finalize();

    void merge(const ParetoArchive& other);

    const std::vector<Entry>& entries() const { return entries_; }
    size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const ObjectiveSpec& spec() const { return spec_; }
    Regime regime() const { return regime_; }
    const Instance& instance() const { return *inst_; }

private:
    const Instance* inst_;
    ObjectiveSpec spec_;
    Regime regime_;
    std::vector<Entry> entries_;
};

// Indices of entries surviving the consistency rule, given (cost, sorted-desc
// workload) pairs sharing one instance and the Distance resource.
std::vector<size_t> workload_consistency_filter(
    std::span<const std::pair<long long, std::vector<double>>> front);

// Front CSV in the sample-table layout: cost, balance (scalar or lex rank),
// then the descending workload vector.
void write_front_csv(std::ostream& out, const ParetoArchive& archive);

}  // namespace routeq

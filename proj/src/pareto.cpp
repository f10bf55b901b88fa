#include "routeq/pareto.hpp"

#include <algorithm>
#include <ostream>

namespace routeq {

std::string ObjectiveSpec::text() const {
    return std::string(to_string(resource)) + ":" + to_string(function);
}

ObjectiveSpec parse_spec(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw UsageError("spec must be <resource>:<function>, got: " + text);
    return {parse_resource(text.substr(0, colon)),
            parse_equity_function(text.substr(colon + 1))};
}

std::vector<ObjectiveSpec> all_specs() {
    std::vector<ObjectiveSpec> out;
    for (Resource r : {Resource::Distance, Resource::Load, Resource::Stops})
        for (EquityFunction f : kAllFunctions) out.push_back({r, f});
    return out;
}

int spec_index(const ObjectiveSpec& spec) {
    return static_cast<int>(spec.resource) * 6 + static_cast<int>(spec.function);
}

bool dominates(long long cost_a, const BalanceValue& a, long long cost_b,
               const BalanceValue& b) {
    const int c = compare(a, b);
    if (cost_a > cost_b || c > 0) return false;
    return cost_a < cost_b || c < 0;
}

bool admissible(const Instance& inst, const Solution& sol, const ObjectiveSpec& spec,
                Regime regime) {
    if (!spec.filtered()) return true;
    if (regime == Regime::Heuristic) return is_sequencing_local_optimum(inst, sol);
    for (const auto& route : sol.routes()) {
        auto [seq, best] = tsp_optimal_order(inst, route);
        if (route_length(inst, route) != best) return false;
    }
    return true;
}

ParetoArchive::ParetoArchive(const Instance& inst, ObjectiveSpec spec, Regime regime)
    : inst_(&inst), spec_(spec), regime_(regime) {}

bool ParetoArchive::would_accept(long long cost, const BalanceValue& balance) const {
    // entries are cost-ascending with strictly improving balance
    size_t lo = 0, hi = entries_.size();
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (entries_[mid].cost <= cost) lo = mid + 1; else hi = mid;
    }
    if (lo == 0) return true;  // cheaper than everything
    const auto& pred = entries_[lo - 1];
    const int c = compare(balance, pred.balance);
    if (c < 0) return true;
    return c == 0 && pred.cost == cost;  // equal objective vector: dedup case
}

InsertStatus ParetoArchive::insert_evaluated(const Solution& sol, long long cost,
                                             BalanceValue balance) {
    size_t lo = 0, hi = entries_.size();
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (entries_[mid].cost < cost) lo = mid + 1; else hi = mid;
    }
    // equal objective vector collapses to the canonically smallest solution
    if (lo < entries_.size() && entries_[lo].cost == cost &&
        compare(entries_[lo].balance, balance) == 0) {
        if (sol < entries_[lo].solution) {
            entries_[lo].solution = sol;
            entries_[lo].workload = workload_vector(*inst_, sol, spec_.resource);
        }
        return InsertStatus::Duplicate;
    }
    if (lo > 0 && compare(entries_[lo - 1].balance, balance) <= 0)
        return InsertStatus::Dominated;
    if (lo < entries_.size() && entries_[lo].cost == cost &&
        compare(entries_[lo].balance, balance) < 0)
        return InsertStatus::Dominated;
    size_t rm = lo;
    while (rm < entries_.size() && compare(entries_[rm].balance, balance) >= 0) ++rm;
    entries_.erase(entries_.begin() + lo, entries_.begin() + rm);
    entries_.insert(entries_.begin() + lo,
                    Entry{sol, cost, std::move(balance),
                          workload_vector(*inst_, sol, spec_.resource)});
    return InsertStatus::Added;
}

InsertStatus ParetoArchive::insert(const Solution& sol) {
    if (!admissible(*inst_, sol, spec_, regime_)) return InsertStatus::Inadmissible;
    auto w = workload_vector(*inst_, sol, spec_.resource);
    return insert_evaluated(sol, sol.cost(), evaluate(spec_.function, w));
}

std::vector<size_t> workload_consistency_filter(
    std::span<const std::pair<long long, std::vector<double>>> front) {
    std::vector<size_t> kept;
    for (size_t x = 0; x < front.size(); ++x) {
        bool inconsistent = false;
        for (size_t y = 0; y < front.size() && !inconsistent; ++y) {
            if (front[y].first >= front[x].first) continue;  // strict cost rule
            const auto& wy = front[y].second;
            const auto& wx = front[x].second;
            bool some_lower = false;
            for (size_t i = 0; i < wx.size(); ++i)
                if (wx[i] < wy[i]) { some_lower = true; break; }
            if (!some_lower) inconsistent = true;
        }
        if (!inconsistent) kept.push_back(x);
    }
    return kept;
}

void ParetoArchive::finalize() {
    if (!spec_.filtered() || entries_.size() < 2) return;
    std::vector<std::pair<long long, std::vector<double>>> view;
    view.reserve(entries_.size());
    for (const auto& e : entries_) view.emplace_back(e.cost, e.workload.sorted_desc);
    auto kept = workload_consistency_filter(view);
    if (kept.size() == entries_.size()) return;
    std::vector<Entry> filtered;
    filtered.reserve(kept.size());
    for (size_t i : kept) filtered.push_back(std::move(entries_[i]));
    entries_ = std::move(filtered);
}

void ParetoArchive::merge(const ParetoArchive& other) {
    if (!(other.spec_ == spec_)) throw UsageError("merging archives with different specs");
    for (const auto& e : other.entries_) insert_evaluated(e.solution, e.cost, e.balance);
}

void write_front_csv(std::ostream& out, const ParetoArchive& archive) {
    const auto& entries = archive.entries();
    const size_t k = entries.empty() ? 0 : entries.front().workload.sorted_desc.size();
    out << "cost,balance";
    for (size_t i = 0; i < k; ++i) out << ",w" << i + 1;
    out << "\n";
    const bool lex = archive.spec().function == EquityFunction::Lex;
    for (size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        out << e.cost << ",";
        if (lex) {
            // rank within the front, 1 = lex-best (the last, most expensive entry)
            out << entries.size() - i;
        } else {
            out << e.balance.value();
        }
        for (double v : e.workload.sorted_desc) out << "," << v;
        out << "\n";
    }
}

}  // namespace routeq

#include "routeq/model.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace routeq {

const char* to_string(Resource r) {
    switch (r) {
        case Resource::Distance: return "distance";
        case Resource::Load: return "load";
        case Resource::Stops: return "stops";
    }
    return "?";
}

Resource parse_resource(const std::string& text) {
    if (text == "distance") return Resource::Distance;
    if (text == "load") return Resource::Load;
    if (text == "stops") return Resource::Stops;
    throw UsageError("unknown resource: " + text);
}

WorkloadVector WorkloadVector::of(Resource r, std::vector<double> values) {
    WorkloadVector w;
    w.resource = r;
    w.sorted_desc = values;
    w.values = std::move(values);
    std::sort(w.sorted_desc.begin(), w.sorted_desc.end(), std::greater<>());
    return w;
}

long long route_length(const Instance& inst, const std::vector<int>& route) {
    if (route.empty()) return 0;
    long long len = inst.dist(0, route.front());
    for (size_t i = 0; i + 1 < route.size(); ++i) len += inst.dist(route[i], route[i + 1]);
    len += inst.dist(route.back(), 0);
    return len;
}

long long route_demand(const Instance& inst, const std::vector<int>& route) {
    long long sum = 0;
    for (int c : route) sum += inst.demand(c);
    return sum;
}

namespace {

void canonicalize(const Instance& inst, std::vector<std::vector<int>>& routes) {
    for (auto& r : routes)
        if (r.size() > 1 && r.back() < r.front()) std::reverse(r.begin(), r.end());
    std::vector<std::pair<std::pair<long long, long long>, size_t>> key(routes.size());
    for (size_t i = 0; i < routes.size(); ++i)
        key[i] = {{-route_length(inst, routes[i]), -route_demand(inst, routes[i])}, i};
    std::sort(key.begin(), key.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return routes[a.second] < routes[b.second];
    });
    std::vector<std::vector<int>> sorted;
    sorted.reserve(routes.size());
    for (const auto& [k, i] : key) sorted.push_back(std::move(routes[i]));
    routes = std::move(sorted);
}

}  // namespace

Solution::Solution(const Instance& inst, std::vector<std::vector<int>> routes) {
    const int n = inst.num_customers();
    if (static_cast<int>(routes.size()) != inst.vehicles())
        throw StructuralError("solution must use exactly " + std::to_string(inst.vehicles()) +
                              " routes");
    std::vector<char> seen(n + 1, 0);
    for (const auto& r : routes) {
        if (r.empty()) throw StructuralError("empty route");
        long long load = 0;
        for (int c : r) {
            if (c < 1 || c > n) throw StructuralError("customer index out of range");
            if (seen[c]) throw StructuralError("customer visited twice");
            seen[c] = 1;
            load += inst.demand(c);
        }
        if (load > inst.capacity()) throw StructuralError("route exceeds capacity");
    }
    for (int c = 1; c <= n; ++c)
        if (!seen[c]) throw StructuralError("customer " + std::to_string(c) + " not visited");
    canonicalize(inst, routes);
    routes_ = std::move(routes);
    cost_ = 0;
    for (const auto& r : routes_) cost_ += route_length(inst, r);
}

Solution make_solution_unchecked(const Instance& inst, std::vector<std::vector<int>>&& routes,
                                 long long cost) {
    Solution s;
    canonicalize(inst, routes);
    s.routes_ = std::move(routes);
    s.cost_ = cost;
    return s;
}

WorkloadVector workload_vector(const Instance& inst, const Solution& sol, Resource r) {
    std::vector<double> vals;
    vals.reserve(sol.routes().size());
    for (const auto& route : sol.routes()) {
        switch (r) {
            case Resource::Distance: vals.push_back(static_cast<double>(route_length(inst, route))); break;
            case Resource::Load: vals.push_back(static_cast<double>(route_demand(inst, route))); break;
            case Resource::Stops: vals.push_back(static_cast<double>(route.size())); break;
        }
    }
    return WorkloadVector::of(r, std::move(vals));
}

namespace {

// dp[mask][j] = min cost path depot -> (all of mask) -> j, j a bit position of
// mask. By symmetry this is also the best completion j -> mask\{j} -> depot,
// which drives both the optimum and the lexicographic reconstruction.
struct HeldKarp {
    const Instance& inst;
    std::vector<int> nodes;          // customers, ascending
    int s;
    std::vector<int32_t> dp;         // (1<<s) * s

    HeldKarp(const Instance& in, std::vector<int> subset) : inst(in), nodes(std::move(subset)) {
        std::sort(nodes.begin(), nodes.end());
        s = static_cast<int>(nodes.size());
        dp.assign(static_cast<size_t>(1) << s, 0);
        dp.resize((static_cast<size_t>(1) << s) * s);
        for (int j = 0; j < s; ++j) dp[(1u << j) * static_cast<size_t>(s) + j] = inst.dist(0, nodes[j]);
        for (uint32_t m = 1; m < (1u << s); ++m) {
            if (std::popcount(m) < 2) continue;
            for (uint32_t mj = m; mj; mj &= mj - 1) {
                const int j = std::countr_zero(mj);
                const uint32_t sub = m ^ (1u << j);
                int32_t best = INT32_MAX;
                for (uint32_t mi = sub; mi; mi &= mi - 1) {
                    const int i = std::countr_zero(mi);
                    const int32_t c = dp[sub * static_cast<size_t>(s) + i] +
                                      inst.dist(nodes[i], nodes[j]);
                    best = std::min(best, c);
                }
                dp[m * static_cast<size_t>(s) + j] = best;
            }
        }
    }

    long long optimum() const {
        const uint32_t full = (1u << s) - 1;
        int32_t best = INT32_MAX;
        for (int j = 0; j < s; ++j)
            best = std::min(best, dp[full * static_cast<size_t>(s) + j] + inst.dist(nodes[j], 0));
        return best;
    }

    // Cheapest continuation from `from` through all of `rest` back to the depot.
    int32_t completion(int from, uint32_t rest) const {
        if (rest == 0) return inst.dist(from, 0);
        int32_t best = INT32_MAX;
        for (uint32_t mw = rest; mw; mw &= mw - 1) {
            const int w = std::countr_zero(mw);
            best = std::min(best, dp[rest * static_cast<size_t>(s) + w] +
                                      inst.dist(from, nodes[w]));
        }
        return best;
    }

    // Walks forward always taking the smallest customer that still reaches the
    // optimum, yielding the lexicographically smallest optimal sequence.
    std::vector<int> reconstruct() const {
        const long long target = optimum();
        std::vector<int> seq;
        seq.reserve(s);
        uint32_t rest = (1u << s) - 1;
        int from = 0;  // depot
        long long sofar = 0;
        while (rest) {
            for (uint32_t mc = rest;; mc &= mc - 1) {
                const int c = std::countr_zero(mc);
                const uint32_t r2 = rest ^ (1u << c);
                long long t = sofar + inst.dist(from, nodes[c]);
                t += r2 ? completion(c, r2) : inst.dist(nodes[c], 0);
                if (t == target) {
                    sofar += inst.dist(from, nodes[c]);
                    from = nodes[c];
                    seq.push_back(nodes[c]);
                    rest = r2;
                    break;
                }
            }
        }
        return seq;
    }
};

}  // namespace

std::pair<std::vector<int>, long long> tsp_optimal_order(const Instance& inst,
                                                         std::vector<int> subset) {
    if (subset.empty()) throw UsageError("empty subset");
    if (static_cast<int>(subset.size()) > kHeldKarpLimit)
        throw CapabilityError("subset of " + std::to_string(subset.size()) +
                              " customers exceeds the Held-Karp bound of " +
                              std::to_string(kHeldKarpLimit) + "; use heuristic sequencing");
    HeldKarp hk(inst, std::move(subset));
    return {hk.reconstruct(), hk.optimum()};
}

bool is_route_local_optimum(const Instance& inst, const std::vector<int>& route) {
    const int s = static_cast<int>(route.size());
    if (s <= 2) return true;
    const long long base = route_length(inst, route);
    std::vector<int> r = route;
    // relocate
    for (int i = 0; i < s; ++i) {
        for (int j = 0; j < s; ++j) {
            if (i == j) continue;
            std::vector<int> t = r;
            int c = t[i];
            t.erase(t.begin() + i);
            t.insert(t.begin() + j, c);
            if (route_length(inst, t) < base) return false;
        }
    }
    // swap
    for (int i = 0; i < s; ++i)
        for (int j = i + 1; j < s; ++j) {
            std::vector<int> t = r;
            std::swap(t[i], t[j]);
            if (route_length(inst, t) < base) return false;
        }
    // 2-opt segment reversal
    for (int i = 0; i < s; ++i)
        for (int j = i + 1; j < s; ++j) {
            std::vector<int> t = r;
            std::reverse(t.begin() + i, t.begin() + j + 1);
            if (route_length(inst, t) < base) return false;
        }
    return true;
}

bool is_sequencing_local_optimum(const Instance& inst, const Solution& sol) {
    for (const auto& r : sol.routes())
        if (!is_route_local_optimum(inst, r)) return false;
    return true;
}

void improve_route_sequencing(const Instance& inst, std::vector<int>& route) {
    const int s = static_cast<int>(route.size());
    if (s <= 2) return;
    bool improved = true;
    while (improved) {
        improved = false;
        long long base = route_length(inst, route);
        for (int i = 0; i < s && !improved; ++i)
            for (int j = i + 1; j < s && !improved; ++j) {
                std::reverse(route.begin() + i, route.begin() + j + 1);
                if (route_length(inst, route) < base) {
                    improved = true;
                } else {
                    std::reverse(route.begin() + i, route.begin() + j + 1);
                }
            }
        for (int i = 0; i < s && !improved; ++i)
            for (int j = 0; j < s && !improved; ++j) {
                if (i == j) continue;
                std::vector<int> t = route;
                int c = t[i];
                t.erase(t.begin() + i);
                t.insert(t.begin() + j, c);
                if (route_length(inst, t) < base) {
                    route = std::move(t);
                    improved = true;
                }
            }
        for (int i = 0; i < s && !improved; ++i)
            for (int j = i + 1; j < s && !improved; ++j) {
                std::vector<int> t = route;
                std::swap(t[i], t[j]);
                if (route_length(inst, t) < base) {
                    route = std::move(t);
                    improved = true;
                }
            }
    }
}

TourTable::TourTable(const Instance& inst) : inst_(&inst) {
    const int n = inst.num_customers();
    if (n > 22) throw CapabilityError("tour table supports at most 22 customers");
    const uint32_t NM = 1u << n;
    std::vector<int64_t> load(NM, 0);
    for (uint32_t m = 1; m < NM; ++m)
        load[m] = load[m & (m - 1)] + inst.demand(std::countr_zero(m) + 1);
    masks_.clear();
    for (uint32_t m = 1; m < NM; ++m)
        if (load[m] <= inst.capacity()) masks_.push_back(m);

    id_.assign(NM, UINT32_MAX);
    for (size_t i = 0; i < masks_.size(); ++i) id_[masks_[i]] = static_cast<uint32_t>(i);
    offset_.assign(masks_.size() + 1, 0);
    uint64_t total = 0;
    for (size_t i = 0; i < masks_.size(); ++i) {
        offset_[i] = total;
        total += std::popcount(masks_[i]);
    }
    offset_[masks_.size()] = total;
    dp_.assign(total, 0);
    std::vector<int32_t> lengths(masks_.size());

    int bits[22];
    for (size_t i = 0; i < masks_.size(); ++i) {
        const uint32_t m = masks_[i];
        int nb = 0;
        for (uint32_t t = m; t; t &= t - 1) bits[nb++] = std::countr_zero(t);
        int32_t* row = dp_.data() + offset_[i];
        if (nb == 1) {
            row[0] = inst.dist(0, bits[0] + 1);
        } else {
            for (int jj = 0; jj < nb; ++jj) {
                const int j = bits[jj];
                const uint32_t sub = m ^ (1u << j);
                const int32_t* prow = dp_.data() + offset_[id_[sub]];
                int32_t best = INT32_MAX;
                int ii = 0;
                for (uint32_t t = sub; t; t &= t - 1, ++ii) {
                    const int i2 = std::countr_zero(t);
                    best = std::min(best, prow[ii] + inst.dist(i2 + 1, j + 1));
                }
                row[jj] = best;
            }
        }
        int32_t best = INT32_MAX;
        for (int jj = 0; jj < nb; ++jj)
            best = std::min(best, row[jj] + inst.dist(bits[jj] + 1, 0));
        lengths[i] = best;
    }

    uint32_t cap = 2;
    while (cap < masks_.size() * 2) cap <<= 1;
    hash_mask_ = cap - 1;
    shift_ = 32 - static_cast<uint32_t>(std::countr_zero(cap));
    keys_.assign(cap, 0);
    len_.assign(cap, 0);
    for (size_t i = 0; i < masks_.size(); ++i) {
        uint32_t h = (masks_[i] * 2654435761u) >> shift_;
        while (keys_[h] != 0) h = (h + 1) & hash_mask_;
        keys_[h] = masks_[i];
        len_[h] = lengths[i];
    }
}

long long TourTable::demand(uint32_t mask) const {
    long long s = 0;
    for (uint32_t t = mask; t; t &= t - 1) s += inst_->demand(std::countr_zero(t) + 1);
    return s;
}

std::vector<int> TourTable::sequence(uint32_t mask) const {
    const long long target = length(mask);
    std::vector<int> seq;
    seq.reserve(std::popcount(mask));
    uint32_t rest = mask;
    int from = 0;
    long long sofar = 0;
    auto completion = [&](int v, uint32_t r) -> long long {
        if (r == 0) return inst_->dist(v, 0);
        const uint32_t rid = id_[r];
        const int32_t* row = dp_.data() + offset_[rid];
        long long best = INT64_MAX;
        int ii = 0;
        for (uint32_t t = r; t; t &= t - 1, ++ii) {
            const int w = std::countr_zero(t) + 1;
            best = std::min<long long>(best, row[ii] + inst_->dist(v, w));
        }
        return best;
    };
    while (rest) {
        for (uint32_t mc = rest;; mc &= mc - 1) {
            const uint32_t bit = mc & (~mc + 1);
            const int c = std::countr_zero(bit) + 1;
            const uint32_t r2 = rest ^ bit;
            long long t = sofar + inst_->dist(from, c) + completion(c, r2);
            if (t == target) {
                sofar += inst_->dist(from, c);
                from = c;
                seq.push_back(c);
                rest = r2;
                break;
            }
        }
    }
    return seq;
}

void write_solutions(std::ostream& out, const Instance& inst,
                     const std::vector<Solution>& sols) {
    out << "instance " << inst.name() << "\n";
    int id = 0;
    for (const auto& s : sols) {
        out << "solution " << ++id << "\n";
        out << "cost " << s.cost() << "\n";
        for (const auto& r : s.routes()) {
            out << "route";
            for (int c : r) out << ' ' << c;
            out << "\n";
        }
        for (Resource res : {Resource::Distance, Resource::Load, Resource::Stops}) {
            auto w = workload_vector(inst, s, res);
            out << "workload " << to_string(res);
            for (double v : w.sorted_desc) out << ' ' << v;
            out << "\n";
        }
        out << "end\n";
    }
}

std::vector<Solution> read_solutions(std::istream& in, const Instance& inst) {
    std::vector<Solution> out;
    std::vector<std::vector<int>> routes;
    bool open = false;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "solution") {
            if (open) throw ParseError("nested solution block", lineno);
            open = true;
            routes.clear();
        } else if (tag == "route") {
            if (!open) throw ParseError("route outside a solution block", lineno);
            std::vector<int> r;
            int c;
            while (ls >> c) r.push_back(c);
            routes.push_back(std::move(r));
        } else if (tag == "end") {
            if (!open) throw ParseError("stray end", lineno);
            out.emplace_back(inst, routes);
            open = false;
        }
        // "instance", "cost" and "workload" lines are informational
    }
    if (open) throw ParseError("unterminated solution block", lineno);
    return out;
}

}  // namespace routeq

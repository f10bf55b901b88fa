#include "routeq/solver_exact.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <climits>
#include <cmath>

#include "routeq/detail/equity_forms.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace routeq {

namespace {

constexpr double kInf = 1e300;
constexpr double kPad = 1.0 + 1e-12;

void check_limits(const Instance& inst, const EnumerationLimits& limits) {
    if (inst.num_customers() > limits.max_customers || inst.vehicles() > limits.max_vehicles)
        throw CapabilityError("instance too large for enumeration (n=" +
                              std::to_string(inst.num_customers()) + ", K=" +
                              std::to_string(inst.vehicles()) +
                              "); use the heuristic solver");
}

template <class T>
inline void sort_desc_t(T* v, int k) {
    for (int i = 1; i < k; ++i) {
        const T x = v[i];
        int j = i - 1;
        while (j >= 0 && v[j] < x) { v[j + 1] = v[j]; --j; }
        v[j + 1] = x;
    }
}
inline void sort_desc_i32(int32_t* v, int k) { sort_desc_t(v, k); }
inline void sort_desc_i64(int64_t* v, int k) { sort_desc_t(v, k); }

// Screen-form balance of a front entry, recomputed from its workload vector
// with the same closed forms the leaf uses, so threshold comparisons are exact.
double screen_form(EquityFunction f, std::span<const double> sorted_desc) {
    const double mean = detail::sorted_sum(sorted_desc) / static_cast<double>(sorted_desc.size());
    switch (f) {
        case EquityFunction::Max: return sorted_desc.front();
        case EquityFunction::Range: return sorted_desc.front() - sorted_desc.back();
        case EquityFunction::Mad: return detail::mad_sorted(sorted_desc, mean);
        case EquityFunction::StDev: return detail::ssq_sorted(sorted_desc, mean);
        case EquityFunction::Gini: return detail::gini_sorted(sorted_desc, mean);
        case EquityFunction::Lex: break;
    }
    return 0;
}

// StDev screens on the sum of squared deviations; distinct ssq values can
// collapse to one stdev after sqrt, so near-ties must fall through to the
// authoritative insert instead of being rejected.
inline bool near_tie(double a, double b) {
    return std::abs(a - b) <= 1e-12 * (std::abs(a) + std::abs(b));
}

struct ScalarScreen {
    long long cmin = LLONG_MAX, cmax = LLONG_MIN;
    double minbal = kInf;
    bool fuzzy = false;  // StDev: accept near-ties, let the archive decide
    std::vector<double> thr;
    std::vector<long long> ecost;

    bool accept(long long cost, double b) const {
        if (cost > cmax) return b < minbal;
        if (cost < cmin) return true;
        const size_t i = static_cast<size_t>(cost - cmin);
        const double t = thr[i];
        if (b < t) return true;
        if (b == t && cost == ecost[i]) return true;
        return fuzzy && near_tie(b, t);
    }
};

struct LexScreen {
    long long cmin = LLONG_MAX, cmax = LLONG_MIN;
    int k = 0;
    std::vector<double> keys;        // k doubles per entry, cost ascending
    std::vector<long long> costs;    // entry costs
    std::vector<uint32_t> idx;       // [cost - cmin] -> entry index

    const double* key(size_t e) const { return keys.data() + e * k; }

    int cmp(const double* a, const double* b) const {
        for (int i = 0; i < k; ++i) {
            if (a[i] < b[i]) return -1;
            if (a[i] > b[i]) return 1;
        }
        return 0;
    }

    bool accept(long long cost, const double* b) const {
        if (costs.empty()) return true;
        if (cost > cmax) return cmp(b, key(costs.size() - 1)) < 0;
        if (cost < cmin) return true;
        const size_t i = static_cast<size_t>(cost - cmin);
        const int c = cmp(b, key(idx[i]));
        if (c < 0) return true;
        return c == 0 && costs[idx[i]] == cost;
    }
};

struct SpecScreens {
    std::vector<ObjectiveSpec> specs;
    std::vector<ScalarScreen> scalar;
    std::vector<LexScreen> lex;
    uint64_t generation = 0;

    void rebuild(size_t s, const ParetoArchive& a) {
        ++generation;
        const auto& es = a.entries();
        if (specs[s].function == EquityFunction::Lex) {
            auto& L = lex[s];
            L.keys.clear();
            L.costs.clear();
            L.idx.clear();
            if (es.empty()) { L.cmin = LLONG_MAX; L.cmax = LLONG_MIN; return; }
            L.k = static_cast<int>(es.front().balance.key().size());
            for (const auto& e : es) {
                L.keys.insert(L.keys.end(), e.balance.key().begin(), e.balance.key().end());
                L.costs.push_back(e.cost);
            }
            L.cmin = es.front().cost;
            L.cmax = es.back().cost;
            L.idx.assign(static_cast<size_t>(L.cmax - L.cmin + 1), 0);
            size_t j = 0;
            for (long long c = L.cmin; c <= L.cmax; ++c) {
                while (j + 1 < es.size() && es[j + 1].cost <= c) ++j;
                L.idx[static_cast<size_t>(c - L.cmin)] = static_cast<uint32_t>(j);
            }
        } else {
            auto& S = scalar[s];
            S.fuzzy = specs[s].function == EquityFunction::StDev;
            if (es.empty()) { S.cmin = LLONG_MAX; S.cmax = LLONG_MIN; S.minbal = kInf; return; }
            S.cmin = es.front().cost;
            S.cmax = es.back().cost;
            S.minbal = screen_form(specs[s].function, es.back().workload.sorted_desc);
            const size_t range = static_cast<size_t>(S.cmax - S.cmin + 1);
            S.thr.assign(range, 0.0);
            S.ecost.assign(range, 0);
            size_t j = 0;
            for (long long c = S.cmin; c <= S.cmax; ++c) {
                while (j + 1 < es.size() && es[j + 1].cost <= c) ++j;
                S.thr[static_cast<size_t>(c - S.cmin)] =
                    screen_form(specs[s].function, es[j].workload.sorted_desc);
                S.ecost[static_cast<size_t>(c - S.cmin)] = es[j].cost;
            }
        }
    }
};

// ---------------------------------------------------------------------------

struct PartState {
    uint32_t mask = 0;
    int32_t len = 0;
    int64_t load = 0;
    int32_t size = 0;
};

struct NullSink {
    void leaf(const PartState*, int, long long) {}
};

// Anchored-part recursion: each part opens on the smallest remaining customer
// and extends only with larger ones, so every set partition into exactly K
// nonempty capacity-feasible parts is visited once, in deterministic order.
template <class Sink>
class Enumerator {
public:
    Enumerator(const Instance& inst, const TourTable& table, Sink& sink)
        : table_(table), sink_(sink), n_(inst.num_customers()), k_(inst.vehicles()),
          q_(inst.capacity()) {
        for (int c = 1; c <= n_; ++c) demand_[c - 1] = inst.demand(c);
        total_load_ = inst.total_demand();
    }

    void run() {
        const uint32_t full = (1u << n_) - 1;
        if (k_ == 1) {
            if (total_load_ <= q_) leaf(full, total_load_, n_, 0);
            return;
        }
        parts(full, total_load_, n_, k_, 0);
    }

    // Only partitions whose part containing customer 1 equals `first`.
    void run_with_first(uint32_t first) {
        const uint32_t full = (1u << n_) - 1;
        if (k_ == 1) {
            if (first == full && total_load_ <= q_) leaf(full, total_load_, n_, 0);
            return;
        }
        int64_t load = 0;
        for (uint32_t t = first; t; t &= t - 1) load += demand_[std::countr_zero(t)];
        record_part(0, first, load);
        const uint32_t rest = full ^ first;
        if (k_ == 2) {
            const int64_t rest_load = total_load_ - load;
            const int rest_count = n_ - std::popcount(first);
            if (rest_count > 0 && rest_load <= q_) leaf(rest, rest_load, rest_count, 1);
            return;
        }
        parts(rest, total_load_ - load, n_ - std::popcount(first), k_ - 1, 1);
    }

    std::vector<uint32_t> first_parts() {
        std::vector<uint32_t> out;
        if (k_ == 1) {
            if (total_load_ <= q_) out.push_back((1u << n_) - 1);
            return out;
        }
        const uint32_t full = (1u << n_) - 1;
        collect_ = &out;
        const uint32_t anchor = 1u;
        grow_collect(full ^ anchor, anchor, demand_[0], 1, total_load_, n_, k_);
        collect_ = nullptr;
        return out;
    }

private:
    void record_part(int level, uint32_t mask, int64_t load) {
        auto& p = part_[level];
        p.mask = mask;
        p.len = table_.length(mask);
        p.load = load;
        p.size = std::popcount(mask);
        prefix_cost_[level + 1] = prefix_cost_[level] + p.len;
    }

    void parts(uint32_t remaining, int64_t rem_load, int rem_count, int left, int level) {
        const uint32_t anchor = remaining & (~remaining + 1);
        const int ac = std::countr_zero(anchor);
        grow(remaining ^ anchor, anchor, demand_[ac], 1, remaining, rem_load, rem_count, left,
             level);
    }

    void grow(uint32_t avail, uint32_t part, int64_t load, int size, uint32_t remaining,
              int64_t rem_load, int rem_count, int left, int level) {
        const int rest_count = rem_count - size;
        const int64_t rest_load = rem_load - load;
        if (rest_count >= left - 1 && rest_load <= static_cast<int64_t>(left - 1) * q_) {
            if (left == 2) {
                if (rest_load <= q_) {
                    record_part(level, part, load);
                    leaf(remaining ^ part, rest_load, rest_count, level + 1);
                }
            } else {
                record_part(level, part, load);
                parts(remaining ^ part, rest_load, rest_count, left - 1, level + 1);
            }
        }
        if (rest_count <= left - 1) return;  // the rest is owed to the other parts
        for (uint32_t m = avail; m; m &= m - 1) {
            const uint32_t bit = m & (~m + 1);
            const int64_t nl = load + demand_[std::countr_zero(bit)];
            if (nl > q_) continue;
            grow(m ^ bit, part | bit, nl, size + 1, remaining, rem_load, rem_count, left, level);
        }
    }

    void grow_collect(uint32_t avail, uint32_t part, int64_t load, int size, int64_t rem_load,
                      int rem_count, int left) {
        const int rest_count = rem_count - size;
        const int64_t rest_load = rem_load - load;
        if (rest_count >= left - 1 && rest_load <= static_cast<int64_t>(left - 1) * q_)
            collect_->push_back(part);
        if (rest_count <= left - 1) return;
        for (uint32_t m = avail; m; m &= m - 1) {
            const uint32_t bit = m & (~m + 1);
            const int64_t nl = load + demand_[std::countr_zero(bit)];
            if (nl > q_) continue;
            grow_collect(m ^ bit, part | bit, nl, size + 1, rem_load, rem_count, left);
        }
    }

    void leaf(uint32_t last_mask, int64_t last_load, int last_count, int levels_filled) {
        auto& p = part_[levels_filled];
        p.mask = last_mask;
        p.len = table_.length(last_mask);
        p.load = last_load;
        p.size = last_count;
        sink_.leaf(part_, levels_filled + 1, prefix_cost_[levels_filled] + p.len);
    }

    const TourTable& table_;
    Sink& sink_;
    int n_, k_;
    int64_t q_;
    int32_t demand_[32] = {0};
    int64_t total_load_ = 0;
    PartState part_[8];
    int64_t prefix_cost_[9] = {0};
    std::vector<uint32_t>* collect_ = nullptr;
};

struct VisitorSink {
    const Instance& inst;
    const TourTable& table;
    const std::function<void(const Solution&)>& visit;

    void leaf(const PartState* parts, int k, long long cost) {
        std::vector<std::vector<int>> routes;
        routes.reserve(k);
        for (int j = 0; j < k; ++j) routes.push_back(table.sequence(parts[j].mask));
        visit(make_solution_unchecked(inst, std::move(routes), cost));
    }
};

// The solving sink: archives stay small, so the hot path screens candidates
// against per-spec staircases and only materializes survivors.
struct FrontSink {
    const Instance& inst;
    const TourTable& table;
    std::vector<ParetoArchive> archives;
    SpecScreens screens;
    ResourceTotals totals;
    unsigned long long count = 0;
    int k;
    std::vector<int> const_ids;  // specs over load/stops
    std::vector<int> dist_ids;   // specs over distance
    // beyond-window fast rejection for the distance specs: once cost exceeds
    // every distance front's max cost, a candidate matters only if it beats
    // some front's best balance; cheap lower bounds on the dispersion measures
    // (all in terms of max and min tour length) reject almost every leaf.
    long long scalar_window_min = LLONG_MAX, scalar_window_max = LLONG_MIN;
    double fr_max = kInf, fr_range = kInf, fr_madK = kInf, fr_ssq2 = kInf, fr_giniC = kInf;
    // packed per-cost thresholds inside the union window, 5 per slot:
    // max, range, mad*K, ssq*2, gini*K*cost/(K-1); +inf below a spec's window
    std::vector<double> packed;
    // lex fast compare: pointer to the relevant key's first two elements
    bool lex_present = false;
    const LexScreen* lexs = nullptr;
    // constant-resource memo: for the current sorted (loads, stops) tuples,
    // the cost bound below which each constant-resource spec could still accept
    int64_t memo_lsorted[8], memo_ssorted[8];
    std::vector<long long> memo_cprime;
    long long memo_maxc = LLONG_MIN;
    bool memo_valid = false;
    uint64_t memo_gen = 0;
    // workload-total extremes, tracked in integers on the hot path
    int64_t tmin[3], tmax[3];
    bool tseen = false;

    FrontSink(const Instance& in, const TourTable& t, std::span<const ObjectiveSpec> specs)
        : inst(in), table(t), k(in.vehicles()) {
        screens.specs.assign(specs.begin(), specs.end());
        screens.scalar.resize(specs.size());
        screens.lex.resize(specs.size());
        for (size_t s = 0; s < specs.size(); ++s) {
            screens.scalar[s].fuzzy = specs[s].function == EquityFunction::StDev;
            archives.emplace_back(in, specs[s], Regime::Exact);
            (specs[s].resource == Resource::Distance ? dist_ids : const_ids)
                .push_back(static_cast<int>(s));
        }
        memo_cprime.resize(const_ids.size(), LLONG_MIN);
        recompute_fast_bounds();
    }

    // Rejection thresholds from the bounds mad >= range/K, ssq >= range^2/2,
    // gini >= (K-1) range / (K cost). Scaled thresholds are inflated by 1e-12
    // so bound arithmetic can never reject a candidate the archive would take.
    // Only the changed function's lane is refreshed unless the window grew.
    void recompute_fast_bounds(int changed_spec = -1) {
        const double kd = static_cast<double>(k);
        long long wmin = LLONG_MAX, wmax = LLONG_MIN;
        fr_max = fr_range = fr_madK = fr_ssq2 = fr_giniC = -kInf;
        lex_present = false;
        lexs = nullptr;
        bool any_scalar_empty = false;
        for (int s : dist_ids) {
            const auto& es = archives[s].entries();
            const EquityFunction f = screens.specs[s].function;
            if (f == EquityFunction::Lex) {
                lex_present = true;
                lexs = &screens.lex[s];
                continue;
            }
            if (es.empty()) { any_scalar_empty = true; continue; }
            wmin = std::min(wmin, es.front().cost);
            wmax = std::max(wmax, es.back().cost);
            const double minbal = es.back().balance.value();
            switch (f) {
                case EquityFunction::Max: fr_max = std::max(fr_max, minbal); break;
                case EquityFunction::Range: fr_range = std::max(fr_range, minbal); break;
                case EquityFunction::Mad:
                    fr_madK = std::max(fr_madK, minbal * kd * kPad);
                    break;
                case EquityFunction::StDev:
                    fr_ssq2 = std::max(fr_ssq2, minbal * minbal * kd * 2.0 * kPad);
                    break;
                case EquityFunction::Gini:
                    fr_giniC = std::max(fr_giniC, minbal * kd / (kd - 1.0) * kPad);
                    break;
                default: break;
            }
        }
        if (any_scalar_empty) {
            // some scalar front is still empty: nothing may be fast-rejected
            fr_max = fr_range = fr_madK = fr_ssq2 = fr_giniC = kInf;
            scalar_window_min = LLONG_MAX;
            scalar_window_max = LLONG_MIN;
            packed.clear();
            return;
        }
        if (wmax < wmin) return;  // no scalar dist specs
        const bool window_changed =
            wmin != scalar_window_min || wmax != scalar_window_max || packed.empty();
        scalar_window_min = wmin;
        scalar_window_max = wmax;
        if (window_changed) {
            packed.assign(static_cast<size_t>(wmax - wmin + 1) * 5, -kInf);
            for (int lane = 0; lane < 5; ++lane) refresh_lane(lane);
        } else if (changed_spec >= 0) {
            refresh_lane(pack_index(screens.specs[changed_spec].function));
        }
    }

    void refresh_lane(int lane) {
        const double kd = static_cast<double>(k);
        const size_t slots = static_cast<size_t>(scalar_window_max - scalar_window_min + 1);
        for (size_t i = 0; i < slots; ++i) packed[5 * i + lane] = -kInf;
        for (int s : dist_ids) {
            const EquityFunction f = screens.specs[s].function;
            if (f == EquityFunction::Lex || pack_index(f) != lane) continue;
            const auto& es = archives[s].entries();
            size_t j = 0;
            for (long long c = scalar_window_min; c <= scalar_window_max; ++c) {
                double v;
                if (c < es.front().cost) {
                    v = kInf;  // cheaper than this spec's whole front: never reject
                } else {
                    while (j + 1 < es.size() && es[j + 1].cost <= c) ++j;
                    const double thr = es[j].balance.value();
                    switch (f) {
                        case EquityFunction::Max: v = thr; break;
                        case EquityFunction::Range: v = thr; break;
                        case EquityFunction::Mad: v = thr * kd * kPad; break;
                        case EquityFunction::StDev: v = thr * thr * kd * 2.0 * kPad; break;
                        default: v = thr * kd / (kd - 1.0) * kPad * static_cast<double>(c); break;
                    }
                }
                double& slot = packed[5 * static_cast<size_t>(c - scalar_window_min) +
                                      static_cast<size_t>(lane)];
                slot = std::max(slot, v);
            }
        }
    }

    static int pack_index(EquityFunction f) {
        switch (f) {
            case EquityFunction::Max: return 0;
            case EquityFunction::Range: return 1;
            case EquityFunction::Mad: return 2;
            case EquityFunction::StDev: return 3;
            default: return 4;
        }
    }

    void leaf(const PartState* parts, int kk, long long cost) {
        ++count;
        int32_t di[8];
        int64_t li[8], si[8];
        int64_t load_total = 0, stop_total = 0;
        for (int j = 0; j < kk; ++j) {
            di[j] = parts[j].len;
            li[j] = parts[j].load;
            si[j] = parts[j].size;
            load_total += parts[j].load;
            stop_total += parts[j].size;
        }
        if (!tseen) {
            tseen = true;
            tmin[0] = tmax[0] = cost;
            tmin[1] = tmax[1] = load_total;
            tmin[2] = tmax[2] = stop_total;
        } else {
            if (cost < tmin[0]) tmin[0] = cost;
            if (cost > tmax[0]) tmax[0] = cost;
            if (load_total < tmin[1]) tmin[1] = load_total;
            if (load_total > tmax[1]) tmax[1] = load_total;
            if (stop_total < tmin[2]) tmin[2] = stop_total;
            if (stop_total > tmax[2]) tmax[2] = stop_total;
        }

        bool need_dist = !dist_ids.empty();
        if (need_dist) {
            int32_t v0 = di[0], v1 = INT32_MIN, v4 = di[0];
            for (int j = 1; j < kk; ++j) {
                if (di[j] > v0) { v1 = v0; v0 = di[j]; }
                else if (di[j] > v1) v1 = di[j];
                if (di[j] < v4) v4 = di[j];
            }
            const double v0d = static_cast<double>(v0);
            const double v1d = static_cast<double>(v1);
            const double rng = static_cast<double>(v0 - v4);
            bool scal_rej;
            if (cost > scalar_window_max) {
                scal_rej = v0d >= fr_max && rng >= fr_range && rng > fr_madK &&
                           rng * rng > fr_ssq2 && rng > fr_giniC * static_cast<double>(cost);
            } else if (cost >= scalar_window_min) {
                const double* t = packed.data() + 5 * static_cast<size_t>(cost - scalar_window_min);
                scal_rej = v0d > t[0] && rng > t[1] && rng > t[2] && rng * rng > t[3] &&
                           rng > t[4];
            } else {
                scal_rej = false;  // cheaper than every front entry
            }
            bool lex_rej = !lex_present;
            if (!lex_rej && !lexs->costs.empty()) {
                const double* tk = cost > lexs->cmax
                                       ? lexs->key(lexs->costs.size() - 1)
                                       : (cost >= lexs->cmin
                                              ? lexs->key(lexs->idx[static_cast<size_t>(
                                                    cost - lexs->cmin)])
                                              : nullptr);
                if (tk) lex_rej = v0d > tk[0] || (v0d == tk[0] && kk > 1 && v1d > tk[1]);
            }
            need_dist = !(scal_rej && lex_rej);
        }
        if (need_dist) {
            sort_desc_i32(di, kk);
            double dv[8];
            for (int j = 0; j < kk; ++j) dv[j] = static_cast<double>(di[j]);
            // fused closed forms; accumulation order matches the shared helpers
            double sum = 0;
            for (int j = 0; j < kk; ++j) sum += dv[j];
            const double mean = sum / static_cast<double>(kk);
            double sad = 0, ssq = 0, pairsum = 0;
            for (int j = 0; j < kk; ++j) {
                const double dev = dv[j] - mean;
                sad += std::abs(dv[j] - mean);
                ssq += dev * dev;
                pairsum += static_cast<double>(kk - 1 - 2 * j) * dv[j];
            }
            const double kd = static_cast<double>(kk);
            double bv[6];
            bv[static_cast<int>(EquityFunction::Max)] = dv[0];
            bv[static_cast<int>(EquityFunction::Range)] = dv[0] - dv[kk - 1];
            bv[static_cast<int>(EquityFunction::Mad)] = sad / kd;
            bv[static_cast<int>(EquityFunction::StDev)] = ssq;
            bv[static_cast<int>(EquityFunction::Gini)] = 2.0 * pairsum / (2.0 * kd * kd * mean);
            for (int s : dist_ids) {
                const EquityFunction f = screens.specs[s].function;
                const bool ok = f == EquityFunction::Lex
                                    ? screens.lex[s].accept(cost, dv)
                                    : screens.scalar[s].accept(cost, bv[static_cast<int>(f)]);
                if (ok) insert_candidate(s, cost, parts, kk);
            }
        }
        if (!const_ids.empty()) {
            sort_desc_i64(li, kk);
            sort_desc_i64(si, kk);
            const bool hit = memo_valid && memo_gen == screens.generation &&
                             std::equal(li, li + kk, memo_lsorted) &&
                             std::equal(si, si + kk, memo_ssorted);
            if (!hit) {
                std::copy(li, li + kk, memo_lsorted);
                std::copy(si, si + kk, memo_ssorted);
                memo_valid = true;
                rebuild_memo(kk);
            }
            if (cost <= memo_maxc) {
                for (size_t i = 0; i < const_ids.size(); ++i)
                    if (cost <= memo_cprime[i]) insert_candidate(const_ids[i], cost, parts, kk);
            }
        }
    }

    void rebuild_memo(int kk) {
        memo_gen = screens.generation;
        memo_maxc = LLONG_MIN;
        double lv[8], sv[8];
        for (int j = 0; j < kk; ++j) {
            lv[j] = static_cast<double>(memo_lsorted[j]);
            sv[j] = static_cast<double>(memo_ssorted[j]);
        }
        for (size_t i = 0; i < const_ids.size(); ++i) {
            const int s = const_ids[i];
            const auto& spec = screens.specs[s];
            const double* v = spec.resource == Resource::Load ? lv : sv;
            std::span<const double> sp(v, static_cast<size_t>(kk));
            long long cp;
            if (spec.function == EquityFunction::Lex) {
                cp = lex_accept_bound(s, sp);
            } else {
                const double mean = detail::sorted_sum(sp) / static_cast<double>(kk);
                double b;
                switch (spec.function) {
                    case EquityFunction::Max: b = sp.front(); break;
                    case EquityFunction::Range: b = sp.front() - sp.back(); break;
                    case EquityFunction::Mad: b = detail::mad_sorted(sp, mean); break;
                    case EquityFunction::StDev: b = detail::ssq_sorted(sp, mean); break;
                    default: b = detail::gini_sorted(sp, mean); break;
                }
                cp = scalar_accept_bound(s, b);
            }
            memo_cprime[i] = cp;
            if (cp > memo_maxc) memo_maxc = cp;
        }
    }

    // fold the integer extremes into the ResourceTotals record
    void flush_totals() {
        if (!tseen) return;
        const double mins[3] = {static_cast<double>(tmin[0]), static_cast<double>(tmin[1]),
                                static_cast<double>(tmin[2])};
        const double maxs[3] = {static_cast<double>(tmax[0]), static_cast<double>(tmax[1]),
                                static_cast<double>(tmax[2])};
        totals.inject(mins, maxs, count);
    }

    // Highest cost at which balance b could still be added (or tie for dedup).
    long long scalar_accept_bound(int s, double b) const {
        const auto& es = archives[s].entries();
        if (es.empty()) return LLONG_MAX;
        const EquityFunction f = screens.specs[s].function;
        size_t lo = 0, hi = es.size();
        while (lo < hi) {
            const size_t mid = (lo + hi) / 2;
            if (screen_form(f, es[mid].workload.sorted_desc) > b) lo = mid + 1; else hi = mid;
        }
        if (lo == es.size()) return LLONG_MAX;
        const double t = screen_form(f, es[lo].workload.sorted_desc);
        const bool eq = t == b || (f == EquityFunction::StDev && near_tie(t, b));
        return es[lo].cost - 1 + (eq ? 1 : 0);
    }

    long long lex_accept_bound(int s, std::span<const double> key) const {
        const auto& es = archives[s].entries();
        if (es.empty()) return LLONG_MAX;
        size_t lo = 0, hi = es.size();
        while (lo < hi) {
            const size_t mid = (lo + hi) / 2;
            if (lex_compare(std::span<const double>(es[mid].balance.key()), key) > 0)
                lo = mid + 1;
            else
                hi = mid;
        }
        if (lo == es.size()) return LLONG_MAX;
        const bool eq = lex_compare(std::span<const double>(es[lo].balance.key()), key) == 0;
        return es[lo].cost - 1 + (eq ? 1 : 0);
    }

    void insert_candidate(int s, long long cost, const PartState* parts, int kk) {
        std::vector<std::vector<int>> routes;
        routes.reserve(kk);
        for (int j = 0; j < kk; ++j) routes.push_back(table.sequence(parts[j].mask));
        Solution sol = make_solution_unchecked(inst, std::move(routes), cost);
        const auto w = workload_vector(inst, sol, screens.specs[s].resource);
        const auto status =
            archives[s].insert_evaluated(sol, cost, evaluate(screens.specs[s].function, w));
        if (status == InsertStatus::Added) {
            screens.rebuild(static_cast<size_t>(s), archives[s]);
            if (screens.specs[s].resource == Resource::Distance) recompute_fast_bounds(s);
        }
    }
};

ExactResult finalize_result(std::vector<ParetoArchive>&& archives, EnumerationStats stats) {
    for (auto& a : archives) a.finalize();
    return {std::move(archives), stats};
}

}  // namespace

void enumerate_feasible(const Instance& inst,
                        const std::function<void(const Solution&)>& visit,
                        const EnumerationLimits& limits) {
    check_limits(inst, limits);
    TourTable table(inst);
    VisitorSink sink{inst, table, visit};
    Enumerator<VisitorSink> e(inst, table, sink);
    e.run();
}

ExactResult solve_exact_serial(const Instance& inst, std::span<const ObjectiveSpec> specs,
                               const EnumerationLimits& limits) {
    check_limits(inst, limits);
    const auto t0 = std::chrono::steady_clock::now();
    TourTable table(inst);
    FrontSink sink(inst, table, specs);
    Enumerator<FrontSink> e(inst, table, sink);
    e.run();
    sink.flush_totals();
    EnumerationStats stats;
    stats.feasible_count = sink.count;
    stats.totals = sink.totals;
    stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return finalize_result(std::move(sink.archives), stats);
}

ExactResult solve_exact(const Instance& inst, std::span<const ObjectiveSpec> specs, int jobs,
                        const EnumerationLimits& limits) {
    check_limits(inst, limits);
#ifdef _OPENMP
    if (jobs <= 0) jobs = omp_get_max_threads();
#else
    jobs = 1;
#endif
    if (jobs <= 1 || inst.vehicles() < 2) return solve_exact_serial(inst, specs, limits);

    const auto t0 = std::chrono::steady_clock::now();
    TourTable table(inst);
    NullSink null;
    Enumerator<NullSink> splitter(inst, table, null);
    const std::vector<uint32_t> roots = splitter.first_parts();

    std::vector<ParetoArchive> merged;
    merged.reserve(specs.size());
    for (const auto& s : specs) merged.emplace_back(inst, s, Regime::Exact);
    EnumerationStats stats;

#ifdef _OPENMP
#pragma omp parallel num_threads(jobs)
    {
        FrontSink local(inst, table, specs);
        Enumerator<FrontSink> worker(inst, table, local);
#pragma omp for schedule(dynamic, 16) nowait
        for (long i = 0; i < static_cast<long>(roots.size()); ++i)
            worker.run_with_first(roots[i]);
        local.flush_totals();
#pragma omp critical
        {
            for (size_t s = 0; s < merged.size(); ++s) merged[s].merge(local.archives[s]);
            stats.totals.merge(local.totals);
            stats.feasible_count += local.count;
        }
    }
#endif
    stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return finalize_result(std::move(merged), stats);
}

}  // namespace routeq

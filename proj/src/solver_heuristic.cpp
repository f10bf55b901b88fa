#include "routeq/solver_heuristic.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <istream>
#include <memory>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace routeq {

namespace {

double scalar_balance_sorted(EquityFunction f, const double* v, int k) {
    std::span<const double> sp(v, static_cast<size_t>(k));
    if (f == EquityFunction::Lex) return v[0];  // scalarized as the largest workload
    if (f == EquityFunction::Gini) {
        double mean = 0;
        for (int i = 0; i < k; ++i) mean += v[i];
        if (mean <= 0) return 0.0;
    }
    return evaluate_scalar(f, sp);
}

class IteratedLocalSearch {
public:
    IteratedLocalSearch(const Instance& inst, const HeuristicConfig& config,
                        ParetoArchive& archive, uint64_t run_seed)
        : inst_(inst), cfg_(config), archive_(archive), rng_(run_seed),
          n_(inst.num_customers()), k_(inst.vehicles()), q_(inst.capacity()) {
        if (n_ <= 22) table_ = std::make_unique<TourTable>(inst);
    }

    void run() {
        for (int d = 0; d < cfg_.directions; ++d) {
            setup_direction(d);
            if (!construct()) continue;
            local_search();
            offer();
            save_best();
            for (int it = 0; it < cfg_.iterations; ++it) {
                perturb();
                local_search();
                offer();
                if (cur_score_ < best_score_ - 1e-9) save_best(); else restore_best();
            }
        }
    }

private:
    // --- current solution state --------------------------------------------

    std::vector<std::vector<int>> routes_;
    std::vector<long long> len_, load_;
    long long cost_ = 0;
    double cur_score_ = 0;

    std::vector<std::vector<int>> best_routes_;
    std::vector<long long> best_len_, best_load_;
    long long best_cost_ = 0;
    double best_score_ = 0;

    void save_best() {
        best_routes_ = routes_;
        best_len_ = len_;
        best_load_ = load_;
        best_cost_ = cost_;
        best_score_ = cur_score_;
    }
    void restore_best() {
        routes_ = best_routes_;
        len_ = best_len_;
        load_ = best_load_;
        cost_ = best_cost_;
        cur_score_ = best_score_;
    }

    double resource_value(int r) const {
        switch (cfg_.spec.resource) {
            case Resource::Distance: return static_cast<double>(len_[r]);
            case Resource::Load: return static_cast<double>(load_[r]);
            case Resource::Stops: return static_cast<double>(routes_[r].size());
        }
        return 0;
    }

    // Score after replacing up to two per-route resource values. r2 < 0 means
    // only one route changes.
    double patched_score(long long cost, int r1, double v1, int r2, double v2) const {
        double vals[16];
        for (int r = 0; r < k_; ++r) vals[r] = resource_value(r);
        vals[r1] = v1;
        if (r2 >= 0) vals[r2] = v2;
        std::sort(vals, vals + k_, std::greater<>());
        return score_from(cost, scalar_balance_sorted(cfg_.spec.function, vals, k_));
    }

    double current_score() const {
        double vals[16];
        for (int r = 0; r < k_; ++r) vals[r] = resource_value(r);
        std::sort(vals, vals + k_, std::greater<>());
        return score_from(cost_, scalar_balance_sorted(cfg_.spec.function, vals, k_));
    }

    double score_from(long long cost, double bal) const {
        if (cfg_.spec.function == EquityFunction::Lex) {
            if (epsilon_ < 0) return static_cast<double>(cost);
            return static_cast<double>(cost) +
                   10.0 * static_cast<double>(base_cost_) *
                       std::max(0.0, (bal - epsilon_) / span_());
        }
        return static_cast<double>(cost) +
               lambda_ * static_cast<double>(base_cost_) * ((bal - bal_lo_) / span_());
    }

    double span_() const { return bal_hi_ > bal_lo_ ? bal_hi_ - bal_lo_ : 1.0; }

    // --- scalarization directions -------------------------------------------

    void setup_direction(int d) {
        lambda_ = 0.0;
        epsilon_ = -1.0;
        bal_lo_ = 0.0;
        bal_hi_ = 1.0;
        if (!archive_.empty()) {
            double lo = 1e300, hi = -1e300;
            for (const auto& e : archive_.entries()) {
                const double b = e.balance.is_lex() ? e.balance.key().front()
                                                    : e.balance.value();
                lo = std::min(lo, b);
                hi = std::max(hi, b);
            }
            bal_lo_ = lo;
            bal_hi_ = hi;
        }
        if (d == 0) return;  // pure cost
        const double frac = cfg_.directions > 2
                                ? static_cast<double>(d - 1) / (cfg_.directions - 2)
                                : 1.0;
        if (cfg_.spec.function == EquityFunction::Lex)
            epsilon_ = bal_hi_ - frac * (bal_hi_ - bal_lo_);
        else
            lambda_ = 0.02 * std::pow(2500.0, frac);
    }

    // --- construction --------------------------------------------------------

    bool construct() {
        for (int attempt = 0; attempt < 50; ++attempt)
            if (try_construct(attempt >= 25)) {
                if (base_cost_ == 0) base_cost_ = cost_;
                cur_score_ = current_score();
                return true;
            }
        throw StructuralError("construction failed: demand cannot fit " +
                              std::to_string(k_) + " routes");
    }

    bool try_construct(bool by_demand) {
        std::vector<int> order(n_);
        std::iota(order.begin(), order.end(), 1);
        std::shuffle(order.begin(), order.end(), rng_);
        if (by_demand)
            std::stable_sort(order.begin(), order.end(),
                             [&](int a, int b) { return inst_.demand(a) > inst_.demand(b); });
        routes_.assign(k_, {});
        load_.assign(k_, 0);
        for (int idx = 0; idx < n_; ++idx) {
            const int c = order[idx];
            if (idx < k_) {
                routes_[idx].push_back(c);
                load_[idx] = inst_.demand(c);
                continue;
            }
            long long best_delta = LLONG_MAX;
            int br = -1, bp = -1;
            for (int r = 0; r < k_; ++r) {
                if (load_[r] + inst_.demand(c) > q_) continue;
                const auto& route = routes_[r];
                for (size_t p = 0; p <= route.size(); ++p) {
                    const int prev = p == 0 ? 0 : route[p - 1];
                    const int next = p == route.size() ? 0 : route[p];
                    const long long delta =
                        inst_.dist(prev, c) + inst_.dist(c, next) - inst_.dist(prev, next);
                    if (delta < best_delta) { best_delta = delta; br = r; bp = static_cast<int>(p); }
                }
            }
            if (br < 0) return false;
            routes_[br].insert(routes_[br].begin() + bp, c);
            load_[br] += inst_.demand(c);
        }
        len_.assign(k_, 0);
        cost_ = 0;
        for (int r = 0; r < k_; ++r) {
            len_[r] = route_length(inst_, routes_[r]);
            cost_ += len_[r];
        }
        return true;
    }

    // --- move deltas ----------------------------------------------------------

    long long removal_delta(int r, size_t i) const {
        const auto& route = routes_[r];
        const int c = route[i];
        const int prev = i == 0 ? 0 : route[i - 1];
        const int next = i + 1 == route.size() ? 0 : route[i + 1];
        return inst_.dist(prev, next) - inst_.dist(prev, c) - inst_.dist(c, next);
    }
    long long insertion_delta(int r, size_t p, int c) const {
        const auto& route = routes_[r];
        const int prev = p == 0 ? 0 : route[p - 1];
        const int next = p == route.size() ? 0 : route[p];
        return inst_.dist(prev, c) + inst_.dist(c, next) - inst_.dist(prev, next);
    }
    long long replace_delta(int r, size_t i, int c) const {
        const auto& route = routes_[r];
        const int old = route[i];
        const int prev = i == 0 ? 0 : route[i - 1];
        const int next = i + 1 == route.size() ? 0 : route[i + 1];
        return inst_.dist(prev, c) + inst_.dist(c, next) - inst_.dist(prev, old) -
               inst_.dist(old, next);
    }

    double value_for(Resource res, long long len, long long load, long long stops) const {
        switch (res) {
            case Resource::Distance: return static_cast<double>(len);
            case Resource::Load: return static_cast<double>(load);
            case Resource::Stops: return static_cast<double>(stops);
        }
        return 0;
    }

    // --- local search -----------------------------------------------------------

    void local_search() {
        bool improved = true;
        while (improved) {
            improved = try_intra_2opt() || try_inter_relocate() || try_inter_swap() ||
                       try_intra_relocate() || try_intra_swap();
        }
    }

    bool try_inter_relocate() {
        const Resource res = cfg_.spec.resource;
        for (int r1 = 0; r1 < k_; ++r1) {
            if (routes_[r1].size() <= 1) continue;
            for (size_t i = 0; i < routes_[r1].size(); ++i) {
                const int c = routes_[r1][i];
                const long long dq = inst_.demand(c);
                const long long rem = removal_delta(r1, i);
                for (int r2 = 0; r2 < k_; ++r2) {
                    if (r2 == r1 || load_[r2] + dq > q_) continue;
                    for (size_t p = 0; p <= routes_[r2].size(); ++p) {
                        const long long ins = insertion_delta(r2, p, c);
                        const long long ncost = cost_ + rem + ins;
                        const double v1 = value_for(res, len_[r1] + rem, load_[r1] - dq,
                                                    static_cast<long long>(routes_[r1].size()) - 1);
                        const double v2 = value_for(res, len_[r2] + ins, load_[r2] + dq,
                                                    static_cast<long long>(routes_[r2].size()) + 1);
                        if (patched_score(ncost, r1, v1, r2, v2) < cur_score_ - 1e-9) {
                            routes_[r1].erase(routes_[r1].begin() + i);
                            routes_[r2].insert(routes_[r2].begin() + p, c);
                            len_[r1] += rem;
                            len_[r2] += ins;
                            load_[r1] -= dq;
                            load_[r2] += dq;
                            cost_ = ncost;
                            cur_score_ = current_score();
                            return true;
                        }
                    }
                }
            }
        }
        return false;
    }

    bool try_inter_swap() {
        const Resource res = cfg_.spec.resource;
        for (int r1 = 0; r1 < k_; ++r1)
            for (int r2 = r1 + 1; r2 < k_; ++r2)
                for (size_t i = 0; i < routes_[r1].size(); ++i)
                    for (size_t j = 0; j < routes_[r2].size(); ++j) {
                        const int a = routes_[r1][i], b = routes_[r2][j];
                        const long long qa = inst_.demand(a), qb = inst_.demand(b);
                        if (load_[r1] - qa + qb > q_ || load_[r2] - qb + qa > q_) continue;
                        const long long d1 = replace_delta(r1, i, b);
                        const long long d2 = replace_delta(r2, j, a);
                        const long long ncost = cost_ + d1 + d2;
                        const double v1 = value_for(res, len_[r1] + d1, load_[r1] - qa + qb,
                                                    static_cast<long long>(routes_[r1].size()));
                        const double v2 = value_for(res, len_[r2] + d2, load_[r2] - qb + qa,
                                                    static_cast<long long>(routes_[r2].size()));
                        if (patched_score(ncost, r1, v1, r2, v2) < cur_score_ - 1e-9) {
                            routes_[r1][i] = b;
                            routes_[r2][j] = a;
                            len_[r1] += d1;
                            len_[r2] += d2;
                            load_[r1] += qb - qa;
                            load_[r2] += qa - qb;
                            cost_ = ncost;
                            cur_score_ = current_score();
                            return true;
                        }
                    }
        return false;
    }

    bool try_intra_relocate() {
        const Resource res = cfg_.spec.resource;
        for (int r = 0; r < k_; ++r) {
            auto& route = routes_[r];
            const size_t s = route.size();
            if (s < 2) continue;
            for (size_t i = 0; i < s; ++i)
                for (size_t j = 0; j < s; ++j) {
                    if (i == j) continue;
                    scratch_ = route;
                    const int c = scratch_[i];
                    scratch_.erase(scratch_.begin() + i);
                    scratch_.insert(scratch_.begin() + j, c);
                    const long long nlen = route_length(inst_, scratch_);
                    if (nlen >= len_[r]) continue;  // same set: only length changes
                    const long long ncost = cost_ - len_[r] + nlen;
                    const double v = value_for(res, nlen, load_[r], static_cast<long long>(s));
                    if (patched_score(ncost, r, v, -1, 0) < cur_score_ - 1e-9) {
                        route = scratch_;
                        cost_ = ncost;
                        len_[r] = nlen;
                        cur_score_ = current_score();
                        return true;
                    }
                }
        }
        return false;
    }

    bool try_intra_swap() {
        const Resource res = cfg_.spec.resource;
        for (int r = 0; r < k_; ++r) {
            auto& route = routes_[r];
            const size_t s = route.size();
            if (s < 2) continue;
            for (size_t i = 0; i < s; ++i)
                for (size_t j = i + 1; j < s; ++j) {
                    scratch_ = route;
                    std::swap(scratch_[i], scratch_[j]);
                    const long long nlen = route_length(inst_, scratch_);
                    if (nlen >= len_[r]) continue;
                    const long long ncost = cost_ - len_[r] + nlen;
                    const double v = value_for(res, nlen, load_[r], static_cast<long long>(s));
                    if (patched_score(ncost, r, v, -1, 0) < cur_score_ - 1e-9) {
                        route = scratch_;
                        cost_ = ncost;
                        len_[r] = nlen;
                        cur_score_ = current_score();
                        return true;
                    }
                }
        }
        return false;
    }

    bool try_intra_2opt() {
        const Resource res = cfg_.spec.resource;
        for (int r = 0; r < k_; ++r) {
            auto& route = routes_[r];
            const size_t s = route.size();
            if (s < 3) continue;
            for (size_t i = 0; i < s; ++i)
                for (size_t j = i + 1; j < s; ++j) {
                    const int before = i == 0 ? 0 : route[i - 1];
                    const int after = j + 1 == s ? 0 : route[j + 1];
                    const long long delta = inst_.dist(before, route[j]) +
                                            inst_.dist(route[i], after) -
                                            inst_.dist(before, route[i]) -
                                            inst_.dist(route[j], after);
                    if (delta >= 0) continue;
                    const long long ncost = cost_ + delta;
                    const double v =
                        value_for(res, len_[r] + delta, load_[r], static_cast<long long>(s));
                    if (patched_score(ncost, r, v, -1, 0) < cur_score_ - 1e-9) {
                        std::reverse(route.begin() + i, route.begin() + j + 1);
                        len_[r] += delta;
                        cost_ = ncost;
                        cur_score_ = current_score();
                        return true;
                    }
                }
        }
        return false;
    }

    // --- perturbation -------------------------------------------------------------

    void perturb() {
        for (int m = 0; m < cfg_.perturbation; ++m) {
            bool moved = false;
            for (int attempt = 0; attempt < 20 && !moved; ++attempt) {
                const int r1 = std::uniform_int_distribution<int>(0, k_ - 1)(rng_);
                if (routes_[r1].size() <= 1) continue;
                const size_t i =
                    std::uniform_int_distribution<size_t>(0, routes_[r1].size() - 1)(rng_);
                const int c = routes_[r1][i];
                const int r2 = std::uniform_int_distribution<int>(0, k_ - 1)(rng_);
                if (r2 == r1 || load_[r2] + inst_.demand(c) > q_) continue;
                const size_t p =
                    std::uniform_int_distribution<size_t>(0, routes_[r2].size())(rng_);
                const long long rem = removal_delta(r1, i);
                routes_[r1].erase(routes_[r1].begin() + i);
                const long long ins = insertion_delta(r2, p, c);
                routes_[r2].insert(routes_[r2].begin() + p, c);
                len_[r1] += rem;
                len_[r2] += ins;
                load_[r1] -= inst_.demand(c);
                load_[r2] += inst_.demand(c);
                cost_ += rem + ins;
                moved = true;
            }
            if (!moved) {
                // tight capacity structure: swap two random customers instead
                const int r1 = std::uniform_int_distribution<int>(0, k_ - 1)(rng_);
                const int r2 = std::uniform_int_distribution<int>(0, k_ - 1)(rng_);
                if (r1 == r2 || routes_[r1].empty() || routes_[r2].empty()) continue;
                const size_t i =
                    std::uniform_int_distribution<size_t>(0, routes_[r1].size() - 1)(rng_);
                const size_t j =
                    std::uniform_int_distribution<size_t>(0, routes_[r2].size() - 1)(rng_);
                const int a = routes_[r1][i], b = routes_[r2][j];
                const long long qa = inst_.demand(a), qb = inst_.demand(b);
                if (load_[r1] - qa + qb > q_ || load_[r2] - qb + qa > q_) continue;
                const long long d1 = replace_delta(r1, i, b);
                const long long d2 = replace_delta(r2, j, a);
                routes_[r1][i] = b;
                routes_[r2][j] = a;
                len_[r1] += d1;
                len_[r2] += d2;
                load_[r1] += qb - qa;
                load_[r2] += qa - qb;
                cost_ += d1 + d2;
            }
        }
        cur_score_ = current_score();
    }

    // --- archive offers --------------------------------------------------------------

    void offer() {
        std::vector<std::vector<int>> routes = routes_;
        long long cost = 0;
        for (auto& route : routes) {
            if (table_ && route.size() <= static_cast<size_t>(kHeldKarpLimit)) {
                uint32_t mask = 0;
                for (int c : route) mask |= 1u << (c - 1);
                route = table_->sequence(mask);
            } else {
                improve_route_sequencing(inst_, route);
            }
            cost += route_length(inst_, route);
        }
        archive_.insert(make_solution_unchecked(inst_, std::move(routes), cost));
    }

    const Instance& inst_;
    const HeuristicConfig& cfg_;
    ParetoArchive& archive_;
    std::mt19937_64 rng_;
    int n_, k_;
    long long q_;
    std::unique_ptr<TourTable> table_;
    std::vector<int> scratch_;
    double lambda_ = 0.0;
    double epsilon_ = -1.0;
    double bal_lo_ = 0.0, bal_hi_ = 1.0;
    long long base_cost_ = 0;
};

uint64_t mix_seed(uint64_t seed, uint64_t run) {
    uint64_t z = seed + 0x9e3779b97f4a7c15ull * (run + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace

ParetoArchive solve_heuristic(const Instance& inst, const HeuristicConfig& config) {
    if (config.runs < 1 || config.directions < 1 || config.iterations < 0 ||
        config.perturbation < 1)
        throw UsageError("heuristic counts must be positive");
    int jobs = config.jobs;
#ifdef _OPENMP
    if (jobs <= 0) jobs = omp_get_max_threads();
#else
    jobs = 1;
#endif
    std::vector<ParetoArchive> run_archives;
    run_archives.reserve(config.runs);
    for (int r = 0; r < config.runs; ++r)
        run_archives.emplace_back(inst, config.spec, Regime::Heuristic);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs)
#endif
    for (int r = 0; r < config.runs; ++r) {
        IteratedLocalSearch ils(inst, config, run_archives[r], mix_seed(config.seed, r));
        ils.run();
    }

    ParetoArchive merged(inst, config.spec, Regime::Heuristic);
    for (const auto& a : run_archives) merged.merge(a);
    merged.finalize();
    return merged;
}

ParetoArchive merge_reference(std::span<const ParetoArchive> fronts,
                              const std::optional<Solution>& known_optimum) {
    if (fronts.empty()) throw UsageError("no fronts to merge");
    const auto& spec = fronts.front().spec();
    const Instance& inst = fronts.front().instance();
    for (const auto& f : fronts) {
        if (!(f.spec() == spec) || &f.instance() != &inst)
            throw UsageError("merge requires fronts sharing one instance and spec");
    }
    ParetoArchive merged(inst, spec, fronts.front().regime());
    for (const auto& f : fronts) merged.merge(f);
    if (known_optimum) merged.insert(*known_optimum);
    merged.finalize();
    return merged;
}

HeuristicConfig parse_heuristic_config(std::istream& in) {
    HeuristicConfig cfg;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value", lineno);
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        try {
            if (key == "spec") cfg.spec = parse_spec(value);
            else if (key == "runs") cfg.runs = std::stoi(value);
            else if (key == "directions") cfg.directions = std::stoi(value);
            else if (key == "iterations") cfg.iterations = std::stoi(value);
            else if (key == "perturbation") cfg.perturbation = std::stoi(value);
            else if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "jobs") cfg.jobs = std::stoi(value);
            else throw ParseError("unknown key: " + key, lineno);
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError("bad value for " + key, lineno);
        }
    }
    return cfg;
}

void write_heuristic_config(std::ostream& out, const HeuristicConfig& cfg) {
    out << "spec=" << cfg.spec.text() << "\n"
        << "runs=" << cfg.runs << "\n"
        << "directions=" << cfg.directions << "\n"
        << "iterations=" << cfg.iterations << "\n"
        << "perturbation=" << cfg.perturbation << "\n"
        << "seed=" << cfg.seed << "\n"
        << "jobs=" << cfg.jobs << "\n";
}

}  // namespace routeq

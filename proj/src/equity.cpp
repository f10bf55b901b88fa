#include "routeq/equity.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "routeq/detail/equity_forms.hpp"

namespace routeq {

const char* to_string(EquityFunction f) {
    switch (f) {
        case EquityFunction::Max: return "max";
        case EquityFunction::Lex: return "lex";
        case EquityFunction::Range: return "range";
        case EquityFunction::Mad: return "mad";
        case EquityFunction::StDev: return "stdev";
        case EquityFunction::Gini: return "gini";
    }
    return "?";
}

EquityFunction parse_equity_function(const std::string& text) {
    for (EquityFunction f : kAllFunctions)
        if (text == to_string(f)) return f;
    throw UsageError("unknown equity function: " + text);
}

int compare(const BalanceValue& a, const BalanceValue& b) {
    if (a.is_lex() != b.is_lex()) throw UsageError("comparing lex and scalar balance values");
    if (a.is_lex()) return lex_compare(a.key_, b.key_);
    if (a.scalar_ < b.scalar_) return -1;
    if (a.scalar_ > b.scalar_) return 1;
    return 0;
}

int lex_compare(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw UsageError("lex comparison of different dimensions");
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return -1;
        if (a[i] > b[i]) return 1;
    }
    return 0;
}

int lex_compare(const WorkloadVector& a, const WorkloadVector& b) {
    return lex_compare(std::span<const double>(a.sorted_desc),
                       std::span<const double>(b.sorted_desc));
}

double evaluate_scalar(EquityFunction f, std::span<const double> v) {
    const double mean = detail::sorted_sum(v) / static_cast<double>(v.size());
    switch (f) {
        case EquityFunction::Max:
            return v.front();
        case EquityFunction::Range:
            return v.front() - v.back();
        case EquityFunction::Mad:
            return detail::mad_sorted(v, mean);
        case EquityFunction::StDev:
            return std::sqrt(detail::ssq_sorted(v, mean) / static_cast<double>(v.size()));
        case EquityFunction::Gini:
            if (mean <= 0)
                throw DegenerateInputError("Gini is undefined for all-zero workloads");
            return detail::gini_sorted(v, mean);
        case EquityFunction::Lex:
            throw UsageError("lex has no scalar value");
    }
    return 0;
}

BalanceValue evaluate(EquityFunction f, const WorkloadVector& w) {
    if (w.sorted_desc.empty()) throw UsageError("empty workload vector");
    if (f == EquityFunction::Lex) return BalanceValue::lex_key(w.sorted_desc);
    return BalanceValue::scalar(evaluate_scalar(f, w.sorted_desc));
}

namespace {

// Better-than comparison for axiom checks: for Lex a violation is a
// lex-smaller key, for scalars a strict numeric decrease beyond fp noise.
bool strictly_better(EquityFunction f, const std::vector<double>& before,
                     const std::vector<double>& after, double* vb, double* va) {
    std::vector<double> sb = before, sa = after;
    std::sort(sb.begin(), sb.end(), std::greater<>());
    std::sort(sa.begin(), sa.end(), std::greater<>());
    if (f == EquityFunction::Lex) {
        *vb = *va = 0;
        return lex_compare(std::span<const double>(sa), std::span<const double>(sb)) < 0;
    }
    *vb = evaluate_scalar(f, sb);
    *va = evaluate_scalar(f, sa);
    return *va < *vb - 1e-9 * std::max(1.0, std::abs(*vb));
}

}  // namespace

AxiomVerdict check_monotonicity(EquityFunction f, int trials, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dim(2, 8);
    std::uniform_real_distribution<double> base(0.0, 100.0);
    std::uniform_real_distribution<double> delta(0.0, 50.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int t = 0; t < trials; ++t) {
        const int k = dim(rng);
        std::vector<double> w(k), w2(k);
        for (double& x : w) x = base(rng);
        bool any = false;
        for (int i = 0; i < k; ++i) {
            double d = coin(rng) < 0.5 ? delta(rng) : 0.0;
            if (d > 0) any = true;
            w2[i] = w[i] + d;
        }
        if (!any) {
            int i = std::uniform_int_distribution<int>(0, k - 1)(rng);
            w2[i] = w[i] + delta(rng) + 1.0;
        }
        double vb, va;
        if (strictly_better(f, w, w2, &vb, &va))
            return {false, Counterexample{w, w2, vb, va}};
    }
    return {true, std::nullopt};
}

AxiomVerdict check_pd_transfer(EquityFunction f, int trials, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dim(2, 8);
    std::uniform_real_distribution<double> base(0.0, 100.0);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    for (int t = 0; t < trials; ++t) {
        const int k = dim(rng);
        std::vector<double> w(k);
        for (double& x : w) x = base(rng);
        int i = std::uniform_int_distribution<int>(0, k - 1)(rng);
        int j = std::uniform_int_distribution<int>(0, k - 1)(rng);
        if (w[i] > w[j]) std::swap(i, j);  // take from the poorer i, give to richer j
        if (i == j || w[i] <= 0) continue;
        const double d = frac(rng) * w[i];  // keep workloads nonnegative
        if (d <= 0) continue;
        std::vector<double> w2 = w;
        w2[i] -= d;
        w2[j] += d;
        double vb, va;
        if (strictly_better(f, w, w2, &vb, &va))
            return {false, Counterexample{w, w2, vb, va}};
    }
    return {true, std::nullopt};
}

const char* to_string(ClassifyVerdict v) {
    switch (v) {
        case ClassifyVerdict::ConstantSum: return "constant-sum";
        case ClassifyVerdict::VariableSum: return "variable-sum";
        case ClassifyVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

void ResourceTotals::observe(const Instance& inst, const Solution& sol) {
    double totals[3] = {0, 0, 0};
    for (const auto& r : sol.routes()) {
        totals[0] += static_cast<double>(route_length(inst, r));
        totals[1] += static_cast<double>(route_demand(inst, r));
        totals[2] += static_cast<double>(r.size());
    }
    observe_totals(totals[0], totals[1], totals[2]);
}

ClassifyVerdict ResourceTotals::verdict(Resource r) const {
    if (count_ < 2) return ClassifyVerdict::Inconclusive;
    return min_[index(r)] == max_[index(r)] ? ClassifyVerdict::ConstantSum
                                            : ClassifyVerdict::VariableSum;
}

void ResourceTotals::merge(const ResourceTotals& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
        *this = other;
        return;
    }
    for (int i = 0; i < 3; ++i) {
        min_[i] = std::min(min_[i], other.min_[i]);
        max_[i] = std::max(max_[i], other.max_[i]);
    }
    count_ += other.count_;
}

ClassifyVerdict classify_resource(const Instance& inst, Resource r,
                                  std::span<const Solution> solutions) {
    ResourceTotals totals;
    for (const auto& s : solutions) totals.observe(inst, s);
    return totals.verdict(r);
}

}  // namespace routeq

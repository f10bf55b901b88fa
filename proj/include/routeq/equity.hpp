#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "routeq/model.hpp"

namespace routeq {

enum class EquityFunction { Max, Lex, Range, Mad, StDev, Gini };

inline constexpr EquityFunction kAllFunctions[] = {
    EquityFunction::Max,  EquityFunction::Lex,   EquityFunction::Range,
    EquityFunction::Mad,  EquityFunction::StDev, EquityFunction::Gini,
};

// Max and Lex never reward worsening a workload; the four dispersion measures do.
constexpr bool is_monotone(EquityFunction f) {
    return f == EquityFunction::Max || f == EquityFunction::Lex;
}
// All six satisfy the weak transfer principle.
constexpr bool is_pd_compliant(EquityFunction) { return true; }

const char* to_string(EquityFunction f);
EquityFunction parse_equity_function(const std::string& text);

// Scalar imbalance for Max/Range/MAD/StDev/Gini, or the descending-sorted
// workload vector as an ordinal key for Lex. Smaller is always better.
class BalanceValue {
public:
    static BalanceValue scalar(double v) { return BalanceValue(v, {}); }
    static BalanceValue lex_key(std::vector<double> sorted_desc) {
        return BalanceValue(0.0, std::move(sorted_desc));
    }

    bool is_lex() const { return !key_.empty(); }
    double value() const { return scalar_; }
    const std::vector<double>& key() const { return key_; }

    // -1 if a is better (smaller), 0 if equal, +1 if worse.
    friend int compare(const BalanceValue& a, const BalanceValue& b);
    bool operator==(const BalanceValue& b) const { return compare(*this, b) == 0; }

private:
    BalanceValue(double s, std::vector<double> k) : scalar_(s), key_(std::move(k)) {}
    double scalar_;
    std::vector<double> key_;
};

// Compares descending-sorted workload vectors element by element.
int lex_compare(const WorkloadVector& a, const WorkloadVector& b);
int lex_compare(std::span<const double> a_sorted_desc, std::span<const double> b_sorted_desc);

// Population forms throughout: MAD and StDev divide by K; Gini is
// sum_i sum_j |x_i - x_j| / (2 K^2 mean) over ordered pairs.
// Throws DegenerateInputError for Gini with zero mean.
BalanceValue evaluate(EquityFunction f, const WorkloadVector& w);
double evaluate_scalar(EquityFunction f, std::span<const double> sorted_desc);

struct Counterexample {
    std::vector<double> before;
    std::vector<double> after;
    double value_before = 0;
    double value_after = 0;
};

struct AxiomVerdict {
    bool holds = true;  // no violation found within the trial budget; not a proof
    std::optional<Counterexample> counterexample;
};

// Randomized search for a componentwise worsening that decreases inequality.
AxiomVerdict check_monotonicity(EquityFunction f, int trials, uint64_t seed);
// Randomized search for a regressive transfer that decreases inequality
// (violating the weak Pigou-Dalton principle).
AxiomVerdict check_pd_transfer(EquityFunction f, int trials, uint64_t seed);

enum class ClassifyVerdict { ConstantSum, VariableSum, Inconclusive };
const char* to_string(ClassifyVerdict v);

// Streaming check of Definition-style constancy: feed solutions, then ask
// whether each resource's workload total stayed constant.
class ResourceTotals {
public:
    void observe(const Instance& inst, const Solution& sol);
    void observe_totals(double distance_total, double load_total, double stops_total) {
        const double t[3] = {distance_total, load_total, stops_total};
        if (count_ == 0) {
            for (int i = 0; i < 3; ++i) min_[i] = max_[i] = t[i];
        } else {
            for (int i = 0; i < 3; ++i) {
                if (t[i] < min_[i]) min_[i] = t[i];
                if (t[i] > max_[i]) max_[i] = t[i];
            }
        }
        ++count_;
    }
    ClassifyVerdict verdict(Resource r) const;
    size_t count() const { return count_; }
    double min_total(Resource r) const { return min_[index(r)]; }
    double max_total(Resource r) const { return max_[index(r)]; }
    void merge(const ResourceTotals& other);
    // Bulk record of extremes observed elsewhere (solvers track them inline).
    void inject(const double mins[3], const double maxs[3], size_t count) {
        if (count == 0) return;
        if (count_ == 0) {
            for (int i = 0; i < 3; ++i) { min_[i] = mins[i]; max_[i] = maxs[i]; }
        } else {
            for (int i = 0; i < 3; ++i) {
                if (mins[i] < min_[i]) min_[i] = mins[i];
                if (maxs[i] > max_[i]) max_[i] = maxs[i];
            }
        }
        count_ += count;
    }

private:
    static int index(Resource r) { return static_cast<int>(r); }
    size_t count_ = 0;
    double min_[3] = {0, 0, 0};
    double max_[3] = {0, 0, 0};
};

// Empirical classification over an explicit sample of solutions.
ClassifyVerdict classify_resource(const Instance& inst, Resource r,
                                  std::span<const Solution> solutions);

}  // namespace routeq

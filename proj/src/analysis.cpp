#include "routeq/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace routeq {

double hypervolume(std::span<const std::pair<double, double>> front,
                   std::pair<double, double> ref) {
    if (front.empty()) return 0.0;
    std::vector<std::pair<double, double>> pts(front.begin(), front.end());
    std::sort(pts.begin(), pts.end());
    double area = 0.0;
    double ceiling = ref.second;
    for (const auto& [x, y] : pts) {
        if (x >= ref.first) break;   // outside the box, no width left
        if (y >= ceiling) continue;  // dominated, or clipped to zero area
        area += (ref.first - x) * (ceiling - y);
        ceiling = y;
    }
    return area;
}

std::vector<std::pair<double, double>> objective_points(const ParetoArchive& archive) {
    const auto& es = archive.entries();
    std::vector<std::pair<double, double>> pts;
    pts.reserve(es.size());
    const bool lex = archive.spec().function == EquityFunction::Lex;
    for (size_t i = 0; i < es.size(); ++i) {
        const double bal = lex ? static_cast<double>(es.size() - i)
                               : es[i].balance.value();
        pts.emplace_back(static_cast<double>(es[i].cost), bal);
    }
    return pts;
}

double lex_rank_on(const ParetoArchive& reference, const std::vector<double>& key) {
    // reference entries are cost-ascending, keys lex-descending: iterate from
    // the back (lex-best first) counting keys strictly smaller than `key`
    const auto& es = reference.entries();
    size_t smaller = 0;
    for (size_t i = es.size(); i-- > 0;) {
        if (lex_compare(std::span<const double>(es[i].balance.key()),
                        std::span<const double>(key)) < 0)
            ++smaller;
        else
            break;
    }
    return static_cast<double>(smaller + 1);
}

namespace {

// Non-dominated filter over (cost, balance) pairs, minimization both ways.
std::vector<std::pair<double, double>> pareto_filter(
    std::vector<std::pair<double, double>> pts) {
    std::sort(pts.begin(), pts.end());
    std::vector<std::pair<double, double>> out;
    for (const auto& p : pts) {
        if (!out.empty() && out.back().first == p.first) continue;   // costlier twin
        if (!out.empty() && out.back().second <= p.second) continue; // dominated
        out.push_back(p);
    }
    return out;
}

}  // namespace

AgreementMatrix cross_agreement(std::span<const FrontSet> instances,
                                std::span<const ObjectiveSpec> specs) {
    const size_t m = specs.size();
    AgreementMatrix out;
    out.specs.assign(specs.begin(), specs.end());
    out.cells.assign(m * m, 0.0);
    out.samples.assign(m * m, 0);

    for (const auto& fs : instances) {
        if (fs.archives.size() != m)
            throw UsageError("front set does not match the spec list");
        // target-side data: points, nadir, own hypervolume
        std::vector<std::vector<std::pair<double, double>>> tpoints(m);
        std::vector<std::pair<double, double>> nadir(m);
        std::vector<double> own(m, 0.0);
        for (size_t b = 0; b < m; ++b) {
            tpoints[b] = objective_points(fs.archives[b]);
            double cmax = 0, bmax = 0;
            for (const auto& [c, v] : tpoints[b]) {
                cmax = std::max(cmax, c);
                bmax = std::max(bmax, v);
            }
            nadir[b] = {cmax, bmax};
            own[b] = hypervolume(tpoints[b], nadir[b]);
        }
        for (size_t b = 0; b < m; ++b) {
            if (own[b] <= 0.0) continue;  // degenerate target on this instance
            for (size_t a = 0; a < m; ++a) {
                double pct = 100.0;
                if (a != b) {
                    std::vector<std::pair<double, double>> re;
                    re.reserve(fs.archives[a].size());
                    for (const auto& e : fs.archives[a].entries()) {
                        double bal;
                        if (specs[b].function == EquityFunction::Lex) {
                            auto w = workload_vector(*fs.instance, e.solution,
                                                     specs[b].resource);
                            bal = lex_rank_on(fs.archives[b], w.sorted_desc);
                        } else {
                            auto w = workload_vector(*fs.instance, e.solution,
                                                     specs[b].resource);
                            bal = evaluate(specs[b].function, w).value();
                        }
                        re.emplace_back(static_cast<double>(e.cost), bal);
                    }
                    const double hv = hypervolume(pareto_filter(std::move(re)), nadir[b]);
                    pct = std::min(100.0, 100.0 * hv / own[b]);
                }
                out.cells[a * m + b] += pct;
                out.samples[a * m + b] += 1;
            }
        }
    }
    for (size_t i = 0; i < m * m; ++i)
        out.cells[i] = out.samples[i] ? out.cells[i] / out.samples[i]
                                      : std::numeric_limits<double>::quiet_NaN();
    for (size_t d = 0; d < m; ++d)
        if (out.samples[d * m + d]) out.cells[d * m + d] = 100.0;  // exact by definition
    return out;
}

OverlapReport overlap_categories(std::span<const ParetoArchive> fronts_by_function,
                                 Resource resource) {
    OverlapReport report;
    report.resource = resource;
    const size_t nf = fronts_by_function.size();
    // union keyed by (cost, descending workload vector under the resource)
    std::map<std::pair<long long, std::vector<double>>, unsigned> membership;
    for (size_t f = 0; f < nf; ++f) {
        for (const auto& e : fronts_by_function[f].entries()) {
            auto w = workload_vector(fronts_by_function[f].instance(), e.solution, resource);
            membership[{e.cost, w.sorted_desc}] |= 1u << f;
        }
    }
    report.union_size = membership.size();
    const unsigned full = nf >= 32 ? ~0u : (1u << nf) - 1;
    for (size_t f = 0; f < nf; ++f) {
        OverlapReport::Row row;
        row.function = fronts_by_function[f].spec().function;
        for (const auto& [key, mask] : membership) {
            const bool mine = mask & (1u << f);
            if (mask == full) ++row.a;
            else if (mine && mask != (1u << f)) ++row.b;
            else if (mask == (1u << f)) ++row.c;
            else if (!mine) ++row.d;
        }
        report.rows.push_back(row);
    }
    return report;
}

namespace {

std::vector<uint64_t> edge_multiset(const Solution& sol) {
    std::vector<uint64_t> edges;
    for (const auto& r : sol.routes()) {
        int prev = 0;
        for (int c : r) {
            const uint64_t a = std::min(prev, c), b = std::max(prev, c);
            edges.push_back(a << 32 | b);
            prev = c;
        }
        const uint64_t a = 0, b = static_cast<uint64_t>(r.back());
        edges.push_back(a << 32 | b);
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace

double edge_similarity(const Instance& inst, const Solution& a, const Solution& b) {
    if (a.routes().size() != b.routes().size())
        throw UsageError("solutions with different route counts");
    const auto ea = edge_multiset(a);
    const auto eb = edge_multiset(b);
    if (ea.size() != eb.size() ||
        ea.size() != static_cast<size_t>(inst.num_customers() + inst.vehicles()))
        throw UsageError("edge multisets do not match the instance");
    size_t shared = 0, i = 0, j = 0;
    while (i < ea.size() && j < eb.size()) {
        if (ea[i] == eb[j]) { ++shared; ++i; ++j; }
        else if (ea[i] < eb[j]) ++i;
        else ++j;
    }
    return static_cast<double>(shared) / static_cast<double>(ea.size());
}

SimilarityReport similarity_distributions(const ParetoArchive& archive) {
    SimilarityReport report;
    const auto& es = archive.entries();
    if (es.size() < 2) {
        report.degenerate = true;
        return report;
    }
    const Instance& inst = archive.instance();
    for (size_t i = 0; i < es.size(); ++i)
        for (size_t j = i + 1; j < es.size(); ++j) {
            const double s = edge_similarity(inst, es[i].solution, es[j].solution);
            report.all_pairs.push_back(s);
            if (j == i + 1) report.consecutive.push_back(s);  // entries are cost-sorted
        }
    report.median_all = median_of(report.all_pairs);
    report.median_consecutive = median_of(report.consecutive);
    return report;
}

std::vector<std::pair<double, double>> tradeoff_normalize(const ParetoArchive& archive,
                                                          long long cost_optimum) {
    if (cost_optimum <= 0) throw UsageError("cost optimum must be positive");
    const auto pts = objective_points(archive);
    double lo = std::numeric_limits<double>::max(), hi = std::numeric_limits<double>::lowest();
    for (const auto& [c, b] : pts) {
        lo = std::min(lo, b);
        hi = std::max(hi, b);
    }
    std::vector<std::pair<double, double>> out;
    out.reserve(pts.size());
    for (const auto& [c, b] : pts) {
        const double x = (c - static_cast<double>(cost_optimum)) /
                         static_cast<double>(cost_optimum);
        const double y = hi > lo ? (b - lo) / (hi - lo) : 0.0;
        out.emplace_back(x, y);
    }
    return out;
}

}  // namespace routeq

// routeq command line: derive benchmark instances, solve them exactly or
// heuristically under the 18 balance objectives, and run the analysis suite
// (cardinality, trade-off curves, overlap, agreement, edge similarity).

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "routeq/analysis.hpp"
#include "routeq/instance.hpp"
#include "routeq/solver_exact.hpp"
#include "routeq/solver_heuristic.hpp"
#include "routeq/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace routeq;

namespace {

std::string timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%d-%H%M%S", std::localtime(&t));
    return buf;
}

fs::path resolve_outdir(const std::string& flag, const std::string& command) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("ROUTEQ_OUT")) return env;
    return fs::path("runs") / (timestamp() + "-" + command);
}

std::vector<ObjectiveSpec> resolve_specs(const std::vector<std::string>& args) {
    if (args.empty() || (args.size() == 1 && args[0] == "all")) return all_specs();
    std::vector<ObjectiveSpec> out;
    for (const auto& a : args) out.push_back(parse_spec(a));
    return out;
}

std::string sanitize(const std::string& name) {
    std::string s = name;
    for (char& c : s)
        if (c == '/' || c == '\\' || c == ':') c = '_';
    return s;
}

struct Manifest {
    json j;
    fs::path dir;

    Manifest(const fs::path& d, const std::string& command, int argc, char** argv) : dir(d) {
        j["command"] = command;
        j["created"] = timestamp();
        json args = json::array();
        for (int i = 0; i < argc; ++i) args.push_back(argv[i]);
        j["argv"] = args;
        j["outputs"] = json::array();
        j["fronts"] = json::array();
        j["instances"] = json::array();
        j["timings"] = json::object();
    }
    void add_output(const fs::path& p) { j["outputs"].push_back(fs::relative(p, dir).string()); }
    void save() const {
        std::ofstream out(dir / "manifest.json");
        out << j.dump(2) << "\n";
    }
};

void write_front_files(Manifest& manifest, const Instance& inst, const ParetoArchive& archive,
                       const std::string& regime) {
    const fs::path fdir = manifest.dir / "fronts" / sanitize(inst.name());
    fs::create_directories(fdir);
    const std::string stem = sanitize(archive.spec().text());
    const fs::path csv = fdir / (stem + ".front.csv");
    const fs::path sol = fdir / (stem + ".sol");
    {
        std::ofstream out(csv);
        write_front_csv(out, archive);
    }
    {
        std::ofstream out(sol);
        std::vector<Solution> sols;
        sols.reserve(archive.size());
        for (const auto& e : archive.entries()) sols.push_back(e.solution);
        write_solutions(out, inst, sols);
    }
    manifest.add_output(csv);
    manifest.add_output(sol);
    manifest.j["fronts"].push_back({{"instance", inst.name()},
                                    {"spec", archive.spec().text()},
                                    {"front_csv", fs::relative(csv, manifest.dir).string()},
                                    {"solutions", fs::relative(sol, manifest.dir).string()},
                                    {"size", archive.size()},
                                    {"regime", regime}});
}

void record_instance(Manifest& manifest, const Instance& inst) {
    const fs::path idir = manifest.dir / "instances";
    fs::create_directories(idir);
    const fs::path path = idir / (sanitize(inst.name()) + ".vrp");
    save_cvrplib(inst, path.string());
    manifest.add_output(path);
    manifest.j["instances"].push_back({{"name", inst.name()},
                                       {"path", fs::relative(path, manifest.dir).string()},
                                       {"customers", inst.num_customers()},
                                       {"vehicles", inst.vehicles()},
                                       {"capacity", inst.capacity()}});
}

// Loaded back from a solve output directory for analysis commands.
struct LoadedRun {
    std::vector<Instance> instances;
    std::vector<ObjectiveSpec> specs;
    // archives[i] aligned with specs, for instances[i]
    std::vector<std::vector<ParetoArchive>> archives;
};

LoadedRun load_run(const fs::path& dir) {
    std::ifstream mf(dir / "manifest.json");
    if (!mf) throw std::runtime_error("no manifest.json under " + dir.string());
    json j;
    mf >> j;
    LoadedRun run;
    std::map<std::string, size_t> index_of;
    for (const auto& ji : j["instances"]) {
        run.instances.push_back(load_cvrplib((dir / ji["path"].get<std::string>()).string()));
        index_of[ji["name"].get<std::string>()] = run.instances.size() - 1;
    }
    std::vector<std::string> spec_names;
    for (const auto& jf : j["fronts"]) {
        const std::string s = jf["spec"].get<std::string>();
        if (std::find(spec_names.begin(), spec_names.end(), s) == spec_names.end())
            spec_names.push_back(s);
    }
    for (const auto& s : spec_names) run.specs.push_back(parse_spec(s));
    run.archives.reserve(run.instances.size());
    for (size_t i = 0; i < run.instances.size(); ++i) {
        std::vector<ParetoArchive> arch;
        for (const auto& s : run.specs)
            arch.emplace_back(run.instances[i], s, Regime::Exact);
        run.archives.push_back(std::move(arch));
    }
    for (const auto& jf : j["fronts"]) {
        const size_t i = index_of.at(jf["instance"].get<std::string>());
        const ObjectiveSpec spec = parse_spec(jf["spec"].get<std::string>());
        const Regime regime =
            jf.value("regime", "exact") == "heuristic" ? Regime::Heuristic : Regime::Exact;
        size_t s = 0;
        while (!(run.specs[s] == spec)) ++s;
        run.archives[i][s] = ParetoArchive(run.instances[i], spec, regime);
        std::ifstream sol(dir / jf["solutions"].get<std::string>());
        if (!sol)
            throw std::runtime_error("missing solutions file for " + spec.text());
        for (const auto& solution : read_solutions(sol, run.instances[i]))
            run.archives[i][s].insert(solution);
        run.archives[i][s].finalize();
    }
    return run;
}

// ---------------------------------------------------------------------------
// subcommands

int cmd_gen(const std::string& base_path, int block, int vehicles, const std::string& outflag,
            int argc, char** argv) {
    const fs::path dir = resolve_outdir(outflag, "gen");
    fs::create_directories(dir);
    Manifest manifest(dir, "gen", argc, argv);
    const Instance base = load_cvrplib(base_path);
    const auto derived = derive_small_instances(base, block, vehicles, &std::cerr);
    for (const auto& inst : derived) record_instance(manifest, inst);
    manifest.j["base"] = base_path;
    manifest.j["block"] = block;
    manifest.j["vehicles"] = vehicles;
    manifest.save();
    std::cout << "derived " << derived.size() << " instances -> " << dir.string() << "\n";
    return 0;
}

int cmd_solve_exact(const std::vector<std::string>& instance_paths,
                    const std::vector<std::string>& spec_args, int jobs,
                    const std::string& outflag, int argc, char** argv) {
    const fs::path dir = resolve_outdir(outflag, "solve-exact");
    fs::create_directories(dir);
    Manifest manifest(dir, "solve-exact", argc, argv);
    const auto specs = resolve_specs(spec_args);
    manifest.j["jobs"] = jobs;
    for (const auto& path : instance_paths) {
        const Instance inst = load_cvrplib(path);
        record_instance(manifest, inst);
        const auto result = solve_exact(inst, specs, jobs);
        for (const auto& a : result.archives) write_front_files(manifest, inst, a, "exact");
        manifest.j["timings"][inst.name()] = result.stats.seconds;
        manifest.j["enumerated"][inst.name()] = result.stats.feasible_count;
        std::cout << inst.name() << ": " << result.stats.feasible_count << " solutions in "
                  << result.stats.seconds << "s\n";
    }
    manifest.save();
    std::cout << "fronts -> " << dir.string() << "\n";
    return 0;
}

int cmd_solve_heur(const std::vector<std::string>& instance_paths,
                   const std::vector<std::string>& spec_args, const std::string& config_path,
                   uint64_t seed, int runs, int jobs, const std::string& outflag, int argc,
                   char** argv) {
    const fs::path dir = resolve_outdir(outflag, "solve-heur");
    fs::create_directories(dir);
    Manifest manifest(dir, "solve-heur", argc, argv);
    HeuristicConfig base_cfg;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw std::runtime_error("cannot open config: " + config_path);
        base_cfg = parse_heuristic_config(in);
    }
    if (seed) base_cfg.seed = seed;
    if (runs) base_cfg.runs = runs;
    base_cfg.jobs = jobs;
    const auto specs = resolve_specs(spec_args);
    manifest.j["seed"] = base_cfg.seed;
    manifest.j["runs"] = base_cfg.runs;
    for (const auto& path : instance_paths) {
        const Instance inst = load_cvrplib(path);
        record_instance(manifest, inst);
        const auto t0 = std::chrono::steady_clock::now();
        for (const auto& spec : specs) {
            HeuristicConfig cfg = base_cfg;
            cfg.spec = spec;
            const auto archive = solve_heuristic(inst, cfg);
            write_front_files(manifest, inst, archive, "heuristic");
        }
        manifest.j["timings"][inst.name()] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << inst.name() << " done\n";
    }
    {
        std::ofstream cfg_out(dir / "heuristic.cfg");
        write_heuristic_config(cfg_out, base_cfg);
        manifest.add_output(dir / "heuristic.cfg");
    }
    manifest.save();
    std::cout << "fronts -> " << dir.string() << "\n";
    return 0;
}

int analyze_cardinality(const LoadedRun& run, Manifest& manifest) {
    const fs::path csv = manifest.dir / "cardinality.csv";
    std::ofstream out(csv);
    out << "instance,spec,front_size\n";
    std::map<std::string, std::pair<double, int>> means;
    for (size_t i = 0; i < run.instances.size(); ++i)
        for (size_t s = 0; s < run.specs.size(); ++s) {
            out << run.instances[i].name() << "," << run.specs[s].text() << ","
                << run.archives[i][s].size() << "\n";
            auto& m = means[run.specs[s].text()];
            m.first += static_cast<double>(run.archives[i][s].size());
            m.second += 1;
        }
    const fs::path summary = manifest.dir / "cardinality_mean.csv";
    std::ofstream sum(summary);
    sum << "spec,mean_front_size\n";
    for (const auto& [spec, m] : means) sum << spec << "," << m.first / m.second << "\n";
    manifest.add_output(csv);
    manifest.add_output(summary);
    return 0;
}

int analyze_tradeoff(const LoadedRun& run, Manifest& manifest) {
    for (size_t s = 0; s < run.specs.size(); ++s) {
        const std::string stem = sanitize(run.specs[s].text());
        const fs::path csv = manifest.dir / ("tradeoff_" + stem + ".csv");
        std::ofstream out(csv);
        out << "instance,relative_cost_increase,normalized_balance\n";
        std::vector<std::pair<double, double>> cloud;
        for (size_t i = 0; i < run.instances.size(); ++i) {
            const auto& archive = run.archives[i][s];
            if (archive.empty()) continue;
            long long copt = archive.entries().front().cost;
            for (const auto& a : run.archives[i])
                if (!a.empty()) copt = std::min(copt, a.entries().front().cost);
            for (const auto& [x, y] : tradeoff_normalize(archive, copt)) {
                out << run.instances[i].name() << "," << x << "," << y << "\n";
                cloud.emplace_back(x, y);
            }
        }
        manifest.add_output(csv);
        double xmax = 0.01;
        for (const auto& [x, y] : cloud) xmax = std::max(xmax, x);
        SvgFigure fig(520, 400, run.specs[s].text());
        fig.set_range(0, xmax * 1.05, 0, 1.0);
        fig.axis_labels("relative cost increase", "normalized imbalance");
        fig.add_scatter(cloud, "#1f77b4");
        const fs::path svg = manifest.dir / ("tradeoff_" + stem + ".svg");
        fig.save(svg.string());
        manifest.add_output(svg);
    }
    return 0;
}

int analyze_overlap(const LoadedRun& run, Manifest& manifest) {
    const fs::path csv = manifest.dir / "overlap.csv";
    std::ofstream out(csv);
    out << "resource,function,A,B,C,D,union_size,instance\n";
    // aggregate per resource/function over instances
    std::map<std::pair<std::string, std::string>, std::array<double, 4>> agg;
    std::map<std::string, double> agg_union;
    for (size_t i = 0; i < run.instances.size(); ++i) {
        for (Resource r : {Resource::Distance, Resource::Load, Resource::Stops}) {
            std::vector<ParetoArchive> group;
            for (size_t s = 0; s < run.specs.size(); ++s)
                if (run.specs[s].resource == r) group.push_back(run.archives[i][s]);
            if (group.size() != 6) continue;
            const auto report = overlap_categories(group, r);
            for (const auto& row : report.rows) {
                out << to_string(r) << "," << to_string(row.function) << "," << row.a << ","
                    << row.b << "," << row.c << "," << row.d << "," << report.union_size << ","
                    << run.instances[i].name() << "\n";
                auto& a = agg[{to_string(r), to_string(row.function)}];
                a[0] += static_cast<double>(row.a);
                a[1] += static_cast<double>(row.b);
                a[2] += static_cast<double>(row.c);
                a[3] += static_cast<double>(row.d);
            }
            agg_union[to_string(r)] += static_cast<double>(report.union_size);
        }
    }
    manifest.add_output(csv);
    // stacked shares per resource, one bar per function
    for (const auto& r : {"distance", "load", "stops"}) {
        if (agg_union[r] <= 0) continue;
        SvgFigure fig(520, 360, std::string("overlap: ") + r);
        fig.set_range(0, 6, 0, 1.0);
        fig.axis_labels("max lex range mad stdev gini", "share of union");
        int pos = 0;
        for (EquityFunction f : kAllFunctions) {
            const auto it = agg.find({r, to_string(f)});
            if (it == agg.end()) continue;
            const double total = agg_union[r];
            fig.add_stacked_bar(pos++, 6,
                                {{it->second[0] / total, "#2ca02c"},
                                 {it->second[1] / total, "#1f77b4"},
                                 {it->second[2] / total, "#ff7f0e"},
                                 {it->second[3] / total, "#d3d3d3"}});
        }
        const fs::path svg = manifest.dir / (std::string("overlap_") + r + ".svg");
        fig.save(svg.string());
        manifest.add_output(svg);
    }
    return 0;
}

int analyze_agreement(const LoadedRun& run, Manifest& manifest) {
    std::vector<FrontSet> sets;
    for (size_t i = 0; i < run.instances.size(); ++i)
        sets.push_back({&run.instances[i], run.archives[i]});
    const auto matrix = cross_agreement(sets, run.specs);
    const fs::path csv = manifest.dir / "agreement.csv";
    std::ofstream out(csv);
    out << "source\\target";
    for (const auto& s : matrix.specs) out << "," << s.text();
    out << "\n";
    for (size_t a = 0; a < matrix.specs.size(); ++a) {
        out << matrix.specs[a].text();
        for (size_t b = 0; b < matrix.specs.size(); ++b) {
            out << ",";
            const double v = matrix.at(a, b);
            if (std::isnan(v)) out << "";
            else out << v;
        }
        out << "\n";
    }
    manifest.add_output(csv);
    return 0;
}

int analyze_similarity(const LoadedRun& run, Manifest& manifest) {
    const fs::path percsv = manifest.dir / "similarity_fronts.csv";
    std::ofstream per(percsv);
    per << "instance,spec,front_size,median_all_pairs,median_consecutive\n";
    std::vector<double> all, consec;
    for (size_t i = 0; i < run.instances.size(); ++i)
        for (size_t s = 0; s < run.specs.size(); ++s) {
            const auto rep = similarity_distributions(run.archives[i][s]);
            if (rep.degenerate) continue;
            per << run.instances[i].name() << "," << run.specs[s].text() << ","
                << run.archives[i][s].size() << "," << rep.median_all << ","
                << rep.median_consecutive << "\n";
            all.insert(all.end(), rep.all_pairs.begin(), rep.all_pairs.end());
            consec.insert(consec.end(), rep.consecutive.begin(), rep.consecutive.end());
        }
    manifest.add_output(percsv);
    // 5%-bin histograms of shared-edge percentage
    const int bins = 20;
    std::vector<double> ha(bins, 0), hc(bins, 0);
    for (double v : all) ha[std::min(bins - 1, static_cast<int>(v * bins))] += 1;
    for (double v : consec) hc[std::min(bins - 1, static_cast<int>(v * bins))] += 1;
    const fs::path csv = manifest.dir / "similarity_hist.csv";
    std::ofstream out(csv);
    out << "bin_low_pct,bin_high_pct,all_pairs,consecutive\n";
    for (int b = 0; b < bins; ++b)
        out << b * 5 << "," << (b + 1) * 5 << "," << ha[b] << "," << hc[b] << "\n";
    manifest.add_output(csv);
    double hmax = 1;
    for (int b = 0; b < bins; ++b) hmax = std::max({hmax, ha[b], hc[b]});
    SvgFigure fig(520, 360, "edge similarity: all pairs (blue) vs consecutive (orange)");
    fig.set_range(0, 100, 0, hmax * 1.05);
    fig.axis_labels("shared edges [%]", "pair count");
    fig.add_histogram(ha, 0, 100, "#1f77b4");
    fig.add_histogram(hc, 0, 100, "#ff7f0e");
    const fs::path svg = manifest.dir / "similarity_hist.svg";
    fig.save(svg.string());
    manifest.add_output(svg);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bi-objective balanced CVRP toolkit"};
    app.require_subcommand(1);

    // gen
    std::string gen_base, gen_out;
    int gen_block = 21, gen_k = 5;
    auto* gen = app.add_subcommand("gen", "derive small instances from a base file");
    gen->add_option("--base", gen_base, "base CVRPLIB file")->required();
    gen->add_option("--block", gen_block, "nodes per block (first becomes the depot)");
    gen->add_option("--k", gen_k, "vehicles per derived instance");
    gen->add_option("--out", gen_out, "output directory");

    // solve-exact
    std::vector<std::string> se_instances, se_specs;
    std::string se_out;
    int se_jobs = 0;
    auto* se = app.add_subcommand("solve-exact", "enumerate optimal Pareto fronts");
    se->add_option("--instance", se_instances, "instance file(s)")->required();
    se->add_option("--specs", se_specs, "objective specs (<resource>:<function> or 'all')");
    se->add_option("--jobs", se_jobs, "worker threads (0 = hardware)");
    se->add_option("--out", se_out, "output directory");

    // solve-heur
    std::vector<std::string> sh_instances, sh_specs;
    std::string sh_out, sh_config;
    uint64_t sh_seed = 0;
    int sh_runs = 0, sh_jobs = 0;
    auto* sh = app.add_subcommand("solve-heur", "approximate fronts by iterated local search");
    sh->add_option("--instance", sh_instances, "instance file(s)")->required();
    sh->add_option("--specs", sh_specs, "objective specs or 'all'");
    sh->add_option("--config", sh_config, "heuristic key=value config file");
    sh->add_option("--seed", sh_seed, "random seed");
    sh->add_option("--runs", sh_runs, "independent runs to merge");
    sh->add_option("--jobs", sh_jobs, "worker threads (0 = hardware)");
    sh->add_option("--out", sh_out, "output directory");

    // analyze
    std::string an_kind, an_fronts, an_out;
    auto* an = app.add_subcommand("analyze", "compute study metrics from solved fronts");
    an->add_option("kind", an_kind, "cardinality|tradeoff|overlap|agreement|similarity")
        ->required();
    an->add_option("--fronts", an_fronts, "directory produced by solve-exact/solve-heur")
        ->required();
    an->add_option("--out", an_out, "output directory");

    // report
    std::string rp_fronts, rp_out;
    auto* rp = app.add_subcommand("report", "bundle all analyses (CSV + SVG)");
    rp->add_option("--fronts", rp_fronts, "directory produced by solve-exact/solve-heur")
        ->required();
    rp->add_option("--out", rp_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(gen_base, gen_block, gen_k, gen_out, argc, argv);
        if (se->parsed())
            return cmd_solve_exact(se_instances, se_specs, se_jobs, se_out, argc, argv);
        if (sh->parsed())
            return cmd_solve_heur(sh_instances, sh_specs, sh_config, sh_seed, sh_runs, sh_jobs,
                                  sh_out, argc, argv);
        if (an->parsed() || rp->parsed()) {
            const std::string kind = rp->parsed() ? "report" : an_kind;
            const fs::path dir =
                resolve_outdir(rp->parsed() ? rp_out : an_out, "analyze-" + kind);
            fs::create_directories(dir);
            Manifest manifest(dir, "analyze " + kind, argc, argv);
            const LoadedRun run = load_run(rp->parsed() ? rp_fronts : an_fronts);
            int rc = 0;
            if (kind == "cardinality" || kind == "report") rc |= analyze_cardinality(run, manifest);
            if (kind == "tradeoff" || kind == "report") rc |= analyze_tradeoff(run, manifest);
            if (kind == "overlap" || kind == "report") rc |= analyze_overlap(run, manifest);
            if (kind == "agreement" || kind == "report") rc |= analyze_agreement(run, manifest);
            if (kind == "similarity" || kind == "report") rc |= analyze_similarity(run, manifest);
            if (kind != "cardinality" && kind != "tradeoff" && kind != "overlap" &&
                kind != "agreement" && kind != "similarity" && kind != "report") {
                std::cerr << "unknown analysis kind: " << kind << "\n";
                return 2;
            }
            manifest.save();
            std::cout << "analysis -> " << dir.string() << "\n";
            return rc;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

// altclust: alternative clustering via HSIC-regularized dimension reduction.
// Subcommands: generate | run | bench | verify | tune.

#include "altclust/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

using namespace altclust;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;

std::string iso_timestamp() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

std::string strip_extension(const std::string& path) {
    const auto slash = path.find_last_of('/');
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
    return path.substr(0, dot);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void write_labels_csv(const std::string& path, const Labels& labels) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "label\n";
    for (int l : labels) out << l << '\n';
}

void write_trace_csv(const std::string& path, const SolveTrace& trace) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "iteration,cost,residual,w_step\n";
    char buf[96];
    for (const auto& r : trace.records) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", r.iteration, r.cost, r.residual,
                      r.step);
        out << buf;
    }
}

// Flag values layered over config-file values layered over defaults.
struct RunFlags {
    CLI::Option *sigma = nullptr, *lambda = nullptr, *q = nullptr, *k = nullptr;
    CLI::Option *solver = nullptr, *init = nullptr, *seed = nullptr, *restarts = nullptr;
    CLI::Option *master_max_iter = nullptr, *tol = nullptr, *max_iter = nullptr;
    double sigma_v = 1.0, lambda_v = 1.0, tol_v = 1e-6;
    std::int64_t q_v = 1;
    int k_v = 2, restarts_v = 10, master_max_iter_v = 20, max_iter_v = 1000;
    std::uint64_t seed_v = 0;
    std::string solver_v = "ism", init_v = "si";
    std::string config_path;

    void attach(CLI::App* cmd) {
        sigma = cmd->add_option("--sigma", sigma_v, "Gaussian kernel width");
        lambda = cmd->add_option("--lambda", lambda_v, "alternativeness weight");
        q = cmd->add_option("--q", q_v, "projection dimension");
        k = cmd->add_option("--k", k_v, "number of clusters");
        solver = cmd->add_option("--solver", solver_v, "W-subproblem solver")
                     ->check(CLI::IsMember({"ism", "sm", "dg"}));
        init = cmd->add_option("--init", init_v, "initialization scheme")
                   ->check(CLI::IsMember({"si", "ri"}));
        seed = cmd->add_option("--seed", seed_v, "RNG seed");
        restarts = cmd->add_option("--restarts", restarts_v, "random-init restarts");
        master_max_iter = cmd->add_option("--master-max-iter", master_max_iter_v,
                                          "outer alternation iteration cap");
        max_iter = cmd->add_option("--max-iter", max_iter_v, "solver iteration cap");
        tol = cmd->add_option("--tol", tol_v, "solver convergence tolerance");
        cmd->add_option("--config", config_path, "JSON config file");
    }

    RunConfig resolve() const {
        RunConfig cfg;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw std::runtime_error("cannot open config '" + config_path + "'");
            json j;
            in >> j;
            cfg = config_from_json(j, cfg);
        }
        if (sigma->count()) cfg.kdac.sigma = sigma_v;
        if (lambda->count()) cfg.kdac.lambda_weight = lambda_v;
        if (q->count()) cfg.kdac.q = q_v;
        if (k->count()) cfg.kdac.k = k_v;
        if (solver->count()) cfg.kdac.solver.method = solver_method_from_string(solver_v);
        if (init->count()) cfg.kdac.init = init_scheme_from_string(init_v);
        if (seed->count()) cfg.kdac.seed = seed_v;
        if (restarts->count()) cfg.restarts = restarts_v;
        if (master_max_iter->count()) cfg.kdac.master_max_iter = master_max_iter_v;
        if (max_iter->count()) cfg.kdac.solver.max_iter = max_iter_v;
        if (tol->count()) cfg.kdac.solver.tol = tol_v;
        return cfg;
    }
};

struct MeanStd {
    double mean = 0.0, std = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs) {
    MeanStd out;
    if (xs.empty()) return out;
    for (double x : xs) out.mean += x;
    out.mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(xs.size()));
    return out;
}

RunReport build_report(const RunConfig& cfg, const KdacResult& r) {
    RunReport rep;
    rep.config = cfg;
    rep.metrics = r.metrics;
    rep.optimality = r.report;
    rep.master_trace = r.master_trace;
    rep.solver_trace = r.last_solve_trace;
    rep.timestamp = iso_timestamp();
    return rep;
}

int cmd_generate(const std::string& name, std::uint64_t seed, const std::string& out_path) {
    Dataset ds;
    if (name == "sg")
        ds = gen_small_gauss(seed);
    else if (name == "lg")
        ds = gen_large_gauss(seed);
    else if (name == "moon")
        ds = gen_moons(seed, false);
    else if (name == "moonn")
        ds = gen_moons(seed, true);
    else {
        std::cerr << "generate: unknown dataset '" << name << "' (expected sg, lg, moon, moonn)\n";
        return kExitUsage;
    }
    save_csv(ds, out_path);
    json meta{{"name", ds.name},
              {"seed", seed},
              {"n", ds.X.rows()},
              {"d", ds.X.cols()},
              {"views",
               {{"original", "second-to-last column (given clustering)"},
                {"alternative", "last column (clustering to discover)"}}}};
    write_text(strip_extension(out_path) + ".meta.json", meta.dump(2) + "\n");
    std::cout << "wrote " << ds.X.rows() << " rows to " << out_path << "\n";
    return kExitOk;
}

int cmd_run(const std::string& data_path, const RunFlags& flags, const std::string& out_path) {
    const Dataset ds = load_csv(data_path);
    if (!ds.original_labels) {
        std::cerr << "run: '" << data_path << "' carries no label column\n";
        return kExitUsage;
    }
    RunConfig cfg = flags.resolve();

    KdacResult best;
    int best_idx = -1;
    std::optional<RestartStats> stats;
    const bool fan_out = cfg.kdac.init == InitScheme::Random && cfg.restarts > 1;
    if (fan_out) {
        std::vector<KdacResult> runs(static_cast<std::size_t>(cfg.restarts));
        std::vector<double> nmis, novs, cqs, costs, iters;
        for (int r = 0; r < cfg.restarts; ++r) {
            KdacConfig kc = cfg.kdac;
            kc.seed = cfg.kdac.seed + static_cast<std::uint64_t>(r);
            runs[static_cast<std::size_t>(r)] = kdac_run(ds.X, *ds.original_labels, kc, &ds);
            const auto& m = runs[static_cast<std::size_t>(r)].metrics;
            if (m.nmi_vs_truth) nmis.push_back(*m.nmi_vs_truth);
            if (m.novelty) novs.push_back(*m.novelty);
            cqs.push_back(m.clustering_quality);
            costs.push_back(m.objective_cost);
            iters.push_back(static_cast<double>(m.iterations));
        }
        RestartStats s;
        s.runs = cfg.restarts;
        MeanStd ms = mean_std(nmis);
        s.nmi_mean = ms.mean, s.nmi_std = ms.std;
        ms = mean_std(novs);
        s.novelty_mean = ms.mean, s.novelty_std = ms.std;
        ms = mean_std(cqs);
        s.cq_mean = ms.mean, s.cq_std = ms.std;
        ms = mean_std(costs);
        s.cost_mean = ms.mean, s.cost_std = ms.std;
        ms = mean_std(iters);
        s.iterations_mean = ms.mean, s.iterations_std = ms.std;
        stats = s;
        // headline run: best clustering quality, first index breaking ties
        for (int r = 0; r < cfg.restarts; ++r)
            if (best_idx < 0 || cqs[static_cast<std::size_t>(r)] >
                                    cqs[static_cast<std::size_t>(best_idx)])
                best_idx = r;
        best = std::move(runs[static_cast<std::size_t>(best_idx)]);
    } else {
        best = kdac_run(ds.X, *ds.original_labels, cfg.kdac, &ds);
    }

    RunReport rep = build_report(cfg, best);
    rep.restart_stats = stats;
    const std::string stem = strip_extension(out_path);
    write_text(out_path, report_to_json(rep).dump(2) + "\n");
    write_labels_csv(stem + "_labels.csv", best.labels);
    write_trace_csv(stem + "_trace.csv", best.last_solve_trace);

    std::cout << "nmi=" << (best.metrics.nmi_vs_truth ? std::to_string(*best.metrics.nmi_vs_truth)
                                                      : "n/a")
              << " novelty="
              << (best.metrics.novelty ? std::to_string(*best.metrics.novelty) : "n/a")
              << " cq=" << best.metrics.clustering_quality
              << " iters=" << best.metrics.iterations << " time=" << best.metrics.wall_time_s
              << "s\n";
    return kExitOk;
}

int cmd_bench(const std::string& data_path, const std::vector<std::string>& solvers,
              const RunFlags& flags, int dims_sweep, const std::string& out_path) {
    Dataset ds = load_csv(data_path);
    if (!ds.original_labels) {
        std::cerr << "bench: '" << data_path << "' carries no label column\n";
        return kExitUsage;
    }
    const RunConfig cfg = flags.resolve();

    json rows = json::array();
    for (const std::string& name : solvers) {
        KdacConfig kc = cfg.kdac;
        kc.solver.method = solver_method_from_string(name);
        kc.curvature_directions = 0;
        const KdacResult r = kdac_run(ds.X, *ds.original_labels, kc, &ds);
        rows.push_back(json{{"solver", name},
                            {"iterations", r.total_solver_iterations},
                            {"wall_time_s", r.metrics.wall_time_s},
                            {"converged", r.converged},
                            {"cost", r.metrics.objective_cost}});
        std::cout << name << ": " << r.total_solver_iterations << " iterations, "
                  << r.metrics.wall_time_s << "s\n";
    }

    json sweep = json::array();
    if (dims_sweep > 0) {
        Matrix X = ds.X;
        std::mt19937_64 rng(cfg.kdac.seed ^ 0x5EEDu);
        for (int s = 0; s < dims_sweep; ++s) {
            KdacConfig kc = cfg.kdac;
            kc.curvature_directions = 0;
            const KdacResult r = kdac_run(X, *ds.original_labels, kc, &ds);
            sweep.push_back(json{{"d", X.cols()}, {"wall_time_s", r.metrics.wall_time_s}});
            // double d with uniform-noise columns for the next row
            Matrix wider(X.rows(), 2 * X.cols());
            wider.leftCols(X.cols()) = X;
            for (Eigen::Index j = X.cols(); j < wider.cols(); ++j)
                for (Eigen::Index i = 0; i < X.rows(); ++i)
                    wider(i, j) =
                        static_cast<double>(rng() >> 11) * 0x1.0p-53;
            X = std::move(wider);
        }
    }

    json out{{"config", config_to_json(cfg)}, {"bench", rows}, {"dims_sweep", sweep}};
    write_text(out_path, out.dump(2) + "\n");
    return kExitOk;
}

int cmd_verify(const std::string& data_path, const RunFlags& flags, const std::string& out_path) {
    const Dataset ds = load_csv(data_path);
    if (!ds.original_labels) {
        std::cerr << "verify: '" << data_path << "' carries no label column\n";
        return kExitUsage;
    }
    const RunConfig cfg = flags.resolve();
    const KdacResult r = kdac_run(ds.X, *ds.original_labels, cfg.kdac, &ds);
    const OptimalityReport& rep = r.report;

    const double lam_max = r.phi_spectrum.size() ? r.phi_spectrum.cwiseAbs().maxCoeff() : 0.0;
    const bool stationarity_ok = rep.stationarity_residual <= 1e-6;
    const bool orthonorm_ok = rep.orthonormality_defect <= 1e-10;
    const bool curvature_ok =
        rep.curvature_samples.empty() || rep.min_curvature >= -1e-8 * (1.0 + lam_max);

    json out = json{{"optimality",
                     {{"stationarity_residual", rep.stationarity_residual},
                      {"orthonormality_defect", rep.orthonormality_defect},
                      {"eigengap", rep.eigengap},
                      {"sigma_lhs", rep.sigma_lhs},
                      {"sigma_rhs", rep.sigma_rhs},
                      {"sigma_condition_holds", rep.sigma_condition_holds},
                      {"phi_rank_ok", rep.phi_rank_ok},
                      {"min_curvature", rep.min_curvature}}},
                    {"checks",
                     {{"stationarity_ok", stationarity_ok},
                      {"orthonormality_ok", orthonorm_ok},
                      {"sigma_condition_ok", rep.sigma_condition_holds},
                      {"curvature_ok", curvature_ok}}},
                    {"config", config_to_json(cfg)}};
    if (!out_path.empty()) write_text(out_path, out.dump(2) + "\n");
    std::cout << out.dump(2) << "\n";

    const bool pass = stationarity_ok && orthonorm_ok && rep.sigma_condition_holds && curvature_ok;
    return pass ? kExitOk : kExitVerifyFail;
}

int cmd_tune(const std::string& data_path, const std::vector<double>& sigmas,
             const std::vector<double>& lambdas, const std::vector<std::int64_t>& qs,
             const RunFlags& flags, const std::string& out_path) {
    const Dataset ds = load_csv(data_path);
    if (!ds.original_labels) {
        std::cerr << "tune: '" << data_path << "' carries no label column\n";
        return kExitUsage;
    }
    const RunConfig cfg = flags.resolve();
    std::vector<Eigen::Index> q_candidates(qs.begin(), qs.end());
    const GridSearchResult g =
        grid_search(ds.X, *ds.original_labels, sigmas, lambdas, q_candidates, cfg.kdac);

    RunConfig best = cfg;
    best.kdac = g.best;
    write_text(out_path, json{{"best", config_to_json(best)}}.dump(2) + "\n");

    const std::string log_path = strip_extension(out_path) + "_log.csv";
    std::ofstream log(log_path);
    if (!log) throw std::runtime_error("cannot open '" + log_path + "' for writing");
    log << "sigma,lambda,q,cq,lhs,rhs,holds\n";
    char buf[160];
    for (const auto& c : g.log) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%lld,%.17g,%.17g,%.17g,%d\n", c.sigma,
                      c.lambda_weight, static_cast<long long>(c.q), c.cq, c.sigma_lhs, c.sigma_rhs,
                      c.holds ? 1 : 0);
        log << buf;
    }
    std::cout << "best: sigma=" << g.best.sigma << " lambda=" << g.best.lambda_weight
              << " q=" << g.best.q << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"alternative clustering via kernel dimension reduction"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "write a synthetic dataset as CSV");
    std::string gen_name, gen_out = "data.csv";
    std::uint64_t gen_seed = 0;
    gen->add_option("name", gen_name, "one of: sg, lg, moon, moonn")->required();
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_option("-o,--out", gen_out, "output CSV path");

    // run
    auto* run = app.add_subcommand("run", "run the full alternating pipeline");
    std::string run_data, run_out = "report.json";
    run->add_option("data", run_data, "input CSV")->required();
    run->add_option("-o,--out", run_out, "report JSON path");
    RunFlags run_flags;
    run_flags.attach(run);

    // bench
    auto* bench = app.add_subcommand("bench", "compare solvers from an identical start");
    std::string bench_data, bench_out = "bench.json";
    std::vector<std::string> bench_solvers{"ism", "sm", "dg"};
    int dims_sweep = 0;
    bench->add_option("data", bench_data, "input CSV")->required();
    bench->add_option("--solvers", bench_solvers, "solvers to compare")
        ->delimiter(',')
        ->check(CLI::IsMember({"ism", "sm", "dg"}));
    bench->add_option("--dims-sweep", dims_sweep, "rows of dimension doubling");
    bench->add_option("-o,--out", bench_out, "output JSON path");
    RunFlags bench_flags;
    bench_flags.attach(bench);

    // verify
    auto* verify = app.add_subcommand("verify", "check the optimality certificate");
    std::string verify_data, verify_out;
    verify->add_option("data", verify_data, "input CSV")->required();
    verify->add_option("-o,--out", verify_out, "report JSON path (optional)");
    RunFlags verify_flags;
    verify_flags.attach(verify);

    // tune
    auto* tune = app.add_subcommand("tune", "grid search over sigma, lambda and q");
    std::string tune_data, tune_out = "tune.json";
    std::vector<double> sigmas{0.1, 0.5, 1.0, 2.0};
    std::vector<double> lambdas{0.01, 0.04, 0.1, 1.0};
    std::vector<std::int64_t> qs{1, 2, 3};
    tune->add_option("data", tune_data, "input CSV")->required();
    tune->add_option("--sigmas", sigmas, "kernel width grid")->delimiter(',');
    tune->add_option("--lambdas", lambdas, "lambda grid")->delimiter(',');
    tune->add_option("--qs", qs, "q candidates")->delimiter(',');
    tune->add_option("-o,--out", tune_out, "output JSON path");
    RunFlags tune_flags;
    tune_flags.attach(tune);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (gen->parsed()) return cmd_generate(gen_name, gen_seed, gen_out);
        if (run->parsed()) return cmd_run(run_data, run_flags, run_out);
        if (bench->parsed())
            return cmd_bench(bench_data, bench_solvers, bench_flags, dims_sweep, bench_out);
        if (verify->parsed()) return cmd_verify(verify_data, verify_flags, verify_out);
        if (tune->parsed()) return cmd_tune(tune_data, sigmas, lambdas, qs, tune_flags, tune_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

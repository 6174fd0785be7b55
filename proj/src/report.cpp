#include "altclust/report.hpp"

#include <stdexcept>

namespace altclust {

namespace {

using nlohmann::json;

json optional_to_json(const std::optional<double>& v) {
    if (v) return *v;
    return nullptr;
}

std::optional<double> optional_from_json(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

json metrics_to_json(const MetricsReport& m) {
    return json{{"nmi_vs_truth", optional_to_json(m.nmi_vs_truth)},
                {"novelty", optional_to_json(m.novelty)},
                {"clustering_quality", m.clustering_quality},
                {"clustering_quality_normalized", m.clustering_quality_normalized},
                {"objective_cost", m.objective_cost},
                {"wall_time_s", m.wall_time_s},
                {"iterations", m.iterations}};
}

MetricsReport metrics_from_json(const json& j) {
    MetricsReport m;
    m.nmi_vs_truth = optional_from_json(j.at("nmi_vs_truth"));
    m.novelty = optional_from_json(j.at("novelty"));
    m.clustering_quality = j.at("clustering_quality").get<double>();
    m.clustering_quality_normalized = j.at("clustering_quality_normalized").get<double>();
    m.objective_cost = j.at("objective_cost").get<double>();
    m.wall_time_s = j.at("wall_time_s").get<double>();
    m.iterations = j.at("iterations").get<int>();
    return m;
}

json optimality_to_json(const OptimalityReport& o) {
    json samples = json::array();
    for (const auto& [seed, value] : o.curvature_samples)
        samples.push_back(json{{"seed", seed}, {"value", value}});
    return json{{"stationarity_residual", o.stationarity_residual},
                {"orthonormality_defect", o.orthonormality_defect},
                {"eigengap", o.eigengap},
                {"sigma_lhs", o.sigma_lhs},
                {"sigma_rhs", o.sigma_rhs},
                {"sigma_condition_holds", o.sigma_condition_holds},
                {"phi_rank_ok", o.phi_rank_ok},
                {"min_curvature", o.min_curvature},
                {"curvature_samples", samples}};
}

OptimalityReport optimality_from_json(const json& j) {
    OptimalityReport o;
    o.stationarity_residual = j.at("stationarity_residual").get<double>();
    o.orthonormality_defect = j.at("orthonormality_defect").get<double>();
    o.eigengap = j.at("eigengap").get<double>();
    o.sigma_lhs = j.at("sigma_lhs").get<double>();
    o.sigma_rhs = j.at("sigma_rhs").get<double>();
    o.sigma_condition_holds = j.at("sigma_condition_holds").get<bool>();
    o.phi_rank_ok = j.at("phi_rank_ok").get<bool>();
    o.min_curvature = j.at("min_curvature").get<double>();
    for (const auto& s : j.at("curvature_samples"))
        o.curvature_samples.emplace_back(s.at("seed").get<std::uint64_t>(),
                                         s.at("value").get<double>());
    return o;
}

json master_to_json(const std::vector<MasterRecord>& trace) {
    json arr = json::array();
    for (const auto& r : trace)
        arr.push_back(json{{"iteration", r.iteration},
                           {"objective", r.objective},
                           {"w_step", r.w_step},
                           {"u_step", r.u_step},
                           {"solver_converged", r.solver_converged}});
    return arr;
}

std::vector<MasterRecord> master_from_json(const json& arr) {
    std::vector<MasterRecord> trace;
    for (const auto& j : arr) {
        MasterRecord r;
        r.iteration = j.at("iteration").get<int>();
        r.objective = j.at("objective").get<double>();
        r.w_step = j.at("w_step").get<double>();
        r.u_step = j.at("u_step").get<double>();
        r.solver_converged = j.at("solver_converged").get<bool>();
        trace.push_back(r);
    }
    return trace;
}

json solve_trace_to_json(const SolveTrace& t) {
    json recs = json::array();
    for (const auto& r : t.records)
        recs.push_back(json{{"iteration", r.iteration},
                            {"cost", r.cost},
                            {"residual", r.residual},
                            {"step", r.step},
                            {"wall_s", r.wall_s}});
    return json{{"records", recs},
                {"converged", t.converged},
                {"stalled", t.stalled},
                {"iterations", t.iterations}};
}

SolveTrace solve_trace_from_json(const json& j) {
    SolveTrace t;
    for (const auto& rj : j.at("records")) {
        IterRecord r;
        r.iteration = rj.at("iteration").get<int>();
        r.cost = rj.at("cost").get<double>();
        r.residual = rj.at("residual").get<double>();
        r.step = rj.at("step").get<double>();
        r.wall_s = rj.at("wall_s").get<double>();
        t.records.push_back(r);
    }
    t.converged = j.at("converged").get<bool>();
    t.stalled = j.at("stalled").get<bool>();
    t.iterations = j.at("iterations").get<int>();
    return t;
}

json restarts_to_json(const RestartStats& s) {
    return json{{"runs", s.runs},
                {"nmi_mean", s.nmi_mean},
                {"nmi_std", s.nmi_std},
                {"novelty_mean", s.novelty_mean},
                {"novelty_std", s.novelty_std},
                {"cq_mean", s.cq_mean},
                {"cq_std", s.cq_std},
                {"cost_mean", s.cost_mean},
                {"cost_std", s.cost_std},
                {"iterations_mean", s.iterations_mean},
                {"iterations_std", s.iterations_std}};
}

RestartStats restarts_from_json(const json& j) {
    RestartStats s;
    s.runs = j.at("runs").get<int>();
    s.nmi_mean = j.at("nmi_mean").get<double>();
    s.nmi_std = j.at("nmi_std").get<double>();
    s.novelty_mean = j.at("novelty_mean").get<double>();
    s.novelty_std = j.at("novelty_std").get<double>();
    s.cq_mean = j.at("cq_mean").get<double>();
    s.cq_std = j.at("cq_std").get<double>();
    s.cost_mean = j.at("cost_mean").get<double>();
    s.cost_std = j.at("cost_std").get<double>();
    s.iterations_mean = j.at("iterations_mean").get<double>();
    s.iterations_std = j.at("iterations_std").get<double>();
    return s;
}

}  // namespace

std::string to_string(InitScheme s) {
    return s == InitScheme::SpectralInit ? "si" : "ri";
}

InitScheme init_scheme_from_string(const std::string& name) {
    if (name == "si") return InitScheme::SpectralInit;
    if (name == "ri") return InitScheme::Random;
    throw std::invalid_argument("unknown init scheme '" + name + "' (expected si or ri)");
}

nlohmann::json config_to_json(const RunConfig& cfg) {
    return json{{"sigma", cfg.kdac.sigma},
                {"lambda", cfg.kdac.lambda_weight},
                {"q", static_cast<std::int64_t>(cfg.kdac.q)},
                {"k", cfg.kdac.k},
                {"solver", to_string(cfg.kdac.solver.method)},
                {"init", to_string(cfg.kdac.init)},
                {"seed", cfg.kdac.seed},
                {"restarts", cfg.restarts},
                {"master_max_iter", cfg.kdac.master_max_iter},
                {"tol", cfg.kdac.solver.tol}};
}

RunConfig config_from_json(const nlohmann::json& j, const RunConfig& defaults) {
    static const char* known[] = {"sigma", "lambda",   "q",    "k",        "solver",
                                  "init",  "seed",     "restarts", "master_max_iter", "tol"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    RunConfig cfg = defaults;
    if (j.contains("sigma")) cfg.kdac.sigma = j.at("sigma").get<double>();
    if (j.contains("lambda")) cfg.kdac.lambda_weight = j.at("lambda").get<double>();
    if (j.contains("q")) cfg.kdac.q = j.at("q").get<Eigen::Index>();
    if (j.contains("k")) cfg.kdac.k = j.at("k").get<int>();
    if (j.contains("solver"))
        cfg.kdac.solver.method = solver_method_from_string(j.at("solver").get<std::string>());
    if (j.contains("init")) cfg.kdac.init = init_scheme_from_string(j.at("init").get<std::string>());
    if (j.contains("seed")) cfg.kdac.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("restarts")) cfg.restarts = j.at("restarts").get<int>();
    if (j.contains("master_max_iter"))
        cfg.kdac.master_max_iter = j.at("master_max_iter").get<int>();
    if (j.contains("tol")) cfg.kdac.solver.tol = j.at("tol").get<double>();
    return cfg;
}

nlohmann::json report_to_json(const RunReport& r) {
    json traces{{"master", master_to_json(r.master_trace)},
                {"solver", solve_trace_to_json(r.solver_trace)}};
    json env{{"version", r.version}, {"seed", r.config.kdac.seed}, {"timestamp", r.timestamp}};
    json out{{"config", config_to_json(r.config)},
             {"metrics", metrics_to_json(r.metrics)},
             {"optimality", optimality_to_json(r.optimality)},
             {"traces", traces},
             {"env", env}};
    if (r.restart_stats) out["restarts"] = restarts_to_json(*r.restart_stats);
    return out;
}

RunReport report_from_json(const nlohmann::json& j) {
    RunReport r;
    r.config = config_from_json(j.at("config"), RunConfig{});
    r.metrics = metrics_from_json(j.at("metrics"));
    r.optimality = optimality_from_json(j.at("optimality"));
    r.master_trace = master_from_json(j.at("traces").at("master"));
    r.solver_trace = solve_trace_from_json(j.at("traces").at("solver"));
    if (j.contains("restarts")) r.restart_stats = restarts_from_json(j.at("restarts"));
    r.version = j.at("env").at("version").get<std::string>();
    r.timestamp = j.at("env").at("timestamp").get<std::string>();
    return r;
}

}  // namespace altclust

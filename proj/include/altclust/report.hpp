#ifndef ALTCLUST_REPORT_HPP
#define ALTCLUST_REPORT_HPP

#include "altclust/pipeline.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace altclust {

inline constexpr const char* kVersion = "0.1.0";

std::string to_string(InitScheme s);
InitScheme init_scheme_from_string(const std::string& name);

/// The run-level configuration as it appears in config files: the KDAC
/// parameters plus the random-restart fan-out count.
struct RunConfig {
    KdacConfig kdac;
    int restarts = 10;
};

/// Per-metric mean/std over the random-restart fan-out.
struct RestartStats {
    int runs = 0;
    double nmi_mean = 0.0, nmi_std = 0.0;
    double novelty_mean = 0.0, novelty_std = 0.0;
    double cq_mean = 0.0, cq_std = 0.0;
    double cost_mean = 0.0, cost_std = 0.0;
    double iterations_mean = 0.0, iterations_std = 0.0;
};

struct RunReport {
    RunConfig config;
    MetricsReport metrics;
    OptimalityReport optimality;
    std::vector<MasterRecord> master_trace;
    SolveTrace solver_trace;
    std::optional<RestartStats> restart_stats;
    std::string version = kVersion;
    std::string timestamp;  // wall clock; excluded from determinism contracts
};

nlohmann::json config_to_json(const RunConfig& cfg);
/// Missing keys fall back to `defaults`; unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j, const RunConfig& defaults);

nlohmann::json report_to_json(const RunReport& r);
RunReport report_from_json(const nlohmann::json& j);

}  // namespace altclust

#endif

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "flab/chart.hpp"
#include "flab/metric.hpp"

namespace flab {

enum class ToleranceClass { structural, algebraic, first_order, third_order, numerics };

std::string to_string(ToleranceClass c);
ToleranceClass tolerance_class_from_string(const std::string& s);

struct CheckSpec {
    std::string id;      ///< "<suite>.<name>"
    std::string anchor;  ///< the identity being checked, in words
    ToleranceClass cls;
    double tolerance;    ///< default; pass iff max residual <= tolerance
};

/// Every check of the sweep, in report order.
const std::vector<CheckSpec>& check_registry();

/// Overrides applied on top of the registry defaults: per class first, then per check id.
struct ToleranceProfile {
    std::map<ToleranceClass, double> classes;
    std::map<std::string, double> checks;
    std::optional<double> global;  ///< replaces every tolerance when set

    double resolve(const CheckSpec& spec) const;
};

/// {"classes": {"algebraic": 1e-10, ...}, "checks": {"vaisman.gamma_action": 1e-10, ...}}.
ToleranceProfile parse_tolerance_profile(const nlohmann::json& j);
ToleranceProfile load_tolerance_profile(const std::string& path);

struct SweepOptions {
    int points = 100;
    std::uint64_t seed = 42;
    int threads = 1;
    int samples = 10;            ///< random fields per basicness check and point
    int fd_spot_points = 50;     ///< finite-difference spot checks run on the first points only
    std::vector<std::string> selection;  ///< check ids or suite names; empty selects all
    ToleranceProfile tolerances;
};

/// Registry indices picked by `selection`; throws ConfigError on an unknown name.
std::vector<int> select_checks(const std::vector<std::string>& selection);

struct WorstPoint {
    long index = -1;
    std::vector<double> x, y;
};

struct CheckResult {
    CheckSpec spec;
    double tolerance = 0.0;
    double max_residual = 0.0;
    double mean_residual = 0.0;
    int evaluated = 0;
    int errors = 0;
    WorstPoint worst;
    std::vector<std::string> error_messages;  ///< first few, with the point
    bool pass = false;
};

struct SweepResult {
    std::string metric;
    int n = 0;
    std::vector<CheckResult> checks;
    double wall_seconds = 0.0;
    bool all_pass() const;
};

/// The precomputed per-metric data a sweep needs: the metric pushed through a cubic chart and
/// through the identity chart.
class SweepContext {
public:
    SweepContext(const FinslerMetric& M, const SweepOptions& opts);

    const FinslerMetric& metric() const { return metric_; }
    const SweepOptions& options() const { return opts_; }
    const std::vector<bool>& enabled() const { return enabled_; }
    bool any_enabled(const std::string& suite) const;

    const ChartMap& cubic() const { return cubic_; }
    const FinslerMetric& cubic_pushed() const { return cubic_pushed_; }
    const ChartMap& identity() const { return identity_; }
    const FinslerMetric& identity_pushed() const { return identity_pushed_; }

private:
    FinslerMetric metric_;
    SweepOptions opts_;
    std::vector<bool> enabled_;
    ChartMap cubic_, identity_;
    FinslerMetric cubic_pushed_, identity_pushed_;
};

/// Residuals of every enabled check at sample point `index` (NaN where not evaluated), or an error
/// message when the point could not be evaluated.
struct PointOutcome {
    std::vector<double> residuals;
    std::string error;
};

PointOutcome evaluate_point(const SweepContext& ctx, long index);

/// Deterministic sweep: the points are split into fixed chunks handed to `threads` workers, results
/// are stored by point index and reduced in index order, so the thread count never changes a number.
SweepResult run_sweep(const FinslerMetric& M, const SweepOptions& opts);

/// {meta, checks}; `checks` alone is the deterministic body.
nlohmann::json report_json(const SweepResult& r, const SweepOptions& opts);

} // namespace flab

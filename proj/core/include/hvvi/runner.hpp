#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hvvi/catalog.hpp"

namespace hvvi::runner {

inline constexpr const char* kVersion = "hvvi 0.1.0";

enum class Suite {
    Geometry,
    Convexificator,
    Mvt,
    Convexity,
    Monotonicity,
    Secant,
    Stampacchia,
    Minty,
    WeakStampacchia,
    WeakMinty,
    Efficiency,
    Relations,
    Search,
};

std::string to_string(Suite suite);
const std::vector<Suite>& all_suites();

/// One line of what a suite samples, which budget sizes it, and when its
/// outcome gates the exit code.
std::string describe(Suite suite);

struct Budgets {
    std::size_t q_samples = 10000;
    std::size_t pairs = 1000;
    std::size_t directions = 1000;
    std::size_t grid = 4096;
    std::size_t candidates = 200;
};

struct Tolerances {
    double margin_abs = 1e-8;       ///< >= checks on margins
    double strict_min = 1e-10;      ///< strict checks require margin > this
    double cone_zero_floor = 1e-10; ///< ||v||_inf floor classifying "zero"
    double convexificator = 1e-4;   ///< convexificator checks vs Dini estimates
    double secant_euclidean = 1e-8;
    double secant_halfplane = 1e-6;
    double endpoint_eq = 1e-10;     ///< secant equality at mu in {0,1}
    double geometry_rel = 1e-9;     ///< roundtrip/distance/transport residuals
    double geometry_eq = 1e-8;      ///< geodesic-splitting identity residuals
    double mvt_smooth = 1e-6;       ///< mean-value residual, smooth entries
    double mvt_kinked = 1e-4;       ///< mean-value residual, kinked entries
};

struct ExperimentConfig {
    std::string catalog_id;
    std::vector<Suite> suites;
    std::uint64_t seed = 0;
    Budgets budgets;
    Tolerances tolerances;
    std::string output_dir = "hvvi-out";
    int workers = 1;
    std::string search_kind = "stampacchia";
    std::vector<std::string> defaults_applied;
};

/// Parse and fully validate a JSON configuration document. Unknown keys,
/// unknown suite names, missing seed, and out-of-range budgets are rejected
/// with a diagnostic naming the field. Applied defaults are recorded.
ExperimentConfig parse_config(const std::string& text);

/// One margins.csv row.
struct MarginRow {
    std::vector<double> candidate;
    std::vector<double> sample;
    double margin = 0.0;
    int component = -1;
};

struct SuiteResult {
    Suite suite = Suite::Geometry;
    int order = 0;
    bool licensed = false;   ///< outcome gates the process exit code
    bool passed = true;      ///< licensed assertion outcome (true when informational)
    std::string verdict;     ///< "pass", "fail", or "not-applicable"
    std::size_t samples = 0;
    double worst_margin = 0.0;
    std::vector<MarginRow> rows;            ///< exactly the suite's primary budget
    std::vector<std::string> notes;         ///< witnesses, counterexamples, gates
    double wall_seconds = 0.0;              ///< excluded from report.json
};

struct RunReport {
    ExperimentConfig config;
    std::string catalog_id;
    std::vector<SuiteResult> suites;
    std::string version = kVersion;

    bool any_licensed_failure() const;
};

/// Execute the requested suites in declaration order. Pure compute; no I/O.
RunReport run(const ExperimentConfig& config);

/// Canonical serialization (sorted keys, %.17g floats); byte-identical for
/// identical configs regardless of worker count. Volatile data (wall time)
/// is excluded.
std::string report_json(const RunReport& report);
std::string margins_csv(const RunReport& report);
std::string timings_json(const RunReport& report);

/// Write report.json, margins.csv and timings.json under output_dir.
/// Returns the process exit code: 0 if no licensed suite failed, 1 otherwise.
int write_outputs(const RunReport& report, const std::string& output_dir);

} // namespace hvvi::runner

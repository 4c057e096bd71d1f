#include "hvvi/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <variant>

#include <json.hpp>

#include "hvvi/errors.hpp"
#include "hvvi/parallel.hpp"
#include "hvvi/rng.hpp"
#include "hvvi/vvi.hpp"

namespace hvvi::runner {

namespace {

using catalog::CatalogEntry;
using catalog::ConvexityStatus;
using geom::Point;
using geom::Tangent;

// ---------------------------------------------------------------------------
// Canonical JSON writer: object keys sorted, floats %.17g, no whitespace
// variation. Keeps report.json byte-stable across runs and worker counts.

class Json;
using JsonObject = std::map<std::string, Json>;
using JsonArray = std::vector<Json>;

class Json {
public:
    Json() : value_(nullptr) {}
    Json(std::nullptr_t) : value_(nullptr) {}
    Json(bool b) : value_(b) {}
    Json(double d) : value_(d) {}
    Json(std::uint64_t u) : value_(u) {}
    Json(int i) : value_(static_cast<std::uint64_t>(i)) {}
    Json(const char* s) : value_(std::string(s)) {}
    Json(std::string s) : value_(std::move(s)) {}
    Json(JsonArray a) : value_(std::move(a)) {}
    Json(JsonObject o) : value_(std::move(o)) {}

    static Json coords(const std::vector<double>& c) {
        JsonArray a;
        a.reserve(c.size());
        for (double x : c) a.emplace_back(x);
        return Json(std::move(a));
    }

    void write(std::string& out) const {
        if (std::holds_alternative<std::nullptr_t>(value_)) {
            out += "null";
        } else if (const bool* b = std::get_if<bool>(&value_)) {
            out += *b ? "true" : "false";
        } else if (const std::uint64_t* u = std::get_if<std::uint64_t>(&value_)) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%llu", static_cast<unsigned long long>(*u));
            out += buf;
        } else if (const double* d = std::get_if<double>(&value_)) {
            if (!std::isfinite(*d)) {
                out += "null";
            } else {
                char buf[40];
                std::snprintf(buf, sizeof(buf), "%.17g", *d);
                out += buf;
            }
        } else if (const std::string* s = std::get_if<std::string>(&value_)) {
            write_string(*s, out);
        } else if (const JsonArray* a = std::get_if<JsonArray>(&value_)) {
            out += '[';
            for (std::size_t i = 0; i < a->size(); ++i) {
                if (i) out += ',';
                (*a)[i].write(out);
            }
            out += ']';
        } else {
            const JsonObject& o = std::get<JsonObject>(value_);
            out += '{';
            bool first = true;
            for (const auto& [key, val] : o) {
                if (!first) out += ',';
                first = false;
                write_string(key, out);
                out += ':';
                val.write(out);
            }
            out += '}';
        }
    }

private:
    static void write_string(const std::string& s, std::string& out) {
        out += '"';
        for (char c : s) {
            switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\t': out += "\\t"; break;
                case '\r': out += "\\r"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                        out += buf;
                    } else {
                        out += c;
                    }
            }
        }
        out += '"';
    }

    std::variant<std::nullptr_t, bool, std::uint64_t, double, std::string, JsonArray, JsonObject>
        value_;
};

std::string format_double(double d) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", d);
    return buf;
}

std::string format_coords(const std::vector<double>& coords) {
    std::string out;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (i) out += ';';
        out += format_double(coords[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Suite naming

const std::vector<std::pair<Suite, const char*>>& suite_names() {
    static const std::vector<std::pair<Suite, const char*>> names = {
        {Suite::Geometry, "geometry"},
        {Suite::Convexificator, "convexificator"},
        {Suite::Mvt, "mvt"},
        {Suite::Convexity, "convexity"},
        {Suite::Monotonicity, "monotonicity"},
        {Suite::Secant, "secant"},
        {Suite::Stampacchia, "stampacchia"},
        {Suite::Minty, "minty"},
        {Suite::WeakStampacchia, "weak-stampacchia"},
        {Suite::WeakMinty, "weak-minty"},
        {Suite::Efficiency, "efficiency"},
        {Suite::Relations, "relations"},
        {Suite::Search, "search"},
    };
    return names;
}

std::string manifold_name(const geom::Manifold& m) {
    if (m.kind == geom::ManifoldKind::PoincareHalfPlane) return "poincare-half-plane";
    return "euclidean-" + std::to_string(m.dim);
}

} // namespace

std::string to_string(Suite suite) {
    for (const auto& [s, name] : suite_names())
        if (s == suite) return name;
    return "?";
}

const std::vector<Suite>& all_suites() {
    static const std::vector<Suite> all = [] {
        std::vector<Suite> v;
        for (const auto& [s, name] : suite_names()) v.push_back(s);
        return v;
    }();
    return all;
}

std::string describe(Suite suite) {
    switch (suite) {
        case Suite::Geometry:
            return "exp/log roundtrips, distance agreement, transport isometry and "
                   "geodesic-splitting identities on random region pairs; budget: q_samples; "
                   "gates exit code";
        case Suite::Convexificator:
            return "upper/lower convexificator checks of the entry's oracle against Dini "
                   "estimates on metric-unit directions at sampled points around the entry "
                   "candidate; budgets: sqrt(q_samples) points x directions; gates exit code";
        case Suite::Mvt:
            return "constructive mean-value witnesses on random geodesic pairs; residual "
                   "threshold per entry smoothness class; budgets: pairs, grid; gates exit code";
        case Suite::Convexity:
            return "componentwise subgradient inequality at the entry candidate over sampled "
                   "probes; gates exit code when the catalog labels the entry";
        case Suite::Monotonicity:
            return "monotonicity of the convexificator map over sampled pairs; gates exit code "
                   "when the catalog labels the entry; budget: pairs";
        case Suite::Secant:
            return "chord-above-graph inequality on a 21-point mu grid over sampled pairs; "
                   "gates exit code for convex-labelled entries; budget: pairs";
        case Suite::Stampacchia:
            return "Stampacchia-type inequality at the entry candidate over sampled q "
                   "(existential over generator tuples); informational; budget: q_samples";
        case Suite::Minty:
            return "Minty-type inequality at the entry candidate over sampled q (universal "
                   "over tuples); informational; budget: q_samples";
        case Suite::WeakStampacchia:
            return "weak Stampacchia variant (open orthant); informational; budget: q_samples";
        case Suite::WeakMinty:
            return "weak Minty variant (open orthant); informational; budget: q_samples";
        case Suite::Efficiency:
            return "sampled Pareto dominance at the entry candidate; informational; budget: "
                   "q_samples";
        case Suite::Relations:
            return "cross-tabulates all VVI checks plus efficiency over a candidate grid with "
                   "a shared q set and asserts the implications the established convexity "
                   "licenses; budgets: candidates, q_samples; gates exit code";
        case Suite::Search:
            return "runs one VVI check over a candidate grid and ranks candidates by margin; "
                   "informational; budgets: candidates, q_samples";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Config parsing

namespace {

void require_keys(const nlohmann::json& obj, const char* where,
                  std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok)
            throw ConfigError(std::string("config: unknown key '") + where + key + "'");
    }
}

std::size_t parse_budget(const nlohmann::json& obj, const char* name, std::size_t fallback,
                         std::vector<std::string>& defaults) {
    if (!obj.contains(name)) {
        defaults.push_back(std::string("budgets.") + name + "=" + std::to_string(fallback));
        return fallback;
    }
    const auto& v = obj.at(name);
    if (!v.is_number_integer() || v.get<long long>() < 1)
        throw ConfigError(std::string("config: budgets.") + name + " must be an integer >= 1");
    return v.get<std::size_t>();
}

double parse_tolerance(const nlohmann::json& obj, const char* name, double fallback,
                       std::vector<std::string>& defaults) {
    if (!obj.contains(name)) {
        defaults.push_back(std::string("tolerances.") + name + "=" + format_double(fallback));
        return fallback;
    }
    const auto& v = obj.at(name);
    if (!v.is_number() || !(v.get<double>() > 0.0))
        throw ConfigError(std::string("config: tolerances.") + name + " must be a positive number");
    return v.get<double>();
}

} // namespace

ExperimentConfig parse_config(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    require_keys(doc, "", {"catalog_id", "suites", "seed", "budgets", "tolerances", "output_dir",
                           "workers", "search_kind"});

    ExperimentConfig config;

    if (!doc.contains("catalog_id") || !doc.at("catalog_id").is_string())
        throw ConfigError("config: catalog_id (string) is required");
    config.catalog_id = doc.at("catalog_id").get<std::string>();

    if (!doc.contains("suites") || !doc.at("suites").is_array() || doc.at("suites").empty())
        throw ConfigError("config: suites (non-empty array) is required");
    for (const auto& item : doc.at("suites")) {
        if (!item.is_string()) throw ConfigError("config: suites entries must be strings");
        const std::string name = item.get<std::string>();
        bool found = false;
        for (const auto& [suite, suite_name] : suite_names()) {
            if (name == suite_name) {
                config.suites.push_back(suite);
                found = true;
                break;
            }
        }
        if (!found) throw ConfigError("config: unknown suite '" + name + "'");
    }
    for (std::size_t i = 0; i < config.suites.size(); ++i)
        for (std::size_t j = i + 1; j < config.suites.size(); ++j)
            if (config.suites[i] == config.suites[j])
                throw ConfigError("config: duplicate suite '" + to_string(config.suites[i]) + "'");

    // Reproducibility contract: the seed is never defaulted.
    if (!doc.contains("seed"))
        throw ConfigError("config: seed is required (reproducibility contract)");
    if (!doc.at("seed").is_number_unsigned() && !doc.at("seed").is_number_integer())
        throw ConfigError("config: seed must be a non-negative integer");
    if (doc.at("seed").is_number_integer() && doc.at("seed").get<long long>() < 0)
        throw ConfigError("config: seed must be a non-negative integer");
    config.seed = doc.at("seed").get<std::uint64_t>();

    nlohmann::json budgets = doc.contains("budgets") ? doc.at("budgets") : nlohmann::json::object();
    if (!budgets.is_object()) throw ConfigError("config: budgets must be an object");
    require_keys(budgets, "budgets.", {"q_samples", "pairs", "directions", "grid", "candidates"});
    Budgets fallback;
    config.budgets.q_samples =
        parse_budget(budgets, "q_samples", fallback.q_samples, config.defaults_applied);
    config.budgets.pairs = parse_budget(budgets, "pairs", fallback.pairs, config.defaults_applied);
    config.budgets.directions =
        parse_budget(budgets, "directions", fallback.directions, config.defaults_applied);
    config.budgets.grid = parse_budget(budgets, "grid", fallback.grid, config.defaults_applied);
    config.budgets.candidates =
        parse_budget(budgets, "candidates", fallback.candidates, config.defaults_applied);

    nlohmann::json tols = doc.contains("tolerances") ? doc.at("tolerances") : nlohmann::json::object();
    if (!tols.is_object()) throw ConfigError("config: tolerances must be an object");
    require_keys(tols, "tolerances.",
                 {"margin_abs", "strict_min", "cone_zero_floor", "convexificator",
                  "secant_euclidean", "secant_halfplane", "endpoint_eq", "geometry_rel",
                  "geometry_eq", "mvt_smooth", "mvt_kinked"});
    Tolerances tf;
    Tolerances& t = config.tolerances;
    auto& d = config.defaults_applied;
    t.margin_abs = parse_tolerance(tols, "margin_abs", tf.margin_abs, d);
    t.strict_min = parse_tolerance(tols, "strict_min", tf.strict_min, d);
    t.cone_zero_floor = parse_tolerance(tols, "cone_zero_floor", tf.cone_zero_floor, d);
    t.convexificator = parse_tolerance(tols, "convexificator", tf.convexificator, d);
    t.secant_euclidean = parse_tolerance(tols, "secant_euclidean", tf.secant_euclidean, d);
    t.secant_halfplane = parse_tolerance(tols, "secant_halfplane", tf.secant_halfplane, d);
    t.endpoint_eq = parse_tolerance(tols, "endpoint_eq", tf.endpoint_eq, d);
    t.geometry_rel = parse_tolerance(tols, "geometry_rel", tf.geometry_rel, d);
    t.geometry_eq = parse_tolerance(tols, "geometry_eq", tf.geometry_eq, d);
    t.mvt_smooth = parse_tolerance(tols, "mvt_smooth", tf.mvt_smooth, d);
    t.mvt_kinked = parse_tolerance(tols, "mvt_kinked", tf.mvt_kinked, d);

    // output_dir and workers stay out of defaults_applied: the echo is part
    // of the canonical report, which must not vary with volatile settings.
    if (doc.contains("output_dir")) {
        if (!doc.at("output_dir").is_string())
            throw ConfigError("config: output_dir must be a string");
        config.output_dir = doc.at("output_dir").get<std::string>();
    }

    if (doc.contains("workers")) {
        if (!doc.at("workers").is_number_integer() || doc.at("workers").get<long long>() < 1)
            throw ConfigError("config: workers must be an integer >= 1");
        config.workers = doc.at("workers").get<int>();
    }

    if (doc.contains("search_kind")) {
        if (!doc.at("search_kind").is_string())
            throw ConfigError("config: search_kind must be a string");
        const std::string kind = doc.at("search_kind").get<std::string>();
        if (kind != "stampacchia" && kind != "minty" && kind != "weak-stampacchia" &&
            kind != "weak-minty")
            throw ConfigError("config: unknown search_kind '" + kind + "'");
        config.search_kind = kind;
    } else {
        config.defaults_applied.push_back("search_kind=stampacchia");
    }

    std::sort(config.defaults_applied.begin(), config.defaults_applied.end());
    return config;
}

// ---------------------------------------------------------------------------
// Suite execution

namespace {

struct SuiteContext {
    const ExperimentConfig& config;
    const CatalogEntry& entry;
    std::uint64_t suite_seed(const char* label) const {
        return RandomStream(config.seed, "hvvi-run").child(label);
    }
    // Shared across suites so implication checks are sample-set consistent.
    std::vector<Point> probe_set() const {
        return catalog::sample_region(entry.region, config.budgets.q_samples,
                                      suite_seed("q-samples"));
    }
    std::vector<std::pair<Point, Point>> pair_set() const {
        return catalog::sample_region_pairs(entry.region, config.budgets.pairs,
                                            suite_seed("pairs"));
    }
    vvi::VviCheckOptions vvi_options() const {
        return vvi::VviCheckOptions{config.tolerances.margin_abs,
                                    config.tolerances.cone_zero_floor};
    }
    convexity::MarginCheckOptions margin_options() const {
        return convexity::MarginCheckOptions{config.tolerances.margin_abs,
                                             config.tolerances.strict_min};
    }
};

bool convex_label(ConvexityStatus status) {
    return status == ConvexityStatus::Convex || status == ConvexityStatus::StrictlyConvex;
}

SuiteResult run_geometry(const SuiteContext& ctx) {
    SuiteResult result;
    result.licensed = true;
    const std::size_t n = ctx.config.budgets.q_samples;
    const Tolerances& tol = ctx.config.tolerances;
    RandomStream stream(ctx.suite_seed("geometry"), "geometry");
    const std::vector<Point> points =
        catalog::sample_region(ctx.entry.region, 2 * n, ctx.suite_seed("geometry-points"));
    const std::size_t dim = ctx.entry.manifold.dim;

    result.rows.resize(n);
    parallel_for(n, ctx.config.workers, [&](std::size_t i) {
        const Point& p = points[2 * i];
        const Point& q = points[2 * i + 1];
        const double d = geom::distance(p, q);
        const Tangent lg = geom::log_map(p, q);

        const double roundtrip = geom::distance(geom::exp_map(p, lg), q);
        const double dist_agree = std::abs(geom::metric_norm(lg) - d);

        std::vector<double> gu(dim), gv(dim);
        for (std::size_t k = 0; k < dim; ++k) {
            gu[k] = stream.normal(i, k);
            gv[k] = stream.normal(i, dim + k);
        }
        Tangent u{p, std::move(gu)};
        Tangent v{p, std::move(gv)};
        const double nu = geom::metric_norm(u);
        const double nv = geom::metric_norm(v);
        if (nu > 0) u = geom::scale(u, 1.0 / nu);
        if (nv > 0) v = geom::scale(v, 1.0 / nv);
        const double before = geom::metric_inner(u, v);
        const double after = geom::metric_inner(geom::parallel_transport(u, p, q),
                                                geom::parallel_transport(v, p, q));
        const double drift = std::abs(after - before);

        const double s = 1e-3 + 0.998 * stream.uniform(i, 1000);
        const auto residuals = geom::split_residuals(geom::split_geodesic(p, q, s));
        const double split_worst = std::max({residuals[0], residuals[1], residuals[2]});

        const double margins[4] = {
            tol.geometry_rel * (1.0 + d) - roundtrip,
            tol.geometry_rel - dist_agree,
            tol.geometry_rel - drift,
            tol.geometry_eq - split_worst,
        };
        int worst = 0;
        for (int k = 1; k < 4; ++k)
            if (margins[k] < margins[worst]) worst = k;
        result.rows[i] = MarginRow{p.coords, q.coords, margins[worst], worst};
    });

    result.samples = n;
    result.worst_margin = std::numeric_limits<double>::infinity();
    for (const MarginRow& row : result.rows)
        result.worst_margin = std::min(result.worst_margin, row.margin);
    result.passed = result.worst_margin >= 0.0;
    result.verdict = result.passed ? "pass" : "fail";
    result.notes.push_back("identity components: 0=exp/log roundtrip, 1=distance vs |log|, "
                           "2=transport isometry, 3=splitting identities");
    return result;
}

SuiteResult run_convexificator(const SuiteContext& ctx) {
    SuiteResult result;
    result.licensed = true;  // catalog oracles must be valid convexificators
    // Point count scales as sqrt(q_samples): every (point, direction) pair
    // costs a full Dini ladder, so the square-root law keeps the suite at
    // the same order of work as the other q_samples-budgeted suites.
    const std::size_t n_points = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(
               std::sqrt(static_cast<double>(ctx.config.budgets.q_samples)))));
    const std::size_t n_dirs = ctx.config.budgets.directions;
    const std::size_t m = ctx.entry.F.size();
    RandomStream stream(ctx.suite_seed("convexificator"), "convexificator");
    // Oracles are validated around the distinguished candidate, where the
    // entry's analysis lives and Dini truncation stays well-conditioned.
    const catalog::Region oracle_region{ctx.entry.candidate, ctx.entry.region.radius};
    const std::vector<Point> points =
        catalog::sample_region(oracle_region, n_points, ctx.suite_seed("cvx-points"));

    nonsmooth::ConvexificatorCheckOptions opts;
    opts.tolerance = ctx.config.tolerances.convexificator;

    // margin_matrix[i][j]: worst margin at point i, direction j (over
    // components and upper/lower); encoded component in [0, 2m).
    std::vector<std::vector<double>> margin_matrix(n_points);
    std::vector<std::vector<int>> component_matrix(n_points);
    std::vector<char> point_ok(n_points, 1);  // plain bytes: slots are written concurrently

    parallel_for(n_points, ctx.config.workers, [&](std::size_t i) {
        const Point& p = points[i];
        const std::vector<Tangent> dirs =
            nonsmooth::sample_unit_directions(p, n_dirs, stream.bits(i, 7));
        std::vector<double>& margins = margin_matrix[i];
        std::vector<int>& comps = component_matrix[i];
        margins.assign(n_dirs, std::numeric_limits<double>::infinity());
        comps.assign(n_dirs, -1);
        for (std::size_t c = 0; c < m; ++c) {
            const nonsmooth::ScalarFunction& f = ctx.entry.F.components[c];
            const nonsmooth::Convexificator cvx = f.convexificator_oracle(p);
            const CheckReport upper = nonsmooth::upper_convexificator_check(f, p, cvx, dirs, opts);
            const CheckReport lower = nonsmooth::lower_convexificator_check(f, p, cvx, dirs, opts);
            point_ok[i] = point_ok[i] && upper.passed && lower.passed ? 1 : 0;
            for (std::size_t j = 0; j < n_dirs; ++j) {
                if (upper.sample_margins[j] < margins[j]) {
                    margins[j] = upper.sample_margins[j];
                    comps[j] = static_cast<int>(c);
                }
                if (lower.sample_margins[j] < margins[j]) {
                    margins[j] = lower.sample_margins[j];
                    comps[j] = static_cast<int>(m + c);
                }
            }
        }
    });

    result.rows.resize(n_dirs);
    for (std::size_t j = 0; j < n_dirs; ++j) {
        std::size_t worst_i = 0;
        for (std::size_t i = 1; i < n_points; ++i)
            if (margin_matrix[i][j] < margin_matrix[worst_i][j]) worst_i = i;
        const std::vector<Tangent> dirs =
            nonsmooth::sample_unit_directions(points[worst_i], n_dirs, stream.bits(worst_i, 7));
        result.rows[j] = MarginRow{points[worst_i].coords, dirs[j].coords,
                                   margin_matrix[worst_i][j], component_matrix[worst_i][j]};
    }

    result.samples = n_dirs;
    result.worst_margin = std::numeric_limits<double>::infinity();
    for (const MarginRow& row : result.rows)
        result.worst_margin = std::min(result.worst_margin, row.margin);
    bool all_ok = true;
    for (char ok : point_ok) all_ok = all_ok && ok != 0;
    result.passed = all_ok;
    result.verdict = result.passed ? "pass" : "fail";
    result.notes.push_back("component encoding: [0,m) upper check, [m,2m) lower check");
    return result;
}

SuiteResult run_mvt(const SuiteContext& ctx) {
    SuiteResult result;
    result.licensed = true;
    const auto pairs = ctx.pair_set();
    const double threshold =
        ctx.entry.kinked ? ctx.config.tolerances.mvt_kinked : ctx.config.tolerances.mvt_smooth;

    result.rows.resize(pairs.size());
    parallel_for(pairs.size(), ctx.config.workers, [&](std::size_t i) {
        const auto& [p, q] = pairs[i];
        if (p.coords == q.coords) {
            result.rows[i] = MarginRow{p.coords, q.coords, threshold, -1};
            return;
        }
        double worst_residual = 0.0;
        int worst_component = -1;
        for (std::size_t c = 0; c < ctx.entry.F.size(); ++c) {
            const nonsmooth::MvtWitness witness =
                nonsmooth::mvt_witness(ctx.entry.F.components[c], p, q, ctx.config.budgets.grid);
            if (witness.residual >= worst_residual) {
                worst_residual = witness.residual;
                worst_component = static_cast<int>(c);
            }
        }
        result.rows[i] = MarginRow{p.coords, q.coords, threshold - worst_residual, worst_component};
    });

    result.samples = pairs.size();
    result.worst_margin = std::numeric_limits<double>::infinity();
    for (const MarginRow& row : result.rows)
        result.worst_margin = std::min(result.worst_margin, row.margin);
    result.passed = result.worst_margin >= 0.0;
    result.verdict = result.passed ? "pass" : "fail";
    result.notes.push_back(std::string("residual threshold ") + format_double(threshold) +
                           (ctx.entry.kinked ? " (kinked entry)" : " (smooth entry)"));
    return result;
}

void rows_from_report(const CheckReport& report, const std::vector<double>& candidate_coords,
                      const std::vector<std::vector<double>>& sample_coords, SuiteResult& result) {
    result.rows.resize(report.sample_margins.size());
    for (std::size_t i = 0; i < report.sample_margins.size(); ++i) {
        result.rows[i] =
            MarginRow{candidate_coords, sample_coords[i], report.sample_margins[i],
                      report.sample_components.empty() ? -1 : report.sample_components[i]};
    }
    result.samples = report.sample_margins.size();
    result.worst_margin = report.worst_margin;
}

SuiteResult run_convexity(const SuiteContext& ctx) {
    SuiteResult result;
    const std::vector<Point> probes = ctx.probe_set();
    const CheckReport plain = convexity::convexity_check(ctx.entry.F, ctx.entry.candidate, probes,
                                                         false, ctx.margin_options());
    std::vector<std::vector<double>> coords;
    coords.reserve(probes.size());
    for (const Point& p : probes) coords.push_back(p.coords);
    rows_from_report(plain, ctx.entry.candidate.coords, coords, result);

    const ConvexityStatus label = ctx.entry.status;
    result.licensed = label != ConvexityStatus::Unknown;
    result.verdict = plain.passed ? "pass" : "fail";
    bool assertion = true;
    if (label == ConvexityStatus::Nonconvex) {
        assertion = !plain.passed;
        result.notes.push_back("catalog label nonconvex: check must produce a counterexample");
    } else if (convex_label(label)) {
        assertion = plain.passed;
        if (label == ConvexityStatus::StrictlyConvex) {
            const CheckReport strict = convexity::convexity_check(
                ctx.entry.F, ctx.entry.candidate, probes, true, ctx.margin_options());
            assertion = assertion && strict.passed;
            result.notes.push_back(std::string("strict variant: ") +
                                   (strict.passed ? "pass" : "fail"));
        }
    } else {
        result.notes.push_back("catalog label unknown: informational only");
    }
    result.passed = result.licensed ? assertion : true;
    result.notes.push_back(plain.passed
                               ? "no counterexample found at budget " + std::to_string(probes.size())
                               : "counterexample at sample " + std::to_string(plain.worst_index));
    return result;
}

SuiteResult run_monotonicity(const SuiteContext& ctx) {
    SuiteResult result;
    const auto pairs = ctx.pair_set();
    const CheckReport plain =
        convexity::monotonicity_check(ctx.entry.F, pairs, false, ctx.margin_options());
    std::vector<std::vector<double>> coords;
    coords.reserve(pairs.size());
    for (const auto& pr : pairs) coords.push_back(pr.second.coords);
    std::vector<std::vector<double>> first;  // candidate column carries p
    first.reserve(pairs.size());
    for (const auto& pr : pairs) first.push_back(pr.first.coords);
    result.rows.resize(plain.sample_margins.size());
    for (std::size_t i = 0; i < plain.sample_margins.size(); ++i)
        result.rows[i] = MarginRow{first[i], coords[i], plain.sample_margins[i],
                                   plain.sample_components[i]};
    result.samples = plain.sample_margins.size();
    result.worst_margin = plain.worst_margin;

    const ConvexityStatus label = ctx.entry.status;
    result.licensed = label != ConvexityStatus::Unknown;
    result.verdict = plain.passed ? "pass" : "fail";
    bool assertion = true;
    if (label == ConvexityStatus::Nonconvex) {
        assertion = !plain.passed;
    } else if (convex_label(label)) {
        assertion = plain.passed;
        if (label == ConvexityStatus::StrictlyConvex) {
            const CheckReport strict =
                convexity::monotonicity_check(ctx.entry.F, pairs, true, ctx.margin_options());
            assertion = assertion && strict.passed;
            result.notes.push_back(std::string("strict variant: ") +
                                   (strict.passed ? "pass" : "fail"));
        }
    }
    result.passed = result.licensed ? assertion : true;
    return result;
}

SuiteResult run_secant(const SuiteContext& ctx) {
    SuiteResult result;
    const auto pairs = ctx.pair_set();
    std::vector<double> mu_grid(21);
    for (int i = 0; i <= 20; ++i) mu_grid[i] = static_cast<double>(i) / 20.0;

    convexity::SecantCheckOptions opts;
    opts.tolerance = ctx.entry.manifold.kind == geom::ManifoldKind::PoincareHalfPlane
                         ? ctx.config.tolerances.secant_halfplane
                         : ctx.config.tolerances.secant_euclidean;
    opts.endpoint_tolerance = ctx.config.tolerances.endpoint_eq;

    const CheckReport report = convexity::secant_check(ctx.entry.F, pairs, mu_grid, opts);
    result.rows.resize(report.sample_margins.size());
    for (std::size_t i = 0; i < report.sample_margins.size(); ++i)
        result.rows[i] = MarginRow{pairs[i].first.coords, pairs[i].second.coords,
                                   report.sample_margins[i], report.sample_components[i]};
    result.samples = report.sample_margins.size();
    result.worst_margin = report.worst_margin;

    result.licensed = convex_label(ctx.entry.status);
    result.verdict = report.passed ? "pass" : "fail";
    result.passed = result.licensed ? report.passed : true;
    result.notes.push_back("mu grid: 21 uniform points in [0,1], endpoint equality enforced");
    return result;
}

SuiteResult run_vvi_suite(const SuiteContext& ctx, vvi::VviKind kind) {
    SuiteResult result;
    result.licensed = false;  // informational: no ground truth for general entries
    const std::vector<Point> probes = ctx.probe_set();
    const vvi::VviVerdict verdict =
        vvi::vvi_check(kind, ctx.entry.F, ctx.entry.candidate, probes, ctx.vvi_options());

    result.rows.resize(verdict.sample_margins.size());
    for (std::size_t i = 0; i < verdict.sample_margins.size(); ++i)
        result.rows[i] = MarginRow{ctx.entry.candidate.coords, probes[i].coords,
                                   verdict.sample_margins[i], verdict.sample_components[i]};
    result.samples = verdict.sample_margins.size();
    result.worst_margin = verdict.worst_margin;
    result.passed = true;
    result.verdict = verdict.passed() ? "pass" : "fail";
    result.notes.push_back(verdict.passed()
                               ? "no counterexample found at budget " + std::to_string(probes.size())
                               : "worst q: " + format_coords(verdict.worst_q.coords));
    if (verdict.witness_xi) {
        std::string tuple = "witness tuple at worst q:";
        for (const Tangent& t : *verdict.witness_xi) tuple += " (" + format_coords(t.coords) + ")";
        result.notes.push_back(tuple);
    }
    return result;
}

SuiteResult run_efficiency(const SuiteContext& ctx) {
    SuiteResult result;
    result.licensed = false;
    const std::vector<Point> probes = ctx.probe_set();
    const vvi::EfficiencyVerdict strong = vvi::efficiency_check(
        ctx.entry.F, ctx.entry.candidate, probes, false, ctx.vvi_options());
    const vvi::EfficiencyVerdict weak = vvi::efficiency_check(
        ctx.entry.F, ctx.entry.candidate, probes, true, ctx.vvi_options());

    result.rows.resize(strong.sample_margins.size());
    for (std::size_t i = 0; i < strong.sample_margins.size(); ++i)
        result.rows[i] = MarginRow{ctx.entry.candidate.coords, probes[i].coords,
                                   strong.sample_margins[i], strong.sample_components[i]};
    result.samples = strong.sample_margins.size();
    result.worst_margin = strong.worst_margin;
    result.passed = true;
    result.verdict = strong.passed() ? "pass" : "fail";
    if (strong.dominating_q)
        result.notes.push_back("dominated by q=" + format_coords(strong.dominating_q->coords));
    result.notes.push_back(std::string("weak efficiency: ") + (weak.passed() ? "pass" : "fail"));
    return result;
}

SuiteResult run_relations(const SuiteContext& ctx) {
    SuiteResult result;
    result.licensed = true;
    const std::vector<Point> probes = ctx.probe_set();
    const std::vector<Point> candidates =
        catalog::candidate_grid(ctx.entry.region, ctx.config.budgets.candidates);
    const vvi::RelationReport report =
        vvi::relation_suite(ctx.entry.F, candidates, probes, ctx.vvi_options(),
                            ctx.margin_options(), ctx.config.workers);

    result.rows.resize(report.rows.size());
    for (std::size_t i = 0; i < report.rows.size(); ++i)
        result.rows[i] = MarginRow{report.rows[i].candidate.coords, {},
                                   report.summary.sample_margins[i],
                                   report.rows[i].violated_implication};
    result.samples = report.rows.size();
    result.worst_margin = std::numeric_limits<double>::infinity();
    for (double m : report.summary.sample_margins)
        result.worst_margin = std::min(result.worst_margin, m);
    result.passed = report.summary.passed;
    // Without established convexity only the cone inclusions were asserted;
    // the theorem implications are reported as not applicable.
    result.verdict = !report.summary.passed ? "fail"
                     : report.convex_established ? "pass"
                                                 : "not-applicable";
    result.notes.push_back(std::string("convexity established at all candidates: ") +
                           (report.convex_established ? "yes" : "no (theorem implications "
                                                                "not applicable)"));
    result.notes.push_back(std::string("strict convexity established: ") +
                           (report.strict_established ? "yes" : "no"));
    for (const CounterexampleRow& failure : report.summary.failures)
        result.notes.push_back("violation: " + failure.note + " at candidate (" +
                               format_coords(failure.primary) + ")");
    return result;
}

SuiteResult run_search(const SuiteContext& ctx) {
    SuiteResult result;
    result.licensed = false;
    const std::vector<Point> probes = ctx.probe_set();
    const std::vector<Point> candidates =
        catalog::candidate_grid(ctx.entry.region, ctx.config.budgets.candidates);

    vvi::VviKind kind = vvi::VviKind::Stampacchia;
    if (ctx.config.search_kind == "minty") kind = vvi::VviKind::Minty;
    if (ctx.config.search_kind == "weak-stampacchia") kind = vvi::VviKind::WeakStampacchia;
    if (ctx.config.search_kind == "weak-minty") kind = vvi::VviKind::WeakMinty;

    std::vector<double> margins(candidates.size());
    parallel_for(candidates.size(), ctx.config.workers, [&](std::size_t i) {
        vvi::VviVerdict v = vvi::vvi_check(kind, ctx.entry.F, candidates[i], probes,
                                           ctx.vvi_options());
        margins[i] = v.worst_margin;
    });

    result.rows.resize(candidates.size());
    std::size_t passing = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        result.rows[i] = MarginRow{candidates[i].coords, {}, margins[i], -1};
        if (margins[i] >= -ctx.config.tolerances.margin_abs) ++passing;
    }
    result.samples = candidates.size();
    result.worst_margin = *std::min_element(margins.begin(), margins.end());
    result.passed = true;
    result.verdict = passing > 0 ? "pass" : "fail";

    std::vector<std::size_t> order(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return margins[a] > margins[b]; });
    result.notes.push_back(to_string(kind) + ": " + std::to_string(passing) + "/" +
                           std::to_string(candidates.size()) + " candidates pass");
    for (std::size_t r = 0; r < std::min<std::size_t>(5, order.size()); ++r)
        result.notes.push_back("top " + std::to_string(r + 1) + ": (" +
                               format_coords(candidates[order[r]].coords) +
                               ") margin=" + format_double(margins[order[r]]));
    return result;
}

} // namespace

bool RunReport::any_licensed_failure() const {
    for (const SuiteResult& suite : suites)
        if (suite.licensed && !suite.passed) return true;
    return false;
}

RunReport run(const ExperimentConfig& config) {
    const CatalogEntry& entry = catalog::catalog_lookup(config.catalog_id);
    SuiteContext ctx{config, entry};

    RunReport report;
    report.config = config;
    report.catalog_id = entry.id;

    int order = 0;
    for (Suite suite : config.suites) {
        const auto start = std::chrono::steady_clock::now();
        SuiteResult result;
        switch (suite) {
            case Suite::Geometry: result = run_geometry(ctx); break;
            case Suite::Convexificator: result = run_convexificator(ctx); break;
            case Suite::Mvt: result = run_mvt(ctx); break;
            case Suite::Convexity: result = run_convexity(ctx); break;
            case Suite::Monotonicity: result = run_monotonicity(ctx); break;
            case Suite::Secant: result = run_secant(ctx); break;
            case Suite::Stampacchia: result = run_vvi_suite(ctx, vvi::VviKind::Stampacchia); break;
            case Suite::Minty: result = run_vvi_suite(ctx, vvi::VviKind::Minty); break;
            case Suite::WeakStampacchia:
                result = run_vvi_suite(ctx, vvi::VviKind::WeakStampacchia);
                break;
            case Suite::WeakMinty: result = run_vvi_suite(ctx, vvi::VviKind::WeakMinty); break;
            case Suite::Efficiency: result = run_efficiency(ctx); break;
            case Suite::Relations: result = run_relations(ctx); break;
            case Suite::Search: result = run_search(ctx); break;
        }
        result.suite = suite;
        result.order = order++;
        result.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        report.suites.push_back(std::move(result));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Serialization

std::string report_json(const RunReport& report) {
    JsonObject budgets;
    budgets["candidates"] = report.config.budgets.candidates;
    budgets["directions"] = report.config.budgets.directions;
    budgets["grid"] = report.config.budgets.grid;
    budgets["pairs"] = report.config.budgets.pairs;
    budgets["q_samples"] = report.config.budgets.q_samples;

    const Tolerances& t = report.config.tolerances;
    JsonObject tolerances;
    tolerances["cone_zero_floor"] = t.cone_zero_floor;
    tolerances["convexificator"] = t.convexificator;
    tolerances["endpoint_eq"] = t.endpoint_eq;
    tolerances["geometry_eq"] = t.geometry_eq;
    tolerances["geometry_rel"] = t.geometry_rel;
    tolerances["margin_abs"] = t.margin_abs;
    tolerances["mvt_kinked"] = t.mvt_kinked;
    tolerances["mvt_smooth"] = t.mvt_smooth;
    tolerances["secant_euclidean"] = t.secant_euclidean;
    tolerances["secant_halfplane"] = t.secant_halfplane;
    tolerances["strict_min"] = t.strict_min;

    JsonArray suite_list;
    for (Suite s : report.config.suites) suite_list.emplace_back(to_string(s));
    JsonArray defaults;
    for (const std::string& d : report.config.defaults_applied) defaults.emplace_back(d);

    JsonObject config;
    config["budgets"] = JsonObject(budgets);
    config["catalog_id"] = report.config.catalog_id;
    config["defaults_applied"] = JsonArray(defaults);
    config["search_kind"] = report.config.search_kind;
    config["seed"] = report.config.seed;
    config["suites"] = JsonArray(suite_list);
    config["tolerances"] = JsonObject(tolerances);

    const CatalogEntry& entry = catalog::catalog_lookup(report.catalog_id);
    JsonObject entry_obj;
    entry_obj["candidate"] = Json::coords(entry.candidate.coords);
    entry_obj["convexity_status"] = catalog::to_string(entry.status);
    entry_obj["id"] = entry.id;
    entry_obj["kinked"] = entry.kinked;
    entry_obj["manifold"] = manifold_name(entry.manifold);
    JsonObject region;
    region["center"] = Json::coords(entry.region.center.coords);
    region["radius"] = entry.region.radius;
    entry_obj["region"] = JsonObject(region);

    JsonObject suites;
    for (const SuiteResult& s : report.suites) {
        JsonObject obj;
        obj["licensed"] = s.licensed;
        obj["order"] = s.order;
        obj["passed"] = s.passed;
        obj["samples"] = s.samples;
        obj["verdict"] = s.verdict;
        obj["worst_margin"] = s.worst_margin;
        JsonArray notes;
        for (const std::string& n : s.notes) notes.emplace_back(n);
        obj["notes"] = JsonArray(notes);
        suites[to_string(s.suite)] = JsonObject(obj);
    }

    JsonObject root;
    root["config"] = JsonObject(config);
    root["entry"] = JsonObject(entry_obj);
    root["suites"] = JsonObject(suites);
    root["version"] = report.version;

    std::string out;
    Json(root).write(out);
    out += '\n';
    return out;
}

std::string margins_csv(const RunReport& report) {
    std::string out = "suite,candidate_coords,sample_coords,margin,component\n";
    for (const SuiteResult& suite : report.suites) {
        const std::string name = to_string(suite.suite);
        for (const MarginRow& row : suite.rows) {
            out += name;
            out += ',';
            out += format_coords(row.candidate);
            out += ',';
            out += format_coords(row.sample);
            out += ',';
            out += format_double(row.margin);
            out += ',';
            out += std::to_string(row.component);
            out += '\n';
        }
    }
    return out;
}

std::string timings_json(const RunReport& report) {
    JsonObject suites;
    for (const SuiteResult& s : report.suites) suites[to_string(s.suite)] = s.wall_seconds;
    JsonObject root;
    root["suites"] = JsonObject(suites);
    root["workers"] = static_cast<std::uint64_t>(report.config.workers);
    std::string out;
    Json(root).write(out);
    out += '\n';
    return out;
}

int write_outputs(const RunReport& report, const std::string& output_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(output_dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory '" + output_dir +
                                 "': " + ec.message());
    const auto write_file = [&](const char* name, const std::string& content) {
        const fs::path path = fs::path(output_dir) / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
        out << content;
        if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
    };
    write_file("report.json", report_json(report));
    write_file("margins.csv", margins_csv(report));
    write_file("timings.json", timings_json(report));
    return report.any_licensed_failure() ? 1 : 0;
}

} // namespace hvvi::runner

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hvvi/check_report.hpp"
#include "hvvi/convexity.hpp"

namespace hvvi::vvi {

using convexity::PairingVector;
using convexity::VectorFunction;
using geom::Point;
using geom::Tangent;

/// Orthant cones that pairing vectors must avoid. "Punctured" variants
/// exclude the origin; "interior" variants are the open orthants.
enum class Cone {
    NegOrthantMinusZero,
    PosOrthantMinusZero,
    NegInterior,
    PosInterior,
};

/// Signed distance-like margin: positive iff v is outside the bad cone.
/// Punctured cones use `zero_floor` on ||v||_inf to classify "the zero
/// vector", which is outside by convention.
double cone_margin(const PairingVector& v, Cone cone, double zero_floor = 1e-10);

/// Margin bundled with the cone it was measured against. margin > 0 means
/// the tested vector is outside the bad cone by that amount; margin <= 0
/// means inside or on the tolerance boundary.
struct ConeMembership {
    Cone cone = Cone::NegOrthantMinusZero;
    double margin = 0.0;

    bool outside(double tolerance = 0.0) const { return margin >= -tolerance; }
};

ConeMembership classify_cone(const PairingVector& v, Cone cone, double zero_floor = 1e-10);

enum class VviKind { Stampacchia, Minty, WeakStampacchia, WeakMinty };

std::string to_string(VviKind kind);

struct VviCheckOptions {
    double tolerance = 1e-8;
    double zero_floor = 1e-10;
};

/// Sampled verdict for one candidate. Passes iff worst_margin >= -tolerance.
struct VviVerdict {
    Point candidate;
    VviKind kind = VviKind::Stampacchia;
    double worst_margin = 0.0;
    Point worst_q;
    std::size_t worst_index = 0;
    std::optional<std::vector<Tangent>> witness_xi;  ///< best tuple at the worst q
    std::vector<double> sample_margins;
    std::vector<int> sample_components;  ///< pivotal objective per sample (-1 near zero)
    double tolerance = 1e-8;

    bool passed() const { return worst_margin >= -tolerance; }
};

/// Stampacchia side: existential over generator tuples at the candidate.
/// Per-q margin = max over tuples of cone_margin(<ξ, log_cand q>, -R^m_+ \ 0).
VviVerdict stampacchia_check(const VectorFunction& F, const Point& candidate,
                             std::span<const Point> q_samples, const VviCheckOptions& opts = {});

/// Minty side: universal over generator tuples at each q.
/// Per-q margin = min over tuples of cone_margin(<ξ(q), log_q cand>, R^m_+ \ 0).
VviVerdict minty_check(const VectorFunction& F, const Point& candidate,
                       std::span<const Point> q_samples, const VviCheckOptions& opts = {});

/// Weak variants replace the punctured orthants by their interiors.
VviVerdict weak_stampacchia_check(const VectorFunction& F, const Point& candidate,
                                  std::span<const Point> q_samples, const VviCheckOptions& opts = {});
VviVerdict weak_minty_check(const VectorFunction& F, const Point& candidate,
                            std::span<const Point> q_samples, const VviCheckOptions& opts = {});

VviVerdict vvi_check(VviKind kind, const VectorFunction& F, const Point& candidate,
                     std::span<const Point> q_samples, const VviCheckOptions& opts = {});

/// Sampled Pareto test: passes iff no sampled q has F(q) - F(candidate) in
/// the punctured negative orthant (weak: the open negative orthant).
struct EfficiencyVerdict {
    Point candidate;
    bool weak = false;
    std::optional<Point> dominating_q;
    std::size_t dominating_index = 0;
    double worst_margin = 0.0;
    std::vector<double> sample_margins;
    std::vector<int> sample_components;

    bool passed() const { return !dominating_q.has_value(); }
};

EfficiencyVerdict efficiency_check(const VectorFunction& F, const Point& candidate,
                                   std::span<const Point> q_samples, bool weak,
                                   const VviCheckOptions& opts = {});

/// Evaluate one VVI check at every candidate; verdicts sorted by descending
/// margin (stable on the original candidate order).
std::vector<VviVerdict> vvi_search(const VectorFunction& F, std::span<const Point> candidates,
                                   std::span<const Point> q_samples, VviKind kind,
                                   const VviCheckOptions& opts = {});

/// Per-candidate cross-tabulation of the four VVI checks plus efficiency and
/// weak efficiency, with the implications the classical theory licenses.
struct RelationRow {
    Point candidate;
    bool stampacchia = false;
    bool minty = false;
    bool weak_stampacchia = false;
    bool weak_minty = false;
    bool efficient = false;
    bool weakly_efficient = false;
    bool convex_at = false;   ///< convexity inequality holds at this base
    bool strict_at = false;
    double worst_margin = 0.0;      ///< min margin over the six checks
    int violated_implication = -1;  ///< index into RelationReport::implication_names
};

struct RelationReport {
    std::vector<RelationRow> rows;
    bool convex_established = false;   ///< convexity held at every candidate base
    bool strict_established = false;
    std::vector<std::string> implication_names;
    CheckReport summary;               ///< failures = implication violations
};

/// Cone-inclusion implications (strong => weak, efficient => weakly
/// efficient) are asserted unconditionally; the Stampacchia/Minty/efficiency
/// equivalences only once the in-suite convexity check establishes (strict)
/// convexity at every candidate base against the shared q set. Candidates are
/// evaluated independently (optionally across workers); results do not depend
/// on the worker count.
RelationReport relation_suite(const VectorFunction& F, std::span<const Point> candidates,
                              std::span<const Point> q_samples,
                              const VviCheckOptions& opts = {},
                              const convexity::MarginCheckOptions& convexity_opts = {},
                              int workers = 1);

} // namespace hvvi::vvi

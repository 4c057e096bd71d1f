#include "hvvi/vvi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hvvi/errors.hpp"
#include "hvvi/parallel.hpp"

namespace hvvi::vvi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double linf(const PairingVector& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double max_component(const PairingVector& v) {
    double m = -kInf;
    for (double x : v) m = std::max(m, x);
    return m;
}

double min_component(const PairingVector& v) {
    double m = kInf;
    for (double x : v) m = std::min(m, x);
    return m;
}

/// Cross product of generator indices, same scheme as the convexity module.
class TupleIterator {
public:
    explicit TupleIterator(const std::vector<convexity::Convexificator>& sets)
        : sets_(sets), index_(sets.size(), 0) {}

    const Tangent& generator(std::size_t component) const {
        return sets_[component].generators[index_[component]];
    }

    std::vector<Tangent> tuple() const {
        std::vector<Tangent> t;
        t.reserve(index_.size());
        for (std::size_t i = 0; i < index_.size(); ++i) t.push_back(generator(i));
        return t;
    }

    bool advance() {
        for (std::size_t i = 0; i < index_.size(); ++i) {
            if (++index_[i] < sets_[i].generators.size()) return true;
            index_[i] = 0;
        }
        return false;
    }

private:
    const std::vector<convexity::Convexificator>& sets_;
    std::vector<std::size_t> index_;
};

} // namespace

namespace {

double cone_margin_impl(const PairingVector& v, Cone cone, double zero_floor, int* component) {
    for (double x : v)
        if (!std::isfinite(x)) throw ContractViolation("cone_margin: non-finite component");
    if (component) *component = -1;
    const auto argmax = [&] {
        std::size_t a = 0;
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i] > v[a]) a = i;
        return a;
    };
    const auto argmin = [&] {
        std::size_t a = 0;
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i] < v[a]) a = i;
        return a;
    };
    switch (cone) {
        case Cone::NegOrthantMinusZero:
            if (linf(v) <= zero_floor) return zero_floor;  // zero vector is outside
            if (component) *component = static_cast<int>(argmax());
            return max_component(v);
        case Cone::PosOrthantMinusZero:
            if (linf(v) <= zero_floor) return zero_floor;
            if (component) *component = static_cast<int>(argmin());
            return -min_component(v);
        case Cone::NegInterior:
            if (component) *component = static_cast<int>(argmax());
            return max_component(v);  // inside iff all components < 0
        case Cone::PosInterior:
            if (component) *component = static_cast<int>(argmin());
            return -min_component(v);
    }
    throw ContractViolation("cone_margin: unknown cone");
}

} // namespace

double cone_margin(const PairingVector& v, Cone cone, double zero_floor) {
    return cone_margin_impl(v, cone, zero_floor, nullptr);
}

ConeMembership classify_cone(const PairingVector& v, Cone cone, double zero_floor) {
    return ConeMembership{cone, cone_margin_impl(v, cone, zero_floor, nullptr)};
}

std::string to_string(VviKind kind) {
    switch (kind) {
        case VviKind::Stampacchia: return "stampacchia";
        case VviKind::Minty: return "minty";
        case VviKind::WeakStampacchia: return "weak-stampacchia";
        case VviKind::WeakMinty: return "weak-minty";
    }
    return "?";
}

namespace {

bool stampacchia_side(VviKind kind) {
    return kind == VviKind::Stampacchia || kind == VviKind::WeakStampacchia;
}

Cone cone_for(VviKind kind) {
    switch (kind) {
        case VviKind::Stampacchia: return Cone::NegOrthantMinusZero;
        case VviKind::Minty: return Cone::PosOrthantMinusZero;
        case VviKind::WeakStampacchia: return Cone::NegInterior;
        case VviKind::WeakMinty: return Cone::PosInterior;
    }
    throw ContractViolation("cone_for: unknown kind");
}

/// Stampacchia side pairs candidate-based tuples against log_cand(q); the
/// Minty side pairs q-based tuples against log_q(cand).
struct QMargin {
    double margin;
    int component = -1;
    std::vector<Tangent> best_tuple;
};

QMargin per_sample_margin(VviKind kind, const VectorFunction& F,
                          const std::vector<convexity::Convexificator>& candidate_sets,
                          const Point& candidate, const Point& q, const VviCheckOptions& opts,
                          bool want_tuple) {
    const bool existential = stampacchia_side(kind);
    const Cone cone = cone_for(kind);

    const std::vector<convexity::Convexificator>* sets = &candidate_sets;
    std::vector<convexity::Convexificator> q_sets;
    Tangent direction = existential ? geom::log_map(candidate, q) : geom::log_map(q, candidate);
    if (!existential) {
        q_sets = F.convexificators(q);
        sets = &q_sets;
    }

    PairingVector pv(F.size());
    QMargin out{existential ? -kInf : kInf, -1, {}};
    TupleIterator tuples(*sets);
    do {
        for (std::size_t i = 0; i < F.size(); ++i)
            pv[i] = geom::metric_inner(tuples.generator(i), direction);
        int component = -1;
        const double m = cone_margin_impl(pv, cone, opts.zero_floor, &component);
        if (existential ? m > out.margin : m < out.margin) {
            out.margin = m;
            out.component = component;
            if (want_tuple) out.best_tuple = tuples.tuple();
        }
    } while (tuples.advance());
    return out;
}

} // namespace

VviVerdict vvi_check(VviKind kind, const VectorFunction& F, const Point& candidate,
                     std::span<const Point> q_samples, const VviCheckOptions& opts) {
    VviVerdict verdict;
    verdict.candidate = candidate;
    verdict.kind = kind;
    verdict.tolerance = opts.tolerance;
    verdict.worst_margin = kInf;
    verdict.sample_margins.reserve(q_samples.size());

    const std::vector<convexity::Convexificator> candidate_sets =
        stampacchia_side(kind) ? F.convexificators(candidate)
                               : std::vector<convexity::Convexificator>{};

    for (std::size_t k = 0; k < q_samples.size(); ++k) {
        const QMargin qm =
            per_sample_margin(kind, F, candidate_sets, candidate, q_samples[k], opts, false);
        verdict.sample_margins.push_back(qm.margin);
        verdict.sample_components.push_back(qm.component);
        if (qm.margin < verdict.worst_margin) {
            verdict.worst_margin = qm.margin;
            verdict.worst_q = q_samples[k];
            verdict.worst_index = k;
        }
    }
    if (!q_samples.empty()) {
        // Re-derive the witnessing tuple for the worst q only.
        const QMargin qm = per_sample_margin(kind, F, candidate_sets, candidate,
                                             verdict.worst_q, opts, true);
        verdict.witness_xi = qm.best_tuple;
    }
    return verdict;
}

VviVerdict stampacchia_check(const VectorFunction& F, const Point& candidate,
                             std::span<const Point> q_samples, const VviCheckOptions& opts) {
    return vvi_check(VviKind::Stampacchia, F, candidate, q_samples, opts);
}

VviVerdict minty_check(const VectorFunction& F, const Point& candidate,
                       std::span<const Point> q_samples, const VviCheckOptions& opts) {
    return vvi_check(VviKind::Minty, F, candidate, q_samples, opts);
}

VviVerdict weak_stampacchia_check(const VectorFunction& F, const Point& candidate,
                                  std::span<const Point> q_samples, const VviCheckOptions& opts) {
    return vvi_check(VviKind::WeakStampacchia, F, candidate, q_samples, opts);
}

VviVerdict weak_minty_check(const VectorFunction& F, const Point& candidate,
                            std::span<const Point> q_samples, const VviCheckOptions& opts) {
    return vvi_check(VviKind::WeakMinty, F, candidate, q_samples, opts);
}

EfficiencyVerdict efficiency_check(const VectorFunction& F, const Point& candidate,
                                   std::span<const Point> q_samples, bool weak,
                                   const VviCheckOptions& opts) {
    EfficiencyVerdict verdict;
    verdict.candidate = candidate;
    verdict.weak = weak;
    verdict.worst_margin = kInf;
    verdict.sample_margins.reserve(q_samples.size());

    const Cone cone = weak ? Cone::NegInterior : Cone::NegOrthantMinusZero;
    const std::vector<double> f_candidate = F.values(candidate);
    PairingVector diff(F.size());

    for (std::size_t k = 0; k < q_samples.size(); ++k) {
        const std::vector<double> f_q = F.values(q_samples[k]);
        for (std::size_t i = 0; i < F.size(); ++i) diff[i] = f_q[i] - f_candidate[i];
        int component = -1;
        const double m = cone_margin_impl(diff, cone, opts.zero_floor, &component);
        verdict.sample_margins.push_back(m);
        verdict.sample_components.push_back(component);
        if (m < verdict.worst_margin) verdict.worst_margin = m;
        if (m < -opts.tolerance && !verdict.dominating_q) {
            verdict.dominating_q = q_samples[k];
            verdict.dominating_index = k;
        }
    }
    return verdict;
}

std::vector<VviVerdict> vvi_search(const VectorFunction& F, std::span<const Point> candidates,
                                   std::span<const Point> q_samples, VviKind kind,
                                   const VviCheckOptions& opts) {
    if (candidates.empty()) throw ContractViolation("vvi_search: empty candidate grid");
    std::vector<VviVerdict> verdicts;
    verdicts.reserve(candidates.size());
    for (const Point& c : candidates) {
        VviVerdict v = vvi_check(kind, F, c, q_samples, opts);
        v.sample_margins.clear();  // keep search results light
        verdicts.push_back(std::move(v));
    }
    std::stable_sort(verdicts.begin(), verdicts.end(),
                     [](const VviVerdict& a, const VviVerdict& b) {
                         return a.worst_margin > b.worst_margin;
                     });
    return verdicts;
}

namespace {

/// Pairings of every generator of every component against one direction.
std::vector<std::vector<double>> generator_pairings(
    const std::vector<convexity::Convexificator>& sets, const Tangent& direction) {
    std::vector<std::vector<double>> out(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) {
        out[i].reserve(sets[i].generators.size());
        for (const Tangent& g : sets[i].generators)
            out[i].push_back(geom::metric_inner(g, direction));
    }
    return out;
}

/// Enumerate generator tuples over cached pairings and fold the two cone
/// margins (punctured orthant and its interior share the same max/min form,
/// differing only in the zero floor).
struct TupleConeMargins {
    double punctured;
    double interior;
};

TupleConeMargins fold_cones(const std::vector<std::vector<double>>& pairings, bool positive,
                            bool existential, double zero_floor) {
    std::vector<std::size_t> index(pairings.size(), 0);
    PairingVector pv(pairings.size());
    TupleConeMargins out{existential ? -kInf : kInf, existential ? -kInf : kInf};
    for (;;) {
        for (std::size_t i = 0; i < pv.size(); ++i) pv[i] = pairings[i][index[i]];
        const double interior =
            positive ? -min_component(pv) : max_component(pv);
        const double punctured = linf(pv) <= zero_floor ? zero_floor : interior;
        if (existential) {
            out.punctured = std::max(out.punctured, punctured);
            out.interior = std::max(out.interior, interior);
        } else {
            out.punctured = std::min(out.punctured, punctured);
            out.interior = std::min(out.interior, interior);
        }
        std::size_t i = 0;
        for (; i < index.size(); ++i) {
            if (++index[i] < pairings[i].size()) break;
            index[i] = 0;
        }
        if (i == index.size()) return out;
    }
}

/// One fused pass computing everything a relation row needs: the four VVI
/// margins, both efficiency margins, and the convexity margins at this base,
/// all against the shared samples augmented with geodesic quarter-points
/// toward them. The quarter-points matter because the Minty-type violations
/// implied by a dominating sample live on the open segment toward it, not at
/// the sample itself; one common set keeps every check sample-consistent.
RelationRow relation_row(const VectorFunction& F, const Point& candidate,
                         std::span<const Point> q_samples, const VviCheckOptions& opts,
                         const convexity::MarginCheckOptions& convexity_opts) {
    RelationRow row;
    row.candidate = candidate;

    const std::vector<convexity::Convexificator> candidate_sets = F.convexificators(candidate);
    const std::vector<double> f_candidate = F.values(candidate);
    const std::size_t m = F.size();

    double s_margin = kInf, ws_margin = kInf, m_margin = kInf, wm_margin = kInf;
    double eff_margin = kInf, weff_margin = kInf;
    double conv_margin = kInf, conv_strict = kInf;

    PairingVector diff(m);
    const auto visit = [&](const Point& q) {
        const Tangent to_q = geom::log_map(candidate, q);
        const Tangent to_candidate = geom::log_map(q, candidate);

        // Candidate-side pairings feed the Stampacchia margins and the
        // convexity inequality.
        const auto c_pairings = generator_pairings(candidate_sets, to_q);
        const TupleConeMargins s =
            fold_cones(c_pairings, /*positive=*/false, /*existential=*/true, opts.zero_floor);
        s_margin = std::min(s_margin, s.punctured);
        ws_margin = std::min(ws_margin, s.interior);

        const std::vector<double> f_q = F.values(q);
        for (std::size_t i = 0; i < m; ++i) {
            diff[i] = f_q[i] - f_candidate[i];
            for (double pairing : c_pairings[i]) {
                const double margin = diff[i] - pairing;
                conv_margin = std::min(conv_margin, margin);
                if (q.coords != candidate.coords) conv_strict = std::min(conv_strict, margin);
            }
        }
        eff_margin = std::min(eff_margin, cone_margin(diff, Cone::NegOrthantMinusZero,
                                                       opts.zero_floor));
        weff_margin = std::min(weff_margin, cone_margin(diff, Cone::NegInterior, opts.zero_floor));

        // Sample-side pairings feed the Minty margins (universal over tuples).
        const auto q_pairings = generator_pairings(F.convexificators(q), to_candidate);
        const TupleConeMargins mm =
            fold_cones(q_pairings, /*positive=*/true, /*existential=*/false, opts.zero_floor);
        m_margin = std::min(m_margin, mm.punctured);
        wm_margin = std::min(wm_margin, mm.interior);
    };

    for (const Point& q : q_samples) {
        visit(q);
        visit(geom::exp_map(candidate, geom::scale(geom::log_map(candidate, q), 0.25)));
    }

    row.stampacchia = s_margin >= -opts.tolerance;
    row.weak_stampacchia = ws_margin >= -opts.tolerance;
    row.minty = m_margin >= -opts.tolerance;
    row.weak_minty = wm_margin >= -opts.tolerance;
    row.efficient = eff_margin >= -opts.tolerance;
    row.weakly_efficient = weff_margin >= -opts.tolerance;
    row.worst_margin = std::min({s_margin, ws_margin, m_margin, wm_margin, eff_margin,
                                 weff_margin});
    row.convex_at = conv_margin >= -convexity_opts.tolerance;
    row.strict_at = row.convex_at && conv_strict > convexity_opts.strict_min;
    return row;
}

struct Implication {
    std::string name;
    int licence;  // 0 always, 1 needs convexity, 2 needs strict convexity
    bool (*holds)(const RelationRow&);
};

const std::vector<Implication>& implications() {
    static const std::vector<Implication> table = {
        {"stampacchia=>weak-stampacchia", 0,
         [](const RelationRow& r) { return !r.stampacchia || r.weak_stampacchia; }},
        {"minty=>weak-minty", 0, [](const RelationRow& r) { return !r.minty || r.weak_minty; }},
        {"efficient=>weakly-efficient", 0,
         [](const RelationRow& r) { return !r.efficient || r.weakly_efficient; }},
        {"stampacchia=>minty", 1, [](const RelationRow& r) { return !r.stampacchia || r.minty; }},
        {"stampacchia=>efficient", 1,
         [](const RelationRow& r) { return !r.stampacchia || r.efficient; }},
        {"minty<=>efficient", 1, [](const RelationRow& r) { return r.minty == r.efficient; }},
        {"weak-stampacchia<=>weakly-efficient", 1,
         [](const RelationRow& r) { return r.weak_stampacchia == r.weakly_efficient; }},
        {"weak-minty<=>weak-stampacchia", 1,
         [](const RelationRow& r) { return r.weak_minty == r.weak_stampacchia; }},
        {"weakly-efficient=>efficient", 2,
         [](const RelationRow& r) { return !r.weakly_efficient || r.efficient; }},
    };
    return table;
}

} // namespace

RelationReport relation_suite(const VectorFunction& F, std::span<const Point> candidates,
                              std::span<const Point> q_samples, const VviCheckOptions& opts,
                              const convexity::MarginCheckOptions& convexity_opts, int workers) {
    if (candidates.empty()) throw ContractViolation("relation_suite: empty candidate grid");

    RelationReport report;
    for (const Implication& imp : implications()) report.implication_names.push_back(imp.name);
    report.summary.name = "relation_suite";
    report.summary.tolerance = opts.tolerance;
    report.summary.samples = candidates.size();
    report.summary.sample_margins.reserve(candidates.size());

    report.rows.resize(candidates.size());
    parallel_for(candidates.size(), workers, [&](std::size_t k) {
        report.rows[k] = relation_row(F, candidates[k], q_samples, opts, convexity_opts);
    });

    report.convex_established = true;
    report.strict_established = true;
    for (const RelationRow& row : report.rows) {
        report.convex_established = report.convex_established && row.convex_at;
        report.strict_established = report.strict_established && row.strict_at;
    }

    // Implications are asserted only at the licence level the convexity
    // check actually established, on the same sample set for both sides.
    for (std::size_t k = 0; k < report.rows.size(); ++k) {
        RelationRow& row = report.rows[k];
        double row_margin = opts.tolerance;  // sentinel: no violation
        for (std::size_t j = 0; j < implications().size(); ++j) {
            const Implication& imp = implications()[j];
            if (imp.licence == 1 && !report.convex_established) continue;
            if (imp.licence == 2 && !report.strict_established) continue;
            if (!imp.holds(row)) {
                row.violated_implication = static_cast<int>(j);
                row_margin = std::min(row_margin, row.worst_margin);
                report.summary.record(
                    k, row.worst_margin,
                    CounterexampleRow{k, row.candidate.coords, {}, static_cast<int>(j),
                                      row.worst_margin, imp.name},
                    true);
            }
        }
        report.summary.sample_margins.push_back(row_margin);
    }
    return report;
}

} // namespace hvvi::vvi

#include "hvvi/convexity.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hvvi/errors.hpp"

namespace hvvi::convexity {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Iterate over the componentwise cross product of generator indices.
class TupleIterator {
public:
    explicit TupleIterator(const std::vector<Convexificator>& sets) : sets_(sets), index_(sets.size(), 0) {}

    const std::vector<std::size_t>& index() const { return index_; }

    const Tangent& generator(std::size_t component) const {
        return sets_[component].generators[index_[component]];
    }

    bool advance() {
        for (std::size_t i = 0; i < index_.size(); ++i) {
            if (++index_[i] < sets_[i].generators.size()) return true;
            index_[i] = 0;
        }
        return false;
    }

private:
    const std::vector<Convexificator>& sets_;
    std::vector<std::size_t> index_;
};

bool same_coords(const Point& a, const Point& b) { return a.coords == b.coords; }

} // namespace

std::vector<double> VectorFunction::values(const Point& p) const {
    std::vector<double> v;
    v.reserve(components.size());
    for (const auto& f : components) {
        const double x = f.evaluator(p);
        if (!std::isfinite(x)) throw ProbeFailure("VectorFunction: non-finite component value");
        v.push_back(x);
    }
    return v;
}

std::vector<Convexificator> VectorFunction::convexificators(const Point& p) const {
    std::vector<Convexificator> sets;
    sets.reserve(components.size());
    for (const auto& f : components) sets.push_back(f.convexificator_oracle(p));
    return sets;
}

PairingVector pairing(std::span<const Tangent> selection, const Tangent& u) {
    PairingVector out;
    out.reserve(selection.size());
    for (const Tangent& xi : selection) {
        if (!(xi.base == u.base))
            throw ContractViolation("pairing: selection and direction have different base points");
        out.push_back(geom::metric_inner(xi, u));
    }
    return out;
}

CheckReport convexity_check(const VectorFunction& F, const Point& base,
                            std::span<const Point> probes, bool strict,
                            const MarginCheckOptions& opts) {
    CheckReport report;
    report.name = strict ? "convexity_check(strict)" : "convexity_check";
    report.tolerance = opts.tolerance;
    report.samples = probes.size();
    report.sample_margins.reserve(probes.size());

    const std::vector<Convexificator> sets = F.convexificators(base);
    const std::vector<double> f_base = F.values(base);

    for (std::size_t k = 0; k < probes.size(); ++k) {
        const Point& probe = probes[k];
        const Tangent u = geom::log_map(base, probe);
        const std::vector<double> f_probe = F.values(probe);

        double margin = kInf;
        int worst_component = -1;
        std::vector<std::size_t> worst_tuple;
        TupleIterator tuples(sets);
        do {
            for (std::size_t i = 0; i < F.size(); ++i) {
                const double m = f_probe[i] - f_base[i] - geom::metric_inner(tuples.generator(i), u);
                if (m < margin) {
                    margin = m;
                    worst_component = static_cast<int>(i);
                    worst_tuple = tuples.index();
                }
            }
        } while (tuples.advance());

        const bool degenerate = same_coords(probe, base);
        const bool violating = strict && !degenerate ? !(margin > opts.strict_min)
                                                     : margin < -opts.tolerance;
        report.sample_margins.push_back(margin);
        report.sample_components.push_back(worst_component);
        std::string tuple_note = "tuple";
        for (std::size_t g : worst_tuple) tuple_note += " " + std::to_string(g);
        report.record(k, margin,
                      CounterexampleRow{k, probe.coords, base.coords, worst_component, margin,
                                        std::move(tuple_note)},
                      violating);
    }
    return report;
}

CheckReport monotonicity_check(const VectorFunction& F,
                               std::span<const std::pair<Point, Point>> pairs, bool strict,
                               const MarginCheckOptions& opts) {
    CheckReport report;
    report.name = strict ? "monotonicity_check(strict)" : "monotonicity_check";
    report.tolerance = opts.tolerance;
    report.samples = pairs.size();
    report.sample_margins.reserve(pairs.size());

    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const Point& p = pairs[k].first;
        const Point& q = pairs[k].second;
        const std::vector<Convexificator> xi_sets = F.convexificators(p);
        const std::vector<Convexificator> zeta_sets = F.convexificators(q);
        const Tangent u = geom::log_map(q, p);

        // Transport every ξ generator once per pair.
        std::vector<Convexificator> carried = xi_sets;
        for (auto& set : carried) {
            set.base = q;
            for (auto& g : set.generators) g = geom::parallel_transport(g, p, q);
        }

        double margin = kInf;
        int worst_component = -1;
        TupleIterator xi_tuples(carried);
        do {
            TupleIterator zeta_tuples(zeta_sets);
            do {
                for (std::size_t i = 0; i < F.size(); ++i) {
                    const double m = geom::metric_inner(
                        geom::subtract(xi_tuples.generator(i), zeta_tuples.generator(i)), u);
                    if (m < margin) {
                        margin = m;
                        worst_component = static_cast<int>(i);
                    }
                }
            } while (zeta_tuples.advance());
        } while (xi_tuples.advance());

        const bool degenerate = same_coords(p, q);
        const bool violating = strict && !degenerate ? !(margin > opts.strict_min)
                                                     : margin < -opts.tolerance;
        report.sample_margins.push_back(margin);
        report.sample_components.push_back(worst_component);
        report.record(k, margin, CounterexampleRow{k, p.coords, q.coords, worst_component, margin, {}},
                      violating);
    }
    return report;
}

CheckReport secant_check(const VectorFunction& F,
                         std::span<const std::pair<Point, Point>> pairs,
                         std::span<const double> mu_grid,
                         const SecantCheckOptions& opts) {
    CheckReport report;
    report.name = "secant_check";
    report.tolerance = opts.tolerance;
    report.samples = pairs.size();
    report.sample_margins.reserve(pairs.size());

    for (double mu : mu_grid)
        if (!(mu >= 0.0 && mu <= 1.0))
            throw ContractViolation("secant_check: mu values must lie in [0, 1]");

    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const Point& p = pairs[k].first;
        const Point& q = pairs[k].second;
        const std::vector<double> fp = F.values(p);
        const std::vector<double> fq = F.values(q);
        const Tangent chord = geom::log_map(q, p);

        double worst_slack = kInf;        // interior: chord must dominate
        double worst_endpoint_dev = 0.0;  // mu in {0,1}: equality
        int worst_component = -1;
        std::string note;
        for (double mu : mu_grid) {
            const Point z = geom::exp_map(q, geom::scale(chord, mu));
            const std::vector<double> fz = F.values(z);
            const bool endpoint = (mu == 0.0 || mu == 1.0);
            for (std::size_t i = 0; i < F.size(); ++i) {
                const double slack = fq[i] + mu * (fp[i] - fq[i]) - fz[i];
                if (endpoint) {
                    if (std::abs(slack) > worst_endpoint_dev) {
                        worst_endpoint_dev = std::abs(slack);
                        if (worst_endpoint_dev > opts.endpoint_tolerance) {
                            worst_component = static_cast<int>(i);
                            note = "endpoint mu=" + std::to_string(mu);
                        }
                    }
                } else if (slack < worst_slack) {
                    worst_slack = slack;
                    worst_component = static_cast<int>(i);
                    note = "mu=" + std::to_string(mu);
                }
            }
        }
        const bool violating = worst_slack < -opts.tolerance ||
                               worst_endpoint_dev > opts.endpoint_tolerance;
        const double margin =
            std::min(worst_slack, opts.endpoint_tolerance - worst_endpoint_dev);
        report.sample_margins.push_back(margin);
        report.sample_components.push_back(worst_component);
        report.record(k, margin,
                      CounterexampleRow{k, p.coords, q.coords, worst_component, margin, note},
                      violating);
    }
    return report;
}

} // namespace hvvi::convexity

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace hvvi {

/// One recorded counterexample (or near-miss) from a sampled check.
struct CounterexampleRow {
    std::size_t index = 0;          ///< sample index within the batch
    std::vector<double> primary;    ///< probe point / first point of a pair
    std::vector<double> secondary;  ///< direction, second point, ... (may be empty)
    int component = -1;             ///< offending component, -1 if n/a
    double margin = 0.0;
    std::string note;
};

/// Seed-deterministic outcome of a sampled property check. A pass means
/// "no counterexample found at this budget", never a proof.
struct CheckReport {
    std::string name;
    bool passed = true;
    std::size_t samples = 0;
    double tolerance = 0.0;
    double worst_margin = std::numeric_limits<double>::infinity();
    std::size_t worst_index = 0;
    std::vector<double> sample_margins;        ///< one per sample, order = sample index
    std::vector<int> sample_components;        ///< worst component per sample (-1 if n/a)
    std::vector<CounterexampleRow> failures;   ///< capped; worst kept first
    std::uint64_t seed = 0;

    void record(std::size_t index, double margin, CounterexampleRow row,
                bool violating, std::size_t failure_cap = 16) {
        if (margin < worst_margin) {
            worst_margin = margin;
            worst_index = index;
        }
        if (violating) {
            passed = false;
            if (failures.size() < failure_cap) failures.push_back(std::move(row));
        }
    }
};

} // namespace hvvi

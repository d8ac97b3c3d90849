#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "psewer/simulation.hpp"

namespace psewer {

enum class WindowMode {
    Moving,  // window advances one step at a time
    Block,   // consecutive, non-overlapping windows
};

struct MovingSeries {
    double window = 0.0;  // s
    double t0 = 0.0;      // end time of the first window
    double stride = 0.0;  // s between consecutive window ends
    std::vector<double> values;
};

/// Windowed sums of a per-step series. Each window is summed independently
/// with compensated summation, so no drift builds up along the series.
/// Throws std::invalid_argument when `window` is not a positive multiple of
/// `dt` or the series is shorter than one window.
MovingSeries moving_sum(std::span<const double> series, double window, double dt,
                        WindowMode mode = WindowMode::Moving);

struct SummaryStats {
    double mean = 0.0;
    double std = 0.0;  // population standard deviation (divides by n)
    double min = 0.0;
    double max = 0.0;
};

/// Throws std::invalid_argument on an empty series.
SummaryStats summary_stats(std::span<const double> series);

struct ComparisonRow {
    std::string config;
    SummaryStats stats;
    double reduction_vs_a = 0.0;  // percent
};

struct ComparisonTable {
    double window = 0.0;
    std::vector<ComparisonRow> rows;

    const ComparisonRow& row(const std::string& config) const;
};

/// The five module selections compared in the evaluation, in table order.
const std::vector<std::string>& experiment_configs();

/// Statistics of the windowed aggregate outflow of each configuration and the
/// reduction of its standard deviation relative to configuration A.
/// Requires all five configurations, keyed by their module label, run on the
/// same scenario; throws std::invalid_argument otherwise.
ComparisonTable compare_experiments(const std::map<std::string, SimResult>& results,
                                    double window, WindowMode mode = WindowMode::Moving);

}  // namespace psewer

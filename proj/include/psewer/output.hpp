#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "psewer/metrics.hpp"
#include "psewer/simulation.hpp"

namespace psewer {

// CSV writers. Output is locale-independent: '.' decimals in shortest
// round-trip form, '\n' line ends, header row always present.

void write_aggregate_csv(std::ostream& out, const SimResult& result);
void write_events_csv(std::ostream& out, const SimResult& result);
void write_learning_csv(std::ostream& out, const SimResult& result);
void write_summary_csv(std::ostream& out, const SimResult& result, const SummaryStats& stats,
                       double window);
void write_comparison_csv(std::ostream& out, const ComparisonTable& table);

/// Writes aggregate.csv, events.csv, learning.csv and summary.csv into `dir`
/// (created if needed). Throws IoError.
void write_simulation_outputs(const std::filesystem::path& dir, const SimResult& result,
                              double window, WindowMode mode);

/// Parses a comparison.csv written by write_comparison_csv. Throws CsvError
/// naming the offending line.
ComparisonTable read_comparison_csv(std::istream& in, const std::string& name_for_errors);

/// Writes `content` to `path`, creating parent directories. Throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& content);

// Static SVG figures.

struct LineSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, std::span<const LineSeries> series);

std::string bar_chart_svg(const std::string& title, const std::string& y_label,
                          std::span<const std::string> labels, std::span<const double> values);

}  // namespace psewer

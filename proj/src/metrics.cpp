#include "psewer/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace psewer {

namespace {

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace

MovingSeries moving_sum(std::span<const double> series, double window, double dt,
                        WindowMode mode) {
    if (!(dt > 0.0) || !(window > 0.0))
        throw std::invalid_argument("moving_sum: window and dt must be positive");
    const double ratio = window / dt;
    if (std::floor(ratio) != ratio)
        throw std::invalid_argument("moving_sum: window must be a multiple of dt");
    const auto w = static_cast<std::size_t>(ratio);
    if (series.size() < w)
        throw std::invalid_argument("moving_sum: series shorter than one window");

    MovingSeries out;
    out.window = window;
    out.t0 = window;
    const std::size_t stride = mode == WindowMode::Moving ? 1 : w;
    out.stride = static_cast<double>(stride) * dt;
    out.values.reserve((series.size() - w) / stride + 1);
    for (std::size_t start = 0; start + w <= series.size(); start += stride) {
        CompensatedSum acc;
        for (std::size_t i = start; i < start + w; ++i) acc.add(series[i]);
        out.values.push_back(acc.value());
    }
    return out;
}

SummaryStats summary_stats(std::span<const double> series) {
    if (series.empty()) throw std::invalid_argument("summary_stats: empty series");
    const auto n = static_cast<double>(series.size());

    CompensatedSum total;
    SummaryStats s;
    s.min = series.front();
    s.max = series.front();
    for (double x : series) {
        total.add(x);
        s.min = std::min(s.min, x);
        s.max = std::max(s.max, x);
    }
    s.mean = total.value() / n;

    CompensatedSum squares;
    for (double x : series) {
        const double d = x - s.mean;
        squares.add(d * d);
    }
    s.std = std::sqrt(squares.value() / n);
    return s;
}

const ComparisonRow& ComparisonTable::row(const std::string& config) const {
    for (const auto& r : rows)
        if (r.config == config) return r;
    throw std::out_of_range("ComparisonTable: no row '" + config + "'");
}

const std::vector<std::string>& experiment_configs() {
    static const std::vector<std::string> configs{"A", "AB", "ABD", "ABC", "ABCD"};
    return configs;
}

ComparisonTable compare_experiments(const std::map<std::string, SimResult>& results,
                                    double window, WindowMode mode) {
    const auto& configs = experiment_configs();
    const SimResult* reference = nullptr;
    for (const auto& name : configs) {
        const auto it = results.find(name);
        if (it == results.end())
            throw std::invalid_argument("compare_experiments: missing configuration " + name);
        if (it->second.modules.label() != name)
            throw std::invalid_argument("compare_experiments: result under " + name +
                                        " was run with modules " + it->second.modules.label());
        if (!reference) {
            reference = &it->second;
        } else if (it->second.scenario_key != reference->scenario_key ||
                   it->second.dt != reference->dt) {
            throw std::invalid_argument("compare_experiments: configuration " + name +
                                        " was run on a different scenario");
        }
    }

    ComparisonTable table;
    table.window = window;
    for (const auto& name : configs) {
        const SimResult& r = results.at(name);
        const MovingSeries sums = moving_sum(r.aggregate_outflow, window, r.dt, mode);
        table.rows.push_back({name, summary_stats(sums.values), 0.0});
    }
    const double std_a = table.rows.front().stats.std;
    for (auto& row : table.rows)
        row.reduction_vs_a = std_a > 0.0 ? (std_a - row.stats.std) / std_a * 100.0 : 0.0;
    table.rows.front().reduction_vs_a = 0.0;
    return table;
}

}  // namespace psewer

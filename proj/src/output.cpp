#include "psewer/output.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "psewer/csv.hpp"
#include "psewer/scenario.hpp"

namespace psewer {

namespace {

std::string f(double v) { return format_double(v); }

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fixed(double v, int digits) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << v;
    return os.str();
}

/// Round-ish tick step covering `span` with about `target` ticks.
double tick_step(double span, int target) {
    if (!(span > 0.0)) return 1.0;
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    const double nice = norm < 1.5 ? 1.0 : norm < 3.0 ? 2.0 : norm < 7.0 ? 5.0 : 10.0;
    return nice * mag;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

void write_aggregate_csv(std::ostream& out, const SimResult& result) {
    out << "t,total_pumped_m3\n";
    for (std::size_t i = 0; i < result.aggregate_outflow.size(); ++i)
        out << f(static_cast<double>(i) * result.dt) << ',' << f(result.aggregate_outflow[i])
            << '\n';
}

void write_events_csv(std::ostream& out, const SimResult& result) {
    out << "unit,t_start,t_end,volume_m3,source\n";
    for (const auto& e : result.events) {
        out << e.unit << ',' << f(e.t_start) << ',';
        out << f(e.t_end) << ',';
        out << f(e.volume) << ',' << to_string(e.source) << '\n';
    }
}

void write_learning_csv(std::ostream& out, const SimResult& result) {
    out << "t,unit,t_pump_modif_s\n";
    for (const auto& s : result.learning_trace)
        out << f(s.t) << ',' << s.unit << ',' << f(s.t_pump_modif) << '\n';
}

void write_summary_csv(std::ostream& out, const SimResult& result, const SummaryStats& stats,
                       double window) {
    out << "metric,value\n";
    out << "label," << result.label << '\n';
    out << "config," << result.modules.label() << '\n';
    out << "n_units," << result.n_units << '\n';
    out << "dt_s," << f(result.dt) << '\n';
    out << "steps," << result.aggregate_outflow.size() << '\n';
    out << "t_base_s," << f(result.t_base) << '\n';
    out << "t_base_capped," << (result.t_base_capped ? 1 : 0) << '\n';
    out << "window_s," << f(window) << '\n';
    out << "mean_m3," << f(stats.mean) << '\n';
    out << "std_m3," << f(stats.std) << '\n';
    out << "min_m3," << f(stats.min) << '\n';
    out << "max_m3," << f(stats.max) << '\n';
    out << "events," << result.events.size() << '\n';
    out << "overflow_events," << result.overflow_events.size() << '\n';
    out << "total_inflow_m3," << f(result.sum_inflow()) << '\n';
    out << "total_pumped_m3," << f(result.sum_pumped()) << '\n';
    out << "total_overflow_m3," << f(result.sum_overflow()) << '\n';
    out << "storage_change_m3," << f(result.sum_storage_change()) << '\n';
    out << "mass_balance_residual," << f(result.mass_balance_residual()) << '\n';
}

void write_comparison_csv(std::ostream& out, const ComparisonTable& table) {
    out << "config,std,mean,min,max,reduction_vs_A\n";
    for (const auto& r : table.rows) {
        out << r.config << ',' << f(r.stats.std) << ',';
        out << f(r.stats.mean) << ',';
        out << f(r.stats.min) << ',';
        out << f(r.stats.max) << ',';
        out << f(r.reduction_vs_a) << '\n';
    }
}

ComparisonTable read_comparison_csv(std::istream& in, const std::string& name_for_errors) {
    const CsvTable csv = read_csv(in, name_for_errors);
    ComparisonTable table;
    std::size_t c_config = 0, c_std = 0, c_mean = 0, c_min = 0, c_max = 0, c_red = 0;
    try {
        c_config = csv.column("config");
        c_std = csv.column("std");
        c_mean = csv.column("mean");
        c_min = csv.column("min");
        c_max = csv.column("max");
        c_red = csv.column("reduction_vs_A");
    } catch (const std::out_of_range& e) {
        throw CsvError(name_for_errors, 1, e.what());
    }
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        const auto& row = csv.rows[i];
        try {
            ComparisonRow r;
            r.config = row[c_config];
            r.stats.std = parse_double(row[c_std]);
            r.stats.mean = parse_double(row[c_mean]);
            r.stats.min = parse_double(row[c_min]);
            r.stats.max = parse_double(row[c_max]);
            r.reduction_vs_a = parse_double(row[c_red]);
            table.rows.push_back(std::move(r));
        } catch (const std::invalid_argument& e) {
            // Rows are 1-based after the header line; blank lines are not
            // expected in files we write.
            throw CsvError(name_for_errors, i + 2, e.what());
        }
    }
    return table;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError(path.parent_path(), "cannot create directory: " + ec.message());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path, "cannot open for writing");
    out << content;
    out.flush();
    if (!out) throw IoError(path, "write failed");
}

void write_simulation_outputs(const std::filesystem::path& dir, const SimResult& result,
                              double window, WindowMode mode) {
    const MovingSeries sums = moving_sum(result.aggregate_outflow, window, result.dt, mode);
    const SummaryStats stats = summary_stats(sums.values);

    std::ostringstream agg, ev, learn, summary;
    write_aggregate_csv(agg, result);
    write_events_csv(ev, result);
    write_learning_csv(learn, result);
    write_summary_csv(summary, result, stats, window);
    write_text_file(dir / "aggregate.csv", agg.str());
    write_text_file(dir / "events.csv", ev.str());
    write_text_file(dir / "learning.csv", learn.str());
    write_text_file(dir / "summary.csv", summary.str());
}

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, std::span<const LineSeries> series) {
    constexpr double W = 900, H = 360, L = 70, R = 20, T = 40, B = 50;
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (first) {
                xmin = xmax = s.x[i];
                ymin = ymax = s.y[i];
                first = false;
            }
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    ymin = std::min(ymin, 0.0);
    if (xmax <= xmin) xmax = xmin + 1;
    if (ymax <= ymin) ymax = ymin + 1;
    ymax += 0.05 * (ymax - ymin);

    auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
       << xml_escape(title) << "</text>\n";

    const double xs = tick_step(xmax - xmin, 10);
    for (double x = std::ceil(xmin / xs) * xs; x <= xmax + 1e-12; x += xs)
        os << "<line x1=\"" << fixed(px(x), 1) << "\" y1=\"" << T << "\" x2=\"" << fixed(px(x), 1)
           << "\" y2=\"" << H - B << "\" stroke=\"#ddd\"/><text x=\"" << fixed(px(x), 1)
           << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << format_double(x)
           << "</text>\n";
    const double ys = tick_step(ymax - ymin, 6);
    for (double y = std::ceil(ymin / ys) * ys; y <= ymax + 1e-12; y += ys)
        os << "<line x1=\"" << L << "\" y1=\"" << fixed(py(y), 1) << "\" x2=\"" << W - R
           << "\" y2=\"" << fixed(py(y), 1) << "\" stroke=\"#ddd\"/><text x=\"" << L - 6
           << "\" y=\"" << fixed(py(y) + 4, 1) << "\" text-anchor=\"end\">" << fixed(y, 3)
           << "</text>\n";
    os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\""
       << H - T - B << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 10
       << "\" text-anchor=\"middle\">" << xml_escape(x_label) << "</text>\n";
    os << "<text transform=\"translate(16," << (T + H - B) / 2
       << ") rotate(-90)\" text-anchor=\"middle\">" << xml_escape(y_label) << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kPalette[k % std::size(kPalette)];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            os << fixed(px(s.x[i]), 2) << ',' << fixed(py(s.y[i]), 2) << ' ';
        os << "\"/>\n";
        if (series.size() > 1)
            os << "<text x=\"" << W - R - 6 << "\" y=\"" << T + 16 + 14 * k
               << "\" text-anchor=\"end\" fill=\"" << color << "\">" << xml_escape(s.name)
               << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string bar_chart_svg(const std::string& title, const std::string& y_label,
                          std::span<const std::string> labels, std::span<const double> values) {
    constexpr double W = 520, H = 360, L = 70, R = 20, T = 40, B = 50;
    double ymax = 0.0;
    for (double v : values) ymax = std::max(ymax, v);
    if (ymax <= 0.0) ymax = 1.0;
    ymax *= 1.1;
    auto py = [&](double y) { return H - B - y / ymax * (H - T - B); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
       << xml_escape(title) << "</text>\n";
    const double ys = tick_step(ymax, 6);
    for (double y = 0.0; y <= ymax + 1e-12; y += ys)
        os << "<line x1=\"" << L << "\" y1=\"" << fixed(py(y), 1) << "\" x2=\"" << W - R
           << "\" y2=\"" << fixed(py(y), 1) << "\" stroke=\"#ddd\"/><text x=\"" << L - 6
           << "\" y=\"" << fixed(py(y) + 4, 1) << "\" text-anchor=\"end\">" << fixed(y, 3)
           << "</text>\n";
    os << "<text transform=\"translate(16," << (T + H - B) / 2
       << ") rotate(-90)\" text-anchor=\"middle\">" << xml_escape(y_label) << "</text>\n";

    const std::size_t n = std::min(labels.size(), values.size());
    const double slot = (W - L - R) / std::max<std::size_t>(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = L + slot * i + slot * 0.15;
        os << "<rect x=\"" << fixed(x, 1) << "\" y=\"" << fixed(py(values[i]), 1) << "\" width=\""
           << fixed(slot * 0.7, 1) << "\" height=\"" << fixed(H - B - py(values[i]), 1)
           << "\" fill=\"" << kPalette[0] << "\"/>\n";
        os << "<text x=\"" << fixed(x + slot * 0.35, 1) << "\" y=\"" << H - B + 16
           << "\" text-anchor=\"middle\">" << i + 1 << " " << xml_escape(labels[i]) << "</text>\n";
        os << "<text x=\"" << fixed(x + slot * 0.35, 1) << "\" y=\"" << fixed(py(values[i]) - 4, 1)
           << "\" text-anchor=\"middle\">" << fixed(values[i], 4) << "</text>\n";
    }
    os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
       << "\" stroke=\"black\"/>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace psewer

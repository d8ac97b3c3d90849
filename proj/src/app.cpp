#include "psewer/app.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "psewer/csv.hpp"
#include "psewer/error.hpp"
#include "psewer/metrics.hpp"
#include "psewer/output.hpp"
#include "psewer/scenario.hpp"
#include "psewer/simulation.hpp"

namespace psewer {

namespace {

namespace fs = std::filesystem;

struct RunOptions {
    std::string scenario;
    std::vector<std::string> overrides;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

Scenario resolve(const RunOptions& opt) {
    Scenario s = load_scenario(opt.scenario);
    for (const auto& o : opt.overrides) apply_override(s, o);
    if (opt.seed) s.sim.seed = *opt.seed;
    if (!opt.out_dir.empty()) s.out_dir = opt.out_dir;
    s.sim.validate();
    return s;
}

void report_capped(const SimResult& r, std::ostream& err) {
    if (r.t_base_capped)
        err << "warning: " << r.modules.label()
            << ": mass-balance pump time exceeds control.slot_len; capped at "
            << format_double(r.t_base) << " s (schedule undersized)\n";
}

int cmd_simulate(const RunOptions& opt, std::ostream& out, std::ostream& err) {
    const Scenario s = resolve(opt);
    const SimResult r = run_simulation(s.sim);
    report_capped(r, err);
    write_simulation_outputs(s.out_dir, r, s.window, s.window_mode);
    if (!opt.quiet) {
        const auto stats =
            summary_stats(moving_sum(r.aggregate_outflow, s.window, r.dt, s.window_mode).values);
        out << s.sim.label << " [" << r.modules.label() << "] std=" << format_double(stats.std)
            << " mean=" << format_double(stats.mean) << " events=" << r.events.size()
            << " overflow_events=" << r.overflow_events.size() << " -> " << s.out_dir << '\n';
    }
    return kExitOk;
}

int cmd_experiment(const RunOptions& opt, std::ostream& out, std::ostream& err) {
    const Scenario s = resolve(opt);

    // Each configuration owns its whole state; results are merged in fixed order.
    std::vector<std::future<SimResult>> jobs;
    for (const auto& name : experiment_configs()) {
        SimConfig cfg = s.sim;
        cfg.control.enabled = ModuleSet::parse(name);
        cfg.validate();
        jobs.push_back(std::async(std::launch::async, [cfg] { return run_simulation(cfg); }));
    }
    std::map<std::string, SimResult> results;
    for (std::size_t i = 0; i < jobs.size(); ++i)
        results.emplace(experiment_configs()[i], jobs[i].get());

    const ComparisonTable table = compare_experiments(results, s.window, s.window_mode);
    const fs::path dir = s.out_dir;

    std::ostringstream cmp;
    write_comparison_csv(cmp, table);
    write_text_file(dir / "comparison.csv", cmp.str());

    std::vector<double> stds;
    for (const auto& name : experiment_configs()) {
        const SimResult& r = results.at(name);
        report_capped(r, err);
        std::ostringstream agg;
        write_aggregate_csv(agg, r);
        write_text_file(dir / ("aggregate_" + name + ".csv"), agg.str());

        const MovingSeries sums = moving_sum(r.aggregate_outflow, s.window, r.dt, s.window_mode);
        LineSeries line{name, {}, {}};
        // Thin the moving series to one point per 5 minutes for plotting.
        const std::size_t thin = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(300.0 / sums.stride)));
        for (std::size_t i = 0; i < sums.values.size(); i += thin) {
            line.x.push_back((sums.t0 + static_cast<double>(i) * sums.stride) / kSecondsPerDay);
            line.y.push_back(sums.values[i]);
        }
        const std::string title = "Two-hour sums of all drawings, config " + name;
        write_text_file(dir / ("moving_sum_" + name + ".svg"),
                        line_chart_svg(title, "time [days]", "m3 per window",
                                       std::span<const LineSeries>(&line, 1)));

        if (r.modules.d) {
            std::vector<LineSeries> traces(r.n_units);
            for (std::size_t u = 0; u < r.n_units; ++u) traces[u].name = "unit " + std::to_string(u);
            for (const auto& sample : r.learning_trace) {
                traces[sample.unit].x.push_back(sample.t / kSecondsPerDay);
                traces[sample.unit].y.push_back(sample.t_pump_modif);
            }
            write_text_file(dir / ("learning_" + name + ".svg"),
                            line_chart_svg("Learned pump-time corrections, config " + name,
                                           "time [days]", "t_pump_modif [s]", traces));
            std::ostringstream learn;
            write_learning_csv(learn, r);
            write_text_file(dir / ("learning_" + name + ".csv"), learn.str());
        }
        stds.push_back(table.row(name).stats.std);
    }
    write_text_file(dir / "std_comparison.svg",
                    bar_chart_svg("Std of two-hour sums per configuration", "std [m3]",
                                  experiment_configs(), stds));

    if (!opt.quiet) {
        out << "config     std            mean           reduction_vs_A[%]\n";
        for (const auto& row : table.rows)
            out << std::left << std::setw(10) << row.config << ' ' << std::setw(14)
                << format_double(row.stats.std) << ' ' << std::setw(14)
                << format_double(row.stats.mean) << ' ' << format_double(row.reduction_vs_a)
                << '\n';
        out << "-> " << dir.string() << '\n';
    }
    return kExitOk;
}

ComparisonTable load_comparison(const fs::path& dir) {
    const fs::path path = dir / "comparison.csv";
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open");
    return read_comparison_csv(in, path.string());
}

int cmd_compare(const std::string& dir_a, const std::string& dir_b, std::ostream& out) {
    const ComparisonTable a = load_comparison(dir_a);
    const ComparisonTable b = load_comparison(dir_b);
    constexpr double tol = 1e-9;

    bool equal = a.rows.size() == b.rows.size();
    if (!equal)
        out << "row count differs: " << a.rows.size() << " vs " << b.rows.size() << '\n';
    const std::size_t n = std::min(a.rows.size(), b.rows.size());
    out << "config     d_std                 d_reduction_vs_A\n";
    for (std::size_t i = 0; i < n; ++i) {
        const auto& ra = a.rows[i];
        const auto& rb = b.rows[i];
        const double d_std = rb.stats.std - ra.stats.std;
        const double d_red = rb.reduction_vs_a - ra.reduction_vs_a;
        const bool same = ra.config == rb.config && std::abs(d_std) <= tol && std::abs(d_red) <= tol;
        if (!same) equal = false;
        out << std::left << std::setw(10)
            << (ra.config == rb.config ? ra.config : ra.config + "/" + rb.config) << ' '
            << std::setw(21) << format_double(d_std) << ' ' << format_double(d_red)
            << (same ? "" : "  *") << '\n';
    }
    out << (equal ? "equal" : "DIFFERENT") << '\n';
    return equal ? kExitOk : kExitMismatch;
}

}  // namespace

int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pressure sewer control simulator"};
    app.require_subcommand(1);

    RunOptions sim_opt;
    auto* simulate = app.add_subcommand("simulate", "Run one scenario and write CSV outputs");
    simulate->add_option("scenario", sim_opt.scenario, "Scenario file")->required();
    simulate->add_option("--override", sim_opt.overrides, "key=value, repeatable");
    simulate->add_option("--out", sim_opt.out_dir, "Output directory");
    simulate->add_option("--seed", sim_opt.seed, "Override the scenario seed");
    simulate->add_flag("--quiet", sim_opt.quiet, "No console summary");

    RunOptions exp_opt;
    auto* experiment =
        app.add_subcommand("experiment", "Run configurations A, AB, ABD, ABC, ABCD and compare");
    experiment->add_option("scenario", exp_opt.scenario, "Scenario file")->required();
    experiment->add_option("--override", exp_opt.overrides, "key=value, repeatable");
    experiment->add_option("--out", exp_opt.out_dir, "Output directory");
    experiment->add_option("--seed", exp_opt.seed, "Override the scenario seed");
    experiment->add_flag("--quiet", exp_opt.quiet, "No console summary");

    std::string dir_a, dir_b;
    auto* compare = app.add_subcommand("compare", "Diff two experiment output directories");
    compare->add_option("dirA", dir_a)->required();
    compare->add_option("dirB", dir_b)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }

    try {
        if (*simulate) return cmd_simulate(sim_opt, out, err);
        if (*experiment) return cmd_experiment(exp_opt, out, err);
        return cmd_compare(dir_a, dir_b, out);
    } catch (const ConfigError& e) {
        err << "invalid configuration: " << e.what() << '\n';
        return kExitValidation;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const CsvError& e) {
        err << "malformed file: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
}

}  // namespace psewer

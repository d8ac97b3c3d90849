#include "psewer/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <utility>

#include "psewer/csv.hpp"
#include "psewer/error.hpp"

namespace psewer {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

double as_double(std::string_view key, std::string_view value) {
    try {
        const double v = parse_double(value);
        if (!std::isfinite(v)) throw std::invalid_argument("not finite");
        return v;
    } catch (const std::invalid_argument&) {
        throw ConfigError(std::string(key), "expected a number, got '" + std::string(value) + "'");
    }
}

template <class Int>
Int as_integer(std::string_view key, std::string_view value) {
    value = trim(value);
    Int v{};
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size())
        throw ConfigError(std::string(key), "expected an integer, got '" + std::string(value) + "'");
    return v;
}

std::vector<double> as_list(std::string_view key, std::string_view value) {
    std::vector<double> out;
    value = trim(value);
    if (value.empty()) return out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = value.find(',', start);
        out.push_back(as_double(key, trim(value.substr(start, comma - start))));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string join(const auto& values) {
    std::string s;
    for (double v : values) {
        if (!s.empty()) s += ", ";
        s += format_double(v);
    }
    return s;
}

using Setter = std::function<void(Scenario&, std::string_view key, std::string_view value)>;
using Getter = std::function<std::string(const Scenario&)>;

struct Field {
    std::string key;
    Setter set;
    Getter get;
};

Field number(std::string key, double SimConfig::*member) {
    return {std::move(key),
            [member](Scenario& s, std::string_view k, std::string_view v) {
                s.sim.*member = as_double(k, v);
            },
            [member](const Scenario& s) { return format_double(s.sim.*member); }};
}

Field tank_number(std::string key, double TankParams::*member) {
    return {std::move(key),
            [member](Scenario& s, std::string_view k, std::string_view v) {
                s.sim.tank.*member = as_double(k, v);
            },
            [member](const Scenario& s) { return format_double(s.sim.tank.*member); }};
}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = [] {
        std::vector<Field> f;
        f.push_back({"label",
                     [](Scenario& s, std::string_view, std::string_view v) { s.sim.label = v; },
                     [](const Scenario& s) { return s.sim.label; }});
        f.push_back({"out_dir",
                     [](Scenario& s, std::string_view, std::string_view v) { s.out_dir = v; },
                     [](const Scenario& s) { return s.out_dir; }});
        f.push_back({"seed",
                     [](Scenario& s, std::string_view k, std::string_view v) {
                         s.sim.seed = as_integer<std::uint64_t>(k, v);
                     },
                     [](const Scenario& s) { return std::to_string(s.sim.seed); }});
        f.push_back({"n_units",
                     [](Scenario& s, std::string_view k, std::string_view v) {
                         s.sim.n_units = as_integer<std::size_t>(k, v);
                     },
                     [](const Scenario& s) { return std::to_string(s.sim.n_units); }});
        f.push_back(number("horizon_days", &SimConfig::horizon_days));
        f.push_back(number("dt", &SimConfig::dt));
        f.push_back(number("initial_volume", &SimConfig::initial_volume));

        f.push_back(tank_number("tank.capacity", &TankParams::capacity));
        f.push_back(tank_number("tank.v_dead", &TankParams::v_dead));
        f.push_back(tank_number("tank.c_minus", &TankParams::c_minus));
        f.push_back(tank_number("tank.c_plus", &TankParams::c_plus));
        f.push_back(tank_number("tank.v_warn", &TankParams::v_warn));
        f.push_back(tank_number("tank.v_high", &TankParams::v_high));
        f.push_back(tank_number("tank.v_off", &TankParams::v_off));
        f.push_back(tank_number("tank.pump_rate", &TankParams::pump_rate));

        f.push_back({"profile.daily_mean",
                     [](Scenario& s, std::string_view k, std::string_view v) {
                         s.sim.profile.daily_mean = as_double(k, v);
                     },
                     [](const Scenario& s) { return format_double(s.sim.profile.daily_mean); }});
        f.push_back({"profile.noise_cv",
                     [](Scenario& s, std::string_view k, std::string_view v) {
                         s.sim.profile.noise_cv = as_double(k, v);
                     },
                     [](const Scenario& s) { return format_double(s.sim.profile.noise_cv); }});
        f.push_back({"profile.hourly_weights",
                     [](Scenario& s, std::string_view k, std::string_view v) {
                         const auto w = as_list(k, v);
                         if (w.size() != 24)
                             throw ConfigError(std::string(k), "expected 24 comma-separated weights");
                         std::array<double, 24> raw{};
                         std::copy(w.begin(), w.end(), raw.begin());
                         s.sim.profile.hourly_weights = InflowProfile::normalized(raw);
                     },
                     [](const Scenario& s) { return join(s.sim.profile.hourly_weights); }});
        f.push_back({"profile.unit_scale",
                     [](Scenario& s, std::string_view k, std::string_view v) {
                         s.sim.profile.unit_scale = as_list(k, v);
                     },
                     [](const Scenario& s) { return join(s.sim.profile.unit_scale); }});
        f.push_back(number("profile.unit_scale_min", &SimConfig::unit_scale_min));
        f.push_back(number("profile.unit_scale_max", &SimConfig::unit_scale_max));

        f.push_back({"control.enabled",
                     [](Scenario& s, std::string_view, std::string_view v) {
                         s.sim.control.enabled = ModuleSet::parse(trim(v));
                     },
                     [](const Scenario& s) { return s.sim.control.enabled.label(); }});
        f.push_back({"control.t_base",
                     [](Scenario& s, std::string_view k, std::string_view v) {
                         s.sim.control.t_base = as_double(k, v);
                     },
                     [](const Scenario& s) { return format_double(s.sim.control.t_base); }});
        f.push_back({"control.pt_additional",
                     [](Scenario& s, std::string_view k, std::string_view v) {
                         s.sim.control.pt_additional = as_double(k, v);
                     },
                     [](const Scenario& s) { return format_double(s.sim.control.pt_additional); }});
        f.push_back({"control.learn_period",
                     [](Scenario& s, std::string_view k, std::string_view v) {
                         s.sim.control.learn_period = as_double(k, v);
                     },
                     [](const Scenario& s) { return format_double(s.sim.control.learn_period); }});
        f.push_back({"control.slot_len",
                     [](Scenario& s, std::string_view k, std::string_view v) {
                         s.sim.control.schedule.slot_len = as_double(k, v);
                     },
                     [](const Scenario& s) {
                         return format_double(s.sim.control.schedule.slot_len);
                     }});
        f.push_back({"control.emergent_period",
                     [](Scenario& s, std::string_view k, std::string_view v) {
                         s.sim.control.schedule.emergent_period = as_integer<int>(k, v);
                     },
                     [](const Scenario& s) {
                         return std::to_string(s.sim.control.schedule.emergent_period);
                     }});

        f.push_back({"metrics.window",
                     [](Scenario& s, std::string_view k, std::string_view v) {
                         s.window = as_double(k, v);
                     },
                     [](const Scenario& s) { return format_double(s.window); }});
        f.push_back({"metrics.mode",
                     [](Scenario& s, std::string_view k, std::string_view v) {
                         v = trim(v);
                         if (v == "moving")
                             s.window_mode = WindowMode::Moving;
                         else if (v == "block")
                             s.window_mode = WindowMode::Block;
                         else
                             throw ConfigError(std::string(k), "expected 'moving' or 'block'");
                     },
                     [](const Scenario& s) {
                         return std::string(s.window_mode == WindowMode::Moving ? "moving" : "block");
                     }});
        return f;
    }();
    return table;
}

const Field* find_field(std::string_view key) {
    for (const auto& f : fields())
        if (f.key == key) return &f;
    return nullptr;
}

}  // namespace

const std::vector<std::string>& scenario_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& f : fields()) k.push_back(f.key);
        return k;
    }();
    return keys;
}

void apply_setting(Scenario& scenario, std::string_view key, std::string_view value) {
    key = trim(key);
    const Field* f = find_field(key);
    if (!f) throw ConfigError(std::string(key), "unknown key");
    f->set(scenario, key, trim(value));
}

void apply_override(Scenario& scenario, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos)
        throw ConfigError(std::string(trim(assignment)), "override must look like key=value");
    apply_setting(scenario, assignment.substr(0, eq), assignment.substr(eq + 1));
}

Scenario parse_scenario(std::string_view text, const std::string& origin) {
    Scenario s;
    bool seen_seed = false;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t nl = text.find('\n', start);
        std::string_view line =
            text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        ++line_no;
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(origin + ":" + std::to_string(line_no), "expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        apply_setting(s, key, line.substr(eq + 1));
        if (key == "seed") seen_seed = true;
    }
    if (!seen_seed)
        throw ConfigError("seed", "missing; every scenario must pin its seed");
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open scenario file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path.string());
}

std::string format_scenario(const Scenario& scenario) {
    std::string out;
    for (const auto& f : fields()) {
        out += f.key;
        out += " = ";
        out += f.get(scenario);
        out += '\n';
    }
    return out;
}

}  // namespace psewer

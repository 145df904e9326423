#include <lwi/config.hpp>
#include <lwi/format.hpp>
#include <lwi/presets.hpp>

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>

namespace lwi {

namespace {

struct Value
{
    std::string text;               ///< scalar text, or items joined by ','
    bool is_null = false;
    std::vector<std::string> items; ///< sequence items when the value is a list
    std::string where;              ///< source:line for messages
};

struct Binding
{
    std::string key;
    std::function<void(RunConfig&, const Value&)> set;
    std::function<void(const RunConfig&, YAML::Emitter&)> emit;
};

[[noreturn]] void fail(const Value& v, const std::string& key, const std::string& what)
{
    throw ConfigError(v.where + ": " + key + ": " + what);
}

double as_number(const Value& v, const std::string& key)
{
    if (v.is_null || !v.items.empty())
        fail(v, key, "expected a number");
    try {
        return parse_double(v.text);
    } catch (const std::invalid_argument&) {
        fail(v, key, "expected a number, got '" + v.text + "'");
    }
}

std::size_t as_count(const Value& v, const std::string& key)
{
    std::size_t n = 0;
    const auto* end = v.text.data() + v.text.size();
    const auto [ptr, ec] = std::from_chars(v.text.data(), end, n);
    if (v.is_null || ec != std::errc() || ptr != end)
        fail(v, key, "expected a non-negative integer, got '" + v.text + "'");
    return n;
}

std::string as_text(const Value& v, const std::string& key)
{
    if (v.is_null || !v.items.empty())
        fail(v, key, "expected a string");
    return v.text;
}

template <class F>
auto converted(const Value& v, const std::string& key, F&& convert)
{
    try {
        return convert(as_text(v, key));
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& ex) {
        fail(v, key, ex.what());
    }
}

void emit_number(YAML::Emitter& out, double x) { out << format_double(x); }

Binding number(std::string key, double RunConfig::*group_free)
{
    return {key,
            [group_free, key](RunConfig& c, const Value& v) { c.*group_free = as_number(v, key); },
            [group_free](const RunConfig& c, YAML::Emitter& out) {
                emit_number(out, c.*group_free);
            }};
}

template <class Group>
Binding number(std::string key, Group RunConfig::*group, double Group::*field)
{
    return {key,
            [group, field, key](RunConfig& c, const Value& v) {
                (c.*group).*field = as_number(v, key);
            },
            [group, field](const RunConfig& c, YAML::Emitter& out) {
                emit_number(out, (c.*group).*field);
            }};
}

template <class Group>
Binding count(std::string key, Group RunConfig::*group, std::size_t Group::*field)
{
    return {key,
            [group, field, key](RunConfig& c, const Value& v) {
                (c.*group).*field = as_count(v, key);
            },
            [group, field](const RunConfig& c, YAML::Emitter& out) {
                out << std::to_string((c.*group).*field);
            }};
}

template <class Group>
Binding spacing(std::string key, Group RunConfig::*group, Spacing Group::*field)
{
    return {key,
            [group, field, key](RunConfig& c, const Value& v) {
                (c.*group).*field = converted(v, key, spacing_from_string);
            },
            [group, field](const RunConfig& c, YAML::Emitter& out) {
                out << to_string((c.*group).*field);
            }};
}

const std::vector<Binding>& bindings()
{
    static const std::vector<Binding> all = [] {
        std::vector<Binding> b;
        b.push_back({"scenario",
                     [](RunConfig& c, const Value& v) {
                         c.scenario = converted(v, "scenario", scenario_from_string);
                     },
                     [](const RunConfig& c, YAML::Emitter& out) { out << to_string(c.scenario); }});

        b.push_back(number("rates.gamma_a", &RunConfig::rates, &RateSet::gamma_a));
        b.push_back(number("rates.gamma_b", &RunConfig::rates, &RateSet::gamma_b));
        b.push_back(number("rates.gamma_c", &RunConfig::rates, &RateSet::gamma_c));
        b.push_back(number("rates.gamma_bc", &RunConfig::rates, &RateSet::gamma_bc));
        b.push_back(number("rates.gamma_ba", &RunConfig::rates, &RateSet::gamma_ba));
        b.push_back(number("rates.gamma_ac", &RunConfig::rates, &RateSet::gamma_ac));
        b.push_back(number("rates.f", &RunConfig::rates, &RateSet::f));

        b.push_back(number("drive.omega", &RunConfig::drive, &DriveConfig::omega));
        b.push_back(number("drive.a", &RunConfig::drive, &DriveConfig::a));
        b.push_back(number("drive.g", &RunConfig::drive, &DriveConfig::g));
        b.push_back(number("drive.collective_coupling", &RunConfig::drive,
                           &DriveConfig::collective_coupling));

        b.push_back(number("pump.calibration", &RunConfig::calibration));

        b.push_back(number("cavity.round_trip_length", &RunConfig::cavity,
                           &CavitySpec::round_trip_length));
        b.push_back(number("cavity.transmissivity_m1", &RunConfig::cavity,
                           &CavitySpec::transmissivity_m1));
        b.push_back(number("cavity.transmissivity_m2", &RunConfig::cavity,
                           &CavitySpec::transmissivity_m2));
        b.push_back(number("cavity.linewidth_fwhm", &RunConfig::cavity,
                           &CavitySpec::linewidth_fwhm));
        b.push_back({"cavity.amplitude_decay",
                     [](RunConfig& c, const Value& v) {
                         if (v.is_null || v.text == "auto")
                             c.cavity.amplitude_decay.reset();
                         else
                             c.cavity.amplitude_decay = as_number(v, "cavity.amplitude_decay");
                     },
                     [](const RunConfig& c, YAML::Emitter& out) {
                         if (c.cavity.amplitude_decay)
                             emit_number(out, *c.cavity.amplitude_decay);
                         else
                             out << "auto";
                     }});

        b.push_back(number("vapor.temperature", &RunConfig::vapor, &VaporSettings::temperature));
        b.push_back(number("vapor.reference_temperature", &RunConfig::vapor,
                           &VaporSettings::reference_temperature));
        b.push_back(number("vapor.cell_length", &RunConfig::vapor, &VaporSettings::cell_length));
        b.push_back(number("vapor.refractive_index", &RunConfig::vapor,
                           &VaporSettings::refractive_index));
        b.push_back(number("vapor.natural_linewidth", &RunConfig::vapor,
                           &VaporSettings::natural_linewidth));

        b.push_back(number("collision.cross_section", &RunConfig::collision,
                           &CollisionModel::cross_section));
        b.push_back({"collision.velocity_convention",
                     [](RunConfig& c, const Value& v) {
                         c.collision.velocity_convention = converted(
                             v, "collision.velocity_convention", velocity_convention_from_string);
                     },
                     [](const RunConfig& c, YAML::Emitter& out) {
                         out << to_string(c.collision.velocity_convention);
                     }});

        b.push_back({"model.saturation",
                     [](RunConfig& c, const Value& v) {
                         c.saturation =
                             converted(v, "model.saturation", saturation_model_from_string);
                     },
                     [](const RunConfig& c, YAML::Emitter& out) { out << to_string(c.saturation); }});

        b.push_back({"sweep.parameter",
                     [](RunConfig& c, const Value& v) {
                         c.sweep.parameter = as_text(v, "sweep.parameter");
                     },
                     [](const RunConfig& c, YAML::Emitter& out) { out << c.sweep.parameter; }});
        b.push_back(number("sweep.min", &RunConfig::sweep, &SweepSpec::min));
        b.push_back(number("sweep.max", &RunConfig::sweep, &SweepSpec::max));
        b.push_back(count("sweep.points", &RunConfig::sweep, &SweepSpec::points));
        b.push_back(spacing("sweep.spacing", &RunConfig::sweep, &SweepSpec::spacing));

        b.push_back(number("gain_map.density_min", &RunConfig::gain_map,
                           &GainMapAxis::density_min));
        b.push_back(number("gain_map.density_max", &RunConfig::gain_map,
                           &GainMapAxis::density_max));
        b.push_back(count("gain_map.density_points", &RunConfig::gain_map,
                          &GainMapAxis::density_points));
        b.push_back(spacing("gain_map.density_spacing", &RunConfig::gain_map,
                            &GainMapAxis::density_spacing));

        b.push_back(number("transient.t_final", &RunConfig::transient, &TransientSpec::t_final));
        b.push_back(number("transient.sample_interval", &RunConfig::transient,
                           &TransientSpec::sample_interval));
        b.push_back(number("transient.rel_tol", &RunConfig::transient, &TransientSpec::rel_tol));
        b.push_back(number("transient.abs_tol", &RunConfig::transient, &TransientSpec::abs_tol));

        b.push_back({"output.directory",
                     [](RunConfig& c, const Value& v) {
                         c.output.directory = as_text(v, "output.directory");
                     },
                     [](const RunConfig& c, YAML::Emitter& out) { out << c.output.directory; }});
        b.push_back({"output.formats",
                     [](RunConfig& c, const Value& v) {
                         if (v.is_null)
                             fail(v, "output.formats", "expected a list of formats");
                         std::vector<std::string> formats = v.items;
                         if (formats.empty()) {
                             std::stringstream ss(v.text);
                             for (std::string item; std::getline(ss, item, ',');)
                                 formats.push_back(item);
                         }
                         c.output.formats = formats;
                     },
                     [](const RunConfig& c, YAML::Emitter& out) {
                         out << YAML::Flow << c.output.formats;
                     }});

        for (const auto& key : Constants::keys()) {
            b.push_back({"constants." + key,
                         [key](RunConfig& c, const Value& v) {
                             c.constants.set(key, as_number(v, "constants." + key));
                         },
                         [key](const RunConfig& c, YAML::Emitter& out) {
                             emit_number(out, c.constants.get(key));
                         }});
        }
        return b;
    }();
    return all;
}

const Binding* find_binding(const std::string& key)
{
    for (const auto& b : bindings()) {
        if (b.key == key)
            return &b;
    }
    return nullptr;
}

std::string location(const std::string& source, const YAML::Node& node)
{
    const auto mark = node.Mark();
    if (mark.line < 0)
        return source;
    return source + ":" + std::to_string(mark.line + 1);
}

Value to_value(const YAML::Node& node, const std::string& where, const std::string& key)
{
    Value v;
    v.where = where;
    if (node.IsNull()) {
        v.is_null = true;
    } else if (node.IsScalar()) {
        v.text = node.Scalar();
    } else if (node.IsSequence()) {
        for (const auto& item : node) {
            if (!item.IsScalar())
                throw ConfigError(where + ": " + key + ": list items must be scalars");
            v.items.push_back(item.Scalar());
        }
    } else {
        throw ConfigError(where + ": " + key + ": unexpected value");
    }
    return v;
}

using Entries = std::vector<std::pair<std::string, Value>>;

void flatten(const YAML::Node& node, const std::string& prefix, const std::string& source,
             Entries& out)
{
    for (const auto& kv : node) {
        const std::string name = kv.first.as<std::string>();
        const std::string key = prefix.empty() ? name : prefix + "." + name;
        const std::string where = location(source, kv.first);
        if (kv.second.IsMap()) {
            flatten(kv.second, key, source, out);
        } else {
            if (!find_binding(key))
                throw ConfigError(where + ": unknown key '" + key + "'");
            out.emplace_back(key, to_value(kv.second, where, key));
        }
    }
}

Entries read_document(const ConfigSource& src)
{
    YAML::Node root;
    try {
        root = YAML::Load(src.text);
    } catch (const YAML::ParserException& ex) {
        throw ConfigError(src.name + ":" + std::to_string(ex.mark.line + 1) + ": "
                          + ex.msg);
    }
    Entries out;
    if (root.IsNull())
        return out;
    if (!root.IsMap())
        throw ConfigError(src.name + ": top level must be a mapping");
    flatten(root, "", src.name, out);
    return out;
}

Entries read_assignment(const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("--set " + assignment + ": expected key=value");
    const std::string key = assignment.substr(0, eq);
    const std::string where = "--set " + key;
    if (!find_binding(key))
        throw ConfigError(where + ": unknown key '" + key + "'");
    YAML::Node node;
    try {
        node = YAML::Load(assignment.substr(eq + 1));
    } catch (const YAML::ParserException& ex) {
        throw ConfigError(where + ": " + ex.msg);
    }
    Entries out;
    out.emplace_back(key, to_value(node, where, key));
    return out;
}

void apply_entries(RunConfig& config, const Entries& entries)
{
    for (const auto& [key, value] : entries)
        find_binding(key)->set(config, value);
}

std::optional<Scenario> scenario_in(const Entries& entries)
{
    std::optional<Scenario> s;
    RunConfig scratch;
    for (const auto& [key, value] : entries) {
        if (key == "scenario") {
            find_binding(key)->set(scratch, value);
            s = scratch.scenario;
        }
    }
    return s;
}

bool allowed_sweep_parameter(Scenario s, const std::string& p)
{
    switch (s) {
    case Scenario::fig3_pump_sweep:
        return p == "pump_power";
    case Scenario::fig4_density_sweep:
        return p == "temperature" || p == "density";
    case Scenario::gain_map:
        return p == "omega";
    case Scenario::single_point:
    case Scenario::transient:
        return true;
    }
    return false;
}

bool uses_sweep(Scenario s)
{
    return s == Scenario::fig3_pump_sweep || s == Scenario::fig4_density_sweep
           || s == Scenario::gain_map;
}

} // namespace

std::string to_string(Scenario s)
{
    switch (s) {
    case Scenario::fig3_pump_sweep:
        return "fig3-pump-sweep";
    case Scenario::fig4_density_sweep:
        return "fig4-density-sweep";
    case Scenario::gain_map:
        return "gain-map";
    case Scenario::single_point:
        return "single-point";
    case Scenario::transient:
        return "transient";
    }
    return "unknown";
}

Scenario scenario_from_string(const std::string& s)
{
    for (Scenario candidate : all_scenarios()) {
        if (to_string(candidate) == s)
            return candidate;
    }
    throw ConfigError("unknown scenario '" + s + "'");
}

const std::vector<Scenario>& all_scenarios()
{
    static const std::vector<Scenario> all{Scenario::fig3_pump_sweep,
                                           Scenario::fig4_density_sweep, Scenario::gain_map,
                                           Scenario::single_point, Scenario::transient};
    return all;
}

std::vector<std::string> config_keys()
{
    std::vector<std::string> keys;
    for (const auto& b : bindings())
        keys.push_back(b.key);
    return keys;
}

RunConfig resolve_config(std::optional<Scenario> scenario,
                         const std::vector<ConfigSource>& documents,
                         const std::vector<std::string>& assignments,
                         const Constants& base_constants)
{
    std::vector<Entries> layers;
    for (const auto& doc : documents)
        layers.push_back(read_document(doc));
    for (const auto& a : assignments)
        layers.push_back(read_assignment(a));

    for (const auto& layer : layers) {
        const auto named = scenario_in(layer);
        if (!named)
            continue;
        if (scenario && *scenario != *named) {
            throw ConfigError("scenario '" + to_string(*named)
                              + "' in the configuration conflicts with '"
                              + to_string(*scenario) + "'");
        }
        scenario = named;
    }
    if (!scenario)
        throw ConfigError("no scenario given");

    RunConfig config;
    config.constants = base_constants;
    apply_entries(config, read_document({"preset " + to_string(*scenario), preset_text(*scenario)}));
    for (const auto& layer : layers)
        apply_entries(config, layer);
    validate_config(config);
    return config;
}

RunConfig parse_config(const std::string& text, const std::string& source_name,
                       const Constants& base_constants)
{
    return resolve_config(std::nullopt, {{source_name, text}}, {}, base_constants);
}

std::string emit_config(const RunConfig& config)
{
    YAML::Emitter out;
    out << YAML::BeginMap;
    std::vector<std::string> open;
    for (const auto& b : bindings()) {
        std::vector<std::string> parts;
        std::stringstream ss(b.key);
        for (std::string p; std::getline(ss, p, '.');)
            parts.push_back(p);
        const std::vector<std::string> groups(parts.begin(), parts.end() - 1);

        std::size_t common = 0;
        while (common < open.size() && common < groups.size() && open[common] == groups[common])
            ++common;
        while (open.size() > common) {
            out << YAML::EndMap;
            open.pop_back();
        }
        for (std::size_t k = common; k < groups.size(); ++k) {
            out << YAML::Key << groups[k] << YAML::Value << YAML::BeginMap;
            open.push_back(groups[k]);
        }
        out << YAML::Key << parts.back() << YAML::Value;
        b.emit(config, out);
    }
    while (!open.empty()) {
        out << YAML::EndMap;
        open.pop_back();
    }
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

void validate_config(const RunConfig& c)
{
    std::vector<std::string> problems;
    auto check = [&](bool ok, const std::string& what) {
        if (!ok)
            problems.push_back(what);
    };

    const auto issues = validate_rates(c.rates);
    if (!issues.empty())
        problems.push_back(describe(issues));

    check(c.drive.omega >= 0.0 && std::isfinite(c.drive.omega), "drive.omega must be >= 0");
    check(c.drive.a >= 0.0 && std::isfinite(c.drive.a), "drive.a must be >= 0");
    check(c.drive.g > 0.0 && std::isfinite(c.drive.g), "drive.g must be > 0");
    check(c.drive.collective_coupling > 0.0 && std::isfinite(c.drive.collective_coupling),
          "drive.collective_coupling must be > 0");
    check(c.calibration > 0.0 && std::isfinite(c.calibration), "pump.calibration must be > 0");

    try {
        const auto figures = cavity_derived(c.cavity, c.constants);
        check(figures.amplitude_decay > 0.0, "cavity.amplitude_decay must be > 0");
    } catch (const std::invalid_argument& ex) {
        problems.push_back(std::string("cavity: ") + ex.what());
    }

    check(c.vapor.temperature > 0.0, "vapor.temperature must be > 0");
    check(c.vapor.cell_length > 0.0, "vapor.cell_length must be > 0");
    check(c.vapor.refractive_index >= 1.0, "vapor.refractive_index must be >= 1");
    check(c.vapor.natural_linewidth > 0.0, "vapor.natural_linewidth must be > 0");
    auto in_window = [&](double t) {
        return t > c.constants.vapor_pressure_t_min && t < c.constants.vapor_pressure_t_max;
    };
    check(in_window(c.vapor.temperature),
          "vapor.temperature must lie inside the vapor-pressure window");
    check(in_window(c.vapor.reference_temperature),
          "vapor.reference_temperature must lie inside the vapor-pressure window");

    try {
        check_cross_section(c.collision.cross_section);
    } catch (const std::invalid_argument& ex) {
        problems.push_back(std::string("collision.cross_section: ") + ex.what());
    }

    if (uses_sweep(c.scenario)) {
        const auto& s = c.sweep;
        check(allowed_sweep_parameter(c.scenario, s.parameter),
              "sweep.parameter '" + s.parameter + "' is not available for "
                  + to_string(c.scenario));
        check(s.points >= 2, "sweep.points must be >= 2");
        check(s.min < s.max, "sweep.min must be below sweep.max");
        check(std::isfinite(s.min) && std::isfinite(s.max), "sweep bounds must be finite");
        check(s.spacing != Spacing::log || s.min > 0.0, "log sweep needs sweep.min > 0");
        if (s.parameter == "pump_power")
            check(s.min >= 0.0, "pump power must be >= 0");
        if (s.parameter == "omega")
            check(s.min >= 0.0, "omega must be >= 0");
        if (s.parameter == "density")
            check(s.min > 0.0, "density must be > 0");
        if (s.parameter == "temperature")
            check(in_window(s.min) && in_window(s.max),
                  "sweep temperatures must lie inside the vapor-pressure window");
    }
    if (c.scenario == Scenario::gain_map) {
        const auto& g = c.gain_map;
        check(g.density_points >= 2, "gain_map.density_points must be >= 2");
        check(g.density_min > 0.0 && g.density_min < g.density_max,
              "gain_map density range must be positive and increasing");
    }
    if (c.scenario == Scenario::transient) {
        check(c.transient.t_final > 0.0, "transient.t_final must be > 0");
        check(c.transient.sample_interval >= 0.0, "transient.sample_interval must be >= 0");
        check(c.transient.rel_tol > 0.0 && c.transient.abs_tol > 0.0,
              "transient tolerances must be > 0");
    }

    const bool plots = c.scenario != Scenario::single_point && c.scenario != Scenario::gain_map;
    for (const auto& f : c.output.formats) {
        if (f != "csv" && f != "json" && f != "svg")
            problems.push_back("output.formats: unknown format '" + f + "'");
        else if (f == "svg" && !plots)
            problems.push_back("output.formats: svg is not available for "
                               + to_string(c.scenario));
    }
    check(!c.output.formats.empty(), "output.formats must not be empty");
    check(!c.output.directory.empty(), "output.directory must not be empty");

    if (!problems.empty()) {
        std::string msg = problems.front();
        for (std::size_t k = 1; k < problems.size(); ++k)
            msg += "; " + problems[k];
        throw ConfigError(msg);
    }
}

VaporConditions vapor_conditions(const RunConfig& config)
{
    return vapor_conditions(config, config.vapor.temperature);
}

VaporConditions vapor_conditions(const RunConfig& config, double temperature)
{
    auto cond = rb87_d1_conditions(temperature, config.constants);
    cond.cell_length = config.vapor.cell_length;
    cond.refractive_index = config.vapor.refractive_index;
    cond.natural_linewidth = config.vapor.natural_linewidth;
    return cond;
}

double amplitude_decay(const RunConfig& config)
{
    return cavity_derived(config.cavity, config.constants).amplitude_decay;
}

} // namespace lwi

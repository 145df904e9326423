#include <lwi/config.hpp>
#include <lwi/presets.hpp>
#include <lwi/scenario.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw lwi::ConfigError(path + ": cannot read file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split_formats(const std::string& list)
{
    std::vector<std::string> out;
    std::stringstream ss(list);
    for (std::string item; std::getline(ss, item, ',');) {
        if (!item.empty())
            out.push_back(item);
    }
    return out;
}

struct Overrides
{
    std::vector<std::string> config_files;
    std::vector<std::string> sets;
    std::vector<std::string> constants;
    std::string out_dir;
    std::string formats;
};

void add_override_options(CLI::App* cmd, Overrides& o)
{
    cmd->add_option("--set", o.sets, "Override a config value, key=value (dotted key)");
    cmd->add_option("--constant", o.constants,
                    "Override a physical constant, key=value (e.g. rb87.mass=1.44e-25)");
}

lwi::RunConfig resolve(std::optional<lwi::Scenario> scenario, const Overrides& o)
{
    std::vector<lwi::ConfigSource> docs;
    for (const auto& path : o.config_files)
        docs.push_back({path, read_file(path)});
    auto assignments = o.sets;
    for (const auto& c : o.constants)
        assignments.push_back("constants." + c);

    lwi::Constants base;
    try {
        base = lwi::constants_from_environment();
    } catch (const std::exception& ex) {
        throw lwi::ConfigError(ex.what());
    }
    auto config = lwi::resolve_config(scenario, docs, assignments, base);
    if (!o.out_dir.empty())
        config.output.directory = o.out_dir;
    if (!o.formats.empty())
        config.output.formats = split_formats(o.formats);
    lwi::validate_config(config);
    return config;
}

int report_failure()
{
    const auto rec = lwi::classify_error(std::current_exception());
    std::cerr << lwi::to_json(rec) << '\n';
    return rec.exit_code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Three-level lambda lasing-without-inversion simulator"};
    app.require_subcommand(1);

    Overrides run_opts;
    std::string scenario_name;
    auto* run = app.add_subcommand("run", "Run a scenario and write its outputs");
    run->add_option("scenario", scenario_name, "Scenario name (see `presets list`)")->required();
    run->add_option("--config", run_opts.config_files, "YAML file overlaid on the preset");
    run->add_option("--out", run_opts.out_dir, "Output directory");
    run->add_option("--format", run_opts.formats, "Comma-separated subset of csv,json,svg");
    add_override_options(run, run_opts);

    Overrides validate_opts;
    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Check a config file and print it resolved");
    validate->add_option("config", validate_path, "YAML config naming its scenario")->required();
    add_override_options(validate, validate_opts);

    auto* presets = app.add_subcommand("presets", "Inspect scenario presets");
    presets->require_subcommand(1);
    auto* list = presets->add_subcommand("list", "List scenarios");
    std::string show_name;
    auto* show = presets->add_subcommand("show", "Print a preset with its comments");
    show->add_option("scenario", show_name)->required();
    auto* keys = app.add_subcommand("keys", "List every config key");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            const auto config = resolve(lwi::scenario_from_string(scenario_name), run_opts);
            return lwi::run_scenario(config, std::cout, std::cerr);
        }
        if (*validate) {
            validate_opts.config_files = {validate_path};
            const auto config = resolve(std::nullopt, validate_opts);
            std::cout << lwi::emit_config(config);
            return lwi::exit_ok;
        }
        if (*list) {
            for (auto s : lwi::all_scenarios())
                std::cout << lwi::to_string(s) << "  " << lwi::preset_summary(s) << '\n';
            return lwi::exit_ok;
        }
        if (*show) {
            std::cout << lwi::preset_text(lwi::scenario_from_string(show_name));
            return lwi::exit_ok;
        }
        if (*keys) {
            for (const auto& k : lwi::config_keys())
                std::cout << k << '\n';
            return lwi::exit_ok;
        }
    } catch (...) {
        return report_failure();
    }
    return lwi::exit_ok;
}

#include <lwi/format.hpp>
#include <lwi/gain.hpp>
#include <lwi/scenario.hpp>
#include <lwi/steady_state.hpp>
#include <lwi/svg.hpp>

#include <json.hpp>

#include <ostream>
#include <sstream>

namespace lwi {

namespace {

bool wants(const RunConfig& config, const std::string& format)
{
    for (const auto& f : config.output.formats) {
        if (f == format)
            return true;
    }
    return false;
}

std::string base_name(const RunConfig& config) { return to_string(config.scenario); }

void emit_sweep(const RunConfig& config, const SweepResult& sweep, ScenarioOutput& out,
                const std::string& x_label, const std::string& x_unit)
{
    const auto name = base_name(config);
    if (wants(config, "csv")) {
        std::ostringstream csv;
        write_sweep_csv(csv, sweep);
        out.files.push_back({name + ".csv", csv.str()});
    }
    if (wants(config, "json"))
        out.files.push_back({name + ".json", sweep_json(sweep, name)});
    if (wants(config, "svg")) {
        out.files.push_back(
            {name + ".svg", render_svg(sweep_plot(sweep, name, x_label, x_unit))});
    }

    std::size_t lasing = 0;
    for (const auto& r : sweep.rows)
        lasing += r.intensity > 0.0 ? 1 : 0;
    out.summary = std::to_string(sweep.rows.size()) + " sweep points, "
                  + std::to_string(lasing) + " above threshold";
}

void emit_report(const RunConfig& config, const Report& report, ScenarioOutput& out)
{
    const auto name = base_name(config);
    if (wants(config, "csv")) {
        std::ostringstream csv;
        write_report_csv(csv, report);
        out.files.push_back({name + ".csv", csv.str()});
    }
    if (wants(config, "json"))
        out.files.push_back({name + ".json", report_json(report, name)});
    out.summary = "linear gain " + format_double(report.at("linear_gain_mhz").number)
                  + " MHz, inversion " + format_double(report.at("inversion").number);
}

void emit_gain_map(const RunConfig& config, ScenarioOutput& out)
{
    const auto omegas = sweep_grid(config);
    const auto& axis = config.gain_map;
    const auto densities =
        make_grid(axis.density_min, axis.density_max, axis.density_points, axis.density_spacing);
    const auto tmpl = density_template(config);

    std::ostringstream csv;
    csv << "omega_mhz,density_m3,collective_coupling_mhz,linear_gain_mhz,leg_class\n";
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    std::size_t positive = 0;
    for (double n : densities) {
        const auto p = tmpl.at(n);
        const auto leg = to_string(classify_legs(p.rates));
        for (double omega : omegas) {
            DriveConfig drive = config.drive;
            drive.omega = omega;
            drive.collective_coupling = p.collective_coupling;
            const double gain = linear_gain_closed(p.rates, drive).value;
            positive += gain > 0.0 ? 1 : 0;
            csv << format_double(omega) << ',' << format_double(n) << ','
                << format_double(p.collective_coupling) << ',' << format_double(gain) << ','
                << leg << '\n';
            nlohmann::ordered_json row;
            row["omega_mhz"] = omega;
            row["density_m3"] = n;
            row["collective_coupling_mhz"] = p.collective_coupling;
            row["linear_gain_mhz"] = gain;
            row["leg_class"] = leg;
            rows.push_back(std::move(row));
        }
    }
    const auto name = base_name(config);
    if (wants(config, "csv"))
        out.files.push_back({name + ".csv", csv.str()});
    if (wants(config, "json")) {
        nlohmann::ordered_json doc;
        doc["scenario"] = name;
        doc["rows"] = std::move(rows);
        out.files.push_back({name + ".json", doc.dump(2) + "\n"});
    }
    out.summary = std::to_string(omegas.size() * densities.size()) + " grid points, "
                  + std::to_string(positive) + " with positive gain";
}

void emit_transient(const RunConfig& config, ScenarioOutput& out)
{
    StepControl control;
    control.rel_tol = config.transient.rel_tol;
    control.abs_tol = config.transient.abs_tol;
    control.sample_interval = config.transient.sample_interval;
    const auto trajectory = integrate_transient(config.rates, config.drive,
                                                unpumped_equilibrium(config.rates),
                                                config.transient.t_final, control);
    const auto name = base_name(config);
    if (wants(config, "csv")) {
        std::ostringstream csv;
        write_trajectory_csv(csv, trajectory);
        out.files.push_back({name + ".csv", csv.str()});
    }
    if (wants(config, "json"))
        out.files.push_back({name + ".json", trajectory_json(trajectory)});
    if (wants(config, "svg"))
        out.files.push_back({name + ".svg", render_svg(trajectory_plot(trajectory, name))});
    out.summary = std::to_string(trajectory.points.size()) + " samples, final residual "
                  + format_double(trajectory.final_residual) + " MHz";
}

} // namespace

DensityTemplate density_template(const RunConfig& config)
{
    DensityTemplate tmpl;
    tmpl.reference_density = vapor_density(config.vapor.reference_temperature, config.constants);
    tmpl.reference_rates = config.rates;
    tmpl.reference_coupling = config.drive.collective_coupling;
    return tmpl;
}

PumpSweep pump_sweep_setup(const RunConfig& config)
{
    PumpSweep setup;
    setup.rates = config.rates;
    setup.collective_coupling = config.drive.collective_coupling;
    setup.g = config.drive.g;
    setup.amplitude_decay = amplitude_decay(config);
    setup.calibration = config.calibration;
    setup.model = config.saturation;
    return setup;
}

DensitySweep density_sweep_setup(const RunConfig& config)
{
    DensitySweep setup;
    setup.density_template = density_template(config);
    setup.omega = config.drive.omega;
    setup.g = config.drive.g;
    setup.amplitude_decay = amplitude_decay(config);
    setup.model = config.saturation;
    setup.optical_depth_of = [config](double n) {
        const double t = temperature_for_density(n, config.constants);
        const auto cond = vapor_conditions(config, t);
        return optical_depth(cond, n, doppler_fwhm(cond, config.constants));
    };
    return setup;
}

std::vector<double> sweep_grid(const RunConfig& config)
{
    const auto& s = config.sweep;
    return make_grid(s.min, s.max, s.points, s.spacing);
}

SweepResult run_sweep(const RunConfig& config)
{
    const auto grid = sweep_grid(config);
    if (config.scenario == Scenario::fig3_pump_sweep)
        return sweep_pump(pump_sweep_setup(config), grid);
    if (config.scenario == Scenario::fig4_density_sweep) {
        std::vector<double> densities = grid;
        if (config.sweep.parameter == "temperature") {
            for (auto& v : densities)
                v = vapor_density(v, config.constants);
        }
        return sweep_density(density_sweep_setup(config), densities);
    }
    throw std::invalid_argument("scenario " + to_string(config.scenario) + " is not a sweep");
}

Report single_point_report(const RunConfig& config)
{
    const auto& rates = config.rates;
    const auto& drive = config.drive;
    const double loss = amplitude_decay(config);
    const auto figures = cavity_derived(config.cavity, config.constants);
    const auto gain = linear_gain_closed(rates, drive);
    const auto state = linear_steady_state(rates, drive);
    const auto lasing = steady_intensity(rates, drive, loss, config.saturation);

    const auto cond = vapor_conditions(config);
    const double density = vapor_density(cond.temperature, config.constants);
    const double doppler = doppler_fwhm(cond, config.constants);

    Report r;
    r.add("omega_mhz", drive.omega);
    r.add("cavity_amplitude_a", drive.a);
    r.add("linear_gain_mhz", gain.value);
    r.add("linear_gain_numeric_mhz", linear_gain_numeric(rates, drive));
    if (drive.omega > 0.0)
        r.add("rough_gain_mhz", rough_gain(rates, drive));
    r.add("gain_numerator", gain.numerator);
    r.add("gain_denominator", gain.denominator);
    r.add("gain_omega2_coefficient", gain.omega2_coefficient);
    r.add("inversion", inversion_closed(rates, drive.omega));
    r.add("leg_class", to_string(classify_legs(rates)));
    r.add("rho_aa", state.rho_aa);
    r.add("rho_bb", state.rho_bb);
    r.add("rho_cc", rho_cc(state));
    r.add("i_rho_ab", state.i_rho_ab);
    r.add("rho_cb", state.rho_cb);
    r.add("i_rho_ca", state.i_rho_ca);
    r.add("steady_state_residual_mhz", residual_norm(state, rates, drive));
    r.add("free_spectral_range_mhz", figures.free_spectral_range);
    r.add("finesse", figures.finesse);
    r.add("amplitude_decay_mhz", loss);
    r.add("lasing_branch", to_string(lasing.branch));
    r.add("steady_intensity", lasing.intensity);
    r.add("temperature_k", cond.temperature);
    r.add("vapor_density_m3", density);
    r.add("doppler_fwhm_mhz", doppler);
    r.add("optical_depth", optical_depth(cond, density, doppler));
    r.add("thermal_velocity_m_s",
          thermal_velocity(cond.temperature, cond.atomic_mass,
                           config.collision.velocity_convention, config.constants));
    r.add("collision_rate_mhz", collision_rate(density, config.collision, cond.temperature,
                                               cond.atomic_mass, config.constants));
    return r;
}

ScenarioOutput compute_scenario(const RunConfig& config)
{
    ScenarioOutput out;
    switch (config.scenario) {
    case Scenario::fig3_pump_sweep:
        emit_sweep(config, run_sweep(config), out, "pump power", "mW");
        break;
    case Scenario::fig4_density_sweep:
        emit_sweep(config, run_sweep(config), out, "atomic density", "m^-3");
        break;
    case Scenario::gain_map:
        emit_gain_map(config, out);
        break;
    case Scenario::single_point:
        emit_report(config, single_point_report(config), out);
        break;
    case Scenario::transient:
        emit_transient(config, out);
        break;
    }
    out.files.push_back({"resolved-config.yaml", emit_config(config)});
    return out;
}

std::vector<std::filesystem::path> write_outputs(const std::filesystem::path& directory,
                                                 const ScenarioOutput& output)
{
    std::filesystem::create_directories(directory);
    std::vector<std::filesystem::path> written;
    for (const auto& f : output.files) {
        const auto path = directory / f.name;
        write_file_atomic(path, f.content);
        written.push_back(path);
    }
    return written;
}

ErrorRecord classify_error(std::exception_ptr error)
{
    ErrorRecord rec;
    try {
        std::rethrow_exception(error);
    } catch (const ConfigError& ex) {
        rec = {exit_config_error, "config", "ConfigError", ex.what()};
    } catch (const std::invalid_argument& ex) {
        rec = {exit_config_error, "config", "invalid_argument", ex.what()};
    } catch (const std::out_of_range& ex) {
        rec = {exit_config_error, "config", "out_of_range", ex.what()};
    } catch (const std::filesystem::filesystem_error& ex) {
        rec = {exit_io_error, "io", "filesystem_error", ex.what()};
    } catch (const SingularSystemError& ex) {
        rec = {exit_numerical_failure, "numerical", "SingularSystemError", ex.what()};
    } catch (const StepUnderflowError& ex) {
        rec = {exit_numerical_failure, "numerical", "StepUnderflowError", ex.what()};
    } catch (const GainExtractionError& ex) {
        rec = {exit_numerical_failure, "numerical", "GainExtractionError", ex.what()};
    } catch (const BracketingError& ex) {
        rec = {exit_numerical_failure, "numerical", "BracketingError", ex.what()};
    } catch (const std::exception& ex) {
        rec = {exit_numerical_failure, "numerical", "exception", ex.what()};
    } catch (...) {
        rec = {exit_numerical_failure, "numerical", "unknown", "unknown failure"};
    }
    return rec;
}

std::string to_json(const ErrorRecord& record)
{
    nlohmann::ordered_json doc;
    doc["status"] = "error";
    doc["exit_code"] = record.exit_code;
    doc["kind"] = record.kind;
    doc["type"] = record.type;
    doc["message"] = record.message;
    return doc.dump();
}

int run_scenario(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    const std::filesystem::path dir = config.output.directory;
    try {
        const auto result = compute_scenario(config);
        for (const auto& path : write_outputs(dir, result))
            out << "wrote " << path.string() << '\n';
        out << to_string(config.scenario) << ": " << result.summary << '\n';
        return exit_ok;
    } catch (...) {
        const auto rec = classify_error(std::current_exception());
        const auto line = to_json(rec);
        err << line << '\n';
        try {
            std::filesystem::create_directories(dir);
            write_file_atomic(dir / "error.json", line + "\n");
        } catch (...) {
        }
        return rec.exit_code;
    }
}

} // namespace lwi

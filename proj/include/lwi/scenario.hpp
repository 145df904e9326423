#ifndef LWI_SCENARIO_HPP
#define LWI_SCENARIO_HPP

#include <lwi/cavity.hpp>
#include <lwi/config.hpp>
#include <lwi/output.hpp>

#include <exception>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace lwi {

enum ExitCode : int { exit_ok = 0, exit_io_error = 1, exit_config_error = 2, exit_numerical_failure = 3 };

struct OutputFile
{
    std::string name;
    std::string content;
};

/// Everything a run produces, in memory. Includes resolved-config.yaml.
struct ScenarioOutput
{
    std::vector<OutputFile> files;
    std::string summary;
};

/// Density scaling anchored at the configured reference temperature.
DensityTemplate density_template(const RunConfig& config);

PumpSweep pump_sweep_setup(const RunConfig& config);
DensitySweep density_sweep_setup(const RunConfig& config);

/// Values of the swept quantity in the units of sweep.parameter.
std::vector<double> sweep_grid(const RunConfig& config);

/// Sweep behind fig3-pump-sweep or fig4-density-sweep.
SweepResult run_sweep(const RunConfig& config);

/// Operating-point report of the single-point scenario.
Report single_point_report(const RunConfig& config);

/// Runs the scenario without touching the filesystem.
ScenarioOutput compute_scenario(const RunConfig& config);

std::vector<std::filesystem::path> write_outputs(const std::filesystem::path& directory,
                                                 const ScenarioOutput& output);

struct ErrorRecord
{
    int exit_code = exit_numerical_failure;
    std::string kind; ///< config, numerical or io
    std::string type;
    std::string message;
};

ErrorRecord classify_error(std::exception_ptr error);
std::string to_json(const ErrorRecord& record);

/**
 * Computes and writes a scenario. Progress goes to @p out; failures produce
 * a one-line JSON error record on @p err (also saved as error.json in the
 * output directory when possible). Returns the process exit code.
 */
int run_scenario(const RunConfig& config, std::ostream& out, std::ostream& err);

} // namespace lwi

#endif

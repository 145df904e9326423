#ifndef LWI_CONFIG_HPP
#define LWI_CONFIG_HPP

#include <lwi/bloch.hpp>
#include <lwi/cavity.hpp>
#include <lwi/constants.hpp>
#include <lwi/vapor.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lwi {

enum class Scenario { fig3_pump_sweep, fig4_density_sweep, gain_map, single_point, transient };

std::string to_string(Scenario s);
/// Throws ConfigError naming the unknown scenario.
Scenario scenario_from_string(const std::string& s);
const std::vector<Scenario>& all_scenarios();

/// Configuration problem: parse errors, unknown keys, invalid values.
class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct SweepSpec
{
    /// pump_power (mW), temperature (K), density (m^-3) or omega (MHz),
    /// depending on the scenario.
    std::string parameter = "pump_power";
    double min = 0.0;
    double max = 1.0;
    std::size_t points = 2;
    Spacing spacing = Spacing::linear;

    bool operator==(const SweepSpec&) const = default;
};

struct GainMapAxis
{
    double density_min = 1e18; ///< m^-3
    double density_max = 1e19; ///< m^-3
    std::size_t density_points = 2;
    Spacing density_spacing = Spacing::log;

    bool operator==(const GainMapAxis&) const = default;
};

struct VaporSettings
{
    double temperature = 363.15;           ///< K
    double reference_temperature = 363.15; ///< K, where rates and coupling are quoted
    double cell_length = 0.07;             ///< m
    double refractive_index = 1.0;
    double natural_linewidth = 5.75; ///< MHz

    bool operator==(const VaporSettings&) const = default;
};

struct TransientSpec
{
    double t_final = 100.0;        ///< model microseconds
    double sample_interval = 0.1;  ///< model microseconds
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;

    bool operator==(const TransientSpec&) const = default;
};

struct OutputSpec
{
    std::string directory = "out";
    std::vector<std::string> formats{"csv", "json"};

    bool operator==(const OutputSpec&) const = default;
};

/// Fully resolved run description: a scenario preset overlaid with user overrides.
struct RunConfig
{
    Scenario scenario = Scenario::single_point;
    RateSet rates;
    DriveConfig drive;
    double calibration = 0.0; ///< MHz/sqrt(mW)
    CavitySpec cavity;
    VaporSettings vapor;
    CollisionModel collision;
    SaturationModel saturation = SaturationModel::full_model;
    SweepSpec sweep;
    GainMapAxis gain_map;
    TransientSpec transient;
    OutputSpec output;
    Constants constants;

    bool operator==(const RunConfig&) const = default;
};

/// One YAML document contributing overrides; name is used in error messages.
struct ConfigSource
{
    std::string name;
    std::string text;
};

/**
 * Resolves a configuration. The scenario comes from @p scenario or, when
 * absent, from a `scenario` key in the documents. The scenario preset is
 * applied first, then each document in order, then the `key=value` strings
 * of @p assignments (dotted keys, values in YAML syntax). The result is
 * validated. Throws ConfigError.
 */
RunConfig resolve_config(std::optional<Scenario> scenario,
                         const std::vector<ConfigSource>& documents,
                         const std::vector<std::string>& assignments = {},
                         const Constants& base_constants = builtin_constants());

/// resolve_config on a single document that names its scenario.
RunConfig parse_config(const std::string& text, const std::string& source_name = "<config>",
                       const Constants& base_constants = builtin_constants());

/// Every value of the config as YAML; parse_config of the result reproduces it.
std::string emit_config(const RunConfig& config);

/// Throws ConfigError listing every problem found.
void validate_config(const RunConfig& config);

/// All accepted dotted keys.
std::vector<std::string> config_keys();

/// Vapor conditions at the configured temperature.
VaporConditions vapor_conditions(const RunConfig& config);
VaporConditions vapor_conditions(const RunConfig& config, double temperature);

/// Amplitude decay after applying the cavity override, MHz.
double amplitude_decay(const RunConfig& config);

} // namespace lwi

#endif

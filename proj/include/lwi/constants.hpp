#ifndef LWI_CONSTANTS_HPP
#define LWI_CONSTANTS_HPP

#include <map>
#include <string>
#include <vector>

namespace lwi {

/**
 * Physical constants and 87Rb data used by the vapor and cavity models.
 *
 * Values come from a versioned YAML table (data/constants.yaml). Entries are
 * addressed by dotted keys such as "rb87.mass".
 */
struct Constants
{
    int version = 1;

    double speed_of_light = 0.0; ///< m/s
    double boltzmann = 0.0;      ///< J/K
    double torr = 0.0;           ///< Pa

    double mass = 0.0;                 ///< kg
    double d1_wavelength = 0.0;        ///< m
    double d1_natural_linewidth = 0.0; ///< MHz

    double vapor_pressure_a = 0.0;
    double vapor_pressure_b = 0.0;
    double vapor_pressure_c = 0.0;
    double vapor_pressure_d = 0.0;
    double vapor_pressure_t_min = 0.0; ///< K
    double vapor_pressure_t_max = 0.0; ///< K

    double exchange_cross_section = 0.0;     ///< m^2
    double exchange_cross_section_min = 0.0; ///< m^2
    double exchange_cross_section_max = 0.0; ///< m^2

    /// Sets one entry by dotted key; throws std::invalid_argument on unknown keys.
    void set(const std::string& key, double value);
    double get(const std::string& key) const;

    static const std::vector<std::string>& keys();

    bool operator==(const Constants&) const = default;
};

/// Environment variable naming an alternative constants table.
inline constexpr const char* constants_env_var = "LWI_CONSTANTS";

/// The table shipped with the library (compiled in from data/constants.yaml).
const Constants& builtin_constants();

/// Parses a constants table; every known key must be present and unknown
/// keys are rejected. Throws std::runtime_error with the offending key.
Constants parse_constants(const std::string& yaml_text);

Constants load_constants(const std::string& path);

/// Table from LWI_CONSTANTS when set, otherwise the built-in table.
Constants constants_from_environment();

} // namespace lwi

#endif

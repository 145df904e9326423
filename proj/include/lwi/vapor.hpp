#ifndef LWI_VAPOR_HPP
#define LWI_VAPOR_HPP

#include <lwi/bloch.hpp>
#include <lwi/constants.hpp>

#include <string>

namespace lwi {

/// Hot-cell conditions entering the optical depth and Doppler width.
struct VaporConditions
{
    double temperature = 363.15;    ///< K
    double wavelength = 0.0;        ///< m
    double atomic_mass = 0.0;       ///< kg
    double cell_length = 0.07;      ///< m
    double refractive_index = 1.0;
    double natural_linewidth = 0.0; ///< MHz, gamma in the optical depth

    bool operator==(const VaporConditions&) const = default;
};

/// 87Rb D1 conditions at @p temperature using the given constants table.
VaporConditions rb87_d1_conditions(double temperature,
                                   const Constants& constants = builtin_constants());

enum class VelocityConvention {
    most_probable, ///< sqrt(2 kT/m)
    mean,          ///< sqrt(8 kT/(pi m))
    mean_relative  ///< sqrt(2) * mean
};

std::string to_string(VelocityConvention v);
VelocityConvention velocity_convention_from_string(const std::string& s);

struct CollisionModel
{
    double cross_section = 1e-17; ///< m^2
    VelocityConvention velocity_convention = VelocityConvention::most_probable;

    bool operator==(const CollisionModel&) const = default;
};

/// Throws std::invalid_argument unless the cross-section lies in
/// [1e-19, 1e-16] m^2, which catches cm^2/m^2 slips.
void check_cross_section(double cross_section);

/// Doppler FWHM in MHz.
double doppler_fwhm(const VaporConditions& cond,
                    const Constants& constants = builtin_constants());

/// Saturated vapor number density (m^-3) from the liquid-phase correlation.
/// Throws std::out_of_range outside the correlation's temperature window.
double vapor_density(double temperature, const Constants& constants = builtin_constants());

/// Inverse of vapor_density inside the temperature window.
double temperature_for_density(double density,
                               const Constants& constants = builtin_constants());

/// N sigma l with the Doppler-averaged resonant cross-section
/// 3 lambda^2/(8 pi n^2) * gamma/Delta_D.
double optical_depth(const VaporConditions& cond, double density, double doppler_mhz);

/// Optical depth for saturated vapor at the conditions' temperature.
double optical_depth_at(const VaporConditions& cond,
                        const Constants& constants = builtin_constants());

double thermal_velocity(double temperature, double mass, VelocityConvention convention,
                        const Constants& constants = builtin_constants());

/// Ground-state exchange rate N sigma v in MHz.
double collision_rate(double density, const CollisionModel& model, double temperature,
                      double mass, const Constants& constants = builtin_constants());

struct ScaledParameters
{
    RateSet rates;
    double collective_coupling = 0.0; ///< g sqrt(N), MHz
};

/**
 * Density scaling of the model parameters: the collisional rates gamma_b,
 * gamma_c, gamma_bc and (g sqrt N)^2 grow linearly with N; the radiative
 * rates and f are fixed.
 */
struct DensityTemplate
{
    double reference_density = 0.0; ///< m^-3
    RateSet reference_rates;
    double reference_coupling = 0.0; ///< g sqrt(N) at the reference density, MHz

    ScaledParameters at(double density) const;
};

} // namespace lwi

#endif

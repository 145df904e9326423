#include <lwi/vapor.hpp>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace lwi {

VaporConditions rb87_d1_conditions(double temperature, const Constants& constants)
{
    VaporConditions cond;
    cond.temperature = temperature;
    cond.wavelength = constants.d1_wavelength;
    cond.atomic_mass = constants.mass;
    cond.natural_linewidth = constants.d1_natural_linewidth;
    return cond;
}

std::string to_string(VelocityConvention v)
{
    switch (v) {
    case VelocityConvention::most_probable:
        return "most-probable";
    case VelocityConvention::mean:
        return "mean";
    case VelocityConvention::mean_relative:
        return "mean-relative";
    }
    return "unknown";
}

VelocityConvention velocity_convention_from_string(const std::string& s)
{
    if (s == "most-probable")
        return VelocityConvention::most_probable;
    if (s == "mean")
        return VelocityConvention::mean;
    if (s == "mean-relative")
        return VelocityConvention::mean_relative;
    throw std::invalid_argument("unknown velocity convention '" + s
                                + "' (expected most-probable, mean or mean-relative)");
}

void check_cross_section(double cross_section)
{
    if (!(cross_section >= 1e-19 && cross_section <= 1e-16)) {
        std::ostringstream msg;
        msg << "exchange cross-section " << cross_section
            << " m^2 is outside [1e-19, 1e-16] m^2; check units";
        throw std::invalid_argument(msg.str());
    }
}

double doppler_fwhm(const VaporConditions& cond, const Constants& k)
{
    const double c = k.speed_of_light;
    const double frequency = c / cond.wavelength;
    return frequency
           * std::sqrt(8.0 * k.boltzmann * cond.temperature * std::numbers::ln2
                       / (cond.atomic_mass * c * c))
           / 1e6;
}

double vapor_density(double temperature, const Constants& k)
{
    if (!(temperature > k.vapor_pressure_t_min && temperature < k.vapor_pressure_t_max)) {
        std::ostringstream msg;
        msg << "temperature " << temperature << " K outside the vapor-pressure window ("
            << k.vapor_pressure_t_min << ", " << k.vapor_pressure_t_max << ") K";
        throw std::out_of_range(msg.str());
    }
    const double log10_torr = k.vapor_pressure_a - k.vapor_pressure_b / temperature
                              + k.vapor_pressure_c * temperature
                              - k.vapor_pressure_d * std::log10(temperature);
    const double pressure = std::pow(10.0, log10_torr) * k.torr;
    return pressure / (k.boltzmann * temperature);
}

double temperature_for_density(double density, const Constants& k)
{
    // open window, so stay just inside its edges
    double lo = k.vapor_pressure_t_min * (1.0 + 1e-12);
    double hi = k.vapor_pressure_t_max * (1.0 - 1e-12);
    if (!(density >= vapor_density(lo, k) && density <= vapor_density(hi, k)))
        throw std::out_of_range("density outside the vapor-pressure window");
    for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (vapor_density(mid, k) < density)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double optical_depth(const VaporConditions& cond, double density, double doppler_mhz)
{
    if (!(doppler_mhz > 0.0))
        throw std::invalid_argument("Doppler width must be positive");
    const double n2 = cond.refractive_index * cond.refractive_index;
    const double sigma = 3.0 * cond.wavelength * cond.wavelength
                         / (8.0 * std::numbers::pi * n2)
                         * (cond.natural_linewidth / doppler_mhz);
    return density * sigma * cond.cell_length;
}

double optical_depth_at(const VaporConditions& cond, const Constants& constants)
{
    return optical_depth(cond, vapor_density(cond.temperature, constants),
                         doppler_fwhm(cond, constants));
}

double thermal_velocity(double temperature, double mass, VelocityConvention convention,
                        const Constants& k)
{
    const double kt_over_m = k.boltzmann * temperature / mass;
    switch (convention) {
    case VelocityConvention::most_probable:
        return std::sqrt(2.0 * kt_over_m);
    case VelocityConvention::mean:
        return std::sqrt(8.0 * kt_over_m / std::numbers::pi);
    case VelocityConvention::mean_relative:
        return std::sqrt(2.0) * std::sqrt(8.0 * kt_over_m / std::numbers::pi);
    }
    throw std::invalid_argument("unknown velocity convention");
}

double collision_rate(double density, const CollisionModel& model, double temperature,
                      double mass, const Constants& constants)
{
    check_cross_section(model.cross_section);
    const double v = thermal_velocity(temperature, mass, model.velocity_convention, constants);
    return density * model.cross_section * v / 1e6;
}

ScaledParameters DensityTemplate::at(double density) const
{
    const double s = density / reference_density;
    ScaledParameters out;
    out.rates = reference_rates;
    out.rates.gamma_b *= s;
    out.rates.gamma_c *= s;
    out.rates.gamma_bc *= s;
    out.collective_coupling = reference_coupling * std::sqrt(s);
    return out;
}

} // namespace lwi

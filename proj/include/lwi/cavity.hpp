#ifndef LWI_CAVITY_HPP
#define LWI_CAVITY_HPP

#include <lwi/bloch.hpp>
#include <lwi/constants.hpp>
#include <lwi/gain.hpp>
#include <lwi/vapor.hpp>

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lwi {

/// Ring cavity geometry and losses.
struct CavitySpec
{
    double round_trip_length = 0.37; ///< m
    double transmissivity_m1 = 0.03;
    double transmissivity_m2 = 0.014;
    double linewidth_fwhm = 17.0; ///< MHz, empty-cavity intensity FWHM
    /// Field amplitude decay rate in MHz; linewidth_fwhm/2 when unset.
    std::optional<double> amplitude_decay;

    bool operator==(const CavitySpec&) const = default;
};

struct CavityFigures
{
    double free_spectral_range = 0.0; ///< MHz
    double finesse = 0.0;
    double amplitude_decay = 0.0; ///< MHz
};

/// Throws std::invalid_argument for transmissivities outside (0, 1) or a
/// non-positive length or linewidth.
CavityFigures cavity_derived(const CavitySpec& spec,
                             const Constants& constants = builtin_constants());

/// Rabi frequency per square root of pump power from the 21.8 mW <-> 148 MHz
/// calibration point, MHz/sqrt(mW).
double default_rabi_calibration();

/// Omega = calibration * sqrt(power).
double power_to_rabi(double power_mw, double calibration = default_rabi_calibration());

enum class SaturationModel {
    large_omega_approx, ///< closed-form saturated gain, quadratic in (g a)^2
    full_model          ///< saturated gain from the full steady state
};

std::string to_string(SaturationModel m);
SaturationModel saturation_model_from_string(const std::string& s);

enum class Branch { stable, unstable, none };

std::string to_string(Branch b);

struct LasingSolution
{
    double intensity = 0.0; ///< a^2
    double amplitude = 0.0; ///< a
    double gain_at_solution = 0.0;
    Branch branch = Branch::none;
};

/// Scan settings for the full-model root search.
struct IntensityScan
{
    std::size_t points = 400;
    double gain_tolerance = 1e-6; ///< MHz
};

/// Raised when the saturated gain still exceeds the loss at the top of the
/// scan grid. The scanned grid is attached.
class BracketingError : public std::runtime_error
{
public:
    BracketingError(std::vector<double> grid, std::vector<double> gains);

    const std::vector<double>& grid() const { return m_grid; }
    const std::vector<double>& gains() const { return m_gains; }

private:
    std::vector<double> m_grid;
    std::vector<double> m_gains;
};

/**
 * Steady lasing intensity: the largest a^2 at which the saturated gain
 * equals the cavity amplitude decay. Below threshold the result has
 * branch none and zero intensity. drive.a is ignored.
 */
LasingSolution steady_intensity(const RateSet& rates, const DriveConfig& drive,
                                double amplitude_decay, SaturationModel model,
                                const IntensityScan& scan = {});

/// Every gain-equals-loss crossing of the full model on the scan grid,
/// ordered by intensity; crossings where the gain rises through the loss
/// are unstable.
std::vector<LasingSolution> lasing_roots(const RateSet& rates, const DriveConfig& drive,
                                         double amplitude_decay,
                                         const IntensityScan& scan = {});

struct OmegaWindow
{
    double low = 0.0;  ///< MHz
    double high = 0.0; ///< MHz
};

/// Pump-strength intervals where the small-signal gain exceeds the loss,
/// found on a log grid and refined to 1e-3 MHz.
std::vector<OmegaWindow> lasing_window_omega(const RateSet& rates,
                                             double collective_coupling,
                                             double amplitude_decay, double omega_min,
                                             double omega_max, std::size_t points = 400);

enum class ThresholdOutcome { found, none_in_range, always_lasing };

std::string to_string(ThresholdOutcome o);

struct DensityThreshold
{
    ThresholdOutcome outcome = ThresholdOutcome::none_in_range;
    double density = 0.0; ///< m^-3, meaningful when found
};

/// Smallest density where the small-signal gain reaches the loss, refined
/// to 0.1% relative.
DensityThreshold threshold_density(const DensityTemplate& tmpl, double omega,
                                   double amplitude_decay, double density_min,
                                   double density_max, std::size_t points = 200);

enum class Spacing { linear, log };

std::string to_string(Spacing s);
Spacing spacing_from_string(const std::string& s);

/// Strictly increasing grid of @p points values from min to max.
std::vector<double> make_grid(double min, double max, std::size_t points, Spacing spacing);

struct SweepRow
{
    double sweep_value = 0.0;
    double omega = 0.0;       ///< MHz
    double linear_gain = 0.0; ///< MHz
    double intensity = 0.0;   ///< a^2
    double inversion = 0.0;   ///< rho_aa - rho_bb at the operating point
    LegClassification leg = LegClassification::no_gain_either_leg;
    std::optional<double> optical_depth;
};

struct SweepResult
{
    std::string parameter; ///< e.g. "pump_power_mw"
    std::vector<SweepRow> rows;
};

struct PumpSweep
{
    RateSet rates;
    double collective_coupling = 0.0; ///< MHz
    double g = 1.0;                   ///< MHz
    double amplitude_decay = 0.0;     ///< MHz
    double calibration = 0.0;         ///< MHz/sqrt(mW)
    SaturationModel model = SaturationModel::full_model;
};

SweepResult sweep_pump(const PumpSweep& setup, const std::vector<double>& powers_mw);

struct DensitySweep
{
    DensityTemplate density_template;
    double omega = 0.0;           ///< MHz
    double g = 1.0;               ///< MHz
    double amplitude_decay = 0.0; ///< MHz
    SaturationModel model = SaturationModel::full_model;
    /// Maps density to optical depth for the extra column; optional.
    std::function<double(double)> optical_depth_of;
};

SweepResult sweep_density(const DensitySweep& setup, const std::vector<double>& densities);

} // namespace lwi

#endif

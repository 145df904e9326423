#ifndef LWI_GAIN_HPP
#define LWI_GAIN_HPP

#include <lwi/bloch.hpp>

#include <stdexcept>
#include <string>

namespace lwi {

/**
 * Closed-form small-signal gain, kept in pieces so callers can look at the
 * sign of the numerator without dividing.
 *
 * value = 2 (g sqrt N)^2 numerator / denominator, in MHz.
 */
struct GainBreakdown
{
    double value = 0.0;
    double numerator = 0.0;
    double denominator = 0.0;
    /// Coefficient of Omega^2 in the numerator. Its sign decides whether the
    /// gain turns positive at large pump strength.
    double omega2_coefficient = 0.0;
};

enum class LegClassification {
    gain_on_this_leg,    ///< gamma_b > 2 f gamma_bc
    gain_on_swapped_leg, ///< gamma_c > 2 (1 - f) gamma_bc
    no_gain_either_leg
};

std::string to_string(LegClassification c);

/// Raised when the probe amplitude cannot be made small enough for the
/// extracted gain to stop depending on it.
class GainExtractionError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Small-signal gain on the |a>-|b> transition. drive.a is ignored.
GainBreakdown linear_gain_closed(const RateSet& rates, const DriveConfig& drive);

/**
 * Small-signal gain extracted from the full steady state: the response
 * -(g sqrt N)^2 (i rho_ab)_ss / (g a) is evaluated at a probe amplitude and at
 * half of it, halving until the two agree to 1e-4 relative.
 */
double linear_gain_numeric(const RateSet& rates, const DriveConfig& drive,
                           double probe_amplitude = 1e-4);

/// Large-Omega estimate 2 (g sqrt N)^2 gamma_b / Omega^2.
double rough_gain(const RateSet& rates, const DriveConfig& drive);

/// Steady-state rho_aa - rho_bb to lowest order in the cavity field.
double inversion_closed(const RateSet& rates, double omega);

/// Gain at finite cavity amplitude drive.a > 0 from the full steady state.
double saturated_gain_full(const RateSet& rates, const DriveConfig& drive);

/// Large-Omega approximation of the saturated gain as a function of (g a)^2.
double saturated_gain_approx(const RateSet& rates, const DriveConfig& drive);

/// Which leg of the lambda system can show gain at large pump strength.
/// Throws std::logic_error if both leg conditions hold, which the coherence
/// floor rules out for validated rates.
LegClassification classify_legs(const RateSet& rates);

} // namespace lwi

#endif

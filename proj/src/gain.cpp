#include <lwi/gain.hpp>
#include <lwi/steady_state.hpp>

#include <cmath>
#include <sstream>

namespace lwi {

std::string to_string(LegClassification c)
{
    switch (c) {
    case LegClassification::gain_on_this_leg:
        return "gain_on_this_leg";
    case LegClassification::gain_on_swapped_leg:
        return "gain_on_swapped_leg";
    case LegClassification::no_gain_either_leg:
        return "no_gain_either_leg";
    }
    return "unknown";
}

GainBreakdown linear_gain_closed(const RateSet& r, const DriveConfig& d)
{
    const double om2 = d.omega * d.omega;

    GainBreakdown out;
    out.omega2_coefficient =
        r.gamma_a * (r.gamma_b - 2.0 * r.f * r.gamma_bc)
        + 2.0 * r.gamma_bc * (r.gamma_b - r.gamma_c);
    out.numerator = om2 * out.omega2_coefficient
                    - 4.0 * r.gamma_a * r.gamma_ac * r.gamma_bc * r.gamma_c;
    out.denominator =
        (om2 + 4.0 * r.gamma_ba * r.gamma_bc)
        * (om2 * (r.f * r.gamma_a + 2.0 * r.gamma_b + r.gamma_c)
           + 2.0 * r.gamma_a * r.gamma_ac * (r.gamma_b + r.gamma_c));
    out.value = 2.0 * d.g2n() * out.numerator / out.denominator;
    return out;
}

namespace {

double response_gain(const RateSet& rates, const DriveConfig& drive)
{
    const auto state = linear_steady_state(rates, drive);
    return -drive.g2n() * state.i_rho_ab / drive.field_coupling();
}

} // namespace

double linear_gain_numeric(const RateSet& rates, const DriveConfig& drive,
                           double probe_amplitude)
{
    if (!(probe_amplitude > 0.0))
        throw std::invalid_argument("probe amplitude must be positive");

    DriveConfig probe = drive;
    probe.a = probe_amplitude;
    double coarse = response_gain(rates, probe);
    for (double eps = probe_amplitude; eps * drive.g > 1e-15; eps *= 0.5) {
        probe.a = 0.5 * eps;
        const double fine = response_gain(rates, probe);
        if (std::abs(fine - coarse) <= 1e-4 * std::abs(fine) + 1e-14 * drive.g2n())
            return fine;
        coarse = fine;
    }

    std::ostringstream msg;
    msg << "gain did not become independent of the probe amplitude (omega = "
        << drive.omega << ", gamma_a = " << rates.gamma_a << ", f = " << rates.f << ")";
    throw GainExtractionError(msg.str());
}

double rough_gain(const RateSet& rates, const DriveConfig& drive)
{
    return 2.0 * drive.g2n() * rates.gamma_b / (drive.omega * drive.omega);
}

double inversion_closed(const RateSet& r, double omega)
{
    const double om2 = omega * omega;
    const double num = 2.0 * r.gamma_a * r.gamma_c * r.gamma_ac
                       + om2 * (r.f * r.gamma_a + r.gamma_c - r.gamma_b);
    const double den = 2.0 * r.gamma_a * r.gamma_ac * (r.gamma_b + r.gamma_c)
                       + om2 * (r.f * r.gamma_a + 2.0 * r.gamma_b + r.gamma_c);
    return -num / den;
}

double saturated_gain_full(const RateSet& rates, const DriveConfig& drive)
{
    if (!(drive.a > 0.0))
        throw std::invalid_argument("saturated gain needs a positive cavity amplitude");
    return response_gain(rates, drive);
}

double saturated_gain_approx(const RateSet& r, const DriveConfig& d)
{
    const double om2 = d.omega * d.omega;
    const double x = d.field_coupling() * d.field_coupling();
    const double num = om2 * (r.gamma_b - 2.0 * r.f * r.gamma_bc) - 4.0 * x * r.gamma_c;
    const double den = r.f * om2 * om2 + 4.0 * x * om2 + 16.0 * x * x * (1.0 - r.f);
    return 2.0 * d.g2n() * num / den;
}

LegClassification classify_legs(const RateSet& r)
{
    const bool this_leg = r.gamma_b > 2.0 * r.f * r.gamma_bc;
    const bool swapped = r.gamma_c > 2.0 * (1.0 - r.f) * r.gamma_bc;
    if (this_leg && swapped)
        throw std::logic_error("both legs satisfy the gain condition; "
                               "the coherence floor must have been violated");
    if (this_leg)
        return LegClassification::gain_on_this_leg;
    if (swapped)
        return LegClassification::gain_on_swapped_leg;
    return LegClassification::no_gain_either_leg;
}

} // namespace lwi

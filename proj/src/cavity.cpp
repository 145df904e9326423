#include <lwi/cavity.hpp>
#include <lwi/steady_state.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lwi {

namespace {

std::string bracketing_message(const std::vector<double>& grid)
{
    std::ostringstream msg;
    msg << "saturated gain still exceeds the loss at the top of the scan grid ("
        << grid.size() << " points up to (g a)^2 = " << (grid.empty() ? 0.0 : grid.back())
        << ")";
    return msg.str();
}

LasingSolution make_solution(double x, double g, double gain, Branch branch)
{
    LasingSolution s;
    s.intensity = x / (g * g);
    s.amplitude = std::sqrt(x) / g;
    s.gain_at_solution = gain;
    s.branch = branch;
    return s;
}

/// Saturated gain of the full model as a function of x = (g a)^2.
struct FullGain
{
    const RateSet& rates;
    DriveConfig drive;

    double operator()(double x)
    {
        if (x <= 0.0)
            return linear_gain_closed(rates, drive).value;
        drive.a = std::sqrt(x) / drive.g;
        return saturated_gain_full(rates, drive);
    }
};

/// Bisection on [lo, hi] where gain - loss changes sign, until the gain is
/// within tolerance of the loss.
double refine_root(FullGain& gain, double lo, double hi, double loss, double tol)
{
    const bool falling = gain(lo) > loss;
    double best = lo;
    double best_err = std::abs(gain(lo) - loss);
    for (int i = 0; i < 400; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double gm = gain(mid);
        const double err = std::abs(gm - loss);
        if (err < best_err) {
            best = mid;
            best_err = err;
        }
        if (err <= tol || mid == lo || mid == hi)
            break;
        if ((gm > loss) == falling)
            lo = mid;
        else
            hi = mid;
    }
    return best;
}

struct Scan
{
    std::vector<double> x;
    std::vector<double> gain;
};

Scan scan_full(FullGain& gain, double loss, const IntensityScan& settings)
{
    const double g2n = gain.drive.g2n();
    const double omega = gain.drive.omega;
    // |i rho_ab| <= 1/2 bounds the gain by g2n/(2 g a), so beyond this point
    // the gain is certainly below the loss.
    const double cap = loss > 0.0 ? g2n / (2.0 * loss) : 0.0;
    const double x_hi = 4.0 * std::max({cap * cap, omega * omega, 1.0});
    const double x_lo = x_hi * 1e-18;

    Scan s;
    const std::size_t n = std::max<std::size_t>(settings.points, 2);
    s.x.reserve(n + 1);
    s.x.push_back(0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double frac = static_cast<double>(k) / static_cast<double>(n - 1);
        s.x.push_back(x_lo * std::pow(x_hi / x_lo, frac));
    }
    s.gain.reserve(s.x.size());
    for (double x : s.x)
        s.gain.push_back(gain(x));
    return s;
}

} // namespace

BracketingError::BracketingError(std::vector<double> grid, std::vector<double> gains)
  : std::runtime_error(bracketing_message(grid)), m_grid(std::move(grid)),
    m_gains(std::move(gains))
{
}

CavityFigures cavity_derived(const CavitySpec& spec, const Constants& constants)
{
    auto in_unit_interval = [](double t) { return t > 0.0 && t < 1.0; };
    if (!in_unit_interval(spec.transmissivity_m1) || !in_unit_interval(spec.transmissivity_m2))
        throw std::invalid_argument("mirror transmissivities must lie in (0, 1)");
    if (!(spec.round_trip_length > 0.0))
        throw std::invalid_argument("cavity round-trip length must be positive");
    if (!(spec.linewidth_fwhm > 0.0))
        throw std::invalid_argument("cavity linewidth must be positive");

    CavityFigures out;
    out.free_spectral_range = constants.speed_of_light / spec.round_trip_length / 1e6;
    out.finesse = out.free_spectral_range / spec.linewidth_fwhm;
    out.amplitude_decay = spec.amplitude_decay.value_or(0.5 * spec.linewidth_fwhm);
    return out;
}

double default_rabi_calibration() { return 148.0 / std::sqrt(21.8); }

double power_to_rabi(double power_mw, double calibration)
{
    if (power_mw < 0.0)
        throw std::invalid_argument("pump power must be non-negative");
    return calibration * std::sqrt(power_mw);
}

std::string to_string(SaturationModel m)
{
    return m == SaturationModel::full_model ? "full-model" : "large-omega-approx";
}

SaturationModel saturation_model_from_string(const std::string& s)
{
    if (s == "full-model")
        return SaturationModel::full_model;
    if (s == "large-omega-approx")
        return SaturationModel::large_omega_approx;
    throw std::invalid_argument("unknown saturation model '" + s
                                + "' (expected full-model or large-omega-approx)");
}

std::string to_string(Branch b)
{
    switch (b) {
    case Branch::stable:
        return "stable";
    case Branch::unstable:
        return "unstable";
    case Branch::none:
        return "none";
    }
    return "unknown";
}

std::vector<LasingSolution> lasing_roots(const RateSet& rates, const DriveConfig& drive,
                                         double amplitude_decay, const IntensityScan& settings)
{
    FullGain gain{rates, drive};
    const Scan s = scan_full(gain, amplitude_decay, settings);
    if (s.gain.back() >= amplitude_decay)
        throw BracketingError(s.x, s.gain);

    std::vector<LasingSolution> roots;
    for (std::size_t k = 0; k + 1 < s.x.size(); ++k) {
        const bool above_here = s.gain[k] >= amplitude_decay;
        const bool above_next = s.gain[k + 1] >= amplitude_decay;
        if (above_here == above_next)
            continue;
        const double x = refine_root(gain, s.x[k], s.x[k + 1], amplitude_decay,
                                     settings.gain_tolerance);
        roots.push_back(make_solution(x, drive.g, gain(x),
                                      above_here ? Branch::stable : Branch::unstable));
    }
    return roots;
}

LasingSolution steady_intensity(const RateSet& rates, const DriveConfig& drive,
                                double amplitude_decay, SaturationModel model,
                                const IntensityScan& settings)
{
    if (model == SaturationModel::full_model) {
        const auto roots = lasing_roots(rates, drive, amplitude_decay, settings);
        if (roots.empty() || roots.back().branch != Branch::stable)
            return {};
        return roots.back();
    }

    // Gain = loss rearranged into qa x^2 + qb x + qc = 0 with x = (g a)^2.
    const double g2n = drive.g2n();
    const double om2 = drive.omega * drive.omega;
    const double loss = amplitude_decay;
    const double d = rates.gamma_b - 2.0 * rates.f * rates.gamma_bc;
    const double qa = 16.0 * loss * (1.0 - rates.f);
    const double qb = 4.0 * loss * om2 + 8.0 * g2n * rates.gamma_c;
    const double qc = loss * rates.f * om2 * om2 - 2.0 * g2n * om2 * d;

    double x = -1.0;
    if (qa == 0.0) {
        if (qb != 0.0)
            x = -qc / qb;
    } else {
        const double disc = qb * qb - 4.0 * qa * qc;
        if (disc >= 0.0) {
            const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
            const double r1 = q / qa;
            const double r2 = q != 0.0 ? qc / q : -1.0;
            x = std::max(r1, r2);
        }
    }
    if (!(x > 0.0))
        return {};

    DriveConfig at = drive;
    at.a = std::sqrt(x) / drive.g;
    return make_solution(x, drive.g, saturated_gain_approx(rates, at), Branch::stable);
}

std::vector<OmegaWindow> lasing_window_omega(const RateSet& rates,
                                             double collective_coupling,
                                             double amplitude_decay, double omega_min,
                                             double omega_max, std::size_t points)
{
    if (!(omega_min > 0.0 && omega_max > omega_min && std::isfinite(omega_max)))
        throw std::invalid_argument("omega range must be finite, positive and increasing");

    DriveConfig drive;
    drive.collective_coupling = collective_coupling;
    auto excess = [&](double omega) {
        drive.omega = omega;
        return linear_gain_closed(rates, drive).value - amplitude_decay;
    };
    auto refine = [&](double lo, double hi) {
        const bool rising = excess(lo) < 0.0;
        while (hi - lo > 1e-3) {
            const double mid = 0.5 * (lo + hi);
            if ((excess(mid) < 0.0) == rising)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    };

    const auto grid = make_grid(omega_min, omega_max, std::max<std::size_t>(points, 200),
                                Spacing::log);
    std::vector<OmegaWindow> windows;
    bool inside = excess(grid.front()) > 0.0;
    double open = grid.front();
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        const bool above_here = excess(grid[k]) > 0.0;
        const bool above_next = excess(grid[k + 1]) > 0.0;
        if (above_here == above_next)
            continue;
        const double edge = refine(grid[k], grid[k + 1]);
        if (above_next) {
            open = edge;
        } else {
            windows.push_back({open, edge});
        }
        inside = above_next;
    }
    if (inside)
        windows.push_back({open, grid.back()});
    return windows;
}

std::string to_string(ThresholdOutcome o)
{
    switch (o) {
    case ThresholdOutcome::found:
        return "found";
    case ThresholdOutcome::none_in_range:
        return "none-in-range";
    case ThresholdOutcome::always_lasing:
        return "always-lasing";
    }
    return "unknown";
}

DensityThreshold threshold_density(const DensityTemplate& tmpl, double omega,
                                   double amplitude_decay, double density_min,
                                   double density_max, std::size_t points)
{
    if (!(density_min > 0.0 && density_max > density_min))
        throw std::invalid_argument("density range must be positive and increasing");

    auto lasing = [&](double n) {
        const auto p = tmpl.at(n);
        DriveConfig drive;
        drive.omega = omega;
        drive.collective_coupling = p.collective_coupling;
        return linear_gain_closed(p.rates, drive).value >= amplitude_decay;
    };

    if (lasing(density_min))
        return {ThresholdOutcome::always_lasing, density_min};

    const auto grid = make_grid(density_min, density_max, std::max<std::size_t>(points, 2),
                                Spacing::linear);
    for (std::size_t k = 1; k < grid.size(); ++k) {
        if (!lasing(grid[k]))
            continue;
        double lo = grid[k - 1];
        double hi = grid[k];
        while (hi - lo > 1e-3 * hi) {
            const double mid = 0.5 * (lo + hi);
            if (lasing(mid))
                hi = mid;
            else
                lo = mid;
        }
        return {ThresholdOutcome::found, hi};
    }
    return {ThresholdOutcome::none_in_range, 0.0};
}

std::string to_string(Spacing s) { return s == Spacing::log ? "log" : "linear"; }

Spacing spacing_from_string(const std::string& s)
{
    if (s == "linear")
        return Spacing::linear;
    if (s == "log")
        return Spacing::log;
    throw std::invalid_argument("unknown spacing '" + s + "' (expected linear or log)");
}

std::vector<double> make_grid(double min, double max, std::size_t points, Spacing spacing)
{
    if (points < 2)
        throw std::invalid_argument("a grid needs at least two points");
    if (!(min < max))
        throw std::invalid_argument("grid minimum must be below its maximum");
    if (spacing == Spacing::log && !(min > 0.0))
        throw std::invalid_argument("log grid needs a positive minimum");

    std::vector<double> grid(points);
    const double span = static_cast<double>(points - 1);
    for (std::size_t k = 0; k < points; ++k) {
        const double frac = static_cast<double>(k) / span;
        grid[k] = spacing == Spacing::log ? min * std::pow(max / min, frac)
                                          : min + (max - min) * frac;
    }
    grid.front() = min;
    grid.back() = max;
    return grid;
}

namespace {

SweepRow evaluate_row(double sweep_value, const RateSet& rates, DriveConfig drive,
                      double amplitude_decay, SaturationModel model)
{
    SweepRow row;
    row.sweep_value = sweep_value;
    row.omega = drive.omega;
    row.linear_gain = linear_gain_closed(rates, drive).value;
    row.leg = classify_legs(rates);

    const auto solution = steady_intensity(rates, drive, amplitude_decay, model);
    row.intensity = solution.intensity;
    drive.a = solution.amplitude;
    const auto state = linear_steady_state(rates, drive);
    row.inversion = state.rho_aa - state.rho_bb;
    return row;
}

} // namespace

SweepResult sweep_pump(const PumpSweep& setup, const std::vector<double>& powers_mw)
{
    SweepResult out;
    out.parameter = "pump_power_mw";
    out.rows.reserve(powers_mw.size());
    for (double power : powers_mw) {
        DriveConfig drive;
        drive.omega = power_to_rabi(power, setup.calibration);
        drive.g = setup.g;
        drive.collective_coupling = setup.collective_coupling;
        out.rows.push_back(
            evaluate_row(power, setup.rates, drive, setup.amplitude_decay, setup.model));
    }
    return out;
}

SweepResult sweep_density(const DensitySweep& setup, const std::vector<double>& densities)
{
    SweepResult out;
    out.parameter = "density_m3";
    out.rows.reserve(densities.size());
    for (double n : densities) {
        const auto p = setup.density_template.at(n);
        DriveConfig drive;
        drive.omega = setup.omega;
        drive.g = setup.g;
        drive.collective_coupling = p.collective_coupling;
        auto row = evaluate_row(n, p.rates, drive, setup.amplitude_decay, setup.model);
        if (setup.optical_depth_of)
            row.optical_depth = setup.optical_depth_of(n);
        out.rows.push_back(row);
    }
    return out;
}

} // namespace lwi

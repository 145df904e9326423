#include "oracles.hpp"

#include <lwi/cavity.hpp>
#include <lwi/config.hpp>
#include <lwi/scenario.hpp>
#include <lwi/vapor.hpp>

#include <doctest.h>

#include <cmath>

using namespace lwi;

namespace {

double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

DensityTemplate fig4_template()
{
    DensityTemplate t;
    t.reference_density = vapor_density(363.15);
    t.reference_rates = oracle::preset_rates();
    t.reference_coupling = 3000.0;
    return t;
}

PumpSweep fig3_setup()
{
    PumpSweep p;
    p.rates = oracle::preset_rates();
    p.collective_coupling = 3000.0;
    p.amplitude_decay = 8.5;
    p.calibration = default_rabi_calibration();
    return p;
}

} // namespace

TEST_SUITE("laser-cavity")
{
    TEST_CASE("derived cavity figures")
    {
        const auto c = cavity_derived(CavitySpec{});
        CHECK(c.free_spectral_range == doctest::Approx(810.5).epsilon(1e-3));
        CHECK(c.free_spectral_range == doctest::Approx(299792458.0 / 0.37 / 1e6));
        CHECK(c.finesse == doctest::Approx(47.7).epsilon(1e-3));
        CHECK(c.amplitude_decay == 8.5);

        CavitySpec spec;
        spec.amplitude_decay = 6.0;
        CHECK(cavity_derived(spec).amplitude_decay == 6.0);
    }

    TEST_CASE("invalid cavities are rejected")
    {
        CavitySpec s;
        s.transmissivity_m1 = 1.0;
        CHECK_THROWS_AS(cavity_derived(s), std::invalid_argument);
        s = {};
        s.linewidth_fwhm = 0.0;
        CHECK_THROWS_AS(cavity_derived(s), std::invalid_argument);
        s = {};
        s.round_trip_length = -1.0;
        CHECK_THROWS_AS(cavity_derived(s), std::invalid_argument);
    }

    TEST_CASE("pump power to Rabi frequency")
    {
        CHECK(power_to_rabi(21.8) == doctest::Approx(148.0).epsilon(1e-14));
        CHECK(power_to_rabi(25.0) == doctest::Approx(158.5).epsilon(1e-3));
        CHECK(rel(power_to_rabi(25.0), 156.0) <= 0.02);
        CHECK(power_to_rabi(0.0) == 0.0);
        CHECK(default_rabi_calibration() == doctest::Approx(31.70).epsilon(1e-3));
        CHECK_THROWS_AS(power_to_rabi(-1.0), std::invalid_argument);
    }

    TEST_CASE("below threshold there is no lasing")
    {
        const auto r = oracle::preset_rates();
        const auto d = oracle::preset_drive(160.0);
        for (auto m : {SaturationModel::full_model, SaturationModel::large_omega_approx}) {
            const auto s = steady_intensity(r, d, 50.0, m);
            CHECK(s.branch == Branch::none);
            CHECK(s.intensity == 0.0);
        }
    }

    TEST_CASE("large-Omega root satisfies its defining equation")
    {
        const auto r = oracle::preset_rates();
        const double loss = 8.5;
        for (double omega : {143.75, 160.0, 180.0}) {
            const auto d = oracle::preset_drive(omega);
            const auto s = steady_intensity(r, d, loss, SaturationModel::large_omega_approx);
            REQUIRE(s.branch == Branch::stable);
            const double x = s.intensity * d.g * d.g, om2 = omega * omega;
            const double lhs = 2.0 * d.g2n()
                               * (om2 * (r.gamma_b - 2.0 * r.f * r.gamma_bc) - 4.0 * x * r.gamma_c);
            const double rhs = loss * (r.f * om2 * om2 + 4.0 * x * om2 + 16.0 * x * x * (1.0 - r.f));
            CHECK(std::abs(lhs - rhs) <= 1e-9 * std::abs(rhs));
        }
    }

    TEST_CASE("full model clamps the gain to the loss")
    {
        const auto r = oracle::preset_rates();
        for (double omega : {5.0, 50.0, 120.0, 160.0, 185.0}) {
            auto d = oracle::preset_drive(omega);
            const auto s = steady_intensity(r, d, 8.5, SaturationModel::full_model);
            REQUIRE(s.branch == Branch::stable);
            CHECK(std::abs(s.gain_at_solution - 8.5) <= 1e-6);
            d.a = s.amplitude;
            CHECK(std::abs(saturated_gain_full(r, d) - 8.5) <= 1e-6);
            CHECK(s.intensity == doctest::Approx(s.amplitude * s.amplitude));
        }
    }

    TEST_CASE("full model and large-Omega formula agree at strong pumping")
    {
        const auto r = oracle::preset_rates();
        for (double omega : {143.75, 150.0, 160.0, 170.0}) {
            const auto d = oracle::preset_drive(omega);
            const auto full = steady_intensity(r, d, 8.5, SaturationModel::full_model);
            const auto approx = steady_intensity(r, d, 8.5, SaturationModel::large_omega_approx);
            REQUIRE(full.branch == Branch::stable);
            REQUIRE(approx.branch == Branch::stable);
            CHECK(rel(approx.intensity, full.intensity) <= 0.5);
        }
    }

    TEST_CASE("roots are ordered and the last one is stable")
    {
        const auto roots = lasing_roots(oracle::preset_rates(), oracle::preset_drive(160.0), 8.5);
        REQUIRE_FALSE(roots.empty());
        for (std::size_t k = 1; k < roots.size(); ++k)
            CHECK(roots[k].intensity > roots[k - 1].intensity);
        CHECK(roots.back().branch == Branch::stable);
    }

    TEST_CASE("bracketing failure carries the scanned grid")
    {
        try {
            lasing_roots(oracle::preset_rates(), oracle::preset_drive(160.0), -1e12);
            FAIL("expected a bracketing error");
        } catch (const BracketingError& e) {
            CHECK(e.grid().size() == e.gains().size());
            CHECK(e.grid().size() > 100);
        }
    }

    TEST_CASE("no lasing window without the gain condition")
    {
        auto r = oracle::preset_rates();
        r.f = 0.5; // gamma_b = 2 f gamma_bc
        CHECK(lasing_window_omega(r, 3000.0, 8.5, 0.01, 1e4).empty());
        r.f = 0.6;
        CHECK(lasing_window_omega(r, 3000.0, 8.5, 0.01, 1e4).empty());
        CHECK(lasing_window_omega(r, 3e5, 1e-3, 0.01, 1e4).empty());
    }

    TEST_CASE("preset lasing window")
    {
        const auto w = lasing_window_omega(oracle::preset_rates(), 3000.0, 8.5, 0.01, 1e4);
        REQUIRE(w.size() == 1);
        CHECK(w[0].low == doctest::Approx(0.6116).epsilon(2e-3));
        CHECK(w[0].high == doctest::Approx(189.455).epsilon(1e-5));
    }

    TEST_CASE("weaker loss lowers the threshold")
    {
        const auto r = oracle::preset_rates();
        // numerator zero of the small-signal gain: the loss -> 0 limit of the lower edge
        const double coefficient = r.gamma_a * (r.gamma_b - 2.0 * r.f * r.gamma_bc)
                                   + 2.0 * r.gamma_bc * (r.gamma_b - r.gamma_c);
        const double limit =
            std::sqrt(4.0 * r.gamma_a * r.gamma_ac * r.gamma_bc * r.gamma_c / coefficient);
        double previous = 1e300;
        double previous_high = 0.0;
        for (double loss : {8.5, 4.0, 1.0, 0.1, 1e-3}) {
            const auto w = lasing_window_omega(r, 3000.0, loss, 0.01, 1e4);
            REQUIRE(w.size() == 1);
            CHECK(w[0].low <= previous + 1e-3);
            CHECK(w[0].low >= limit - 1e-3);
            CHECK(w[0].high > previous_high);
            previous = w[0].low;
            previous_high = w[0].high;
        }
    }

    TEST_CASE("intensity vanishes exactly outside the lasing windows")
    {
        const auto r = oracle::preset_rates();
        const auto w = lasing_window_omega(r, 3000.0, 8.5, 0.01, 1e4);
        REQUIRE(w.size() == 1);
        for (double omega : make_grid(0.05, 1000.0, 300, Spacing::log)) {
            if (std::abs(omega - w[0].low) < 1e-3 || std::abs(omega - w[0].high) < 1e-3)
                continue;
            const bool inside = omega > w[0].low && omega < w[0].high;
            const auto s = steady_intensity(r, oracle::preset_drive(omega), 8.5,
                                            SaturationModel::full_model);
            CHECK((s.branch != Branch::none) == inside);
        }
    }

    TEST_CASE("intensity grows just above threshold")
    {
        const auto r = oracle::preset_rates();
        const auto w = lasing_window_omega(r, 3000.0, 8.5, 0.01, 1e4);
        double previous = 0.0;
        for (double omega : make_grid(w[0].low + 2e-3, w[0].low + 2.0, 20, Spacing::linear)) {
            const auto s =
                steady_intensity(r, oracle::preset_drive(omega), 8.5, SaturationModel::full_model);
            CHECK(s.intensity >= previous);
            previous = s.intensity;
        }
        CHECK(previous > 0.0);
    }

    TEST_CASE("density threshold scales with the square root of the loss")
    {
        const auto t = fig4_template();
        const auto full = threshold_density(t, 156.0, 8.5, 1e17, 1e19);
        const auto half = threshold_density(t, 156.0, 4.25, 1e17, 1e19);
        REQUIRE(full.outcome == ThresholdOutcome::found);
        REQUIRE(half.outcome == ThresholdOutcome::found);
        CHECK(rel(half.density / full.density, 1.0 / std::sqrt(2.0)) <= 0.01);

        // rough estimate: 2 (g sqrt N)^2 gamma_b / Omega^2 = loss, both numerator factors linear in N
        const double rough =
            t.reference_density
            * std::sqrt(8.5 * 156.0 * 156.0
                        / (2.0 * 3000.0 * 3000.0 * t.reference_rates.gamma_b));
        CHECK(rel(full.density, rough) <= 0.35);
    }

    TEST_CASE("density threshold outcomes")
    {
        auto t = fig4_template();
        const auto found = threshold_density(t, 156.0, 8.5, 1e17, 1e19);
        REQUIRE(found.outcome == ThresholdOutcome::found);
        CHECK(found.density < vapor_density(376.15));
        CHECK(threshold_density(t, 156.0, 8.5, 5e18, 1e19).outcome == ThresholdOutcome::always_lasing);
        CHECK(threshold_density(t, 156.0, 8.5, 1e17, 1e18).outcome == ThresholdOutcome::none_in_range);

        t.reference_rates.gamma_b = 0.0;
        CHECK(threshold_density(t, 156.0, 8.5, 1e17, 1e19).outcome == ThresholdOutcome::none_in_range);
    }

    TEST_CASE("pump sweep shape and reparameterisation")
    {
        const auto powers = make_grid(0.0, 50.0, 51, Spacing::linear);
        const auto sweep = sweep_pump(fig3_setup(), powers);
        REQUIRE(sweep.rows.size() == powers.size());
        CHECK(sweep.rows[0].intensity == 0.0);
        for (std::size_t k = 1; k < sweep.rows.size(); ++k)
            CHECK(sweep.rows[k].sweep_value > sweep.rows[k - 1].sweep_value);

        auto doubled = fig3_setup();
        doubled.calibration *= 2.0;
        std::vector<double> quarter;
        for (double p : powers)
            quarter.push_back(p / 4.0);
        const auto compressed = sweep_pump(doubled, quarter);
        for (std::size_t k = 0; k < powers.size(); ++k) {
            CHECK(compressed.rows[k].omega == doctest::Approx(sweep.rows[k].omega).epsilon(1e-14));
            CHECK(compressed.rows[k].intensity
                  == doctest::Approx(sweep.rows[k].intensity).epsilon(1e-9));
        }
    }

    TEST_CASE("pump sweep below threshold everywhere")
    {
        auto setup = fig3_setup();
        setup.amplitude_decay = 1e4;
        const auto sweep = sweep_pump(setup, make_grid(0.0, 50.0, 11, Spacing::linear));
        for (const auto& row : sweep.rows) {
            CHECK(row.intensity == 0.0);
            CHECK(row.leg == LegClassification::gain_on_this_leg);
        }
    }

    TEST_CASE("density sweep: zeros below threshold, formula agreement above")
    {
        DensitySweep setup;
        setup.density_template = fig4_template();
        setup.omega = 156.0;
        setup.amplitude_decay = 8.5;
        const auto grid = make_grid(1e17, 6e18, 40, Spacing::linear);
        const auto full = sweep_density(setup, grid);
        setup.model = SaturationModel::large_omega_approx;
        const auto approx = sweep_density(setup, grid);
        const double threshold = threshold_density(setup.density_template, 156.0, 8.5, 1e17, 1e19).density;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            if (grid[k] < threshold)
                CHECK(full.rows[k].intensity == 0.0);
            else
                CHECK(full.rows[k].intensity > 0.0);
            if (full.rows[k].intensity > 0.0 && approx.rows[k].intensity > 0.0)
                CHECK(rel(approx.rows[k].intensity, full.rows[k].intensity) <= 0.5);
            else
                CHECK(full.rows[k].intensity == approx.rows[k].intensity);
        }
    }

    TEST_CASE("sweeps are deterministic")
    {
        const auto powers = make_grid(0.0, 50.0, 21, Spacing::linear);
        const auto a = sweep_pump(fig3_setup(), powers);
        const auto b = sweep_pump(fig3_setup(), powers);
        for (std::size_t k = 0; k < powers.size(); ++k) {
            CHECK(a.rows[k].intensity == b.rows[k].intensity);
            CHECK(a.rows[k].inversion == b.rows[k].inversion);
            CHECK(a.rows[k].linear_gain == b.rows[k].linear_gain);
        }
    }

    TEST_CASE("grids")
    {
        const auto lin = make_grid(1.0, 2.0, 5, Spacing::linear);
        CHECK(lin.front() == 1.0);
        CHECK(lin.back() == 2.0);
        CHECK(lin[2] == 1.5);
        const auto lg = make_grid(1.0, 100.0, 3, Spacing::log);
        CHECK(lg[1] == doctest::Approx(10.0));
        CHECK_THROWS_AS(make_grid(1.0, 2.0, 1, Spacing::linear), std::invalid_argument);
        CHECK_THROWS_AS(make_grid(2.0, 1.0, 3, Spacing::linear), std::invalid_argument);
        CHECK_THROWS_AS(make_grid(0.0, 1.0, 3, Spacing::log), std::invalid_argument);
        CHECK(spacing_from_string("log") == Spacing::log);
        CHECK(saturation_model_from_string("large-omega-approx") == SaturationModel::large_omega_approx);
        CHECK_THROWS_AS(saturation_model_from_string("approx"), std::invalid_argument);
    }
}

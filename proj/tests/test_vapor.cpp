#include <lwi/constants.hpp>
#include <lwi/vapor.hpp>

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>

using namespace lwi;

namespace {

constexpr double kb = 1.380649e-23;
constexpr double c0 = 299792458.0;
constexpr double mass = 1.443160648e-25;
constexpr double lambda = 7.94978851156e-7;

double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

double oracle_doppler_mhz(double temperature)
{
    const double nu = c0 / lambda;
    return nu * std::sqrt(8.0 * kb * temperature * std::log(2.0) / (mass * c0 * c0)) / 1e6;
}

double oracle_density(double temperature)
{
    const double log_p = 15.88253 - 4529.635 / temperature + 0.00058663 * temperature
                         - 2.99138 * std::log10(temperature);
    return std::pow(10.0, log_p) * 133.32236842105263 / (kb * temperature);
}

} // namespace

TEST_SUITE("vapor-physics")
{
    TEST_CASE("Doppler width")
    {
        const auto c = rb87_d1_conditions(363.15);
        CHECK(rel(doppler_fwhm(c), oracle_doppler_mhz(363.15)) <= 1e-12);
        CHECK(doppler_fwhm(c) == doctest::Approx(552.1).epsilon(1e-3));

        const auto hot = rb87_d1_conditions(4.0 * 363.15);
        CHECK(doppler_fwhm(hot) == doctest::Approx(2.0 * doppler_fwhm(c)));
        auto heavy = c;
        heavy.atomic_mass *= 4.0;
        CHECK(doppler_fwhm(heavy) == doctest::Approx(0.5 * doppler_fwhm(c)));
        auto blue = c;
        blue.wavelength *= 0.5;
        CHECK(doppler_fwhm(blue) == doctest::Approx(2.0 * doppler_fwhm(c)));
    }

    TEST_CASE("vapor density")
    {
        CHECK(rel(vapor_density(363.15), oracle_density(363.15)) <= 1e-12);
        CHECK(rel(vapor_density(363.15), 2.4e18) <= 0.25);
        CHECK(rel(vapor_density(376.15) / vapor_density(363.15), 2.35) <= 0.3);
        double previous = 0.0;
        for (double t = 260.0; t <= 440.0; t += 5.0) {
            const double n = vapor_density(t);
            CHECK(n > previous);
            previous = n;
            CHECK(temperature_for_density(n) == doctest::Approx(t).epsilon(1e-9));
        }
        CHECK_THROWS_AS(vapor_density(249.0), std::out_of_range);
        CHECK_THROWS_AS(vapor_density(451.0), std::out_of_range);
        CHECK_THROWS_AS(temperature_for_density(1.0), std::out_of_range);
    }

    TEST_CASE("optical depth")
    {
        const auto c = rb87_d1_conditions(376.15);
        const double n = vapor_density(376.15);
        const double doppler = doppler_fwhm(c);
        const double sigma = 3.0 * lambda * lambda / (8.0 * std::numbers::pi) * 5.75 / doppler;
        CHECK(rel(optical_depth(c, n, doppler), n * sigma * 0.07) <= 1e-12);
        CHECK(rel(optical_depth_at(c), 326.0) <= 0.1);

        const auto warm = rb87_d1_conditions(363.15);
        CHECK(rel(optical_depth_at(warm), 132.0) <= 0.05);
        CHECK(rel(optical_depth_at(warm), 139.0) <= 0.1);

        auto longer = warm;
        longer.cell_length *= 2.0;
        CHECK(optical_depth_at(longer) == doctest::Approx(2.0 * optical_depth_at(warm)));
        auto dense_medium = warm;
        dense_medium.refractive_index = 2.0;
        CHECK(optical_depth_at(dense_medium) == doctest::Approx(0.25 * optical_depth_at(warm)));
    }

    TEST_CASE("thermal velocities")
    {
        const double vp = thermal_velocity(363.15, mass, VelocityConvention::most_probable);
        CHECK(vp == doctest::Approx(std::sqrt(2.0 * kb * 363.15 / mass)));
        CHECK(std::abs(vp - 263.0) <= 2.0);
        const double mean = thermal_velocity(363.15, mass, VelocityConvention::mean);
        CHECK(mean / vp == doctest::Approx(std::sqrt(4.0 / std::numbers::pi)));
        CHECK(thermal_velocity(363.15, mass, VelocityConvention::mean_relative)
              == doctest::Approx(std::sqrt(2.0) * mean));
        CHECK(thermal_velocity(363.15, 4.0 * mass, VelocityConvention::most_probable)
              == doctest::Approx(0.5 * vp));
        CHECK(velocity_convention_from_string("mean-relative") == VelocityConvention::mean_relative);
        CHECK(to_string(VelocityConvention::most_probable) == "most-probable");
    }

    TEST_CASE("collision rate")
    {
        const double n = vapor_density(363.15);
        CollisionModel model;
        const double rate = collision_rate(n, model, 363.15, mass);
        CHECK(rate == doctest::Approx(n * 1e-17 * std::sqrt(2.0 * kb * 363.15 / mass) / 1e6));
        CHECK(rel(rate, 6.3e-3) <= 0.1);
        model.cross_section = 7e-18;
        CHECK(collision_rate(n, model, 363.15, mass) == doctest::Approx(0.7 * rate));
        model.cross_section = 1e-21;
        CHECK_THROWS_AS(collision_rate(n, model, 363.15, mass), std::invalid_argument);
        CHECK_THROWS_AS(check_cross_section(1e-13), std::invalid_argument);
        CHECK_NOTHROW(check_cross_section(1e-17));
    }

    TEST_CASE("density scaling of the model parameters")
    {
        DensityTemplate t;
        t.reference_density = 2e18;
        t.reference_rates.gamma_a = 5.75;
        t.reference_rates.gamma_b = 0.013;
        t.reference_rates.gamma_c = 0.02;
        t.reference_rates.gamma_bc = 0.03;
        t.reference_rates.f = 0.3;
        t.reference_coupling = 3000.0;
        const auto p = t.at(8e18);
        CHECK(p.rates.gamma_b == doctest::Approx(0.052));
        CHECK(p.rates.gamma_c == doctest::Approx(0.08));
        CHECK(p.rates.gamma_bc == doctest::Approx(0.12));
        CHECK(p.rates.gamma_a == 5.75);
        CHECK(p.rates.f == 0.3);
        CHECK(p.collective_coupling == doctest::Approx(6000.0));
    }

    TEST_CASE("constants table")
    {
        const auto& c = builtin_constants();
        CHECK(c.mass == mass);
        CHECK(c.get("rb87.d1_wavelength") == lambda);
        CHECK(Constants::keys().size() == 15);

        std::ifstream in(LWI_SOURCE_DIR "/data/constants.yaml");
        REQUIRE(in);
        const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        CHECK(parse_constants(text) == c);

        auto copy = c;
        copy.set("rb87.mass", 2.0 * mass);
        CHECK(copy.mass == 2.0 * mass);
        CHECK_THROWS_AS(copy.set("rb87.charge", 1.0), std::invalid_argument);

        CHECK_THROWS_WITH_AS(parse_constants(text + "extra: 1\n"),
                             doctest::Contains("unknown key 'extra'"), std::runtime_error);
        std::string missing = text;
        missing.replace(missing.find("  mass:"), 6, "  mast:");
        CHECK_THROWS_WITH_AS(parse_constants(missing), doctest::Contains("rb87.mast"),
                             std::runtime_error);
        CHECK_THROWS_AS(load_constants("/nonexistent/constants.yaml"), std::runtime_error);
    }

    TEST_CASE("constants from the environment")
    {
        std::ifstream in(LWI_SOURCE_DIR "/data/constants.yaml");
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        text.replace(text.find("d1_natural_linewidth: 5.75"), 26, "d1_natural_linewidth: 6.0");
        const std::string path = "lwi_test_constants.yaml";
        std::ofstream(path) << text;

        ::setenv(constants_env_var, path.c_str(), 1);
        const auto c = constants_from_environment();
        ::unsetenv(constants_env_var);
        CHECK(c.d1_natural_linewidth == 6.0);
        CHECK(constants_from_environment() == builtin_constants());
        std::remove(path.c_str());
    }
}

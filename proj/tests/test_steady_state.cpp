#include "oracles.hpp"

#include <lwi/steady_state.hpp>

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace lwi;

namespace {

double max_diff(const CoherenceVector& a, const CoherenceVector& b)
{
    const auto x = a.to_array(), y = b.to_array();
    double m = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k)
        m = std::max(m, std::abs(x[k] - y[k]));
    return m;
}

} // namespace

TEST_SUITE("steady-state")
{
    TEST_CASE("affine form without fields")
    {
        const auto r = oracle::preset_rates();
        const auto sys = assemble_affine(r, DriveConfig{});
        CHECK(sys.constant(1) == r.gamma_c);
        CHECK(sys.constant(4) == 0.0);
        CHECK(sys.constant(0) == 0.0);
        CHECK(sys.matrix(0, 0) == -r.gamma_a);
        CHECK(sys.matrix(1, 0) == doctest::Approx(r.f * r.gamma_a - r.gamma_c));
        CHECK(sys.matrix(1, 1) == doctest::Approx(-r.gamma_b - r.gamma_c));
        for (int i = 2; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
                if (i != j)
                    CHECK(sys.matrix(i, j) == 0.0);
    }

    TEST_CASE("pump term in the constant vector")
    {
        const auto sys = assemble_affine(oracle::preset_rates(), oracle::preset_drive(160.0));
        CHECK(sys.constant(4) == -80.0);
    }

    TEST_CASE("affine form matches the right-hand side")
    {
        oracle::Sampler s(21);
        for (int i = 0; i < 20; ++i) {
            const auto t = s.tuple();
            const auto sys = assemble_affine(t.rates, t.drive);
            const auto [m, c] = oracle::probe_system(t.rates, t.drive);
            CHECK((sys.matrix - m).norm() <= 1e-12 * m.norm());
            for (int k = 0; k < 100; ++k) {
                const CoherenceVector x{s.uniform(0, 1), s.uniform(0, 1), s.uniform(-1, 1),
                                        s.uniform(-1, 1), s.uniform(-1, 1)};
                const Vector5 lhs = sys.evaluate(to_vector(x));
                const Vector5 rhs = to_vector(bloch_rhs(x, t.rates, t.drive));
                CHECK((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm() + m.norm()));
            }
        }
    }

    TEST_CASE("unpumped steady state, equal exchange rates")
    {
        const auto st = linear_steady_state(oracle::preset_rates(), DriveConfig{});
        CHECK(st.rho_aa == doctest::Approx(0.0));
        CHECK(st.rho_bb == doctest::Approx(0.5));
        CHECK(st.i_rho_ab == doctest::Approx(0.0));
        CHECK(st.rho_cb == doctest::Approx(0.0));
        CHECK(st.i_rho_ca == doctest::Approx(0.0));
    }

    TEST_CASE("unpumped steady state, unequal exchange rates")
    {
        auto r = oracle::preset_rates();
        r.gamma_b = 0.01;
        r.gamma_c = 0.03;
        r.gamma_bc = 0.02;
        CHECK(linear_steady_state(r, DriveConfig{}).rho_bb == doctest::Approx(0.75).epsilon(1e-12));
        CHECK(unpumped_equilibrium(r).rho_bb == doctest::Approx(0.75));
    }

    TEST_CASE("degenerate rates raise a singular-system error")
    {
        auto r = oracle::preset_rates();
        r.gamma_b = r.gamma_c = 0.0;
        CHECK_THROWS_AS(linear_steady_state(r, DriveConfig{}), SingularSystemError);
        try {
            linear_steady_state(r, DriveConfig{});
        } catch (const SingularSystemError& e) {
            CHECK(e.pivot_index() >= 0);
            CHECK(std::string(e.what()).find("pivot") != std::string::npos);
        }
    }

    TEST_CASE("linear solve residual")
    {
        oracle::Sampler s(22);
        for (int i = 0; i < 200; ++i) {
            const auto t = s.tuple();
            const auto st = linear_steady_state(t.rates, t.drive);
            CHECK(residual_norm(st, t.rates, t.drive) <= 1e-10);
            const auto ref = oracle::steady(t.rates, t.drive);
            CHECK(max_diff(st, from_vector(ref)) <= 1e-9);
        }
    }

    TEST_CASE("steady populations stay physical")
    {
        oracle::Sampler s(23);
        for (int i = 0; i < 200; ++i) {
            const auto t = s.tuple();
            const auto st = linear_steady_state(t.rates, t.drive);
            for (double p : {st.rho_aa, st.rho_bb, rho_cc(st)}) {
                CHECK(p >= -1e-12);
                CHECK(p <= 1.0 + 1e-12);
            }
            for (double c : {st.i_rho_ab, st.rho_cb, st.i_rho_ca})
                CHECK(std::abs(c) <= 1.0);
        }
    }

    TEST_CASE("preset operating point, linear solve vs integration")
    {
        const auto r = oracle::preset_rates();
        const auto d = oracle::preset_drive(160.0, 0.01);
        const auto rep = integrate_to_steady(r, d, 1e-10, 1e7);
        CHECK(rep.converged);
        CHECK(rep.residual_norm <= 1e-10);
        CHECK(max_diff(rep.final_state, linear_steady_state(r, d)) <= 1e-8);
    }

    TEST_CASE("no fields converges immediately")
    {
        auto r = oracle::preset_rates();
        r.gamma_c = 0.02;
        r.gamma_bc = 0.02;
        const auto rep = integrate_to_steady(r, DriveConfig{}, 1e-10, 1.0);
        CHECK(rep.converged);
        CHECK(rep.accepted_steps == 0);
        CHECK(rep.final_state.rho_bb == doctest::Approx(0.02 / 0.033));
        CHECK(rep.final_state.rho_aa == 0.0);
    }

    TEST_CASE("stiff case with very slow exchange still converges")
    {
        auto r = oracle::preset_rates();
        r.gamma_b = 1e-5;
        const auto d = oracle::preset_drive(160.0, 0.01);
        const auto rep = integrate_to_steady(r, d, 1e-10, 1e9);
        CHECK(rep.converged);
        CHECK(max_diff(rep.final_state, linear_steady_state(r, d)) <= 1e-8);
    }

    TEST_CASE("non-convergence is reported, not thrown")
    {
        const auto rep = integrate_to_steady(oracle::preset_rates(), oracle::preset_drive(), 1e-10, 1.0);
        CHECK_FALSE(rep.converged);
        CHECK(rep.elapsed_model_time == doctest::Approx(1.0));
        CHECK(rep.residual_norm > 1e-10);
    }

    TEST_CASE("steady state does not depend on the initial state")
    {
        const auto r = oracle::preset_rates();
        const auto d = oracle::preset_drive(120.0, 0.5);
        const auto a = integrate_to_steady(r, d, {1, 0, 0, 0, 0}, 1e-10, 1e8);
        const auto b = integrate_to_steady(r, d, {0, 0, 0, 0, 0}, 1e-10, 1e8);
        CHECK(a.converged);
        CHECK(b.converged);
        CHECK(max_diff(a.final_state, b.final_state) <= 1e-6);
    }

    TEST_CASE("trajectory from a fixed point stays put")
    {
        const auto r = oracle::preset_rates();
        const auto d = oracle::preset_drive(160.0, 0.1);
        const auto st = linear_steady_state(r, d);
        const auto traj = integrate_transient(r, d, st, 10.0);
        for (const auto& p : traj.points)
            CHECK(max_diff(p.state, st) <= 1e-9);
    }

    TEST_CASE("upper-level decay is exponential")
    {
        auto r = oracle::preset_rates();
        for (Stepper stepper : {Stepper::dormand_prince, Stepper::rosenbrock}) {
            StepControl c;
            c.stepper = stepper;
            if (stepper == Stepper::rosenbrock) {
                c.rel_tol = 1e-9;
                c.abs_tol = 1e-14;
            }
            c.sample_interval = 0.05;
            const auto traj = integrate_transient(r, DriveConfig{}, {1, 0, 0, 0, 0}, 2.0, c);
            REQUIRE(traj.points.size() > 10);
            for (const auto& p : traj.points) {
                const double expected = std::exp(-r.gamma_a * p.t);
                CHECK(std::abs(p.state.rho_aa - expected) <= 1e-6 * expected);
            }
        }
    }

    TEST_CASE("populations stay physical at every accepted step")
    {
        oracle::Sampler s(24);
        for (int i = 0; i < 10; ++i) {
            const auto t = s.tuple();
            bool inside = true;
            integrate_transient(t.rates, t.drive, unpumped_equilibrium(t.rates), 5.0, {},
                                [&](double, const CoherenceVector& st) {
                                    for (double p : {st.rho_aa, st.rho_bb, rho_cc(st)})
                                        inside = inside && p >= -1e-9 && p <= 1.0 + 1e-9;
                                });
            CHECK(inside);
        }
    }

    TEST_CASE("preset settles within tens of model microseconds")
    {
        const auto r = oracle::preset_rates();
        const auto d = oracle::preset_drive(160.0);
        double reached = -1.0;
        integrate_transient(r, d, unpumped_equilibrium(r), 500.0, {},
                            [&](double t, const CoherenceVector& st) {
                                if (reached < 0.0 && residual_norm(st, r, d) <= 1e-3)
                                    reached = t;
                            });
        CHECK(reached >= 3.0);
        CHECK(reached <= 100.0);
    }

    TEST_CASE("step underflow is reported with its time")
    {
        StepControl c;
        c.min_step = 1.0;
        CHECK_THROWS_AS(integrate_transient(oracle::preset_rates(), oracle::preset_drive(), {}, 10.0, c),
                        StepUnderflowError);
    }

    TEST_CASE("trajectory CSV")
    {
        const auto r = oracle::preset_rates();
        StepControl c;
        c.sample_interval = 0.5;
        const auto traj = integrate_transient(r, oracle::preset_drive(), unpumped_equilibrium(r), 2.0, c);
        std::ostringstream os;
        write_trajectory_csv(os, traj);
        std::istringstream is(os.str());
        std::string header;
        std::getline(is, header);
        CHECK(header == "t_us,rho_aa,rho_bb,rho_cc,i_rho_ab,rho_cb,i_rho_ca");
        std::size_t lines = 0;
        for (std::string l; std::getline(is, l);)
            ++lines;
        CHECK(lines == traj.points.size());
        CHECK(traj.points.front().t == 0.0);
        CHECK(traj.points.back().t == doctest::Approx(2.0));
    }
}

#include <lwi/steady_state.hpp>

#include <lwi/format.hpp>

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace lwi {

namespace odeint = boost::numeric::odeint;

namespace {

enum Index { AA = 0, BB = 1, AB = 2, CB = 3, CA = 4 };

using State = std::array<double, 5>;

std::string singular_message(int index, double value)
{
    std::ostringstream msg;
    msg << "steady-state system is singular: pivot " << index
        << " has magnitude " << value;
    return msg.str();
}

std::string underflow_message(double t, double dt)
{
    std::ostringstream msg;
    msg << "step size underflow at t = " << t << " (step " << dt << ")";
    return msg.str();
}

struct BlochSystem
{
    const RateSet& rates;
    const DriveConfig& drive;

    void operator()(const State& x, State& dxdt, double /*t*/) const
    {
        dxdt = bloch_rhs(CoherenceVector::from_array(x), rates, drive).to_array();
    }
};

/// Jacobian by probing bloch_rhs along unit vectors (exact for an affine
/// right-hand side), so it does not depend on assemble_affine.
Matrix5 probed_jacobian(const RateSet& rates, const DriveConfig& drive)
{
    const auto origin = bloch_rhs(CoherenceVector{}, rates, drive).to_array();
    Matrix5 jacobian;
    for (int k = 0; k < 5; ++k) {
        State unit{};
        unit[k] = 1.0;
        const auto column = bloch_rhs(CoherenceVector::from_array(unit), rates, drive).to_array();
        for (int i = 0; i < 5; ++i)
            jacobian(i, k) = column[i] - origin[i];
    }
    return jacobian;
}

double array_norm(const State& x)
{
    double sum = 0.0;
    for (double v : x)
        sum += v * v;
    return std::sqrt(sum);
}

double step_floor(const StepControl& control, double t)
{
    return std::max(control.min_step,
                    8.0 * std::numeric_limits<double>::epsilon() * std::abs(t));
}

/// Drives the controlled stepper and hands each accepted step to @p accept.
/// @p accept returns false to stop early.
template <typename Accept>
void step_loop(const RateSet& rates, const DriveConfig& drive, State& x, double& t,
               double t_end, const StepControl& control, Accept&& accept)
{
    const double radius = assemble_affine(rates, drive).matrix.lpNorm<Eigen::Infinity>();
    const double max_dt = radius > 0.0 ? 2.0 / radius : 1e300;
    auto stepper = odeint::make_controlled(control.abs_tol, control.rel_tol, max_dt,
                                           odeint::runge_kutta_dopri5<State>());
    BlochSystem system{rates, drive};
    State dxdt;
    system(x, dxdt, t);

    double dt = std::min(control.initial_step, t_end - t);
    while (t < t_end) {
        const double remaining = t_end - t;
        const bool clipped = dt >= remaining;
        double trial = clipped ? remaining : dt;

        if (stepper.try_step(system, x, dxdt, t, trial) == odeint::success) {
            if (clipped)
                t = t_end;
            if (!accept(t, x, dxdt))
                return;
            // try_step proposes the next step in trial; keep the unclipped
            // proposal when the last step was shortened to land on t_end.
            dt = clipped ? std::max(trial, dt) : trial;
        } else {
            dt = trial;
            if (dt < step_floor(control, t))
                throw StepUnderflowError(t, dt);
        }
    }
}

/**
 * Two-stage L-stable Rosenbrock method (ROS2, gamma = 1 + 1/sqrt(2)) with the
 * linearly implicit Euler solution as embedded first-order estimate.
 */
template <typename Accept>
void implicit_step_loop(const RateSet& rates, const DriveConfig& drive, State& x,
                        double& t, double t_end, const StepControl& control,
                        Accept&& accept)
{
    constexpr double gamma = 1.0 + 0.70710678118654752440;
    const Matrix5 jacobian = probed_jacobian(rates, drive);
    const Matrix5 identity = Matrix5::Identity();
    BlochSystem system{rates, drive};

    auto rhs = [&](const Vector5& y) {
        State in, out;
        for (int k = 0; k < 5; ++k)
            in[k] = y(k);
        system(in, out, t);
        Vector5 r;
        for (int k = 0; k < 5; ++k)
            r(k) = out[k];
        return r;
    };

    Vector5 y;
    for (int k = 0; k < 5; ++k)
        y(k) = x[k];
    Vector5 fy = rhs(y);

    double dt = std::min(control.initial_step, t_end - t);
    while (t < t_end) {
        const double remaining = t_end - t;
        const bool clipped = dt >= remaining;
        const double h = clipped ? remaining : dt;

        const Eigen::PartialPivLU<Matrix5> lu(identity - gamma * h * jacobian);
        const Vector5 k1 = lu.solve(fy);
        const Vector5 k2 = lu.solve(rhs(y + h * k1) - 2.0 * k1);
        const Vector5 next = y + h * (1.5 * k1 + 0.5 * k2);
        const Vector5 delta = 0.5 * h * (k1 + k2);

        double err = 0.0;
        for (int k = 0; k < 5; ++k) {
            const double scale = control.abs_tol
                                 + control.rel_tol * std::max(std::abs(y(k)), std::abs(next(k)));
            err = std::max(err, std::abs(delta(k)) / scale);
        }

        const double factor =
            err > 0.0 ? std::clamp(0.9 / std::sqrt(err), 0.2, 5.0) : 5.0;
        if (err <= 1.0) {
            t = clipped ? t_end : t + h;
            y = next;
            fy = rhs(y);
            State state, dxdt;
            for (int k = 0; k < 5; ++k) {
                state[k] = y(k);
                dxdt[k] = fy(k);
            }
            x = state;
            if (!accept(t, x, dxdt))
                return;
            dt = std::max(dt, h) * factor;
            if (clipped)
                dt = std::max(dt, h);
        } else {
            dt = h * factor;
            if (dt < step_floor(control, t))
                throw StepUnderflowError(t, dt);
        }
    }
}

} // namespace

std::string to_string(Stepper s)
{
    return s == Stepper::rosenbrock ? "rosenbrock" : "dormand-prince";
}

SingularSystemError::SingularSystemError(int pivot_index, double pivot_value)
  : std::runtime_error(singular_message(pivot_index, pivot_value)),
    m_pivot_index(pivot_index), m_pivot_value(pivot_value)
{
}

StepUnderflowError::StepUnderflowError(double time, double step)
  : std::runtime_error(underflow_message(time, step)), m_time(time), m_step(step)
{
}

Vector5 to_vector(const CoherenceVector& s)
{
    Vector5 x;
    x << s.rho_aa, s.rho_bb, s.i_rho_ab, s.rho_cb, s.i_rho_ca;
    return x;
}

CoherenceVector from_vector(const Vector5& x)
{
    return {x(0), x(1), x(2), x(3), x(4)};
}

AffineSystem assemble_affine(const RateSet& r, const DriveConfig& d)
{
    const double ga = d.field_coupling();
    const double w = d.omega;

    AffineSystem sys;
    Matrix5& m = sys.matrix;
    Vector5& c = sys.constant;

    m(AB, AA) = -ga;
    m(AB, BB) = ga;
    m(AB, AB) = -r.gamma_ba;
    m(AB, CB) = 0.5 * w;

    m(CB, AB) = -0.5 * w;
    m(CB, CB) = -r.gamma_bc;
    m(CB, CA) = ga;

    c(CA) = -0.5 * w;
    m(CA, AA) = w;
    m(CA, BB) = 0.5 * w;
    m(CA, CB) = -ga;
    m(CA, CA) = -r.gamma_ac;

    m(AA, AA) = -r.gamma_a;
    m(AA, AB) = 2.0 * ga;
    m(AA, CA) = -w;

    c(BB) = r.gamma_c;
    m(BB, AA) = r.f * r.gamma_a - r.gamma_c;
    m(BB, BB) = -r.gamma_b - r.gamma_c;
    m(BB, AB) = -2.0 * ga;
    return sys;
}

CoherenceVector solve_linear_steady(const AffineSystem& sys)
{
    const Eigen::FullPivLU<Matrix5> lu(sys.matrix);
    const Vector5 pivots = lu.matrixLU().diagonal();
    const double largest = pivots.cwiseAbs().maxCoeff();
    if (!(largest > 0.0))
        throw SingularSystemError(0, 0.0);
    for (int k = 0; k < 5; ++k) {
        if (std::abs(pivots(k)) <= 1e-14 * largest)
            throw SingularSystemError(k, std::abs(pivots(k)));
    }

    Vector5 x = lu.solve(-sys.constant);
    // one round of iterative refinement
    x -= lu.solve(sys.evaluate(x));
    return from_vector(x);
}

CoherenceVector linear_steady_state(const RateSet& rates, const DriveConfig& drive)
{
    return solve_linear_steady(assemble_affine(rates, drive));
}

double residual_norm(const CoherenceVector& state, const RateSet& rates,
                     const DriveConfig& drive)
{
    return norm(bloch_rhs(state, rates, drive));
}

CoherenceVector unpumped_equilibrium(const RateSet& r)
{
    const double total = r.gamma_b + r.gamma_c;
    CoherenceVector s;
    s.rho_bb = total > 0.0 ? r.gamma_c / total : 0.5;
    return s;
}

Trajectory integrate_transient(const RateSet& rates, const DriveConfig& drive,
                               const CoherenceVector& initial, double t_final,
                               const StepControl& control, const StepObserver& observer)
{
    if (!(t_final > 0.0))
        throw std::invalid_argument("t_final must be positive");

    Trajectory out;
    State x = initial.to_array();
    double t = 0.0;
    out.points.push_back({0.0, initial});
    if (observer)
        observer(0.0, initial);

    double next_sample = control.sample_interval;
    State last_dxdt{};
    auto record = [&](double time, const State& state, const State& dxdt) {
                  ++out.accepted_steps;
                  const auto current = CoherenceVector::from_array(state);
                  if (observer)
                      observer(time, current);
                  if (control.sample_interval <= 0.0 || time >= next_sample
                      || time >= t_final) {
                      out.points.push_back({time, current});
                      while (control.sample_interval > 0.0 && next_sample <= time)
                          next_sample += control.sample_interval;
                  }
                  last_dxdt = dxdt;
                  return true;
              };
    if (control.stepper == Stepper::rosenbrock)
        implicit_step_loop(rates, drive, x, t, t_final, control, record);
    else
        step_loop(rates, drive, x, t, t_final, control, record);
    out.final_residual = array_norm(last_dxdt);
    return out;
}

IntegrationReport integrate_to_steady(const RateSet& rates, const DriveConfig& drive,
                                      double tolerance, double t_max,
                                      const StepControl& control)
{
    return integrate_to_steady(rates, drive, unpumped_equilibrium(rates), tolerance,
                               t_max, control);
}

IntegrationReport integrate_to_steady(const RateSet& rates, const DriveConfig& drive,
                                      const CoherenceVector& initial, double tolerance,
                                      double t_max, const StepControl& control)
{
    IntegrationReport report;
    report.final_state = initial;
    report.residual_norm = residual_norm(initial, rates, drive);
    if (report.residual_norm <= tolerance) {
        report.converged = true;
        return report;
    }

    State x = initial.to_array();
    double t = 0.0;
    std::size_t explicit_steps = 0;
    bool budget_spent = false;
    auto track = [&](double, const State&, const State& dxdt) {
        ++report.accepted_steps;
        report.residual_norm = array_norm(dxdt);
        return report.residual_norm > tolerance;
    };

    if (control.stepper == Stepper::dormand_prince) {
        step_loop(rates, drive, x, t, t_max, control,
                  [&](double time, const State& state, const State& dxdt) {
                      if (!track(time, state, dxdt))
                          return false;
                      if (control.explicit_step_budget > 0
                          && ++explicit_steps >= control.explicit_step_budget) {
                          budget_spent = true;
                          return false;
                      }
                      return true;
                  });
    }
    if (control.stepper == Stepper::rosenbrock) {
        report.finished_with = Stepper::rosenbrock;
        implicit_step_loop(rates, drive, x, t, t_max, control, track);
    } else if (budget_spent && t < t_max) {
        report.finished_with = Stepper::rosenbrock;
        StepControl relaxed = control;
        relaxed.rel_tol = control.relaxation_rel_tol;
        relaxed.abs_tol = control.relaxation_abs_tol;
        implicit_step_loop(rates, drive, x, t, t_max, relaxed, track);
    }
    report.final_state = CoherenceVector::from_array(x);
    report.elapsed_model_time = t;
    report.converged = report.residual_norm <= tolerance;
    return report;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory)
{
    os << "t_us,rho_aa,rho_bb,rho_cc,i_rho_ab,rho_cb,i_rho_ca\n";
    for (const auto& p : trajectory.points) {
        const auto& s = p.state;
        os << format_double(p.t) << ',' << format_double(s.rho_aa) << ','
           << format_double(s.rho_bb) << ',' << format_double(rho_cc(s)) << ','
           << format_double(s.i_rho_ab) << ',' << format_double(s.rho_cb) << ','
           << format_double(s.i_rho_ca) << '\n';
    }
}

} // namespace lwi

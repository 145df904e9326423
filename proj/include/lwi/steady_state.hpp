#ifndef LWI_STEADY_STATE_HPP
#define LWI_STEADY_STATE_HPP

#include <lwi/bloch.hpp>

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace lwi {

using Matrix5 = Eigen::Matrix<double, 5, 5>;
using Vector5 = Eigen::Matrix<double, 5, 1>;

Vector5 to_vector(const CoherenceVector& s);
CoherenceVector from_vector(const Vector5& x);

/// d(state)/dt = matrix * state + constant, in CoherenceVector component order.
struct AffineSystem
{
    Matrix5 matrix = Matrix5::Zero();
    Vector5 constant = Vector5::Zero();

    Vector5 evaluate(const Vector5& x) const { return matrix * x + constant; }
};

AffineSystem assemble_affine(const RateSet& rates, const DriveConfig& drive);

class SingularSystemError : public std::runtime_error
{
public:
    SingularSystemError(int pivot_index, double pivot_value);

    int pivot_index() const { return m_pivot_index; }
    double pivot_value() const { return m_pivot_value; }

private:
    int m_pivot_index;
    double m_pivot_value;
};

class StepUnderflowError : public std::runtime_error
{
public:
    StepUnderflowError(double time, double step);

    double time() const { return m_time; }
    double step() const { return m_step; }

private:
    double m_time;
    double m_step;
};

/**
 * Fixed point of the affine system by full-pivoting LU.
 *
 * Throws SingularSystemError when a pivot is negligible relative to the
 * largest one, which happens for degenerate rates such as
 * gamma_b = gamma_c = 0 with no fields applied.
 */
CoherenceVector solve_linear_steady(const AffineSystem& sys);

/// Convenience: assemble and solve in one call.
CoherenceVector linear_steady_state(const RateSet& rates, const DriveConfig& drive);

/// Norm of bloch_rhs at the given state.
double residual_norm(const CoherenceVector& state, const RateSet& rates,
                     const DriveConfig& drive);

/// Collisional equilibrium without fields: rho_bb = gamma_c/(gamma_b + gamma_c).
CoherenceVector unpumped_equilibrium(const RateSet& rates);

enum class Stepper {
    dormand_prince, ///< explicit adaptive 5(4) Runge-Kutta
    rosenbrock      ///< L-stable linearly implicit 4(3) method
};

std::string to_string(Stepper s);

/// Step controller settings for the adaptive integrators.
struct StepControl
{
    Stepper stepper = Stepper::dormand_prince;
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double initial_step = 1e-3;
    /// Steps smaller than this (in model microseconds) abort the integration.
    double min_step = 1e-13;
    /// Spacing of recorded trajectory points; 0 records every accepted step.
    double sample_interval = 0.0;
    /// integrate_to_steady hands over to the Rosenbrock stepper after this
    /// many explicit steps without convergence; 0 disables the hand-over.
    std::size_t explicit_step_budget = 200'000;
    /// Tolerances of the Rosenbrock phase after the hand-over. Only the fixed
    /// point matters there, and convergence is still judged by the residual.
    double relaxation_rel_tol = 1e-2;
    double relaxation_abs_tol = 1e-6;

    bool operator==(const StepControl&) const = default;
};

struct TrajectoryPoint
{
    double t;
    CoherenceVector state;
};

struct Trajectory
{
    std::vector<TrajectoryPoint> points;
    double final_residual = 0.0;
    std::size_t accepted_steps = 0;
};

/// Called after every accepted step with the model time and state.
using StepObserver = std::function<void(double, const CoherenceVector&)>;

Trajectory integrate_transient(const RateSet& rates, const DriveConfig& drive,
                               const CoherenceVector& initial, double t_final,
                               const StepControl& control = {},
                               const StepObserver& observer = {});

struct IntegrationReport
{
    CoherenceVector final_state;
    double elapsed_model_time = 0.0;
    bool converged = false;
    double residual_norm = 0.0;
    std::size_t accepted_steps = 0;
    /// Stepper that produced the final state.
    Stepper finished_with = Stepper::dormand_prince;
};

/**
 * Integrates from the unpumped equilibrium (or @p initial when given) until
 * the residual drops to @p tolerance or @p t_max is reached. Running out of
 * time is reported through the converged flag, not thrown.
 *
 * The explicit stepper is used first. Weakly damped fast coherences (pump
 * Rabi frequency far above the coherence decay rates) make it
 * accuracy-limited for very long times; once explicit_step_budget steps are
 * spent the remaining interval is integrated with the Rosenbrock stepper.
 */
IntegrationReport integrate_to_steady(const RateSet& rates, const DriveConfig& drive,
                                      double tolerance, double t_max,
                                      const StepControl& control = {});

IntegrationReport integrate_to_steady(const RateSet& rates, const DriveConfig& drive,
                                      const CoherenceVector& initial,
                                      double tolerance, double t_max,
                                      const StepControl& control = {});

/// CSV with header t_us,rho_aa,rho_bb,rho_cc,i_rho_ab,rho_cb,i_rho_ca.
void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory);

} // namespace lwi

#endif

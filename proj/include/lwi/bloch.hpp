#ifndef LWI_BLOCH_HPP
#define LWI_BLOCH_HPP

#include <array>
#include <string>
#include <vector>

namespace lwi {

/**
 * Decay and collisional exchange rates of the three-level lambda atom.
 *
 * Level |a> is the excited state, |b> the lower lasing state and |c> the
 * state coupled to |a> by the pump. All rates are in MHz; the same unit is
 * used for Rabi frequencies and gains, so only ratios and products matter.
 */
struct RateSet
{
    double gamma_a = 0.0;  ///< total spontaneous decay of |a>
    double gamma_b = 0.0;  ///< collisional population flow |b> -> |c>
    double gamma_c = 0.0;  ///< collisional population flow |c> -> |b>
    double gamma_bc = 0.0; ///< decay of the ground-state coherence rho_cb
    double gamma_ba = 0.0; ///< decay of rho_ab
    double gamma_ac = 0.0; ///< decay of rho_ca
    double f = 0.0;        ///< fraction of |a> decay that lands in |b>

    bool operator==(const RateSet&) const = default;
};

/**
 * Field configuration. The collective coupling g*sqrt(N) is carried
 * directly; the single-atom g only enters through products g*a.
 */
struct DriveConfig
{
    double omega = 0.0;               ///< pump Rabi frequency on |c>-|a>, MHz
    double a = 0.0;                   ///< cavity field amplitude
    double g = 1.0;                   ///< single-atom coupling, MHz
    double collective_coupling = 0.0; ///< g*sqrt(N), MHz

    double field_coupling() const { return g * a; }
    double g2n() const { return collective_coupling * collective_coupling; }

    bool operator==(const DriveConfig&) const = default;
};

/**
 * Real state of the resonant lambda system. With both fields on resonance
 * i*rho_ab, rho_cb and i*rho_ca are real, and rho_cc follows from closure.
 */
struct CoherenceVector
{
    double rho_aa = 0.0;
    double rho_bb = 0.0;
    double i_rho_ab = 0.0;
    double rho_cb = 0.0;
    double i_rho_ca = 0.0;

    static constexpr std::size_t size = 5;

    std::array<double, size> to_array() const
    {
        return {rho_aa, rho_bb, i_rho_ab, rho_cb, i_rho_ca};
    }
    static CoherenceVector from_array(const std::array<double, size>& x)
    {
        return {x[0], x[1], x[2], x[3], x[4]};
    }

    bool operator==(const CoherenceVector&) const = default;
};

enum class RateViolation {
    negative_rate,
    nonpositive_upper_decay,
    branching_fraction_out_of_range,
    coherence_floor,
    non_finite
};

struct RateIssue
{
    RateViolation kind;
    std::string field;
    std::string message;
};

/// Every violated RateSet invariant; an empty result means usable rates.
std::vector<RateIssue> validate_rates(const RateSet& rates);

std::string to_string(RateViolation v);

/// Joins issue messages with "; ", for error reporting.
std::string describe(const std::vector<RateIssue>& issues);

/// Time derivative of the state under the resonant equations of motion.
inline CoherenceVector bloch_rhs(const CoherenceVector& s, const RateSet& r,
                                 const DriveConfig& d)
{
    const double ga = d.field_coupling();
    const double half_omega = 0.5 * d.omega;

    CoherenceVector dt;
    dt.i_rho_ab = -ga * (s.rho_aa - s.rho_bb) + half_omega * s.rho_cb
                  - r.gamma_ba * s.i_rho_ab;
    dt.rho_cb = ga * s.i_rho_ca - half_omega * s.i_rho_ab - r.gamma_bc * s.rho_cb;
    dt.i_rho_ca = -half_omega * (1.0 - s.rho_bb - 2.0 * s.rho_aa) - ga * s.rho_cb
                  - r.gamma_ac * s.i_rho_ca;
    dt.rho_aa = -d.omega * s.i_rho_ca + 2.0 * ga * s.i_rho_ab - r.gamma_a * s.rho_aa;
    dt.rho_bb = -2.0 * ga * s.i_rho_ab + r.f * r.gamma_a * s.rho_aa
                - r.gamma_b * s.rho_bb + r.gamma_c * (1.0 - s.rho_aa - s.rho_bb);
    return dt;
}

inline double rho_cc(const CoherenceVector& s) { return 1.0 - s.rho_aa - s.rho_bb; }

/// Euclidean norm over the five components.
double norm(const CoherenceVector& s);

CoherenceVector operator+(const CoherenceVector& x, const CoherenceVector& y);
CoherenceVector operator-(const CoherenceVector& x, const CoherenceVector& y);
CoherenceVector operator*(double k, const CoherenceVector& x);

} // namespace lwi

#endif

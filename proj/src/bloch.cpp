#include <lwi/bloch.hpp>

#include <cmath>
#include <sstream>

namespace lwi {

namespace {

void check_rate(std::vector<RateIssue>& out, const char* name, double value)
{
    if (!std::isfinite(value)) {
        out.push_back({RateViolation::non_finite, name,
                       std::string(name) + " is not finite"});
    } else if (value < 0.0) {
        std::ostringstream msg;
        msg << name << " = " << value << " is negative";
        out.push_back({RateViolation::negative_rate, name, msg.str()});
    }
}

} // namespace

std::vector<RateIssue> validate_rates(const RateSet& r)
{
    std::vector<RateIssue> issues;
    check_rate(issues, "gamma_a", r.gamma_a);
    check_rate(issues, "gamma_b", r.gamma_b);
    check_rate(issues, "gamma_c", r.gamma_c);
    check_rate(issues, "gamma_bc", r.gamma_bc);
    check_rate(issues, "gamma_ba", r.gamma_ba);
    check_rate(issues, "gamma_ac", r.gamma_ac);

    if (std::isfinite(r.gamma_a) && r.gamma_a == 0.0) {
        issues.push_back({RateViolation::nonpositive_upper_decay, "gamma_a",
                          "gamma_a must be strictly positive"});
    }
    if (!std::isfinite(r.f)) {
        issues.push_back({RateViolation::non_finite, "f", "f is not finite"});
    } else if (r.f < 0.0 || r.f > 1.0) {
        std::ostringstream msg;
        msg << "branching fraction f = " << r.f << " lies outside [0, 1]";
        issues.push_back({RateViolation::branching_fraction_out_of_range, "f",
                          msg.str()});
    }

    const double floor = 0.5 * (r.gamma_b + r.gamma_c);
    if (std::isfinite(floor) && std::isfinite(r.gamma_bc) && r.gamma_bc < floor) {
        std::ostringstream msg;
        msg << "coherence floor violated: gamma_bc = " << r.gamma_bc
            << " < (gamma_b + gamma_c)/2 = " << floor;
        issues.push_back({RateViolation::coherence_floor, "gamma_bc", msg.str()});
    }
    return issues;
}

std::string to_string(RateViolation v)
{
    switch (v) {
    case RateViolation::negative_rate:
        return "negative-rate";
    case RateViolation::nonpositive_upper_decay:
        return "nonpositive-upper-decay";
    case RateViolation::branching_fraction_out_of_range:
        return "branching-fraction";
    case RateViolation::coherence_floor:
        return "coherence-floor";
    case RateViolation::non_finite:
        return "non-finite";
    }
    return "unknown";
}

std::string describe(const std::vector<RateIssue>& issues)
{
    std::string out;
    for (const auto& issue : issues) {
        if (!out.empty())
            out += "; ";
        out += issue.message;
    }
    return out;
}

double norm(const CoherenceVector& s)
{
    double sum = 0.0;
    for (double x : s.to_array())
        sum += x * x;
    return std::sqrt(sum);
}

CoherenceVector operator+(const CoherenceVector& x, const CoherenceVector& y)
{
    return {x.rho_aa + y.rho_aa, x.rho_bb + y.rho_bb, x.i_rho_ab + y.i_rho_ab,
            x.rho_cb + y.rho_cb, x.i_rho_ca + y.i_rho_ca};
}

CoherenceVector operator-(const CoherenceVector& x, const CoherenceVector& y)
{
    return {x.rho_aa - y.rho_aa, x.rho_bb - y.rho_bb, x.i_rho_ab - y.i_rho_ab,
            x.rho_cb - y.rho_cb, x.i_rho_ca - y.i_rho_ca};
}

CoherenceVector operator*(double k, const CoherenceVector& x)
{
    return {k * x.rho_aa, k * x.rho_bb, k * x.i_rho_ab, k * x.rho_cb, k * x.i_rho_ca};
}

} // namespace lwi

#include <lwi/format.hpp>
#include <lwi/presets.hpp>

namespace lwi {

namespace {

std::string common_block(double omega)
{
    return "rates:\n"
           "  gamma_a: 5.75      # anchor: 87Rb D1 natural linewidth, MHz\n"
           "  gamma_b: 0.013     # anchor: collisional exchange rate estimate of ~0.013 MHz\n"
           "  gamma_c: 0.013     # choice: symmetric exchange, equal to gamma_b\n"
           "  gamma_bc: 0.013    # choice: ground coherence decay at its floor (gamma_b + gamma_c)/2\n"
           "  gamma_ba: 2.875    # choice: gamma_a/2 (radiative limit)\n"
           "  gamma_ac: 2.875    # choice: gamma_a/2 (radiative limit)\n"
           "  f: 0.3             # choice: branching fraction of |a> decay into |b>\n"
           "drive:\n"
           "  omega: "
           + format_double(omega)
           + "\n"
             "  a: 0              # small-signal reports use a -> 0\n"
             "  g: 1              # choice: single-atom coupling, enters only through g*a\n"
             "  collective_coupling: 3000   # anchor: g sqrt(N) of about 3 GHz\n"
             "pump:\n"
             "  calibration: "
           + format_double(default_rabi_calibration())
           + "   # anchor: 21.8 mW <-> 148 MHz\n"
             "cavity:\n"
             "  round_trip_length: 0.37     # anchor: 37 cm ring cavity\n"
             "  transmissivity_m1: 0.03     # anchor: input mirror 3%\n"
             "  transmissivity_m2: 0.014    # anchor: output mirror 1.4%\n"
             "  linewidth_fwhm: 17          # anchor: empty-cavity linewidth of about 17 MHz\n"
             "  amplitude_decay: auto       # linewidth_fwhm/2 = 8.5 MHz\n"
             "vapor:\n"
             "  temperature: 363.15         # anchor: cell at 90 C\n"
             "  reference_temperature: 363.15   # rates and coupling above are quoted at 90 C\n"
             "  cell_length: 0.07           # anchor: 7 cm cell\n"
             "  refractive_index: 1\n"
             "  natural_linewidth: 5.75     # choice: gamma in the optical depth, D1 natural linewidth\n"
             "collision:\n"
             "  cross_section: 1e-17        # anchor: exchange cross-section 7 to 10 x 10^-14 cm^2\n"
             "  velocity_convention: most-probable   # anchor: thermal velocity 263 m/s\n"
             "model:\n"
             "  saturation: full-model      # choice: exact steady state rather than the large-Omega formula\n"
             "gain_map:\n"
             "  density_min: 1e18\n"
             "  density_max: 6e18\n"
             "  density_points: 11\n"
             "  density_spacing: linear\n"
             "transient:\n"
             "  t_final: 100                # model microseconds; steady state takes tens of them\n"
             "  sample_interval: 0.1\n"
             "  rel_tol: 1e-9\n"
             "  abs_tol: 1e-12\n";
}

std::string sweep_block(const std::string& parameter, double min, double max,
                        std::size_t points, const std::string& spacing,
                        const std::string& comment)
{
    return "sweep:                        # " + comment + "\n"
           "  parameter: " + parameter + "\n"
           "  min: " + format_double(min) + "\n"
           "  max: " + format_double(max) + "\n"
           "  points: " + std::to_string(points) + "\n"
           "  spacing: " + spacing + "\n";
}

std::string output_block(Scenario s, const std::string& formats)
{
    return "output:\n"
           "  directory: out/" + to_string(s) + "\n"
           "  formats: [" + formats + "]\n";
}

} // namespace

std::string preset_text(Scenario scenario)
{
    const std::string head = "scenario: " + to_string(scenario) + "\n";
    switch (scenario) {
    case Scenario::fig3_pump_sweep:
        return head + common_block(160.0)
               + sweep_block("pump_power", 0.0, 50.0, 101, "linear",
                             "anchor: pump powers up to the 50 mW diode limit")
               + output_block(scenario, "csv, json, svg");
    case Scenario::fig4_density_sweep:
        return head + common_block(156.0)
               + sweep_block("temperature", 333.15, 376.15, 60, "linear",
                             "anchor: 60 C to 103 C, where the optical depth reaches 326")
               + output_block(scenario, "csv, json, svg");
    case Scenario::gain_map:
        return head + common_block(160.0)
               + sweep_block("omega", 1.0, 1000.0, 61, "log", "choice: pump Rabi frequency axis")
               + output_block(scenario, "csv, json");
    case Scenario::single_point:
        return head + common_block(160.0)
               + sweep_block("omega", 1.0, 2.0, 2, "linear", "unused by this scenario")
               + output_block(scenario, "csv, json");
    case Scenario::transient:
        return head + common_block(160.0)
               + sweep_block("omega", 1.0, 2.0, 2, "linear", "unused by this scenario")
               + output_block(scenario, "csv, json, svg");
    }
    return head;
}

std::string preset_summary(Scenario scenario)
{
    switch (scenario) {
    case Scenario::fig3_pump_sweep:
        return "steady lasing intensity against pump power, 0 to 50 mW";
    case Scenario::fig4_density_sweep:
        return "steady lasing intensity against atomic density, 60 C to 103 C at 156 MHz";
    case Scenario::gain_map:
        return "small-signal gain over pump Rabi frequency and atomic density";
    case Scenario::single_point:
        return "steady state, gain, inversion and vapor figures at one operating point";
    case Scenario::transient:
        return "time evolution from the unpumped equilibrium after the pump is switched on";
    }
    return "";
}

} // namespace lwi

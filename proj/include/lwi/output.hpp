#ifndef LWI_OUTPUT_HPP
#define LWI_OUTPUT_HPP

#include <lwi/cavity.hpp>
#include <lwi/steady_state.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace lwi {

inline constexpr const char* sweep_csv_header =
    "sweep_param,omega_mhz,linear_gain_mhz,intensity,inversion,leg_class";

/// Sweep table as CSV. Density sweeps carry an extra optical_depth column
/// after the fixed ones.
void write_sweep_csv(std::ostream& os, const SweepResult& sweep);

/// JSON mirror of the sweep CSV: rows are objects keyed by the CSV column names.
std::string sweep_json(const SweepResult& sweep, const std::string& scenario);

/// Trajectory as JSON with the trajectory CSV column names.
std::string trajectory_json(const Trajectory& trajectory);

/// Ordered name/value report; values are numbers or strings.
struct Report
{
    struct Item
    {
        std::string name;
        std::string text; ///< set for string values
        double number = 0.0;
        bool is_text = false;
    };
    std::vector<Item> items;

    void add(std::string name, double value) { items.push_back({std::move(name), {}, value, false}); }
    void add(std::string name, std::string value)
    {
        items.push_back({std::move(name), std::move(value), 0.0, true});
    }
    /// Throws std::out_of_range when absent.
    const Item& at(const std::string& name) const;
};

void write_report_csv(std::ostream& os, const Report& report);
std::string report_json(const Report& report, const std::string& scenario);

/// Writes to a temporary file in the same directory and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace lwi

#endif

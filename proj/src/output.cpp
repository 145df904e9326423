#include <lwi/format.hpp>
#include <lwi/output.hpp>

#include <json.hpp>

#include <fstream>
#include <ostream>
#include <stdexcept>

namespace lwi {

namespace {

using ordered_json = nlohmann::ordered_json;

bool has_optical_depth(const SweepResult& sweep)
{
    for (const auto& row : sweep.rows) {
        if (row.optical_depth)
            return true;
    }
    return false;
}

} // namespace

void write_sweep_csv(std::ostream& os, const SweepResult& sweep)
{
    const bool od = has_optical_depth(sweep);
    os << sweep_csv_header << (od ? ",optical_depth" : "") << '\n';
    for (const auto& r : sweep.rows) {
        os << format_double(r.sweep_value) << ',' << format_double(r.omega) << ','
           << format_double(r.linear_gain) << ',' << format_double(r.intensity) << ','
           << format_double(r.inversion) << ',' << to_string(r.leg);
        if (od)
            os << ',' << (r.optical_depth ? format_double(*r.optical_depth) : "nan");
        os << '\n';
    }
}

std::string sweep_json(const SweepResult& sweep, const std::string& scenario)
{
    ordered_json doc;
    doc["scenario"] = scenario;
    doc["sweep_param_name"] = sweep.parameter;
    ordered_json rows = ordered_json::array();
    for (const auto& r : sweep.rows) {
        ordered_json row;
        row["sweep_param"] = r.sweep_value;
        row["omega_mhz"] = r.omega;
        row["linear_gain_mhz"] = r.linear_gain;
        row["intensity"] = r.intensity;
        row["inversion"] = r.inversion;
        row["leg_class"] = to_string(r.leg);
        if (r.optical_depth)
            row["optical_depth"] = *r.optical_depth;
        rows.push_back(std::move(row));
    }
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
}

std::string trajectory_json(const Trajectory& trajectory)
{
    ordered_json doc;
    ordered_json rows = ordered_json::array();
    for (const auto& p : trajectory.points) {
        ordered_json row;
        row["t_us"] = p.t;
        row["rho_aa"] = p.state.rho_aa;
        row["rho_bb"] = p.state.rho_bb;
        row["rho_cc"] = rho_cc(p.state);
        row["i_rho_ab"] = p.state.i_rho_ab;
        row["rho_cb"] = p.state.rho_cb;
        row["i_rho_ca"] = p.state.i_rho_ca;
        rows.push_back(std::move(row));
    }
    doc["final_residual"] = trajectory.final_residual;
    doc["accepted_steps"] = trajectory.accepted_steps;
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
}

const Report::Item& Report::at(const std::string& name) const
{
    for (const auto& item : items) {
        if (item.name == name)
            return item;
    }
    throw std::out_of_range("no report entry '" + name + "'");
}

void write_report_csv(std::ostream& os, const Report& report)
{
    os << "quantity,value\n";
    for (const auto& item : report.items)
        os << item.name << ',' << (item.is_text ? item.text : format_double(item.number)) << '\n';
}

std::string report_json(const Report& report, const std::string& scenario)
{
    ordered_json doc;
    doc["scenario"] = scenario;
    ordered_json values;
    for (const auto& item : report.items) {
        if (item.is_text)
            values[item.name] = item.text;
        else
            values[item.name] = item.number;
    }
    doc["values"] = std::move(values);
    return doc.dump(2) + "\n";
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::filesystem::filesystem_error(
                "cannot open for writing", tmp, std::make_error_code(std::errc::io_error));
        out << content;
        out.flush();
        if (!out)
            throw std::filesystem::filesystem_error(
                "write failed", tmp, std::make_error_code(std::errc::io_error));
    }
    std::filesystem::rename(tmp, path);
}

} // namespace lwi

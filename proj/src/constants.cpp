#include <lwi/constants.hpp>

#include "constants_text.hpp"

#include <yaml-cpp/yaml.h>

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lwi {

namespace {

struct Entry
{
    const char* key;
    double Constants::*field;
};

constexpr Entry entries[] = {
    {"physical.speed_of_light", &Constants::speed_of_light},
    {"physical.boltzmann", &Constants::boltzmann},
    {"physical.torr", &Constants::torr},
    {"rb87.mass", &Constants::mass},
    {"rb87.d1_wavelength", &Constants::d1_wavelength},
    {"rb87.d1_natural_linewidth", &Constants::d1_natural_linewidth},
    {"rb87.vapor_pressure_a", &Constants::vapor_pressure_a},
    {"rb87.vapor_pressure_b", &Constants::vapor_pressure_b},
    {"rb87.vapor_pressure_c", &Constants::vapor_pressure_c},
    {"rb87.vapor_pressure_d", &Constants::vapor_pressure_d},
    {"rb87.vapor_pressure_t_min", &Constants::vapor_pressure_t_min},
    {"rb87.vapor_pressure_t_max", &Constants::vapor_pressure_t_max},
    {"rb87.exchange_cross_section", &Constants::exchange_cross_section},
    {"rb87.exchange_cross_section_min", &Constants::exchange_cross_section_min},
    {"rb87.exchange_cross_section_max", &Constants::exchange_cross_section_max},
};

const Entry* find_entry(const std::string& key)
{
    for (const auto& e : entries) {
        if (key == e.key)
            return &e;
    }
    return nullptr;
}

void flatten(const YAML::Node& node, const std::string& prefix,
             std::map<std::string, YAML::Node>& out)
{
    for (const auto& kv : node) {
        const auto key = prefix.empty() ? kv.first.as<std::string>()
                                        : prefix + "." + kv.first.as<std::string>();
        if (kv.second.IsMap())
            flatten(kv.second, key, out);
        else
            out[key] = kv.second;
    }
}

} // namespace

void Constants::set(const std::string& key, double value)
{
    const Entry* e = find_entry(key);
    if (!e)
        throw std::invalid_argument("unknown constant '" + key + "'");
    this->*(e->field) = value;
}

double Constants::get(const std::string& key) const
{
    const Entry* e = find_entry(key);
    if (!e)
        throw std::invalid_argument("unknown constant '" + key + "'");
    return this->*(e->field);
}

const std::vector<std::string>& Constants::keys()
{
    static const std::vector<std::string> all = [] {
        std::vector<std::string> k;
        for (const auto& e : entries)
            k.emplace_back(e.key);
        return k;
    }();
    return all;
}

Constants parse_constants(const std::string& yaml_text)
{
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& ex) {
        throw std::runtime_error(std::string("constants table: ") + ex.what());
    }
    if (!root.IsMap())
        throw std::runtime_error("constants table: top level must be a mapping");

    std::map<std::string, YAML::Node> flat;
    flatten(root, "", flat);

    Constants c;
    std::set<std::string> seen;
    for (const auto& [key, node] : flat) {
        if (key == "version") {
            c.version = node.as<int>();
            if (c.version != 1) {
                throw std::runtime_error("constants table: unsupported version "
                                         + std::to_string(c.version));
            }
            continue;
        }
        const Entry* e = find_entry(key);
        if (!e)
            throw std::runtime_error("constants table: unknown key '" + key + "'");
        try {
            c.*(e->field) = node.as<double>();
        } catch (const YAML::Exception&) {
            std::ostringstream msg;
            msg << "constants table: '" << key << "' at line " << node.Mark().line + 1
                << " is not a number";
            throw std::runtime_error(msg.str());
        }
        seen.insert(key);
    }
    for (const auto& e : entries) {
        if (!seen.count(e.key))
            throw std::runtime_error(std::string("constants table: missing key '") + e.key
                                     + "'");
    }
    return c;
}

const Constants& builtin_constants()
{
    static const Constants table = parse_constants(detail::builtin_constants_yaml);
    return table;
}

Constants load_constants(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open constants table '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_constants(text.str());
}

Constants constants_from_environment()
{
    if (const char* path = std::getenv(constants_env_var); path && *path)
        return load_constants(path);
    return builtin_constants();
}

} // namespace lwi

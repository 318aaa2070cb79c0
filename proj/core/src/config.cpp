// Copyright 2026 The mixlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mixlab/experiments.hpp"

namespace mixlab {

namespace {

enum class KeyType { real, integer, boolean, int_list, real_list, u64 };

struct KeyDef {
    KeyType type;
    const char* default_value;
};

using Schema = std::map<std::string, KeyDef>;

// Shared keys: every experiment runs from a seed with a worker count.
Schema base_schema() {
    return {
        {"seed", {KeyType::u64, "1"}},
        {"workers", {KeyType::integer, "0"}},  // 0 = hardware concurrency
    };
}

Schema with(Schema s, std::initializer_list<std::pair<const std::string, KeyDef>> extra) {
    for (const auto& kv : extra) s.insert(kv);
    return s;
}

Schema grid_keys(Schema s, const char* t_min, const char* t_max, const char* n_points) {
    return with(std::move(s), {
        {"t_min", {KeyType::real, t_min}},
        {"t_max", {KeyType::real, t_max}},
        {"n_points", {KeyType::integer, n_points}},
        {"log_spaced", {KeyType::boolean, "true"}},
    });
}

const std::map<std::string, Schema>& schemas() {
    static const std::map<std::string, Schema> table = [] {
        std::map<std::string, Schema> m;
        m["davies_concentration"] = grid_keys(
            with(base_schema(), {
                {"beta", {KeyType::real, "1.2"}},
                {"omega", {KeyType::real, "1"}},
                {"n_min", {KeyType::integer, "3"}},
                {"n_max", {KeyType::integer, "6"}},
                {"epsilon", {KeyType::real, "0.7"}},
                {"n_samples", {KeyType::integer, "512"}},
            }),
            "0.001", "6", "72");
        m["boundary_fixed_eps"] = grid_keys(
            with(base_schema(), {
                {"delta", {KeyType::real, "0.25"}},
                {"gamma", {KeyType::real, "4"}},
                {"l_min", {KeyType::integer, "3"}},
                {"l_max", {KeyType::integer, "6"}},
                {"epsilon", {KeyType::real, "0.55"}},
                {"n_samples", {KeyType::integer, "512"}},
            }),
            "0.001", "30", "96");
        m["boundary_scaled_eps"] = grid_keys(
            with(base_schema(), {
                {"delta", {KeyType::real, "0.25"}},
                {"gamma", {KeyType::real, "4"}},
                {"l_min", {KeyType::integer, "3"}},
                {"l_max", {KeyType::integer, "6"}},
                {"epsilon0", {KeyType::real, "0.1"}},
                {"quantile", {KeyType::real, "0.9"}},
                {"n_samples", {KeyType::integer, "1200"}},
            }),
            "0.001", "40", "96");
        m["skin_bundles"] = grid_keys(
            with(base_schema(), {
                {"gamma_r", {KeyType::real, "1.6"}},
                {"gamma_l", {KeyType::real, "0.4"}},
                {"lambda", {KeyType::real, "1"}},
                {"sizes", {KeyType::int_list, "16,24,32,64,128,192"}},
                {"epsilons", {KeyType::real_list, "0.35,0.01"}},
                {"n_samples", {KeyType::integer, "200"}},
            }),
            "0.001", "400", "144");
        m["skin_gap_scaling"] = grid_keys(
            with(base_schema(), {
                {"gamma_r", {KeyType::real, "1.6"}},
                {"gamma_l", {KeyType::real, "0.4"}},
                {"lambda", {KeyType::real, "1"}},
                {"sizes", {KeyType::int_list, "16,24,32,48,64,96,128,192"}},
                {"epsilons", {KeyType::real_list, "0.01,0.35"}},
                {"quantile", {KeyType::real, "0.9"}},
                {"n_samples", {KeyType::integer, "500"}},
            }),
            "0.001", "400", "200");
        m["protected_separation"] = grid_keys(
            with(base_schema(), {
                {"d", {KeyType::integer, "256"}},
                {"eta", {KeyType::real, "0.006737946999085467"}},  // e^-5
                {"epsilon", {KeyType::real, "0.2"}},
                {"delta_quantile", {KeyType::real, "0.1"}},
                {"n_samples", {KeyType::integer, "150"}},
            }),
            "0.001", "500", "72");
        m["logical_bundle"] = grid_keys(
            with(base_schema(), {
                {"l", {KeyType::integer, "6"}},
                {"beta", {KeyType::real, "1.8"}},
                {"gamma", {KeyType::real, "2"}},
                {"c", {KeyType::real, "0.75"}},
                {"epsilon", {KeyType::real, "0.35"}},
                {"n_samples", {KeyType::integer, "64"}},
            }),
            "0.001", "200", "96");
        m["logical_scaling"] = grid_keys(
            with(base_schema(), {
                {"l_min", {KeyType::integer, "3"}},
                {"l_max", {KeyType::integer, "6"}},
                {"beta", {KeyType::real, "1.8"}},
                {"gamma", {KeyType::real, "2"}},
                {"c", {KeyType::real, "0.75"}},
                {"epsilon", {KeyType::real, "0.35"}},
                {"n_samples", {KeyType::integer, "36"}},
            }),
            "0.001", "200", "88");
        m["moment_checks"] = with(base_schema(), {
            {"d", {KeyType::integer, "8"}},
            {"d_b", {KeyType::integer, "4"}},
            {"n_syn", {KeyType::integer, "64"}},
            {"n_samples", {KeyType::integer, "100000"}},
        });
        m["oracle_checks"] = with(base_schema(), {
            {"n_triples", {KeyType::integer, "100"}},
        });
        return m;
    }();
    return table;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string canonical_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& experiment, const std::string& key,
                    const std::string& raw) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(raw, &pos);
        if (pos != raw.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(experiment + "." + key + ": expected a real, got '" + raw + "'");
    }
}

long long parse_integer(const std::string& experiment, const std::string& key,
                        const std::string& raw) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(raw, &pos);
        if (pos != raw.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(experiment + "." + key + ": expected an integer, got '" +
                                    raw + "'");
    }
}

std::vector<std::string> split_list(const std::string& raw) {
    std::vector<std::string> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

std::string canonicalize(const std::string& experiment, const std::string& key,
                         KeyType type, const std::string& raw) {
    switch (type) {
        case KeyType::real:
            return canonical_double(parse_double(experiment, key, raw));
        case KeyType::integer:
            return std::to_string(parse_integer(experiment, key, raw));
        case KeyType::u64: {
            const long long v = parse_integer(experiment, key, raw);
            if (v < 0) throw std::invalid_argument(experiment + "." + key + ": must be >= 0");
            return std::to_string(v);
        }
        case KeyType::boolean: {
            const std::string t = trim(raw);
            if (t == "true" || t == "1" || t == "yes") return "true";
            if (t == "false" || t == "0" || t == "no") return "false";
            throw std::invalid_argument(experiment + "." + key + ": expected a boolean, got '" +
                                        raw + "'");
        }
        case KeyType::int_list: {
            std::string out;
            for (const auto& item : split_list(raw)) {
                if (!out.empty()) out += ",";
                out += std::to_string(parse_integer(experiment, key, item));
            }
            if (out.empty()) throw std::invalid_argument(experiment + "." + key + ": empty list");
            return out;
        }
        case KeyType::real_list: {
            std::string out;
            for (const auto& item : split_list(raw)) {
                if (!out.empty()) out += ",";
                out += canonical_double(parse_double(experiment, key, item));
            }
            if (out.empty()) throw std::invalid_argument(experiment + "." + key + ": empty list");
            return out;
        }
    }
    throw std::logic_error("canonicalize: unhandled key type");
}

}  // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, schema] : schemas()) out.push_back(name);
        return out;
    }();
    return names;
}

ExperimentConfig parse_config(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::map<std::string, std::string> raw;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') {
                throw std::invalid_argument("config line " + std::to_string(line_no) +
                                            ": malformed section header");
            }
            if (!section.empty()) {
                throw std::invalid_argument(
                    "config: more than one experiment section (one per file)");
            }
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        if (section.empty()) {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": key outside any [experiment] section");
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (raw.count(key)) {
            throw std::invalid_argument(section + "." + key + ": duplicate key");
        }
        raw[key] = value;
    }
    if (section.empty()) throw std::invalid_argument("config: no experiment section found");

    const auto it = schemas().find(section);
    if (it == schemas().end()) {
        std::string known;
        for (const auto& n : experiment_names()) known += (known.empty() ? "" : ", ") + n;
        throw std::invalid_argument("config: unknown experiment '" + section +
                                    "' (known: " + known + ")");
    }
    const Schema& schema = it->second;

    std::string unknown;
    for (const auto& [key, value] : raw) {
        if (!schema.count(key)) unknown += (unknown.empty() ? "" : ", ") + key;
    }
    if (!unknown.empty()) {
        throw std::invalid_argument(section + ": unknown keys: " + unknown);
    }

    ExperimentConfig config;
    config.experiment = section;
    for (const auto& [key, def] : schema) {
        const auto found = raw.find(key);
        const std::string value = found != raw.end() ? found->second : def.default_value;
        config.values[key] = canonicalize(section, key, def.type, value);
    }
    return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string emit_config(const ExperimentConfig& config) {
    std::ostringstream out;
    out << "[" << config.experiment << "]\n";
    for (const auto& [key, value] : config.values) {
        out << key << " = " << value << "\n";
    }
    return out.str();
}

double ExperimentConfig::get_double(const std::string& key) const {
    return parse_double(experiment, key, values.at(key));
}
int ExperimentConfig::get_int(const std::string& key) const {
    return static_cast<int>(parse_integer(experiment, key, values.at(key)));
}
bool ExperimentConfig::get_bool(const std::string& key) const {
    return values.at(key) == "true";
}
std::uint64_t ExperimentConfig::get_u64(const std::string& key) const {
    return static_cast<std::uint64_t>(parse_integer(experiment, key, values.at(key)));
}
std::vector<int> ExperimentConfig::get_int_list(const std::string& key) const {
    std::vector<int> out;
    for (const auto& item : split_list(values.at(key))) {
        out.push_back(static_cast<int>(parse_integer(experiment, key, item)));
    }
    return out;
}
std::vector<double> ExperimentConfig::get_double_list(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : split_list(values.at(key))) {
        out.push_back(parse_double(experiment, key, item));
    }
    return out;
}

}  // namespace mixlab

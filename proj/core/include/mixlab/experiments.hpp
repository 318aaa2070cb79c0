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

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace mixlab {

/// Rectangular result table; cells are reals or strings.
class ResultTable {
public:
    using Cell = std::variant<double, std::string>;

    explicit ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add_row(std::vector<Cell> row);
    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }

    double number(std::size_t row, const std::string& column) const;
    std::string text(std::size_t row, const std::string& column) const;
    std::vector<double> column_numbers(const std::string& column) const;

private:
    std::size_t column_index(const std::string& column) const;
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

/// One experiment section: canonical key=value strings, fully populated with
/// defaults after parsing. Equality is textual, which makes the round-trip
/// contract parse(emit(c)) == c exact.
struct ExperimentConfig {
    std::string experiment;
    std::map<std::string, std::string> values;

    bool operator==(const ExperimentConfig&) const = default;

    double get_double(const std::string& key) const;
    int get_int(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::uint64_t get_u64(const std::string& key) const;
    std::vector<int> get_int_list(const std::string& key) const;
    std::vector<double> get_double_list(const std::string& key) const;
};

/// All valid experiment names, in a stable listing order.
const std::vector<std::string>& experiment_names();

/// Parse a single key=value section; unknown keys, duplicate keys, missing
/// section or type errors throw std::invalid_argument with the field path.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Render a config back to section text (sorted keys, canonical values).
std::string emit_config(const ExperimentConfig& config);

/// CSV with a header row, UTF-8, '.' decimal separator, 17 significant
/// digits for reals.
void emit_csv(const ResultTable& table, const std::string& path);

/// Key/value summary as JSON.
void emit_json(const std::map<std::string, std::string>& summary, const std::string& path);

struct ExperimentResult {
    ResultTable curves;   // sample_id, t, g
    ResultTable summary;  // per-size statistics and predictions
    std::map<std::string, std::string> meta;
};

/// Run one experiment and write curves.csv, summary.csv and meta.json under
/// out_dir. seed/workers override the config when nonnegative.
ExperimentResult run_experiment(const ExperimentConfig& config, const std::string& out_dir,
                                std::int64_t seed_override = -1, int workers_override = -1);

/// Factorized-versus-dense oracle battery; returns true when every residual
/// is below its tolerance.
bool check_oracles(ResultTable& report, std::uint64_t seed, int n_triples = 100);

}  // namespace mixlab

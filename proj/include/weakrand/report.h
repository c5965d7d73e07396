// Copyright 2026 The weakrand Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WEAKRAND_REPORT_H
#define WEAKRAND_REPORT_H

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

namespace weakrand {

inline constexpr const char *kVersion = "0.1.0";

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view s);

using Cell = std::variant<std::int64_t, double, bool, std::string>;

/// Rectangular result table written as CSV (with a leading provenance
/// comment) or JSON.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);
};

struct Provenance {
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
};

/// Doubles use %.12g, booleans 0/1; fields with commas or quotes are quoted.
void write_csv(std::ostream &os, const Table &t, const Provenance &p);
nlohmann::json table_to_json(const Table &t, const Provenance &p);

/// Parsed CSV with '#' comment lines skipped; every cell kept as text.
struct CsvData {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    /// Index of a column; ValidationError if absent.
    std::size_t column(const std::string &name) const;
};

CsvData read_csv(std::istream &is);

struct Series {
    std::string label;
    std::vector<double> xs;
    std::vector<double> ys;
};

struct ChartOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    int width = 720;
    int height = 440;
};

/// Standalone SVG document with axes, five ticks per axis, one polyline per
/// series and a legend. Non-finite points (and non-positive ones on a log
/// axis) are dropped. ValidationError if nothing remains to plot.
std::string render_line_chart(const std::vector<Series> &series, const ChartOptions &opt);

}  // namespace weakrand

#endif  // WEAKRAND_REPORT_H

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

#include "weakrand/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "weakrand/errors.h"

namespace weakrand {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void Table::add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw ValidationError("row width does not match the header");
    rows.push_back(std::move(row));
}

namespace {

std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string cell_text(const Cell &c) {
    return std::visit(
        [](const auto &v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
            else if constexpr (std::is_same_v<T, double>) return fmt_double(v);
            else if constexpr (std::is_same_v<T, bool>) return v ? "1" : "0";
            else return v;
        },
        c);
}

std::string quote(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::vector<std::string> split_csv_line(const std::string &line) {
    std::vector<std::string> out;
    std::string cur;
    bool in_q = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_q) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                in_q = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            in_q = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

}  // namespace

void write_csv(std::ostream &os, const Table &t, const Provenance &p) {
    os << "# weakrand " << kVersion << " seed=" << p.seed << " config=" << hex64(p.config_hash) << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << quote(t.columns[i]);
    os << "\n";
    for (const auto &r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << quote(cell_text(r[i]));
        os << "\n";
    }
}

nlohmann::json table_to_json(const Table &t, const Provenance &p) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &r : t.rows) {
        nlohmann::json row = nlohmann::json::object();
        for (std::size_t i = 0; i < r.size(); ++i)
            std::visit([&](const auto &v) { row[t.columns[i]] = v; }, r[i]);
        rows.push_back(std::move(row));
    }
    return {{"version", kVersion}, {"seed", p.seed}, {"config", hex64(p.config_hash)}, {"rows", rows}};
}

std::size_t CsvData::column(const std::string &name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw ValidationError("no column named '" + name + "'");
    return static_cast<std::size_t>(it - columns.begin());
}

CsvData read_csv(std::istream &is) {
    CsvData d;
    std::string line;
    bool header = true;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto cells = split_csv_line(line);
        if (header) {
            d.columns = std::move(cells);
            header = false;
        } else {
            if (cells.size() != d.columns.size()) throw ValidationError("ragged CSV row: " + line);
            d.rows.push_back(std::move(cells));
        }
    }
    if (header) throw ValidationError("CSV has no header row");
    return d;
}

// ---------------------------------------------------------------------------

namespace {

const char *kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};

std::string esc(const std::string &s) {
    std::string o;
    for (char c : s) {
        switch (c) {
            case '<': o += "&lt;"; break;
            case '>': o += "&gt;"; break;
            case '&': o += "&amp;"; break;
            case '"': o += "&quot;"; break;
            default: o += c;
        }
    }
    return o;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v, bool log) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", log ? std::pow(10.0, v) : v);
    return buf;
}

}  // namespace

std::string render_line_chart(const std::vector<Series> &series, const ChartOptions &opt) {
    auto tx = [&](double v) { return opt.log_x ? std::log10(v) : v; };
    auto ty = [&](double v) { return opt.log_y ? std::log10(v) : v; };
    auto usable = [&](double x, double y) {
        return std::isfinite(x) && std::isfinite(y) && (!opt.log_x || x > 0) && (!opt.log_y || y > 0);
    };
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    std::size_t points = 0;
    for (const auto &s : series) {
        if (s.xs.size() != s.ys.size()) throw ValidationError("series '" + s.label + "' has mismatched lengths");
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            if (!usable(s.xs[i], s.ys[i])) continue;
            ++points;
            x0 = std::min(x0, tx(s.xs[i]));
            x1 = std::max(x1, tx(s.xs[i]));
            y0 = std::min(y0, ty(s.ys[i]));
            y1 = std::max(y1, ty(s.ys[i]));
        }
    }
    if (points == 0) throw ValidationError("nothing to plot");
    if (x1 == x0) x0 -= 0.5, x1 += 0.5;
    if (y1 == y0) y0 -= 0.5, y1 += 0.5;

    const double left = 70, right = 170, top = 40, bottom = 50;
    const double pw = opt.width - left - right, ph = opt.height - top - bottom;
    auto px = [&](double v) { return left + (v - x0) / (x1 - x0) * pw; };
    auto py = [&](double v) { return top + ph - (v - y0) / (y1 - y0) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\"" << opt.height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << num(left + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << esc(opt.title)
      << "</text>\n";
    o << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double vx = x0 + (x1 - x0) * k / 4, vy = y0 + (y1 - y0) * k / 4;
        o << "<line x1=\"" << num(px(vx)) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(px(vx)) << "\" y2=\""
          << num(top + ph + 5) << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << num(px(vx)) << "\" y=\"" << num(top + ph + 18) << "\" text-anchor=\"middle\">"
          << tick_label(vx, opt.log_x) << "</text>\n";
        o << "<line x1=\"" << num(left - 5) << "\" y1=\"" << num(py(vy)) << "\" x2=\"" << num(left) << "\" y2=\""
          << num(py(vy)) << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << num(left - 8) << "\" y=\"" << num(py(vy) + 4) << "\" text-anchor=\"end\">"
          << tick_label(vy, opt.log_y) << "</text>\n";
    }
    o << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << opt.height - 10 << "\" text-anchor=\"middle\">"
      << esc(opt.x_label) << "</text>\n";
    o << "<text transform=\"translate(16," << num(top + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
      << esc(opt.y_label) << "</text>\n";
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto &s = series[si];
        const char *color = kPalette[si % std::size(kPalette)];
        o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            if (!usable(s.xs[i], s.ys[i])) continue;
            o << (first ? "" : " ") << num(px(tx(s.xs[i]))) << "," << num(py(ty(s.ys[i])));
            first = false;
        }
        o << "\"/>\n";
        const double ly = top + 14 + 18.0 * si;
        o << "<line x1=\"" << num(left + pw + 12) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(left + pw + 32)
          << "\" y2=\"" << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << num(left + pw + 38) << "\" y=\"" << num(ly + 4) << "\">" << esc(s.label) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace weakrand

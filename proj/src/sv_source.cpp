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

#include "weakrand/sv_source.h"

#include <bit>
#include <cmath>
#include <sstream>

#include "weakrand/errors.h"

namespace weakrand {

namespace {

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

double toward(std::uint8_t target, double eps) { return target == 0 ? 0.5 + eps : 0.5 - eps; }

void check_bits(const std::vector<std::uint8_t> &bits, const char *what) {
    for (auto b : bits)
        if (b > 1) throw ValidationError(std::string(what) + ": bits must be 0 or 1");
}

}  // namespace

void SvParams::validate() const {
    if (!(epsilon >= 0.0 && epsilon < 0.5)) throw ValidationError("epsilon must lie in [0, 0.5), got " + fmt_double(epsilon));
}

std::string history_key(std::span<const std::uint8_t> history) {
    std::string k(history.size(), '0');
    for (std::size_t i = 0; i < history.size(); ++i) k[i] = history[i] ? '1' : '0';
    return k;
}

double bias_for(const SourceStrategy &s, double epsilon, std::span<const std::uint8_t> history) {
    const std::size_t pos = history.size();
    const double p0 = std::visit(
        overloaded{
            [](const strategy::Honest &) { return 0.5; },
            [&](const strategy::MaxBiasToward &m) {
                if (m.targets.empty()) return 0.5;
                if (pos >= m.targets.size() && !m.cyclic) return 0.5;
                return toward(m.targets[pos % m.targets.size()], epsilon);
            },
            [&](const strategy::TargetString &t) {
                return pos < t.bits.size() ? toward(t.bits[pos], epsilon) : 0.5;
            },
            [&](const strategy::HistoryTable &h) {
                auto it = h.p0.find(history_key(history));
                return it == h.p0.end() ? h.default_p0 : it->second;
            },
        },
        s);
    if (!(std::abs(p0 - 0.5) <= epsilon + 1e-12)) {
        throw ValidationError("source bias " + fmt_double(p0) + " outside the band 1/2 +- " + fmt_double(epsilon));
    }
    return p0;
}

SvStream::SvStream(SvParams params, SourceStrategy strategy, std::uint64_t seed)
    : params_(params), strategy_(std::move(strategy)), rng_(seed) {
    params_.validate();
    if (auto *m = std::get_if<strategy::MaxBiasToward>(&strategy_)) check_bits(m->targets, "max_bias_toward");
    if (auto *t = std::get_if<strategy::TargetString>(&strategy_)) check_bits(t->bits, "target_string");
}

std::uint8_t SvStream::next_bit() {
    const double p0 = bias_for(strategy_, params_.epsilon, history_);
    const std::uint8_t bit = rng_.uniform() < p0 ? 0 : 1;
    history_.push_back(bit);
    return bit;
}

std::uint32_t SvStream::sample_setting(std::uint32_t num_settings) {
    const unsigned k = log2_exact(num_settings);
    std::uint32_t v = 0;
    for (unsigned i = 0; i < k; ++i) v = (v << 1) | next_bit();
    return v;
}

std::uint32_t SvStream::sample_index(std::uint32_t n) {
    if (n == 0) throw ValidationError("sample_index: empty range");
    const unsigned k = ceil_log2(n);
    for (;;) {
        std::uint32_t v = 0;
        for (unsigned i = 0; i < k; ++i) v = (v << 1) | next_bit();
        if (v < n) return v;
    }
}

bool is_power_of_two(std::uint64_t n) { return n != 0 && std::has_single_bit(n); }

unsigned log2_exact(std::uint64_t n) {
    if (!is_power_of_two(n)) throw ValidationError("expected a power of two, got " + std::to_string(n));
    return static_cast<unsigned>(std::countr_zero(n));
}

unsigned ceil_log2(std::uint64_t n) {
    if (n == 0) throw ValidationError("ceil_log2 of 0");
    return n == 1 ? 0u : static_cast<unsigned>(std::bit_width(n - 1));
}

double min_setting_prob(double epsilon, unsigned n_ladder) {
    const unsigned L = log2_exact(static_cast<std::uint64_t>(n_ladder) + 1);
    const double ratio = (1.0 - 2.0 * epsilon) / (1.0 + 2.0 * epsilon);
    return std::pow(ratio, 2.0 * L) / (2.0 * (n_ladder + 1));
}

nlohmann::json to_json(const SourceStrategy &s) {
    using nlohmann::json;
    return std::visit(overloaded{
                          [](const strategy::Honest &) { return json{{"type", "honest"}}; },
                          [](const strategy::MaxBiasToward &m) {
                              return json{{"type", "max_bias_toward"}, {"targets", m.targets}, {"cyclic", m.cyclic}};
                          },
                          [](const strategy::TargetString &t) {
                              return json{{"type", "target_string"}, {"bits", t.bits}};
                          },
                          [](const strategy::HistoryTable &h) {
                              return json{{"type", "history_table"}, {"table", h.p0}, {"default", h.default_p0}};
                          },
                      },
                      s);
}

SourceStrategy strategy_from_json(const nlohmann::json &j) {
    try {
        const std::string type = j.at("type").get<std::string>();
        auto reject_extra = [&](std::initializer_list<const char *> allowed) {
            for (auto it = j.begin(); it != j.end(); ++it) {
                bool ok = it.key() == "type";
                for (const char *a : allowed) ok = ok || it.key() == a;
                if (!ok) throw ValidationError("source strategy: unknown key '" + it.key() + "'");
            }
        };
        if (type == "honest") {
            reject_extra({});
            return strategy::Honest{};
        }
        if (type == "max_bias_toward") {
            reject_extra({"targets", "cyclic"});
            strategy::MaxBiasToward m;
            m.targets = j.at("targets").get<std::vector<std::uint8_t>>();
            m.cyclic = j.value("cyclic", true);
            check_bits(m.targets, "max_bias_toward");
            return m;
        }
        if (type == "target_string") {
            reject_extra({"bits"});
            strategy::TargetString t;
            t.bits = j.at("bits").get<std::vector<std::uint8_t>>();
            check_bits(t.bits, "target_string");
            return t;
        }
        if (type == "history_table") {
            reject_extra({"table", "default"});
            strategy::HistoryTable h;
            h.p0 = j.at("table").get<std::map<std::string, double>>();
            h.default_p0 = j.value("default", 0.5);
            for (const auto &[k, v] : h.p0)
                if (k.find_first_not_of("01") != std::string::npos)
                    throw ValidationError("history_table: keys must be bit strings");
            return h;
        }
        throw ValidationError("unknown source strategy type '" + type + "'");
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("source strategy: ") + e.what());
    }
}

}  // namespace weakrand

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

#include "weakrand/protocol_two.h"

#include <cmath>
#include <string>

#include "weakrand/errors.h"
#include "weakrand/rng.h"

namespace weakrand {

namespace {

const Assemblage &ghz_reference() {
    static const Assemblage g = ghz_assemblage();
    return g;
}

CompiledDeviceTwo::Table tabulate(const Assemblage &s) {
    const auto rep = check_assemblage(s);
    if (!rep.valid) throw ValidationError("device assemblage is invalid: " + rep.where);
    CompiledDeviceTwo::Table t;
    for (unsigned a = 0; a < 2; ++a)
        for (unsigned b = 0; b < 2; ++b)
            for (unsigned x = 0; x < 2; ++x)
                for (unsigned y = 0; y < 2; ++y) {
                    const std::size_t i = Assemblage::index(a, b, x, y);
                    const double p = std::max(0.0, s.prob(a, b, x, y));
                    t.probs[i] = p;
                    t.b_s[i] = p > 0 ? indicator_B_S(a, b, x, y, s(a, b, x, y) * (1 / p), ghz_reference()) : 0.0;
                }
    return t;
}

using Tables = std::shared_ptr<const std::vector<CompiledDeviceTwo::Table>>;

Tables single(const Assemblage &s) { return std::make_shared<const std::vector<CompiledDeviceTwo::Table>>(1, tabulate(s)); }

}  // namespace

DeviceModelTwo optimal_lhs_cheat() { return DeviceModelTwo{device2::LhsCheat{lhs_optimal_assemblage(ghz_assemblage())}}; }

double indicator_B_S(unsigned a, unsigned b, unsigned x, unsigned y, const HermOp &sigma_tilde,
                     const Assemblage &reference) {
    if (a > 1 || b > 1 || x > 1 || y > 1) throw ValidationError("labels must be bits");
    if (sigma_tilde.dim() != 2 || std::abs(sigma_tilde.trace() - 1.0) > 1e-9)
        throw ValidationError("Charlie's state must be a unit-trace qubit operator");
    return 1.0 - trace_product(normalized_entry(reference, a, b, x, y), sigma_tilde).real();
}

double lhs_accept_bound(double epsilon, std::size_t runs) {
    SvParams{epsilon}.validate();
    const double pmin = (0.5 - epsilon) * (0.5 - epsilon);
    return std::pow(1 - pmin * (4 - std::sqrt(10.0)) / 2, static_cast<double>(runs));
}

CompiledDeviceTwo::CompiledDeviceTwo(const DeviceModelTwo &model, std::size_t runs) {
    std::visit(
        [&](const auto &m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, device2::HonestGHZ>) {
                components_.push_back({1.0, single(ghz_assemblage())});
            } else if constexpr (std::is_same_v<T, device2::LhsCheat>) {
                components_.push_back({1.0, single(m.assemblage)});
            } else if constexpr (std::is_same_v<T, device2::MixtureAssemblage>) {
                if (m.weights.size() != m.assemblages.size() || m.weights.empty())
                    throw ValidationError("mixture needs one weight per assemblage");
                double tot = 0;
                for (double w : m.weights) {
                    if (!(w >= 0) || !std::isfinite(w)) throw ValidationError("mixture weights must be >= 0");
                    tot += w;
                }
                if (std::abs(tot - 1.0) > 1e-9) throw ValidationError("mixture weights must sum to 1");
                for (std::size_t i = 0; i < m.weights.size(); ++i)
                    components_.push_back({m.weights[i], single(m.assemblages[i])});
            } else {
                if (m.assemblages.size() != runs)
                    throw ValidationError("per-run device needs " + std::to_string(runs) + " assemblages");
                std::vector<Table> t;
                t.reserve(runs);
                for (const auto &s : m.assemblages) t.push_back(tabulate(s));
                components_.push_back({1.0, std::make_shared<const std::vector<Table>>(std::move(t))});
            }
        },
        model.model);
}

std::size_t CompiledDeviceTwo::pick(double u) const {
    double acc = 0;
    for (std::size_t i = 0; i + 1 < components_.size(); ++i) {
        acc += components_[i].weight;
        if (u < acc) return i;
    }
    return components_.size() - 1;
}

void ProtocolTwoConfig::validate() const {
    SvParams{epsilon}.validate();
    if (runs < 2 || !is_power_of_two(runs)) throw ValidationError("M must be a power of two >= 2");
    if (!(tolerance >= 0) || !std::isfinite(tolerance)) throw ValidationError("tolerance must be >= 0");
    CompiledDeviceTwo(device, runs);
}

ProtocolTwoResult run_protocol_two(const ProtocolTwoConfig &cfg) {
    cfg.validate();
    return run_protocol_two(cfg, CompiledDeviceTwo(cfg.device, cfg.runs), cfg.seed);
}

ProtocolTwoResult run_protocol_two(const ProtocolTwoConfig &cfg, const CompiledDeviceTwo &dev, std::uint64_t seed,
                                   bool record) {
    const Rng master(seed);
    SvStream sv(SvParams{cfg.epsilon}, cfg.source, master.split(0)());
    Rng devrng = master.split(1);

    ProtocolTwoResult res;
    res.device_component = dev.pick(devrng.uniform());
    const auto &comp = dev.components()[res.device_component];
    std::vector<RunRecordTwo> runs(cfg.runs);
    double z = 0;
    for (std::size_t i = 0; i < cfg.runs; ++i) {
        RunRecordTwo r;
        r.x = sv.next_bit();
        r.y = sv.next_bit();
        const auto &t = comp.for_run(i);
        const double u = devrng.uniform();
        double acc = 0;
        unsigned o = 0;
        for (; o < 3; ++o) {
            acc += t.probs[Assemblage::index(o >> 1, o & 1, r.x, r.y)];
            if (u < acc) break;
        }
        r.a = static_cast<std::uint8_t>(o >> 1);
        r.b = static_cast<std::uint8_t>(o & 1);
        r.state_id = static_cast<std::uint8_t>(Assemblage::index(r.a, r.b, r.x, r.y));
        z += t.b_s[r.state_id];
        runs[i] = r;
    }
    res.z_s = z / static_cast<double>(cfg.runs);
    res.accepted = res.z_s <= cfg.tolerance;
    if (res.accepted) {
        const std::size_t sel = sv.sample_index(cfg.runs);
        res.selected_run = sel;
        res.output_bit = runs[sel].a;
    }
    if (record) res.transcript = std::move(runs);
    return res;
}

ProtocolTwoSummary monte_carlo_protocol_two(const ProtocolTwoConfig &cfg, std::size_t trials,
                                            std::vector<ProtocolTwoResult> *per_trial) {
    ProtocolTwoSummary s;
    if (trials == 0) return s;
    cfg.validate();
    const CompiledDeviceTwo dev(cfg.device, cfg.runs);
    const Rng master(cfg.seed);
    std::vector<ProtocolTwoResult> results(trials);
    parallel_for(trials, [&](std::size_t t) {
        results[t] = run_protocol_two(cfg, dev, master.split(t)(), per_trial != nullptr);
    });
    std::size_t acc = 0, zeros = 0;
    double zs = 0;
    for (const auto &r : results) {
        zs += r.z_s;
        s.max_z_s = std::max(s.max_z_s, r.z_s);
        if (r.accepted) {
            ++acc;
            zeros += *r.output_bit == 0;
        }
    }
    s.trials = trials;
    s.accept = wilson(acc, trials);
    s.output_zero = wilson(zeros, acc);
    s.mean_z_s = zs / trials;
    s.bias = acc ? s.output_zero.rate - 0.5 : 0.0;
    if (per_trial) *per_trial = std::move(results);
    return s;
}

// ---------------------------------------------------------------------------

namespace {

void only_keys(const nlohmann::json &j, std::initializer_list<const char *> allowed, const char *what) {
    if (!j.is_object()) throw ValidationError(std::string(what) + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char *a : allowed) ok = ok || it.key() == a;
        if (!ok) throw ValidationError(std::string(what) + ": unknown key '" + it.key() + "'");
    }
}

std::vector<Assemblage> assemblages_from(const nlohmann::json &j) {
    if (!j.is_array()) throw ValidationError("expected a list of assemblages");
    std::vector<Assemblage> out;
    for (const auto &e : j) out.push_back(assemblage_from_json(e));
    return out;
}

}  // namespace

nlohmann::json to_json(const DeviceModelTwo &d) {
    using nlohmann::json;
    return std::visit(
        [](const auto &m) -> json {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, device2::HonestGHZ>) {
                return {{"type", "honest_ghz"}};
            } else if constexpr (std::is_same_v<T, device2::LhsCheat>) {
                return {{"type", "lhs_cheat"}, {"assemblage", to_json(m.assemblage)}};
            } else if constexpr (std::is_same_v<T, device2::MixtureAssemblage>) {
                json a = json::array();
                for (const auto &s : m.assemblages) a.push_back(to_json(s));
                return {{"type", "mixture"}, {"weights", m.weights}, {"assemblages", a}};
            } else {
                json a = json::array();
                for (const auto &s : m.assemblages) a.push_back(to_json(s));
                return {{"type", "per_run"}, {"assemblages", a}};
            }
        },
        d.model);
}

DeviceModelTwo device_two_from_json(const nlohmann::json &j) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw ValidationError("device: expected an object with a 'type'");
    const std::string type = j["type"];
    if (type == "honest_ghz") {
        only_keys(j, {"type"}, "honest_ghz device");
        return {device2::HonestGHZ{}};
    }
    if (type == "lhs_cheat") {
        only_keys(j, {"type", "assemblage"}, "lhs_cheat device");
        if (!j.contains("assemblage")) return optimal_lhs_cheat();
        return {device2::LhsCheat{assemblage_from_json(j["assemblage"])}};
    }
    if (type == "mixture") {
        only_keys(j, {"type", "weights", "assemblages"}, "mixture device");
        return {device2::MixtureAssemblage{j.at("weights").get<std::vector<double>>(),
                                           assemblages_from(j.at("assemblages"))}};
    }
    if (type == "per_run") {
        only_keys(j, {"type", "assemblages"}, "per_run device");
        return {device2::PerRunAssemblages{assemblages_from(j.at("assemblages"))}};
    }
    throw ValidationError("device: unknown type '" + type + "'");
}

nlohmann::json to_json(const ProtocolTwoResult &r) {
    nlohmann::json t = nlohmann::json::array();
    for (const auto &e : r.transcript) t.push_back({e.x, e.y, e.a, e.b, e.state_id});
    nlohmann::json j = {{"accepted", r.accepted},
                        {"z_s", r.z_s},
                        {"device_component", r.device_component},
                        {"transcript", t}};
    j["output_bit"] = r.output_bit ? nlohmann::json(*r.output_bit) : nlohmann::json(nullptr);
    j["selected_run"] = r.selected_run ? nlohmann::json(*r.selected_run) : nlohmann::json(nullptr);
    return j;
}

ProtocolTwoConfig protocol_two_config_from_json(const nlohmann::json &j) {
    try {
        only_keys(j, {"M", "epsilon", "source", "device", "tolerance", "seed", "trials", "transcripts"},
                  "protocol2 config");
        ProtocolTwoConfig c;
        c.runs = j.at("M").get<std::size_t>();
        c.epsilon = j.value("epsilon", 0.0);
        c.source = j.contains("source") ? strategy_from_json(j["source"]) : SourceStrategy{strategy::Honest{}};
        c.device = j.contains("device") ? device_two_from_json(j["device"]) : DeviceModelTwo{device2::HonestGHZ{}};
        c.tolerance = j.value("tolerance", 1e-9);
        c.seed = j.value("seed", std::uint64_t{0});
        c.validate();
        return c;
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("protocol2 config: ") + e.what());
    }
}

}  // namespace weakrand

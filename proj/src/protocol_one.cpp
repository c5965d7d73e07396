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

#include "weakrand/protocol_one.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <string>

#include "weakrand/errors.h"
#include "weakrand/rng.h"

namespace weakrand {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void flatten(const DeviceModel &m, double weight, unsigned n, std::size_t runs,
             std::vector<CompiledDevice::Component> &out) {
    auto fixed = [&](CondBox box) {
        if (box.n_ladder() != n) throw ValidationError("device box ladder length does not match N");
        box.validate();
        out.push_back({weight, std::make_shared<const std::vector<CondBox>>(1, std::move(box))});
    };
    std::visit(overloaded{
                   [&](const device::HonestQuantum &h) {
                       if (h.strategy.n_ladder != n) throw ValidationError("strategy ladder length does not match N");
                       fixed(strategy_to_box(h.strategy));
                   },
                   [&](const device::LocalDeterministic &d) {
                       if (n + 1 < 32 && ((d.f >> (n + 1)) != 0 || (d.g >> (n + 1)) != 0))
                           throw ValidationError("response function has bits beyond setting N");
                       fixed(deterministic_box(n, d.f, d.g));
                   },
                   [&](const device::FixedBox &f) { fixed(f.box); },
                   [&](const device::PerRunBoxes &p) {
                       if (p.boxes.size() != runs) throw ValidationError("per-run box list length must equal M");
                       for (const auto &b : p.boxes) {
                           if (b.n_ladder() != n) throw ValidationError("device box ladder length does not match N");
                           b.validate();
                       }
                       out.push_back({weight, std::make_shared<const std::vector<CondBox>>(p.boxes)});
                   },
                   [&](const device::Mixture &mx) {
                       if (mx.weights.size() != mx.models.size() || mx.models.empty())
                           throw ValidationError("mixture needs one weight per model");
                       double tot = 0;
                       for (double w : mx.weights) {
                           if (!(w >= 0) || !std::isfinite(w)) throw ValidationError("mixture weights must be >= 0");
                           tot += w;
                       }
                       if (std::abs(tot - 1.0) > 1e-9) throw ValidationError("mixture weights must sum to 1");
                       for (std::size_t i = 0; i < mx.models.size(); ++i)
                           flatten(mx.models[i], weight * mx.weights[i], n, runs, out);
                   },
               },
               m.model);
}

std::uint8_t sample_outcome(const std::array<double, 4> &cell, double u) {
    double acc = 0;
    for (std::uint8_t k = 0; k < 3; ++k) {
        acc += cell[k];
        if (u < acc) return k;
    }
    return 3;
}

}  // namespace

DeviceModel honest_quantum_device(unsigned n) {
    return DeviceModel{device::HonestQuantum{build_strategy(n, optimize_x(n).x_star)}};
}

CompiledDevice::CompiledDevice(const DeviceModel &model, unsigned n, std::size_t runs) {
    flatten(model, 1.0, n, runs, components_);
}

std::size_t CompiledDevice::pick(double u) const {
    double acc = 0;
    for (std::size_t i = 0; i + 1 < components_.size(); ++i) {
        acc += components_[i].weight;
        if (u < acc) return i;
    }
    return components_.size() - 1;
}

void ProtocolOneConfig::validate() const {
    params.validate();
    const unsigned n = params.n_ladder;
    log2_exact(static_cast<std::uint64_t>(n) + 1);
    if (n + 1 > 65536) throw ValidationError("N+1 must not exceed 65536");
    const double s = n + 1.0;
    if (static_cast<double>(runs) < 2 * s * s) throw ValidationError("M must be at least 2 (N+1)^2");
    CompiledDevice(device, n, runs);
}

const char *to_string(AbortStage s) {
    switch (s) {
        case AbortStage::kNone: return "none";
        case AbortStage::kCardSH: return "card_SH";
        case AbortStage::kCardSHnz: return "card_SHnz";
        case AbortStage::kTest1: return "test1";
        case AbortStage::kTest2: return "test2";
    }
    return "unknown";
}

int indicator_B_H(unsigned a, unsigned b, unsigned x, unsigned y, unsigned n) {
    return is_hardy_zero_cell(a, b, x, y, n) ? 1 : 0;
}

int indicator_B_Hnz(unsigned a, unsigned b, unsigned x, unsigned y, unsigned n) {
    if (a > 1 || b > 1 || x > n || y > n) throw ValidationError("indicator label out of range");
    return x == n && y == n && a == 0 && b == 0 ? 1 : 0;
}

bool in_S_H(unsigned x, unsigned y, unsigned n) {
    return (x == 0 && y == 0) || (x == n && y == n) || x + 1 == y || y + 1 == x;
}

bool passes_card_SH(std::size_t size, std::size_t runs, unsigned n) {
    const double s = static_cast<double>(size), m = static_cast<double>(runs), k = n + 1.0;
    return s >= m / k && s <= 3 * m / k;
}

bool passes_card_SHnz(std::size_t size, std::size_t runs, unsigned n) {
    const double s = static_cast<double>(size), m = static_cast<double>(runs), k = n + 1.0;
    return s >= m / (2 * k * k) && s <= 3 * m / (2 * k * k);
}

bool passes_test1(double z_h, double delta1) { return z_h <= delta1; }
bool passes_test2(double z_hnz, double delta2) { return z_hnz >= 0.5 - delta2; }

ProtocolResult run_protocol_one(const ProtocolOneConfig &cfg) {
    cfg.validate();
    const CompiledDevice dev(cfg.device, cfg.params.n_ladder, cfg.runs);
    return run_protocol_one(cfg, dev, cfg.seed, true);
}

ProtocolResult run_protocol_one(const ProtocolOneConfig &cfg, const CompiledDevice &dev, std::uint64_t seed,
                                bool record) {
    const unsigned n = cfg.params.n_ladder;
    const std::size_t m = cfg.runs;
    const Rng master(seed);
    SvStream sv(SvParams{cfg.params.epsilon}, cfg.source, master.split(0)());
    Rng devrng = master.split(1);

    ProtocolResult res;
    res.device_component = dev.pick(devrng.uniform());
    const auto &comp = dev.components()[res.device_component];

    std::size_t bh = 0, bhnz = 0;
    std::vector<RunRecord> runs(m);
    std::vector<std::size_t> nz_runs;
    for (std::size_t i = 0; i < m; ++i) {
        RunRecord r;
        r.x = static_cast<std::uint16_t>(sv.sample_setting(n + 1));
        r.y = static_cast<std::uint16_t>(sv.sample_setting(n + 1));
        const std::uint8_t o = sample_outcome(comp.box_for_run(i).cell(r.x, r.y), devrng.uniform());
        r.a = o >> 1;
        r.b = o & 1;
        runs[i] = r;
        if (in_S_H(r.x, r.y, n)) {
            ++res.s_h_size;
            bh += indicator_B_H(r.a, r.b, r.x, r.y, n);
        }
        if (r.x == n && r.y == n) {
            nz_runs.push_back(i);
            bhnz += indicator_B_Hnz(r.a, r.b, r.x, r.y, n);
        }
    }
    res.s_hnz_size = nz_runs.size();
    res.z_h = res.s_h_size ? static_cast<double>(bh) / res.s_h_size : 0.0;
    res.z_hnz = res.s_hnz_size ? static_cast<double>(bhnz) / res.s_hnz_size : 0.0;

    if (!passes_card_SH(res.s_h_size, m, n))
        res.abort_stage = AbortStage::kCardSH;
    else if (!passes_card_SHnz(res.s_hnz_size, m, n))
        res.abort_stage = AbortStage::kCardSHnz;
    else if (!passes_test1(res.z_h, cfg.params.delta1_for(res.s_h_size)))
        res.abort_stage = AbortStage::kTest1;
    else if (!passes_test2(res.z_hnz, cfg.params.delta2))
        res.abort_stage = AbortStage::kTest2;

    if (res.abort_stage == AbortStage::kNone) {
        res.accepted = true;
        const std::size_t r = nz_runs[sv.sample_index(static_cast<std::uint32_t>(nz_runs.size()))];
        res.selected_run = r;
        res.output_bit = runs[r].a == 0 && runs[r].b == 0 ? 0 : 1;
    }
    if (record) res.transcript = std::move(runs);
    return res;
}

ProtocolOneSummary monte_carlo_protocol_one(const ProtocolOneConfig &cfg, std::size_t trials,
                                            std::vector<ProtocolResult> *per_trial) {
    ProtocolOneSummary s;
    if (trials == 0) return s;
    cfg.validate();
    const CompiledDevice dev(cfg.device, cfg.params.n_ladder, cfg.runs);
    const Rng master(cfg.seed);
    std::vector<ProtocolResult> results(trials);
    parallel_for(trials, [&](std::size_t t) {
        results[t] = run_protocol_one(cfg, dev, master.split(t)(), per_trial != nullptr);
    });
    std::size_t acc = 0, zeros = 0;
    double zh = 0, zhnz = 0;
    for (const auto &r : results) {
        ++s.stage_counts[static_cast<std::size_t>(r.abort_stage)];
        zh += r.z_h;
        zhnz += r.z_hnz;
        s.max_z_h_nonzero += r.z_h > 0;
        if (r.accepted) {
            ++acc;
            zeros += *r.output_bit == 0;
        }
    }
    s.trials = trials;
    s.accept = wilson(acc, trials);
    s.output_zero = wilson(zeros, acc);
    s.mean_z_h = zh / trials;
    s.mean_z_hnz = zhnz / trials;
    if (per_trial) *per_trial = std::move(results);
    return s;
}

// ---------------------------------------------------------------------------
// Distance to uniform.

namespace {

// Distribution of a sum of independent Bernoulli(p_i).
std::vector<double> poisson_binomial(const std::vector<double> &p, std::size_t skip = SIZE_MAX) {
    std::vector<double> d(1, 1.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i == skip) continue;
        d.push_back(0.0);
        for (std::size_t k = d.size() - 1; k > 0; --k) d[k] = d[k] * (1 - p[i]) + d[k - 1] * p[i];
        d[0] *= 1 - p[i];
    }
    return d;
}

struct LabelGroup {
    std::uint32_t label;
    std::vector<CompiledDevice::Component> comps;  // weights include the branch weight
};

// Per label and selected index r in S_H-nz: P(accept, R = 0) and P(accept, R = 1).
struct SettingsEval {
    bool cards_ok = false;
    std::size_t n_nz = 0;
    // [group][r] -> {p0, p1}
    std::vector<std::vector<std::array<double, 2>>> values;
};

SettingsEval evaluate_settings(const ProtocolOneConfig &cfg, const std::vector<LabelGroup> &groups,
                               const std::vector<std::pair<unsigned, unsigned>> &settings) {
    const unsigned n = cfg.params.n_ladder;
    const std::size_t m = cfg.runs;
    std::vector<std::size_t> sh, nz;
    for (std::size_t i = 0; i < m; ++i) {
        const auto [x, y] = settings[i];
        if (in_S_H(x, y, n)) sh.push_back(i);
        if (x == n && y == n) nz.push_back(i);
    }
    SettingsEval ev;
    ev.n_nz = nz.size();
    ev.cards_ok = passes_card_SH(sh.size(), m, n) && passes_card_SHnz(nz.size(), m, n);
    if (!ev.cards_ok) return ev;
    const double d1 = cfg.params.delta1_for(sh.size());
    ev.values.assign(groups.size(), std::vector<std::array<double, 2>>(nz.size(), {0.0, 0.0}));
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        for (const auto &c : groups[gi].comps) {
            std::vector<double> q;
            for (std::size_t i : sh) {
                const auto [x, y] = settings[i];
                const auto &box = c.box_for_run(i);
                double v = 0;
                for (unsigned a = 0; a < 2; ++a)
                    for (unsigned b = 0; b < 2; ++b)
                        if (is_hardy_zero_cell(a, b, x, y, n)) v += box(a, b, x, y);
                q.push_back(v);
            }
            const auto kd = poisson_binomial(q);
            double p_t1 = 0;
            for (std::size_t k = 0; k < kd.size(); ++k)
                if (passes_test1(static_cast<double>(k) / sh.size(), d1)) p_t1 += kd[k];
            if (p_t1 == 0) continue;
            std::vector<double> p;
            for (std::size_t i : nz) p.push_back(c.box_for_run(i)(0, 0, n, n));
            const double nn = static_cast<double>(nz.size());
            for (std::size_t r = 0; r < nz.size(); ++r) {
                const auto od = poisson_binomial(p, r);
                double with = 0, without = 0;
                for (std::size_t k = 0; k < od.size(); ++k) {
                    if (passes_test2((k + 1) / nn, cfg.params.delta2)) with += od[k];
                    if (passes_test2(k / nn, cfg.params.delta2)) without += od[k];
                }
                ev.values[gi][r][0] += c.weight * p_t1 * p[r] * with;
                ev.values[gi][r][1] += c.weight * p_t1 * (1 - p[r]) * without;
            }
        }
    }
    return ev;
}

constexpr int kMaxSelectionAttempts = 12;

struct Accum {
    double joint = 0, accept = 0, zero = 0, lost = 0;
};

void add_selected(const SettingsEval &ev, std::uint32_t v, double p, Accum &acc) {
    for (const auto &g : ev.values) {
        acc.joint += p * std::abs(g[v][0] - g[v][1]);
        acc.accept += p * (g[v][0] + g[v][1]);
        acc.zero += p * g[v][0];
    }
}

// Enumerates the selection bits after `hist`, accumulating into `acc` with
// prefix probability `pr`.
void enumerate_selection(const ProtocolOneConfig &cfg, const SettingsEval &ev, std::vector<std::uint8_t> &hist,
                         double pr, Accum &acc) {
    const std::size_t n = ev.n_nz;
    const unsigned k = ceil_log2(n);
    if (!std::holds_alternative<strategy::HistoryTable>(cfg.source)) {
        // Bias depends on the bit position only, so each attempt is a
        // product distribution over the k selection bits.
        const std::size_t base = hist.size();
        std::vector<std::uint8_t> pad(base + k * kMaxSelectionAttempts, 0);
        double carry = pr;
        for (int attempt = 0; attempt < kMaxSelectionAttempts && carry > 0; ++attempt) {
            std::vector<double> dist(1, carry);
            for (unsigned d = 0; d < k; ++d) {
                const std::size_t pos = base + attempt * k + d;
                const double p0 = bias_for(cfg.source, cfg.params.epsilon, std::span(pad.data(), pos));
                std::vector<double> nd(dist.size() * 2);
                for (std::size_t v = 0; v < dist.size(); ++v) {
                    nd[2 * v] = dist[v] * p0;
                    nd[2 * v + 1] = dist[v] * (1 - p0);
                }
                dist = std::move(nd);
            }
            carry = 0;
            for (std::size_t v = 0; v < dist.size(); ++v) {
                if (v < n)
                    add_selected(ev, static_cast<std::uint32_t>(v), dist[v], acc);
                else
                    carry += dist[v];
            }
        }
        acc.lost += carry;
        return;
    }
    const double floor = pr * 1e-9;
    std::function<void(unsigned, std::uint32_t, double, int)> rec = [&](unsigned depth, std::uint32_t v, double p,
                                                                         int attempt) {
        if (depth == k) {
            if (v < n)
                add_selected(ev, v, p, acc);
            else if (attempt + 1 >= kMaxSelectionAttempts || p < floor)
                acc.lost += p;
            else
                rec(0, 0, p, attempt + 1);
            return;
        }
        const double p0 = bias_for(cfg.source, cfg.params.epsilon, hist);
        for (std::uint8_t bit = 0; bit < 2; ++bit) {
            hist.push_back(bit);
            rec(depth + 1, (v << 1) | bit, p * (bit == 0 ? p0 : 1 - p0), attempt);
            hist.pop_back();
        }
    };
    rec(0, 0, pr, 0);
}

std::vector<LabelGroup> group_family(const std::vector<AdversaryBranch> &family, unsigned n, std::size_t runs) {
    if (family.empty()) throw ValidationError("adversary family must not be empty");
    double tot = 0;
    for (const auto &b : family) {
        if (!(b.weight >= 0) || !std::isfinite(b.weight)) throw ValidationError("branch weights must be >= 0");
        tot += b.weight;
    }
    if (std::abs(tot - 1.0) > 1e-9) throw ValidationError("branch weights must sum to 1");
    std::map<std::uint32_t, std::size_t> at;
    std::vector<LabelGroup> groups;
    for (const auto &b : family) {
        auto it = at.find(b.label);
        if (it == at.end()) {
            it = at.emplace(b.label, groups.size()).first;
            groups.push_back({b.label, {}});
        }
        const CompiledDevice dev(b.device, n, runs);
        for (auto c : dev.components()) {
            c.weight *= b.weight;
            groups[it->second].comps.push_back(std::move(c));
        }
    }
    return groups;
}

}  // namespace

DistanceEstimate distance_to_uniform_estimate(const ProtocolOneConfig &cfg, const std::vector<AdversaryBranch> &family,
                                              std::size_t trials) {
    cfg.params.validate();
    const unsigned n = cfg.params.n_ladder;
    const unsigned L = log2_exact(static_cast<std::uint64_t>(n) + 1);
    const auto groups = group_family(family, n, cfg.runs);
    DistanceEstimate out;
    Accum acc;
    double zero = 0;

    auto decode = [&](const std::vector<std::uint8_t> &bits) {
        std::vector<std::pair<unsigned, unsigned>> s(cfg.runs);
        std::size_t pos = 0;
        auto take = [&] {
            unsigned v = 0;
            for (unsigned i = 0; i < L; ++i) v = (v << 1) | bits[pos++];
            return v;
        };
        for (auto &xy : s) {
            xy.first = take();
            xy.second = take();
        }
        return s;
    };

    if (trials == 0) {
        if (n != 1 || cfg.runs > 8) throw ValidationError("exact enumeration supports N = 1 and M <= 8 only");
        const std::size_t nbits = cfg.runs * 2 * L;
        std::vector<std::uint8_t> hist;
        std::function<void(double)> rec = [&](double p) {
            if (hist.size() == nbits) {
                const auto ev = evaluate_settings(cfg, groups, decode(hist));
                if (ev.cards_ok) enumerate_selection(cfg, ev, hist, p, acc);
                return;
            }
            const double p0 = bias_for(cfg.source, cfg.params.epsilon, hist);
            for (std::uint8_t bit = 0; bit < 2; ++bit) {
                hist.push_back(bit);
                rec(p * (bit == 0 ? p0 : 1 - p0));
                hist.pop_back();
            }
        };
        rec(1.0);
        out.exact = true;
        out.joint_distance = acc.joint;
        out.accept_probability = acc.accept;
        zero = acc.zero;
        out.error = acc.lost;
    } else {
        const Rng master(cfg.seed);
        std::vector<Accum> per(trials);
        parallel_for(trials, [&](std::size_t t) {
            SvStream sv(SvParams{cfg.params.epsilon}, cfg.source, master.split(t)());
            for (std::size_t i = 0; i < cfg.runs; ++i) {
                sv.sample_setting(n + 1);
                sv.sample_setting(n + 1);
            }
            std::vector<std::uint8_t> hist = sv.history();
            const auto ev = evaluate_settings(cfg, groups, decode(hist));
            if (ev.cards_ok) enumerate_selection(cfg, ev, hist, 1.0, per[t]);
        });
        double sj = 0, sj2 = 0, sa = 0, sl = 0;
        for (const auto &a : per) {
            sj += a.joint;
            sj2 += a.joint * a.joint;
            sa += a.accept;
            zero += a.zero;
            sl += a.lost;
        }
        const double T = static_cast<double>(trials);
        out.joint_distance = sj / T;
        out.accept_probability = sa / T;
        zero /= T;
        const double var = trials > 1 ? std::max(0.0, (sj2 - sj * sj / T) / (T - 1)) : 0.0;
        out.error = 3.0 * std::sqrt(var / T) + sl / T;
    }
    if (out.accept_probability > 0) {
        out.conditional_distance = out.joint_distance / out.accept_probability;
        out.output_zero_given_accept = zero / out.accept_probability;
    }
    out.abort_dominated = out.accept_probability < 0.5;
    return out;
}

// ---------------------------------------------------------------------------
// JSON.

nlohmann::json to_json(const DeviceModel &d) {
    using nlohmann::json;
    return std::visit(overloaded{
                          [](const device::HonestQuantum &h) {
                              return json{{"type", "honest_quantum"}, {"x_ratio", h.strategy.x_ratio}};
                          },
                          [](const device::LocalDeterministic &l) {
                              return json{{"type", "local_deterministic"}, {"f", l.f}, {"g", l.g}};
                          },
                          [](const device::FixedBox &f) { return json{{"type", "fixed_box"}, {"box", to_json(f.box)}}; },
                          [](const device::PerRunBoxes &p) {
                              json arr = json::array();
                              for (const auto &b : p.boxes) arr.push_back(to_json(b));
                              return json{{"type", "per_run_boxes"}, {"boxes", arr}};
                          },
                          [](const device::Mixture &m) {
                              json arr = json::array();
                              for (const auto &x : m.models) arr.push_back(to_json(x));
                              return json{{"type", "mixture"}, {"weights", m.weights}, {"models", arr}};
                          },
                      },
                      d.model);
}

namespace {

void only_keys(const nlohmann::json &j, std::initializer_list<const char *> allowed, const char *what) {
    if (!j.is_object()) throw ValidationError(std::string(what) + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char *a : allowed) ok = ok || it.key() == a;
        if (!ok) throw ValidationError(std::string(what) + ": unknown key '" + it.key() + "'");
    }
}

}  // namespace

DeviceModel device_from_json(const nlohmann::json &j, unsigned n) {
    try {
        const std::string type = j.at("type").get<std::string>();
        if (type == "honest_quantum") {
            only_keys(j, {"type", "x_ratio"}, "device");
            const double x = j.contains("x_ratio") ? j["x_ratio"].get<double>() : optimize_x(n).x_star;
            return DeviceModel{device::HonestQuantum{build_strategy(n, x)}};
        }
        if (type == "local_deterministic") {
            only_keys(j, {"type", "f", "g"}, "device");
            return DeviceModel{device::LocalDeterministic{j.at("f").get<std::uint32_t>(), j.at("g").get<std::uint32_t>()}};
        }
        if (type == "pr_box") {
            only_keys(j, {"type"}, "device");
            return DeviceModel{device::FixedBox{pr_ladder_box(n)}};
        }
        if (type == "fixed_box") {
            only_keys(j, {"type", "box"}, "device");
            return DeviceModel{device::FixedBox{box_from_json(j.at("box"))}};
        }
        if (type == "per_run_boxes") {
            only_keys(j, {"type", "boxes"}, "device");
            device::PerRunBoxes p;
            for (const auto &b : j.at("boxes")) p.boxes.push_back(box_from_json(b));
            return DeviceModel{std::move(p)};
        }
        if (type == "mixture") {
            only_keys(j, {"type", "weights", "models"}, "device");
            device::Mixture m;
            m.weights = j.at("weights").get<std::vector<double>>();
            for (const auto &x : j.at("models")) m.models.push_back(device_from_json(x, n));
            return DeviceModel{std::move(m)};
        }
        throw ValidationError("unknown device type '" + type + "'");
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("device: ") + e.what());
    }
}

nlohmann::json to_json(const ProtocolResult &r) {
    nlohmann::json runs = nlohmann::json::array();
    for (const auto &t : r.transcript) runs.push_back({t.x, t.y, t.a, t.b});
    nlohmann::json j{{"accepted", r.accepted},
                     {"abort_stage", to_string(r.abort_stage)},
                     {"z_h", r.z_h},
                     {"z_hnz", r.z_hnz},
                     {"s_h_size", r.s_h_size},
                     {"s_hnz_size", r.s_hnz_size},
                     {"device_component", r.device_component},
                     {"transcript", runs}};
    j["output_bit"] = r.output_bit ? nlohmann::json(*r.output_bit) : nlohmann::json(nullptr);
    j["selected_run"] = r.selected_run ? nlohmann::json(*r.selected_run) : nlohmann::json(nullptr);
    return j;
}

ProtocolOneConfig protocol_one_config_from_json(const nlohmann::json &j) {
    try {
        only_keys(j, {"N", "epsilon", "M", "r", "source", "device", "seed", "delta1", "trials", "transcripts"},
                  "protocol1 config");
        const unsigned n = j.at("N").get<unsigned>();
        const double eps = j.value("epsilon", 0.0);
        ProtocolOneConfig c;
        if (j.contains("M") == j.contains("r")) throw ValidationError("protocol1 config: give exactly one of M or r");
        double r;
        if (j.contains("M")) {
            c.runs = j["M"].get<std::size_t>();
            r = std::log(static_cast<double>(c.runs)) / std::log(n + 1.0);
        } else {
            r = j["r"].get<double>();
            c.runs = static_cast<std::size_t>(std::llround(std::pow(n + 1.0, r)));
        }
        c.params = SecurityParams::defaults(eps, n, r);
        if (j.contains("delta1")) c.params.delta1 = j["delta1"].get<double>();
        c.source = j.contains("source") ? strategy_from_json(j["source"]) : SourceStrategy{strategy::Honest{}};
        c.device = j.contains("device") ? device_from_json(j["device"], n) : honest_quantum_device(n);
        c.seed = j.value("seed", std::uint64_t{0});
        c.validate();
        return c;
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("protocol1 config: ") + e.what());
    }
}

}  // namespace weakrand

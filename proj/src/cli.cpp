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

#include "weakrand/cli.h"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "weakrand/assemblage.h"
#include "weakrand/errors.h"
#include "weakrand/hardy_quantum.h"
#include "weakrand/ns_box.h"
#include "weakrand/parallel.h"
#include "weakrand/protocol_one.h"
#include "weakrand/protocol_two.h"
#include "weakrand/report.h"
#include "weakrand/security_bounds.h"

namespace weakrand::cli {

namespace {

using nlohmann::json;

struct Options {
    std::string config;
    std::string out;
    std::string format = "csv";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<unsigned> n_max;
    std::string transcripts;

    // Subcommand specific.
    std::string in;
    std::string name;
    std::vector<std::string> params;
    std::vector<std::string> inputs;
    std::string x_col;
    std::vector<std::string> y_cols;
    std::string title;
    std::string merged;
    bool log_x = false, log_y = false;
};

json load_config(const Options &o) {
    if (o.config.empty()) return json::object();
    std::ifstream f(o.config);
    if (!f) throw ValidationError("cannot read config '" + o.config + "'");
    json j = json::parse(f);
    if (!j.is_object()) throw ValidationError("config must be a JSON object");
    return j;
}

void only_keys(const json &j, std::initializer_list<const char *> allowed, const std::string &what) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char *a : allowed) ok = ok || it.key() == a;
        if (!ok) throw ValidationError(what + " config: unknown key '" + it.key() + "'");
    }
}

std::uint64_t config_hash(const std::string &command, const json &cfg, const Options &o) {
    json opts = {{"format", o.format}};
    if (o.seed) opts["seed"] = *o.seed;
    if (o.trials) opts["trials"] = *o.trials;
    if (o.n_max) opts["n_max"] = *o.n_max;
    if (!o.in.empty()) opts["in"] = o.in;
    if (!o.name.empty()) opts["name"] = o.name;
    if (!o.params.empty()) opts["params"] = o.params;
    return fnv1a(json{{"command", command}, {"config", cfg}, {"options", opts}}.dump());
}

class Sink {
   public:
    Sink(const Options &o, std::ostream &fallback) : fallback_(fallback) {
        if (!o.out.empty()) {
            file_.open(o.out, std::ios::binary);
            if (!file_) throw ValidationError("cannot write '" + o.out + "'");
        }
    }
    std::ostream &stream() { return file_.is_open() ? static_cast<std::ostream &>(file_) : fallback_; }

   private:
    std::ofstream file_;
    std::ostream &fallback_;
};

void emit(const Table &t, const Provenance &p, const Options &o, std::ostream &out) {
    Sink sink(o, out);
    if (o.format == "json")
        sink.stream() << table_to_json(t, p).dump(2) << "\n";
    else
        write_csv(sink.stream(), t, p);
}

std::vector<double> epsilon_list(const json &cfg, const char *key, std::vector<double> fallback) {
    if (!cfg.contains(key)) return fallback;
    auto v = cfg.at(key).get<std::vector<double>>();
    if (v.empty()) throw ValidationError(std::string(key) + " must not be empty");
    return v;
}

// ---------------------------------------------------------------------------

int hardy_scan(const Options &o, std::ostream &out) {
    const json cfg = load_config(o);
    only_keys(cfg, {"n_max", "n_values"}, "hardy-scan");
    std::vector<unsigned> ns;
    if (cfg.contains("n_values")) {
        ns = cfg["n_values"].get<std::vector<unsigned>>();
    } else {
        const unsigned n_max = o.n_max.value_or(cfg.value("n_max", 1024u));
        for (unsigned n = 1; n <= n_max; ++n) ns.push_back(n);
    }
    if (ns.empty()) throw ValidationError("hardy-scan: no ladder lengths requested");
    for (unsigned n : ns)
        if (n < 1 || n > (1u << 20)) throw ValidationError("hardy-scan: N must lie in [1, 2^20]");
    std::vector<HardyOptimum> opt(ns.size());
    parallel_for(ns.size(), [&](std::size_t i) { opt[i] = optimize_x(ns[i]); });
    Table t{{"N", "x_star", "P_H", "I", "gap", "ansatz_gap", "ansatz_holds"}, {}};
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const double gap = 0.5 - opt[i].p_h_star;
        t.add({std::int64_t{ns[i]}, opt[i].x_star, opt[i].p_h_star, gap, gap, ansatz_gap(ns[i]), gap <= ansatz_gap(ns[i])});
    }
    emit(t, {o.seed.value_or(0), config_hash("hardy-scan", cfg, o)}, o, out);
    return kOk;
}

int lp_bound(const Options &o, std::ostream &out) {
    const json cfg = load_config(o);
    only_keys(cfg, {"n_max", "kappas"}, "lp-bound");
    const unsigned n_max = o.n_max.value_or(cfg.value("n_max", 4u));
    if (n_max < 1 || n_max > 8) throw ValidationError("lp-bound: n_max must lie in [1, 8]");
    const auto kappas = epsilon_list(cfg, "kappas", {0.0, 0.05, 0.1, 0.3});
    for (double k : kappas)
        if (!(k >= 0)) throw ValidationError("lp-bound: kappa must be >= 0");
    Table t{{"N", "kappa", "lp_value", "bound", "within_bound", "iterations"}, {}};
    for (unsigned n = 1; n <= n_max; ++n)
        for (double k : kappas) {
            const auto r = lp_max_hardy_given_I0(n, k);
            const double bound = (1 + k) / 2;
            t.add({std::int64_t{n}, k, r.value, bound, r.value <= bound + 1e-8, static_cast<std::int64_t>(r.iterations)});
        }
    emit(t, {o.seed.value_or(0), config_hash("lp-bound", cfg, o)}, o, out);
    return kOk;
}

int mdl_check(const Options &o, std::ostream &out) {
    const json cfg = load_config(o);
    only_keys(cfg, {"N", "epsilons"}, "mdl-check");
    const unsigned n = cfg.value("N", 1u);
    if (n < 1 || n > 3 || !is_power_of_two(n + 1)) throw ValidationError("mdl-check: N must be 1 or 3");
    const auto eps = epsilon_list(cfg, "epsilons", {0.0, 0.1, 0.2, 0.3, 0.4, 0.49});
    const CondBox quantum = strategy_to_box(build_strategy(n, optimize_x(n).x_star));
    Table t{{"epsilon", "classical_max", "quantum_uniform", "classical_ok", "quantum_violates"}, {}};
    for (double e : eps) {
        double cmax = -INFINITY;
        for (const auto &box : enumerate_local_deterministic(n))
            cmax = std::max(cmax, mdl_value(box, mdl_worst_case_inputs(box, e), e));
        const double q = mdl_value(quantum, uniform_inputs(n), e);
        t.add({e, cmax, q, cmax <= 1e-12, q > 0});
    }
    emit(t, {o.seed.value_or(0), config_hash("mdl-check", cfg, o)}, o, out);
    return kOk;
}

int threshold_scan(const Options &o, std::ostream &out) {
    const json cfg = load_config(o);
    only_keys(cfg, {"eps_min", "eps_max", "eps_step"}, "threshold-scan");
    const double lo = cfg.value("eps_min", 0.005), hi = cfg.value("eps_max", 0.12), step = cfg.value("eps_step", 0.005);
    if (!(lo > 0) || !(hi < 0.5) || !(hi >= lo) || !(step > 0))
        throw ValidationError("threshold-scan: need 0 < eps_min <= eps_max < 0.5 and eps_step > 0");
    Table t{{"kind", "epsilon", "r", "e1", "e2", "distance_exponent", "feasible", "feasible_distance"}, {}};
    auto row = [&](const char *kind, double e) {
        const double r = r_exponent(e);
        const auto sel = prob_bad_run_selected(SecurityParams::defaults(e, 1, r));
        const double de = distance_exponent(e);
        t.add({std::string(kind), e, r, sel.e1, sel.e2, de, sel.e1 < 0 && sel.e2 < 0, de < 0});
    };
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) row("sweep", lo + step * static_cast<double>(i));
    row("root_ns", threshold_eps_ns());
    row("root_distance", threshold_eps_distance());
    emit(t, {o.seed.value_or(0), config_hash("threshold-scan", cfg, o)}, o, out);
    return kOk;
}

// One JSON object per protocol run.
void write_transcripts(const std::string &path, const std::vector<ProtocolResult> &results) {
    if (path.empty()) return;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot write '" + path + "'");
    for (std::size_t t = 0; t < results.size(); ++t)
        for (std::size_t i = 0; i < results[t].transcript.size(); ++i) {
            const auto &r = results[t].transcript[i];
            f << json{{"trial", t}, {"run", i}, {"x", r.x}, {"y", r.y}, {"a", r.a}, {"b", r.b}}.dump() << "\n";
        }
}

void write_transcripts(const std::string &path, const std::vector<ProtocolTwoResult> &results) {
    if (path.empty()) return;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot write '" + path + "'");
    for (std::size_t t = 0; t < results.size(); ++t)
        for (std::size_t i = 0; i < results[t].transcript.size(); ++i) {
            const auto &r = results[t].transcript[i];
            f << json{{"trial", t}, {"run", i}, {"x", r.x}, {"y", r.y}, {"a", r.a}, {"b", r.b}, {"state", r.state_id}}
                     .dump()
              << "\n";
        }
}

json proportion_json(const Proportion &p) {
    return {{"successes", p.successes}, {"trials", p.trials}, {"rate", p.rate}, {"lo", p.lo}, {"hi", p.hi}};
}

int protocol1_run(const Options &o, std::ostream &out) {
    if (o.config.empty()) throw ValidationError("protocol1 run: --config is required");
    const json cfg = load_config(o);
    auto c = protocol_one_config_from_json(cfg);
    if (o.seed) c.seed = *o.seed;
    const std::size_t trials = o.trials.value_or(cfg.value("trials", std::size_t{1}));
    const std::string transcripts = o.transcripts.empty() ? cfg.value("transcripts", std::string()) : o.transcripts;
    std::vector<ProtocolResult> results;
    const auto s = monte_carlo_protocol_one(c, trials, &results);
    write_transcripts(transcripts, results);
    const Provenance prov{c.seed, config_hash("protocol1 run", cfg, o)};
    if (o.format == "json") {
        json per = json::array();
        for (const auto &r : results) {
            json j = to_json(r);
            j.erase("transcript");
            per.push_back(std::move(j));
        }
        json stages = json::object();
        for (std::size_t i = 0; i < s.stage_counts.size(); ++i)
            stages[to_string(static_cast<AbortStage>(i))] = s.stage_counts[i];
        const json doc = {{"version", kVersion},
                          {"seed", c.seed},
                          {"summary",
                           {{"trials", s.trials},
                            {"accept", proportion_json(s.accept)},
                            {"output_zero", proportion_json(s.output_zero)},
                            {"mean_z_h", s.mean_z_h},
                            {"mean_z_hnz", s.mean_z_hnz},
                            {"trials_with_z_h_positive", s.max_z_h_nonzero},
                            {"stages", stages}}},
                          {"trials", per}};
        Sink sink(o, out);
        sink.stream() << doc.dump(2) << "\n";
        return kOk;
    }
    Table t{{"trial", "accepted", "abort_stage", "output", "z_h", "z_hnz", "s_h", "s_hnz", "component"}, {}};
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto &r = results[i];
        t.add({static_cast<std::int64_t>(i), r.accepted, std::string(to_string(r.abort_stage)),
               r.output_bit ? Cell{std::int64_t{*r.output_bit}} : Cell{std::string("")}, r.z_h, r.z_hnz,
               static_cast<std::int64_t>(r.s_h_size), static_cast<std::int64_t>(r.s_hnz_size),
               static_cast<std::int64_t>(r.device_component)});
    }
    emit(t, prov, o, out);
    return kOk;
}

int protocol2_run(const Options &o, std::ostream &out) {
    if (o.config.empty()) throw ValidationError("protocol2 run: --config is required");
    const json cfg = load_config(o);
    auto c = protocol_two_config_from_json(cfg);
    if (o.seed) c.seed = *o.seed;
    const std::size_t trials = o.trials.value_or(cfg.value("trials", std::size_t{1}));
    const std::string transcripts = o.transcripts.empty() ? cfg.value("transcripts", std::string()) : o.transcripts;
    std::vector<ProtocolTwoResult> results;
    const auto s = monte_carlo_protocol_two(c, trials, &results);
    write_transcripts(transcripts, results);
    const Provenance prov{c.seed, config_hash("protocol2 run", cfg, o)};
    if (o.format == "json") {
        json per = json::array();
        for (const auto &r : results) {
            json j = to_json(r);
            j.erase("transcript");
            per.push_back(std::move(j));
        }
        const json doc = {{"version", kVersion},
                          {"seed", c.seed},
                          {"summary",
                           {{"trials", s.trials},
                            {"accept", proportion_json(s.accept)},
                            {"output_zero", proportion_json(s.output_zero)},
                            {"bias", s.bias},
                            {"mean_z_s", s.mean_z_s},
                            {"max_z_s", s.max_z_s}}},
                          {"trials", per}};
        Sink sink(o, out);
        sink.stream() << doc.dump(2) << "\n";
        return kOk;
    }
    Table t{{"trial", "accepted", "output", "z_s", "selected_run", "component"}, {}};
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto &r = results[i];
        t.add({static_cast<std::int64_t>(i), r.accepted,
               r.output_bit ? Cell{std::int64_t{*r.output_bit}} : Cell{std::string("")}, r.z_s,
               r.selected_run ? Cell{static_cast<std::int64_t>(*r.selected_run)} : Cell{std::string("")},
               static_cast<std::int64_t>(r.device_component)});
    }
    emit(t, prov, o, out);
    return kOk;
}

int assemblage_verify(const Options &o, std::ostream &out) {
    if (o.in.empty()) throw ValidationError("assemblage verify: --in is required");
    std::ifstream f(o.in);
    if (!f) throw ValidationError("cannot read '" + o.in + "'");
    const json j = json::parse(f);
    const Assemblage g = ghz_assemblage();
    Table t{{"quantity", "value"}, {}};
    if (j.is_object() && j.contains("n")) {
        const auto s = sequential_from_json(j);
        const auto rep = check_sequential_ns(s);
        std::vector<Assemblage> refs(s.times(), g);
        t.add({std::string("times"), std::int64_t{s.times()}});
        t.add({std::string("valid"), rep.valid});
        t.add({std::string("worst_residual"), rep.worst});
        t.add({std::string("first_failure"), rep.where});
        t.add({std::string("F_n_vs_ghz"), steering_F_n(refs, s)});
        t.add({std::string("F_n_max"), std::pow(4.0, s.times())});
    } else {
        const auto s = assemblage_from_json(j);
        const auto rep = check_assemblage(s);
        t.add({std::string("valid"), rep.valid});
        t.add({std::string("worst_residual"), rep.worst});
        t.add({std::string("first_failure"), rep.where});
        t.add({std::string("F_vs_ghz"), steering_F(g, s)});
        t.add({std::string("lhs_bound"), lhs_bound(g).value});
        std::string verdict;
        try {
            const auto inf = inflexibility(to_rank_one(s));
            verdict = inf.inflexible ? "inflexible" : "flexible";
        } catch (const ValidationError &) {
            verdict = "not rank one";
        }
        t.add({std::string("inflexibility"), verdict});
    }
    emit(t, {o.seed.value_or(0), config_hash("assemblage verify", j, o)}, o, out);
    return kOk;
}

// ---------------------------------------------------------------------------

using Params = std::map<std::string, double>;
using Quantities = std::vector<std::pair<std::string, double>>;

struct Formula {
    std::vector<std::string> params;
    std::function<Quantities(const Params &)> eval;
};

SecurityParams security_from(const Params &p) {
    auto s = SecurityParams::defaults(p.at("epsilon"), static_cast<unsigned>(p.at("N")), p.at("r"));
    s.validate();
    return s;
}

const std::map<std::string, Formula> &formulas() {
    static const std::map<std::string, Formula> f = {
        {"freedman_tail",
         {{"beta", "sigma2", "R"}, [](const Params &p) {
              return Quantities{{"value", freedman_tail(p.at("beta"), p.at("sigma2"), p.at("R"))}};
          }}},
        {"azuma_tail",
         {{"n", "delta"}, [](const Params &p) {
              return Quantities{{"value", azuma_tail(static_cast<std::size_t>(p.at("n")), p.at("delta"))}};
          }}},
        {"t_prime", {{"epsilon", "r"}, [](const Params &p) { return Quantities{{"value", t_prime(p.at("epsilon"), p.at("r"))}}; }}},
        {"r_exponent", {{"epsilon"}, [](const Params &p) { return Quantities{{"value", r_exponent(p.at("epsilon"))}}; }}},
        {"e2_at_optimal_r",
         {{"epsilon"}, [](const Params &p) { return Quantities{{"value", e2_at_optimal_r(p.at("epsilon"))}}; }}},
        {"distance_exponent",
         {{"epsilon"}, [](const Params &p) { return Quantities{{"value", distance_exponent(p.at("epsilon"))}}; }}},
        {"distance_bound_ns",
         {{"epsilon", "N", "r"}, [](const Params &p) { return Quantities{{"value", distance_bound_ns(security_from(p))}}; }}},
        {"bad_runs_bound_test1",
         {{"epsilon", "N", "r"}, [](const Params &p) {
              const auto b = bad_runs_bound_test1(security_from(p));
              return Quantities{{"bound", b.bound}, {"probability", b.probability}};
          }}},
        {"total_bad_bound",
         {{"epsilon", "N", "r"}, [](const Params &p) {
              const auto b = total_bad_bound(security_from(p));
              return Quantities{{"bound", b.bound}, {"probability", b.probability}};
          }}},
        {"prob_bad_run_selected",
         {{"epsilon", "N", "r"}, [](const Params &p) {
              const auto b = prob_bad_run_selected(security_from(p));
              return Quantities{{"bound", b.bound}, {"e1", b.e1}, {"e2", b.e2}, {"c", b.c}};
          }}},
        {"quantum_distance_bound",
         {{"epsilon", "N", "i0", "delta"}, [](const Params &p) {
              return Quantities{{"value", quantum_distance_bound(p.at("epsilon"), static_cast<unsigned>(p.at("N")),
                                                                 p.at("i0"), p.at("delta"))}};
          }}},
        {"alpha_measure",
         {{"epsilon", "N"}, [](const Params &p) {
              return Quantities{{"value", alpha_measure(p.at("epsilon"), static_cast<unsigned>(p.at("N")))}};
          }}},
        {"threshold_eps_ns", {std::vector<std::string>{}, [](const Params &) { return Quantities{{"value", threshold_eps_ns()}}; }}},
        {"threshold_eps_distance", {std::vector<std::string>{}, [](const Params &) { return Quantities{{"value", threshold_eps_distance()}}; }}},
        {"lhs_accept_bound",
         {{"epsilon", "M"}, [](const Params &p) {
              return Quantities{{"value", lhs_accept_bound(p.at("epsilon"), static_cast<std::size_t>(p.at("M")))}};
          }}},
        {"ansatz_gap", {{"N"}, [](const Params &p) { return Quantities{{"value", ansatz_gap(static_cast<unsigned>(p.at("N")))}}; }}},
        {"hardy_prob_closed_form",
         {{"N", "x"}, [](const Params &p) {
              return Quantities{{"value", hardy_prob_closed_form(static_cast<unsigned>(p.at("N")), p.at("x"))}};
          }}},
        {"hardy_optimum",
         {{"N"}, [](const Params &p) {
              const auto h = optimize_x(static_cast<unsigned>(p.at("N")));
              return Quantities{{"x_star", h.x_star}, {"P_H", h.p_h_star}};
          }}},
        {"min_setting_prob",
         {{"epsilon", "N"}, [](const Params &p) {
              return Quantities{{"value", min_setting_prob(p.at("epsilon"), static_cast<unsigned>(p.at("N")))}};
          }}},
    };
    return f;
}

int bounds_eval(const Options &o, std::ostream &out) {
    const json cfg = load_config(o);
    only_keys(cfg, {"name", "params"}, "bounds eval");
    std::string name = o.name.empty() ? cfg.value("name", std::string()) : o.name;
    if (name.empty()) throw ValidationError("bounds eval: --name is required");
    const auto it = formulas().find(name);
    if (it == formulas().end()) {
        std::string known;
        for (const auto &[k, v] : formulas()) known += (known.empty() ? "" : ", ") + k;
        throw ValidationError("bounds eval: unknown formula '" + name + "' (known: " + known + ")");
    }
    Params p;
    if (cfg.contains("params")) {
        for (const auto &[k, v] : cfg["params"].items()) p[k] = v.get<double>();
    }
    for (const auto &kv : o.params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ValidationError("bounds eval: --param expects key=value, got '" + kv + "'");
        std::size_t used = 0;
        const std::string val = kv.substr(eq + 1);
        double d;
        try {
            d = std::stod(val, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used == 0 || used != val.size()) throw ValidationError("bounds eval: '" + val + "' is not a number");
        p[kv.substr(0, eq)] = d;
    }
    for (const auto &k : it->second.params)
        if (!p.count(k)) throw ValidationError("bounds eval: " + name + " needs parameter '" + k + "'");
    for (const auto &[k, v] : p)
        if (std::find(it->second.params.begin(), it->second.params.end(), k) == it->second.params.end())
            throw ValidationError("bounds eval: " + name + " does not take parameter '" + k + "'");
    Table t{{"name", "quantity", "value"}, {}};
    for (const auto &[q, v] : it->second.eval(p)) t.add({name, q, v});
    json record = cfg;
    record["name"] = name;
    record["params"] = p;
    emit(t, {o.seed.value_or(0), config_hash("bounds eval", record, o)}, o, out);
    return kOk;
}

int report(const Options &o, std::ostream &out) {
    if (o.inputs.empty()) throw ValidationError("report: at least one --in CSV is required");
    if (o.x_col.empty() || o.y_cols.empty()) throw ValidationError("report: --x and --y are required");
    std::vector<Series> series;
    Table merged{{"source", "series", "x", "y"}, {}};
    auto parse = [](const std::string &s) {
        std::size_t used = 0;
        const double nan = std::numeric_limits<double>::quiet_NaN();
        double v = nan;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception &) {
            return nan;
        }
        return used == s.size() ? v : nan;
    };
    std::uint64_t h = fnv1a("report");
    for (const auto &path : o.inputs) {
        std::ifstream f(path);
        if (!f) throw ValidationError("cannot read '" + path + "'");
        std::stringstream buf;
        buf << f.rdbuf();
        h ^= fnv1a(buf.str()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        const CsvData d = read_csv(buf);
        const std::size_t xi = d.column(o.x_col);
        for (const auto &yc : o.y_cols) {
            const std::size_t yi = d.column(yc);
            Series s{o.inputs.size() > 1 ? path + ":" + yc : yc, {}, {}};
            for (const auto &r : d.rows) {
                s.xs.push_back(parse(r[xi]));
                s.ys.push_back(parse(r[yi]));
                merged.add({path, yc, s.xs.back(), s.ys.back()});
            }
            series.push_back(std::move(s));
        }
    }
    ChartOptions opt;
    opt.title = o.title;
    opt.x_label = o.x_col;
    opt.y_label = o.y_cols.size() == 1 ? o.y_cols[0] : "value";
    opt.log_x = o.log_x;
    opt.log_y = o.log_y;
    const std::string svg = render_line_chart(series, opt);
    {
        Sink sink(o, out);
        sink.stream() << svg;
    }
    if (!o.merged.empty()) {
        std::ofstream m(o.merged, std::ios::binary);
        if (!m) throw ValidationError("cannot write '" + o.merged + "'");
        write_csv(m, merged, {o.seed.value_or(0), h});
    }
    return kOk;
}

}  // namespace

int dispatch(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Randomness amplification from a weak (Santha-Vazirani) source.", "weakrand"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--config", o.config, "JSON configuration file");
    app.add_option("--seed", o.seed, "Master seed (overrides the config)");
    app.add_option("--out", o.out, "Output path (default: standard output)");
    app.add_option("--trials", o.trials, "Monte Carlo trials");
    app.add_option("--format", o.format, "Tabular output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--n-max", o.n_max, "Largest ladder length for sweeps");
    app.add_option("--transcripts", o.transcripts, "Write per-run transcripts as JSON lines to this path");

    auto *hardy = app.add_subcommand("hardy-scan", "Optimal Hardy probability for N = 1..n-max");
    auto *lp = app.add_subcommand("lp-bound", "No-signaling LP bound on P(00|NN) given I0 <= kappa");
    auto *mdl = app.add_subcommand("mdl-check", "Classical versus quantum MDL value over SV-band inputs");
    auto *thr = app.add_subcommand("threshold-scan", "Exponent signs over an epsilon sweep and both roots");
    auto *p1 = app.add_subcommand("protocol1", "Device-independent protocol with the Hardy ladder");
    p1->require_subcommand(1);
    p1->fallthrough();
    auto *p1run = p1->add_subcommand("run", "Monte Carlo executions");
    p1run->fallthrough();
    auto *p2 = app.add_subcommand("protocol2", "One-sided device-independent protocol with a trusted qubit");
    p2->require_subcommand(1);
    p2->fallthrough();
    auto *p2run = p2->add_subcommand("run", "Monte Carlo executions");
    p2run->fallthrough();
    auto *as = app.add_subcommand("assemblage", "Assemblage utilities");
    as->require_subcommand(1);
    as->fallthrough();
    auto *verify = as->add_subcommand("verify", "Validity, steering value and inflexibility of a JSON assemblage");
    verify->fallthrough();
    verify->add_option("--in", o.in, "Assemblage JSON")->required();
    auto *bounds = app.add_subcommand("bounds", "Closed-form bounds");
    bounds->require_subcommand(1);
    bounds->fallthrough();
    auto *eval = bounds->add_subcommand("eval", "Evaluate one formula");
    eval->fallthrough();
    eval->add_option("--name", o.name, "Formula name");
    eval->add_option("--param", o.params, "key=value (repeatable)");
    auto *rep = app.add_subcommand("report", "Merge CSV files and draw an SVG line chart");
    rep->fallthrough();
    rep->add_option("--in", o.inputs, "Input CSV (repeatable)")->required();
    rep->add_option("--x", o.x_col, "Column for the horizontal axis")->required();
    rep->add_option("--y", o.y_cols, "Column(s) to plot")->required();
    rep->add_option("--title", o.title, "Chart title");
    rep->add_option("--merged", o.merged, "Also write the merged long-format CSV here");
    rep->add_flag("--log-x", o.log_x, "Logarithmic horizontal axis");
    rep->add_flag("--log-y", o.log_y, "Logarithmic vertical axis");

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        err << "error: " << e.what() << "\n\n" << app.help();
        return kConfigError;
    }

    return guarded(
        [&]() -> int {
            if (*hardy) return hardy_scan(o, out);
            if (*lp) return lp_bound(o, out);
            if (*mdl) return mdl_check(o, out);
            if (*thr) return threshold_scan(o, out);
            if (*p1run) return protocol1_run(o, out);
            if (*p2run) return protocol2_run(o, out);
            if (*verify) return assemblage_verify(o, out);
            if (*eval) return bounds_eval(o, out);
            if (*rep) return report(o, out);
            err << app.help();
            return kConfigError;
        },
        err);
}

int guarded(const std::function<int()> &body, std::ostream &err) {
    try {
        return body();
    } catch (const NumericalError &e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericalError;
    } catch (const ValidationError &e) {
        err << "configuration error: " << e.what() << "\n";
        return kConfigError;
    } catch (const nlohmann::json::exception &e) {
        err << "configuration error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kNumericalError;
    }
}

}  // namespace weakrand::cli

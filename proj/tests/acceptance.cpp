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

// Acceptance suite: one PASS/FAIL line per criterion. Tolerances, trial
// counts and runtime budgets are fixed here. Exit status is the number of
// failed criteria.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.h"
#include "weakrand/assemblage.h"
#include "weakrand/hardy_quantum.h"
#include "weakrand/ns_box.h"
#include "weakrand/protocol_one.h"
#include "weakrand/protocol_two.h"
#include "weakrand/security_bounds.h"

using namespace weakrand;

namespace {

struct Verdict {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string &what) {
        if (!cond) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string &what) { notes += (notes.empty() ? "" : "; ") + what; }
    std::string notes;
};

std::string fmt(const char *f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double sigma(double p, std::size_t n) { return n == 0 ? 0.0 : std::sqrt(p * (1 - p) / static_cast<double>(n)); }

int failures = 0;

void criterion(int id, const char *name, double budget_s, const std::function<void(Verdict &)> &body) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(v);
    } catch (const std::exception &e) {
        v.require(false, std::string("threw: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.require(secs < budget_s, fmt("runtime %.2f s over budget", secs));
    if (!v.ok) ++failures;
    std::printf("%s [%d] %s (%.2f s)", v.ok ? "PASS" : "FAIL", id, name, secs);
    if (!v.detail.empty()) std::printf(" -- %s", v.detail.c_str());
    if (!v.notes.empty()) std::printf(" | %s", v.notes.c_str());
    std::printf("\n");
    std::fflush(stdout);
}

ProtocolOneConfig p1_config(unsigned n, std::size_t m, DeviceModel dev, double eps, std::uint64_t seed) {
    ProtocolOneConfig c;
    c.params = SecurityParams::defaults(eps, n, std::log(double(m)) / std::log(n + 1.0));
    c.runs = m;
    c.device = std::move(dev);
    c.seed = seed;
    return c;
}

ProtocolTwoConfig p2_config(std::size_t m, DeviceModelTwo dev, double eps, std::uint64_t seed) {
    ProtocolTwoConfig c;
    c.runs = m;
    c.epsilon = eps;
    c.device = std::move(dev);
    c.seed = seed;
    return c;
}

// Vertices of {p : lo <= p_i <= hi, sum p = 1}: all coordinates but one at an edge.
std::vector<InputDist> band_vertices(std::size_t k, double lo, double hi) {
    std::vector<InputDist> out;
    for (std::size_t free = 0; free < k; ++free)
        for (std::uint32_t mask = 0; mask < (1u << (k - 1)); ++mask) {
            InputDist p(k);
            double rest = 1.0;
            for (std::size_t i = 0, bit = 0; i < k; ++i) {
                if (i == free) continue;
                p[i] = (mask >> bit++) & 1 ? hi : lo;
                rest -= p[i];
            }
            if (rest < lo - 1e-15 || rest > hi + 1e-15) continue;
            p[free] = std::clamp(rest, lo, hi);
            out.push_back(p);
        }
    return out;
}

}  // namespace

int main() {
    criterion(1, "Hardy optimum at N=1", 1.0, [](Verdict &v) {
        const auto h = optimize_x(1);
        const double want_p = (5 * std::sqrt(5.0) - 11) / 2, want_i = (12 - 5 * std::sqrt(5.0)) / 2;
        const double got_i = bell_I(strategy_to_box(build_strategy(1, h.x_star)));
        v.require(std::abs(h.p_h_star - want_p) <= 1e-9, fmt("P_H = %.12f", h.p_h_star));
        v.require(std::abs(got_i - want_i) <= 1e-8, fmt("I = %.12f", got_i));
        v.note(fmt("P_H=%.12f", h.p_h_star) + fmt(" I=%.12f", got_i));
    });

    criterion(2, "local deterministic minimum of I is 1/2 for N=1..6", 10.0, [](Verdict &v) {
        for (unsigned n = 1; n <= 6; ++n) {
            double lo = INFINITY;
            for (const auto &box : enumerate_local_deterministic(n)) lo = std::min(lo, bell_I(box));
            v.require(std::abs(lo - 0.5) <= 1e-12, "N=" + std::to_string(n) + fmt(" min %.15f", lo));
        }
    });

    criterion(3, "no-signaling LP bound (1+kappa)/2", 60.0, [](Verdict &v) {
        for (unsigned n = 1; n <= 4; ++n) {
            for (double k : {0.0, 0.05, 0.1, 0.3}) {
                const double val = lp_max_hardy_given_I0(n, k).value;
                v.require(val <= (1 + k) / 2 + 1e-8, "N=" + std::to_string(n) + fmt(" kappa=%g", k) + fmt(" value %.12f", val));
                if (k == 0.0) v.require(std::abs(val - 0.5) <= 1e-8, "N=" + std::to_string(n) + fmt(" kappa=0 value %.12f", val));
            }
            const CondBox pr = pr_ladder_box(n);
            v.require(is_no_signaling(pr).ok, "PR ladder box signals at N=" + std::to_string(n));
            v.require(std::abs(hardy_prob(pr) - 0.5) <= 1e-12 && std::abs(bell_I0(pr)) <= 1e-12,
                      "PR ladder box is not a kappa=0 witness at N=" + std::to_string(n));
        }
    });

    criterion(4, "ansatz scaling 1/2 - P_H*(N) <= 0.384 N^-0.99 for N=8..1024", 10.0, [](Verdict &v) {
        std::size_t bad = 0;
        double worst_ratio = 0;
        for (unsigned n = 8; n <= 1024; n += 8) {
            const double gap = 0.5 - optimize_x(n).p_h_star, bound = 0.384 * std::pow(n, -0.99);
            if (gap > bound) ++bad;
            worst_ratio = std::max(worst_ratio, gap / bound);
        }
        v.require(bad == 0, std::to_string(bad) + " of 128 ladder lengths exceed the bound" +
                                fmt(", worst gap/bound %.3f", worst_ratio));
        v.note(fmt("N=8 gap %.6f", 0.5 - optimize_x(8).p_h_star) + fmt(" vs %.6f", 0.384 * std::pow(8, -0.99)));
    });

    criterion(5, "security thresholds", 1.0, [](Verdict &v) {
        const double d = threshold_eps_distance(), ns = threshold_eps_ns();
        v.require(std::abs(d - 0.08499) <= 0.0005, fmt("distance root %.7f", d));
        v.require(ns >= 0.0895 && ns <= 0.0910, fmt("no-signaling root %.7f", ns));
        v.require(e2_at_optimal_r(ns - 0.001) < 0 && e2_at_optimal_r(ns + 0.001) > 0, "e2 does not change sign at the root");
        v.require(distance_exponent(d - 0.001) < 0 && distance_exponent(d + 0.001) > 0,
                  "distance exponent does not change sign at the root");
        v.note(fmt("eps_distance=%.7f", d) + fmt(" eps_ns=%.7f", ns));
    });

    criterion(6, "MDL dichotomy at N=1", 5.0, [](Verdict &v) {
        const CondBox q = strategy_to_box(build_strategy(1, optimize_x(1).x_star));
        for (double e : {0.0, 0.1, 0.2, 0.3, 0.4, 0.49}) {
            const auto [lo, hi] = sv_band(e, 1);
            const auto verts = band_vertices(4, lo, hi);
            double cmax = -INFINITY;
            std::size_t boxes = 0;
            for (const auto &box : enumerate_local_deterministic(1)) {
                ++boxes;
                for (const auto &p : verts) cmax = std::max(cmax, mdl_value(box, p, e));
                cmax = std::max(cmax, mdl_value(box, mdl_worst_case_inputs(box, e), e));
            }
            v.require(boxes == 16, "expected 16 deterministic boxes");
            v.require(cmax <= 1e-15, fmt("eps=%g", e) + fmt(" classical max %.3e", cmax));
            const double qv = mdl_value(q, uniform_inputs(1), e);
            v.require(qv > 0, fmt("eps=%g", e) + fmt(" quantum value %.3e", qv));
        }
    });

    criterion(7, "Protocol I at N=3, M=1024, eps=0, 200 trials", 300.0, [](Verdict &v) {
        const unsigned n = 3;
        const std::size_t m = 1024, trials = 200;
        const auto honest = monte_carlo_protocol_one(p1_config(n, m, honest_quantum_device(n), 0.0, 701), trials);
        v.require(honest.accept.rate >= 0.95, fmt("honest accept rate %.3f", honest.accept.rate));
        v.require(honest.max_z_h_nonzero == 0, std::to_string(honest.max_z_h_nonzero) + " honest trials with Z_H > 0");
        std::size_t stage_test2 = honest.stage_counts[static_cast<std::size_t>(AbortStage::kTest2)];
        v.note(fmt("honest accept %.3f", honest.accept.rate) + ", test-2 aborts " + std::to_string(stage_test2));

        double det_worst = 0;
        for (std::uint32_t f = 0; f < 16; ++f)
            for (std::uint32_t g = 0; g < 16; ++g) {
                const auto s = monte_carlo_protocol_one(
                    p1_config(n, m, DeviceModel{device::LocalDeterministic{f, g}}, 0.0, 7000 + 16 * f + g), trials);
                det_worst = std::max(det_worst, s.accept.rate);
            }
        v.require(det_worst <= 0.01, fmt("deterministic accept rate %.3f", det_worst));
        v.note(fmt("worst deterministic accept %.3f", det_worst));

        const auto pr = monte_carlo_protocol_one(p1_config(n, m, DeviceModel{device::FixedBox{pr_ladder_box(n)}}, 0.0, 703), trials);
        const double p0 = pr.output_zero.rate, sd = sigma(0.5, pr.accept.successes);
        v.require(pr.accept.successes > 0 && std::abs(p0 - 0.5) <= 3 * sd, fmt("PR output-zero frequency %.3f", p0));
        v.note(fmt("PR P(0|accept) %.3f", p0));

        auto small = p1_config(1, 8, honest_quantum_device(1), 0.0, 1);
        const double bound = distance_bound_ns(small.params);
        const std::vector<std::pair<const char *, std::vector<AdversaryBranch>>> families = {
            {"honest", {{1.0, 0, honest_quantum_device(1)}}},
            {"pr", {{1.0, 0, DeviceModel{device::FixedBox{pr_ladder_box(1)}}}}},
            {"deterministic", {{0.5, 0, DeviceModel{device::LocalDeterministic{0, 0}}},
                               {0.5, 1, DeviceModel{device::LocalDeterministic{0, 0}}}}}};
        for (const auto &[label, fam] : families) {
            const auto est = distance_to_uniform_estimate(small, fam, 0);
            v.require(est.exact && est.joint_distance + est.error <= bound,
                      std::string(label) + fmt(" exact distance %.6f", est.joint_distance));
        }
    });

    criterion(8, "steering numbers for the GHZ assemblage", 1.0, [](Verdict &v) {
        const Assemblage g = ghz_assemblage();
        const double f = steering_F(g, g);
        v.require(std::abs(f - 4.0) <= 1e-12, fmt("F = %.15f", f));
        const auto b = lhs_bound(g);
        v.require(std::abs(b.value - (4 + std::sqrt(10.0)) / 2) <= 1e-10, fmt("LHS bound %.12f", b.value));
        v.require(b.matrix.max_abs_diff(HermOp(2, {3.5, 0.5, 0.5, 0.5})) <= 1e-12, "maximizer is not 3|0><0| + |+><+|");
        v.require(check_inflexible(to_rank_one(g)), "GHZ assemblage reported flexible");
    });

    criterion(9, "sequential steering at n=2", 60.0, [](Verdict &v) {
        const Assemblage g = ghz_assemblage();
        const std::array<Assemblage, 2> refs{g, g};
        const auto prod = sequential_product(refs);
        const double f = steering_F_n(refs, prod);
        v.require(std::abs(f - 16.0) <= 1e-9, fmt("F2(product) = %.12f", f));
        Rng rng(9001);
        std::size_t over = 0, invalid = 0;
        double best = 0;
        for (int t = 0; t < 1000; ++t) {
            SequentialAssemblage other;
            switch (t % 3) {
                case 0: other = random_sequential_lhs(2, rng); break;
                case 1: other = sequential_product(std::array<Assemblage, 2>{g, random_lhs_assemblage(rng)}); break;
                default: other = sequential_product(std::array<Assemblage, 2>{random_lhs_assemblage(rng), g}); break;
            }
            const auto s = mix(prod, other, 0.999 * rng.uniform());
            if (!is_sequential_ns(s) || s.max_abs_diff(prod) <= 1e-9) ++invalid;
            const double fs = steering_F_n(refs, s);
            best = std::max(best, fs);
            if (fs >= 16.0 - 1e-6) ++over;
        }
        v.require(invalid == 0, std::to_string(invalid) + " samples were not valid non-product mixtures");
        v.require(over == 0, std::to_string(over) + " mixtures reached 16 - 1e-6");
        v.note(fmt("best mixture %.6f", best));
        double worst = 0;
        for (unsigned a = 0; a < 2; ++a)
            for (unsigned b = 0; b < 2; ++b)
                for (unsigned x = 0; x < 2; ++x)
                    for (unsigned y = 0; y < 2; ++y) {
                        const auto sub = conditional_subassemblage(prod, a, b, x, y);
                        if (!sub.zero_weight) worst = std::max(worst, sub.normalized().max_abs_diff(g));
                    }
        v.require(worst <= 1e-12, fmt("conditional sub-assemblage differs by %.3e", worst));
    });

    criterion(10, "Protocol II at M=256, 10^4 trials", 300.0, [](Verdict &v) {
        const std::size_t trials = 10000;
        std::uint64_t seed = 1000;
        for (double e : {0.0, 0.2, 0.4, 0.49}) {
            auto c = p2_config(256, DeviceModelTwo{device2::HonestGHZ{}}, e, ++seed);
            if (e > 0) c.source = strategy::MaxBiasToward{{0}, true};
            const auto s = monte_carlo_protocol_two(c, trials);
            v.require(s.accept.successes == trials, fmt("eps=%g", e) + fmt(" honest accept %.4f", s.accept.rate));
            v.require(s.max_z_s <= 1e-9, fmt("eps=%g", e) + fmt(" max Z_S %.3e", s.max_z_s));
            v.require(std::abs(s.bias) <= 3 * sigma(0.5, s.accept.successes), fmt("eps=%g", e) + fmt(" bias %.4f", s.bias));
        }
        double prev = 1.0, prev_bound = 1.0;
        std::string rates;
        for (std::size_t m : {64u, 256u, 1024u}) {
            const auto s = monte_carlo_protocol_two(p2_config(m, optimal_lhs_cheat(), 0.0, 50 + m), trials);
            const double bound = lhs_accept_bound(0.0, m);
            v.require(s.accept.rate <= prev, "LHS accept rate rose at M=" + std::to_string(m));
            v.require(bound < prev_bound, "LHS accept bound not decreasing at M=" + std::to_string(m));
            v.require(s.accept.rate <= bound + 3 * sigma(bound, trials), "LHS accept above bound at M=" + std::to_string(m));
            rates += (rates.empty() ? "" : ",") + fmt("%.4f", s.accept.rate);
            prev = s.accept.rate;
            prev_bound = bound;
        }
        v.note("optimal LHS accept rates " + rates);
    });

    criterion(11, "martingale concentration tails", 120.0, [](Verdict &v) {
        const std::size_t trials = 100000;
        const std::vector<double> betas = {60, 90, 120};
        const auto freq = oracle::walk_max_tail(1000, betas, trials, 11);
        for (std::size_t k = 0; k < betas.size(); ++k) {
            const double b = freedman_tail(betas[k], 1000, 1);
            v.require(freq[k] <= b, fmt("Freedman beta=%g", betas[k]) + fmt(" freq %.5f", freq[k]) + fmt(" > %.5f", b));
        }
        const std::array<std::pair<std::size_t, double>, 3> pts = {{{200, 0.1}, {400, 0.08}, {1000, 0.05}}};
        std::uint64_t seed = 20;
        for (const auto &[n, d] : pts) {
            const double freq_a = oracle::adaptive_deviation_tail(n, d, trials, ++seed);
            const double b = azuma_tail(n, d);
            v.require(freq_a <= b, "Azuma n=" + std::to_string(n) + fmt(" freq %.5f", freq_a) + fmt(" > %.5f", b));
        }
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}

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

#include "weakrand/hardy_quantum.h"

#include <cmath>
#include <sstream>

#include "weakrand/errors.h"
#include "weakrand/numerics.h"

namespace weakrand {

namespace {

// Stable for x in [0, 1]: x^(2N) underflows gracefully.
double closed_form(unsigned n, double x) {
    const double x2n = std::pow(x, 2.0 * n);
    const double q = (1.0 - x2n) / (1.0 + x2n * x);
    return x * x / (1.0 + x * x) * q * q;
}

HermOp outcome_projector(double theta, unsigned outcome) {
    const Complex v0[2] = {std::cos(theta), std::sin(theta)};
    const Complex v1[2] = {-std::sin(theta), std::cos(theta)};
    return HermOp::projector(outcome == 0 ? std::span<const Complex>(v0) : std::span<const Complex>(v1));
}

}  // namespace

double hardy_prob_closed_form(unsigned n, double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("state ratio x must lie in [0, 1]");
    return closed_form(n, x);
}

HardyOptimum optimize_x(unsigned n) {
    if (n < 1) throw ValidationError("ladder length N must be >= 1");
    constexpr int kGrid = 1 << 14;
    int best = 0;
    double best_v = -1.0;
    for (int i = 0; i <= kGrid; ++i) {
        const double v = closed_form(n, static_cast<double>(i) / kGrid);
        if (v > best_v) best_v = v, best = i;
    }
    double lo = std::max(0, best - 1) / static_cast<double>(kGrid);
    double hi = std::min(kGrid, best + 1) / static_cast<double>(kGrid);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
    double fc = closed_form(n, c), fd = closed_form(n, d);
    while (hi - lo > 1e-12) {
        if (fc > fd) {
            hi = d, d = c, fd = fc;
            c = hi - g * (hi - lo), fc = closed_form(n, c);
        } else {
            lo = c, c = d, fc = fd;
            d = lo + g * (hi - lo), fd = closed_form(n, d);
        }
    }
    HardyOptimum r;
    r.x_star = 0.5 * (lo + hi);
    r.p_h_star = closed_form(n, r.x_star);
    if (r.p_h_star < best_v) {
        r.x_star = static_cast<double>(best) / kGrid;
        r.p_h_star = best_v;
    }
    return r;
}

double ansatz_gap(unsigned n) { return 0.384 * std::pow(static_cast<double>(n), -0.99); }

double ansatz_x(unsigned n) { return std::exp(-0.768 * std::pow(static_cast<double>(n), -0.99)); }

void LadderStrategy::validate() const {
    if (n_ladder < 1) throw ValidationError("ladder length N must be >= 1");
    if (!(x_ratio > 0.0 && x_ratio < 1.0)) throw ValidationError("state ratio x must lie in (0, 1)");
    if (std::abs(alpha * alpha + beta * beta - 1.0) > 1e-12) throw ValidationError("state not normalized");
    if (std::abs(alpha / beta - x_ratio) > 1e-12) throw ValidationError("alpha/beta does not match x_ratio");
    if (angles_a.size() != n_ladder + 1 || angles_b.size() != n_ladder + 1)
        throw ValidationError("angle lists must have N+1 entries");
    const double r = alpha / beta;
    if (std::abs(std::tan(angles_a[0]) * std::tan(angles_b[0]) - r) > 1e-9)
        throw ValidationError("tan(a_0) tan(b_0) != alpha/beta");
    for (unsigned k = 1; k <= n_ladder; ++k) {
        if (std::abs(std::tan(angles_a[k]) / std::tan(angles_b[k - 1]) + r) > 1e-9)
            throw ValidationError("tan(a_k) cot(b_{k-1}) != -alpha/beta at k=" + std::to_string(k));
        if (std::abs(std::tan(angles_b[k]) / std::tan(angles_a[k - 1]) + r) > 1e-9)
            throw ValidationError("cot(a_{k-1}) tan(b_k) != -alpha/beta at k=" + std::to_string(k));
    }
}

LadderStrategy build_strategy(unsigned n, double x, AngleBranch branch) {
    if (n < 1) throw ValidationError("ladder length N must be >= 1");
    if (!(x > 0.0 && x < 1.0)) throw ValidationError("state ratio x must lie in (0, 1)");
    LadderStrategy s;
    s.n_ladder = n;
    s.x_ratio = x;
    s.alpha = x / std::sqrt(1.0 + x * x);
    s.beta = 1.0 / std::sqrt(1.0 + x * x);
    const double sign = branch == AngleBranch::kPrincipal ? 1.0 : -1.0;
    double ta = std::sqrt(x), tb = std::sqrt(x);
    s.angles_a.push_back(sign * std::atan(ta));
    s.angles_b.push_back(sign * std::atan(tb));
    for (unsigned k = 1; k <= n; ++k) {
        const double na = -x * tb, nb = -x * ta;
        ta = na, tb = nb;
        s.angles_a.push_back(sign * std::atan(ta));
        s.angles_b.push_back(sign * std::atan(tb));
    }
    s.validate();
    return s;
}

CondBox strategy_to_box(const LadderStrategy &s) {
    s.validate();
    const unsigned n = s.n_ladder;
    const Complex psi[4] = {s.alpha, 0.0, 0.0, -s.beta};
    std::vector<HermOp> pa, pb;
    for (unsigned k = 0; k <= n; ++k)
        for (unsigned o = 0; o < 2; ++o) {
            pa.push_back(outcome_projector(s.angles_a[k], o));
            pb.push_back(outcome_projector(s.angles_b[k], o));
        }
    CondBox box(n);
    for (unsigned x = 0; x <= n; ++x)
        for (unsigned y = 0; y <= n; ++y)
            for (unsigned a = 0; a < 2; ++a)
                for (unsigned b = 0; b < 2; ++b) {
                    const HermOp op = tensor(pa[2 * x + a], pb[2 * y + b]);
                    Complex e{};
                    for (int i = 0; i < 4; ++i)
                        for (int j = 0; j < 4; ++j) e += std::conj(psi[i]) * op(i, j) * psi[j];
                    box(a, b, x, y) = e.real();
                }

    const auto ns = is_no_signaling(box, 1e-9);
    if (!ns.ok) throw NumericalError("compiled quantum box signals: " + ns.worst_location);
    if (box(0, 0, 0, 0) > 1e-9) throw NumericalError("Hardy zero P(0,0|0,0) violated");
    for (unsigned k = 1; k <= n; ++k) {
        if (box(0, 1, k, k - 1) > 1e-9)
            throw NumericalError("Hardy zero P(0,1|" + std::to_string(k) + "," + std::to_string(k - 1) + ") violated");
        if (box(1, 0, k - 1, k) > 1e-9)
            throw NumericalError("Hardy zero P(1,0|" + std::to_string(k - 1) + "," + std::to_string(k) + ") violated");
    }
    if (std::abs(hardy_prob(box) - closed_form(n, s.x_ratio)) > 1e-9)
        throw NumericalError("compiled Hardy probability disagrees with the closed form");
    return box;
}

nlohmann::json to_json(const LadderStrategy &s) {
    return {{"N", s.n_ladder}, {"x_ratio", s.x_ratio}, {"angles_a", s.angles_a}, {"angles_b", s.angles_b}};
}

LadderStrategy strategy_from_json_ladder(const nlohmann::json &j) {
    try {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const auto &k = it.key();
            if (k != "N" && k != "x_ratio" && k != "angles_a" && k != "angles_b")
                throw ValidationError("ladder strategy: unknown key '" + k + "'");
        }
        LadderStrategy s;
        s.n_ladder = j.at("N").get<unsigned>();
        s.x_ratio = j.at("x_ratio").get<double>();
        s.alpha = s.x_ratio / std::sqrt(1.0 + s.x_ratio * s.x_ratio);
        s.beta = 1.0 / std::sqrt(1.0 + s.x_ratio * s.x_ratio);
        if (j.contains("angles_a") || j.contains("angles_b")) {
            s.angles_a = j.at("angles_a").get<std::vector<double>>();
            s.angles_b = j.at("angles_b").get<std::vector<double>>();
        } else {
            s = build_strategy(s.n_ladder, s.x_ratio);
        }
        s.validate();
        return s;
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("ladder strategy: ") + e.what());
    }
}

}  // namespace weakrand

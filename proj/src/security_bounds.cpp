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

#include "weakrand/security_bounds.h"

#include <cmath>
#include <string>

#include "weakrand/errors.h"
#include "weakrand/sv_source.h"

namespace weakrand {

namespace {

void check_eps(double eps) { SvParams{eps}.validate(); }

double lg(double v) { return std::log2(v); }

}  // namespace

SecurityParams SecurityParams::defaults(double epsilon, unsigned n, double r) {
    SecurityParams p;
    p.epsilon = epsilon;
    p.n_ladder = n;
    p.r_exponent = r;
    p.t = 0.99;
    const double s = n + 1.0;
    p.delta2 = std::pow(s, -0.99);
    p.delta_az = p.delta2;
    p.delta3 = std::pow(s, -0.01);
    p.kappa = std::pow(s, -p.t);
    p.validate();
    return p;
}

double SecurityParams::runs() const { return std::pow(n_ladder + 1.0, r_exponent); }

double SecurityParams::delta1_for(std::size_t s_h_size) const {
    if (delta1) return *delta1;
    if (s_h_size == 0) return 0.0;
    return std::pow(static_cast<double>(s_h_size), -0.99);
}

void SecurityParams::validate() const {
    check_eps(epsilon);
    if (n_ladder < 1) throw ValidationError("ladder length N must be >= 1");
    if (!std::isfinite(r_exponent) || r_exponent <= 0) throw ValidationError("r exponent must be positive");
    if (!(t > 0 && t <= 1)) throw ValidationError("t must lie in (0, 1]");
    auto nonneg = [](double v, const char *name) {
        if (!(v >= 0) || !std::isfinite(v)) throw ValidationError(std::string(name) + " must be finite and >= 0");
    };
    if (delta1) nonneg(*delta1, "delta1");
    nonneg(delta2, "delta2");
    nonneg(delta3, "delta3");
    nonneg(delta_az, "delta_az");
    nonneg(kappa, "kappa");
}

double freedman_tail(double beta, double sigma2, double R) {
    if (!(beta >= 0) || !(sigma2 > 0) || !(R > 0)) throw ValidationError("freedman_tail: need beta >= 0, sigma2 > 0, R > 0");
    return std::exp(-(beta * beta / 2.0) / (sigma2 + R * beta / 3.0));
}

double azuma_tail(std::size_t n, double delta) {
    if (n < 1 || !(delta > 0)) throw ValidationError("azuma_tail: need n >= 1 and delta > 0");
    return 2.0 * std::exp(-static_cast<double>(n) * delta * delta / 2.0);
}

double t_prime(double eps, double r) {
    check_eps(eps);
    return 0.01 * r + 1.98 + 2.0 * lg(0.5 + eps) - 2.0 * lg(0.5 - eps);
}

BoundWithProb bad_runs_bound_test1(const SecurityParams &p) {
    p.validate();
    const double s = p.n_ladder + 1.0;
    return {4.0 * std::pow(3.0, 0.01) * std::pow(s, t_prime(p.epsilon, p.r_exponent)),
            1.0 - std::exp(-(3.0 / 14.0) * std::pow(s, 0.01 * (p.r_exponent - 1.0)))};
}

BoundWithProb total_bad_bound(const SecurityParams &p) {
    p.validate();
    const double s = p.n_ladder + 1.0, r = p.r_exponent;
    const double tp = t_prime(p.epsilon, r);
    return {3.75 * std::pow(s, r - 2.98) + 9.0 * std::pow(s, tp + 0.01),
            1.0 - 2.0 * std::exp(-0.25 * std::pow(s, r - 3.98)) - std::exp(-(3.0 / 14.0) * std::pow(s, 0.01 * (r - 1.0)))};
}

SelectionBound prob_bad_run_selected(const SecurityParams &p) {
    p.validate();
    const double L = lg(0.5 + p.epsilon), r = p.r_exponent, s = p.n_ladder + 1.0;
    SelectionBound b;
    b.e1 = r * (1.0 + L) - 2.0 * L - 2.98;
    b.e2 = (r - 2.0) * L + t_prime(p.epsilon, r) + 0.01;
    b.c = std::pow(1.5, 6.0 + L);
    b.bound = b.c * (std::pow(s, b.e1) + std::pow(s, b.e2));
    return b;
}

double r_exponent(double eps) {
    check_eps(eps);
    if (eps <= 0) throw ValidationError("r_exponent diverges at epsilon = 0");
    const double L = lg(0.5 + eps);
    return (2.98 + 2.0 * L) / (1.0 + L) - 0.01;
}

double e2_at_optimal_r(double eps) {
    SecurityParams p = SecurityParams::defaults(eps, 1, r_exponent(eps));
    return prob_bad_run_selected(p).e2;
}

double distance_exponent(double eps) {
    check_eps(eps);
    return -0.99 + 2.0 * lg(0.5 + eps) - 2.0 * lg(0.5 - eps);
}

double distance_bound_ns(const SecurityParams &p) {
    p.validate();
    const double s = p.n_ladder + 1.0;
    return std::max(std::pow(s, -0.01), std::pow(s, distance_exponent(p.epsilon)));
}

double alpha_measure(double eps, unsigned n) {
    check_eps(eps);
    const double k = 2.0 * log2_exact(static_cast<std::uint64_t>(n) + 1);
    return std::pow((0.5 - eps) / (0.5 + eps), k);
}

double quantum_distance_bound(double eps, unsigned n, double i0, double delta) {
    if (!(i0 >= -1e-12) || !(delta >= 0)) throw ValidationError("quantum_distance_bound: need I0 >= 0 and delta >= 0");
    return std::max(delta, std::max(i0, 0.0) / alpha_measure(eps, n));
}

double threshold_eps_ns() {
    double lo = 0.001, hi = 0.25;
    double flo = e2_at_optimal_r(lo);
    if (flo >= 0 || e2_at_optimal_r(hi) <= 0) throw NumericalError("e2 does not change sign on (0.001, 0.25)");
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double fm = e2_at_optimal_r(mid);
        if ((fm < 0) == (flo < 0))
            lo = mid, flo = fm;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double threshold_eps_distance() {
    const double q = std::pow(2.0, 0.495);
    return 0.5 * (q - 1.0) / (q + 1.0);
}

}  // namespace weakrand

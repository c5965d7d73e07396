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

#include "weakrand/ns_box.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "weakrand/errors.h"
#include "weakrand/numerics.h"
#include "weakrand/sv_source.h"

namespace weakrand {

namespace {

std::string where(const char *kind, unsigned o, unsigned x, unsigned y) {
    std::ostringstream os;
    os << kind << " output=" << o << " x=" << x << " y=" << y;
    return os.str();
}

void check_n(unsigned n) {
    if (n < 1) throw ValidationError("ladder length N must be >= 1");
    if (n > 1023) throw ValidationError("ladder length N must be <= 1023");
}

}  // namespace

CondBox::CondBox(unsigned n_ladder) : n_(n_ladder) {
    check_n(n_ladder);
    probs_.assign(4 * static_cast<std::size_t>(n_ + 1) * (n_ + 1), 0.0);
}

CondBox::CondBox(unsigned n_ladder, std::vector<double> probs) : n_(n_ladder), probs_(std::move(probs)) {
    check_n(n_ladder);
    if (probs_.size() != 4 * static_cast<std::size_t>(n_ + 1) * (n_ + 1))
        throw ValidationError("box probability list has wrong length");
}

std::array<double, 4> CondBox::cell(unsigned x, unsigned y) const {
    return {(*this)(0, 0, x, y), (*this)(0, 1, x, y), (*this)(1, 0, x, y), (*this)(1, 1, x, y)};
}

void CondBox::validate(double tol) const {
    for (unsigned x = 0; x <= n_; ++x)
        for (unsigned y = 0; y <= n_; ++y) {
            double s = 0;
            for (double p : cell(x, y)) {
                if (!std::isfinite(p) || p < -1e-12)
                    throw ValidationError("box entry negative or non-finite at " + where("cell", 0, x, y));
                s += p;
            }
            if (std::abs(s - 1.0) > tol) throw ValidationError("box not normalized at " + where("cell", 0, x, y));
        }
    const auto rep = is_no_signaling(*this, tol);
    if (!rep.ok) throw ValidationError("box signals: " + rep.worst_location);
}

CondBox mix(const CondBox &p, const CondBox &q, double w) {
    if (p.n_ladder() != q.n_ladder()) throw ValidationError("mix: ladder lengths differ");
    std::vector<double> r(p.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = w * p.probs()[i] + (1 - w) * q.probs()[i];
    return CondBox(p.n_ladder(), std::move(r));
}

NsReport is_no_signaling(const CondBox &box, double tol) {
    NsReport rep;
    const unsigned s = box.settings();
    auto consider = [&](double r, std::string loc) {
        if (r > rep.worst_residual) {
            rep.worst_residual = r;
            rep.worst_location = std::move(loc);
        }
    };
    for (unsigned o = 0; o < 2; ++o) {
        for (unsigned x = 0; x < s; ++x) {
            const double ref = box(o, 0, x, 0) + box(o, 1, x, 0);
            for (unsigned y = 1; y < s; ++y)
                consider(std::abs(box(o, 0, x, y) + box(o, 1, x, y) - ref), where("alice marginal", o, x, y));
        }
        for (unsigned y = 0; y < s; ++y) {
            const double ref = box(0, o, 0, y) + box(1, o, 0, y);
            for (unsigned x = 1; x < s; ++x)
                consider(std::abs(box(0, o, x, y) + box(1, o, x, y) - ref), where("bob marginal", o, x, y));
        }
    }
    rep.ok = rep.worst_residual <= tol;
    return rep;
}

bool is_hardy_zero_cell(unsigned a, unsigned b, unsigned x, unsigned y, unsigned n) {
    if (a > 1 || b > 1 || x > n || y > n) throw ValidationError("Hardy cell label out of range");
    if (x == 0 && y == 0) return a == 0 && b == 0;
    if (y + 1 == x) return a == 0 && b == 1;
    if (x + 1 == y) return a == 1 && b == 0;
    return false;
}

double bell_I0(const CondBox &box) {
    const unsigned n = box.n_ladder();
    double s = box(0, 0, 0, 0);
    for (unsigned k = 1; k <= n; ++k) s += box(0, 1, k, k - 1) + box(1, 0, k - 1, k);
    return s;
}

double hardy_prob(const CondBox &box) {
    const unsigned n = box.n_ladder();
    return box(0, 0, n, n);
}

double bell_I(const CondBox &box) { return (0.5 - hardy_prob(box)) + bell_I0(box); }

CondBox deterministic_box(unsigned n, std::uint32_t f, std::uint32_t g) {
    CondBox box(n);
    for (unsigned x = 0; x <= n; ++x)
        for (unsigned y = 0; y <= n; ++y) box((f >> x) & 1u, (g >> y) & 1u, x, y) = 1.0;
    return box;
}

LocalDeterministicRange::LocalDeterministicRange(unsigned n) : n_(n) {
    check_n(n);
    if (n > kMaxN) throw ValidationError("deterministic enumeration limited to N <= 10");
}

CondBox LocalDeterministicRange::operator[](std::uint64_t i) const {
    if (i >= size()) throw ValidationError("deterministic box index out of range");
    return deterministic_box(n_, f_of(i), g_of(i));
}

LocalDeterministicRange enumerate_local_deterministic(unsigned n) { return LocalDeterministicRange(n); }

CondBox pr_ladder_box(unsigned n) {
    CondBox box(n);
    for (unsigned x = 0; x <= n; ++x)
        for (unsigned y = 0; y <= n; ++y) {
            if (x == 0 && y == 0) {
                box(0, 1, x, y) = 0.5;
                box(1, 0, x, y) = 0.5;
            } else {
                box(0, 0, x, y) = 0.5;
                box(1, 1, x, y) = 0.5;
            }
        }
    return box;
}

CondBox uniform_box(unsigned n) {
    CondBox box(n);
    std::vector<double> p(box.size(), 0.25);
    return CondBox(n, std::move(p));
}

HardyLpResult lp_max_hardy_given_I0(unsigned n, double kappa) {
    check_n(n);
    if (n > 8) throw ValidationError("Hardy LP limited to N <= 8");
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw ValidationError("kappa must be a finite value >= 0");
    const unsigned s = n + 1;
    const std::size_t nv = 4 * static_cast<std::size_t>(s) * s;
    auto idx = [&](unsigned a, unsigned b, unsigned x, unsigned y) { return CondBox::index(n, a, b, x, y); };

    LpProblem lp;
    lp.sense = Sense::kMaximize;
    lp.objective.assign(nv, 0.0);
    lp.objective[idx(0, 0, n, n)] = 1.0;

    for (unsigned x = 0; x < s; ++x)
        for (unsigned y = 0; y < s; ++y) {
            std::vector<double> row(nv, 0.0);
            for (unsigned a = 0; a < 2; ++a)
                for (unsigned b = 0; b < 2; ++b) row[idx(a, b, x, y)] = 1.0;
            lp.add_row(std::move(row), Relation::kEq, 1.0);
        }
    for (unsigned o = 0; o < 2; ++o) {
        for (unsigned x = 0; x < s; ++x)
            for (unsigned y = 1; y < s; ++y) {
                std::vector<double> row(nv, 0.0);
                for (unsigned b = 0; b < 2; ++b) {
                    row[idx(o, b, x, y)] += 1.0;
                    row[idx(o, b, x, 0)] -= 1.0;
                }
                lp.add_row(std::move(row), Relation::kEq, 0.0);
            }
        for (unsigned y = 0; y < s; ++y)
            for (unsigned x = 1; x < s; ++x) {
                std::vector<double> row(nv, 0.0);
                for (unsigned a = 0; a < 2; ++a) {
                    row[idx(a, o, x, y)] += 1.0;
                    row[idx(a, o, 0, y)] -= 1.0;
                }
                lp.add_row(std::move(row), Relation::kEq, 0.0);
            }
    }
    {
        std::vector<double> row(nv, 0.0);
        row[idx(0, 0, 0, 0)] = 1.0;
        for (unsigned k = 1; k <= n; ++k) {
            row[idx(0, 1, k, k - 1)] = 1.0;
            row[idx(1, 0, k - 1, k)] = 1.0;
        }
        lp.add_row(std::move(row), Relation::kLessEq, kappa);
    }

    const auto sol = lp_solve(lp);
    if (sol.status != LpStatus::kOptimal)
        throw NumericalError(std::string("Hardy LP reported ") + to_string(sol.status) + " but is always feasible");
    HardyLpResult res;
    res.value = sol.objective;
    res.maximizer = CondBox(n, sol.x);
    res.iterations = sol.iterations;
    return res;
}

InputDist uniform_inputs(unsigned n) {
    const std::size_t s = n + 1;
    return InputDist(s * s, 1.0 / static_cast<double>(s * s));
}

JointDist make_joint(const CondBox &box, const InputDist &input) {
    const unsigned s = box.settings();
    if (input.size() != static_cast<std::size_t>(s) * s) throw ValidationError("input distribution has wrong length");
    JointDist j{box.n_ladder(), std::vector<double>(box.size())};
    for (unsigned a = 0; a < 2; ++a)
        for (unsigned b = 0; b < 2; ++b)
            for (unsigned x = 0; x < s; ++x)
                for (unsigned y = 0; y < s; ++y)
                    j.joint[CondBox::index(box.n_ladder(), a, b, x, y)] = box(a, b, x, y) * input[x * s + y];
    return j;
}

std::pair<double, double> sv_band(double epsilon, unsigned n) {
    SvParams{epsilon}.validate();
    const double k = 2.0 * log2_exact(static_cast<std::uint64_t>(n) + 1);
    return {std::pow(0.5 - epsilon, k), std::pow(0.5 + epsilon, k)};
}

namespace {

// Coefficient of P(x, y) in mdl_value.
std::vector<double> mdl_coefficients(const CondBox &box, double lo, double hi) {
    const unsigned n = box.n_ladder(), s = n + 1;
    std::vector<double> c(static_cast<std::size_t>(s) * s, 0.0);
    for (unsigned x = 0; x < s; ++x)
        for (unsigned y = 0; y < s; ++y) {
            double v = 0;
            for (unsigned a = 0; a < 2; ++a)
                for (unsigned b = 0; b < 2; ++b)
                    if (is_hardy_zero_cell(a, b, x, y, n)) v -= hi * box(a, b, x, y);
            if (x == n && y == n) v += lo * box(0, 0, n, n);
            c[x * s + y] = v;
        }
    return c;
}

}  // namespace

double mdl_value(const CondBox &box, const InputDist &input, double epsilon) {
    const auto [lo, hi] = sv_band(epsilon, box.n_ladder());
    const unsigned s = box.settings();
    if (input.size() != static_cast<std::size_t>(s) * s) throw ValidationError("input distribution has wrong length");
    double total = 0;
    for (double p : input) {
        if (p < lo - 1e-12 || p > hi + 1e-12) throw ValidationError("input distribution leaves the SV band");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ValidationError("input distribution not normalized");
    const auto j = make_joint(box, input);
    const unsigned n = box.n_ladder();
    double zeros = j.joint[CondBox::index(n, 0, 0, 0, 0)];
    for (unsigned k = 1; k <= n; ++k)
        zeros += j.joint[CondBox::index(n, 0, 1, k, k - 1)] + j.joint[CondBox::index(n, 1, 0, k - 1, k)];
    return lo * j.joint[CondBox::index(n, 0, 0, n, n)] - hi * zeros;
}

InputDist mdl_worst_case_inputs(const CondBox &box, double epsilon) {
    const auto [lo, hi] = sv_band(epsilon, box.n_ladder());
    const auto c = mdl_coefficients(box, lo, hi);
    InputDist p(c.size(), lo);
    double budget = 1.0 - lo * static_cast<double>(c.size());
    std::vector<std::size_t> order(c.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return c[i] > c[j]; });
    for (std::size_t i : order) {
        if (budget <= 0) break;
        const double add = std::min(hi - lo, budget);
        p[i] += add;
        budget -= add;
    }
    return p;
}

nlohmann::json to_json(const CondBox &box) { return {{"N", box.n_ladder()}, {"probs", box.probs()}}; }

CondBox box_from_json(const nlohmann::json &j) {
    try {
        for (auto it = j.begin(); it != j.end(); ++it)
            if (it.key() != "N" && it.key() != "probs") throw ValidationError("box: unknown key '" + it.key() + "'");
        CondBox box(j.at("N").get<unsigned>(), j.at("probs").get<std::vector<double>>());
        box.validate();
        return box;
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("box: ") + e.what());
    }
}

}  // namespace weakrand

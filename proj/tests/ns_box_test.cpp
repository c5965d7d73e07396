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

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <set>

#include "weakrand/errors.h"
#include "weakrand/rng.h"

using namespace weakrand;

namespace {

CondBox product_box(unsigned n, const std::vector<double> &pa, const std::vector<double> &pb) {
    CondBox box(n);
    for (unsigned x = 0; x <= n; ++x)
        for (unsigned y = 0; y <= n; ++y)
            for (unsigned a = 0; a < 2; ++a)
                for (unsigned b = 0; b < 2; ++b)
                    box(a, b, x, y) = (a == 0 ? pa[x] : 1 - pa[x]) * (b == 0 ? pb[y] : 1 - pb[y]);
    return box;
}

CondBox random_local_box(unsigned n, Rng &rng, int terms = 5) {
    auto range = enumerate_local_deterministic(n);
    std::vector<double> w(terms);
    double tot = 0;
    for (auto &v : w) tot += v = rng.uniform();
    CondBox box(n);
    std::vector<double> p(box.size(), 0.0);
    for (int t = 0; t < terms; ++t) {
        const auto d = range[rng() % range.size()];
        for (std::size_t i = 0; i < p.size(); ++i) p[i] += w[t] / tot * d.probs()[i];
    }
    return CondBox(n, p);
}

// Vertices of the N = 1 no-signaling polytope, optionally cut by I0 <= kappa.
// Parameters: P(a=0|x) for x = 0,1; P(b=0|y) for y = 0,1; P(00|xy) for the
// four pairs. Every probability is affine in these eight numbers.
std::vector<Eigen::VectorXd> ns_vertices_n1(const double *kappa) {
    std::vector<Eigen::RowVectorXd> g;  // g . theta + h >= 0
    std::vector<double> h;
    auto pa = [](int x) { return x; };
    auto pb = [](int y) { return 2 + y; };
    auto pj = [](int x, int y) { return 4 + 2 * x + y; };
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(8);
            r(pj(x, y)) = 1;
            g.push_back(r), h.push_back(0);
            r.setZero(), r(pa(x)) = 1, r(pj(x, y)) = -1;
            g.push_back(r), h.push_back(0);
            r.setZero(), r(pb(y)) = 1, r(pj(x, y)) = -1;
            g.push_back(r), h.push_back(0);
            r.setZero(), r(pa(x)) = -1, r(pb(y)) = -1, r(pj(x, y)) = 1;
            g.push_back(r), h.push_back(1);
        }
    if (kappa) {
        // I0 = P(00|00) + P(01|10) + P(10|01)
        Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(8);
        r(pj(0, 0)) -= 1;
        r(pa(1)) -= 1, r(pj(1, 0)) += 1;
        r(pb(1)) -= 1, r(pj(0, 1)) += 1;
        g.push_back(r), h.push_back(*kappa);
    }
    const int m = static_cast<int>(g.size());
    std::vector<Eigen::VectorXd> out;
    std::vector<int> sel(8);
    for (int i = 0; i < 8; ++i) sel[i] = i;
    for (;;) {
        Eigen::MatrixXd A(8, 8);
        Eigen::VectorXd rhs(8);
        for (int i = 0; i < 8; ++i) A.row(i) = g[sel[i]], rhs(i) = -h[sel[i]];
        Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
        if (lu.rank() == 8) {
            Eigen::VectorXd th = lu.solve(rhs);
            bool ok = true;
            for (int i = 0; i < m && ok; ++i) ok = g[i].dot(th) + h[i] >= -1e-9;
            bool dup = false;
            for (const auto &v : out) dup |= (v - th).cwiseAbs().maxCoeff() < 1e-9;
            if (ok && !dup) out.push_back(th);
        }
        int k = 7;
        while (k >= 0 && sel[k] == m - 8 + k) --k;
        if (k < 0) break;
        ++sel[k];
        for (int j = k + 1; j < 8; ++j) sel[j] = sel[j - 1] + 1;
    }
    return out;
}

}  // namespace

TEST(ns_box, construction_and_validation) {
    EXPECT_THROW(CondBox(0), ValidationError);
    EXPECT_THROW(CondBox(1, std::vector<double>(3)), ValidationError);
    EXPECT_EQ(CondBox::index(1, 1, 1, 1, 1), 15u);
    EXPECT_NO_THROW(uniform_box(3).validate());
    CondBox bad = uniform_box(1);
    bad(0, 0, 0, 0) = 0.3;
    EXPECT_THROW(bad.validate(), ValidationError);
}

TEST(ns_box, no_signaling_checker) {
    EXPECT_TRUE(is_no_signaling(product_box(2, {0.3, 0.6, 0.1}, {0.5, 0.2, 0.9})).ok);
    // P(a=0|x=0,y=0) = 1 but P(a=0|x=0,y=1) = 0.
    CondBox sig(1);
    sig(0, 0, 0, 0) = 1;
    sig(1, 0, 0, 1) = 1;
    sig(0, 0, 1, 0) = 1;
    sig(0, 0, 1, 1) = 1;
    const auto rep = is_no_signaling(sig);
    EXPECT_FALSE(rep.ok);
    EXPECT_NEAR(rep.worst_residual, 1.0, 1e-15);
    EXPECT_FALSE(rep.worst_location.empty());
    for (unsigned n = 1; n <= 8; ++n) EXPECT_TRUE(is_no_signaling(pr_ladder_box(n)).ok);
}

TEST(ns_box, functionals_on_reference_boxes) {
    for (unsigned n = 1; n <= 6; ++n) {
        const auto pr = pr_ladder_box(n);
        EXPECT_EQ(bell_I(pr), 0.0);
        EXPECT_EQ(bell_I0(pr), 0.0);
        EXPECT_EQ(hardy_prob(pr), 0.5);
        for (unsigned x = 0; x <= n; ++x)
            for (unsigned y = 0; y <= n; ++y) {
                const auto c = pr.cell(x, y);
                EXPECT_DOUBLE_EQ(c[0] + c[1], 0.5);
                EXPECT_DOUBLE_EQ(c[0] + c[2], 0.5);
            }
        EXPECT_NEAR(bell_I0(uniform_box(n)), (2.0 * n + 1) / 4, 1e-15);
    }
}

TEST(ns_box, hardy_cells) {
    EXPECT_TRUE(is_hardy_zero_cell(0, 1, 1, 0, 3));
    EXPECT_TRUE(is_hardy_zero_cell(1, 0, 2, 3, 3));
    EXPECT_TRUE(is_hardy_zero_cell(0, 0, 0, 0, 3));
    EXPECT_FALSE(is_hardy_zero_cell(1, 1, 0, 0, 3));
    EXPECT_FALSE(is_hardy_zero_cell(0, 0, 3, 3, 3));
    EXPECT_THROW(is_hardy_zero_cell(0, 0, 4, 0, 3), ValidationError);
    int count = 0;
    for (unsigned a = 0; a < 2; ++a)
        for (unsigned b = 0; b < 2; ++b)
            for (unsigned x = 0; x <= 5; ++x)
                for (unsigned y = 0; y <= 5; ++y) count += is_hardy_zero_cell(a, b, x, y, 5);
    EXPECT_EQ(count, 11);
}

TEST(ns_box, deterministic_enumeration) {
    EXPECT_EQ(enumerate_local_deterministic(1).size(), 16u);
    EXPECT_EQ(enumerate_local_deterministic(2).size(), 64u);
    EXPECT_THROW(enumerate_local_deterministic(11), ValidationError);
    std::set<std::vector<double>> seen;
    for (const auto &b : enumerate_local_deterministic(2)) {
        EXPECT_NO_THROW(b.validate());
        seen.insert(b.probs());
    }
    EXPECT_EQ(seen.size(), 64u);
}

TEST(ns_box, local_bound_exhaustive) {
    for (unsigned n = 1; n <= 6; ++n) {
        double best = INFINITY;
        for (const auto &b : enumerate_local_deterministic(n)) {
            best = std::min(best, bell_I(b));
            if (bell_I0(b) == 0) EXPECT_EQ(hardy_prob(b), 0.0);
        }
        EXPECT_EQ(best, 0.5) << "N=" << n;
    }
}

TEST(ns_box, mixtures_are_affine) {
    Rng rng(21);
    for (int rep = 0; rep < 50; ++rep) {
        const unsigned n = 1 + rep % 4;
        const auto p = random_local_box(n, rng);
        const auto q = rep % 2 ? pr_ladder_box(n) : uniform_box(n);
        const double w = rng.uniform();
        const auto m = mix(p, q, w);
        EXPECT_NO_THROW(m.validate());
        EXPECT_NEAR(bell_I(m), w * bell_I(p) + (1 - w) * bell_I(q), 1e-12);
        EXPECT_NEAR(bell_I0(m), w * bell_I0(p) + (1 - w) * bell_I0(q), 1e-12);
    }
}

TEST(ns_box, vertex_oracle_counts) {
    // 16 deterministic + 8 PR-type vertices.
    EXPECT_EQ(ns_vertices_n1(nullptr).size(), 24u);
}

TEST(ns_box, hardy_lp_against_vertex_enumeration) {
    for (double kappa : {0.0, 0.05, 0.1, 0.3, 1.0}) {
        double best = -INFINITY;
        for (const auto &v : ns_vertices_n1(&kappa)) best = std::max(best, v(7));  // P(00|11)
        const auto lp = lp_max_hardy_given_I0(1, kappa);
        EXPECT_NEAR(lp.value, best, 1e-9) << "kappa=" << kappa;
        EXPECT_LE(lp.value, (1 + kappa) / 2 + 1e-8);
        EXPECT_NO_THROW(lp.maximizer.validate(1e-8));
        EXPECT_LE(bell_I0(lp.maximizer), kappa + 1e-8);
    }
}

TEST(ns_box, hardy_lp_grid) {
    for (unsigned n = 1; n <= 4; ++n)
        for (double kappa : {0.0, 0.05, 0.1, 0.3}) {
            const auto lp = lp_max_hardy_given_I0(n, kappa);
            EXPECT_LE(lp.value, (1 + kappa) / 2 + 1e-8);
            if (kappa == 0.0) EXPECT_NEAR(lp.value, hardy_prob(pr_ladder_box(n)), 1e-9);
        }
    EXPECT_LE(lp_max_hardy_given_I0(3, 0.1).value, 0.55 + 1e-8);
    EXPECT_LE(lp_max_hardy_given_I0(1, 1.0).value, 1.0 + 1e-12);
    EXPECT_THROW(lp_max_hardy_given_I0(1, -0.1), ValidationError);
    EXPECT_THROW(lp_max_hardy_given_I0(9, 0.1), ValidationError);
}

TEST(ns_box, mdl_uniform_by_hand) {
    const auto box = uniform_box(1);
    const auto in = uniform_inputs(1);
    for (double eps : {0.0, 0.1, 0.3}) {
        const double lo = std::pow(0.5 - eps, 2), hi = std::pow(0.5 + eps, 2);
        // P(0,0,1,1) = 1/16; three Hardy-zero joint terms of 1/16 each.
        EXPECT_NEAR(mdl_value(box, in, eps), lo / 16 - 3 * hi / 16, 1e-15);
    }
}

TEST(ns_box, mdl_input_validation) {
    const auto box = uniform_box(1);
    EXPECT_THROW(mdl_value(box, {0.7, 0.1, 0.1, 0.1}, 0.1), ValidationError);
    EXPECT_THROW(mdl_value(box, {0.25, 0.25, 0.25}, 0.1), ValidationError);
    EXPECT_THROW(mdl_value(box, {0.3, 0.3, 0.3, 0.3}, 0.2), ValidationError);
    EXPECT_THROW(mdl_value(uniform_box(2), uniform_inputs(2), 0.1), ValidationError);
}

// All vertices of [lo, hi]^4 intersected with the simplex: three coordinates
// at band edges, the fourth solving normalization.
TEST(ns_box, mdl_classical_side_over_all_band_vertices) {
    for (double eps : {0.0, 0.1, 0.2, 0.3, 0.4, 0.49}) {
        const auto [lo, hi] = sv_band(eps, 1);
        std::vector<InputDist> verts;
        for (int free = 0; free < 4; ++free)
            for (int mask = 0; mask < 8; ++mask) {
                InputDist p(4);
                double s = 0;
                for (int i = 0, k = 0; i < 4; ++i) {
                    if (i == free) continue;
                    p[i] = (mask >> k++) & 1 ? hi : lo;
                    s += p[i];
                }
                p[free] = 1 - s;
                if (p[free] >= lo - 1e-15 && p[free] <= hi + 1e-15) verts.push_back(p);
            }
        ASSERT_FALSE(verts.empty());
        for (const auto &b : enumerate_local_deterministic(1)) {
            const auto worst = mdl_worst_case_inputs(b, eps);
            const double wv = mdl_value(b, worst, eps);
            EXPECT_LE(wv, 1e-15);
            for (const auto &v : verts) {
                const double val = mdl_value(b, v, eps);
                EXPECT_LE(val, 1e-15);
                EXPECT_LE(val, wv + 1e-15);
            }
        }
    }
}

TEST(ns_box, json_round_trip) {
    const auto b = pr_ladder_box(2);
    const auto back = box_from_json(to_json(b));
    EXPECT_EQ(back.probs(), b.probs());
    auto j = to_json(b);
    j["probs"][0] = 0.9;
    EXPECT_THROW(box_from_json(j), ValidationError);
    EXPECT_THROW(box_from_json(nlohmann::json{{"N", 1}}), ValidationError);
    EXPECT_THROW(box_from_json(nlohmann::json{{"N", 1}, {"probs", b.probs()}, {"z", 1}}), ValidationError);
}

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

#ifndef WEAKRAND_NS_BOX_H
#define WEAKRAND_NS_BOX_H

#include <array>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <string>
#include <vector>

#include "json.hpp"

namespace weakrand {

/// P(a, b | x, y) for binary outputs and N+1 settings per party.
/// Storage is lexicographic in (a, b, x, y).
class CondBox {
   public:
    static constexpr double kTol = 1e-9;

    CondBox() = default;
    explicit CondBox(unsigned n_ladder);
    CondBox(unsigned n_ladder, std::vector<double> probs);

    unsigned n_ladder() const { return n_; }
    unsigned settings() const { return n_ + 1; }
    std::size_t size() const { return probs_.size(); }

    static std::size_t index(unsigned n_ladder, unsigned a, unsigned b, unsigned x, unsigned y) {
        const std::size_t s = n_ladder + 1;
        return ((static_cast<std::size_t>(a) * 2 + b) * s + x) * s + y;
    }

    double &operator()(unsigned a, unsigned b, unsigned x, unsigned y) { return probs_[index(n_, a, b, x, y)]; }
    double operator()(unsigned a, unsigned b, unsigned x, unsigned y) const { return probs_[index(n_, a, b, x, y)]; }
    /// The four outcome probabilities at (x, y), ordered 00, 01, 10, 11.
    std::array<double, 4> cell(unsigned x, unsigned y) const;

    const std::vector<double> &probs() const { return probs_; }

    /// Nonnegativity (-1e-12), normalization and no-signaling (tol).
    /// Throws ValidationError describing the first failure.
    void validate(double tol = kTol) const;

   private:
    unsigned n_ = 0;
    std::vector<double> probs_;
};

/// w * p + (1 - w) * q.
CondBox mix(const CondBox &p, const CondBox &q, double w);

struct NsReport {
    bool ok = true;
    double worst_residual = 0.0;
    std::string worst_location;
};

NsReport is_no_signaling(const CondBox &box, double tol = CondBox::kTol);

/// [1/2 - P(0,0|N,N)] + bell_I0(box).
double bell_I(const CondBox &box);
/// Sum of the 2N+1 Hardy-zero probabilities.
double bell_I0(const CondBox &box);
/// P(0,0|N,N).
double hardy_prob(const CondBox &box);

/// True for the cells (0,1|k,k-1), (1,0|k-1,k), k = 1..N, and (0,0|0,0).
bool is_hardy_zero_cell(unsigned a, unsigned b, unsigned x, unsigned y, unsigned n_ladder);

/// [a = f(x)][b = g(y)], bit x of `f` being f(x).
CondBox deterministic_box(unsigned n_ladder, std::uint32_t f, std::uint32_t g);

/// Lazy view over all 4^(N+1) local deterministic boxes. Element i uses
/// f = low N+1 bits of i and g = the next N+1 bits.
class LocalDeterministicRange {
   public:
    static constexpr unsigned kMaxN = 10;

    class iterator {
       public:
        using iterator_category = std::forward_iterator_tag;
        using value_type = CondBox;
        using difference_type = std::ptrdiff_t;
        using pointer = void;
        using reference = CondBox;

        iterator() = default;
        iterator(const LocalDeterministicRange *r, std::uint64_t i) : range_(r), i_(i) {}
        CondBox operator*() const { return (*range_)[i_]; }
        iterator &operator++() {
            ++i_;
            return *this;
        }
        iterator operator++(int) {
            auto t = *this;
            ++i_;
            return t;
        }
        bool operator==(const iterator &o) const { return i_ == o.i_; }

       private:
        const LocalDeterministicRange *range_ = nullptr;
        std::uint64_t i_ = 0;
    };

    explicit LocalDeterministicRange(unsigned n_ladder);
    std::uint64_t size() const { return std::uint64_t{1} << (2 * (n_ + 1)); }
    CondBox operator[](std::uint64_t i) const;
    std::uint32_t f_of(std::uint64_t i) const { return static_cast<std::uint32_t>(i & ((1u << (n_ + 1)) - 1)); }
    std::uint32_t g_of(std::uint64_t i) const { return static_cast<std::uint32_t>(i >> (n_ + 1)); }
    iterator begin() const { return {this, 0}; }
    iterator end() const { return {this, size()}; }

   private:
    unsigned n_;
};

/// ValidationError when N > 10.
LocalDeterministicRange enumerate_local_deterministic(unsigned n_ladder);

/// Anticorrelated uniform outputs at (0,0), perfectly correlated uniform
/// outputs at every other setting pair. bell_I = 0, P(0,0|N,N) = 1/2.
CondBox pr_ladder_box(unsigned n_ladder);

/// Uniform box, 1/4 everywhere.
CondBox uniform_box(unsigned n_ladder);

struct HardyLpResult {
    double value = 0.0;
    CondBox maximizer;
    std::size_t iterations = 0;
};

/// max P(0,0|N,N) over no-signaling boxes with bell_I0 <= kappa.
/// N <= 8, kappa >= 0. Throws NumericalError if the LP is not optimal.
HardyLpResult lp_max_hardy_given_I0(unsigned n_ladder, double kappa);

/// Input distribution P(x, y), index x * (N+1) + y.
using InputDist = std::vector<double>;

struct JointDist {
    unsigned n_ladder = 0;
    std::vector<double> joint;  // same layout as CondBox
};

JointDist make_joint(const CondBox &box, const InputDist &input);
InputDist uniform_inputs(unsigned n_ladder);

/// (1/2-eps)^(2 log2(N+1)) and (1/2+eps)^(2 log2(N+1)).
std::pair<double, double> sv_band(double epsilon, unsigned n_ladder);

/// lo * P(0,0,N,N) - hi * (sum of Hardy-zero joint terms). Throws
/// ValidationError when `input` is not normalized or leaves the SV band.
double mdl_value(const CondBox &box, const InputDist &input, double epsilon);

/// Band-edge input distribution maximizing mdl_value for `box` (fractional
/// knapsack over the box-simplex intersection).
InputDist mdl_worst_case_inputs(const CondBox &box, double epsilon);

nlohmann::json to_json(const CondBox &box);
/// Re-validates; throws ValidationError.
CondBox box_from_json(const nlohmann::json &j);

}  // namespace weakrand

#endif  // WEAKRAND_NS_BOX_H

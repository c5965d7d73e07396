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

#ifndef WEAKRAND_ASSEMBLAGE_H
#define WEAKRAND_ASSEMBLAGE_H

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "weakrand/numerics.h"
#include "weakrand/rng.h"

namespace weakrand {

/// Qubit operators sigma_{ab|xy} held by the trusted party, binary a, b, x, y.
/// Storage index is ((a*2 + b)*2 + x)*2 + y.
class Assemblage {
   public:
    static constexpr double kTol = 1e-9;

    Assemblage();
    explicit Assemblage(std::array<HermOp, 16> entries);

    static std::size_t index(unsigned a, unsigned b, unsigned x, unsigned y) { return ((a * 2 + b) * 2 + x) * 2 + y; }

    HermOp &operator()(unsigned a, unsigned b, unsigned x, unsigned y) { return entries_[index(a, b, x, y)]; }
    const HermOp &operator()(unsigned a, unsigned b, unsigned x, unsigned y) const {
        return entries_[index(a, b, x, y)];
    }
    const std::array<HermOp, 16> &entries() const { return entries_; }
    std::array<HermOp, 16> &entries() { return entries_; }

    /// Re Tr sigma_{ab|xy}.
    double prob(unsigned a, unsigned b, unsigned x, unsigned y) const;
    double max_abs_diff(const Assemblage &o) const;

   private:
    std::array<HermOp, 16> entries_;
};

struct ValidityReport {
    bool valid = true;
    double worst = 0.0;  // largest residual over all conditions
    std::string where;   // first failing condition, empty when valid
};

/// Positivity, both marginal conditions and unit trace per input pair.
ValidityReport check_assemblage(const Assemblage &s, double tol = Assemblage::kTol);
bool is_valid_assemblage(const Assemblage &s, double tol = Assemblage::kTol);

/// w * p + (1 - w) * q.
Assemblage mix(const Assemblage &p, const Assemblage &q, double w);

Assemblage ghz_assemblage();

/// Two-outcome measurement per setting: [x][outcome].
using Measurement = std::array<std::array<HermOp, 2>, 2>;

/// Projective measurement with outcome-0 projector |v_x><v_x|.
Measurement pvm_from_vectors(std::span<const Complex> v0, std::span<const Complex> v1);

/// Tr_AB((M_{a|x} (x) N_{b|y} (x) I) rho) for a three-qubit rho.
Assemblage assemblage_from_quantum(const HermOp &rho, const Measurement &alice, const Measurement &bob);
Assemblage assemblage_from_quantum(std::span<const Complex> psi, const Measurement &alice, const Measurement &bob);

/// sigma_{ab|xy} = [a == f(x)][b == g(y)] * state.
Assemblage lhs_deterministic(std::array<unsigned, 2> f, std::array<unsigned, 2> g, const HermOp &state);

/// Normalized reference entry, or zero where the entry vanishes.
HermOp normalized_entry(const Assemblage &reference, unsigned a, unsigned b, unsigned x, unsigned y);

/// Sum over all entries of Tr(rho_{ab|xy} sigma_{ab|xy}).
double steering_F(const Assemblage &reference, const Assemblage &s);

struct LhsBound {
    double value = 0.0;
    std::array<unsigned, 2> f{};  // a(x)
    std::array<unsigned, 2> g{};  // b(y)
    HermOp matrix;                // sum_{x,y} rho_{f(x) g(y)|xy}
    std::vector<Complex> state;   // top eigenvector of `matrix`
};

/// Maximum of F over deterministic responses and pure hidden states.
LhsBound lhs_bound(const Assemblage &reference);
/// The LHS assemblage attaining `lhs_bound`.
Assemblage lhs_optimal_assemblage(const Assemblage &reference);

/// Weights and pure states; states are empty where the weight is zero.
struct RankOneAssemblage {
    std::array<double, 16> weights{};
    std::array<std::vector<Complex>, 16> states;

    Assemblage to_assemblage() const;
};

/// Throws ValidationError if an entry has rank two.
RankOneAssemblage to_rank_one(const Assemblage &s, double tol = Assemblage::kTol);

struct InflexibilityReport {
    bool inflexible = false;
    std::size_t unknowns = 0;  // support size
    std::size_t rank = 0;      // rank of the homogeneous constraint system
};

/// Weights with the same states and zero pattern that satisfy the
/// assemblage equalities form an affine space through the given weights;
/// inflexible iff it is a single point.
InflexibilityReport inflexibility(const RankOneAssemblage &s);
bool check_inflexible(const RankOneAssemblage &s);

// ---------------------------------------------------------------------------
// Sequential assemblages.

/// Operators on n trusted qubits (time-1 register leading) indexed by
/// outcome and setting strings. Within each string the time-1 bit is the
/// most significant. Storage index is ((A*2^n + B)*2^n + X)*2^n + Y.
class SequentialAssemblage {
   public:
    static constexpr unsigned kMaxTimes = 3;

    SequentialAssemblage() = default;
    explicit SequentialAssemblage(unsigned n);

    unsigned times() const { return n_; }
    std::size_t dim() const { return std::size_t{1} << n_; }
    std::size_t index(std::uint32_t a, std::uint32_t b, std::uint32_t x, std::uint32_t y) const {
        const std::size_t k = dim();
        return ((a * k + b) * k + x) * k + y;
    }
    HermOp &operator()(std::uint32_t a, std::uint32_t b, std::uint32_t x, std::uint32_t y) {
        return entries_[index(a, b, x, y)];
    }
    const HermOp &operator()(std::uint32_t a, std::uint32_t b, std::uint32_t x, std::uint32_t y) const {
        return entries_[index(a, b, x, y)];
    }
    const std::vector<HermOp> &entries() const { return entries_; }
    std::vector<HermOp> &entries() { return entries_; }

    double max_abs_diff(const SequentialAssemblage &o) const;

   private:
    unsigned n_ = 0;
    std::vector<HermOp> entries_;
};

/// Bit of time t (1-based) in an n-bit string.
inline unsigned time_bit(std::uint32_t v, unsigned t, unsigned n) { return (v >> (n - t)) & 1u; }

ValidityReport check_sequential_ns(const SequentialAssemblage &s, double tol = Assemblage::kTol);
bool is_sequential_ns(const SequentialAssemblage &s, double tol = Assemblage::kTol);

SequentialAssemblage as_sequential(const Assemblage &s);
SequentialAssemblage sequential_product(std::span<const Assemblage> factors);
SequentialAssemblage mix(const SequentialAssemblage &p, const SequentialAssemblage &q, double w);

/// Sum of Tr((tau_1 (x) ... (x) tau_n) sigma) with tau_i the normalized
/// entries of the i-th reference.
double steering_F_n(std::span<const Assemblage> references, const SequentialAssemblage &s);

struct SubAssemblage {
    Assemblage unnormalized;
    double weight = 0.0;
    bool zero_weight = true;

    /// Throws ValidationError on a zero-weight prefix.
    Assemblage normalized() const;
};

/// Entries consistent with the prefix strings (n-1 bits each), with the
/// first n-1 registers traced out.
SubAssemblage conditional_subassemblage(const SequentialAssemblage &s, std::uint32_t a, std::uint32_t b,
                                        std::uint32_t x, std::uint32_t y);

/// Single-time assemblage at time t: other outcomes summed, other registers
/// traced out, other settings fixed to the given strings.
Assemblage time_marginal(const SequentialAssemblage &s, unsigned t, std::uint32_t x_rest = 0,
                         std::uint32_t y_rest = 0);

// ---------------------------------------------------------------------------
// Random fixtures.

std::vector<Complex> random_pure_state(std::size_t dim, Rng &rng);
/// Convex mixture of 1..4 deterministic LHS vertices with random qubit states.
Assemblage random_lhs_assemblage(Rng &rng);
/// Deterministic sequential LHS model: a_t depends on x_1..x_t, b_t on
/// y_1..y_t, with a random pure hidden state on all n registers.
SequentialAssemblage random_sequential_lhs(unsigned n, Rng &rng);

// ---------------------------------------------------------------------------

nlohmann::json to_json(const Assemblage &s);
Assemblage assemblage_from_json(const nlohmann::json &j);
nlohmann::json to_json(const SequentialAssemblage &s);
SequentialAssemblage sequential_from_json(const nlohmann::json &j);

}  // namespace weakrand

#endif  // WEAKRAND_ASSEMBLAGE_H

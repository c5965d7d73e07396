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

#ifndef WEAKRAND_NUMERICS_H
#define WEAKRAND_NUMERICS_H

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace weakrand {

using Complex = std::complex<double>;

/// Square complex matrix of dimension 1..8 stored row-major.
///
/// The type does not force Hermiticity so that validators can inspect
/// malformed inputs; `is_hermitian` and the eigen routines check it.
class HermOp {
   public:
    static constexpr std::size_t kMaxDim = 8;

    HermOp() = default;
    explicit HermOp(std::size_t dim);
    HermOp(std::size_t dim, std::vector<Complex> entries);

    static HermOp identity(std::size_t dim);
    static HermOp zero(std::size_t dim) { return HermOp(dim); }
    /// |v><v| for a (not necessarily normalized) vector v.
    static HermOp projector(std::span<const Complex> v);
    static HermOp diagonal(std::span<const double> d);

    std::size_t dim() const { return dim_; }
    Complex &operator()(std::size_t i, std::size_t j) { return entries_[i * dim_ + j]; }
    const Complex &operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }
    const std::vector<Complex> &entries() const { return entries_; }

    Complex trace() const;
    HermOp adjoint() const;
    bool is_hermitian(double tol = 1e-12) const;
    /// Largest |entry| difference; both operands must share a dimension.
    double max_abs_diff(const HermOp &other) const;

    HermOp &operator+=(const HermOp &o);
    HermOp &operator-=(const HermOp &o);
    HermOp &operator*=(double s);
    friend HermOp operator+(HermOp a, const HermOp &b) { return a += b; }
    friend HermOp operator-(HermOp a, const HermOp &b) { return a -= b; }
    friend HermOp operator*(HermOp a, double s) { return a *= s; }
    friend HermOp operator*(double s, HermOp a) { return a *= s; }
    friend bool operator==(const HermOp &, const HermOp &) = default;

   private:
    std::size_t dim_ = 0;
    std::vector<Complex> entries_;
};

/// Matrix product (not Hermitian in general, but the carrier is reused).
HermOp matmul(const HermOp &a, const HermOp &b);
/// Tr(a b) without forming the product.
Complex trace_product(const HermOp &a, const HermOp &b);
/// Kronecker product, index of (i, j) is i * b.dim() + j.
HermOp tensor(const HermOp &a, const HermOp &b);
/// Partial trace over the leading factor of a (dim_a x dim_b) operator.
HermOp partial_trace_leading(const HermOp &op, std::size_t dim_a);
/// Partial trace over the trailing factor of a (dim_a x dim_b) operator.
HermOp partial_trace_trailing(const HermOp &op, std::size_t dim_b);

/// All eigenvalues, ascending. Throws ValidationError on non-Hermitian
/// input (tolerance 1e-12 relative to the largest entry, absolute floor 1e-12).
std::vector<double> eigvals_hermitian(const HermOp &op);
double eig_max_hermitian(const HermOp &op);
double eig_min_hermitian(const HermOp &op);
/// Normalized eigenvector of the largest eigenvalue.
std::vector<Complex> top_eigenvector(const HermOp &op);
bool is_psd(const HermOp &op, double tol = 1e-9);

/// Dense real matrix, row-major.
struct RealMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    RealMatrix() = default;
    RealMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
    double &operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

/// Singular values, descending.
std::vector<double> singular_values(const RealMatrix &a);
/// Number of singular values strictly above `tol`.
std::size_t numerical_rank(const RealMatrix &a, double tol = 1e-9);

// ---------------------------------------------------------------------------
// Linear programming.

enum class Relation { kLessEq, kEq, kGreaterEq };
enum class Sense { kMaximize, kMinimize };

struct LpRow {
    std::vector<double> coeffs;
    Relation relation = Relation::kLessEq;
    double rhs = 0.0;
};

/// Lower bounds are always 0; upper bounds default to 1 and may be +inf.
struct LpProblem {
    Sense sense = Sense::kMaximize;
    std::vector<double> objective;
    std::vector<LpRow> rows;
    std::vector<double> upper;  // empty => every variable in [0, 1]

    std::size_t num_vars() const { return objective.size(); }
    void add_row(std::vector<double> coeffs, Relation rel, double rhs);
    double upper_bound(std::size_t j) const { return upper.empty() ? 1.0 : upper[j]; }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };
const char *to_string(LpStatus s);

struct LpSolution {
    LpStatus status = LpStatus::kInfeasible;
    double objective = 0.0;
    std::vector<double> x;
    std::size_t iterations = 0;
};

/// Dense two-phase tableau simplex with Bland's rule. Deterministic for a
/// fixed problem. Throws ValidationError on ragged rows or non-finite data.
LpSolution lp_solve(const LpProblem &p);

/// Largest violation of any row or bound by `x` (0 when feasible).
double lp_max_violation(const LpProblem &p, std::span<const double> x);

}  // namespace weakrand

#endif  // WEAKRAND_NUMERICS_H

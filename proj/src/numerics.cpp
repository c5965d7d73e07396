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

#include "weakrand/numerics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "weakrand/errors.h"

namespace weakrand {

namespace {

void check_dim(std::size_t dim) {
    if (dim == 0 || dim > HermOp::kMaxDim) {
        throw ValidationError("operator dimension must be in [1, 8], got " + std::to_string(dim));
    }
}

void check_same(const HermOp &a, const HermOp &b) {
    if (a.dim() != b.dim()) {
        throw ValidationError("operator dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                              std::to_string(b.dim()));
    }
}

}  // namespace

HermOp::HermOp(std::size_t dim) : dim_(dim), entries_(dim * dim, Complex{}) { check_dim(dim); }

HermOp::HermOp(std::size_t dim, std::vector<Complex> entries) : dim_(dim), entries_(std::move(entries)) {
    check_dim(dim);
    if (entries_.size() != dim * dim) {
        throw ValidationError("operator entry count does not match dimension");
    }
}

HermOp HermOp::identity(std::size_t dim) {
    HermOp r(dim);
    for (std::size_t i = 0; i < dim; ++i) r(i, i) = 1.0;
    return r;
}

HermOp HermOp::projector(std::span<const Complex> v) {
    HermOp r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) r(i, j) = v[i] * std::conj(v[j]);
    return r;
}

HermOp HermOp::diagonal(std::span<const double> d) {
    HermOp r(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) r(i, i) = d[i];
    return r;
}

Complex HermOp::trace() const {
    Complex t{};
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

HermOp HermOp::adjoint() const {
    HermOp r(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) r(i, j) = std::conj((*this)(j, i));
    return r;
}

bool HermOp::is_hermitian(double tol) const {
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = i; j < dim_; ++j)
            if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
    return true;
}

double HermOp::max_abs_diff(const HermOp &other) const {
    check_same(*this, other);
    double m = 0.0;
    for (std::size_t k = 0; k < entries_.size(); ++k) m = std::max(m, std::abs(entries_[k] - other.entries_[k]));
    return m;
}

HermOp &HermOp::operator+=(const HermOp &o) {
    check_same(*this, o);
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
    return *this;
}

HermOp &HermOp::operator-=(const HermOp &o) {
    check_same(*this, o);
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
    return *this;
}

HermOp &HermOp::operator*=(double s) {
    for (auto &e : entries_) e *= s;
    return *this;
}

HermOp matmul(const HermOp &a, const HermOp &b) {
    check_same(a, b);
    const std::size_t n = a.dim();
    HermOp r(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
        }
    return r;
}

Complex trace_product(const HermOp &a, const HermOp &b) {
    check_same(a, b);
    Complex t{};
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t k = 0; k < a.dim(); ++k) t += a(i, k) * b(k, i);
    return t;
}

HermOp tensor(const HermOp &a, const HermOp &b) {
    const std::size_t da = a.dim(), db = b.dim();
    HermOp r(da * db);
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t j = 0; j < da; ++j)
            for (std::size_t k = 0; k < db; ++k)
                for (std::size_t l = 0; l < db; ++l) r(i * db + k, j * db + l) = a(i, j) * b(k, l);
    return r;
}

HermOp partial_trace_leading(const HermOp &op, std::size_t dim_a) {
    if (dim_a == 0 || op.dim() % dim_a != 0) throw ValidationError("partial trace: leading dimension does not divide");
    const std::size_t db = op.dim() / dim_a;
    HermOp r(db);
    for (std::size_t a = 0; a < dim_a; ++a)
        for (std::size_t k = 0; k < db; ++k)
            for (std::size_t l = 0; l < db; ++l) r(k, l) += op(a * db + k, a * db + l);
    return r;
}

HermOp partial_trace_trailing(const HermOp &op, std::size_t dim_b) {
    if (dim_b == 0 || op.dim() % dim_b != 0) throw ValidationError("partial trace: trailing dimension does not divide");
    const std::size_t da = op.dim() / dim_b;
    HermOp r(da);
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t j = 0; j < da; ++j)
            for (std::size_t b = 0; b < dim_b; ++b) r(i, j) += op(i * dim_b + b, j * dim_b + b);
    return r;
}

// ---------------------------------------------------------------------------

namespace {

void require_hermitian(const HermOp &op) {
    double scale = 1.0;
    for (const auto &e : op.entries()) scale = std::max(scale, std::abs(e));
    if (!op.is_hermitian(1e-12 * scale)) throw ValidationError("operator is not Hermitian");
}

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solve_hermitian(const HermOp &op, bool vectors) {
    require_hermitian(op);
    const auto n = static_cast<Eigen::Index>(op.dim());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            m(i, j) = 0.5 * (op(i, j) + std::conj(op(j, i)));
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(m, vectors ? Eigen::ComputeEigenvectors
                                                                      : Eigen::EigenvaluesOnly);
}

}  // namespace

std::vector<double> eigvals_hermitian(const HermOp &op) {
    const auto es = solve_hermitian(op, false);
    if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
    const auto &ev = es.eigenvalues();
    return std::vector<double>(ev.data(), ev.data() + ev.size());
}

double eig_max_hermitian(const HermOp &op) { return eigvals_hermitian(op).back(); }
double eig_min_hermitian(const HermOp &op) { return eigvals_hermitian(op).front(); }

std::vector<Complex> top_eigenvector(const HermOp &op) {
    const auto es = solve_hermitian(op, true);
    if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
    const auto col = es.eigenvectors().col(es.eigenvectors().cols() - 1);
    return std::vector<Complex>(col.data(), col.data() + col.size());
}

bool is_psd(const HermOp &op, double tol) {
    if (!op.is_hermitian(tol)) return false;
    return eig_min_hermitian(op) >= -tol;
}

std::vector<double> singular_values(const RealMatrix &a) {
    if (a.rows == 0 || a.cols == 0) return {};
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
        a.data.data(), static_cast<Eigen::Index>(a.rows), static_cast<Eigen::Index>(a.cols));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto &sv = svd.singularValues();
    return std::vector<double>(sv.data(), sv.data() + sv.size());
}

std::size_t numerical_rank(const RealMatrix &a, double tol) {
    const auto sv = singular_values(a);
    return static_cast<std::size_t>(std::count_if(sv.begin(), sv.end(), [&](double s) { return s > tol; }));
}

// ---------------------------------------------------------------------------

void LpProblem::add_row(std::vector<double> coeffs, Relation rel, double rhs) {
    rows.push_back(LpRow{std::move(coeffs), rel, rhs});
}

const char *to_string(LpStatus s) {
    switch (s) {
        case LpStatus::kOptimal: return "optimal";
        case LpStatus::kInfeasible: return "infeasible";
        case LpStatus::kUnbounded: return "unbounded";
    }
    return "unknown";
}

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kFeasTol = 1e-9;

struct Tableau {
    std::size_t m = 0, cols = 0;  // cols excludes rhs
    std::vector<double> t;        // m x (cols + 1)
    std::vector<std::size_t> basis;

    double &at(std::size_t i, std::size_t j) { return t[i * (cols + 1) + j]; }
    double at(std::size_t i, std::size_t j) const { return t[i * (cols + 1) + j]; }
    double &rhs(std::size_t i) { return at(i, cols); }

    void pivot(std::size_t r, std::size_t c) {
        const double pv = at(r, c);
        for (std::size_t j = 0; j <= cols; ++j) at(r, j) /= pv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r) continue;
            const double f = at(i, c);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= cols; ++j) at(i, j) -= f * at(r, j);
            at(i, c) = 0.0;
        }
        basis[r] = c;
    }
};

enum class RunResult { kOptimal, kUnbounded };

// Maximizes cost . x over columns with allowed[j] true.
RunResult run_simplex(Tableau &tab, const std::vector<double> &cost, const std::vector<bool> &allowed,
                      std::size_t &iterations) {
    std::vector<double> reduced(tab.cols);
    for (;;) {
        for (std::size_t j = 0; j < tab.cols; ++j) {
            double r = cost[j];
            for (std::size_t i = 0; i < tab.m; ++i) r -= cost[tab.basis[i]] * tab.at(i, j);
            reduced[j] = r;
        }
        std::size_t enter = tab.cols;
        for (std::size_t j = 0; j < tab.cols; ++j) {
            if (allowed[j] && reduced[j] > kFeasTol) {
                enter = j;
                break;
            }
        }
        if (enter == tab.cols) return RunResult::kOptimal;

        std::size_t leave = tab.m;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < tab.m; ++i) {
            const double a = tab.at(i, enter);
            if (a <= kPivotTol) continue;
            const double ratio = tab.at(i, tab.cols) / a;
            if (leave == tab.m || ratio < best - 1e-12 ||
                (ratio <= best + 1e-12 && tab.basis[i] < tab.basis[leave])) {
                best = std::min(best, ratio);
                leave = i;
            }
        }
        if (leave == tab.m) return RunResult::kUnbounded;
        tab.pivot(leave, enter);
        ++iterations;
        if (iterations > 1000000) throw NumericalError("simplex iteration limit exceeded");
    }
}

}  // namespace

LpSolution lp_solve(const LpProblem &p) {
    const std::size_t n = p.num_vars();
    if (!p.upper.empty() && p.upper.size() != n) throw ValidationError("lp: upper bound vector has wrong length");
    for (double c : p.objective)
        if (!std::isfinite(c)) throw ValidationError("lp: non-finite objective coefficient");

    // Expand finite upper bounds into explicit rows.
    std::vector<LpRow> rows = p.rows;
    for (const auto &r : rows) {
        if (r.coeffs.size() != n) throw ValidationError("lp: constraint row length does not match variable count");
        if (!std::isfinite(r.rhs)) throw ValidationError("lp: non-finite right-hand side");
        for (double c : r.coeffs)
            if (!std::isfinite(c)) throw ValidationError("lp: non-finite constraint coefficient");
    }
    for (std::size_t j = 0; j < n; ++j) {
        const double u = p.upper_bound(j);
        if (std::isnan(u) || u < 0) throw ValidationError("lp: upper bounds must be non-negative");
        if (std::isinf(u)) continue;
        LpRow r;
        r.coeffs.assign(n, 0.0);
        r.coeffs[j] = 1.0;
        r.relation = Relation::kLessEq;
        r.rhs = u;
        rows.push_back(std::move(r));
    }

    // Normalize to rhs >= 0.
    for (auto &r : rows) {
        if (r.rhs < 0) {
            for (auto &c : r.coeffs) c = -c;
            r.rhs = -r.rhs;
            if (r.relation == Relation::kLessEq)
                r.relation = Relation::kGreaterEq;
            else if (r.relation == Relation::kGreaterEq)
                r.relation = Relation::kLessEq;
        }
    }

    const std::size_t m = rows.size();
    std::size_t n_slack = 0, n_art = 0;
    for (const auto &r : rows) {
        if (r.relation != Relation::kEq) ++n_slack;
        if (r.relation != Relation::kLessEq) ++n_art;
    }
    Tableau tab;
    tab.m = m;
    tab.cols = n + n_slack + n_art;
    tab.t.assign(m * (tab.cols + 1), 0.0);
    tab.basis.assign(m, 0);
    const std::size_t art0 = n + n_slack;
    std::size_t s = n, a = art0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) tab.at(i, j) = rows[i].coeffs[j];
        tab.rhs(i) = rows[i].rhs;
        switch (rows[i].relation) {
            case Relation::kLessEq:
                tab.at(i, s) = 1.0;
                tab.basis[i] = s++;
                break;
            case Relation::kGreaterEq:
                tab.at(i, s++) = -1.0;
                tab.at(i, a) = 1.0;
                tab.basis[i] = a++;
                break;
            case Relation::kEq:
                tab.at(i, a) = 1.0;
                tab.basis[i] = a++;
                break;
        }
    }

    LpSolution sol;
    std::vector<bool> allowed(tab.cols, true);
    if (n_art > 0) {
        std::vector<double> phase1(tab.cols, 0.0);
        for (std::size_t j = art0; j < tab.cols; ++j) phase1[j] = -1.0;
        run_simplex(tab, phase1, allowed, sol.iterations);
        double infeas = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            if (tab.basis[i] >= art0) infeas += tab.rhs(i);
        if (infeas > kFeasTol) {
            sol.status = LpStatus::kInfeasible;
            return sol;
        }
        // Drive remaining (zero-level) artificials out of the basis.
        for (std::size_t i = 0; i < m; ++i) {
            if (tab.basis[i] < art0) continue;
            for (std::size_t j = 0; j < art0; ++j) {
                if (std::abs(tab.at(i, j)) > 1e-9) {
                    tab.pivot(i, j);
                    break;
                }
            }
        }
        for (std::size_t j = art0; j < tab.cols; ++j) allowed[j] = false;
    }

    std::vector<double> cost(tab.cols, 0.0);
    const double sign = p.sense == Sense::kMaximize ? 1.0 : -1.0;
    for (std::size_t j = 0; j < n; ++j) cost[j] = sign * p.objective[j];
    if (run_simplex(tab, cost, allowed, sol.iterations) == RunResult::kUnbounded) {
        sol.status = LpStatus::kUnbounded;
        return sol;
    }
    sol.status = LpStatus::kOptimal;
    sol.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (tab.basis[i] < n) sol.x[tab.basis[i]] = std::max(0.0, tab.rhs(i));
    sol.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) sol.objective += p.objective[j] * sol.x[j];
    return sol;
}

double lp_max_violation(const LpProblem &p, std::span<const double> x) {
    double worst = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        worst = std::max(worst, -x[j]);
        worst = std::max(worst, x[j] - p.upper_bound(j));
    }
    for (const auto &r : p.rows) {
        double lhs = 0.0;
        for (std::size_t j = 0; j < x.size() && j < r.coeffs.size(); ++j) lhs += r.coeffs[j] * x[j];
        switch (r.relation) {
            case Relation::kLessEq: worst = std::max(worst, lhs - r.rhs); break;
            case Relation::kGreaterEq: worst = std::max(worst, r.rhs - lhs); break;
            case Relation::kEq: worst = std::max(worst, std::abs(lhs - r.rhs)); break;
        }
    }
    return worst;
}

}  // namespace weakrand

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

#include "weakrand/assemblage.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "weakrand/errors.h"

namespace weakrand {

namespace {

constexpr double kZeroTrace = 1e-12;

std::string label(unsigned a, unsigned b, unsigned x, unsigned y) {
    return "(" + std::to_string(a) + std::to_string(b) + "|" + std::to_string(x) + std::to_string(y) + ")";
}

HermOp ket_projector(Complex c0, Complex c1) {
    const std::array<Complex, 2> v{c0, c1};
    return HermOp::projector(v);
}

HermOp hermitize(const HermOp &m) { return (m + m.adjoint()) * 0.5; }

// Keeps register t (1-based) of an n-qubit operator.
HermOp keep_register(const HermOp &op, unsigned n, unsigned t) {
    const std::size_t d = std::size_t{1} << n;
    const unsigned shift = n - t;
    HermOp out(2);
    for (std::size_t r = 0; r < d; ++r) {
        if ((r >> shift) & 1u) continue;
        const std::size_t r1 = r | (std::size_t{1} << shift);
        for (unsigned i = 0; i < 2; ++i)
            for (unsigned j = 0; j < 2; ++j) out(i, j) += op(i ? r1 : r, j ? r1 : r);
    }
    return out;
}

void note(ValidityReport &rep, double residual, double tol, const std::string &what) {
    rep.worst = std::max(rep.worst, residual);
    if (residual > tol && rep.valid) {
        rep.valid = false;
        rep.where = what;
    }
}

void check_entry(ValidityReport &rep, const HermOp &m, double tol, const std::string &what) {
    if (!m.is_hermitian(tol)) {
        note(rep, std::max(tol, m.max_abs_diff(m.adjoint())) * 2, tol, "hermiticity at " + what);
        return;
    }
    note(rep, std::max(0.0, -eig_min_hermitian(m)), tol, "positivity at " + what);
}

}  // namespace

// ---------------------------------------------------------------------------

Assemblage::Assemblage() { entries_.fill(HermOp::zero(2)); }

Assemblage::Assemblage(std::array<HermOp, 16> entries) : entries_(std::move(entries)) {
    for (const auto &e : entries_)
        if (e.dim() != 2) throw ValidationError("assemblage entries must be 2x2");
}

double Assemblage::prob(unsigned a, unsigned b, unsigned x, unsigned y) const {
    return (*this)(a, b, x, y).trace().real();
}

double Assemblage::max_abs_diff(const Assemblage &o) const {
    double m = 0;
    for (std::size_t i = 0; i < 16; ++i) m = std::max(m, entries_[i].max_abs_diff(o.entries_[i]));
    return m;
}

ValidityReport check_assemblage(const Assemblage &s, double tol) {
    ValidityReport rep;
    for (unsigned a = 0; a < 2; ++a)
        for (unsigned b = 0; b < 2; ++b)
            for (unsigned x = 0; x < 2; ++x)
                for (unsigned y = 0; y < 2; ++y) check_entry(rep, s(a, b, x, y), tol, label(a, b, x, y));
    for (unsigned o = 0; o < 2; ++o)
        for (unsigned z = 0; z < 2; ++z) {
            const HermOp alice0 = s(0, o, 0, z) + s(1, o, 0, z), alice1 = s(0, o, 1, z) + s(1, o, 1, z);
            note(rep, alice0.max_abs_diff(alice1), tol,
                 "marginal over a depends on x (b=" + std::to_string(o) + ", y=" + std::to_string(z) + ")");
            const HermOp bob0 = s(o, 0, z, 0) + s(o, 1, z, 0), bob1 = s(o, 0, z, 1) + s(o, 1, z, 1);
            note(rep, bob0.max_abs_diff(bob1), tol,
                 "marginal over b depends on y (a=" + std::to_string(o) + ", x=" + std::to_string(z) + ")");
        }
    for (unsigned x = 0; x < 2; ++x)
        for (unsigned y = 0; y < 2; ++y) {
            double t = 0;
            for (unsigned a = 0; a < 2; ++a)
                for (unsigned b = 0; b < 2; ++b) t += s.prob(a, b, x, y);
            note(rep, std::abs(t - 1.0), tol, "normalization at (x,y)=(" + std::to_string(x) + std::to_string(y) + ")");
        }
    return rep;
}

bool is_valid_assemblage(const Assemblage &s, double tol) { return check_assemblage(s, tol).valid; }

Assemblage mix(const Assemblage &p, const Assemblage &q, double w) {
    if (!(w >= 0 && w <= 1)) throw ValidationError("mixing weight must lie in [0, 1]");
    std::array<HermOp, 16> e;
    for (std::size_t i = 0; i < 16; ++i) e[i] = p.entries()[i] * w + q.entries()[i] * (1 - w);
    return Assemblage(std::move(e));
}

Assemblage ghz_assemblage() {
    const double r = 1 / std::sqrt(2.0);
    const HermOp plus = ket_projector(r, r), minus = ket_projector(r, -r);
    const HermOp zero = ket_projector(1, 0), one = ket_projector(0, 1);
    Assemblage s;
    // Rows (a|x), columns (b|y).
    s(0, 0, 0, 0) = plus * 0.25;
    s(0, 1, 0, 0) = minus * 0.25;
    s(1, 0, 0, 0) = minus * 0.25;
    s(1, 1, 0, 0) = plus * 0.25;
    s(0, 0, 0, 1) = zero * 0.25;
    s(0, 1, 0, 1) = one * 0.25;
    s(1, 0, 0, 1) = zero * 0.25;
    s(1, 1, 0, 1) = one * 0.25;
    s(0, 0, 1, 0) = zero * 0.25;
    s(0, 1, 1, 0) = zero * 0.25;
    s(1, 0, 1, 0) = one * 0.25;
    s(1, 1, 1, 0) = one * 0.25;
    s(0, 0, 1, 1) = zero * 0.5;
    s(1, 1, 1, 1) = one * 0.5;
    return s;
}

Measurement pvm_from_vectors(std::span<const Complex> v0, std::span<const Complex> v1) {
    Measurement m;
    const std::array<std::span<const Complex>, 2> vs{v0, v1};
    for (unsigned x = 0; x < 2; ++x) {
        if (vs[x].size() != 2) throw ValidationError("measurement vectors must be qubit states");
        const double nrm = std::norm(vs[x][0]) + std::norm(vs[x][1]);
        if (nrm <= 0) throw ValidationError("measurement vector must be nonzero");
        m[x][0] = HermOp::projector(vs[x]) * (1 / nrm);
        m[x][1] = HermOp::identity(2) - m[x][0];
    }
    return m;
}

Assemblage assemblage_from_quantum(const HermOp &rho, const Measurement &alice, const Measurement &bob) {
    if (rho.dim() != 8) throw ValidationError("three-qubit state must be 8x8");
    if (!is_psd(rho) || std::abs(rho.trace() - 1.0) > Assemblage::kTol)
        throw ValidationError("state must be a unit-trace positive operator");
    for (const auto &m : {alice, bob})
        for (unsigned x = 0; x < 2; ++x) {
            if (!is_psd(m[x][0]) || !is_psd(m[x][1])) throw ValidationError("measurement elements must be positive");
            if ((m[x][0] + m[x][1]).max_abs_diff(HermOp::identity(2)) > Assemblage::kTol)
                throw ValidationError("measurement elements must sum to identity");
        }
    const HermOp id = HermOp::identity(2);
    Assemblage s;
    for (unsigned a = 0; a < 2; ++a)
        for (unsigned b = 0; b < 2; ++b)
            for (unsigned x = 0; x < 2; ++x)
                for (unsigned y = 0; y < 2; ++y) {
                    const HermOp op = tensor(tensor(alice[x][a], bob[y][b]), id);
                    s(a, b, x, y) = hermitize(partial_trace_leading(matmul(op, rho), 4));
                }
    return s;
}

Assemblage assemblage_from_quantum(std::span<const Complex> psi, const Measurement &alice, const Measurement &bob) {
    if (psi.size() != 8) throw ValidationError("three-qubit ray must have 8 amplitudes");
    double nrm = 0;
    for (const auto &c : psi) nrm += std::norm(c);
    if (nrm <= 0) throw ValidationError("state vector must be nonzero");
    return assemblage_from_quantum(HermOp::projector(psi) * (1 / nrm), alice, bob);
}

Assemblage lhs_deterministic(std::array<unsigned, 2> f, std::array<unsigned, 2> g, const HermOp &state) {
    if (state.dim() != 2 || !is_psd(state) || std::abs(state.trace() - 1.0) > Assemblage::kTol)
        throw ValidationError("hidden state must be a qubit density operator");
    Assemblage s;
    for (unsigned x = 0; x < 2; ++x)
        for (unsigned y = 0; y < 2; ++y) {
            if (f[x] > 1 || g[y] > 1) throw ValidationError("responses must be bits");
            s(f[x], g[y], x, y) = state;
        }
    return s;
}

HermOp normalized_entry(const Assemblage &reference, unsigned a, unsigned b, unsigned x, unsigned y) {
    const HermOp &e = reference(a, b, x, y);
    const double t = e.trace().real();
    if (t <= kZeroTrace) return HermOp::zero(2);
    return e * (1 / t);
}

double steering_F(const Assemblage &reference, const Assemblage &s) {
    double f = 0;
    for (unsigned a = 0; a < 2; ++a)
        for (unsigned b = 0; b < 2; ++b)
            for (unsigned x = 0; x < 2; ++x)
                for (unsigned y = 0; y < 2; ++y)
                    f += trace_product(normalized_entry(reference, a, b, x, y), s(a, b, x, y)).real();
    return f;
}

LhsBound lhs_bound(const Assemblage &reference) {
    LhsBound best;
    best.value = -1;
    for (unsigned fi = 0; fi < 4; ++fi)
        for (unsigned gi = 0; gi < 4; ++gi) {
            const std::array<unsigned, 2> f{fi & 1u, (fi >> 1) & 1u}, g{gi & 1u, (gi >> 1) & 1u};
            HermOp m = HermOp::zero(2);
            for (unsigned x = 0; x < 2; ++x)
                for (unsigned y = 0; y < 2; ++y) m += normalized_entry(reference, f[x], g[y], x, y);
            const double v = eig_max_hermitian(m);
            if (v > best.value + 1e-14) {
                best.value = v;
                best.f = f;
                best.g = g;
                best.matrix = m;
            }
        }
    best.state = top_eigenvector(best.matrix);
    return best;
}

Assemblage lhs_optimal_assemblage(const Assemblage &reference) {
    const auto lb = lhs_bound(reference);
    return lhs_deterministic(lb.f, lb.g, HermOp::projector(lb.state));
}

Assemblage RankOneAssemblage::to_assemblage() const {
    Assemblage s;
    for (std::size_t i = 0; i < 16; ++i) {
        if (weights[i] < 0) throw ValidationError("weights must be nonnegative");
        if (weights[i] == 0) continue;
        if (states[i].size() != 2) throw ValidationError("rank-one entries need a qubit state");
        const double nrm = std::norm(states[i][0]) + std::norm(states[i][1]);
        s.entries()[i] = HermOp::projector(states[i]) * (weights[i] / nrm);
    }
    return s;
}

RankOneAssemblage to_rank_one(const Assemblage &s, double tol) {
    RankOneAssemblage r;
    for (std::size_t i = 0; i < 16; ++i) {
        const HermOp &e = s.entries()[i];
        const auto ev = eigvals_hermitian(e);
        if (ev[0] > tol) throw ValidationError("entry " + std::to_string(i) + " has rank two");
        const double t = e.trace().real();
        if (t <= tol) continue;
        r.weights[i] = t;
        r.states[i] = top_eigenvector(e);
    }
    return r;
}

InflexibilityReport inflexibility(const RankOneAssemblage &s) {
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < 16; ++i)
        if (s.weights[i] > Assemblage::kTol) support.push_back(i);
    std::array<HermOp, 16> psi;
    for (std::size_t i : support) {
        const auto &v = s.states[i];
        if (v.size() != 2) throw ValidationError("rank-one entries need a qubit state");
        psi[i] = HermOp::projector(v) * (1 / (std::norm(v[0]) + std::norm(v[1])));
    }
    // Each operator equality contributes four real rows.
    std::vector<std::vector<double>> rows;
    auto add_equality = [&](const std::vector<std::pair<std::size_t, double>> &terms) {
        std::array<std::vector<double>, 4> r;
        for (auto &v : r) v.assign(support.size(), 0.0);
        for (std::size_t k = 0; k < support.size(); ++k)
            for (const auto &[i, sign] : terms) {
                if (i != support[k]) continue;
                r[0][k] += sign * psi[i](0, 0).real();
                r[1][k] += sign * psi[i](1, 1).real();
                r[2][k] += sign * psi[i](0, 1).real();
                r[3][k] += sign * psi[i](0, 1).imag();
            }
        for (auto &v : r) rows.push_back(std::move(v));
    };
    for (unsigned o = 0; o < 2; ++o)
        for (unsigned z = 0; z < 2; ++z) {
            add_equality({{Assemblage::index(0, o, 0, z), 1},
                          {Assemblage::index(1, o, 0, z), 1},
                          {Assemblage::index(0, o, 1, z), -1},
                          {Assemblage::index(1, o, 1, z), -1}});
            add_equality({{Assemblage::index(o, 0, z, 0), 1},
                          {Assemblage::index(o, 1, z, 0), 1},
                          {Assemblage::index(o, 0, z, 1), -1},
                          {Assemblage::index(o, 1, z, 1), -1}});
        }
    for (unsigned x = 0; x < 2; ++x)
        for (unsigned y = 0; y < 2; ++y) {
            std::vector<double> r(support.size(), 0.0);
            for (std::size_t k = 0; k < support.size(); ++k) {
                const std::size_t i = support[k];
                if ((i >> 1 & 1u) == x && (i & 1u) == y) r[k] = 1;
            }
            rows.push_back(std::move(r));
        }
    InflexibilityReport rep;
    rep.unknowns = support.size();
    if (!support.empty()) {
        RealMatrix m(rows.size(), support.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < support.size(); ++j) m(i, j) = rows[i][j];
        rep.rank = numerical_rank(m, 1e-9);
    }
    rep.inflexible = rep.rank == rep.unknowns;
    return rep;
}

bool check_inflexible(const RankOneAssemblage &s) { return inflexibility(s).inflexible; }

// ---------------------------------------------------------------------------

SequentialAssemblage::SequentialAssemblage(unsigned n) : n_(n) {
    if (n < 1 || n > kMaxTimes) throw ValidationError("sequential assemblages support 1 to 3 times");
    entries_.assign(std::size_t{1} << (4 * n), HermOp::zero(dim()));
}

double SequentialAssemblage::max_abs_diff(const SequentialAssemblage &o) const {
    if (o.n_ != n_) throw ValidationError("sequential assemblages differ in length");
    double m = 0;
    for (std::size_t i = 0; i < entries_.size(); ++i) m = std::max(m, entries_[i].max_abs_diff(o.entries_[i]));
    return m;
}

ValidityReport check_sequential_ns(const SequentialAssemblage &s, double tol) {
    ValidityReport rep;
    const unsigned n = s.times();
    const std::uint32_t k = static_cast<std::uint32_t>(s.dim());
    auto str = [&](std::uint32_t a, std::uint32_t b, std::uint32_t x, std::uint32_t y) {
        return "(a=" + std::to_string(a) + ", b=" + std::to_string(b) + " | x=" + std::to_string(x) +
               ", y=" + std::to_string(y) + ")";
    };
    for (std::uint32_t a = 0; a < k; ++a)
        for (std::uint32_t b = 0; b < k; ++b)
            for (std::uint32_t x = 0; x < k; ++x)
                for (std::uint32_t y = 0; y < k; ++y) check_entry(rep, s(a, b, x, y), tol, str(a, b, x, y));

    std::vector<HermOp> total(std::size_t{k} * k, HermOp::zero(k));
    for (std::uint32_t x = 0; x < k; ++x)
        for (std::uint32_t y = 0; y < k; ++y)
            for (std::uint32_t a = 0; a < k; ++a)
                for (std::uint32_t b = 0; b < k; ++b) total[x * k + y] += s(a, b, x, y);
    note(rep, std::abs(total[0].trace().real() - 1.0), tol, "total state trace");
    for (std::size_t i = 1; i < total.size(); ++i)
        note(rep, total[i].max_abs_diff(total[0]), tol, "total state depends on settings");

    // Summing the outcomes after time c must leave no dependence on the
    // settings after time c, for each party.
    for (unsigned c = 0; c < n; ++c) {
        const unsigned tail = n - c;
        const std::uint32_t tail_mask = (1u << tail) - 1;
        for (std::uint32_t head = 0; head < (1u << c); ++head)
            for (std::uint32_t other = 0; other < k; ++other)
                for (std::uint32_t x = 0; x < k; ++x)
                    for (std::uint32_t y = 0; y < k; ++y) {
                        const std::uint32_t x0 = x & ~tail_mask, y0 = y & ~tail_mask;
                        HermOp sa = HermOp::zero(k), sa0 = HermOp::zero(k);
                        HermOp sb = HermOp::zero(k), sb0 = HermOp::zero(k);
                        for (std::uint32_t t = 0; t <= tail_mask; ++t) {
                            const std::uint32_t full = (head << tail) | t;
                            if (x != x0) {
                                sa += s(full, other, x, y);
                                sa0 += s(full, other, x0, y);
                            }
                            if (y != y0) {
                                sb += s(other, full, x, y);
                                sb0 += s(other, full, x, y0);
                            }
                        }
                        if (x != x0)
                            note(rep, sa.max_abs_diff(sa0), tol,
                                 "Alice marginal after time " + std::to_string(c) + " depends on later x at " +
                                     str(head, other, x, y));
                        if (y != y0)
                            note(rep, sb.max_abs_diff(sb0), tol,
                                 "Bob marginal after time " + std::to_string(c) + " depends on later y at " +
                                     str(other, head, x, y));
                    }
    }
    return rep;
}

bool is_sequential_ns(const SequentialAssemblage &s, double tol) { return check_sequential_ns(s, tol).valid; }

SequentialAssemblage as_sequential(const Assemblage &s) {
    SequentialAssemblage out(1);
    for (std::size_t i = 0; i < 16; ++i) out.entries()[i] = s.entries()[i];
    return out;
}

SequentialAssemblage sequential_product(std::span<const Assemblage> factors) {
    const unsigned n = static_cast<unsigned>(factors.size());
    SequentialAssemblage out(n);
    const std::uint32_t k = static_cast<std::uint32_t>(out.dim());
    for (std::uint32_t a = 0; a < k; ++a)
        for (std::uint32_t b = 0; b < k; ++b)
            for (std::uint32_t x = 0; x < k; ++x)
                for (std::uint32_t y = 0; y < k; ++y) {
                    HermOp op = factors[0](time_bit(a, 1, n), time_bit(b, 1, n), time_bit(x, 1, n), time_bit(y, 1, n));
                    for (unsigned t = 2; t <= n; ++t)
                        op = tensor(op, factors[t - 1](time_bit(a, t, n), time_bit(b, t, n), time_bit(x, t, n),
                                                       time_bit(y, t, n)));
                    out(a, b, x, y) = std::move(op);
                }
    return out;
}

SequentialAssemblage mix(const SequentialAssemblage &p, const SequentialAssemblage &q, double w) {
    if (p.times() != q.times()) throw ValidationError("sequential assemblages differ in length");
    if (!(w >= 0 && w <= 1)) throw ValidationError("mixing weight must lie in [0, 1]");
    SequentialAssemblage out(p.times());
    for (std::size_t i = 0; i < out.entries().size(); ++i) out.entries()[i] = p.entries()[i] * w + q.entries()[i] * (1 - w);
    return out;
}

double steering_F_n(std::span<const Assemblage> references, const SequentialAssemblage &s) {
    const unsigned n = s.times();
    if (references.size() != n) throw ValidationError("need one reference per time");
    const std::uint32_t k = static_cast<std::uint32_t>(s.dim());
    double f = 0;
    for (std::uint32_t a = 0; a < k; ++a)
        for (std::uint32_t b = 0; b < k; ++b)
            for (std::uint32_t x = 0; x < k; ++x)
                for (std::uint32_t y = 0; y < k; ++y) {
                    HermOp tau = normalized_entry(references[0], time_bit(a, 1, n), time_bit(b, 1, n),
                                                  time_bit(x, 1, n), time_bit(y, 1, n));
                    for (unsigned t = 2; t <= n; ++t)
                        tau = tensor(tau, normalized_entry(references[t - 1], time_bit(a, t, n), time_bit(b, t, n),
                                                           time_bit(x, t, n), time_bit(y, t, n)));
                    f += trace_product(tau, s(a, b, x, y)).real();
                }
    return f;
}

Assemblage SubAssemblage::normalized() const {
    if (zero_weight) throw ValidationError("prefix has zero weight");
    std::array<HermOp, 16> e;
    for (std::size_t i = 0; i < 16; ++i) e[i] = unnormalized.entries()[i] * (1 / weight);
    return Assemblage(std::move(e));
}

SubAssemblage conditional_subassemblage(const SequentialAssemblage &s, std::uint32_t a, std::uint32_t b,
                                        std::uint32_t x, std::uint32_t y) {
    const unsigned n = s.times();
    const std::uint32_t lim = 1u << (n - 1);
    if (a >= lim || b >= lim || x >= lim || y >= lim) throw ValidationError("prefix strings must have n-1 bits");
    const std::size_t lead = std::size_t{1} << (n - 1);
    SubAssemblage out;
    std::array<HermOp, 16> e;
    for (unsigned an = 0; an < 2; ++an)
        for (unsigned bn = 0; bn < 2; ++bn)
            for (unsigned xn = 0; xn < 2; ++xn)
                for (unsigned yn = 0; yn < 2; ++yn) {
                    const HermOp &op = s((a << 1) | an, (b << 1) | bn, (x << 1) | xn, (y << 1) | yn);
                    e[Assemblage::index(an, bn, xn, yn)] = n == 1 ? op : partial_trace_leading(op, lead);
                }
    out.unnormalized = Assemblage(std::move(e));
    for (unsigned an = 0; an < 2; ++an)
        for (unsigned bn = 0; bn < 2; ++bn) out.weight += out.unnormalized.prob(an, bn, 0, 0);
    out.zero_weight = out.weight <= kZeroTrace;
    return out;
}

Assemblage time_marginal(const SequentialAssemblage &s, unsigned t, std::uint32_t x_rest, std::uint32_t y_rest) {
    const unsigned n = s.times();
    if (t < 1 || t > n) throw ValidationError("time index out of range");
    const std::uint32_t k = static_cast<std::uint32_t>(s.dim());
    const std::uint32_t bit = 1u << (n - t);
    Assemblage out;
    for (unsigned xt = 0; xt < 2; ++xt)
        for (unsigned yt = 0; yt < 2; ++yt) {
            const std::uint32_t x = xt ? (x_rest | bit) : (x_rest & ~bit);
            const std::uint32_t y = yt ? (y_rest | bit) : (y_rest & ~bit);
            for (std::uint32_t a = 0; a < k; ++a)
                for (std::uint32_t b = 0; b < k; ++b)
                    out(time_bit(a, t, n), time_bit(b, t, n), xt, yt) += keep_register(s(a, b, x, y), n, t);
        }
    return out;
}

// ---------------------------------------------------------------------------

std::vector<Complex> random_pure_state(std::size_t dim, Rng &rng) {
    std::normal_distribution<double> g;
    std::vector<Complex> v(dim);
    double nrm = 0;
    for (auto &c : v) {
        c = {g(rng), g(rng)};
        nrm += std::norm(c);
    }
    for (auto &c : v) c /= std::sqrt(nrm);
    return v;
}

Assemblage random_lhs_assemblage(Rng &rng) {
    const unsigned terms = 1 + static_cast<unsigned>(rng() % 4);
    std::vector<double> w(terms);
    double tot = 0;
    for (auto &v : w) tot += (v = rng.uniform() + 1e-3);
    Assemblage out;
    for (unsigned i = 0; i < terms; ++i) {
        const std::uint64_t r = rng();
        const std::array<unsigned, 2> f{unsigned(r & 1), unsigned(r >> 1 & 1)}, g{unsigned(r >> 2 & 1), unsigned(r >> 3 & 1)};
        const auto v = random_pure_state(2, rng);
        const Assemblage vert = lhs_deterministic(f, g, HermOp::projector(v));
        for (std::size_t j = 0; j < 16; ++j)
            out.entries()[j] += vert.entries()[j] * (w[i] / tot);
    }
    return out;
}

SequentialAssemblage random_sequential_lhs(unsigned n, Rng &rng) {
    SequentialAssemblage out(n);
    const std::uint32_t k = static_cast<std::uint32_t>(out.dim());
    // resp[t][prefix of settings up to t] for each party.
    std::vector<std::vector<unsigned>> ra(n + 1), rb(n + 1);
    for (unsigned t = 1; t <= n; ++t) {
        for (std::uint32_t p = 0; p < (1u << t); ++p) {
            ra[t].push_back(static_cast<unsigned>(rng() & 1));
            rb[t].push_back(static_cast<unsigned>(rng() & 1));
        }
    }
    const HermOp phi = HermOp::projector(random_pure_state(k, rng));
    for (std::uint32_t x = 0; x < k; ++x)
        for (std::uint32_t y = 0; y < k; ++y) {
            std::uint32_t a = 0, b = 0;
            for (unsigned t = 1; t <= n; ++t) {
                a = (a << 1) | ra[t][x >> (n - t)];
                b = (b << 1) | rb[t][y >> (n - t)];
            }
            out(a, b, x, y) = phi;
        }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::json ops_to_json(std::span<const HermOp> ops) {
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (const auto &op : ops) {
        nlohmann::json r = nlohmann::json::array(), i = nlohmann::json::array();
        for (const auto &c : op.entries()) {
            r.push_back(c.real());
            i.push_back(c.imag());
        }
        re.push_back(std::move(r));
        im.push_back(std::move(i));
    }
    return {{"re", re}, {"im", im}};
}

std::vector<HermOp> ops_from_json(const nlohmann::json &j, std::size_t count, std::size_t dim) {
    if (!j.contains("re") || !j.contains("im")) throw ValidationError("assemblage needs 're' and 'im'");
    const auto &re = j.at("re");
    const auto &im = j.at("im");
    if (!re.is_array() || !im.is_array() || re.size() != count || im.size() != count)
        throw ValidationError("assemblage needs " + std::to_string(count) + " entries");
    std::vector<HermOp> out;
    for (std::size_t e = 0; e < count; ++e) {
        if (!re[e].is_array() || !im[e].is_array() || re[e].size() != dim * dim || im[e].size() != dim * dim)
            throw ValidationError("entry " + std::to_string(e) + " has the wrong size");
        std::vector<Complex> v(dim * dim);
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!re[e][i].is_number() || !im[e][i].is_number()) throw ValidationError("entries must be numbers");
            v[i] = {re[e][i].get<double>(), im[e][i].get<double>()};
        }
        out.emplace_back(dim, std::move(v));
    }
    return out;
}

void reject_unknown(const nlohmann::json &j, std::initializer_list<const char *> keys) {
    if (!j.is_object()) throw ValidationError("expected a JSON object");
    for (const auto &[k, v] : j.items())
        if (std::none_of(keys.begin(), keys.end(), [&](const char *s) { return k == s; }))
            throw ValidationError("unknown key '" + k + "'");
}

}  // namespace

nlohmann::json to_json(const Assemblage &s) { return ops_to_json(s.entries()); }

Assemblage assemblage_from_json(const nlohmann::json &j) {
    reject_unknown(j, {"re", "im"});
    auto ops = ops_from_json(j, 16, 2);
    std::array<HermOp, 16> e;
    std::move(ops.begin(), ops.end(), e.begin());
    return Assemblage(std::move(e));
}

nlohmann::json to_json(const SequentialAssemblage &s) {
    auto j = ops_to_json(s.entries());
    j["n"] = s.times();
    return j;
}

SequentialAssemblage sequential_from_json(const nlohmann::json &j) {
    reject_unknown(j, {"n", "re", "im"});
    if (!j.contains("n") || !j.at("n").is_number_unsigned()) throw ValidationError("'n' must be 1, 2 or 3");
    const unsigned n = j.at("n").get<unsigned>();
    SequentialAssemblage out(n);
    out.entries() = ops_from_json(j, out.entries().size(), out.dim());
    return out;
}

}  // namespace weakrand

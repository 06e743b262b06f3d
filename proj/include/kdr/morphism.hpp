#pragma once

// Morphisms of based charts over a common base: a variable map w (base
// variables fixed) together with a matrix h expressing the pullback of the
// target relations over the source relations, w*(f_i) = sum_k h[i][k] f'_k.
// The induced algebra map sends xi_i to sum h[i][k] xi'_k and eta_i to
// sum h[i][k] eta'_k + sum dh[i][k] xi'_k.

#include <utility>

#include "kd_algebra.hpp"

namespace kdr {

struct ChartMorphism {
    Chart target;  // chart being pulled back from
    Chart source;
    std::vector<Polynomial> w;               // per target ring variable, over source ring
    std::vector<std::vector<Polynomial>> h;  // target.l() x source.l(), over source ring

    Polynomial pull_poly(const Polynomial& p) const {
        return p.substitute(source.ring, w);
    }
};

inline void validate_morphism(const ChartMorphism& mor) {
    if (mor.w.size() != mor.target.ring->nvars())
        throw std::invalid_argument("morphism: w arity mismatch");
    for (int b = 0; b < mor.target.k(); ++b) {
        int ti = mor.target.m() + b;
        int si = mor.source.ring->index_of(mor.target.base_vars[b]);
        if (si < 0 || !(mor.w[ti] == Polynomial::variable(mor.source.ring, si)))
            throw std::invalid_argument("morphism: base variables must map identically");
    }
    for (int i = 0; i < mor.target.l(); ++i) {
        Polynomial lhs = mor.pull_poly(mor.target.f[i]);
        Polynomial rhs(mor.source.ring);
        for (int k = 0; k < mor.source.l(); ++k) rhs += mor.h[i][k] * mor.source.f[k];
        if (!(lhs == rhs))
            throw std::invalid_argument("morphism: defining identity fails at f_" + std::to_string(i + 1));
    }
}

inline ChartMorphism identity_morphism(const Chart& c) {
    ChartMorphism m;
    m.target = c;
    m.source = c;
    for (size_t i = 0; i < c.ring->nvars(); ++i)
        m.w.push_back(Polynomial::variable(c.ring, static_cast<int>(i)));
    m.h.assign(c.l(), std::vector<Polynomial>(c.l(), Polynomial(c.ring)));
    for (int i = 0; i < c.l(); ++i) m.h[i][i] = Polynomial::constant(c.ring, Rational(1));
    return m;
}

// (m_outer: B -> A pulled data) then (m_inner: C -> B): composite pulls A to C.
inline ChartMorphism compose_morphisms(const ChartMorphism& outer, const ChartMorphism& inner) {
    if (!(*outer.source.ring == *inner.target.ring))
        throw std::invalid_argument("compose_morphisms: chain mismatch");
    ChartMorphism m;
    m.target = outer.target;
    m.source = inner.source;
    for (auto& wi : outer.w) m.w.push_back(inner.pull_poly(wi));
    m.h.assign(outer.target.l(), std::vector<Polynomial>(inner.source.l(), Polynomial(inner.source.ring)));
    for (int i = 0; i < outer.target.l(); ++i)
        for (int k = 0; k < outer.source.l(); ++k) {
            Polynomial hik = inner.pull_poly(outer.h[i][k]);
            if (hik.is_zero()) continue;
            for (int t = 0; t < inner.source.l(); ++t)
                m.h[i][t] += hik * inner.h[k][t];
        }
    return m;
}

inline bool morphism_equal(const ChartMorphism& a, const ChartMorphism& b) {
    if (a.w.size() != b.w.size() || a.h.size() != b.h.size()) return false;
    for (size_t i = 0; i < a.w.size(); ++i)
        if (!(a.w[i] == b.w[i])) return false;
    for (size_t i = 0; i < a.h.size(); ++i) {
        if (a.h[i].size() != b.h[i].size()) return false;
        for (size_t j = 0; j < a.h[i].size(); ++j)
            if (!(a.h[i][j] == b.h[i][j])) return false;
    }
    return true;
}

// Functorial pullback on algebra elements. Caches the images of the
// generators of the target algebra.
class Pullback {
public:
    Pullback(ChartMorphism mor, KDContextPtr src_ctx, KDContextPtr tgt_ctx)
        : mor_(std::move(mor)), src_(std::move(src_ctx)), tgt_(std::move(tgt_ctx)) {
        int sm = src_->m();
        for (int j = 0; j < tgt_->m(); ++j) {
            KDElement d = src_->zero();
            for (int r = 0; r < sm; ++r) {
                Polynomial c = mor_.w[j].derivative(r);
                if (!c.is_zero()) d += kd_mul(src_->from_poly(c), src_->dz(r));
            }
            dw_.push_back(d);
        }
        for (int i = 0; i < tgt_->l(); ++i) {
            KDElement hx = src_->zero();
            KDElement he = src_->zero();
            for (int k = 0; k < src_->l(); ++k) {
                const Polynomial& hik = mor_.h[i][k];
                if (hik.is_zero()) continue;
                hx += kd_mul(src_->from_poly(hik), src_->xi(k));
                he += kd_mul(src_->from_poly(hik), src_->eta(k));
                for (int r = 0; r < sm; ++r) {
                    Polynomial c = hik.derivative(r);
                    if (c.is_zero()) continue;
                    he += kd_mul(kd_mul(src_->from_poly(c), src_->dz(r)), src_->xi(k));
                }
            }
            hxi_.push_back(hx);
            heta_.push_back(he);
        }
    }

    const KDContextPtr& source_ctx() const { return src_; }
    const KDContextPtr& target_ctx() const { return tgt_; }
    const ChartMorphism& morphism() const { return mor_; }

    KDElement operator()(const KDElement& e) const {
        if (e.ctx().get() != tgt_.get()) throw std::invalid_argument("pullback: chart mismatch");
        KDElement out = src_->zero();
        for (auto& [k, c] : e.terms()) {
            Polynomial mono = Polynomial::monomial(tgt_->ring(), k.mono, c);
            KDElement acc = src_->from_poly(mor_.pull_poly(mono));
            for (uint32_t rest = k.wedge; rest && !acc.is_zero();) {
                int j = std::countr_zero(rest);
                rest &= rest - 1;
                acc = kd_mul(acc, dw_[j]);
            }
            for (uint32_t rest = k.xi; rest && !acc.is_zero();) {
                int i = std::countr_zero(rest);
                rest &= rest - 1;
                acc = kd_mul(acc, hxi_[i]);
            }
            for (int i = 0; i < tgt_->l() && !acc.is_zero(); ++i)
                for (int t = 0; t < k.eta[i]; ++t) acc = kd_mul(acc, heta_[i]);
            out += acc;
        }
        return out;
    }

private:
    ChartMorphism mor_;
    KDContextPtr src_, tgt_;
    std::vector<KDElement> dw_;    // pullback of dz_j
    std::vector<KDElement> hxi_;   // pullback of xi_i
    std::vector<KDElement> heta_;  // pullback of eta_i
};

inline KDElement pullback_diamond(const ChartMorphism& mor, const KDContextPtr& src_ctx,
                                  const KDContextPtr& tgt_ctx, const KDElement& e) {
    return Pullback(mor, src_ctx, tgt_ctx)(e);
}

struct ReductionResult {
    Chart reduced;
    ChartMorphism morphism;  // target = original, source = reduced
    int eliminated_var = -1; // fiber index in the original chart
};

// Eliminates relation f_i by solving a fiber variable it is linear in with
// a constant unit coefficient. Works globally on the polynomial chart, so
// this is stricter than a pointwise test; reports when a variable is only
// eliminable modulo the other relations. want_var >= 0 pins the variable.
inline ReductionResult reduction_step(const Chart& chart, int i, int want_var = -1) {
    if (i < 0 || i >= chart.l()) throw std::out_of_range("reduction_step: relation index");
    const Polynomial& fi = chart.f[i];
    int var = -1;
    Rational coeff;
    for (int j = 0; j < chart.m(); ++j) {
        if (want_var >= 0 && j != want_var) continue;
        Polynomial d = fi.derivative(j);
        if (!d.is_zero() && d.is_constant()) { var = j; coeff = d.constant_value(); break; }
    }
    if (var < 0) {
        std::vector<Polynomial> others;
        for (int r = 0; r < chart.l(); ++r)
            if (r != i) others.push_back(chart.f[r]);
        auto gb = groebner_basis(others);
        for (int j = 0; j < chart.m(); ++j) {
            Polynomial nf = normal_form(fi.derivative(j), gb);
            if (!nf.is_zero() && nf.is_constant())
                throw std::runtime_error(
                    "reduction_step: df_" + std::to_string(i + 1) +
                    " has a unit dz-coefficient only modulo the other relations; "
                    "not polynomially solvable");
        }
        throw std::runtime_error("reduction_step: df_" + std::to_string(i + 1) +
                                 " is not part of a free basis (no constant dz-coefficient)");
    }

    Polynomial h = fi - Polynomial::variable(chart.ring, var) * coeff;
    // reduced ring drops the solved variable
    Chart red;
    red.fiber_vars = chart.fiber_vars;
    red.fiber_vars.erase(red.fiber_vars.begin() + var);
    red.base_vars = chart.base_vars;
    std::vector<std::string> vars = red.fiber_vars;
    vars.insert(vars.end(), red.base_vars.begin(), red.base_vars.end());
    red.ring = make_ring(vars);
    std::vector<Polynomial> images;  // old ring -> reduced ring
    {
        Polynomial sol(red.ring);
        // z_var = -h / coeff, written over the reduced ring
        for (auto& [e, c] : h.terms()) {
            if (e[var] != 0) throw std::logic_error("reduction_step: solve failed");
            ExpVec e2;
            for (size_t t = 0; t < e.size(); ++t)
                if (static_cast<int>(t) != var) e2.push_back(e[t]);
            sol.add_term(e2, -(c / coeff));
        }
        for (size_t t = 0; t < chart.ring->nvars(); ++t) {
            if (static_cast<int>(t) == var) { images.push_back(sol); continue; }
            int idx = red.ring->index_of(chart.ring->vars[t]);
            images.push_back(Polynomial::variable(red.ring, idx));
        }
    }
    for (auto& q : chart.phi) red.phi.push_back(q.substitute(red.ring, images));
    for (int r = 0; r < chart.l(); ++r) {
        if (r == i) continue;
        red.f.push_back(chart.f[r].substitute(red.ring, images));
    }
    red.label = chart.label + "'";
    red.expected_codim = chart.codim_declared() - 1;

    ChartMorphism mor;
    mor.target = chart;
    mor.source = red;
    mor.w = images;
    mor.h.assign(chart.l(), std::vector<Polynomial>(red.l(), Polynomial(red.ring)));
    int pos = 0;
    for (int r = 0; r < chart.l(); ++r) {
        if (r == i) continue;
        mor.h[r][pos] = Polynomial::constant(red.ring, Rational(1));
        ++pos;
    }
    validate_morphism(mor);
    ReductionResult res;
    res.reduced = std::move(red);
    res.morphism = std::move(mor);
    res.eliminated_var = var;
    return res;
}

} // namespace kdr

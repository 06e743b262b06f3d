#pragma once

// The bigraded differential algebra of a based chart, generated over the
// relative forms by odd xi_1..xi_l and even eta_1..eta_l.
//
// Term layout and sign conventions (fixed once, everything is tested
// against them):
//   * canonical word order: dz factors ascending, then xi factors
//     ascending, then eta powers; reordering multiplies by the permutation
//     sign of the odd factors (dz's and xi's odd, eta's and functions even).
//   * parity(term) = (|wedge| + |xi|) mod 2.
//   * all four differentials act as odd derivations:
//     D(ab) = D(a) b + (-1)^{parity(a)} a D(b).
//   * koszul:  xi_i -> f_i,   eta_i -> -df_i   (df relative: dt = 0)
//     derham:  functions -> relative exterior derivative, xi_i -> eta_i
//     partial: xi_i -> f_i,   eta_i -> 0
//     tilde:   xi_i -> 0,     eta_i -> -df_i   (so partial + tilde = koszul)
//   * bidegree: deg_DR = |wedge| + |eta|, deg_K = |xi| + |eta|.

#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

#include "chart.hpp"

namespace kdr {

enum class Diff { Koszul, DeRham, Partial, Tilde };

inline int popcount32(uint32_t x) { return std::popcount(x); }

// sign of merging two ascending odd words, 0 if they overlap
inline int merge_sign(uint32_t a, uint32_t b) {
    if (a & b) return 0;
    int inv = 0;
    for (uint32_t rest = b; rest;) {
        int j = std::countr_zero(rest);
        rest &= rest - 1;
        inv += popcount32(a >> (j + 1));
    }
    return (inv % 2) ? -1 : 1;
}

struct KDKey {
    ExpVec mono;
    uint32_t wedge = 0;
    uint32_t xi = 0;
    ExpVec eta;

    bool operator<(const KDKey& o) const {
        if (wedge != o.wedge) return wedge < o.wedge;
        if (xi != o.xi) return xi < o.xi;
        if (eta != o.eta) return eta < o.eta;
        return mono < o.mono;
    }
    bool operator==(const KDKey& o) const {
        return wedge == o.wedge && xi == o.xi && eta == o.eta && mono == o.mono;
    }
    int deg_dr() const { return popcount32(wedge) + total_degree(eta); }
    int deg_k() const { return popcount32(xi) + total_degree(eta); }
    int parity() const { return (popcount32(wedge) + popcount32(xi)) & 1; }
};

class KDContext;
using KDContextPtr = std::shared_ptr<const KDContext>;

class KDElement {
public:
    KDElement() = default;
    explicit KDElement(KDContextPtr ctx) : ctx_(std::move(ctx)) {}

    const KDContextPtr& ctx() const { return ctx_; }
    const std::map<KDKey, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const KDKey& k, const Rational& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(k);
        if (it == terms_.end()) terms_.emplace(k, c);
        else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    KDElement operator+(const KDElement& o) const {
        KDElement r = *this;
        if (!r.ctx_) r.ctx_ = o.ctx_;
        for (auto& [k, c] : o.terms_) r.add_term(k, c);
        return r;
    }
    KDElement operator-(const KDElement& o) const {
        KDElement r = *this;
        if (!r.ctx_) r.ctx_ = o.ctx_;
        for (auto& [k, c] : o.terms_) r.add_term(k, -c);
        return r;
    }
    KDElement operator-() const {
        KDElement r(ctx_);
        for (auto& [k, c] : terms_) r.terms_.emplace(k, -c);
        return r;
    }
    KDElement& operator+=(const KDElement& o) { *this = *this + o; return *this; }
    KDElement& operator-=(const KDElement& o) { *this = *this - o; return *this; }
    bool operator==(const KDElement& o) const { return terms_ == o.terms_; }

    KDElement scaled(const Rational& c) const {
        KDElement r(ctx_);
        if (c.is_zero()) return r;
        for (auto& [k, q] : terms_) r.terms_.emplace(k, q * c);
        return r;
    }

private:
    KDContextPtr ctx_;
    std::map<KDKey, Rational> terms_;
};

struct KDCompSym {
    uint32_t wedge = 0;
    uint32_t xi = 0;
    ExpVec eta;
    bool operator<(const KDCompSym& o) const {
        if (wedge != o.wedge) return wedge < o.wedge;
        if (xi != o.xi) return xi < o.xi;
        return eta < o.eta;
    }
};

struct OpMatrix {
    int rows = 0, cols = 0;
    std::vector<std::vector<Polynomial>> a;  // rows x cols
};

class KDContext : public std::enable_shared_from_this<KDContext> {
public:
    Chart chart;
    std::vector<std::vector<Polynomial>> df;  // df[i][j] = d f_i / d z_j (fiber only)

    static KDContextPtr build(Chart c) {
        if (c.m() > 30 || c.l() > 30) throw std::invalid_argument("build_algebra: too many generators");
        for (size_t i = 0; i < c.ring->nvars(); ++i)
            for (size_t j = i + 1; j < c.ring->nvars(); ++j)
                if (c.ring->vars[i] == c.ring->vars[j])
                    throw std::invalid_argument("build_algebra: duplicate variable name '" +
                                                c.ring->vars[i] + "'");
        auto ctx = std::make_shared<KDContext>();
        ctx->chart = std::move(c);
        for (auto& fi : ctx->chart.f) {
            std::vector<Polynomial> row;
            for (int j = 0; j < ctx->chart.m(); ++j) row.push_back(fi.derivative(j));
            ctx->df.push_back(std::move(row));
        }
        return ctx;
    }

    int m() const { return chart.m(); }
    int l() const { return chart.l(); }
    const RingPtr& ring() const { return chart.ring; }

    KDElement zero() const { return KDElement(shared_from_this()); }
    KDElement one() const { return from_poly(Polynomial::constant(ring(), Rational(1))); }
    KDElement from_poly(const Polynomial& p) const {
        KDElement e(shared_from_this());
        for (auto& [ex, c] : p.terms()) {
            KDKey k;
            k.mono = ex;
            k.eta.assign(l(), 0);
            e.add_term(k, c);
        }
        return e;
    }
    KDElement xi(int i) const {
        check_index(i, l());
        KDKey k;
        k.mono.assign(ring()->nvars(), 0);
        k.xi = 1u << i;
        k.eta.assign(l(), 0);
        KDElement e(shared_from_this());
        e.add_term(k, Rational(1));
        return e;
    }
    KDElement eta(int i) const {
        check_index(i, l());
        KDKey k;
        k.mono.assign(ring()->nvars(), 0);
        k.eta.assign(l(), 0);
        k.eta[i] = 1;
        KDElement e(shared_from_this());
        e.add_term(k, Rational(1));
        return e;
    }
    KDElement dz(int j) const {
        check_index(j, m());
        KDKey k;
        k.mono.assign(ring()->nvars(), 0);
        k.wedge = 1u << j;
        k.eta.assign(l(), 0);
        KDElement e(shared_from_this());
        e.add_term(k, Rational(1));
        return e;
    }

    // graded commutative product with canonical sign normalization
    KDElement mul(const KDElement& a, const KDElement& b) const {
        KDElement r(shared_from_this());
        for (auto& [ka, ca] : a.terms())
            for (auto& [kb, cb] : b.terms()) {
                if (ka.wedge & kb.wedge) continue;
                if (ka.xi & kb.xi) continue;
                int sgn = merge_sign(ka.wedge, kb.wedge) * merge_sign(ka.xi, kb.xi);
                if ((popcount32(kb.wedge) * popcount32(ka.xi)) & 1) sgn = -sgn;
                KDKey k;
                k.wedge = ka.wedge | kb.wedge;
                k.xi = ka.xi | kb.xi;
                k.mono = ka.mono;
                for (size_t t = 0; t < k.mono.size(); ++t) k.mono[t] += kb.mono[t];
                k.eta = ka.eta;
                for (size_t t = 0; t < k.eta.size(); ++t) k.eta[t] += kb.eta[t];
                Rational c = ca * cb * Rational(sgn);
                r.add_term(k, c);
            }
        return r;
    }

    KDElement apply_diff(const KDElement& e, Diff which) const {
        KDElement out(shared_from_this());
        for (auto& [k, c] : e.terms()) {
            if (which == Diff::Koszul || which == Diff::Partial) diff_xi_to_f(k, c, out);
            if (which == Diff::Koszul || which == Diff::Tilde) diff_eta_to_mdf(k, c, out);
            if (which == Diff::DeRham) {
                diff_coefficient(k, c, out);
                diff_xi_to_eta(k, c, out);
            }
        }
        return out;
    }

    // ordered basis of the free O_W-module K^{p,s}
    std::vector<KDCompSym> component_basis(int p, int s) const {
        std::vector<KDCompSym> out;
        if (p < 0 || s < 0) return out;
        for (int a = 0; a <= std::min(p, s); ++a) {
            int wsize = p - a, xsize = s - a;
            if (wsize > m() || xsize > l()) continue;
            std::vector<uint32_t> wedges = masks_of_size(m(), wsize);
            std::vector<uint32_t> xis = masks_of_size(l(), xsize);
            std::vector<ExpVec> etas = compositions(l(), a);
            for (uint32_t w : wedges)
                for (uint32_t x : xis)
                    for (auto& eb : etas) out.push_back(KDCompSym{w, x, eb});
        }
        return out;
    }

    // coordinates of a bihomogeneous element in the (p,s) basis
    std::vector<Polynomial> expand(const KDElement& e, int p, int s) const {
        auto basis = component_basis(p, s);
        std::map<KDCompSym, int> index;
        for (size_t i = 0; i < basis.size(); ++i) index[basis[i]] = static_cast<int>(i);
        std::vector<Polynomial> out(basis.size(), Polynomial(ring()));
        for (auto& [k, c] : e.terms()) {
            KDCompSym sym{k.wedge, k.xi, k.eta};
            auto it = index.find(sym);
            if (it == index.end()) throw std::logic_error("expand: term outside component");
            out[it->second].add_term(k.mono, c);
        }
        return out;
    }

    KDElement from_coords(const std::vector<Polynomial>& coords, int p, int s) const {
        auto basis = component_basis(p, s);
        if (coords.size() != basis.size()) throw std::invalid_argument("from_coords: size");
        KDElement e(shared_from_this());
        for (size_t i = 0; i < basis.size(); ++i)
            for (auto& [ex, c] : coords[i].terms()) {
                KDKey k;
                k.mono = ex;
                k.wedge = basis[i].wedge;
                k.xi = basis[i].xi;
                k.eta = basis[i].eta;
                e.add_term(k, c);
            }
        return e;
    }

    KDElement from_vec(const ModVec& v, int p, int s) const {
        auto basis = component_basis(p, s);
        KDElement e(shared_from_this());
        for (auto& [pos, poly] : v.comps) {
            for (auto& [ex, c] : poly.terms()) {
                KDKey k;
                k.mono = ex;
                k.wedge = basis.at(pos).wedge;
                k.xi = basis.at(pos).xi;
                k.eta = basis.at(pos).eta;
                e.add_term(k, c);
            }
        }
        return e;
    }

    ModVec to_vec(const KDElement& e, int p, int s) const {
        auto coords = expand(e, p, s);
        ModVec v;
        for (size_t i = 0; i < coords.size(); ++i) v.set(static_cast<int>(i), coords[i]);
        return v;
    }

    // matrix of the differential from K^{p,s} into its target component;
    // columns indexed by the source basis
    OpMatrix operator_matrix(Diff which, int p, int s) const {
        int tp = (which == Diff::DeRham) ? p + 1 : p;
        int ts = (which == Diff::DeRham) ? s : s - 1;
        auto src = component_basis(p, s);
        auto tgt = component_basis(tp, ts);
        OpMatrix mtx;
        mtx.rows = static_cast<int>(tgt.size());
        mtx.cols = static_cast<int>(src.size());
        mtx.a.assign(mtx.rows, std::vector<Polynomial>(mtx.cols, Polynomial(ring())));
        std::map<KDCompSym, int> index;
        for (size_t i = 0; i < tgt.size(); ++i) index[tgt[i]] = static_cast<int>(i);
        for (size_t j = 0; j < src.size(); ++j) {
            KDElement e(shared_from_this());
            KDKey k;
            k.mono.assign(ring()->nvars(), 0);
            k.wedge = src[j].wedge;
            k.xi = src[j].xi;
            k.eta = src[j].eta;
            e.add_term(k, Rational(1));
            KDElement d = apply_diff(e, which);
            for (auto& [tk, c] : d.terms()) {
                auto it = index.find(KDCompSym{tk.wedge, tk.xi, tk.eta});
                if (it == index.end()) throw std::logic_error("operator_matrix: stray component");
                mtx.a[it->second][j].add_term(tk.mono, c);
            }
        }
        return mtx;
    }

    std::map<std::pair<int, int>, KDElement> bidegree_split(const KDElement& e) const {
        std::map<std::pair<int, int>, KDElement> out;
        for (auto& [k, c] : e.terms()) {
            auto key = std::make_pair(k.deg_dr(), k.deg_k());
            auto it = out.find(key);
            if (it == out.end()) it = out.emplace(key, KDElement(shared_from_this())).first;
            it->second.add_term(k, c);
        }
        return out;
    }

    static std::vector<uint32_t> masks_of_size(int n, int size) {
        std::vector<uint32_t> out;
        if (size < 0 || size > n) return out;
        for (uint32_t mask = 0; mask < (1u << n); ++mask)
            if (popcount32(mask) == size) out.push_back(mask);
        return out;
    }
    static std::vector<ExpVec> compositions(int parts, int total) {
        std::vector<ExpVec> out;
        if (parts == 0) {
            if (total == 0) out.push_back({});
            return out;
        }
        ExpVec cur(parts, 0);
        std::function<void(int, int)> rec = [&](int i, int rem) {
            if (i == parts - 1) {
                cur[i] = rem;
                out.push_back(cur);
                cur[i] = 0;
                return;
            }
            for (int v = 0; v <= rem; ++v) {
                cur[i] = v;
                rec(i + 1, rem - v);
            }
            cur[i] = 0;
        };
        rec(0, total);
        return out;
    }

private:
    static void check_index(int i, int n) {
        if (i < 0 || i >= n) throw std::out_of_range("generator index");
    }

    // xi_i -> f_i with derivation sign (-1)^{|wedge| + (xi bits below i)}
    void diff_xi_to_f(const KDKey& k, const Rational& c, KDElement& out) const {
        for (uint32_t rest = k.xi; rest;) {
            int i = std::countr_zero(rest);
            rest &= rest - 1;
            int below = popcount32(k.xi & ((1u << i) - 1));
            int sgn = ((popcount32(k.wedge) + below) & 1) ? -1 : 1;
            for (auto& [fe, fc] : chart.f[i].terms()) {
                KDKey nk;
                nk.mono = k.mono;
                for (size_t t = 0; t < nk.mono.size(); ++t) nk.mono[t] += fe[t];
                nk.wedge = k.wedge;
                nk.xi = k.xi & ~(1u << i);
                nk.eta = k.eta;
                out.add_term(nk, c * fc * Rational(sgn));
            }
        }
    }

    // eta_i -> -df_i; the 1-form enters from the right of the word
    void diff_eta_to_mdf(const KDKey& k, const Rational& c, KDElement& out) const {
        for (int i = 0; i < l(); ++i) {
            if (k.eta[i] == 0) continue;
            int sgn0 = ((popcount32(k.wedge) + popcount32(k.xi)) & 1) ? -1 : 1;
            Rational cc = c * Rational(k.eta[i]) * Rational(sgn0);
            for (int j = 0; j < m(); ++j) {
                if (k.wedge & (1u << j)) continue;
                const Polynomial& dij = df[i][j];
                if (dij.is_zero()) continue;
                int pass_xi = popcount32(k.xi) & 1;
                int above = popcount32(k.wedge >> (j + 1));
                int sgn = ((pass_xi + above) & 1) ? -1 : 1;
                for (auto& [de, dc] : dij.terms()) {
                    KDKey nk;
                    nk.mono = k.mono;
                    for (size_t t = 0; t < nk.mono.size(); ++t) nk.mono[t] += de[t];
                    nk.wedge = k.wedge | (1u << j);
                    nk.xi = k.xi;
                    nk.eta = k.eta;
                    nk.eta[i] -= 1;
                    out.add_term(nk, cc * (-dc) * Rational(sgn));
                }
            }
        }
    }

    // relative exterior derivative of the coefficient; dz_j enters from the left
    void diff_coefficient(const KDKey& k, const Rational& c, KDElement& out) const {
        for (int j = 0; j < m(); ++j) {
            if (k.mono[j] == 0 || (k.wedge & (1u << j))) continue;
            int below = popcount32(k.wedge & ((1u << j) - 1));
            int sgn = (below & 1) ? -1 : 1;
            KDKey nk;
            nk.mono = k.mono;
            nk.mono[j] -= 1;
            nk.wedge = k.wedge | (1u << j);
            nk.xi = k.xi;
            nk.eta = k.eta;
            out.add_term(nk, c * Rational(k.mono[j]) * Rational(sgn));
        }
    }

    // xi_i -> eta_i with derivation sign
    void diff_xi_to_eta(const KDKey& k, const Rational& c, KDElement& out) const {
        for (uint32_t rest = k.xi; rest;) {
            int i = std::countr_zero(rest);
            rest &= rest - 1;
            int below = popcount32(k.xi & ((1u << i) - 1));
            int sgn = ((popcount32(k.wedge) + below) & 1) ? -1 : 1;
            KDKey nk;
            nk.mono = k.mono;
            nk.wedge = k.wedge;
            nk.xi = k.xi & ~(1u << i);
            nk.eta = k.eta;
            nk.eta[i] += 1;
            out.add_term(nk, c * Rational(sgn));
        }
    }
};

inline std::vector<ModVec> matrix_columns(const OpMatrix& m) {
    std::vector<ModVec> cols;
    for (int j = 0; j < m.cols; ++j) {
        ModVec v;
        for (int r = 0; r < m.rows; ++r)
            if (!m.a[r][j].is_zero()) v.set(r, m.a[r][j]);
        cols.push_back(std::move(v));
    }
    return cols;
}

inline KDContextPtr build_algebra(Chart c) { return KDContext::build(std::move(c)); }

inline KDElement kd_mul(const KDElement& a, const KDElement& b) {
    if (!a.ctx() || !b.ctx() || a.ctx().get() != b.ctx().get())
        throw std::invalid_argument("kd_mul: chart mismatch");
    return a.ctx()->mul(a, b);
}

inline KDElement apply_diff(const KDElement& a, Diff which) {
    if (!a.ctx()) throw std::invalid_argument("apply_diff: no context");
    return a.ctx()->apply_diff(a, which);
}

inline int parity_of(const KDElement& e) {
    int p = -1;
    for (auto& [k, c] : e.terms()) {
        if (p < 0) p = k.parity();
        else if (p != k.parity()) throw std::logic_error("parity_of: mixed parity");
    }
    return p < 0 ? 0 : p;
}

// deterministic generator for the property suites
struct KDRandom {
    uint64_t state;
    explicit KDRandom(uint64_t seed) : state(seed) {}
    uint64_t next() {
        state += 0x9e3779b97f4a7c15ull;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    int range(int n) { return static_cast<int>(next() % static_cast<uint64_t>(n)); }
};

inline KDElement random_element(const KDContextPtr& ctx, KDRandom& rng, int max_terms = 3) {
    KDElement e(ctx);
    int nterms = 1 + rng.range(max_terms);
    int nv = static_cast<int>(ctx->ring()->nvars());
    for (int t = 0; t < nterms; ++t) {
        KDKey k;
        k.mono.assign(nv, 0);
        int mdeg = rng.range(3);
        for (int d = 0; d < mdeg; ++d) k.mono[rng.range(nv)] += 1;
        k.wedge = static_cast<uint32_t>(rng.next()) & ((1u << ctx->m()) - 1u);
        if (ctx->l() > 0) {
            k.xi = static_cast<uint32_t>(rng.next()) & ((1u << ctx->l()) - 1u);
            k.eta.assign(ctx->l(), 0);
            int edeg = rng.range(3);
            for (int d = 0; d < edeg; ++d) k.eta[rng.range(ctx->l())] += 1;
        } else {
            k.xi = 0;
            k.eta.clear();
        }
        int num = rng.range(7) - 3;
        if (num == 0) num = 1;
        int den = 1 + rng.range(2);
        e.add_term(k, Rational(num, den));
    }
    return e;
}

} // namespace kdr

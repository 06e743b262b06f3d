#pragma once

// Buchberger engine for ideals and submodules of free modules R^k over
// Q[x1..xn]. Provides reduced Groebner bases, normal forms, syzygy kernels
// via block elimination, membership, lifting, and staircase counting for
// truncated Hilbert functions.
//
// Module orders:
//   POT    - position dominant (low index first), degrevlex on monomials.
//            Block-elimination order used for kernels and lifts.
//   DEGTOP - total degree first, then position, then degrevlex. Degree
//            compatible; used for staircases and truncated dimensions.

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "polynomial.hpp"

namespace kdr {

// Sparse vector in R^rank.
struct ModVec {
    std::map<int, Polynomial> comps;

    bool is_zero() const { return comps.empty(); }
    void set(int pos, Polynomial p) {
        if (p.is_zero()) comps.erase(pos);
        else comps[pos] = std::move(p);
    }
    const Polynomial* at(int pos) const {
        auto it = comps.find(pos);
        return it == comps.end() ? nullptr : &it->second;
    }
    void add_term(int pos, const ExpVec& e, const Rational& c, const RingPtr& ring) {
        auto it = comps.find(pos);
        if (it == comps.end()) {
            Polynomial p(ring);
            p.add_term(e, c);
            if (!p.is_zero()) comps.emplace(pos, std::move(p));
        } else {
            it->second.add_term(e, c);
            if (it->second.is_zero()) comps.erase(it);
        }
    }
    ModVec operator+(const ModVec& o) const {
        ModVec r = *this;
        for (auto& [pos, p] : o.comps) {
            auto it = r.comps.find(pos);
            if (it == r.comps.end()) r.comps.emplace(pos, p);
            else {
                it->second += p;
                if (it->second.is_zero()) r.comps.erase(it);
            }
        }
        return r;
    }
    ModVec operator-() const {
        ModVec r;
        for (auto& [pos, p] : comps) r.comps.emplace(pos, -p);
        return r;
    }
    ModVec operator-(const ModVec& o) const { return *this + (-o); }
    ModVec scaled(const Polynomial& m) const {
        ModVec r;
        if (m.is_zero()) return r;
        for (auto& [pos, p] : comps) {
            Polynomial q = p * m;
            if (!q.is_zero()) r.comps.emplace(pos, std::move(q));
        }
        return r;
    }
    ModVec scaled(const Rational& c) const {
        ModVec r;
        if (c.is_zero()) return r;
        for (auto& [pos, p] : comps) r.comps.emplace(pos, p * c);
        return r;
    }
    void scale_in_place(const Rational& c) {
        if (c.is_zero()) { comps.clear(); return; }
        for (auto& [pos, p] : comps) p.scale_in_place(c);
    }
    // this += c * x^shift * o
    void add_scaled(const ModVec& o, const ExpVec& shift, const Rational& c, const RingPtr& ring) {
        if (c.is_zero()) return;
        for (auto& [pos, p] : o.comps) {
            auto it = comps.find(pos);
            if (it == comps.end()) it = comps.emplace(pos, Polynomial(ring)).first;
            it->second.add_scaled(p, shift, c);
            if (it->second.is_zero()) comps.erase(it);
        }
    }
    bool operator==(const ModVec& o) const { return comps == o.comps; }
};

// clears denominators and divides by the integer content; leading sign is
// normalized by the caller if needed
inline void make_primitive(ModVec& v) {
    if (v.is_zero()) return;
    BigInt den_lcm(1), num_gcd(0);
    for (auto& [pos, p] : v.comps)
        for (auto& [e, c] : p.terms()) den_lcm = BigInt::lcm(den_lcm, c.den());
    for (auto& [pos, p] : v.comps)
        for (auto& [e, c] : p.terms()) num_gcd = BigInt::gcd(num_gcd, c.num() * den_lcm);
    Rational f(den_lcm, num_gcd);
    if (!(f == Rational(1))) v.scale_in_place(f.sign() < 0 ? -f : f);
}

enum class MonoCmp { DRL, LEX };

inline bool exp_greater(const ExpVec& a, const ExpVec& b, MonoCmp k) {
    if (k == MonoCmp::DRL) return degrevlex_greater(a, b);
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] > b[i];
    return false;
}

// POT with one position is a plain monomial order; DEGTOP is the degree
// compatible order used for staircase counting.
struct ModOrder {
    enum Scheme { POT, DEGTOP } scheme = POT;
    MonoCmp mono = MonoCmp::DRL;
    static ModOrder pot(MonoCmp m = MonoCmp::DRL) { return ModOrder{POT, m}; }
    static ModOrder degtop() { return ModOrder{DEGTOP, MonoCmp::DRL}; }
};

struct ModMono {
    int pos = -1;
    ExpVec exp;
};

// true if a > b in the given order
inline bool mono_greater(const ModMono& a, const ModMono& b, const ModOrder& ord) {
    if (ord.scheme == ModOrder::POT) {
        if (a.pos != b.pos) return a.pos < b.pos;
        return exp_greater(a.exp, b.exp, ord.mono);
    }
    int da = total_degree(a.exp), db = total_degree(b.exp);
    if (da != db) return da > db;
    if (a.pos != b.pos) return a.pos < b.pos;
    return exp_greater(a.exp, b.exp, ord.mono);
}

inline ModMono leading_mono(const ModVec& v, const ModOrder& ord) {
    ModMono best;
    for (auto& [pos, p] : v.comps) {
        for (auto& [e, c] : p.terms()) {
            ModMono m{pos, e};
            if (best.pos < 0 || mono_greater(m, best, ord)) best = m;
        }
    }
    if (best.pos < 0) throw std::logic_error("leading_mono of zero vector");
    return best;
}

inline Rational coeff_of(const ModVec& v, const ModMono& m) {
    const Polynomial* p = v.at(m.pos);
    if (!p) return Rational(0);
    auto it = p->terms().find(m.exp);
    return it == p->terms().end() ? Rational(0) : it->second;
}

inline bool mono_divides(const ModMono& d, const ModMono& m) {
    if (d.pos != m.pos) return false;
    for (size_t i = 0; i < d.exp.size(); ++i)
        if (d.exp[i] > m.exp[i]) return false;
    return true;
}

class ModuleGB {
public:
    ModuleGB(RingPtr ring, ModOrder ord) : ring_(std::move(ring)), ord_(ord) {}

    // Reduced GB of the submodule generated by gens. The build runs on
    // integer-primitive vectors with pseudo-reduction (no rational growth);
    // pairs are processed by increasing lcm degree.
    void build(const std::vector<ModVec>& gens) {
        basis_.clear();
        lts_.clear();
        for (const ModVec& g : gens) {
            ModVec r = pseudo_nf(g);
            if (r.is_zero()) continue;
            push_element(std::move(r));
        }
        // pair queue ordered by (lcm degree, indices)
        std::set<std::tuple<int, size_t, size_t>> pairs;
        auto lcm_of = [&](size_t i, size_t j) {
            ExpVec lcm(lts_[i].exp.size());
            for (size_t t = 0; t < lcm.size(); ++t) lcm[t] = std::max(lts_[i].exp[t], lts_[j].exp[t]);
            return lcm;
        };
        auto queue_pair = [&](size_t i, size_t j) {
            if (lts_[i].pos != lts_[j].pos) return;
            pairs.insert({total_degree(lcm_of(i, j)), std::min(i, j), std::max(i, j)});
        };
        for (size_t i = 0; i < basis_.size(); ++i)
            for (size_t j = i + 1; j < basis_.size(); ++j) queue_pair(i, j);
        while (!pairs.empty()) {
            auto [deg, i, j] = *pairs.begin();
            pairs.erase(pairs.begin());
            // chain criterion
            {
                ExpVec lcm = lcm_of(i, j);
                bool skip = false;
                for (size_t k = 0; k < basis_.size() && !skip; ++k) {
                    if (k == i || k == j || lts_[k].pos != lts_[i].pos) continue;
                    bool div = true;
                    for (size_t t = 0; t < lcm.size(); ++t)
                        if (lts_[k].exp[t] > lcm[t]) { div = false; break; }
                    if (!div) continue;
                    auto key_ik = std::make_tuple(total_degree(lcm_of(i, k)), std::min(i, k),
                                                  std::max(i, k));
                    auto key_jk = std::make_tuple(total_degree(lcm_of(j, k)), std::min(j, k),
                                                  std::max(j, k));
                    if (!pairs.count(key_ik) && !pairs.count(key_jk)) skip = true;
                }
                if (skip) continue;
            }
            ModVec s = s_vector(i, j);
            ModVec r = pseudo_nf(std::move(s));
            if (r.is_zero()) continue;
            size_t k = basis_.size();
            push_element(std::move(r));
            for (size_t t = 0; t < k; ++t) queue_pair(t, k);
        }
        finalize();
    }

    // Full normal form: no term of the result is divisible by any basis LT.
    // If track is nonnull, accumulates coefficients c with
    // input = result + sum c_i * basis_i.
    ModVec normal_form(ModVec v, std::vector<Polynomial>* track = nullptr) const {
        if (track) track->assign(basis_.size(), Polynomial(ring_));
        ModVec rem;
        while (!v.is_zero()) {
            ModMono lm = leading_mono(v, ord_);
            bool reduced = false;
            for (size_t i = 0; i < basis_.size(); ++i) {
                if (!mono_divides(lts_[i], lm)) continue;
                Rational c = coeff_of(v, lm) / coeff_of(basis_[i], lts_[i]);
                ExpVec q(lm.exp.size());
                for (size_t t = 0; t < q.size(); ++t) q[t] = lm.exp[t] - lts_[i].exp[t];
                v.add_scaled(basis_[i], q, -c, ring_);
                if (track) (*track)[i].add_term(q, c);
                reduced = true;
                break;
            }
            if (!reduced) {
                Rational c = coeff_of(v, lm);
                rem.add_term(lm.pos, lm.exp, c, ring_);
                v.add_term(lm.pos, lm.exp, -c, ring_);
            }
        }
        return rem;
    }

    bool contains(const ModVec& v) const { return normal_form(v).is_zero(); }

    const std::vector<ModVec>& basis() const { return basis_; }
    const std::vector<ModMono>& leading_terms() const { return lts_; }
    const RingPtr& ring() const { return ring_; }

private:
    RingPtr ring_;
    ModOrder ord_;
    std::vector<ModVec> basis_;
    std::vector<ModMono> lts_;

    void push_element(ModVec v) {
        make_primitive(v);
        ModMono lm = leading_mono(v, ord_);
        if (coeff_of(v, lm).sign() < 0) v.scale_in_place(Rational(-1));
        lts_.push_back(std::move(lm));
        basis_.push_back(std::move(v));
    }

    // full normal form by rational division steps
    ModVec pseudo_nf(ModVec v) const {
        ModVec rem;
        while (!v.is_zero()) {
            ModMono lm = leading_mono(v, ord_);
            bool reduced = false;
            for (size_t i = 0; i < basis_.size(); ++i) {
                if (!mono_divides(lts_[i], lm)) continue;
                Rational f = coeff_of(v, lm) / coeff_of(basis_[i], lts_[i]);
                ExpVec q(lm.exp.size());
                for (size_t t = 0; t < q.size(); ++t) q[t] = lm.exp[t] - lts_[i].exp[t];
                v.add_scaled(basis_[i], q, -f, ring_);
                reduced = true;
                break;
            }
            if (!reduced) {
                Rational c = coeff_of(v, lm);
                rem.add_term(lm.pos, lm.exp, c, ring_);
                v.add_term(lm.pos, lm.exp, -c, ring_);
            }
        }
        return rem;
    }

    ModVec s_vector(size_t i, size_t j) const {
        const ModMono& a = lts_[i];
        const ModMono& b = lts_[j];
        ExpVec lcm(a.exp.size());
        for (size_t t = 0; t < lcm.size(); ++t) lcm[t] = std::max(a.exp[t], b.exp[t]);
        ExpVec qa(lcm.size()), qb(lcm.size());
        for (size_t t = 0; t < lcm.size(); ++t) { qa[t] = lcm[t] - a.exp[t]; qb[t] = lcm[t] - b.exp[t]; }
        Rational ca = coeff_of(basis_[i], a), cb = coeff_of(basis_[j], b);
        ModVec s;
        s.add_scaled(basis_[i], qa, cb, ring_);
        s.add_scaled(basis_[j], qb, -ca, ring_);
        return s;
    }

    // minimalize (drop elements with divisible leading terms), then tail
    // reduce each survivor once: for a completed GB this yields the reduced
    // basis up to primitive scaling
    void finalize() {
        std::vector<bool> keep(basis_.size(), true);
        for (size_t i = 0; i < basis_.size(); ++i) {
            if (!keep[i]) continue;
            for (size_t j = 0; j < basis_.size(); ++j) {
                if (i == j || !keep[j]) continue;
                if (mono_divides(lts_[j], lts_[i]) &&
                    !(lts_[i].pos == lts_[j].pos && lts_[i].exp == lts_[j].exp && j > i)) {
                    keep[i] = false;
                    break;
                }
            }
        }
        std::vector<ModVec> nb;
        std::vector<ModMono> nl;
        for (size_t i = 0; i < basis_.size(); ++i)
            if (keep[i]) { nb.push_back(std::move(basis_[i])); nl.push_back(std::move(lts_[i])); }
        basis_ = std::move(nb);
        lts_ = std::move(nl);
        for (size_t i = 0; i < basis_.size(); ++i) {
            ModuleGB others(ring_, ord_);
            for (size_t j = 0; j < basis_.size(); ++j)
                if (j != i) { others.basis_.push_back(basis_[j]); others.lts_.push_back(lts_[j]); }
            ModVec r = others.pseudo_nf(basis_[i]);
            if (!r.is_zero()) {
                ModMono lm = leading_mono(r, ord_);
                if (coeff_of(r, lm).sign() < 0) r.scale_in_place(Rational(-1));
                lts_[i] = std::move(lm);
                basis_[i] = std::move(r);
            }
        }
    }
};

// ---- ideal-level conveniences ------------------------------------------

inline ModVec to_vec(const Polynomial& p, int pos = 0) {
    ModVec v;
    if (!p.is_zero()) v.comps.emplace(pos, p);
    return v;
}

inline std::vector<ModVec> to_vecs(const std::vector<Polynomial>& ps) {
    std::vector<ModVec> out;
    for (auto& p : ps) if (!p.is_zero()) out.push_back(to_vec(p));
    return out;
}

inline std::vector<Polynomial> groebner_basis(const std::vector<Polynomial>& gens,
                                              MonoCmp order = MonoCmp::DRL) {
    if (gens.empty()) return {};
    RingPtr ring;
    for (auto& g : gens) if (g.ring()) { ring = g.ring(); break; }
    if (!ring) return {};
    ModuleGB gb(ring, ModOrder::pot(order));
    gb.build(to_vecs(gens));
    std::vector<Polynomial> out;
    for (auto& v : gb.basis()) out.push_back(*v.at(0));
    return out;
}

inline Polynomial normal_form(const Polynomial& p, const std::vector<Polynomial>& basis,
                              MonoCmp order = MonoCmp::DRL) {
    ModuleGB gb(p.ring(), ModOrder::pot(order));
    gb.build(to_vecs(basis));
    ModVec r = gb.normal_form(to_vec(p));
    const Polynomial* q = r.at(0);
    return q ? *q : Polynomial(p.ring());
}

inline bool ideal_membership(const Polynomial& p, const std::vector<Polynomial>& gens) {
    if (p.is_zero()) return true;
    ModuleGB gb(p.ring(), ModOrder::pot());
    gb.build(to_vecs(gens));
    return gb.contains(to_vec(p));
}

// Rabinowitsch trick: p in rad(I) iff 1 in I + (1 - y p) in R[y].
inline bool radical_membership(const Polynomial& p, const std::vector<Polynomial>& gens) {
    if (p.is_zero()) {
        // 0 in rad(I) iff I is the unit ideal... no: 0 is in every radical.
        return true;
    }
    RingPtr ring = p.ring();
    std::vector<std::string> vars = ring->vars;
    vars.push_back("__rad");
    RingPtr ext = make_ring(vars);
    auto lift = [&](const Polynomial& q) {
        Polynomial r(ext);
        for (auto& [e, c] : q.terms()) {
            ExpVec e2 = e;
            e2.push_back(0);
            r.add_term(e2, c);
        }
        return r;
    };
    std::vector<Polynomial> g2;
    for (auto& g : gens) if (!g.is_zero()) g2.push_back(lift(g));
    Polynomial y = Polynomial::variable(ext, static_cast<int>(vars.size()) - 1);
    g2.push_back(Polynomial::constant(ext, Rational(1)) - y * lift(p));
    return ideal_membership(Polynomial::constant(ext, Rational(1)), g2);
}

// ---- kernels / membership / lifts via tracked Buchberger -----------------

// Buchberger on the column module in R^rank with tracked expressions over
// the input generators. Every reduction to zero yields a syzygy (Schreyer);
// together with the tracked redundancies these generate the full kernel.
class TrackedGB {
public:
    TrackedGB(const std::vector<ModVec>& gens, int rank, RingPtr ring)
        : rank_(rank), ring_(std::move(ring)) {
        for (size_t j = 0; j < gens.size(); ++j) {
            ModVec expr;
            expr.set(static_cast<int>(j), Polynomial::constant(ring_, Rational(1)));
            insert(gens[j], std::move(expr));
        }
        std::set<std::tuple<int, size_t, size_t>> pairs;
        auto queue_pair = [&](size_t i, size_t j) {
            if (lts_[i].pos != lts_[j].pos) return;
            ExpVec lcm = lcm_exp(lts_[i].exp, lts_[j].exp);
            pairs.insert({total_degree(lcm), std::min(i, j), std::max(i, j)});
        };
        for (size_t i = 0; i < basis_.size(); ++i)
            for (size_t j = i + 1; j < basis_.size(); ++j) queue_pair(i, j);
        while (!pairs.empty()) {
            auto [deg, i, j] = *pairs.begin();
            pairs.erase(pairs.begin());
            // chain criterion: skip when some k divides the lcm and both
            // sub-pairs are no longer pending
            {
                ExpVec lcm = lcm_exp(lts_[i].exp, lts_[j].exp);
                bool skip = false;
                for (size_t k = 0; k < basis_.size() && !skip; ++k) {
                    if (k == i || k == j || lts_[k].pos != lts_[i].pos) continue;
                    bool div = true;
                    for (size_t t = 0; t < lcm.size(); ++t)
                        if (lts_[k].exp[t] > lcm[t]) { div = false; break; }
                    if (!div) continue;
                    ExpVec lik = lcm_exp(lts_[i].exp, lts_[k].exp);
                    ExpVec ljk = lcm_exp(lts_[j].exp, lts_[k].exp);
                    auto key_ik = std::make_tuple(total_degree(lik), std::min(i, k), std::max(i, k));
                    auto key_jk = std::make_tuple(total_degree(ljk), std::min(j, k), std::max(j, k));
                    if (!pairs.count(key_ik) && !pairs.count(key_jk)) skip = true;
                }
                if (skip) continue;
            }
            ExpVec lcm = lcm_exp(lts_[i].exp, lts_[j].exp);
            ExpVec qa(lcm.size()), qb(lcm.size());
            for (size_t t = 0; t < lcm.size(); ++t) {
                qa[t] = lcm[t] - lts_[i].exp[t];
                qb[t] = lcm[t] - lts_[j].exp[t];
            }
            Rational ca = coeff_of(basis_[i], lts_[i]), cb = coeff_of(basis_[j], lts_[j]);
            ModVec s, se;
            s.add_scaled(basis_[i], qa, cb, ring_);
            s.add_scaled(basis_[j], qb, -ca, ring_);
            se.add_scaled(exprs_[i], qa, cb, ring_);
            se.add_scaled(exprs_[j], qb, -ca, ring_);
            size_t before = basis_.size();
            insert(std::move(s), std::move(se));
            if (basis_.size() > before)
                for (size_t t = 0; t < before; ++t) queue_pair(t, before);
        }
    }

    // membership of v in the span of the generators
    bool contains(ModVec v) const {
        reduce_full(v, nullptr);
        return v.is_zero();
    }

    // coefficients c with v = sum c_j gens[j], if v lies in the span
    std::optional<std::vector<Polynomial>> lift(ModVec v) const {
        ModVec track;
        reduce_full(v, &track);
        if (!v.is_zero()) return std::nullopt;
        std::vector<Polynomial> out(ngens(), Polynomial(ring_));
        for (auto& [j, p] : track.comps) out[j] = p;
        return out;
    }

    const std::vector<ModVec>& syzygies() const { return syzygies_; }
    const std::vector<ModVec>& basis() const { return basis_; }
    const std::vector<ModMono>& leading_terms() const { return lts_; }

private:
    int rank_;
    RingPtr ring_;
    std::vector<ModVec> basis_;   // GB of the column module in R^rank
    std::vector<ModVec> exprs_;   // expressions of basis elements over the gens
    std::vector<ModMono> lts_;
    std::vector<ModVec> syzygies_;
    int ngens_ = 0;

    int ngens() const { return ngens_; }

    static ExpVec lcm_exp(const ExpVec& a, const ExpVec& b) {
        ExpVec l(a.size());
        for (size_t t = 0; t < a.size(); ++t) l[t] = std::max(a[t], b[t]);
        return l;
    }

    // full reduction of (v, expr); on reaching v = 0 the expr is a syzygy
    void insert(ModVec v, ModVec expr) {
        ngens_ = std::max(ngens_, expr.comps.empty() ? 0 : expr.comps.rbegin()->first + 1);
        ModVec rem, rem_expr;
        while (!v.is_zero()) {
            ModMono lm = leading_mono(v, ModOrder::pot());
            bool reduced = false;
            for (size_t i = 0; i < basis_.size(); ++i) {
                if (!mono_divides(lts_[i], lm)) continue;
                Rational cv = coeff_of(v, lm);
                Rational cg = coeff_of(basis_[i], lts_[i]);
                ExpVec q(lm.exp.size());
                for (size_t t = 0; t < q.size(); ++t) q[t] = lm.exp[t] - lts_[i].exp[t];
                Rational f = cv / cg;
                v.add_scaled(basis_[i], q, -f, ring_);
                expr.add_scaled(exprs_[i], q, -f, ring_);
                reduced = true;
                break;
            }
            if (!reduced) {
                Rational c = coeff_of(v, lm);
                rem.add_term(lm.pos, lm.exp, c, ring_);
                v.add_term(lm.pos, lm.exp, -c, ring_);
            }
        }
        if (rem.is_zero()) {
            if (!expr.is_zero()) {
                make_primitive(expr);
                syzygies_.push_back(std::move(expr));
            }
            return;
        }
        // move the remainder terms back: rem is the irreducible part
        lts_.push_back(leading_mono(rem, ModOrder::pot()));
        basis_.push_back(std::move(rem));
        exprs_.push_back(std::move(expr));
    }

    void reduce_full(ModVec& v, ModVec* track) const {
        ModVec rem;
        while (!v.is_zero()) {
            ModMono lm = leading_mono(v, ModOrder::pot());
            bool reduced = false;
            for (size_t i = 0; i < basis_.size(); ++i) {
                if (!mono_divides(lts_[i], lm)) continue;
                Rational f = coeff_of(v, lm) / coeff_of(basis_[i], lts_[i]);
                ExpVec q(lm.exp.size());
                for (size_t t = 0; t < q.size(); ++t) q[t] = lm.exp[t] - lts_[i].exp[t];
                v.add_scaled(basis_[i], q, -f, ring_);
                if (track) track->add_scaled(exprs_[i], q, f, ring_);
                reduced = true;
                break;
            }
            if (!reduced) {
                Rational c = coeff_of(v, lm);
                rem.add_term(lm.pos, lm.exp, c, ring_);
                v.add_term(lm.pos, lm.exp, -c, ring_);
            }
        }
        v = std::move(rem);
    }
};

// Generating set of { v in R^cols : sum_j v_j * columns[j] = 0 }.
// columns[j] is a vector in R^rank.
inline std::vector<ModVec> module_kernel(const std::vector<ModVec>& columns, int rank,
                                         const RingPtr& ring) {
    TrackedGB gb(columns, rank, ring);
    return gb.syzygies();
}

// Cached GB of a set of generator columns in R^rank, supporting membership
// and lifting v = sum c_j gens[j].
class SubmoduleOracle {
public:
    SubmoduleOracle(std::vector<ModVec> gens, int rank, RingPtr ring)
        : gens_(std::move(gens)), rank_(rank), ring_(std::move(ring)),
          gb_(gens_, rank, ring_) {}

    bool contains(const ModVec& v) const { return gb_.contains(v); }

    std::optional<std::vector<Polynomial>> lift(const ModVec& v) const { return gb_.lift(v); }

    const std::vector<ModVec>& gens() const { return gens_; }
    int rank() const { return rank_; }
    const TrackedGB& gb() const { return gb_; }

private:
    std::vector<ModVec> gens_;
    int rank_;
    RingPtr ring_;
    TrackedGB gb_;
};

// ---- staircases and truncated dimensions ---------------------------------

// Number of monomials in n variables of total degree <= d not divisible by
// any of the given exponent vectors.
inline long long count_standard_monomials(const std::vector<ExpVec>& lts, int nvars, int d) {
    long long count = 0;
    ExpVec e(nvars, 0);
    std::function<void(int, int)> rec = [&](int i, int remaining) {
        if (i == nvars) {
            for (const ExpVec& l : lts) {
                bool div = true;
                for (int t = 0; t < nvars; ++t)
                    if (l[t] > e[t]) { div = false; break; }
                if (div) return;
            }
            ++count;
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            e[i] = v;
            rec(i + 1, remaining - v);
        }
        e[i] = 0;
    };
    if (nvars == 0) {
        for (const ExpVec& l : lts) if (l.empty()) return 0;
        return 1;
    }
    rec(0, d);
    return count;
}

// Per-position leading-term exponents of a module GB (DEGTOP order assumed).
inline std::map<int, std::vector<ExpVec>> staircase(const ModuleGB& gb) {
    std::map<int, std::vector<ExpVec>> lt;
    for (auto& m : gb.leading_terms()) lt[m.pos].push_back(m.exp);
    return lt;
}

} // namespace kdr

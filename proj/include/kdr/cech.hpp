#pragma once

// Cech machinery over a based lifting atlas: cochain modules, the lifted
// coboundary, totalization with the degree twist, and exactness checks.
//
// Sign conventions: the summand of delta adding index a to K carries
// (-1)^{position of a in K', counted from 1}, so for a pair chart
// delta(x)_{01} = (restriction from 0) - (restriction from 1). The total
// differential is delta + (-1)^q partial_K on Cech degree q; since every
// transition pullback commutes with partial_K, the twist makes the two
// anticommute and D^2 reduces to the delta^2 term.

#include "atlas.hpp"

namespace kdr {

struct CechBlock {
    Subset K;
    int rank = 0;
    int offset = 0;
};

inline std::vector<CechBlock> cech_module(const BasedLiftingAtlas& lift, int p, int s, int q) {
    std::vector<CechBlock> blocks;
    int off = 0;
    for (auto& K : lift.subsets) {
        if (static_cast<int>(K.size()) != q + 1) continue;
        CechBlock b;
        b.K = K;
        b.rank = static_cast<int>(lift.context(K)->component_basis(p, s).size());
        b.offset = off;
        off += b.rank;
        blocks.push_back(std::move(b));
    }
    return blocks;
}

inline long long cech_rank(const std::vector<CechBlock>& blocks) {
    long long r = 0;
    for (auto& b : blocks) r += b.rank;
    return r;
}

// cochain with components indexed by subsets (all of the same size)
struct CechElement {
    std::map<Subset, KDElement> comps;
    bool is_zero() const {
        for (auto& [K, e] : comps)
            if (!e.is_zero()) return false;
        return true;
    }
};

inline int cech_sign(const Subset& Kp, int added) {
    int pos = 0;
    while (Kp[pos] != added) ++pos;
    return ((pos + 1) % 2 == 0) ? 1 : -1;
}

// delta: C^q -> C^{q+1}
inline CechElement lifted_coboundary_apply(const BasedLiftingAtlas& lift, const CechElement& x,
                                           int q) {
    CechElement out;
    for (auto& Kp : lift.subsets) {
        if (static_cast<int>(Kp.size()) != q + 2) continue;
        KDElement acc = lift.context(Kp)->zero();
        for (size_t drop = 0; drop < Kp.size(); ++drop) {
            Subset K;
            for (size_t i = 0; i < Kp.size(); ++i)
                if (i != drop) K.push_back(Kp[i]);
            auto it = x.comps.find(K);
            if (it == x.comps.end() || it->second.is_zero()) continue;
            int sign = cech_sign(Kp, Kp[drop]);
            KDElement img = lift.pullback(K, Kp)(it->second);
            acc += (sign > 0) ? img : -img;
        }
        if (!acc.is_zero()) out.comps.emplace(Kp, std::move(acc));
    }
    return out;
}

// matrix of delta: C^q(p,s) -> C^{q+1}(p,s) in block form; entries of the
// (K', K) block live over the K' chart ring
struct CechMatrix {
    std::vector<CechBlock> source, target;
    // target block index, source block index -> rows x cols polynomial matrix
    std::map<std::pair<int, int>, std::vector<std::vector<Polynomial>>> blocks;
};

inline CechMatrix lifted_coboundary(const BasedLiftingAtlas& lift, int p, int s, int q) {
    CechMatrix m;
    m.source = cech_module(lift, p, s, q);
    m.target = cech_module(lift, p, s, q + 1);
    for (size_t ti = 0; ti < m.target.size(); ++ti) {
        const Subset& Kp = m.target[ti].K;
        auto tctx = lift.context(Kp);
        auto tbasis = tctx->component_basis(p, s);
        std::map<KDCompSym, int> tindex;
        for (size_t i = 0; i < tbasis.size(); ++i) tindex[tbasis[i]] = static_cast<int>(i);
        for (size_t si = 0; si < m.source.size(); ++si) {
            const Subset& K = m.source[si].K;
            if (!std::includes(Kp.begin(), Kp.end(), K.begin(), K.end())) continue;
            int added = -1;
            for (int a : Kp)
                if (!std::binary_search(K.begin(), K.end(), a)) added = a;
            int sign = cech_sign(Kp, added);
            auto sctx = lift.context(K);
            auto sbasis = sctx->component_basis(p, s);
            std::vector<std::vector<Polynomial>> blk(
                tbasis.size(), std::vector<Polynomial>(sbasis.size(), Polynomial(tctx->ring())));
            const Pullback& pb = lift.pullback(K, Kp);
            for (size_t j = 0; j < sbasis.size(); ++j) {
                KDElement e(sctx);
                KDKey key;
                key.mono.assign(sctx->ring()->nvars(), 0);
                key.wedge = sbasis[j].wedge;
                key.xi = sbasis[j].xi;
                key.eta = sbasis[j].eta;
                e.add_term(key, Rational(sign));
                KDElement img = pb(e);
                for (auto& [tk, c] : img.terms()) {
                    auto it = tindex.find(KDCompSym{tk.wedge, tk.xi, tk.eta});
                    if (it == tindex.end()) throw std::logic_error("lifted_coboundary: stray term");
                    blk[it->second][j].add_term(tk.mono, c);
                }
            }
            m.blocks[{static_cast<int>(ti), static_cast<int>(si)}] = std::move(blk);
        }
    }
    return m;
}

struct DeltaSquareReport {
    bool zero = true;
    std::vector<std::string> witnesses;
};

// delta^2 on every basis element of C^q(p, s)
inline DeltaSquareReport check_delta_squared(const BasedLiftingAtlas& lift, int p, int s, int q) {
    DeltaSquareReport rep;
    for (auto& K : lift.subsets) {
        if (static_cast<int>(K.size()) != q + 1) continue;
        auto ctx = lift.context(K);
        auto basis = ctx->component_basis(p, s);
        for (size_t i = 0; i < basis.size(); ++i) {
            CechElement x;
            KDElement e(ctx);
            KDKey key;
            key.mono.assign(ctx->ring()->nvars(), 0);
            key.wedge = basis[i].wedge;
            key.xi = basis[i].xi;
            key.eta = basis[i].eta;
            e.add_term(key, Rational(1));
            x.comps.emplace(K, std::move(e));
            CechElement dd = lifted_coboundary_apply(lift, lifted_coboundary_apply(lift, x, q), q + 1);
            if (!dd.is_zero()) {
                rep.zero = false;
                if (rep.witnesses.size() < 8)
                    rep.witnesses.push_back("delta^2 != 0 from " + subset_label(K) + " basis #" +
                                            std::to_string(i) + " at (p,s,q)=(" + std::to_string(p) +
                                            "," + std::to_string(s) + "," + std::to_string(q) + ")");
            }
        }
    }
    return rep;
}

// ---- totalization ---------------------------------------------------------

struct TotalBlock {
    Subset K;
    int q = 0, s = 0;
    int rank = 0;
};

struct TotalElement {
    // component at (K, s); q is implied by #K
    std::map<std::pair<Subset, int>, KDElement> comps;
    bool is_zero() const {
        for (auto& [k, e] : comps)
            if (!e.is_zero()) return false;
        return true;
    }
};

struct TruncatedComplex {
    const BasedLiftingAtlas* lift = nullptr;
    int p = 0;
    bool kernel_variant = false;        // replace the s = 0 term by im(partial_K)
    std::map<int, std::vector<TotalBlock>> terms;  // by total degree q - s
};

inline TruncatedComplex totalize_truncate(const BasedLiftingAtlas& lift, int p,
                                          bool kernel_variant) {
    TruncatedComplex tc;
    tc.lift = &lift;
    tc.p = p;
    tc.kernel_variant = kernel_variant;
    if (p < 0) return tc;
    for (auto& K : lift.subsets) {
        auto ctx = lift.context(K);
        int q = static_cast<int>(K.size()) - 1;
        for (int s = 0; s <= p + ctx->l(); ++s) {
            int rank = static_cast<int>(ctx->component_basis(p, s).size());
            if (rank == 0) continue;
            TotalBlock b;
            b.K = K;
            b.q = q;
            b.s = s;
            b.rank = rank;
            tc.terms[q - s].push_back(std::move(b));
        }
    }
    return tc;
}

// total differential delta + (-1)^q partial_K
inline TotalElement total_apply(const TruncatedComplex& tc, const TotalElement& x) {
    const BasedLiftingAtlas& lift = *tc.lift;
    TotalElement out;
    auto add = [&](const Subset& K, int s, const KDElement& e) {
        if (e.is_zero()) return;
        auto key = std::make_pair(K, s);
        auto it = out.comps.find(key);
        if (it == out.comps.end()) out.comps.emplace(key, e);
        else it->second += e;
    };
    for (auto& [key, e] : x.comps) {
        const Subset& K = key.first;
        int s = key.second;
        int q = static_cast<int>(K.size()) - 1;
        if (e.is_zero()) continue;
        // Cech part
        for (auto& Kp : lift.subsets) {
            if (Kp.size() != K.size() + 1) continue;
            if (!std::includes(Kp.begin(), Kp.end(), K.begin(), K.end())) continue;
            int added = -1;
            for (int a : Kp)
                if (!std::binary_search(K.begin(), K.end(), a)) added = a;
            int sign = cech_sign(Kp, added);
            KDElement img = lift.pullback(K, Kp)(e);
            add(Kp, s, sign > 0 ? img : -img);
        }
        // twisted Koszul part
        if (s >= 1) {
            KDElement d = apply_diff(e, Diff::Koszul);
            add(K, s - 1, (q % 2 == 0) ? d : -d);
        }
    }
    // drop zeros
    for (auto it = out.comps.begin(); it != out.comps.end();) {
        if (it->second.is_zero()) it = out.comps.erase(it);
        else ++it;
    }
    return out;
}

struct TotalSquareReport {
    bool zero = true;
    std::vector<std::string> witnesses;
};

inline TotalSquareReport check_total_squared(const TruncatedComplex& tc) {
    TotalSquareReport rep;
    const BasedLiftingAtlas& lift = *tc.lift;
    for (auto& [deg, blocks] : tc.terms) {
        for (auto& b : blocks) {
            auto ctx = lift.context(b.K);
            auto basis = ctx->component_basis(tc.p, b.s);
            for (size_t i = 0; i < basis.size(); ++i) {
                TotalElement x;
                KDElement e(ctx);
                KDKey key;
                key.mono.assign(ctx->ring()->nvars(), 0);
                key.wedge = basis[i].wedge;
                key.xi = basis[i].xi;
                key.eta = basis[i].eta;
                e.add_term(key, Rational(1));
                x.comps.emplace(std::make_pair(b.K, b.s), std::move(e));
                TotalElement dd = total_apply(tc, total_apply(tc, x));
                if (!dd.is_zero()) {
                    rep.zero = false;
                    if (rep.witnesses.size() < 8)
                        rep.witnesses.push_back("D^2 != 0 from " + subset_label(b.K) + " (s=" +
                                                std::to_string(b.s) + ", basis #" +
                                                std::to_string(i) + ", total degree " +
                                                std::to_string(deg) + ")");
                }
            }
        }
    }
    return rep;
}

// closed-form rank of the total term: sum over K of rank K^{p, #K-1-deg}
inline long long total_rank_closed_form(const BasedLiftingAtlas& lift, int p, int deg) {
    auto binom = [](long long n, long long k) -> long long {
        if (k < 0 || k > n) return 0;
        long long r = 1;
        for (long long i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
        return r;
    };
    long long total = 0;
    int N = lift.spec.N(), dimS = lift.spec.dimS();
    for (auto& K : lift.subsets) {
        int q = static_cast<int>(K.size()) - 1;
        int s = q - deg;
        if (s < 0) continue;
        int m = static_cast<int>(K.size()) * N;
        int l = lift.in_nerve(K) ? (static_cast<int>(K.size()) - 1) * N + dimS : 1;
        long long rank = 0;
        for (int a = 0; a <= std::min(p, s); ++a)
            rank += binom(m, p - a) * binom(l, s - a) * binom(a + l - 1, l - 1);
        total += rank;
    }
    return total;
}

inline long long total_rank_constructed(const TruncatedComplex& tc, int deg) {
    auto it = tc.terms.find(deg);
    if (it == tc.terms.end()) return 0;
    long long total = 0;
    for (auto& b : it->second) total += b.rank;
    return total;
}

// strip bound of the finiteness lemma for the nonzero total terms
inline bool total_strip_ok(const TruncatedComplex& tc) {
    const AtlasSpec& spec = tc.lift->spec;
    int kstar = spec.n_charts() - 1;
    int N = spec.N();
    int n = N - spec.dimS();
    long long lo = -(static_cast<long long>(kstar) + 1) * (N - 1) + n - 1;
    long long hi = (static_cast<long long>(kstar) + 1) * (N + 1) - 1;
    for (auto& [deg, blocks] : tc.terms) {
        if (blocks.empty()) continue;
        long long v = static_cast<long long>(deg) + tc.p;
        if (v < lo || v > hi) return false;
    }
    return true;
}

} // namespace kdr

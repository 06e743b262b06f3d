#pragma once

// Finite-dimensional slices of the totalized complexes, cut by coefficient
// degree, and exact Q-linear cohomology on them: termwise rank additivity
// of 0 -> TR_ker -> TR -> Cech(Omega^p) -> 0, Euler-characteristic sums
// across the long exact sequence, and the windowed De Rham Cech cohomology
// with per-base-degree reporting and a stabilization flag.

#include "cech.hpp"

namespace kdr {

// quotient presentation of Omega^p_U over a chart: relations are exactly
// the columns of partial_K on K^{p,1}
struct OmegaModule {
    KDContextPtr ctx;
    int p = 0;
    int rank = 0;
    std::vector<ModVec> relations;
    std::shared_ptr<ModuleGB> gb;  // DEGTOP
    std::map<int, std::vector<ExpVec>> stairs;
};

inline OmegaModule omega_module(const KDContextPtr& ctx, int p) {
    OmegaModule om;
    om.ctx = ctx;
    om.p = p;
    om.rank = static_cast<int>(ctx->component_basis(p, 0).size());
    if (om.rank > 0) {
        OpMatrix in = ctx->operator_matrix(Diff::Koszul, p, 1);
        for (auto& col : matrix_columns(in))
            if (!col.is_zero()) om.relations.push_back(col);
    }
    om.gb = std::make_shared<ModuleGB>(ctx->ring(), ModOrder::degtop());
    om.gb->build(om.relations);
    om.stairs = staircase(*om.gb);
    return om;
}

inline std::vector<ExpVec> monomials_up_to(const RingPtr& ring, int d) {
    std::vector<ExpVec> out;
    int n = static_cast<int>(ring->nvars());
    ExpVec e(n, 0);
    std::function<void(int, int)> rec = [&](int i, int rem) {
        if (i == n) { out.push_back(e); return; }
        for (int v = 0; v <= rem; ++v) {
            e[i] = v;
            rec(i + 1, rem - v);
        }
        e[i] = 0;
    };
    rec(0, d);
    std::sort(out.begin(), out.end());
    return out;
}

inline bool divisible(const ExpVec& lt, const ExpVec& e) {
    for (size_t i = 0; i < lt.size(); ++i)
        if (lt[i] > e[i]) return false;
    return true;
}

inline bool is_standard(const std::map<int, std::vector<ExpVec>>& stairs, int pos, const ExpVec& e) {
    auto it = stairs.find(pos);
    if (it == stairs.end()) return true;
    for (auto& lt : it->second)
        if (divisible(lt, e)) return false;
    return true;
}

// quotient slice dimension: standard monomials of degree <= d
inline long long omega_window_dim(const OmegaModule& om, int d) {
    long long total = 0;
    int nv = static_cast<int>(om.ctx->ring()->nvars());
    for (int pos = 0; pos < om.rank; ++pos) {
        static const std::vector<ExpVec> none;
        auto it = om.stairs.find(pos);
        total += count_standard_monomials(it == om.stairs.end() ? none : it->second, nv, d);
    }
    return total;
}

// basis of Im cap window: one monomial multiple of a GB element per leading
// term in the window (degree-compatible order keeps them inside)
inline std::vector<ModVec> image_window_basis(const OmegaModule& om, int d) {
    std::vector<ModVec> out;
    const auto& basis = om.gb->basis();
    const auto& lts = om.gb->leading_terms();
    auto monos = monomials_up_to(om.ctx->ring(), d);
    std::set<std::pair<int, ExpVec>> seen;
    for (size_t i = 0; i < basis.size(); ++i) {
        int ltdeg = total_degree(lts[i].exp);
        for (auto& mu : monos) {
            if (total_degree(mu) + ltdeg > d) continue;
            ExpVec lead = lts[i].exp;
            for (size_t t = 0; t < lead.size(); ++t) lead[t] += mu[t];
            auto key = std::make_pair(lts[i].pos, lead);
            if (seen.count(key)) continue;
            seen.insert(key);
            out.push_back(basis[i].scaled(Polynomial::monomial(om.ctx->ring(), mu, Rational(1))));
        }
    }
    return out;
}

inline long long image_window_dim(const OmegaModule& om, int d) {
    long long free_dim = 0;
    int nv = static_cast<int>(om.ctx->ring()->nvars());
    long long count = count_standard_monomials({}, nv, d);
    free_dim = static_cast<long long>(om.rank) * count;
    return free_dim - omega_window_dim(om, d);
}

// ---- coordinate systems on slices ----------------------------------------

struct SliceIndex {
    // per block: base offset, per-position monomial indexing
    struct Block {
        Subset K;
        int s = 0;           // -1 marks an Omega (s-free) block
        int rank = 0;
        int offset = 0;
        std::map<ExpVec, int> mono_index;
        std::vector<ExpVec> monos;
    };
    std::vector<Block> blocks;
    int dim = 0;

    int block_of(const Subset& K, int s) const {
        for (size_t i = 0; i < blocks.size(); ++i)
            if (blocks[i].K == K && blocks[i].s == s) return static_cast<int>(i);
        return -1;
    }
};

inline SliceIndex make_slice_index(const BasedLiftingAtlas& lift,
                                   const std::vector<TotalBlock>& blocks, int d) {
    SliceIndex idx;
    for (auto& b : blocks) {
        SliceIndex::Block sb;
        sb.K = b.K;
        sb.s = b.s;
        sb.rank = b.rank;
        sb.offset = idx.dim;
        sb.monos = monomials_up_to(lift.context(b.K)->ring(), d);
        for (size_t i = 0; i < sb.monos.size(); ++i) sb.mono_index[sb.monos[i]] = static_cast<int>(i);
        idx.dim += sb.rank * static_cast<int>(sb.monos.size());
        idx.blocks.push_back(std::move(sb));
    }
    return idx;
}

// coordinates of a total element, projecting away terms beyond the window
inline QRow total_to_coords(const BasedLiftingAtlas& lift, const TruncatedComplex& tc,
                            const SliceIndex& idx, const TotalElement& x) {
    QRow row(idx.dim, Rational(0));
    for (auto& [key, e] : x.comps) {
        int bi = idx.block_of(key.first, key.second);
        if (bi < 0) {
            if (!e.is_zero()) throw std::logic_error("total_to_coords: missing block");
            continue;
        }
        const auto& sb = idx.blocks[bi];
        auto coords = lift.context(key.first)->expand(e, tc.p, key.second);
        for (size_t pos = 0; pos < coords.size(); ++pos)
            for (auto& [mono, c] : coords[pos].terms()) {
                auto it = sb.mono_index.find(mono);
                if (it == sb.mono_index.end()) continue;  // projection
                row[sb.offset + static_cast<int>(pos) * sb.monos.size() + it->second] = c;
            }
    }
    return row;
}

struct LesReport {
    bool rank_additivity = true;
    bool euler_zero = true;
    std::map<int, long long> dim_tr, dim_ker, dim_cech;
    std::map<int, long long> h_tr, h_ker, h_cech;
    std::string detail;
};

// Exact-triangle bookkeeping for fixed p at coefficient degree <= d.
inline LesReport les_check(const BasedLiftingAtlas& lift, int p, int d) {
    LesReport rep;
    TruncatedComplex tr = totalize_truncate(lift, p, false);
    std::map<Subset, OmegaModule> omegas;
    for (auto& K : lift.subsets) omegas.emplace(K, omega_module(lift.context(K), p));

    // termwise dimensions
    int lo = 0, hi = 0;
    for (auto& [deg, blocks] : tr.terms) { lo = std::min(lo, deg); hi = std::max(hi, deg); }
    for (int deg = lo; deg <= hi; ++deg) {
        long long dtr = 0, dker = 0, dcech = 0;
        auto it = tr.terms.find(deg);
        if (it != tr.terms.end())
            for (auto& b : it->second) {
                const RingPtr& R = lift.context(b.K)->ring();
                long long count = count_standard_monomials({}, static_cast<int>(R->nvars()), d);
                long long full = b.rank * count;
                dtr += full;
                if (b.s == 0) {
                    long long im = image_window_dim(omegas.at(b.K), d);
                    dker += im;
                    dcech += full - im;
                } else {
                    dker += full;
                }
            }
        rep.dim_tr[deg] = dtr;
        rep.dim_ker[deg] = dker;
        rep.dim_cech[deg] = dcech;
        if (dtr != dker + dcech) rep.rank_additivity = false;
    }

    // windowed differentials of TR in coordinates, degree by degree
    std::map<int, SliceIndex> indices;
    for (int deg = lo; deg <= hi; ++deg) {
        auto it = tr.terms.find(deg);
        indices.emplace(deg, make_slice_index(lift, it == tr.terms.end() ? std::vector<TotalBlock>{}
                                                                         : it->second, d));
    }
    auto apply_rows = [&](int deg, const std::vector<TotalElement>& gens) -> QMatrix {
        QMatrix rows;
        if (!indices.count(deg + 1)) return rows;
        const SliceIndex& tgt = indices.at(deg + 1);
        for (auto& g : gens) {
            TotalElement dg = total_apply(tr, g);
            rows.push_back(total_to_coords(lift, tr, tgt, dg));
        }
        return rows;
    };
    // generators of the slices as total elements
    auto slice_generators = [&](int deg, bool kernel_variant) {
        std::vector<TotalElement> gens;
        auto it = tr.terms.find(deg);
        if (it == tr.terms.end()) return gens;
        for (auto& b : it->second) {
            auto ctx = lift.context(b.K);
            if (kernel_variant && b.s == 0) {
                for (auto& v : image_window_basis(omegas.at(b.K), d)) {
                    TotalElement x;
                    x.comps.emplace(std::make_pair(b.K, 0), ctx->from_vec(v, p, 0));
                    gens.push_back(std::move(x));
                }
                continue;
            }
            auto basis = ctx->component_basis(p, b.s);
            auto monos = monomials_up_to(ctx->ring(), d);
            for (size_t i = 0; i < basis.size(); ++i)
                for (auto& mu : monos) {
                    TotalElement x;
                    KDElement e(ctx);
                    KDKey key;
                    key.mono = mu;
                    key.wedge = basis[i].wedge;
                    key.xi = basis[i].xi;
                    key.eta = basis[i].eta;
                    e.add_term(key, Rational(1));
                    x.comps.emplace(std::make_pair(b.K, b.s), std::move(e));
                    gens.push_back(std::move(x));
                }
        }
        return gens;
    };

    // cohomology dims of TR and TR_ker on the slices
    std::map<int, size_t> rank_tr, rank_ker, dimsub_ker;
    for (int deg = lo; deg <= hi; ++deg) {
        auto gens_full = slice_generators(deg, false);
        QMatrix img_full = apply_rows(deg, gens_full);
        rank_tr[deg] = img_full.empty() ? 0 : rank(img_full);

        auto gens_sub = slice_generators(deg, true);
        dimsub_ker[deg] = 0;
        {
            // dim of the subcomplex slice: rank of the coordinate rows
            QMatrix rows;
            const SliceIndex& self = indices.at(deg);
            for (auto& g : gens_sub) rows.push_back(total_to_coords(lift, tr, self, g));
            dimsub_ker[deg] = rows.empty() ? 0 : rank(rows);
        }
        QMatrix img_sub = apply_rows(deg, gens_sub);
        rank_ker[deg] = img_sub.empty() ? 0 : rank(img_sub);
    }
    for (int deg = lo; deg <= hi; ++deg) {
        long long r_in = (deg > lo) ? rank_tr[deg - 1] : 0;
        rep.h_tr[deg] = rep.dim_tr[deg] - static_cast<long long>(rank_tr[deg]) - r_in;
        long long rk_in = (deg > lo) ? rank_ker[deg - 1] : 0;
        rep.h_ker[deg] = static_cast<long long>(dimsub_ker[deg]) -
                         static_cast<long long>(rank_ker[deg]) - rk_in;
    }

    // Cech complex of Omega^p: std-monomial coordinates with NF after pullback
    {
        std::map<int, std::vector<std::pair<Subset, std::pair<int, ExpVec>>>> bases;  // deg -> (K,(pos,mono))
        std::map<int, std::map<std::pair<Subset, std::pair<int, ExpVec>>, int>> index;
        for (auto& K : lift.subsets) {
            int q = static_cast<int>(K.size()) - 1;
            auto& om = omegas.at(K);
            auto monos = monomials_up_to(lift.context(K)->ring(), d);
            for (int pos = 0; pos < om.rank; ++pos)
                for (auto& mu : monos)
                    if (is_standard(om.stairs, pos, mu)) {
                        index[q][{K, {pos, mu}}] = static_cast<int>(bases[q].size());
                        bases[q].push_back({K, {pos, mu}});
                    }
        }
        auto nf_coords = [&](const Subset& K, const ModVec& v, QRow& row) {
            auto& om = omegas.at(K);
            ModVec nf = om.gb->normal_form(v);
            int q = static_cast<int>(K.size()) - 1;
            for (auto& [pos, poly] : nf.comps)
                for (auto& [mono, c] : poly.terms()) {
                    auto it = index[q].find({K, {pos, mono}});
                    if (it == index[q].end()) continue;  // projection
                    row[it->second] += c;
                }
        };
        std::map<int, size_t> rank_cech;
        int qmax = lift.spec.n_charts() - 1;
        for (int q = 0; q <= qmax; ++q) {
            QMatrix rows;
            if (bases.count(q) && bases.count(q + 1)) {
                for (auto& [K, pm] : bases[q]) {
                    auto ctx = lift.context(K);
                    ModVec v;
                    v.set(pm.first, Polynomial::monomial(ctx->ring(), pm.second, Rational(1)));
                    KDElement e = ctx->from_vec(v, p, 0);
                    QRow row(bases[q + 1].size(), Rational(0));
                    for (auto& Kp : lift.subsets) {
                        if (Kp.size() != K.size() + 1) continue;
                        if (!std::includes(Kp.begin(), Kp.end(), K.begin(), K.end())) continue;
                        int added = -1;
                        for (int a : Kp)
                            if (!std::binary_search(K.begin(), K.end(), a)) added = a;
                        int sign = cech_sign(Kp, added);
                        KDElement img = lift.pullback(K, Kp)(e);
                        ModVec vv = lift.context(Kp)->to_vec(sign > 0 ? img : -img, p, 0);
                        nf_coords(Kp, vv, row);
                    }
                    rows.push_back(std::move(row));
                }
            }
            rank_cech[q] = rows.empty() ? 0 : rank(rows);
        }
        for (int q = 0; q <= qmax; ++q) {
            long long dim = bases.count(q) ? static_cast<long long>(bases[q].size()) : 0;
            long long r_out = rank_cech.count(q) ? rank_cech[q] : 0;
            long long r_in = (q > 0 && rank_cech.count(q - 1)) ? rank_cech[q - 1] : 0;
            rep.h_cech[q] = dim - r_out - r_in;
        }
    }

    // alternating sum over the long exact sequence
    long long alt = 0;
    for (auto& [deg, h] : rep.h_ker) alt += (((deg - lo) % 2 == 0) ? h : -h);
    for (auto& [deg, h] : rep.h_tr) alt -= (((deg - lo) % 2 == 0) ? h : -h);
    for (auto& [q, h] : rep.h_cech) alt += (((q - lo) % 2 == 0) ? h : -h);
    rep.euler_zero = (alt == 0);
    if (!rep.euler_zero)
        rep.detail = "alternating sum of truncated cohomology dims = " + std::to_string(alt);
    return rep;
}

} // namespace kdr

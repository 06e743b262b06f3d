#pragma once

// Koszul cohomology H^{p,s} of a chart as a finitely presented module,
// kernel and image generators retained for audit. Hilbert functions come in
// two flavours: the presentation filtration (kernel generators at weight 0)
// and the intrinsic ambient filtration std(Im) - std(Ker).

#include <optional>
#include <set>

#include "fpmodule.hpp"
#include "morphism.hpp"

namespace kdr {

struct CohomologyModule {
    KDContextPtr ctx;
    int p = 0, s = 0;
    int ambient_rank = 0;
    std::vector<ModVec> kernel_gens;
    std::vector<ModVec> image_gens;
    FPModule presentation;
};

inline CohomologyModule koszul_cohomology(const KDContextPtr& ctx, int p, int s) {
    CohomologyModule H;
    H.ctx = ctx;
    H.p = p;
    H.s = s;
    auto basis = ctx->component_basis(p, s);
    H.ambient_rank = static_cast<int>(basis.size());
    const RingPtr& R = ctx->ring();
    if (H.ambient_rank == 0) {
        H.presentation = FPModule{R, 0, {}, {}};
        return H;
    }
    OpMatrix out = ctx->operator_matrix(Diff::Koszul, p, s);
    if (out.rows == 0) {
        for (int j = 0; j < H.ambient_rank; ++j) {
            ModVec e;
            e.set(j, Polynomial::constant(R, Rational(1)));
            H.kernel_gens.push_back(std::move(e));
        }
    } else {
        H.kernel_gens = module_kernel(matrix_columns(out), out.rows, R);
    }
    OpMatrix in = ctx->operator_matrix(Diff::Koszul, p, s + 1);
    for (auto& col : matrix_columns(in))
        if (!col.is_zero()) H.image_gens.push_back(col);
    // image inside kernel, else the differential is broken
    H.presentation = quotient_presentation(H.kernel_gens, H.image_gens, H.ambient_rank, R);
    return H;
}

inline std::vector<long long> hilbert(const CohomologyModule& H, int d) {
    return truncated_dimension(H.presentation, d);
}

// dim F_k = std(Im, k) - std(Ker, k) for the ambient degree filtration;
// independent of the choice of kernel generators.
inline std::vector<long long> intrinsic_hilbert(const CohomologyModule& H, int d) {
    FPModule ker{H.ctx->ring(), H.ambient_rank, H.kernel_gens, {}};
    FPModule im{H.ctx->ring(), H.ambient_rank, H.image_gens, {}};
    auto a = truncated_dimension(im, d);
    auto b = truncated_dimension(ker, d);
    std::vector<long long> out;
    for (int k = 0; k <= d; ++k) out.push_back(a[k] - b[k]);
    return out;
}

inline bool is_zero_cohomology(const CohomologyModule& H) {
    if (H.ambient_rank == 0 || H.kernel_gens.empty()) return true;
    SubmoduleOracle im(H.image_gens, H.ambient_rank, H.ctx->ring());
    for (auto& k : H.kernel_gens)
        if (!im.contains(k)) return false;
    return true;
}

struct InducedMap {
    bool well_defined = false;
    bool target_empty = false;
    // column j = coefficients of d(ker_j) on the target kernel generators
    std::vector<std::vector<Polynomial>> matrix;
};

// The De Rham operator on classes: representative -> d_DR(representative).
inline InducedMap induced_derham(const CohomologyModule& src, const CohomologyModule& tgt) {
    InducedMap out;
    const KDContextPtr& ctx = src.ctx;
    if (tgt.ambient_rank == 0) {
        out.target_empty = true;
        // well defined iff d of every source kernel generator vanishes
        out.well_defined = true;
        for (auto& k : src.kernel_gens) {
            KDElement e = ctx->from_vec(k, src.p, src.s);
            if (!apply_diff(e, Diff::DeRham).is_zero()) { out.well_defined = false; break; }
        }
        return out;
    }
    SubmoduleOracle ker_oracle(tgt.kernel_gens, tgt.ambient_rank, ctx->ring());
    SubmoduleOracle im_oracle(tgt.image_gens, tgt.ambient_rank, ctx->ring());
    out.well_defined = true;
    for (auto& g : src.image_gens) {
        KDElement e = ctx->from_vec(g, src.p, src.s);
        ModVec d = ctx->to_vec(apply_diff(e, Diff::DeRham), tgt.p, tgt.s);
        if (!im_oracle.contains(d)) { out.well_defined = false; break; }
    }
    for (auto& k : src.kernel_gens) {
        KDElement e = ctx->from_vec(k, src.p, src.s);
        ModVec d = ctx->to_vec(apply_diff(e, Diff::DeRham), tgt.p, tgt.s);
        auto c = ker_oracle.lift(d);
        if (!c) { out.well_defined = false; return out; }
        out.matrix.push_back(*c);
    }
    return out;
}

struct PiReport {
    bool equal = false;
    int first_mismatch = -1;
    std::vector<long long> hf_koszul, hf_direct;
};

// Direct presentation of Omega^p_{U/S} as the quotient by f Omega^p and
// df wedge Omega^{p-1}, compared against H^{p,0} by truncated Hilbert
// functions.
inline PiReport check_pi_iso(const KDContextPtr& ctx, int p, int dmax) {
    PiReport rep;
    auto basis_p = ctx->component_basis(p, 0);
    FPModule direct;
    direct.ring = ctx->ring();
    direct.rank = static_cast<int>(basis_p.size());
    std::map<KDCompSym, int> index;
    for (size_t i = 0; i < basis_p.size(); ++i) index[basis_p[i]] = static_cast<int>(i);
    for (int i = 0; i < ctx->l(); ++i) {
        for (size_t w = 0; w < basis_p.size(); ++w) {
            ModVec rel;
            rel.set(static_cast<int>(w), ctx->chart.f[i]);
            direct.relations.push_back(std::move(rel));
        }
    }
    if (p >= 1) {
        auto basis_pm1 = ctx->component_basis(p - 1, 0);
        for (int i = 0; i < ctx->l(); ++i) {
            KDElement dfel = ctx->zero();
            for (int j = 0; j < ctx->m(); ++j)
                if (!ctx->df[i][j].is_zero())
                    dfel += kd_mul(ctx->from_poly(ctx->df[i][j]), ctx->dz(j));
            for (auto& sym : basis_pm1) {
                KDElement e(ctx);
                KDKey k;
                k.mono.assign(ctx->ring()->nvars(), 0);
                k.wedge = sym.wedge;
                k.xi = sym.xi;
                k.eta = sym.eta;
                e.add_term(k, Rational(1));
                KDElement prod = kd_mul(dfel, e);
                if (prod.is_zero()) continue;
                direct.relations.push_back(ctx->to_vec(prod, p, 0));
            }
        }
    }
    CohomologyModule H = koszul_cohomology(ctx, p, 0);
    rep.hf_koszul = hilbert(H, dmax);
    rep.hf_direct = truncated_dimension(direct, dmax);
    rep.equal = true;
    for (int k = 0; k <= dmax; ++k)
        if (rep.hf_koszul[k] != rep.hf_direct[k]) { rep.equal = false; rep.first_mismatch = k; break; }
    return rep;
}

// All size x size minors of the Jacobian of the components w.r.t. the
// given variable indices.
inline std::vector<Polynomial> jacobian_minors(const std::vector<Polynomial>& components,
                                               const std::vector<int>& vars, int size,
                                               const RingPtr& ring) {
    int rows = static_cast<int>(components.size());
    int cols = static_cast<int>(vars.size());
    if (size < 0 || size > std::min(rows, cols))
        throw std::invalid_argument("jacobian_minors: size out of range");
    std::vector<std::vector<Polynomial>> J(rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) J[i].push_back(components[i].derivative(vars[j]));
    std::vector<Polynomial> out;
    std::vector<int> rsel(size), csel(size);
    std::function<Polynomial(std::vector<int>&, std::vector<int>&)> det =
        [&](std::vector<int>& rs, std::vector<int>& cs) -> Polynomial {
        if (rs.empty()) return Polynomial::constant(ring, Rational(1));
        Polynomial d(ring);
        for (size_t j = 0; j < cs.size(); ++j) {
            std::vector<int> rs2(rs.begin() + 1, rs.end());
            std::vector<int> cs2;
            for (size_t t = 0; t < cs.size(); ++t)
                if (t != j) cs2.push_back(cs[t]);
            Polynomial sub = det(rs2, cs2);
            Polynomial term = J[rs[0]][cs[j]] * sub;
            d += (j % 2 == 0) ? term : -term;
        }
        return d;
    };
    std::function<void(int, int)> pick_cols = [&](int start, int depth) {
        if (depth == size) {
            std::vector<int> rs = rsel, cs = csel;
            out.push_back(det(rs, cs));
            return;
        }
        for (int c = start; c < cols; ++c) {
            csel[depth] = c;
            pick_cols(c + 1, depth + 1);
        }
    };
    std::function<void(int, int)> pick_rows = [&](int start, int depth) {
        if (depth == size) { pick_cols(0, 0); return; }
        for (int r = start; r < rows; ++r) {
            rsel[depth] = r;
            pick_rows(r + 1, depth + 1);
        }
    };
    pick_rows(0, 0);
    return out;
}

// Jacobian minors of phi in the fiber variables, reduced to normal form
// modulo (f): the critical ideal generators on U.
inline std::vector<Polynomial> critical_minors(const Chart& chart) {
    std::vector<int> fib;
    for (int j = 0; j < chart.m(); ++j) fib.push_back(j);
    int size = chart.k();
    if (size > std::min<int>(chart.phi.size(), fib.size())) return {};
    auto minors = jacobian_minors(chart.phi, fib, size, chart.ring);
    auto gb = groebner_basis(chart.f);
    std::vector<Polynomial> out;
    for (auto& m : minors) {
        Polynomial nf = normal_form(m, gb);
        if (!nf.is_zero()) out.push_back(nf);
    }
    return out;
}

struct AnnReport {
    bool f_annihilates = false;
    std::vector<int> minor_power;  // per minor: least power <= max with
                                   // minor^e * gen in Im for all gens, -1 if none
    bool all_minors_annihilate = false;
};

inline AnnReport annihilator_checks(const CohomologyModule& H,
                                    const std::vector<Polynomial>& minors, int max_power = 4) {
    AnnReport rep;
    const RingPtr& R = H.ctx->ring();
    if (H.kernel_gens.empty()) {
        rep.f_annihilates = true;
        rep.minor_power.assign(minors.size(), 0);
        rep.all_minors_annihilate = true;
        return rep;
    }
    SubmoduleOracle im(H.image_gens, H.ambient_rank, R);
    rep.f_annihilates = true;
    for (auto& fi : H.ctx->chart.f)
        for (auto& k : H.kernel_gens)
            if (!im.contains(k.scaled(fi))) { rep.f_annihilates = false; break; }
    rep.all_minors_annihilate = true;
    for (auto& mnr : minors) {
        int found = -1;
        Polynomial pw = Polynomial::constant(R, Rational(1));
        for (int e = 1; e <= max_power; ++e) {
            pw = pw * mnr;
            bool all = true;
            for (auto& k : H.kernel_gens)
                if (!im.contains(k.scaled(pw))) { all = false; break; }
            if (all) { found = e; break; }
        }
        rep.minor_power.push_back(found);
        if (found < 0) rep.all_minors_annihilate = false;
    }
    return rep;
}

struct CyclicReport {
    bool cyclic = false;
    int generator_index = -1;
    std::vector<Polynomial> ann_gens;  // annihilator of the cyclic generator
    bool ann_matches = false;          // two-sided comparison mod (f)
};

// Cyclicity plus the annihilator ideal of the generating class, compared
// against a target ideal modulo the chart relations.
inline CyclicReport cyclic_with_annihilator(const CohomologyModule& H,
                                            const std::vector<Polynomial>& target_ideal) {
    CyclicReport rep;
    const RingPtr& R = H.ctx->ring();
    int g = -1;
    for (size_t cand = 0; cand < H.kernel_gens.size(); ++cand) {
        std::vector<ModVec> gens = H.image_gens;
        gens.push_back(H.kernel_gens[cand]);
        SubmoduleOracle o(gens, H.ambient_rank, R);
        bool all = true;
        for (size_t j = 0; j < H.kernel_gens.size(); ++j)
            if (j != cand && !o.contains(H.kernel_gens[j])) { all = false; break; }
        if (all) { g = static_cast<int>(cand); break; }
    }
    if (g < 0) return rep;
    rep.cyclic = true;
    rep.generator_index = g;
    // (Im : k_g) via the kernel of [k_g | image gens]
    std::vector<ModVec> cols{H.kernel_gens[g]};
    for (auto& c : H.image_gens) cols.push_back(c);
    auto ker = module_kernel(cols, H.ambient_rank, R);
    for (auto& v : ker) {
        const Polynomial* a = v.at(0);
        if (a && !a->is_zero()) rep.ann_gens.push_back(*a);
    }
    std::vector<Polynomial> lhs = rep.ann_gens;
    std::vector<Polynomial> rhs = target_ideal;
    for (auto& fi : H.ctx->chart.f) { lhs.push_back(fi); rhs.push_back(fi); }
    auto gb_l = groebner_basis(lhs);
    auto gb_r = groebner_basis(rhs);
    rep.ann_matches = true;
    for (auto& a : rep.ann_gens)
        if (!normal_form(a, gb_r).is_zero()) { rep.ann_matches = false; break; }
    if (rep.ann_matches)
        for (auto& b : target_ideal)
            if (!normal_form(b, gb_l).is_zero()) { rep.ann_matches = false; break; }
    return rep;
}

// dim_Q of Q[vars]/Jacobian ideal via the Groebner staircase; nullopt when
// the staircase is unbounded.
inline std::optional<long long> milnor_number(const Polynomial& phi) {
    const RingPtr& R = phi.ring();
    int n = static_cast<int>(R->nvars());
    std::vector<Polynomial> jac;
    for (int j = 0; j < n; ++j) {
        Polynomial d = phi.derivative(j);
        if (!d.is_zero()) jac.push_back(d);
    }
    auto gb = groebner_basis(jac);
    ModuleGB g(R, ModOrder::degtop());
    g.build(to_vecs(gb));
    auto st = staircase(g);
    const std::vector<ExpVec>& lts = st.count(0) ? st[0] : std::vector<ExpVec>{};
    int bound = 0;
    for (int v = 0; v < n; ++v) {
        int best = -1;
        for (auto& e : lts) {
            bool pure = e[v] > 0;
            for (int w = 0; w < n && pure; ++w)
                if (w != v && e[w] != 0) pure = false;
            if (pure) best = (best < 0) ? e[v] : std::min(best, e[v]);
        }
        if (best < 0) return std::nullopt;
        bound += best - 1;
    }
    return count_standard_monomials(lts, n, bound);
}

} // namespace kdr

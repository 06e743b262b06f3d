#pragma once

// Windowed Cech-De Rham cohomology with Omega^p coefficients: the unlifted
// complex with total differential delta + (-1)^q d on classes, cut to the
// finite slice of coefficient total degree <= bound. NF against the
// degree-compatible module order never raises total degree, so the slice is
// an honest subcomplex and windowed cohomology is exact linear algebra.
// Dimensions are reported per base-variable degree; the stabilization flag
// compares the report against the bound raised by 2.

#include "windows.hpp"

namespace kdr {

struct DeRhamOptions {
    int degree_bound = 10;  // total coefficient degree of representatives
    int base_report = 4;    // report per base degree 0..base_report
    int p_max = -1;         // default: fiber dimension of the model
};

struct DeRhamSlice {
    // total degree k -> exact dims per base degree 0..base_report
    std::map<int, std::vector<long long>> per_base_exact;
    std::map<int, long long> window_dim;
};

struct DeRhamReport {
    DeRhamSlice slice;        // at degree_bound
    DeRhamSlice slice_hi;     // at degree_bound + 2
    bool stabilized = false;            // every reported row unchanged
    std::map<int, bool> stabilized_by_degree;
    bool volume_class_generates = false;  // top-degree classes are t^c * (volume form)
    int bound = 0;
};

namespace derham_detail {

struct Basis {
    // block = (K, p); entries (block, pos, mono)
    struct Entry {
        int block = 0;
        int pos = 0;
        ExpVec mono;
    };
    struct Block {
        Subset K;
        int p = 0, q = 0;
    };
    std::vector<Block> blocks;
    std::map<int, std::vector<Entry>> by_degree;  // total degree k = q + p
    std::map<int, std::map<std::tuple<int, int, ExpVec>, int>> index;
};

inline int base_degree(const RingPtr& ring, int m, const ExpVec& e) {
    int d = 0;
    for (size_t i = m; i < e.size(); ++i) d += e[i];
    (void)ring;
    return d;
}

} // namespace derham_detail

inline DeRhamSlice derham_window(const BasedLiftingAtlas& lift, int bound, int base_report,
                                 int p_max, bool* volume_flag = nullptr) {
    using namespace derham_detail;
    DeRhamSlice out;
    int pm = p_max;
    std::map<std::pair<Subset, int>, OmegaModule> omegas;
    Basis basis;
    for (auto& K : lift.subsets) {
        auto ctx = lift.context(K);
        int q = static_cast<int>(K.size()) - 1;
        for (int p = 0; p <= (pm < 0 ? ctx->m() : pm); ++p) {
            omegas.emplace(std::make_pair(K, p), omega_module(ctx, p));
            Basis::Block blk;
            blk.K = K;
            blk.p = p;
            blk.q = q;
            basis.blocks.push_back(blk);
        }
    }
    Basis ext;  // sources one degree beyond the window, for complete images
    ext.blocks = basis.blocks;
    for (size_t bi = 0; bi < basis.blocks.size(); ++bi) {
        auto& blk = basis.blocks[bi];
        auto& om = omegas.at({blk.K, blk.p});
        auto monos = monomials_up_to(lift.context(blk.K)->ring(), bound + 1);
        int k = blk.q + blk.p;
        for (int pos = 0; pos < om.rank; ++pos)
            for (auto& mu : monos)
                if (is_standard(om.stairs, pos, mu)) {
                    if (total_degree(mu) <= bound) {
                        basis.index[k][{static_cast<int>(bi), pos, mu}] =
                            static_cast<int>(basis.by_degree[k].size());
                        basis.by_degree[k].push_back({static_cast<int>(bi), pos, mu});
                    }
                    ext.index[k][{static_cast<int>(bi), pos, mu}] =
                        static_cast<int>(ext.by_degree[k].size());
                    ext.by_degree[k].push_back({static_cast<int>(bi), pos, mu});
                }
    }

    auto block_id = [&](const Subset& K, int p) -> int {
        for (size_t i = 0; i < basis.blocks.size(); ++i)
            if (basis.blocks[i].K == K && basis.blocks[i].p == p) return static_cast<int>(i);
        return -1;
    };
    auto add_nf = [&](int k, const Subset& K, int p, const ModVec& v, QRow& row) {
        int bi = block_id(K, p);
        if (bi < 0) return;
        auto& om = omegas.at({K, p});
        ModVec nf = om.gb->normal_form(v);
        for (auto& [pos, poly] : nf.comps)
            for (auto& [mono, c] : poly.terms()) {
                auto it = basis.index[k].find({bi, pos, mono});
                if (it == basis.index[k].end()) continue;
                row[it->second] += c;
            }
    };

    // differential rows: window entries drive kernels, extended entries
    // drive images (projected to the window)
    auto image_row = [&](const Basis::Entry& ent, int k, size_t tgt_dim) {
        const auto& blk = basis.blocks[ent.block];
        auto ctx = lift.context(blk.K);
        QRow row(tgt_dim, Rational(0));
        if (tgt_dim == 0) return row;
        ModVec v;
        v.set(ent.pos, Polynomial::monomial(ctx->ring(), ent.mono, Rational(1)));
        KDElement e = ctx->from_vec(v, blk.p, 0);
        if (blk.p + 1 <= (pm < 0 ? ctx->m() : pm)) {
            KDElement de = apply_diff(e, Diff::DeRham);
            if (blk.q % 2 == 1) de = -de;
            if (!de.is_zero()) add_nf(k + 1, blk.K, blk.p + 1, ctx->to_vec(de, blk.p + 1, 0), row);
        }
        for (auto& Kp : lift.subsets) {
            if (Kp.size() != blk.K.size() + 1) continue;
            if (!std::includes(Kp.begin(), Kp.end(), blk.K.begin(), blk.K.end())) continue;
            int added = -1;
            for (int a : Kp)
                if (!std::binary_search(blk.K.begin(), blk.K.end(), a)) added = a;
            int sign = cech_sign(Kp, added);
            KDElement img = lift.pullback(blk.K, Kp)(e);
            if (sign < 0) img = -img;
            if (!img.is_zero())
                add_nf(k + 1, Kp, blk.p, lift.context(Kp)->to_vec(img, blk.p, 0), row);
        }
        return row;
    };
    std::map<int, QMatrix> diff_win, diff_ext;
    int kmax = 0;
    for (auto& [k, entries] : basis.by_degree) kmax = std::max(kmax, k);
    for (auto& [k, entries] : basis.by_degree) {
        size_t tgt_dim = basis.by_degree.count(k + 1) ? basis.by_degree[k + 1].size() : 0;
        QMatrix rows;
        for (auto& ent : entries) rows.push_back(image_row(ent, k, tgt_dim));
        diff_win[k] = std::move(rows);
        QMatrix erows;
        for (auto& ent : ext.by_degree[k]) erows.push_back(image_row(ent, k, tgt_dim));
        diff_ext[k] = std::move(erows);
    }

    // kernel of D_k intersected with base-degree filtration, minus image
    for (int k = 0; k <= kmax; ++k) {
        if (!basis.by_degree.count(k)) continue;
        const auto& entries = basis.by_degree[k];
        size_t dim = entries.size();
        QMatrix kerb;
        {
            // kernel of the map rows: vectors v with v * diff_win[k] = 0
            QMatrix cols;  // transpose
            size_t tgt = diff_win[k].empty() ? 0 : diff_win[k][0].size();
            if (tgt == 0) {
                for (size_t i = 0; i < dim; ++i) {
                    QRow v(dim, Rational(0));
                    v[i] = Rational(1);
                    kerb.push_back(std::move(v));
                }
            } else {
                cols.assign(tgt, QRow(dim, Rational(0)));
                for (size_t i = 0; i < dim; ++i)
                    for (size_t j = 0; j < tgt; ++j) cols[j][i] = diff_win[k][i][j];
                kerb = kernel_basis(cols, dim);
            }
        }
        QMatrix img;
        if (k > 0 && diff_ext.count(k - 1)) img = diff_ext[k - 1];

        auto filtered_dim = [&](const QMatrix& span, int bmax_deg) -> long long {
            // dim of span cap {coordinates with base degree <= bmax_deg}
            if (span.empty()) return 0;
            std::vector<size_t> high;
            for (size_t i = 0; i < dim; ++i) {
                const auto& ent = entries[i];
                const auto& blk = basis.blocks[ent.block];
                int m = static_cast<int>(lift.context(blk.K)->m());
                if (derham_detail::base_degree(lift.context(blk.K)->ring(), m, ent.mono) > bmax_deg)
                    high.push_back(i);
            }
            QMatrix proj;
            for (auto& row : span) {
                QRow r;
                for (size_t i : high) r.push_back(row[i]);
                proj.push_back(std::move(r));
            }
            if (high.empty()) return static_cast<long long>(rank(span));
            return static_cast<long long>(rank(span)) - static_cast<long long>(rank(proj));
        };

        out.window_dim[k] = static_cast<long long>(rank(kerb)) -
                            static_cast<long long>(img.empty() ? 0 : rank(img));
        std::vector<long long> cum;
        for (int b = 0; b <= base_report; ++b)
            cum.push_back(filtered_dim(kerb, b) - filtered_dim(img, b));
        std::vector<long long> exact;
        for (size_t b = 0; b < cum.size(); ++b)
            exact.push_back(b == 0 ? cum[0] : cum[b] - cum[b - 1]);
        out.per_base_exact[k] = exact;

        // volume class generation at the top fiber degree (single-chart case)
        if (volume_flag && k == kmax && lift.subsets.size() == 1) {
            const Subset& K = lift.subsets.front();
            auto ctx = lift.context(K);
            int m = ctx->m();
            if (k == m) {
                // vectors t^c * e_top for c = 0..base_report
                QMatrix vols;
                int nv = static_cast<int>(ctx->ring()->nvars());
                bool ok = true;
                for (int c = 0; c <= base_report && ok; ++c) {
                    ExpVec mu(nv, 0);
                    if (ctx->chart.k() == 1) mu[m] = c;
                    auto it = basis.index[k].find({block_id(K, m), 0, mu});
                    if (it == basis.index[k].end()) { ok = false; break; }
                    QRow v(dim, Rational(0));
                    v[it->second] = Rational(1);
                    vols.push_back(std::move(v));
                }
                if (ok) {
                    QMatrix span = img;
                    size_t r0 = span.empty() ? 0 : rank(span);
                    for (auto& v : vols) span.push_back(v);
                    bool independent = rank(span) == r0 + vols.size();
                    // classes fill each filtered piece
                    bool fills = true;
                    for (int b = 0; b <= base_report; ++b) {
                        long long want = filtered_dim(kerb, b) - filtered_dim(img, b);
                        if (want != b + 1) { fills = false; break; }
                    }
                    *volume_flag = independent && fills;
                } else {
                    *volume_flag = false;
                }
            }
        }
    }
    return out;
}

inline DeRhamReport derham_total_cohomology(const BasedLiftingAtlas& lift,
                                            const DeRhamOptions& opts = {}) {
    DeRhamReport rep;
    rep.bound = opts.degree_bound;
    bool vol1 = false, vol2 = false;
    rep.slice = derham_window(lift, opts.degree_bound, opts.base_report, opts.p_max, &vol1);
    rep.slice_hi = derham_window(lift, opts.degree_bound + 2, opts.base_report, opts.p_max, &vol2);
    rep.stabilized = true;
    for (auto& [k, v] : rep.slice.per_base_exact) {
        bool same = rep.slice_hi.per_base_exact.count(k) && rep.slice_hi.per_base_exact.at(k) == v;
        rep.stabilized_by_degree[k] = same;
        rep.stabilized = rep.stabilized && same;
    }
    rep.volume_class_generates = vol1 && vol2;
    return rep;
}

// ---- volume quotient (Brieskorn lattice shadow) ---------------------------
//
// For a one-dimensional base, Omega^N_model / dPhi ^ d(Omega^{N-2}_model) on
// the model coordinates; for an isolated singularity this is free over the
// base of rank equal to the Milnor number, generated by the volume form.
// Reported per fiber degree.

struct VolumeQuotientReport {
    std::vector<long long> exact_dims;  // per fiber degree 0..bound
    bool volume_class_survives = false; // [vol], Phi [vol], Phi^2 [vol], ... independent
    bool generates = false;             // those classes exhaust the window up to the bound
    bool stabilized = false;
    int bound = 0;
};

namespace derham_detail {

// coefficient of dPhi ^ d(mono * dz_W) on the volume form
inline Polynomial volume_coeff(const RingPtr& ring, const Polynomial& phi, const ExpVec& mono,
                               uint32_t wedge, int N) {
    Polynomial out(ring);
    Polynomial m = Polynomial::monomial(ring, mono, Rational(1));
    for (int i = 0; i < N; ++i) {
        if (wedge & (1u << i)) continue;
        Polynomial phi_i = phi.derivative(i);
        if (phi_i.is_zero()) continue;
        for (int j = 0; j < N; ++j) {
            if (j == i || (wedge & (1u << j))) continue;
            Polynomial m_j = m.derivative(j);
            if (m_j.is_zero()) continue;
            // sign of sorting dz_i dz_j dz_W into the volume order
            uint32_t rest = wedge;
            int sgn = merge_sign(1u << i, 1u << j);
            if (sgn == 0) continue;
            int s2 = merge_sign((1u << i) | (1u << j), rest);
            if (s2 == 0) continue;
            out += phi_i * m_j * Rational(sgn * s2);
        }
    }
    return out;
}

inline std::vector<long long> volume_quotient_dims(const RingPtr& model, const Polynomial& phi,
                                                   int bound, QMatrix* image_out,
                                                   std::vector<ExpVec>* monos_out) {
    int N = static_cast<int>(model->nvars());
    auto monos = monomials_up_to(model, bound);
    std::map<ExpVec, int> idx;
    for (size_t i = 0; i < monos.size(); ++i) idx[monos[i]] = static_cast<int>(i);
    // image: dPhi ^ d(mono dz_W) over all (N-2)-wedges and monomials with
    // slack so that images of degree <= bound are complete
    int slack = std::max(0, bound + 2 - phi.degree() + 2);
    auto gmonos = monomials_up_to(model, bound + slack);
    QMatrix image;
    for (uint32_t w = 0; w < (1u << N); ++w) {
        if (popcount32(w) != N - 2) continue;
        for (auto& gm : gmonos) {
            Polynomial c = volume_coeff(model, phi, gm, w, N);
            if (c.is_zero()) continue;
            QRow row(monos.size(), Rational(0));
            bool any = false;
            for (auto& [e, coef] : c.terms()) {
                auto it = idx.find(e);
                if (it == idx.end()) continue;  // projection beyond the window
                row[it->second] = coef;
                any = true;
            }
            if (any) image.push_back(std::move(row));
        }
    }
    std::vector<long long> per_exact;
    // cumulative dims via filtration by total degree, then difference
    std::vector<long long> cum;
    for (int d = 0; d <= bound; ++d) {
        std::vector<size_t> high;
        for (size_t i = 0; i < monos.size(); ++i)
            if (total_degree(monos[i]) > d) high.push_back(i);
        long long full = static_cast<long long>(monos.size() - high.size());
        QMatrix proj;
        for (auto& row : image) {
            QRow r;
            for (size_t i : high) r.push_back(row[i]);
            proj.push_back(std::move(r));
        }
        long long im_in = static_cast<long long>(rank(image)) -
                          static_cast<long long>(high.empty() ? 0 : rank(proj));
        cum.push_back(full - im_in);
    }
    for (size_t d = 0; d < cum.size(); ++d)
        per_exact.push_back(d == 0 ? cum[0] : cum[d] - cum[d - 1]);
    if (image_out) *image_out = std::move(image);
    if (monos_out) *monos_out = monos;
    return per_exact;
}

} // namespace derham_detail

inline VolumeQuotientReport volume_quotient(const AtlasSpec& spec, int bound) {
    VolumeQuotientReport rep;
    rep.bound = bound;
    if (spec.dimS() != 1 || spec.N() < 2) return rep;
    const Polynomial& phi = spec.phi[0];
    QMatrix image;
    std::vector<ExpVec> monos;
    rep.exact_dims =
        derham_detail::volume_quotient_dims(spec.model_ring, phi, bound, &image, &monos);
    auto hi = derham_detail::volume_quotient_dims(spec.model_ring, phi, bound + 2, nullptr, nullptr);
    hi.resize(rep.exact_dims.size());
    rep.stabilized = (hi == rep.exact_dims);
    // Phi^c volume classes independent modulo the image
    std::map<ExpVec, int> idx;
    for (size_t i = 0; i < monos.size(); ++i) idx[monos[i]] = static_cast<int>(i);
    QMatrix span = image;
    size_t r0 = span.empty() ? 0 : rank(span);
    int copies = 0;
    Polynomial pw = Polynomial::constant(spec.model_ring, Rational(1));
    while (pw.degree() <= bound && copies <= bound + 1) {
        QRow row(monos.size(), Rational(0));
        for (auto& [e, coef] : pw.terms()) row[idx.at(e)] = coef;
        span.push_back(std::move(row));
        ++copies;
        if (phi.degree() < 1) break;
        pw = pw * phi;
    }
    rep.volume_class_survives = rank(span) == r0 + copies;
    long long total = 0;
    for (auto v : rep.exact_dims) total += v;
    rep.generates = rep.volume_class_survives && total == copies;
    return rep;
}

} // namespace kdr

#pragma once

// Batch suites shared by the command-line driver and the acceptance tests.

#include "derham.hpp"
#include "glue.hpp"
#include "io.hpp"

namespace kdr {

// seeded identity suite: differential relations and Leibniz residuals on
// pseudo-random elements, exact zero required
inline void verify_identities(Report& rep, const KDContextPtr& ctx, const std::string& tag,
                              int samples, uint64_t seed) {
    KDRandom rng(seed);
    int bad_k2 = 0, bad_d2 = 0, bad_anti = 0, bad_p2 = 0, bad_t2 = 0, bad_pt = 0, bad_sum = 0;
    int bad_leib_k = 0, bad_leib_d = 0, bad_split = 0;
    for (int it = 0; it < samples; ++it) {
        auto e = random_element(ctx, rng);
        auto dk = apply_diff(e, Diff::Koszul);
        auto dr = apply_diff(e, Diff::DeRham);
        auto dp = apply_diff(e, Diff::Partial);
        auto dt = apply_diff(e, Diff::Tilde);
        if (!apply_diff(dk, Diff::Koszul).is_zero()) ++bad_k2;
        if (!apply_diff(dr, Diff::DeRham).is_zero()) ++bad_d2;
        if (!(apply_diff(dr, Diff::Koszul) + apply_diff(dk, Diff::DeRham)).is_zero()) ++bad_anti;
        if (!apply_diff(dp, Diff::Partial).is_zero()) ++bad_p2;
        if (!apply_diff(dt, Diff::Tilde).is_zero()) ++bad_t2;
        if (!(apply_diff(dt, Diff::Partial) + apply_diff(dp, Diff::Tilde)).is_zero()) ++bad_pt;
        if (!((dp + dt) - dk).is_zero()) ++bad_sum;
        // Leibniz on a homogeneous-parity left factor
        auto a = random_element(ctx, rng, 1);
        int pa = 0;
        bool homogeneous = true;
        try {
            pa = parity_of(a);
        } catch (...) {
            homogeneous = false;
        }
        if (homogeneous && !a.is_zero()) {
            auto b = random_element(ctx, rng);
            for (Diff d : {Diff::Koszul, Diff::DeRham}) {
                auto lhs = apply_diff(kd_mul(a, b), d);
                auto rhs = kd_mul(apply_diff(a, d), b) +
                           (pa ? -kd_mul(a, apply_diff(b, d)) : kd_mul(a, apply_diff(b, d)));
                if (!(lhs - rhs).is_zero()) (d == Diff::Koszul ? ++bad_leib_k : ++bad_leib_d);
            }
        }
        auto parts = ctx->bidegree_split(e);
        KDElement sum = ctx->zero();
        for (auto& [key, comp] : parts) sum += comp;
        if (!(sum == e)) ++bad_split;
    }
    auto chk = [&](const std::string& n, int bad) {
        rep.check(tag + ": " + n, bad == 0,
                  bad ? std::to_string(bad) + "/" + std::to_string(samples) + " residuals" : "");
    };
    chk("koszul^2 = 0", bad_k2);
    chk("derham^2 = 0", bad_d2);
    chk("koszul derham + derham koszul = 0", bad_anti);
    chk("partial^2 = 0", bad_p2);
    chk("tilde^2 = 0", bad_t2);
    chk("partial tilde + tilde partial = 0", bad_pt);
    chk("partial + tilde = koszul", bad_sum);
    chk("leibniz (koszul)", bad_leib_k);
    chk("leibniz (derham)", bad_leib_d);
    chk("bidegree split sums back", bad_split);
}

inline void verify_strip_and_matrices(Report& rep, const KDContextPtr& ctx, const std::string& tag) {
    bool strip_ok = true;
    for (int p = -1; p <= ctx->m() + 2; ++p)
        for (int s = -1; s <= ctx->m() + ctx->l() + 2; ++s) {
            bool inside = p >= 0 && s >= 0 && (p - s >= -ctx->l()) && (p - s <= ctx->m());
            if (!inside && !ctx->component_basis(p, s).empty()) strip_ok = false;
        }
    rep.check(tag + ": strip bound on components", strip_ok);
    bool comp_ok = true;
    for (int p = 0; p <= ctx->m() && comp_ok; ++p)
        for (int s = 1; s <= ctx->m() + ctx->l() && comp_ok; ++s) {
            auto m1 = ctx->operator_matrix(Diff::Koszul, p, s);
            auto m2 = ctx->operator_matrix(Diff::Koszul, p, s - 1);
            for (int r = 0; r < m2.rows && comp_ok; ++r)
                for (int j = 0; j < m1.cols && comp_ok; ++j) {
                    Polynomial sum(ctx->ring());
                    for (int k = 0; k < m1.rows; ++k) sum += m2.a[r][k] * m1.a[k][j];
                    if (!sum.is_zero()) comp_ok = false;
                }
        }
    rep.check(tag + ": koszul matrices compose to zero", comp_ok);
}

inline Report verify_suite(const SpecVariant& spec, const std::string& input, int samples,
                           uint64_t seed) {
    Report rep("verify", input);
    rep.option("samples", samples);
    rep.option("seed", seed);
    if (std::holds_alternative<Chart>(spec)) {
        const Chart& chart = std::get<Chart>(spec);
        auto d = validate_chart(chart);
        rep.check("chart: expected codimension", d.codim_ok, d.detail);
        rep.check("chart: regular sequence", d.regular, d.detail);
        auto ctx = build_algebra(chart);
        verify_identities(rep, ctx, chart.label, samples, seed);
        verify_strip_and_matrices(rep, ctx, chart.label);
    } else {
        const AtlasSpec& atlas = std::get<AtlasSpec>(spec);
        auto lift = build_based_lifting(atlas);
        for (auto& K : lift.subsets) {
            if (!lift.in_nerve(K)) continue;
            auto ctx = lift.context(K);
            verify_identities(rep, ctx, subset_label(K), samples, seed + K.size());
        }
    }
    return rep;
}

inline Report cohomology_suite(const Chart& chart, const std::string& input, int pmax, int smax,
                               int deg) {
    Report rep("cohomology", input);
    rep.option("pmax", pmax);
    rep.option("smax", smax);
    rep.option("deg", deg);
    auto ctx = build_algebra(chart);
    auto minors = critical_minors(chart);
    Json& tbl = rep.table("modules");
    tbl = Json::array();
    for (int p = 0; p <= pmax; ++p)
        for (int s = 0; s <= smax; ++s) {
            bool in_strip = (p - s >= -ctx->l()) && (p - s <= ctx->m());
            auto H = koszul_cohomology(ctx, p, s);
            auto ann = annihilator_checks(H, s > 0 ? minors : std::vector<Polynomial>{}, 4);
            Json row;
            row["p"] = p;
            row["s"] = s;
            row["strip"] = in_strip;
            row["ambient_rank"] = H.ambient_rank;
            row["zero"] = is_zero_cohomology(H);
            row["hilbert"] = hilbert_json(hilbert(H, deg));
            row["generators"] = static_cast<int>(H.kernel_gens.size());
            row["relations"] = static_cast<int>(H.presentation.relations.size());
            rep.check("f annihilates H^{" + std::to_string(p) + "," + std::to_string(s) + "}",
                      ann.f_annihilates);
            if (s > 0) {
                row["minor_powers"] = ann.minor_power;
                rep.check("minors annihilate H^{" + std::to_string(p) + "," + std::to_string(s) +
                              "} (power <= 4)",
                          ann.all_minors_annihilate);
            }
            if (!in_strip)
                rep.check("H^{" + std::to_string(p) + "," + std::to_string(s) + "} vanishes off-strip",
                          is_zero_cohomology(H));
            tbl.push_back(row);
        }
    Json& pij = rep.table("pi_comparison");
    pij = Json::array();
    for (int p = 0; p <= pmax; ++p) {
        auto pr = check_pi_iso(ctx, p, deg);
        Json row;
        row["p"] = p;
        row["equal"] = pr.equal;
        row["hf_koszul"] = pr.hf_koszul;
        row["hf_direct"] = pr.hf_direct;
        pij.push_back(row);
        rep.check("pi comparison at p=" + std::to_string(p), pr.equal,
                  pr.equal ? "" : "first mismatch at degree " + std::to_string(pr.first_mismatch));
    }
    return rep;
}

inline Report cech_suite(const AtlasSpec& atlas, const std::string& input, int deg, int pmax_in) {
    Report rep("cech", input);
    rep.option("deg", deg);
    auto lift = build_based_lifting(atlas);
    rep.check("transition identities w*(f_K) = h f_K'", lift.identities_ok);
    rep.check("h transitivity over all nerve chains", lift.transitivity_ok,
              lift.failures.empty() ? "" : lift.failures.front());
    if (!lift.transitivity_ok)
        rep.check("transitivity discrepancies are Koszul syzygies (vanish in the quotient algebra)",
                  lift.discrepancies_are_syzygies);
    Json& fails = rep.table("transitivity_witnesses");
    fails = lift.failures;

    int pmax = pmax_in >= 0 ? pmax_in : 1;
    int n = atlas.n_charts();
    bool delta_ok = true;
    std::vector<std::string> delta_witness;
    for (int p = 0; p <= pmax; ++p)
        for (int s = 0; s <= 3; ++s)
            for (int q = 0; q + 2 <= n; ++q) {
                auto dr = check_delta_squared(lift, p, s, q);
                if (!dr.zero) {
                    delta_ok = false;
                    for (auto& w : dr.witnesses)
                        if (delta_witness.size() < 8) delta_witness.push_back(w);
                }
            }
    rep.check("lifted coboundary squares to zero", delta_ok,
              delta_witness.empty() ? "" : delta_witness.front());
    rep.table("delta_squared_witnesses") = delta_witness;

    bool ranks_ok = true, square_ok = true, strip_ok = true;
    for (int p = 0; p <= pmax; ++p) {
        auto tc = totalize_truncate(lift, p, false);
        strip_ok = strip_ok && total_strip_ok(tc);
        int lo = 0, hi = 0;
        for (auto& [d2, blocks] : tc.terms) { lo = std::min(lo, d2); hi = std::max(hi, d2); }
        for (int d2 = lo; d2 <= hi; ++d2)
            if (total_rank_constructed(tc, d2) != total_rank_closed_form(lift, p, d2))
                ranks_ok = false;
        auto sq = check_total_squared(tc);
        if (!sq.zero) square_ok = false;
    }
    rep.check("total term ranks match the closed form", ranks_ok);
    rep.check("total strip bound", strip_ok);
    rep.check("totalized differential squares to zero", square_ok);

    Json& les = rep.table("les");
    les = Json::array();
    if (n == 1) {
        for (int p = 0; p <= atlas.N(); ++p) {
            auto lr = les_check(lift, p, std::min(deg, 8));
            Json row;
            row["p"] = p;
            row["rank_additivity"] = lr.rank_additivity;
            row["euler_zero"] = lr.euler_zero;
            les.push_back(row);
            rep.check("rank additivity of the kernel sequence at p=" + std::to_string(p),
                      lr.rank_additivity);
            rep.check("alternating cohomology sums vanish at p=" + std::to_string(p), lr.euler_zero);
        }
        DeRhamOptions opts;
        opts.degree_bound = deg;
        auto dr = derham_total_cohomology(lift, opts);
        Json& drj = rep.table("derham");
        for (auto& [k, v] : dr.slice.per_base_exact) {
            Json row;
            row["degree"] = k;
            row["per_base_exact"] = v;
            row["window_dim"] = dr.slice.window_dim.at(k);
            row["stabilized"] = dr.stabilized_by_degree.at(k);
            drj.push_back(row);
        }
        rep.check("H^0 is the base-function pullback (one class per base degree)",
                  dr.slice.per_base_exact.count(0) &&
                      dr.slice.per_base_exact.at(0) ==
                          std::vector<long long>(dr.slice.per_base_exact.at(0).size(), 1) &&
                      dr.stabilized_by_degree.at(0));
        if (atlas.dimS() == 1 && atlas.N() >= 2) {
            auto vq = volume_quotient(atlas, deg);
            Json& vj = rep.table("volume_quotient");
            vj["exact_dims"] = vq.exact_dims;
            vj["volume_class_survives"] = vq.volume_class_survives;
            vj["generates"] = vq.generates;
            vj["stabilized"] = vq.stabilized;
            rep.check("volume quotient carries the Milnor-rank shadow", vq.volume_class_survives);
        }
    }
    return rep;
}

inline Report glue_suite(const Chart& a, const Chart& b, const std::string& input, int p, int s,
                         int deg) {
    Report rep("glue", input);
    rep.option("p", p);
    rep.option("s", s);
    rep.option("deg", deg);
    auto gr = glue_compare(a, b, p, s, deg);
    rep.check("identification derived and chains complete", !gr.stuck, gr.detail);
    if (!gr.stuck) {
        rep.check("hilbert functions equal across the joint chart", gr.ok, gr.detail);
        Json& t = rep.table("hilbert");
        t["first"] = gr.hf_a;
        t["joint"] = gr.hf_joint;
        t["second"] = gr.hf_b;
        Json& chains = rep.table("chains");
        chains = Json::array();
        auto add_chain = [&](const char* name, const std::vector<ChainStep>& steps) {
            for (auto& st : steps) {
                Json row;
                row["chain"] = name;
                row["target"] = st.red.morphism.target.label;
                row["reduced"] = st.red.reduced.label;
                row["descends"] = st.descends;
                row["surjective"] = st.surjective;
                row["derham_commutes"] = st.derham_commutes;
                row["hilbert_equal"] = st.hf_equal;
                chains.push_back(row);
            }
        };
        add_chain("toward_first", gr.chain_a);
        add_chain("toward_second", gr.chain_b);
    }
    return rep;
}

} // namespace kdr

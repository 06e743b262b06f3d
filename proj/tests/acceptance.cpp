// Acceptance suite: one checkable criterion per section, each printed as a
// single pass/fail line with clause details. Run all criteria or a single
// one with --criterion N; --data points at the shipped chart/atlas files.

#include <chrono>
#include <iostream>
#include <sstream>

#include "kdr/suites.hpp"

using namespace kdr;
using Clock = std::chrono::steady_clock;

namespace {

struct Criterion {
    int id;
    std::string summary;
    bool pass = true;
    std::vector<std::string> clauses;
    double seconds = 0;

    void clause(const std::string& name, bool ok, const std::string& detail = "") {
        pass = pass && ok;
        std::string line = std::string(ok ? "ok   " : "FAIL ") + name;
        if (!detail.empty()) line += "  -- " + detail;
        clauses.push_back(line);
    }
};

std::string data_dir = "data";

Chart load_chart(const std::string& name) {
    auto spec = load_spec(data_dir + "/" + name);
    return std::get<Chart>(spec);
}
AtlasSpec load_atlas(const std::string& name) {
    auto spec = load_spec(data_dir + "/" + name);
    return std::get<AtlasSpec>(spec);
}

std::string dims_str(const std::vector<long long>& v) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ")";
    return os.str();
}

// criterion 1: exact differential identities on seeded random elements
Criterion criterion1() {
    Criterion c;
    c.id = 1;
    c.summary = "identity suite on E1, E2, E3 and the 3-chart atlas (1000 samples each)";
    const int samples = 1000;
    const uint64_t seed = 12345;
    auto run = [&](const KDContextPtr& ctx, const std::string& tag, uint64_t sd) {
        Report rep("identity", tag);
        verify_identities(rep, ctx, tag, samples, sd);
        c.clause(tag + " identities (" + std::to_string(rep.checks()) + " relations)",
                 rep.failures() == 0);
    };
    run(build_algebra(load_chart("e1.json")), "E1", seed);
    run(build_algebra(load_chart("e2.json")), "E2", seed + 1);
    run(build_algebra(load_chart("e3.json")), "E3", seed + 2);
    auto lift = build_based_lifting(load_atlas("atlas3.json"));
    uint64_t sd = seed + 10;
    for (auto& K : lift.subsets) run(lift.context(K), "atlas3 " + subset_label(K), ++sd);
    return c;
}

// criterion 2: pi comparison of H^{p,0} with the direct quotient
Criterion criterion2() {
    Criterion c;
    c.id = 2;
    c.summary = "pi comparison to degree 10 on E1 (p<=1), E2 and E3 (p<=2)";
    auto run = [&](const Chart& chart, int pmax) {
        auto ctx = build_algebra(chart);
        for (int p = 0; p <= pmax; ++p) {
            auto rep = check_pi_iso(ctx, p, 10);
            c.clause(chart.label + " p=" + std::to_string(p), rep.equal,
                     rep.equal ? "" : "first mismatch at degree " + std::to_string(rep.first_mismatch));
        }
    };
    run(load_chart("e1.json"), 1);
    run(load_chart("e2.json"), 2);
    run(load_chart("e3.json"), 2);
    return c;
}

// criterion 3: Milnor regression and dim H^{2,0}(E3)
Criterion criterion3() {
    Criterion c;
    c.id = 3;
    c.summary = "Milnor numbers 1, 4, 6, infinite and dim H^{2,0}(E3) = 1";
    auto R = make_ring({"x", "y"});
    auto mu = [&](const std::string& s) { return milnor_number(parse_poly(R, s)); };
    auto expect = [&](const std::string& s, std::optional<long long> want) {
        auto got = mu(s);
        bool ok = (got == want);
        std::string gs = got ? std::to_string(*got) : "infinite";
        std::string ws = want ? std::to_string(*want) : "infinite";
        c.clause("milnor(" + s + ") = " + ws, ok, ok ? "" : "got " + gs);
    };
    expect("x^2 + y^2", 1);
    expect("x^3 + y^3", 4);
    expect("x^3 + y^4", 6);
    expect("x^2*y^2", std::nullopt);
    auto ctx = build_algebra(load_chart("e3.json"));
    auto H = koszul_cohomology(ctx, 2, 0);
    auto hf = hilbert(H, 10);
    c.clause("dim H^{2,0}(E3) = 1", hf.back() == 1 && hf.front() == 1, dims_str(hf));
    return c;
}

// criterion 4: higher Koszul cohomology values
Criterion criterion4() {
    Criterion c;
    c.id = 4;
    c.summary = "H^{2,1}(E2) cyclic with annihilator (xy); H^{1,1}(E1) = 0; H^{p,1}(E3)";
    {
        auto ctx = build_algebra(load_chart("e2.json"));
        auto H = koszul_cohomology(ctx, 2, 1);
        auto rep = cyclic_with_annihilator(H, {parse_poly(ctx->ring(), "x*y")});
        c.clause("H^{2,1}(E2) cyclic", rep.cyclic);
        c.clause("annihilator equals (xy) (two-sided membership)", rep.ann_matches);
        auto ex = exact_degree_dims(hilbert(H, 8));
        std::vector<long long> want{1, 2, 2, 2, 2, 2, 2, 2, 2};
        c.clause("exact-degree Hilbert values (1,2,2,2,2,2,2,2,2)", ex == want, dims_str(ex));
    }
    {
        auto ctx = build_algebra(load_chart("e1.json"));
        c.clause("H^{1,1}(E1) = 0", is_zero_cohomology(koszul_cohomology(ctx, 1, 1)));
    }
    {
        auto ctx = build_algebra(load_chart("e3.json"));
        // strip for s = 1: 0 <= p <= m + 1
        for (int p = 0; p <= ctx->m() + 1; ++p) {
            auto H = koszul_cohomology(ctx, p, 1);
            bool zero = is_zero_cohomology(H);
            c.clause("H^{" + std::to_string(p) + ",1}(E3) = 0", zero,
                     zero ? ""
                          : "nonzero: hilbert " + dims_str(hilbert(H, 4)) +
                                "; depth vanishing stops at p = fiber count (see README: known mathematical limitations)");
        }
    }
    return c;
}

// criterion 5: annihilation and support certificates
Criterion criterion5() {
    Criterion c;
    c.id = 5;
    c.summary = "f_i H^{p,s} = 0 everywhere; Jacobian minors annihilate s>0 modules";
    for (auto name : {"e1.json", "e2.json", "e3.json"}) {
        Chart chart = load_chart(name);
        auto ctx = build_algebra(chart);
        auto minors = critical_minors(chart);
        bool f_ok = true, m_ok = true;
        for (int p = 0; p <= ctx->m(); ++p)
            for (int s = 0; s <= ctx->m() + ctx->l(); ++s) {
                auto H = koszul_cohomology(ctx, p, s);
                auto rep = annihilator_checks(H, s > 0 ? minors : std::vector<Polynomial>{}, 4);
                f_ok = f_ok && rep.f_annihilates;
                if (s > 0) m_ok = m_ok && rep.all_minors_annihilate;
            }
        c.clause(chart.label + ": f annihilates every module", f_ok);
        c.clause(chart.label + ": minors annihilate s>0 modules at power <= 4", m_ok);
    }
    return c;
}

// criterion 6: basis independence through joint charts
Criterion criterion6() {
    Criterion c;
    c.id = 6;
    c.summary = "glue comparisons: E1 vs E1+aux at (1,1); E2 vs E2+aux at (2,1)";
    {
        auto rep = glue_compare(load_chart("e1.json"), load_chart("e1_aux.json"), 1, 1, 10);
        c.clause("E1 vs E1+aux: chains complete", !rep.stuck, rep.detail);
        c.clause("E1 vs E1+aux: Hilbert functions equal, d commutes", rep.ok, rep.detail);
    }
    {
        auto rep = glue_compare(load_chart("e2.json"), load_chart("e2_aux1.json"), 2, 1, 10);
        c.clause("E2 vs E2+aux: chains complete", !rep.stuck, rep.detail);
        c.clause("E2 vs E2+aux: Hilbert functions equal, d commutes", rep.ok, rep.detail);
        c.clause("E2 joint Hilbert matches H^{2,1}(E2)",
                 !rep.stuck && rep.hf_a == rep.hf_joint && rep.hf_b == rep.hf_joint,
                 "A=" + dims_str(rep.hf_a) + " joint=" + dims_str(rep.hf_joint) + " B=" +
                     dims_str(rep.hf_b));
    }
    {
        auto rep = glue_compare(load_chart("e2_aux1.json"), load_chart("e2_aux2.json"), 2, 1, 8);
        c.clause("E2 one vs two auxiliary equations: equal Hilbert functions", !rep.stuck && rep.ok,
                 rep.detail);
    }
    return c;
}

// criterion 7: the Cech suite on the translated atlas
Criterion criterion7() {
    Criterion c;
    c.id = 7;
    c.summary = "Cech suite on the 3-chart translated atlas";
    auto lift = build_based_lifting(load_atlas("atlas3.json"));
    c.clause("lifting constructed, defining identities exact", lift.identities_ok);
    c.clause("h-transitivity exact", lift.transitivity_ok,
             lift.transitivity_ok
                 ? ""
                 : std::to_string(lift.failures.size()) +
                       " failing chains; discrepancies are Koszul syzygies: " +
                       (lift.discrepancies_are_syzygies ? "yes" : "no") + " (see README: known mathematical limitations)");
    bool delta_ok = true;
    std::string witness;
    for (int p = 0; p <= 1; ++p)
        for (int s = 0; s <= 3; ++s)
            for (int q = 0; q <= 2; ++q) {
                auto rep = check_delta_squared(lift, p, s, q);
                if (!rep.zero && witness.empty()) witness = rep.witnesses.front();
                delta_ok = delta_ok && rep.zero;
            }
    c.clause("delta^2 = 0 for p<=1, s<=3, q<=2", delta_ok, witness);
    bool square_ok = true, ranks_ok = true;
    for (int p = 0; p <= 1; ++p) {
        auto tc = totalize_truncate(lift, p, false);
        auto sq = check_total_squared(tc);
        square_ok = square_ok && sq.zero;
        int lo = 0, hi = 0;
        for (auto& [deg, blocks] : tc.terms) { lo = std::min(lo, deg); hi = std::max(hi, deg); }
        for (int deg = lo - 1; deg <= hi + 1; ++deg)
            ranks_ok = ranks_ok && (total_rank_constructed(tc, deg) ==
                                    total_rank_closed_form(lift, p, deg));
        ranks_ok = ranks_ok && total_strip_ok(tc);
    }
    c.clause("totalized differential squares to zero", square_ok,
             square_ok ? "" : "delta^2 component (commutation twist part cancels exactly)");
    c.clause("TR term ranks match the closed-form enumeration", ranks_ok);
    return c;
}

// criterion 8: exact-triangle bookkeeping on single-chart atlases
Criterion criterion8() {
    Criterion c;
    c.id = 8;
    c.summary = "rank additivity and Euler sums for TR_ker -> TR -> Cech(Omega^p)";
    for (auto name : {"atlas1_e1.json", "atlas1_e3.json"}) {
        auto atlas = load_atlas(name);
        auto lift = build_based_lifting(atlas);
        for (int p = 0; p <= atlas.N(); ++p) {
            auto rep = les_check(lift, p, 8);
            std::string tag = std::string(name) + " p=" + std::to_string(p);
            c.clause(tag + ": termwise rank additivity to degree 8", rep.rank_additivity);
            c.clause(tag + ": alternating cohomology sums vanish", rep.euler_zero, rep.detail);
        }
    }
    return c;
}

// criterion 9: De Rham desk check on single-chart E3
Criterion criterion9() {
    Criterion c;
    c.id = 9;
    c.summary = "De Rham windows on single-chart E3 at degree bound 12";
    auto atlas = load_atlas("atlas1_e3.json");
    auto lift = build_based_lifting(atlas);
    DeRhamOptions opts;
    opts.degree_bound = 12;
    opts.base_report = 4;
    auto rep = derham_total_cohomology(lift, opts);
    bool h0_ok = rep.slice.per_base_exact.count(0) &&
                 rep.slice.per_base_exact.at(0) == std::vector<long long>{1, 1, 1, 1, 1} &&
                 rep.stabilized_by_degree.at(0);
    c.clause("H^0 has the Hilbert function of the base ring (stabilized)", h0_ok,
             rep.slice.per_base_exact.count(0) ? dims_str(rep.slice.per_base_exact.at(0)) : "missing");
    long long h2lit = rep.slice.window_dim.count(2) ? rep.slice.window_dim.at(2) : 0;
    auto vq = volume_quotient(atlas, 12);
    bool vol_ok = vq.volume_class_survives && vq.generates && vq.stabilized;
    c.clause("rank-1 slice generated by the volume class (stabilized at bound 12)", vol_ok,
             "volume quotient dims " + dims_str(vq.exact_dims) +
                 "; literal window H^2 of the sections complex = " + std::to_string(h2lit) +
                 " (see README: known mathematical limitations)");
    return c;
}

} // namespace

int main(int argc, char** argv) {
    int which = 0;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--criterion" && i + 1 < argc) which = std::atoi(argv[++i]);
        else if (a == "--data" && i + 1 < argc) data_dir = argv[++i];
    }
    std::vector<Criterion (*)()> all{criterion1, criterion2, criterion3, criterion4, criterion5,
                                     criterion6, criterion7, criterion8, criterion9};
    // stated budgets; criteria 5, 6, 8 carry none
    const double none = 1e9;
    std::vector<double> budgets{60, 30, 10, 60, none, none, 120, none, 120};
    bool all_pass = true;
    for (size_t i = 0; i < all.size(); ++i) {
        int id = static_cast<int>(i) + 1;
        if (which != 0 && which != id) continue;
        auto t0 = Clock::now();
        Criterion c = all[i]();
        auto t1 = Clock::now();
        c.seconds = std::chrono::duration<double>(t1 - t0).count();
        if (c.seconds > budgets[i])
            c.clause("time budget " + std::to_string(static_cast<int>(budgets[i])) + "s", false,
                     std::to_string(c.seconds) + "s");
        std::ostringstream head;
        head << (c.pass ? "[PASS]" : "[FAIL]") << " criterion " << c.id << ": " << c.summary << " ("
             << static_cast<int>(c.seconds * 1000) << " ms)";
        std::cout << head.str() << "\n";
        for (auto& line : c.clauses) std::cout << "    " << line << "\n";
        all_pass = all_pass && c.pass;
    }
    return all_pass ? 0 : 1;
}

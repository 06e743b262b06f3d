#pragma once

// Comparison of Koszul cohomology across two presentations of the same
// model: build the joint chart, reduce toward each factor through explicit
// elimination chains, and certify along every step that the pullback
// descends to cohomology, is surjective on classes, commutes with the
// induced De Rham operator, and preserves truncated Hilbert functions.

#include <sstream>

#include "cohomology.hpp"

namespace kdr {

struct ChainStep {
    ReductionResult red;
    bool descends = false;
    bool surjective = false;
    bool derham_commutes = false;
    bool hf_equal = false;
};

struct GlueReport {
    bool ok = false;
    bool stuck = false;
    std::string detail;
    std::vector<long long> hf_a, hf_joint, hf_b;
    std::vector<ChainStep> chain_a, chain_b;
};

namespace detail {

// Eliminate fiber variables outside keep until none remain; each step must
// find a relation solvable for such a variable.
inline bool eliminate_outside(Chart chart, const std::set<std::string>& keep,
                              std::vector<ReductionResult>& steps, std::string& err) {
    for (;;) {
        int extra = -1;
        for (int j = 0; j < chart.m(); ++j)
            if (!keep.count(chart.fiber_vars[j])) { extra = j; break; }
        if (extra < 0) return true;
        bool done = false;
        for (int j = chart.m() - 1; j >= 0 && !done; --j) {
            if (keep.count(chart.fiber_vars[j])) continue;
            for (int r = 0; r < chart.l() && !done; ++r) {
                try {
                    ReductionResult res = reduction_step(chart, r, j);
                    chart = res.reduced;
                    steps.push_back(std::move(res));
                    done = true;
                } catch (const std::exception&) {
                }
            }
        }
        if (!done) {
            err = "reduction chain stuck: no relation eliminates variable '" +
                  chart.fiber_vars[extra] + "'";
            return false;
        }
    }
}

// Expressions of b's fiber variables on U in terms of a's variables,
// derived by eliminating the variables of b that a does not carry.
inline std::optional<std::vector<Polynomial>> derive_ident(const Chart& a, const Chart& b,
                                                           std::string& err) {
    std::set<std::string> keep;
    for (auto& v : a.fiber_vars) keep.insert(v);
    for (auto& v : b.base_vars) keep.insert(v);
    std::vector<ReductionResult> steps;
    Chart work = b;
    std::vector<Polynomial> exprs;  // per b fiber var, over the working ring
    for (int j = 0; j < b.m(); ++j) exprs.push_back(Polynomial::variable(b.ring, j));
    if (!eliminate_outside(work, keep, steps, err)) return std::nullopt;
    for (auto& st : steps)
        for (auto& e : exprs) e = e.substitute(st.reduced.ring, st.morphism.w);
    std::vector<Polynomial> ident;
    for (auto& e : exprs) {
        try {
            ident.push_back(rename_into(e, a.ring));
        } catch (const std::exception&) {
            err = "identification uses a variable absent from the first chart";
            return std::nullopt;
        }
    }
    return ident;
}

inline ChainStep check_step(const ReductionResult& red, int p, int s, int dmax,
                            std::map<std::string, CohomologyModule>& cache) {
    ChainStep step;
    step.red = red;
    auto get = [&](const Chart& c, int pp, int ss) -> CohomologyModule& {
        std::string key;
        for (auto& v : c.ring->vars) key += v + ";";
        for (auto& f : c.f) key += f.to_string() + ";";
        key += "#" + std::to_string(pp) + "," + std::to_string(ss);
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache.emplace(key, koszul_cohomology(build_algebra(c), pp, ss)).first;
        return it->second;
    };
    CohomologyModule& Ht = get(red.morphism.target, p, s);
    CohomologyModule& Hs = get(red.reduced, p, s);
    Pullback pb(red.morphism, Hs.ctx, Ht.ctx);

    const RingPtr& R = Hs.ctx->ring();
    SubmoduleOracle ker_s(Hs.kernel_gens, Hs.ambient_rank, R);
    SubmoduleOracle im_s(Hs.image_gens, Hs.ambient_rank, R);
    step.descends = true;
    std::vector<ModVec> pushed;
    for (auto& k : Ht.kernel_gens) {
        ModVec v = Hs.ctx->to_vec(pb(Ht.ctx->from_vec(k, p, s)), p, s);
        if (!ker_s.contains(v)) step.descends = false;
        pushed.push_back(std::move(v));
    }
    for (auto& g : Ht.image_gens) {
        ModVec v = Hs.ctx->to_vec(pb(Ht.ctx->from_vec(g, p, s)), p, s);
        if (!im_s.contains(v)) step.descends = false;
    }
    {
        std::vector<ModVec> span = pushed;
        for (auto& g : Hs.image_gens) span.push_back(g);
        SubmoduleOracle reach(span, Hs.ambient_rank, R);
        step.surjective = true;
        for (auto& k : Hs.kernel_gens)
            if (!reach.contains(k)) { step.surjective = false; break; }
    }
    {
        CohomologyModule& HsUp = get(red.reduced, p + 1, s);
        step.derham_commutes = true;
        SubmoduleOracle im_up(HsUp.image_gens, HsUp.ambient_rank, R);
        for (auto& k : Ht.kernel_gens) {
            KDElement kt = Ht.ctx->from_vec(k, p, s);
            KDElement lhs = pb(apply_diff(kt, Diff::DeRham));
            KDElement rhs = apply_diff(pb(kt), Diff::DeRham);
            KDElement diff = lhs - rhs;
            if (diff.is_zero()) continue;
            if (HsUp.ambient_rank == 0 || !im_up.contains(Hs.ctx->to_vec(diff, p + 1, s))) {
                step.derham_commutes = false;
                break;
            }
        }
    }
    step.hf_equal = intrinsic_hilbert(Ht, dmax) == intrinsic_hilbert(Hs, dmax) &&
                    hilbert(Ht, dmax) == hilbert(Hs, dmax);
    return step;
}

} // namespace detail

inline GlueReport glue_compare(const Chart& a, const Chart& b, int p, int s, int dmax = 10) {
    GlueReport rep;
    std::string err;
    auto ident_b = detail::derive_ident(a, b, err);
    if (!ident_b) {
        rep.stuck = true;
        rep.detail = err;
        return rep;
    }
    Chart joint = product_chart(a, b, *ident_b);
    std::map<std::string, CohomologyModule> cache;

    // chain toward a: drop the primed copies of b's variables
    {
        std::set<std::string> keep;
        for (auto& v : a.fiber_vars) keep.insert(v);
        std::vector<ReductionResult> steps;
        Chart work = joint;
        if (!detail::eliminate_outside(work, keep, steps, err)) {
            rep.stuck = true;
            rep.detail = "toward first factor: " + err;
            return rep;
        }
        for (auto& st : steps) rep.chain_a.push_back(detail::check_step(st, p, s, dmax, cache));
    }
    // chain toward b: keep only the primed variables
    {
        std::set<std::string> keep;
        for (int j = 0; j < b.m(); ++j) keep.insert(b.fiber_vars[j] + "'");
        std::vector<ReductionResult> steps;
        Chart work = joint;
        if (!detail::eliminate_outside(work, keep, steps, err)) {
            rep.stuck = true;
            rep.detail = "toward second factor: " + err;
            return rep;
        }
        for (auto& st : steps) rep.chain_b.push_back(detail::check_step(st, p, s, dmax, cache));
    }

    CohomologyModule Ha = koszul_cohomology(build_algebra(a), p, s);
    CohomologyModule Hj = koszul_cohomology(build_algebra(joint), p, s);
    CohomologyModule Hb = koszul_cohomology(build_algebra(b), p, s);
    rep.hf_a = hilbert(Ha, dmax);
    rep.hf_joint = hilbert(Hj, dmax);
    rep.hf_b = hilbert(Hb, dmax);

    rep.ok = (rep.hf_a == rep.hf_joint) && (rep.hf_b == rep.hf_joint);
    for (auto& st : rep.chain_a)
        rep.ok = rep.ok && st.descends && st.surjective && st.derham_commutes && st.hf_equal;
    for (auto& st : rep.chain_b)
        rep.ok = rep.ok && st.descends && st.surjective && st.derham_commutes && st.hf_equal;
    if (!rep.ok && rep.detail.empty()) {
        std::ostringstream os;
        os << "hilbert functions:";
        auto dump = [&](const char* name, const std::vector<long long>& v) {
            os << " " << name << "=[";
            for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
            os << "]";
        };
        dump("A", rep.hf_a);
        dump("joint", rep.hf_joint);
        dump("B", rep.hf_b);
        rep.detail = os.str();
    }
    return rep;
}

} // namespace kdr

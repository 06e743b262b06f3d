#pragma once

// Atlases of relative charts over a shared polynomial model, their
// intersection charts, and the based lifting: per-subset bases f_K (group I
// coordinate differences, group II graph relations anchored at min K) and
// transition matrices built blockwise from difference quotients.
//
// The builder verifies the defining identity of every transition exactly,
// then checks transitivity h_K^{K''} = h_K^{K'} h_{K'}^{K''} over every
// chain of nerve subsets. Failures are reported with the failing chain and
// the discrepancy is certified to be a syzygy of f_{K''} (so it vanishes
// under the Koszul relations); they are not repaired silently.

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "morphism.hpp"
#include "qmatrix.hpp"

namespace kdr {

using Subset = std::vector<int>;  // strictly increasing chart indices

struct AtlasChartMap {
    std::vector<Polynomial> images;  // chart coordinates as polynomials in the model vars
};

struct AtlasSpec {
    RingPtr model_ring;                   // fiber model variables only
    std::vector<std::string> base_vars;
    std::vector<Polynomial> phi;          // over model_ring, one per base var
    std::vector<AtlasChartMap> charts;
    std::set<Subset> nerve;               // nonempty-intersection subsets

    int n_charts() const { return static_cast<int>(charts.size()); }
    int N() const { return static_cast<int>(model_ring->nvars()); }
    int dimS() const { return static_cast<int>(base_vars.size()); }
};

inline void validate_atlas(const AtlasSpec& spec) {
    if (spec.phi.size() != spec.base_vars.size())
        throw std::invalid_argument("atlas: phi arity != base arity");
    for (int k = 0; k < spec.n_charts(); ++k) {
        Subset s{k};
        if (!spec.nerve.count(s))
            throw std::invalid_argument("atlas: singleton {" + std::to_string(k) + "} missing from nerve");
    }
    for (const Subset& K : spec.nerve) {
        if (K.empty()) throw std::invalid_argument("atlas: empty set in nerve");
        for (int k : K)
            if (k < 0 || k >= spec.n_charts())
                throw std::invalid_argument("atlas: nerve index out of range");
        if (!std::is_sorted(K.begin(), K.end()))
            throw std::invalid_argument("atlas: nerve subsets must be sorted");
        // subset closure
        for (size_t drop = 0; drop < K.size(); ++drop) {
            if (K.size() == 1) break;
            Subset sub;
            for (size_t i = 0; i < K.size(); ++i)
                if (i != drop) sub.push_back(K[i]);
            if (!spec.nerve.count(sub))
                throw std::invalid_argument("atlas: nerve not subset-closed");
        }
    }
}

// Affine inverse of a chart map z = A x + b; errors for non-affine maps.
struct AffineMap {
    QMatrix A;            // N x N over Q
    std::vector<Rational> b;
    QMatrix Ainv;
};

inline AffineMap invert_chart_map(const AtlasSpec& spec, int k) {
    int N = spec.N();
    AffineMap am;
    am.A.assign(N, QRow(N, Rational(0)));
    am.b.assign(N, Rational(0));
    for (int j = 0; j < N; ++j) {
        const Polynomial& img = spec.charts[k].images[j];
        for (auto& [e, c] : img.terms()) {
            int deg = total_degree(e);
            if (deg == 0) am.b[j] = c;
            else if (deg == 1) {
                for (int v = 0; v < N; ++v)
                    if (e[v] == 1) am.A[j][v] = c;
            } else {
                throw std::invalid_argument("atlas: chart map is not affine (chart " +
                                            std::to_string(k) + ")");
            }
        }
    }
    // invert by Gauss-Jordan on [A | I]
    QMatrix aug = am.A;
    for (int r = 0; r < N; ++r) {
        for (int c = 0; c < N; ++c) aug[r].push_back(Rational(r == c ? 1 : 0));
    }
    auto piv = rref(aug);
    if (static_cast<int>(piv.size()) != N)
        throw std::invalid_argument("atlas: chart map not invertible (chart " + std::to_string(k) + ")");
    am.Ainv.assign(N, QRow(N, Rational(0)));
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) am.Ainv[r][c] = aug[r][N + c];
    return am;
}

inline std::string atlas_var_name(const AtlasSpec& spec, int k, int j) {
    if (spec.N() == 1) return "z" + std::to_string(k);
    return "z" + std::to_string(k) + "_" + spec.model_ring->vars[j];
}

inline std::string subset_label(const Subset& K) {
    std::string s = "U";
    for (int k : K) s += std::to_string(k);
    return s;
}

class BasedLiftingAtlas {
public:
    AtlasSpec spec;
    DifferenceQuotients dq;
    std::vector<Subset> subsets;                 // all nonempty subsets, by (size, lex)
    std::map<Subset, Chart> charts;              // f = {1} outside the nerve
    std::map<std::pair<Subset, Subset>, ChartMorphism> transitions;  // K subset of K'

    bool identities_ok = true;
    bool transitivity_ok = true;
    bool discrepancies_are_syzygies = true;  // each failure row is a syzygy of f_{K''}
    std::vector<std::string> failures;

    bool in_nerve(const Subset& K) const { return spec.nerve.count(K) != 0; }

    const Chart& chart(const Subset& K) const { return charts.at(K); }

    KDContextPtr context(const Subset& K) const {
        auto it = ctx_cache_.find(K);
        if (it == ctx_cache_.end())
            it = ctx_cache_.emplace(K, build_algebra(charts.at(K))).first;
        return it->second;
    }

    const Pullback& pullback(const Subset& K, const Subset& Kp) const {
        auto key = std::make_pair(K, Kp);
        auto it = pb_cache_.find(key);
        if (it == pb_cache_.end()) {
            it = pb_cache_
                     .emplace(key, std::make_shared<Pullback>(transitions.at(key), context(Kp),
                                                              context(K)))
                     .first;
        }
        return *it->second;
    }

private:
    mutable std::map<Subset, KDContextPtr> ctx_cache_;
    mutable std::map<std::pair<Subset, Subset>, std::shared_ptr<Pullback>> pb_cache_;
};

namespace atlas_detail {

// inverse images g_k = phi_k^{-1} written in the variables of chart K
inline std::vector<Polynomial> chart_inverse_in(const AtlasSpec& spec, const AffineMap& am,
                                                int k, const Chart& target) {
    int N = spec.N();
    std::vector<Polynomial> g;
    for (int i = 0; i < N; ++i) {
        Polynomial gi(target.ring);
        for (int j = 0; j < N; ++j) {
            if (am.Ainv[i][j].is_zero()) continue;
            int idx = target.ring->index_of(atlas_var_name(spec, k, j));
            if (idx < 0) throw std::logic_error("chart_inverse_in: variable missing");
            Polynomial zj = Polynomial::variable(target.ring, idx);
            gi += (zj - Polynomial::constant(target.ring, am.b[j])) * am.Ainv[i][j];
        }
        g.push_back(gi);
    }
    return g;
}

} // namespace atlas_detail

// Intersection chart of the subset K: group I ties consecutive charts'
// model coordinates together, group II carries the graph of phi anchored at
// min K. Outside the nerve the basis is {1}.
inline Chart intersection_chart(const AtlasSpec& spec, const Subset& K,
                                const std::vector<AffineMap>& inv) {
    Chart c;
    for (int k : K)
        for (int j = 0; j < spec.N(); ++j) c.fiber_vars.push_back(atlas_var_name(spec, k, j));
    c.base_vars = spec.base_vars;
    std::vector<std::string> vars = c.fiber_vars;
    vars.insert(vars.end(), c.base_vars.begin(), c.base_vars.end());
    c.ring = make_ring(vars);
    c.label = subset_label(K);

    std::map<int, std::vector<Polynomial>> g;
    for (int k : K) g[k] = atlas_detail::chart_inverse_in(spec, inv[k], k, c);

    if (!spec.nerve.count(K)) {
        c.f.push_back(Polynomial::constant(c.ring, Rational(1)));
        c.expected_codim = 1;
        return c;
    }

    int k0 = K.front();
    for (size_t t = 0; t + 1 < K.size(); ++t) {
        int k = K[t], kn = K[t + 1];
        for (int j = 0; j < spec.N(); ++j) c.f.push_back(g[k][j] - g[kn][j]);
    }
    const std::vector<Polynomial>& base_imgs = g[k0];
    for (size_t i = 0; i < spec.phi.size(); ++i) {
        Polynomial pk = spec.phi[i].substitute(c.ring, base_imgs);
        int tidx = c.ring->index_of(spec.base_vars[i]);
        c.f.push_back(Polynomial::variable(c.ring, tidx) - pk);
    }
    // phi components of the chart itself (used for critical loci): anchor at min K
    for (auto& comp : spec.phi) c.phi.push_back(comp.substitute(c.ring, base_imgs));
    c.expected_codim = static_cast<int>(K.size() - 1) * spec.N() + spec.dimS();
    return c;
}

namespace atlas_detail {

struct LegIndex {
    // group I legs: (position of k in K, j); group II rows: base component i
    int legs = 0, rows = 0;
};

inline int group1_count(const AtlasSpec& spec, const Subset& K) {
    return static_cast<int>(K.size() - 1) * spec.N();
}

// column index of leg (t, j) in f_K: legs are listed first
inline int leg_col(const AtlasSpec& spec, int t, int j) { return t * spec.N() + j; }

} // namespace atlas_detail

// Builds the transition morphism for K inside K' with the blockwise recipe:
// (I,I) the unique telescoping re-expression, (I,II) = 0, (II,II) = identity,
// (II,I) difference quotients F_ij(g_{min K'}, g_{min K}) spread along the
// telescope between the two anchors.
inline ChartMorphism build_transition(const AtlasSpec& spec, const DifferenceQuotients& dq,
                                      const std::vector<AffineMap>& inv, const Chart& cK,
                                      const Chart& cKp, const Subset& K, const Subset& Kp) {
    ChartMorphism mor;
    mor.target = cK;
    mor.source = cKp;
    for (auto& v : cK.ring->vars) {
        int idx = cKp.ring->index_of(v);
        if (idx < 0) throw std::logic_error("build_transition: variable not in superset chart");
        mor.w.push_back(Polynomial::variable(cKp.ring, idx));
    }
    const RingPtr& R = cKp.ring;
    int lK = cK.l(), lKp = cKp.l();
    mor.h.assign(lK, std::vector<Polynomial>(lKp, Polynomial(R)));

    bool tgt_empty = !spec.nerve.count(K);
    bool src_empty = !spec.nerve.count(Kp);
    if (src_empty) {
        // f_{K'} = {1}: h column is the pullback of f_K
        for (int i = 0; i < lK; ++i) mor.h[i][0] = mor.pull_poly(cK.f[i]);
        validate_morphism(mor);
        return mor;
    }
    if (tgt_empty) throw std::logic_error("build_transition: nerve not subset-closed");

    int N = spec.N();
    std::map<int, std::vector<Polynomial>> g;
    for (int k : Kp) g[k] = atlas_detail::chart_inverse_in(spec, inv[k], k, cKp);
    auto pos_in = [&](const Subset& S, int k) {
        for (size_t t = 0; t < S.size(); ++t)
            if (S[t] == k) return static_cast<int>(t);
        return -1;
    };
    int g1K = atlas_detail::group1_count(spec, K);

    // (I,I): leg (K[t] -> K[t+1], j) telescopes over the K'-legs in between
    for (size_t t = 0; t + 1 < K.size(); ++t) {
        int a = pos_in(Kp, K[t]), b = pos_in(Kp, K[t + 1]);
        for (int j = 0; j < N; ++j) {
            int row = atlas_detail::leg_col(spec, static_cast<int>(t), j);
            for (int u = a; u < b; ++u)
                mor.h[row][atlas_detail::leg_col(spec, u, j)] =
                    Polynomial::constant(R, Rational(1));
        }
    }
    // (II,II) identity; (II,I) from difference quotients when the anchor moves
    int m = K.front(), mp = Kp.front();
    for (int i = 0; i < spec.dimS(); ++i) {
        int row = g1K + i;
        mor.h[row][atlas_detail::group1_count(spec, Kp) + i] = Polynomial::constant(R, Rational(1));
        if (m == mp) continue;
        int a = pos_in(Kp, mp), b = pos_in(Kp, m);
        for (int j = 0; j < N; ++j) {
            Polynomial Fij = dq.eval(i, j, R, g[mp], g[m]);
            if (Fij.is_zero()) continue;
            for (int u = a; u < b; ++u)
                mor.h[row][atlas_detail::leg_col(spec, u, j)] += Fij;
        }
    }
    validate_morphism(mor);
    return mor;
}

inline BasedLiftingAtlas build_based_lifting(const AtlasSpec& spec) {
    validate_atlas(spec);
    BasedLiftingAtlas lift;
    lift.spec = spec;
    lift.dq = difference_quotients(spec.phi, spec.model_ring);

    std::vector<AffineMap> inv;
    for (int k = 0; k < spec.n_charts(); ++k) inv.push_back(invert_chart_map(spec, k));

    int n = spec.n_charts();
    for (uint32_t mask = 1; mask < (1u << n); ++mask) {
        Subset K;
        for (int k = 0; k < n; ++k)
            if (mask & (1u << k)) K.push_back(k);
        lift.subsets.push_back(K);
    }
    std::sort(lift.subsets.begin(), lift.subsets.end(), [](const Subset& a, const Subset& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    for (auto& K : lift.subsets) lift.charts.emplace(K, intersection_chart(spec, K, inv));

    auto is_subset = [](const Subset& a, const Subset& b) {
        return std::includes(b.begin(), b.end(), a.begin(), a.end());
    };
    for (auto& K : lift.subsets)
        for (auto& Kp : lift.subsets) {
            if (K.size() >= Kp.size() || !is_subset(K, Kp)) continue;
            try {
                lift.transitions.emplace(
                    std::make_pair(K, Kp),
                    build_transition(spec, lift.dq, inv, lift.charts.at(K), lift.charts.at(Kp), K, Kp));
            } catch (const std::exception& ex) {
                lift.identities_ok = false;
                lift.failures.push_back("transition " + subset_label(K) + " -> " +
                                        subset_label(Kp) + ": " + ex.what());
            }
        }

    // transitivity over every chain in the subset poset
    for (auto& K : lift.subsets)
        for (auto& Kp : lift.subsets) {
            if (K.size() >= Kp.size() || !is_subset(K, Kp)) continue;
            for (auto& Kpp : lift.subsets) {
                if (Kp.size() >= Kpp.size() || !is_subset(Kp, Kpp)) continue;
                auto direct = lift.transitions.find(std::make_pair(K, Kpp));
                auto first = lift.transitions.find(std::make_pair(K, Kp));
                auto second = lift.transitions.find(std::make_pair(Kp, Kpp));
                if (direct == lift.transitions.end() || first == lift.transitions.end() ||
                    second == lift.transitions.end())
                    continue;
                ChartMorphism comp = compose_morphisms(first->second, second->second);
                if (morphism_equal(comp, direct->second)) continue;
                lift.transitivity_ok = false;
                std::ostringstream os;
                os << "transitivity fails on " << subset_label(K) << " in " << subset_label(Kp)
                   << " in " << subset_label(Kpp);
                // certify the discrepancy rows are syzygies of f_{K''}
                const Chart& cpp = lift.charts.at(Kpp);
                bool syz = true;
                for (size_t r = 0; r < comp.h.size(); ++r) {
                    Polynomial dot(cpp.ring);
                    for (size_t c = 0; c < comp.h[r].size(); ++c)
                        dot += (comp.h[r][c] - direct->second.h[r][c]) * cpp.f[c];
                    if (!dot.is_zero()) syz = false;
                }
                if (!syz) lift.discrepancies_are_syzygies = false;
                os << (syz ? " (discrepancy is a Koszul syzygy of f)" : " (discrepancy NOT a syzygy)");
                lift.failures.push_back(os.str());
            }
        }
    return lift;
}

} // namespace kdr

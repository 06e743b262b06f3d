#pragma once

// Polynomial models of based relative charts: fiber variables z^1..z^m,
// base variables t_1..t_k, map components phi (in fiber variables), and a
// generator list f of the defining ideal. The chart ring has fiber
// variables first, then base variables.

#include <optional>
#include <string>
#include <vector>

#include "groebner.hpp"
#include "parser.hpp"

namespace kdr {

struct Chart {
    RingPtr ring;                       // fiber vars then base vars
    std::vector<std::string> fiber_vars;
    std::vector<std::string> base_vars;
    std::vector<Polynomial> phi;        // one per base var, in fiber vars
    std::vector<Polynomial> f;
    std::string label;
    std::optional<int> expected_codim;  // defaults to #f

    int m() const { return static_cast<int>(fiber_vars.size()); }
    int k() const { return static_cast<int>(base_vars.size()); }
    int l() const { return static_cast<int>(f.size()); }
    int codim_declared() const { return expected_codim.value_or(l()); }
    int fiber_index(const std::string& name) const {
        for (int i = 0; i < m(); ++i)
            if (fiber_vars[i] == name) return i;
        return -1;
    }
};

// Transports p into target by matching variable names.
inline Polynomial rename_into(const Polynomial& p, const RingPtr& target) {
    const RingPtr& src = p.ring();
    std::vector<int> map(src->nvars(), -1);
    for (size_t i = 0; i < src->nvars(); ++i) {
        map[i] = target->index_of(src->vars[i]);
        if (map[i] < 0) throw std::invalid_argument("rename_into: missing variable " + src->vars[i]);
    }
    Polynomial r(target);
    for (auto& [e, c] : p.terms()) {
        ExpVec e2(target->nvars(), 0);
        for (size_t i = 0; i < e.size(); ++i) e2[map[i]] += e[i];
        r.add_term(e2, c);
    }
    return r;
}

inline Chart make_chart(std::vector<std::string> fiber, std::vector<std::string> base,
                        const std::vector<std::string>& phi_src,
                        const std::vector<std::string>& f_src, std::string label,
                        std::optional<int> expected_codim = std::nullopt) {
    Chart c;
    c.fiber_vars = std::move(fiber);
    c.base_vars = std::move(base);
    std::vector<std::string> vars = c.fiber_vars;
    vars.insert(vars.end(), c.base_vars.begin(), c.base_vars.end());
    c.ring = make_ring(vars);
    for (auto& s : phi_src) c.phi.push_back(parse_poly(c.ring, s));
    for (auto& s : f_src) c.f.push_back(parse_poly(c.ring, s));
    c.label = std::move(label);
    c.expected_codim = expected_codim;
    return c;
}

struct ChartDiagnostics {
    bool codim_ok = false;
    bool proper = false;          // 1 not in (f)
    bool regular = false;
    std::vector<bool> nonzerodivisor;
    std::string detail;
};

// Regular-sequence certificate by iterated quotient-ideal checks:
// f_{i+1} is a nonzerodivisor mod (f_1..f_i) iff ((f_1..f_i) : f_{i+1})
// is contained in (f_1..f_i).
inline ChartDiagnostics validate_chart(const Chart& chart) {
    ChartDiagnostics d;
    d.codim_ok = chart.l() == chart.codim_declared();
    if (!d.codim_ok)
        d.detail += "codimension mismatch: " + std::to_string(chart.l()) + " generators, declared " +
                    std::to_string(chart.codim_declared()) + "; ";
    d.proper = !ideal_membership(Polynomial::constant(chart.ring, Rational(1)), chart.f);
    if (!d.proper) d.detail += "ideal contains 1; ";
    d.regular = d.proper;
    for (int i = 0; i < chart.l(); ++i) {
        if (chart.f[i].is_zero()) {
            d.nonzerodivisor.push_back(false);
            d.regular = false;
            d.detail += "f_" + std::to_string(i + 1) + " is zero; ";
            continue;
        }
        std::vector<ModVec> cols{to_vec(chart.f[i])};
        std::vector<Polynomial> prev(chart.f.begin(), chart.f.begin() + i);
        for (auto& p : prev) cols.push_back(to_vec(p));
        auto ker = module_kernel(cols, 1, chart.ring);
        bool nzd = true;
        for (auto& v : ker) {
            const Polynomial* g = v.at(0);
            if (g && !ideal_membership(*g, prev)) { nzd = false; break; }
        }
        d.nonzerodivisor.push_back(nzd);
        if (!nzd) {
            d.regular = false;
            d.detail += "f_" + std::to_string(i + 1) + " is a zerodivisor mod previous; ";
        }
    }
    if (d.detail.empty()) d.detail = "ok";
    return d;
}

// Difference quotients F_ij(z', z) with the telescoping choice:
// phi_i(z') - phi_i(z) = sum_j F_ij * (z'_j - z_j), each division exact.
struct DifferenceQuotients {
    RingPtr double_ring;                 // z_1..z_N, z'_1..z'_N
    int nvars = 0;
    std::vector<std::vector<Polynomial>> F;  // [component][var]

    // Substitute concrete images for z' and z; targets is the result ring.
    Polynomial eval(int i, int j, const RingPtr& target,
                    const std::vector<Polynomial>& primed_images,
                    const std::vector<Polynomial>& plain_images) const {
        std::vector<Polynomial> images;
        for (int v = 0; v < nvars; ++v) images.push_back(plain_images.at(v));
        for (int v = 0; v < nvars; ++v) images.push_back(primed_images.at(v));
        return F[i][j].substitute(target, images);
    }
};

inline DifferenceQuotients difference_quotients(const std::vector<Polynomial>& phi,
                                                const RingPtr& model_ring) {
    DifferenceQuotients dq;
    dq.nvars = static_cast<int>(model_ring->nvars());
    std::vector<std::string> vars = model_ring->vars;
    for (auto& v : model_ring->vars) vars.push_back(v + "'");
    dq.double_ring = make_ring(vars);
    int n = dq.nvars;
    auto subst_first_primed = [&](const Polynomial& p, int count) {
        std::vector<Polynomial> images;
        for (int v = 0; v < n; ++v)
            images.push_back(Polynomial::variable(dq.double_ring, v < count ? n + v : v));
        return p.substitute(dq.double_ring, images);
    };
    for (auto& comp : phi) {
        std::vector<Polynomial> row;
        for (int j = 0; j < n; ++j) {
            Polynomial hi = subst_first_primed(comp, j + 1);
            Polynomial lo = subst_first_primed(comp, j);
            Polynomial den = Polynomial::variable(dq.double_ring, n + j) -
                             Polynomial::variable(dq.double_ring, j);
            auto q = (hi - lo).exact_div(den);
            if (!q) throw std::logic_error("difference_quotients: telescoping division failed");
            row.push_back(*q);
        }
        dq.F.push_back(std::move(row));
    }
    return dq;
}

// Joint chart of a and b presenting the same U. ident gives, for each fiber
// variable of b, its restriction to U as a polynomial over a's ring. The
// joint relations are a's f together with the graph relations of ident; b's
// own relations become redundant modulo these.
inline Chart product_chart(const Chart& a, const Chart& b,
                           const std::vector<Polynomial>& ident,
                           const std::string& prime_suffix = "'") {
    if (a.base_vars != b.base_vars)
        throw std::invalid_argument("product_chart: incompatible base variables");
    if (static_cast<int>(ident.size()) != b.m())
        throw std::invalid_argument("product_chart: ident arity mismatch");
    Chart p;
    p.fiber_vars = a.fiber_vars;
    for (auto& v : b.fiber_vars) p.fiber_vars.push_back(v + prime_suffix);
    p.base_vars = a.base_vars;
    std::vector<std::string> vars = p.fiber_vars;
    vars.insert(vars.end(), p.base_vars.begin(), p.base_vars.end());
    p.ring = make_ring(vars);
    for (auto& q : a.phi) p.phi.push_back(rename_into(q, p.ring));
    for (auto& q : a.f) p.f.push_back(rename_into(q, p.ring));
    for (int j = 0; j < b.m(); ++j) {
        Polynomial vj = Polynomial::variable(p.ring, a.m() + j);
        p.f.push_back(vj - rename_into(ident[j], p.ring));
    }
    p.label = a.label + "x" + b.label;
    p.expected_codim = a.codim_declared() + b.m();
    return p;
}

} // namespace kdr

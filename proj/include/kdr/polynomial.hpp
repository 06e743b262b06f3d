#pragma once

// Sparse multivariate polynomials over Rational, with a fixed ordered
// variable list per ring. Terms are kept sorted descending in
// degree-reverse-lexicographic order, so begin() is the leading term.

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "rational.hpp"

namespace kdr {

using ExpVec = std::vector<int>;

inline int total_degree(const ExpVec& e) { return std::accumulate(e.begin(), e.end(), 0); }

// a >_drl b: higher total degree wins; on ties the last nonzero entry of a-b
// is negative.
inline bool degrevlex_greater(const ExpVec& a, const ExpVec& b) {
    int da = total_degree(a), db = total_degree(b);
    if (da != db) return da > db;
    for (size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
}

struct DegRevLexGreater {
    bool operator()(const ExpVec& a, const ExpVec& b) const { return degrevlex_greater(a, b); }
};

struct Ring {
    std::vector<std::string> vars;

    int index_of(const std::string& name) const {
        for (size_t i = 0; i < vars.size(); ++i)
            if (vars[i] == name) return static_cast<int>(i);
        return -1;
    }
    size_t nvars() const { return vars.size(); }
    bool operator==(const Ring& o) const { return vars == o.vars; }
};

using RingPtr = std::shared_ptr<const Ring>;

inline RingPtr make_ring(std::vector<std::string> vars) {
    auto r = std::make_shared<Ring>();
    r->vars = std::move(vars);
    return r;
}

class Polynomial {
public:
    using TermMap = std::map<ExpVec, Rational, DegRevLexGreater>;

    Polynomial() = default;
    explicit Polynomial(RingPtr ring) : ring_(std::move(ring)) {}

    static Polynomial constant(RingPtr ring, const Rational& c) {
        Polynomial p(ring);
        if (!c.is_zero()) p.terms_[ExpVec(p.ring_->nvars(), 0)] = c;
        return p;
    }
    static Polynomial variable(RingPtr ring, int idx) {
        Polynomial p(ring);
        ExpVec e(ring->nvars(), 0);
        e.at(idx) = 1;
        p.terms_[e] = Rational(1);
        return p;
    }
    static Polynomial monomial(RingPtr ring, ExpVec e, const Rational& c) {
        Polynomial p(ring);
        if (!c.is_zero()) p.terms_[std::move(e)] = c;
        return p;
    }

    const RingPtr& ring() const { return ring_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
    }
    Rational constant_value() const {
        if (terms_.empty()) return Rational(0);
        if (!is_constant()) throw std::logic_error("constant_value: nonconstant");
        return terms_.begin()->second;
    }
    int degree() const {
        int d = -1;
        for (auto& [e, c] : terms_) d = std::max(d, total_degree(e));
        return d;
    }
    int degree_in(int var) const {
        int d = 0;
        for (auto& [e, c] : terms_) d = std::max(d, e[var]);
        return d;
    }

    const ExpVec& leading_exp() const {
        if (terms_.empty()) throw std::logic_error("leading_exp of zero");
        return terms_.begin()->first;
    }
    const Rational& leading_coeff() const {
        if (terms_.empty()) throw std::logic_error("leading_coeff of zero");
        return terms_.begin()->second;
    }

    void add_term(const ExpVec& e, const Rational& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) terms_.emplace(e, c);
        else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Polynomial operator-() const {
        Polynomial r(ring_);
        for (auto& [e, c] : terms_) r.terms_[e] = -c;
        return r;
    }
    Polynomial operator+(const Polynomial& o) const {
        check_ring(o);
        Polynomial r = *this;
        for (auto& [e, c] : o.terms_) r.add_term(e, c);
        return r;
    }
    Polynomial operator-(const Polynomial& o) const {
        check_ring(o);
        Polynomial r = *this;
        for (auto& [e, c] : o.terms_) r.add_term(e, -c);
        return r;
    }
    Polynomial operator*(const Polynomial& o) const {
        check_ring(o);
        Polynomial r(ring_);
        for (auto& [e1, c1] : terms_)
            for (auto& [e2, c2] : o.terms_) {
                ExpVec e = e1;
                for (size_t i = 0; i < e.size(); ++i) e[i] += e2[i];
                r.add_term(e, c1 * c2);
            }
        return r;
    }
    Polynomial operator*(const Rational& c) const {
        Polynomial r(ring_);
        if (c.is_zero()) return r;
        for (auto& [e, k] : terms_) r.terms_[e] = k * c;
        return r;
    }
    Polynomial& operator+=(const Polynomial& o) { *this = *this + o; return *this; }
    Polynomial& operator-=(const Polynomial& o) { *this = *this - o; return *this; }
    Polynomial& operator*=(const Polynomial& o) { *this = *this * o; return *this; }

    void scale_in_place(const Rational& c) {
        if (c.is_zero()) { terms_.clear(); return; }
        for (auto& [e, k] : terms_) k *= c;
    }
    // this += c * x^shift * o
    void add_scaled(const Polynomial& o, const ExpVec& shift, const Rational& c) {
        if (c.is_zero()) return;
        for (auto& [e, k] : o.terms_) {
            ExpVec e2 = e;
            for (size_t i = 0; i < e2.size(); ++i) e2[i] += shift[i];
            add_term(e2, k * c);
        }
    }

    bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    Polynomial pow(int n) const {
        if (n < 0) throw std::invalid_argument("pow: negative exponent");
        Polynomial r = constant(ring_, Rational(1));
        for (int i = 0; i < n; ++i) r = r * *this;
        return r;
    }

    Polynomial derivative(int var) const {
        Polynomial r(ring_);
        for (auto& [e, c] : terms_) {
            if (e[var] == 0) continue;
            ExpVec d = e;
            d[var] -= 1;
            r.add_term(d, c * Rational(e[var]));
        }
        return r;
    }

    // Simultaneous substitution var i -> images[i]; images live in target ring.
    Polynomial substitute(const RingPtr& target, const std::vector<Polynomial>& images) const {
        if (images.size() != ring_->nvars()) throw std::invalid_argument("substitute: arity");
        Polynomial r(target);
        for (auto& [e, c] : terms_) {
            Polynomial t = Polynomial::constant(target, c);
            for (size_t i = 0; i < e.size(); ++i)
                for (int k = 0; k < e[i]; ++k) t = t * images[i];
            r += t;
        }
        return r;
    }

    // Exact division; nullopt if o does not divide exactly.
    std::optional<Polynomial> exact_div(const Polynomial& o) const {
        check_ring(o);
        if (o.is_zero()) throw std::domain_error("exact_div by zero");
        Polynomial rem = *this;
        Polynomial quot(ring_);
        const ExpVec& lo = o.leading_exp();
        while (!rem.is_zero()) {
            const ExpVec& lr = rem.leading_exp();
            ExpVec q(lr.size());
            for (size_t i = 0; i < lr.size(); ++i) {
                q[i] = lr[i] - lo[i];
                if (q[i] < 0) return std::nullopt;
            }
            Rational c = rem.leading_coeff() / o.leading_coeff();
            Polynomial m = monomial(ring_, q, c);
            quot += m;
            rem -= m * o;
        }
        return quot;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [e, c] : terms_) {
            Rational a = c;
            if (first) {
                if (a.sign() < 0) { os << "-"; a = -a; }
            } else {
                os << (a.sign() < 0 ? " - " : " + ");
                if (a.sign() < 0) a = -a;
            }
            first = false;
            bool has_var = total_degree(e) > 0;
            bool sep = !a.is_one() || !has_var;
            if (sep) os << a.to_string();
            for (size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                if (sep) os << "*";
                os << ring_->vars[i];
                if (e[i] > 1) os << "^" << e[i];
                sep = true;
            }
        }
        return os.str();
    }

private:
    RingPtr ring_;
    TermMap terms_;

    void check_ring(const Polynomial& o) const {
        if (!ring_ || !o.ring_ || !(*ring_ == *o.ring_))
            throw std::invalid_argument("polynomial ring mismatch");
    }
};

inline Polynomial operator*(const Rational& c, const Polynomial& p) { return p * c; }

} // namespace kdr

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kdr/fpmodule.hpp"
#include "kdr/parser.hpp"
#include "kdr/qmatrix.hpp"

using namespace kdr;

static uint64_t splitmix(uint64_t& s) {
    s += 0x9e3779b97f4a7c15ull;
    uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

TEST_CASE("bigint and rational basics") {
    BigInt a = BigInt::from_string("123456789012345678901234567890");
    BigInt b = BigInt::from_string("987654321098765432109876543210");
    CHECK((a * b).to_string() == "121932631137021795226185032733622923332237463801111263526900");
    BigInt q, r;
    b.divrem(a, q, r);
    CHECK((q * a + r) == b);
    CHECK(BigInt::gcd(a, b).to_string() == "9000000000900000000090");

    Rational x(1, 3), y(1, 6);
    CHECK((x + y) == Rational(1, 2));
    CHECK((x / y) == Rational(2));
    CHECK((x - x).is_zero());
    CHECK(Rational(-4, -6) == Rational(2, 3));
    CHECK(Rational(4, -6).to_string() == "-2/3");
}

TEST_CASE("bigint division and gcd self-consistency") {
    uint64_t seed = 31337;
    auto rnd = [&](int limbs) {
        BigInt v(0);
        for (int i = 0; i < limbs; ++i)
            v = v * BigInt(1000000007ll) + BigInt(static_cast<long long>(splitmix(seed) % 1000000007ull));
        if (splitmix(seed) & 1) v = -v;
        return v;
    };
    for (int it = 0; it < 60; ++it) {
        BigInt a = rnd(1 + it % 4), b = rnd(1 + (it / 2) % 3);
        if (b.is_zero()) continue;
        BigInt q, r;
        a.divrem(b, q, r);
        CHECK((q * b + r) == a);
        CHECK(r.abs() < b.abs());
        BigInt g = BigInt::gcd(a, b);
        if (!a.is_zero()) CHECK((a % g).is_zero());
        CHECK((b % g).is_zero());
        CHECK((a * b).abs() == (BigInt::lcm(a, b) * g).abs());
    }
}

TEST_CASE("polynomial arithmetic examples") {
    auto R = make_ring({"x", "y", "z", "c", "t"});
    auto P = [&](const std::string& s) { return parse_poly(R, s); };

    CHECK(P("(x+y)*(x-y)") == P("x^2 - y^2"));
    CHECK((P("x + y") + (-P("x + y"))).is_zero());

    auto q = P("x^2 - (z - c)^2").exact_div(P("x - z + c"));
    REQUIRE(q.has_value());
    CHECK(*q == P("x + z + c") - P("2*c"));
    CHECK((*q * P("x - z + c")) == P("x^2 - (z-c)^2"));

    CHECK_FALSE(P("x^2 + y").exact_div(P("x + 1")).has_value());

    // derivative and substitution
    CHECK(P("x^2*y").derivative(0) == P("2*x*y"));
    auto S = make_ring({"u"});
    std::vector<Polynomial> imgs;
    imgs.push_back(parse_poly(S, "u + 1"));
    imgs.push_back(parse_poly(S, "u"));
    imgs.push_back(Polynomial::constant(S, Rational(0)));
    imgs.push_back(Polynomial::constant(S, Rational(0)));
    imgs.push_back(Polynomial::constant(S, Rational(1)));
    CHECK(P("x*y + t").substitute(S, imgs) == parse_poly(S, "u^2 + u + 1"));
}

TEST_CASE("exact_div round trip on pseudorandom pairs") {
    auto R = make_ring({"x", "y", "t"});
    uint64_t seed = 42;
    for (int iter = 0; iter < 200; ++iter) {
        Polynomial a(R), b(R);
        for (int i = 0; i < 3; ++i) {
            ExpVec e1{int(splitmix(seed) % 3), int(splitmix(seed) % 3), int(splitmix(seed) % 2)};
            ExpVec e2{int(splitmix(seed) % 3), int(splitmix(seed) % 2), int(splitmix(seed) % 2)};
            a.add_term(e1, Rational(int(splitmix(seed) % 7) - 3));
            b.add_term(e2, Rational(int(splitmix(seed) % 7) - 3));
        }
        if (b.is_zero()) continue;
        Polynomial prod = a * b;
        auto q = prod.exact_div(b);
        REQUIRE(q.has_value());
        CHECK(*q == a);
    }
}

TEST_CASE("groebner basis examples") {
    auto R = make_ring({"x", "y"});
    auto P = [&](const std::string& s) { return parse_poly(R, s); };

    SUBCASE("monomial ideal staircase {1,x,y,xy}") {
        auto gb = groebner_basis({P("3*x^2"), P("3*y^2")});
        REQUIRE(gb.size() == 2);
        ModuleGB g(R, ModOrder::degtop());
        g.build(to_vecs(gb));
        auto st = staircase(g);
        CHECK(count_standard_monomials(st[0], 2, 10) == 4);
    }
    SUBCASE("single generator already reduced (up to monic scaling)") {
        auto Rt = make_ring({"x", "t"});
        auto f = parse_poly(Rt, "t - x^2");
        auto gb = groebner_basis({f});
        REQUIRE(gb.size() == 1);
        bool same = (gb[0] == f) || (gb[0] == -f);
        CHECK(same);
    }
    SUBCASE("unit ideal collapses to 1") {
        auto gb = groebner_basis({P("x"), P("1")});
        REQUIRE(gb.size() == 1);
        CHECK(gb[0].is_constant());
    }
}

TEST_CASE("normal form examples") {
    // lex with t first eliminates t: the remainder is the substitution t = x^2
    auto R = make_ring({"t", "x"});
    auto P = [&](const std::string& s) { return parse_poly(R, s); };
    auto gb = groebner_basis({P("t - x^2")}, MonoCmp::LEX);
    CHECK(normal_form(P("t^3"), gb, MonoCmp::LEX) == P("x^6"));
    CHECK(normal_form(Polynomial(R), gb, MonoCmp::LEX).is_zero());
    auto R2 = make_ring({"x", "y"});
    CHECK(normal_form(parse_poly(R2, "x*y"), {parse_poly(R2, "x")}).is_zero());
}

TEST_CASE("normal form is zero exactly on ideal members") {
    auto R = make_ring({"x", "y"});
    auto P = [&](const std::string& s) { return parse_poly(R, s); };
    std::vector<Polynomial> gens{P("x^2 - y"), P("x*y - 1")};
    auto gb = groebner_basis(gens);
    uint64_t seed = 7;
    for (int iter = 0; iter < 50; ++iter) {
        Polynomial c1(R), c2(R);
        ExpVec e{int(splitmix(seed) % 3), int(splitmix(seed) % 3)};
        c1.add_term(e, Rational(int(splitmix(seed) % 5) - 2));
        ExpVec e2{int(splitmix(seed) % 2), int(splitmix(seed) % 3)};
        c2.add_term(e2, Rational(int(splitmix(seed) % 5) - 2));
        Polynomial member = c1 * gens[0] + c2 * gens[1];
        CHECK(normal_form(member, gb).is_zero());
    }
    CHECK_FALSE(normal_form(P("x"), gb).is_zero());
}

TEST_CASE("module kernels") {
    SUBCASE("koszul syzygy of (t - x^2, 2x)") {
        auto R = make_ring({"x", "t"});
        auto P = [&](const std::string& s) { return parse_poly(R, s); };
        std::vector<ModVec> cols{to_vec(P("t - x^2")), to_vec(P("2*x"))};
        auto ker = module_kernel(cols, 1, R);
        REQUIRE(ker.size() == 1);
        // kernel generated by (2x, -(t - x^2)) up to scaling
        SubmoduleOracle o(ker, 2, R);
        ModVec expect;
        expect.set(0, P("2*x"));
        expect.set(1, -P("t - x^2"));
        CHECK(o.contains(expect));
        SubmoduleOracle o2({expect}, 2, R);
        CHECK(o2.contains(ker[0]));
    }
    SUBCASE("unit entry has trivial kernel") {
        auto R = make_ring({"x"});
        auto ker = module_kernel({to_vec(Polynomial::constant(R, Rational(1)))}, 1, R);
        CHECK(ker.empty());
    }
    SUBCASE("classical syzygy (y, -x)") {
        auto R = make_ring({"x", "y"});
        auto P = [&](const std::string& s) { return parse_poly(R, s); };
        auto ker = module_kernel({to_vec(P("x")), to_vec(P("y"))}, 1, R);
        REQUIRE(ker.size() == 1);
        ModVec expect;
        expect.set(0, P("y"));
        expect.set(1, -P("x"));
        SubmoduleOracle o(ker, 2, R);
        CHECK(o.contains(expect));
        SubmoduleOracle o2({expect}, 2, R);
        CHECK(o2.contains(ker[0]));
    }
    SUBCASE("kernel generators satisfy M v = 0 and are permutation stable") {
        auto R = make_ring({"x", "y"});
        auto P = [&](const std::string& s) { return parse_poly(R, s); };
        std::vector<ModVec> cols;
        ModVec c1; c1.set(0, P("x")); c1.set(1, P("y"));
        ModVec c2; c2.set(0, P("y^2")); c2.set(1, P("x"));
        ModVec c3; c3.set(0, P("x*y")); c3.set(1, P("x + y"));
        cols = {c1, c2, c3};
        auto ker = module_kernel(cols, 2, R);
        for (auto& v : ker) {
            ModVec sum;
            for (auto& [j, coef] : v.comps) sum = sum + cols[j].scaled(coef);
            CHECK(sum.is_zero());
        }
        std::vector<ModVec> perm{c3, c1, c2};
        auto ker2 = module_kernel(perm, 2, R);
        // same submodule after permuting coordinates back
        std::vector<ModVec> ker2_back;
        for (auto& v : ker2) {
            ModVec w;
            // perm[j] = cols[(j+2)%3]
            for (auto& [j, coef] : v.comps) w.set((j + 2) % 3, coef);
            ker2_back.push_back(w);
        }
        SubmoduleOracle oa(ker, 3, R), ob(ker2_back, 3, R);
        for (auto& v : ker2_back) CHECK(oa.contains(v));
        for (auto& v : ker) CHECK(ob.contains(v));
    }
}

// Independent completeness oracle for module_kernel: the dimension of the
// degree-bounded slice of the computed kernel span must match the nullity
// of the coefficient matrix of M on that slice, computed by plain exact
// linear algebra.
static long long slice_dim_of_span(const std::vector<ModVec>& gens, int rank, const RingPtr& ring,
                                   int D) {
    if (gens.empty()) return 0;
    ModuleGB gb(ring, ModOrder::degtop());
    gb.build(gens);
    auto st = staircase(gb);
    int nv = static_cast<int>(ring->nvars());
    long long total = static_cast<long long>(rank) * count_standard_monomials({}, nv, D);
    long long std_count = 0;
    for (int pos = 0; pos < rank; ++pos) {
        static const std::vector<ExpVec> none;
        auto it = st.find(pos);
        std_count += count_standard_monomials(it == st.end() ? none : it->second, nv, D);
    }
    return total - std_count;
}

static long long brute_force_syzygy_dim(const std::vector<ModVec>& cols, int rows,
                                        const RingPtr& ring, int D) {
    int d0 = 0;
    for (auto& c : cols)
        for (auto& [pos, p] : c.comps) d0 = std::max(d0, p.degree());
    // domain: (column j, monomial mu of degree <= D)
    std::vector<ExpVec> dom_monos, img_monos;
    {
        ExpVec e(ring->nvars(), 0);
        std::function<void(size_t, int, std::vector<ExpVec>&)> rec = [&](size_t i, int rem,
                                                                         std::vector<ExpVec>& out) {
            if (i == ring->nvars()) { out.push_back(e); return; }
            for (int v = 0; v <= rem; ++v) { e[i] = v; rec(i + 1, rem - v, out); }
            e[i] = 0;
        };
        rec(0, D, dom_monos);
        rec(0, D + d0, img_monos);
    }
    std::map<ExpVec, int> img_index;
    for (size_t i = 0; i < img_monos.size(); ++i) img_index[img_monos[i]] = static_cast<int>(i);
    size_t dom = cols.size() * dom_monos.size();
    size_t img = static_cast<size_t>(rows) * img_monos.size();
    QMatrix a(img, QRow(dom, Rational(0)));
    for (size_t j = 0; j < cols.size(); ++j)
        for (size_t mi = 0; mi < dom_monos.size(); ++mi) {
            size_t colidx = j * dom_monos.size() + mi;
            for (auto& [pos, p] : cols[j].comps)
                for (auto& [e2, c] : p.terms()) {
                    ExpVec e = e2;
                    for (size_t t = 0; t < e.size(); ++t) e[t] += dom_monos[mi][t];
                    a[pos * img_monos.size() + img_index.at(e)][colidx] += c;
                }
        }
    return static_cast<long long>(kernel_basis(a, dom).size());
}

TEST_CASE("module_kernel is complete against the brute-force slice oracle") {
    auto R = make_ring({"x", "y"});
    auto P = [&](const std::string& s) { return parse_poly(R, s); };
    uint64_t seed = 2024;
    auto rnd_poly = [&]() {
        Polynomial p(R);
        int terms = 1 + int(splitmix(seed) % 3);
        for (int t = 0; t < terms; ++t) {
            ExpVec e{int(splitmix(seed) % 3), int(splitmix(seed) % 3)};
            int c = int(splitmix(seed) % 5) - 2;
            p.add_term(e, Rational(c));
        }
        return p;
    };
    for (int trial = 0; trial < 8; ++trial) {
        int rows = 1 + int(splitmix(seed) % 2);
        int ncols = 2 + int(splitmix(seed) % 3);
        std::vector<ModVec> cols;
        for (int j = 0; j < ncols; ++j) {
            ModVec v;
            for (int r = 0; r < rows; ++r) {
                Polynomial p = rnd_poly();
                if (!p.is_zero()) v.set(r, p);
            }
            cols.push_back(std::move(v));
        }
        auto ker = module_kernel(cols, rows, R);
        for (auto& v : ker) {
            ModVec sum;
            for (auto& [j, coef] : v.comps) sum = sum + cols[j].scaled(coef);
            REQUIRE(sum.is_zero());
        }
        for (int D = 0; D <= 4; ++D) {
            long long got = slice_dim_of_span(ker, ncols, R, D);
            long long want = brute_force_syzygy_dim(cols, rows, R, D);
            CHECK(got == want);
        }
    }
    // a structured case: the Koszul relations of three quadrics
    {
        std::vector<ModVec> cols{to_vec(P("x^2")), to_vec(P("x*y")), to_vec(P("y^2"))};
        auto ker = module_kernel(cols, 1, R);
        for (int D = 0; D <= 5; ++D)
            CHECK(slice_dim_of_span(ker, 3, R, D) == brute_force_syzygy_dim(cols, 1, R, D));
    }
}

TEST_CASE("radical and ideal membership") {
    auto R = make_ring({"x", "y"});
    auto P = [&](const std::string& s) { return parse_poly(R, s); };
    CHECK(radical_membership(P("x"), {P("x^2")}));
    CHECK_FALSE(ideal_membership(P("x"), {P("x^2")}));
    CHECK(radical_membership(P("x*y"), {P("x*y")}));
    CHECK_FALSE(radical_membership(P("x"), {P("x*y")}));
}

TEST_CASE("quotient presentations") {
    auto R = make_ring({"x", "t"});
    auto P = [&](const std::string& s) { return parse_poly(R, s); };

    SUBCASE("equal submodules give the zero module") {
        ModVec k;
        k.set(0, P("2*x"));
        k.set(1, -P("t - x^2"));
        FPModule m = quotient_presentation({k}, {k.scaled(Rational(-1))}, 2, R);
        CHECK(is_zero_module(m));
    }
    SUBCASE("cyclic module with annihilator (x)") {
        ModVec e1;
        e1.set(0, Polynomial::constant(R, Rational(1)));
        FPModule m = quotient_presentation({e1}, {e1.scaled(P("x"))}, 1, R);
        CHECK_FALSE(is_zero_module(m));
        auto h = truncated_dimension(m, 4);
        // Q[x,t]/(x): monomials 1, t, t^2, ...
        CHECK(h == std::vector<long long>{1, 2, 3, 4, 5});
    }
    SUBCASE("empty data gives the zero module") {
        FPModule m = quotient_presentation({}, {}, 3, R);
        CHECK(is_zero_module(m));
        CHECK(truncated_dimension(m, 3) == std::vector<long long>{0, 0, 0, 0});
    }
    SUBCASE("image outside kernel is rejected") {
        ModVec k, g;
        k.set(0, P("x"));
        g.set(0, Polynomial::constant(R, Rational(1)));
        CHECK_THROWS(quotient_presentation({k}, {g}, 1, R));
    }
}

TEST_CASE("truncated dimensions") {
    auto R = make_ring({"x", "y"});
    auto P = [&](const std::string& s) { return parse_poly(R, s); };

    SUBCASE("Q[x,y]/(3x^2, 3y^2) has total dimension 4") {
        FPModule m;
        m.ring = R;
        m.rank = 1;
        m.relations = {to_vec(P("3*x^2")), to_vec(P("3*y^2"))};
        auto h = truncated_dimension(m, 5);
        CHECK(h[2] == 4);
        CHECK(h[5] == 4);
    }
    SUBCASE("Q[x,y]/(xy) grows by 2 per degree") {
        FPModule m;
        m.ring = R;
        m.rank = 1;
        m.relations = {to_vec(P("x*y"))};
        auto h = truncated_dimension(m, 4);
        auto ex = exact_degree_dims(h);
        CHECK(ex == std::vector<long long>{1, 2, 2, 2, 2});
    }
    SUBCASE("invariant under adding a redundant relation") {
        FPModule m;
        m.ring = R;
        m.rank = 1;
        m.relations = {to_vec(P("x*y"))};
        FPModule m2 = m;
        m2.relations.push_back(to_vec(P("x^2*y + x*y^2")));
        CHECK(truncated_dimension(m, 6) == truncated_dimension(m2, 6));
    }
}

TEST_CASE("exact rational linear algebra") {
    QMatrix m = {
        {Rational(1), Rational(2), Rational(3)},
        {Rational(2), Rational(4), Rational(6)},
        {Rational(0), Rational(1), Rational(1)},
    };
    CHECK(rank(m) == 2);
    auto ker = kernel_basis(m, 3);
    REQUIRE(ker.size() == 1);
    for (auto& row : m) {
        Rational dot(0);
        for (size_t j = 0; j < 3; ++j) dot += row[j] * ker[0][j];
        CHECK(dot.is_zero());
    }
}

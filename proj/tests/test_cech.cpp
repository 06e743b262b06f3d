#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kdr/derham.hpp"

using namespace kdr;

// 3-chart translated line atlas over phi = x^2, full nerve
static AtlasSpec atlas3() {
    AtlasSpec spec;
    spec.model_ring = make_ring({"x"});
    spec.base_vars = {"t"};
    spec.phi = {parse_poly(spec.model_ring, "x^2")};
    for (int k = 0; k < 3; ++k) {
        AtlasChartMap m;
        m.images = {parse_poly(spec.model_ring, "x + " + std::to_string(k))};
        spec.charts.push_back(std::move(m));
    }
    spec.nerve = {{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}, {0, 1, 2}};
    return spec;
}

// same geometry with an affine map: transitivity is exact here
static AtlasSpec atlas3_affine() {
    AtlasSpec spec = atlas3();
    spec.phi = {parse_poly(spec.model_ring, "3*x + 1")};
    return spec;
}

static AtlasSpec atlas1_e3() {
    AtlasSpec spec;
    spec.model_ring = make_ring({"x", "y"});
    spec.base_vars = {"t"};
    spec.phi = {parse_poly(spec.model_ring, "x^2 + y^2")};
    AtlasChartMap m;
    m.images = {Polynomial::variable(spec.model_ring, 0), Polynomial::variable(spec.model_ring, 1)};
    spec.charts.push_back(std::move(m));
    spec.nerve = {{0}};
    return spec;
}

static AtlasSpec atlas1_e1() {
    AtlasSpec spec;
    spec.model_ring = make_ring({"x"});
    spec.base_vars = {"t"};
    spec.phi = {parse_poly(spec.model_ring, "x^2")};
    AtlasChartMap m;
    m.images = {Polynomial::variable(spec.model_ring, 0)};
    spec.charts.push_back(std::move(m));
    spec.nerve = {{0}};
    return spec;
}

TEST_CASE("atlas validation") {
    auto spec = atlas3();
    validate_atlas(spec);
    SUBCASE("non subset-closed nerve is rejected") {
        AtlasSpec bad = spec;
        bad.nerve.erase({0, 1});
        CHECK_THROWS(validate_atlas(bad));
    }
    SUBCASE("non-affine chart maps are rejected") {
        AtlasSpec bad = spec;
        bad.charts[1].images = {parse_poly(spec.model_ring, "x^2 + 1")};
        CHECK_THROWS(build_based_lifting(bad));
    }
}

TEST_CASE("intersection charts") {
    auto spec = atlas3();
    auto lift = build_based_lifting(spec);
    SUBCASE("pair relations match the recipe") {
        const Chart& c01 = lift.chart({0, 1});
        REQUIRE(c01.l() == 2);
        CHECK(c01.f[0] == parse_poly(c01.ring, "z0 - z1 + 1"));
        CHECK(c01.f[1] == parse_poly(c01.ring, "t - z0^2"));
    }
    SUBCASE("singleton is the graph chart") {
        const Chart& c1 = lift.chart({1});
        REQUIRE(c1.l() == 1);
        CHECK(c1.f[0] == parse_poly(c1.ring, "t - (z1 - 1)^2"));
    }
    SUBCASE("triple is a regular sequence of the expected codimension") {
        const Chart& cT = lift.chart({0, 1, 2});
        CHECK(cT.m() == 3);
        CHECK(cT.l() == 3);
        auto d = validate_chart(cT);
        CHECK(d.codim_ok);
        CHECK(d.regular);
    }
}

TEST_CASE("transition matrices follow the difference-quotient recipe") {
    auto spec = atlas3();
    auto lift = build_based_lifting(spec);
    CHECK(lift.identities_ok);
    // h_{1}^{01}: t - (z1-1)^2 = (t - z0^2) + (z0 + z1 - 1)(z0 - z1 + 1)
    const ChartMorphism& m = lift.transitions.at({{1}, {0, 1}});
    REQUIRE(m.h.size() == 1);
    REQUIRE(m.h[0].size() == 2);
    CHECK(m.h[0][0] == parse_poly(m.source.ring, "z0 + z1 - 1"));
    CHECK(m.h[0][1] == Polynomial::constant(m.source.ring, Rational(1)));
}

TEST_CASE("transitivity obstruction on the quadratic atlas") {
    // For nonlinear phi and three charts no exact transitive family exists
    // with these bases; the builder reports the failing chains and certifies
    // each discrepancy is a syzygy, so it dies in the quotient algebra.
    auto lift = build_based_lifting(atlas3());
    CHECK(lift.identities_ok);
    CHECK_FALSE(lift.transitivity_ok);
    CHECK(lift.discrepancies_are_syzygies);
    CHECK_FALSE(lift.failures.empty());
}

TEST_CASE("affine atlas is exactly transitive and delta^2 = 0") {
    auto lift = build_based_lifting(atlas3_affine());
    CHECK(lift.identities_ok);
    CHECK(lift.transitivity_ok);
    for (int p = 0; p <= 1; ++p)
        for (int s = 0; s <= 2; ++s)
            for (int q = 0; q <= 1; ++q) {
                auto rep = check_delta_squared(lift, p, s, q);
                CHECK(rep.zero);
            }
    auto tc = totalize_truncate(lift, 1, false);
    auto sq = check_total_squared(tc);
    CHECK(sq.zero);
}

TEST_CASE("delta^2 on the quadratic atlas") {
    auto lift = build_based_lifting(atlas3());
    SUBCASE("vanishes at s = 0 where h does not enter") {
        auto rep = check_delta_squared(lift, 0, 0, 0);
        CHECK(rep.zero);
        auto rep1 = check_delta_squared(lift, 1, 0, 0);
        CHECK(rep1.zero);
    }
    SUBCASE("fails at s >= 1 through the min-jump exchange") {
        auto rep = check_delta_squared(lift, 0, 1, 0);
        CHECK_FALSE(rep.zero);
        CHECK_FALSE(rep.witnesses.empty());
    }
}

TEST_CASE("chain nerve with empty triple overlap is exactly transitive") {
    // consecutive-overlap cover of the quadratic atlas: U_{02} and U_{012}
    // are empty, every exchange routes through an f = {1} chart, and the
    // whole lifting is exact
    AtlasSpec spec = atlas3();
    spec.nerve = {{0}, {1}, {2}, {0, 1}, {1, 2}};
    auto lift = build_based_lifting(spec);
    CHECK(lift.identities_ok);
    CHECK(lift.transitivity_ok);
    const Chart& c02 = lift.chart({0, 2});
    REQUIRE(c02.l() == 1);
    CHECK(c02.f[0] == Polynomial::constant(c02.ring, Rational(1)));
    for (int p = 0; p <= 1; ++p)
        for (int s = 0; s <= 2; ++s)
            for (int q = 0; q <= 1; ++q) CHECK(check_delta_squared(lift, p, s, q).zero);
    auto tc = totalize_truncate(lift, 1, false);
    CHECK(check_total_squared(tc).zero);
}

TEST_CASE("cech modules") {
    auto lift = build_based_lifting(atlas3());
    SUBCASE("q=0 at (0,1): three rank-1 summands") {
        auto blocks = cech_module(lift, 0, 1, 0);
        REQUIRE(blocks.size() == 3);
        for (auto& b : blocks) CHECK(b.rank == 1);
    }
    SUBCASE("q=1 at (0,1): three rank-2 summands") {
        auto blocks = cech_module(lift, 0, 1, 1);
        REQUIRE(blocks.size() == 3);
        for (auto& b : blocks) CHECK(b.rank == 2);
    }
    SUBCASE("q=3: no summands") {
        auto blocks = cech_module(lift, 0, 1, 3);
        CHECK(blocks.empty());
    }
}

TEST_CASE("constants glue: delta kills the constant section") {
    auto lift = build_based_lifting(atlas3());
    CechElement x;
    for (int k = 0; k < 3; ++k) {
        Subset K{k};
        x.comps.emplace(K, lift.context(K)->one());
    }
    auto dx = lifted_coboundary_apply(lift, x, 0);
    CHECK(dx.is_zero());
}

TEST_CASE("two-chart subatlas: delta on q=0 is the signed difference") {
    AtlasSpec spec = atlas3();
    spec.charts.pop_back();
    spec.nerve = {{0}, {1}, {0, 1}};
    auto lift = build_based_lifting(spec);
    CHECK(lift.transitivity_ok);  // no 2-chains to violate
    // delta(x)_{01} = (pullback from 0) - (pullback from 1)
    CechElement x;
    x.comps.emplace(Subset{0}, lift.context({0})->one());
    auto dx = lifted_coboundary_apply(lift, x, 0);
    REQUIRE(dx.comps.count({0, 1}) == 1);
    CHECK(dx.comps.at({0, 1}) == lift.context({0, 1})->one());
    CechElement y;
    y.comps.emplace(Subset{1}, lift.context({1})->one());
    auto dy = lifted_coboundary_apply(lift, y, 0);
    CHECK(dy.comps.at({0, 1}) == -lift.context({0, 1})->one());
    for (int p = 0; p <= 1; ++p)
        for (int s = 0; s <= 2; ++s) {
            auto rep = check_delta_squared(lift, p, s, 0);
            CHECK(rep.zero);
        }
}

TEST_CASE("totalization ranks match the closed form") {
    for (auto spec : {atlas3(), atlas3_affine()}) {
        auto lift = build_based_lifting(spec);
        for (int p = 0; p <= 2; ++p) {
            auto tc = totalize_truncate(lift, p, false);
            CHECK(total_strip_ok(tc));
            int lo = 0, hi = 0;
            for (auto& [deg, blocks] : tc.terms) { lo = std::min(lo, deg); hi = std::max(hi, deg); }
            for (int deg = lo - 1; deg <= hi + 1; ++deg)
                CHECK(total_rank_constructed(tc, deg) == total_rank_closed_form(lift, p, deg));
        }
    }
}

TEST_CASE("single-chart atlas: total complex is the Koszul complex") {
    auto lift = build_based_lifting(atlas1_e3());
    auto tc = totalize_truncate(lift, 2, false);
    auto sq = check_total_squared(tc);
    CHECK(sq.zero);
    for (auto& [deg, blocks] : tc.terms) {
        for (auto& b : blocks) {
            CHECK(b.q == 0);
            CHECK(deg == -b.s);
        }
    }
}

TEST_CASE("pi chain map intertwines lifted and unlifted coboundaries") {
    auto lift = build_based_lifting(atlas3());
    auto K0 = Subset{0};
    auto ctx0 = lift.context(K0);
    auto om0 = omega_module(ctx0, 1);
    KDElement w = kd_mul(ctx0->from_poly(parse_poly(ctx0->ring(), "z0^2")), ctx0->dz(0));
    CechElement x;
    x.comps.emplace(K0, w);
    auto dx = lifted_coboundary_apply(lift, x, 0);
    ModVec w0 = om0.gb->normal_form(ctx0->to_vec(w, 1, 0));
    CechElement x0;
    x0.comps.emplace(K0, ctx0->from_vec(w0, 1, 0));
    auto dx0 = lifted_coboundary_apply(lift, x0, 0);
    int compared = 0;
    for (auto& [K, e] : dx.comps) {
        auto om = omega_module(lift.context(K), 1);
        ModVec nf_after = om.gb->normal_form(lift.context(K)->to_vec(e, 1, 0));
        ModVec other;
        auto it = dx0.comps.find(K);
        if (it != dx0.comps.end()) other = lift.context(K)->to_vec(it->second, 1, 0);
        ModVec nf_before = om.gb->normal_form(other);
        CHECK(nf_after == nf_before);
        ++compared;
    }
    CHECK(compared > 0);
}

TEST_CASE("lifted coboundary as a block matrix") {
    AtlasSpec spec = atlas3();
    spec.charts.pop_back();
    spec.nerve = {{0}, {1}, {0, 1}};
    auto lift = build_based_lifting(spec);
    auto m = lifted_coboundary(lift, 0, 1, 0);
    REQUIRE(m.source.size() == 2);
    REQUIRE(m.target.size() == 1);
    // block from {0}: +h; block from {1}: -h
    auto& b0 = m.blocks.at({0, 0});
    auto& b1 = m.blocks.at({0, 1});
    REQUIRE(b0.size() == 2);
    REQUIRE(b0[0].size() == 1);
    const Chart& pair = lift.chart({0, 1});
    // xi of the singleton charts maps through the h-columns of the transitions
    const ChartMorphism& t0 = lift.transitions.at({{0}, {0, 1}});
    const ChartMorphism& t1 = lift.transitions.at({{1}, {0, 1}});
    CHECK(b0[0][0] == t0.h[0][0]);
    CHECK(b0[1][0] == t0.h[0][1]);
    CHECK(b1[0][0] == -t1.h[0][0]);
    CHECK(b1[1][0] == -t1.h[0][1]);
    (void)pair;
}

TEST_CASE("transition pullbacks commute with both differentials") {
    auto lift = build_based_lifting(atlas3());
    KDRandom rng(77);
    for (auto pairKKp : {std::make_pair(Subset{0}, Subset{0, 1}),
                         std::make_pair(Subset{1}, Subset{1, 2}),
                         std::make_pair(Subset{0, 2}, Subset{0, 1, 2})}) {
        const Pullback& pb = lift.pullback(pairKKp.first, pairKKp.second);
        auto tctx = lift.context(pairKKp.first);
        for (int it = 0; it < 15; ++it) {
            auto e = random_element(tctx, rng);
            CHECK(pb(apply_diff(e, Diff::Koszul)) == apply_diff(pb(e), Diff::Koszul));
            CHECK(pb(apply_diff(e, Diff::DeRham)) == apply_diff(pb(e), Diff::DeRham));
        }
    }
}

TEST_CASE("les bookkeeping on single-chart atlases") {
    for (auto spec : {atlas1_e1(), atlas1_e3()}) {
        auto lift = build_based_lifting(spec);
        int pmax = spec.N();
        for (int p = 0; p <= pmax; ++p) {
            auto rep = les_check(lift, p, 6);
            CHECK(rep.rank_additivity);
            CHECK(rep.euler_zero);
        }
    }
}

TEST_CASE("derham windows on single-chart E3") {
    auto lift = build_based_lifting(atlas1_e3());
    DeRhamOptions opts;
    opts.degree_bound = 8;
    opts.base_report = 3;
    auto rep = derham_total_cohomology(lift, opts);
    REQUIRE(rep.slice.per_base_exact.count(0));
    CHECK(rep.slice.per_base_exact.at(0) == std::vector<long long>{1, 1, 1, 1});
    CHECK(rep.stabilized_by_degree.at(0));
    // the literal window H^2 of the sections complex vanishes (fiber
    // dimension is one; the volume class is exact at the section level)
    if (rep.slice.window_dim.count(2)) {
        CHECK(rep.slice.window_dim.at(2) == 0);
        CHECK(rep.stabilized_by_degree.at(2));
    }
}

TEST_CASE("volume quotient is the Milnor-rank free module") {
    SUBCASE("E3: rank one, generated by the volume class") {
        auto rep = volume_quotient(atlas1_e3(), 10);
        std::vector<long long> expect{1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1};
        CHECK(rep.exact_dims == expect);
        CHECK(rep.volume_class_survives);
        CHECK(rep.generates);
        CHECK(rep.stabilized);
    }
    SUBCASE("x^3 + y^3 model carries the rank-4 shadow") {
        AtlasSpec spec = atlas1_e3();
        spec.phi = {parse_poly(spec.model_ring, "x^3 + y^3")};
        auto rep = volume_quotient(spec, 8);
        CHECK(rep.volume_class_survives);
        CHECK(rep.stabilized);
        CHECK(rep.exact_dims[0] == 1);
    }
}

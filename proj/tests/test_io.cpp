#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "kdr/suites.hpp"

using namespace kdr;

static std::string write_temp(const std::string& name, const std::string& body) {
    std::string path = std::string("/tmp/kdr_io_") + name;
    std::ofstream out(path);
    out << body;
    return path;
}

TEST_CASE("chart files round trip") {
    auto path = write_temp("e1.json", R"({
        "label": "E1",
        "fiber_vars": ["x"],
        "base_vars": ["t"],
        "phi": ["x^2"],
        "f": ["t - x^2"]
    })");
    auto spec = load_spec(path);
    REQUIRE(std::holds_alternative<Chart>(spec));
    const Chart& c = std::get<Chart>(spec);
    CHECK(c.label == "E1");
    CHECK(c.l() == 1);
    CHECK(c.m() == 1);
    CHECK(c.f[0] == parse_poly(c.ring, "t - x^2"));
    std::remove(path.c_str());
}

TEST_CASE("undeclared variables are reported") {
    auto path = write_temp("bad.json", R"({
        "label": "bad",
        "fiber_vars": ["x"],
        "base_vars": ["t"],
        "phi": ["x^2"],
        "f": ["t - w^2"]
    })");
    CHECK_THROWS_WITH_AS(load_spec(path), doctest::Contains("undeclared variable 'w'"), InputError);
    std::remove(path.c_str());
}

TEST_CASE("malformed json is a parse error with position") {
    auto path = write_temp("broken.json", "{ \"label\": ");
    CHECK_THROWS_AS(load_spec(path), InputError);
    std::remove(path.c_str());
}

TEST_CASE("atlas files load with a seven-element nerve") {
    auto path = write_temp("atlas.json", R"({
        "model_vars": ["x"],
        "base_vars": ["t"],
        "phi": ["x^2"],
        "charts": [{"map": ["x"]}, {"map": ["x + 1"]}, {"map": ["x + 2"]}],
        "nerve": [[0], [1], [2], [0,1], [0,2], [1,2], [0,1,2]]
    })");
    auto spec = load_spec(path);
    REQUIRE(std::holds_alternative<AtlasSpec>(spec));
    CHECK(std::get<AtlasSpec>(spec).nerve.size() == 7);
    std::remove(path.c_str());
}

TEST_CASE("non subset-closed nerves are rejected at load") {
    auto path = write_temp("badnerve.json", R"({
        "model_vars": ["x"],
        "base_vars": ["t"],
        "phi": ["x^2"],
        "charts": [{"map": ["x"]}, {"map": ["x + 1"]}],
        "nerve": [[0], [0, 1]]
    })");
    CHECK_THROWS_AS(load_spec(path), InputError);
    std::remove(path.c_str());
}

TEST_CASE("reports are deterministic for a fixed seed") {
    Chart c = make_chart({"x"}, {"t"}, {"x^2"}, {"t - x^2"}, "E1");
    Report a = verify_suite(SpecVariant{c}, "mem", 50, 7);
    Report b = verify_suite(SpecVariant{c}, "mem", 50, 7);
    CHECK(a.finish().dump(2) == b.finish().dump(2));
    CHECK(a.text() == b.text());
    Report d = verify_suite(SpecVariant{c}, "mem", 50, 8);
    CHECK(d.failures() == 0);
}

TEST_CASE("verify suite passes on the shipped charts") {
    for (auto src : {"{\"label\":\"E2\",\"fiber_vars\":[\"x\",\"y\"],\"base_vars\":[\"t\"],"
                     "\"phi\":[\"x^2*y^2\"],\"f\":[\"t - x^2*y^2\"]}"}) {
        auto path = write_temp("chart.json", src);
        auto spec = load_spec(path);
        Report rep = verify_suite(spec, path, 40, 3);
        CHECK(rep.failures() == 0);
        std::remove(path.c_str());
    }
}

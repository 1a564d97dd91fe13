#include <doctest.h>

#include <json.hpp>

#include "fiberlp/errors.hpp"
#include "fiberlp/scenario.hpp"
#include "fiberlp/suites.hpp"

using namespace fiberlp;
using nlohmann::json;

TEST_CASE("empty config parses with documented defaults") {
    const ScenarioConfig cfg = ScenarioConfig::parse(json::object());
    CHECK(cfg.grid.topology == Topology::interval);
    CHECK(cfg.grid.n == 65);
    CHECK(cfg.p == 2.0);
    CHECK(cfg.seed == 0);
    CHECK(cfg.suites.empty()); // empty selection means every registered suite
}

TEST_CASE("unknown keys are rejected with their path") {
    try {
        ScenarioConfig::parse(json::parse(R"({"fibre_dim": 2})"));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("fibre_dim") != std::string::npos);
    }
    try {
        ScenarioConfig::parse(json::parse(R"({"grid": {"topology": "interval", "nodes": 5}})"));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("nodes") != std::string::npos);
        CHECK(e.path() == "/grid");
    }
}

TEST_CASE("invalid values are rejected") {
    CHECK_THROWS_AS(ScenarioConfig::parse(json::parse(R"({"p": 0.5})")), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::parse(json::parse(R"({"grid": {"topology": "moebius"}})")),
                    ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::parse(json::parse(R"({"suites": ["no-such-suite"]})")), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::parse(json::parse(R"({"tolerances": {"bogus": 1e-9}})")), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::parse(json::parse(R"({"tolerances": {"isometry": -1.0}})")),
                    ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::parse(json::parse(R"({"bundle": {"kind": "constant"}})")), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::parse(json::parse(R"({"output": {"format": "xml"}})")), ConfigError);
}

TEST_CASE("matrix parsing accepts [re, im] pair rows") {
    const ScenarioConfig cfg = ScenarioConfig::parse(json::parse(
        R"({"bundle": {"kind": "constant", "matrix": [[[-1,0],[1,0]],[[0,0],[-2,0]]]}})"));
    CHECK(cfg.bundle.matrix.dim() == 2);
    CHECK(cfg.bundle.matrix(0, 1) == cplx{1.0});
    CHECK(cfg.bundle.matrix(1, 1) == cplx{-2.0});
}

TEST_CASE("minimal scenario: one suite on the default scalar bundle") {
    ScenarioConfig cfg;
    cfg.suites = {"semigroup-law"};
    const VerificationReport rep = run_scenario(cfg);
    CHECK(rep.all_pass());
    CHECK(rep.total() >= 5);
    for (const auto& c : rep.checks()) CHECK(c.suite == "semigroup-law");
}

TEST_CASE("tolerance override to an unreachable value turns the check red") {
    ScenarioConfig cfg;
    cfg.suites = {"generator-fd"};
    cfg.tolerances["generator-taylor"] = 1e-30;
    const VerificationReport rep = run_scenario(cfg);
    CHECK(!rep.all_pass());
    bool found = false;
    for (const auto& c : rep.checks())
        if (c.name == "taylor-scalar") {
            found = true;
            CHECK(!c.pass);
            CHECK(c.tolerance == 1e-30);
        }
    CHECK(found);
}

TEST_CASE("identical config and seed give byte-identical deterministic reports") {
    ScenarioConfig cfg;
    cfg.suites = {"resolvent-identity", "norm-axioms", "extrapolation-isometry"};
    cfg.seed = 12345;
    const VerificationReport a = run_scenario(cfg);
    const VerificationReport b = run_scenario(cfg);
    CHECK(deterministic_bytes(a) == deterministic_bytes(b));

    ScenarioConfig other = cfg;
    other.seed = 54321;
    const VerificationReport c = run_scenario(other);
    CHECK(deterministic_bytes(a) != deterministic_bytes(c));
}

TEST_CASE("random_stable bundle config is reproducible from the seed") {
    ScenarioConfig cfg;
    cfg.bundle.kind = "random_stable";
    cfg.bundle.dim = 3;
    cfg.seed = 9;
    const GridPtr grid = make_grid(cfg.grid);
    const BundlePtr a = make_bundle(cfg, grid);
    const BundlePtr b = make_bundle(cfg, grid);
    REQUIRE(a->dim() == 3);
    for (std::size_t k = 0; k < 9; ++k)
        CHECK(a->fiber(0).entries()[k] == b->fiber(0).entries()[k]);
}

TEST_CASE("suite selection is run in name order and echoed in the report") {
    ScenarioConfig cfg;
    cfg.suites = {"resolvent-identity", "approximate-identity"};
    const VerificationReport rep = run_scenario(cfg);
    REQUIRE(rep.total() >= 4);
    // approximate-identity sorts before resolvent-identity
    CHECK(rep.checks().front().suite == "approximate-identity");
    const auto echo = rep.to_json()["meta"]["config"];
    CHECK(echo["suites"].size() == 2);
}

TEST_CASE("config echo reparses to the same config (canonical form)") {
    ScenarioConfig cfg;
    cfg.grid.topology = Topology::circle;
    cfg.grid.length = 2.0;
    cfg.grid.n = 32;
    cfg.p = 3.0;
    cfg.seed = 17;
    cfg.suites = {"norm-axioms"};
    cfg.tolerances["triangle"] = 1e-11;
    const ScenarioConfig back = ScenarioConfig::parse(cfg.echo());
    CHECK(back.grid.topology == Topology::circle);
    CHECK(back.grid.length == 2.0);
    CHECK(back.p == 3.0);
    CHECK(back.seed == 17);
    CHECK(back.tolerances.at("triangle") == 1e-11);
    CHECK(back.echo() == cfg.echo());
}

TEST_CASE("initial function builders") {
    const GridPtr grid = std::make_shared<GridMeasure>(GridMeasure::circle(1.0, 16));
    InitialSpec constant;
    constant.kind = "constant";
    constant.value = {cplx{2.0}, cplx{0.0, 1.0}};
    const FiberFunction f = make_initial(constant, grid, 2.0);
    CHECK(f.dim() == 2);
    CHECK(f.node_value(5)[0] == cplx{2.0});

    InitialSpec sine;
    sine.kind = "sin";
    sine.harmonic = 2;
    sine.direction = {cplx{1.0}};
    const FiberFunction g = make_initial(sine, grid, 2.0);
    CHECK(g.node_value(0)[0] == cplx{0.0});
    CHECK(std::abs(g.node_value(2)[0].real() - std::sin(4.0 * 3.14159265358979323846 * grid->node(2))) <=
          1e-12);
}

TEST_CASE("every registered suite passes on the default scenario") {
    // the full default scenario is the acceptance baseline; keep a fast
    // smoke version here with a couple of cheap suites
    ScenarioConfig cfg;
    cfg.suites = {"bundle-validate", "domain-membership", "constant-fiber-corollary"};
    const VerificationReport rep = run_scenario(cfg);
    CHECK(rep.all_pass());
}

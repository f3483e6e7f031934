#include <set>

#include "doctest.h"

#include "flab/errors.hpp"
#include "flab/verify.hpp"
#include "support.hpp"

using namespace flab;
using flab::testing::config;

TEST_CASE("check ids are unique and well formed")
{
    std::set<std::string> ids;
    for (const auto& c : check_registry()) {
        CHECK(ids.insert(c.id).second);
        CHECK(c.id.find('.') != std::string::npos);
        CHECK(!c.anchor.empty());
        CHECK(c.tolerance >= 0.0);
    }
    CHECK(ids.size() == check_registry().size());
}

TEST_CASE("selection by id and by suite")
{
    CHECK(select_checks({}).size() == check_registry().size());
    CHECK(select_checks({"vaisman.gamma_action"}).size() == 1);
    CHECK(select_checks({"vaisman"}).size() == 11);
    CHECK(select_checks({"vaisman", "vaisman.gamma_action"}).size() == 11);
    CHECK_THROWS_AS(select_checks({"vaisman.nonexistent"}), ConfigError);
}

TEST_CASE("tolerance resolution: global, then check, then class, then default")
{
    const auto& reg = check_registry();
    const CheckSpec* entry = nullptr;
    for (const auto& c : reg)
        if (c.id == "vaisman.gamma_action") entry = &c;
    REQUIRE(entry);

    ToleranceProfile p;
    CHECK(p.resolve(*entry) == entry->tolerance);
    p.classes[entry->cls] = 3e-3;
    CHECK(p.resolve(*entry) == 3e-3);
    p.checks[entry->id] = 2e-2;
    CHECK(p.resolve(*entry) == 2e-2);
    p.global = 1.0;
    CHECK(p.resolve(*entry) == 1.0);

    const ToleranceProfile q = parse_tolerance_profile(
        nlohmann::json::parse(R"({"classes": {"algebraic": 1e-9}, "checks": {"euler.cartan": 0.5}})"));
    CHECK(q.classes.at(ToleranceClass::algebraic) == 1e-9);
    CHECK(q.checks.at("euler.cartan") == 0.5);
    CHECK_THROWS_AS(parse_tolerance_profile(nlohmann::json::parse(R"({"class": {}})")), ConfigError);
    CHECK_THROWS_AS(parse_tolerance_profile(nlohmann::json::parse(R"({"classes": {"loose": 1}})")), ConfigError);
    CHECK_THROWS_AS(parse_tolerance_profile(nlohmann::json::parse(R"({"checks": {"euler.nope": 1}})")), ConfigError);
    CHECK_THROWS_AS(parse_tolerance_profile(nlohmann::json::parse(R"({"checks": {"euler.cartan": -1}})")), ConfigError);
    CHECK(load_tolerance_profile(flab::testing::config_path("tolerances")).classes.size() == 5);
}

TEST_CASE("sweep results do not depend on the thread count")
{
    const FinslerMetric M = config("randers3");
    SweepOptions o;
    o.points = 40;
    o.fd_spot_points = 8;
    const nlohmann::json one = report_json(run_sweep(M, o), o).at("checks");
    o.threads = 3;
    const nlohmann::json three = report_json(run_sweep(M, o), o).at("checks");
    CHECK(one.dump() == three.dump());
    CHECK(one.size() == check_registry().size());
}

TEST_CASE("an over-tight tolerance fails while the default passes")
{
    const FinslerMetric M = config("randers2");
    SweepOptions o;
    o.points = 10;
    o.selection = {"euler.quadratic", "vaisman.cond_c"};
    const SweepResult ok = run_sweep(M, o);
    CHECK(ok.all_pass());
    o.tolerances.global = 0.0;
    const SweepResult tight = run_sweep(M, o);
    bool any_fail = false;
    for (const auto& c : tight.checks) any_fail = any_fail || !c.pass;
    CHECK(any_fail);
}

TEST_CASE("points that cannot be evaluated are counted as errors")
{
    // Degenerate for x^1 > 0: g = diag(1, 1e-300) there.
    auto F = ScalarField::from_generic(2, [](auto x, auto y) {
        const double c = value_of(x[0]) > 0.0 ? 1e-300 : 1.0;
        return checked_sqrt(y[0] * y[0] + c * (y[1] * y[1]));
    });
    FinslerMetric M = FinslerMetric::custom("half-degenerate", F);
    M.set_domain(DomainBox::cube(2, 1.0));
    SweepOptions o;
    o.points = 30;
    o.selection = {"euler"};
    const SweepResult r = run_sweep(M, o);
    for (const auto& c : r.checks) {
        CHECK(c.errors > 0);
        CHECK(c.evaluated > 0);
        CHECK(c.errors + c.evaluated == 30);
        CHECK(!c.pass);
        REQUIRE(!c.error_messages.empty());
        CHECK(c.error_messages.front().find("point ") == 0);
    }
    const nlohmann::json rep = report_json(r, o);
    CHECK(rep.at("meta").at("all_pass") == false);
    CHECK(rep.at("checks").at(0).at("errors").get<int>() > 0);
}

TEST_CASE("report entries carry the documented fields")
{
    const FinslerMetric M = config("euclidean2");
    SweepOptions o;
    o.points = 5;
    o.selection = {"t_field"};
    const nlohmann::json rep = report_json(run_sweep(M, o), o);
    for (const char* key : {"tool", "version", "metric", "n", "seed", "points", "threads", "checks_run", "checks_passed",
                            "all_pass", "wall_seconds"})
        CHECK(rep.at("meta").contains(key));
    for (const auto& c : rep.at("checks"))
        for (const char* key : {"id", "anchor", "metric", "class", "tolerance", "max_residual", "mean_residual",
                                "evaluated", "worst_point", "errors", "pass"})
            CHECK(c.contains(key));
    CHECK(rep.at("checks").size() == 6);
}

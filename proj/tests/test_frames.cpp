#include <cmath>

#include "doctest.h"

#include "flab/liouville.hpp"
#include "flab/sasaki.hpp"
#include "support.hpp"

using namespace flab;
using flab::testing::config;

TEST_CASE("Euclidean frame pack at y = (0, 1) is the coordinate frame")
{
    const FinslerMetric M = FinslerMetric::euclidean(2);
    const PointGeometry geo(M, TangentPoint({0.4, -0.3}, {0.0, 1.0}));
    const FramePack pack = frame_pack(geo);
    CHECK(pack.dropped == 1);
    REQUIRE(pack.kept == std::vector<int>{0});
    // columns deltabar_1 = d/dx^1, xi = d/dx^2, dbar_1 = d/dy^1, Gamma = d/dy^2
    CHECK((pack.matrix - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((pack.gram - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(pack.condition == doctest::Approx(1.0));
    CHECK(pack.warnings.empty());
}

TEST_CASE("the dependent index is the first largest |y^k|")
{
    CHECK(dependent_index(std::vector<double>{1.0, -1.0}) == 0);
    CHECK(dependent_index(std::vector<double>{0.2, -3.0, 3.0}) == 1);
    CHECK(dependent_index(std::vector<double>{0.0, 0.0, 0.5}) == 2);
}

TEST_CASE("Liouville data: both routes to t_k agree and the six identities hold")
{
    for (const char* name : {"euclidean3", "riemannian3", "randers3", "randers4"}) {
        const FinslerMetric M = config(name);
        for (int k = 0; k < 10; ++k) {
            const PointGeometry geo(M, flab::testing::point(6, k, M));
            CHECK(liouville(geo).consistency <= 1e-12);
            CHECK(t_identities(geo).max() <= 1e-11);
            CHECK(bar_brackets(geo).max() <= 1e-11);
            const BarFrameResiduals r = bar_frame_residuals(geo, bar_frame(geo));
            CHECK(r.orthogonality <= 1e-12);
            CHECK(r.dependence <= 1e-12);
            CHECK(r.rank_ratio > 1e-3);
        }
    }
}

TEST_CASE("frame pack is block orthogonal with the expected J images")
{
    for (const char* name : {"riemannian2", "randers3", "randers4"}) {
        const FinslerMetric M = config(name);
        for (int k = 0; k < 10; ++k) {
            const PointGeometry geo(M, flab::testing::point(7, k, M));
            const FramePack pack = frame_pack(geo);
            const FramePackResiduals r = frame_pack_residuals(geo, pack);
            CHECK(r.gram_off_block <= 1e-12);
            CHECK(r.j_images <= 1e-12);
            CHECK(r.norms <= 1e-12);
            CHECK(r.perp_to_gamma <= 1e-12);
            CHECK(pack.perp_columns().size() == static_cast<std::size_t>(2 * M.dimension() - 1));
        }
    }
}

TEST_CASE("almost Kaehler structure identities")
{
    SplitMix64 rng(99);
    for (const char* name : {"riemannian3", "randers3"}) {
        const FinslerMetric M = config(name);
        for (int k = 0; k < 5; ++k) {
            const PointGeometry geo(M, flab::testing::point(9, k, M));
            const CompatibilityReport c = compatibility_checks(geo, rng);
            CHECK(c.j_squared == 0.0);
            CHECK(c.j_compat <= 1e-12);
            CHECK(c.kahler_routes <= 1e-12);
            CHECK(c.antisymmetry <= 1e-12);
            CHECK(c.d_omega <= 1e-10);
            CHECK(c.volume <= 1e-10);
            CHECK(c.omega_random <= 1e-12);
            CHECK(c.roundtrip <= 1e-12);
        }
    }
}

TEST_CASE("integrable distributions have no bracket leakage")
{
    const FinslerMetric M = config("randers3");
    for (int k = 0; k < 5; ++k) {
        const PointGeometry geo(M, flab::testing::point(10, k, M));
        CHECK(frobenius_checks(geo).entries.size() == 6);
        for (const auto& e : frobenius_checks(geo).entries) {
            INFO(e.distribution);
            CHECK(e.leakage <= 1e-11);
        }
    }
}

TEST_CASE("the horizontal distribution is not integrable on a curved metric")
{
    const FinslerMetric M = config("riemannian2");
    const PointGeometry geo(M, flab::testing::point(12, 0, M));
    std::vector<JetVector> horizontal;
    for (int i = 0; i < 2; ++i) horizontal.push_back(geo.delta(i));
    CHECK(bracket_leakage(geo, horizontal) > 1e-6);

    const FinslerMetric E = FinslerMetric::euclidean(2);
    const PointGeometry flat(E, flab::testing::point(12, 0, E));
    CHECK(bracket_leakage(flat, {flat.delta(0), flat.delta(1)}) == 0.0);
}

TEST_CASE("frame dumps round trip and detect tampering")
{
    const FinslerMetric M = config("randers3");
    const PointGeometry geo(M, flab::testing::point(13, 2, M));
    const FramePack pack = frame_pack(geo);
    nlohmann::json dump = frame_dump(geo, pack);
    CHECK(dump.at("dropped").get<int>() == pack.dropped + 1);
    CHECK(dump.at("columns").size() == 6);

    const FramePack parsed = parse_frame_dump(nlohmann::json::parse(dump.dump()));
    CHECK((parsed.matrix - pack.matrix).cwiseAbs().maxCoeff() == 0.0);
    CHECK(parsed.kept == pack.kept);
    CHECK(reverify_frame_dump(nlohmann::json::parse(dump.dump()), M) <= 1e-12);

    dump["pack"][1][2] = dump["pack"][1][2].get<double>() + 1e-6;
    CHECK(reverify_frame_dump(dump, M) >= 1e-7);
}

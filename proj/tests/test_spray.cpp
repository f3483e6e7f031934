#include <cmath>
#include <sstream>

#include "doctest.h"

#include "flab/errors.hpp"
#include "flab/fd_oracle.hpp"
#include "flab/spray.hpp"
#include "support.hpp"

using namespace flab;
using flab::testing::config;

TEST_CASE("Riemannian spray equals the Christoffel oracle")
{
    for (const char* name : {"riemannian2", "riemannian3"}) {
        const FinslerMetric M = config(name);
        for (int k = 0; k < 25; ++k) {
            const TangentPoint p = flab::testing::point(8, k, M);
            const Eigen::VectorXd G = spray(M, p).G;
            const Eigen::VectorXd ref = flab::testing::christoffel_spray(M, p);
            CHECK((G - ref).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, ref.cwiseAbs().maxCoeff()));
            CHECK((spray_coefficients(M, p.x(), p.y()) - ref).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
}

TEST_CASE("Euclidean spray and nonlinear connection vanish")
{
    const FinslerMetric M = FinslerMetric::euclidean(3);
    const TangentPoint p({0.3, -0.2, 0.1}, {1.0, 0.4, -0.7});
    const SprayData S = spray(M, p);
    CHECK(S.G.cwiseAbs().maxCoeff() == 0.0);
    CHECK(S.N.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("nonlinear connection is the y-gradient of the spray")
{
    const FinslerMetric M = config("randers3");
    const int n = 3;
    for (int s = 0; s < 10; ++s) {
        const TangentPoint p = flab::testing::point(21, s, M);
        const SprayData S = spray(M, p);
        std::vector<double> z(2 * n);
        for (int q = 0; q < 2 * n; ++q) z[q] = p.coordinate(q);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                auto Gj = [&](std::span<const double> w) { return spray_coefficients(M, w.first(n), w.subspan(n))[j]; };
                const int var[1] = {n + i};
                const double fd = fd_partial(Gj, z, var);
                CHECK(std::abs(fd - S.N(j, i)) <= 1e-8 * std::max(1.0, std::abs(S.N(j, i))));
            }
        // 2-homogeneity of G gives N^j_i y^i = 2 G^j.
        const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(p.y().data(), n);
        CHECK((S.N * y - 2.0 * S.G).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, S.G.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("adapted coframe is dual to the adapted frame")
{
    const FinslerMetric M = config("randers4");
    const SprayData S = spray(M, flab::testing::point(2, 0, M));
    const HorizontalFrame H = horizontal_frame(S);
    CHECK((H.pairing() - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("nonlinear curvature is antisymmetric and vanishes for Euclidean space")
{
    const FinslerMetric M = config("randers3");
    const PointGeometry geo(M, flab::testing::point(4, 1, M));
    const Tensor3 R = nonlinear_curvature(geo);
    double norm = 0.0;
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                CHECK(R(k, i, j) == -R(k, j, i));
                norm = std::max(norm, std::abs(R(k, i, j)));
            }
    CHECK(norm > 1e-6);

    const FinslerMetric E = FinslerMetric::euclidean(2);
    const Tensor3 R0 = nonlinear_curvature(PointGeometry(E, TangentPoint({0.1, 0.1}, {1.0, 2.0})));
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) CHECK(R0(k, i, j) == 0.0);
}

TEST_CASE("Euclidean geodesics are straight lines")
{
    const FinslerMetric M = FinslerMetric::euclidean(2);
    const GeodesicPath path = integrate_geodesic(M, TangentPoint({0.0, 0.0}, {0.3, -0.4}), 10, 0.1);
    REQUIRE(path.points.size() == 11);
    CHECK(path.points.back().x()[0] == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(path.points.back().x()[1] == doctest::Approx(-0.4).epsilon(1e-14));
    CHECK(path.drift <= 1e-15);
}

TEST_CASE("geodesic F drift converges at fourth order")
{
    for (const char* name : {"riemannian2", "randers2"}) {
        const FinslerMetric M = config(name);
        const TangentPoint p0({0.1, 0.2}, {1.0, 0.5});
        std::vector<double> drift;
        for (double dt : {0.1, 0.05, 0.025}) drift.push_back(integrate_geodesic(M, p0, static_cast<int>(std::lround(2.0 / dt)), dt).drift);
        for (std::size_t k = 1; k < drift.size(); ++k) {
            const double ratio = drift[k - 1] / drift[k];
            CHECK(ratio >= 8.0);
            CHECK(ratio <= 32.0);
        }
        CHECK(drift.back() <= 1e-8);
    }
}

TEST_CASE("geodesic integration rejects bad steps and reports chart exits")
{
    const FinslerMetric M = config("riemannian2");
    const TangentPoint p0({0.1, 0.2}, {1.0, 0.5});
    CHECK_THROWS_AS(integrate_geodesic(M, p0, 10, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(integrate_geodesic(M, p0, 10, -0.1), std::invalid_argument);

    FinslerMetric boxed = M;
    boxed.set_domain(DomainBox::cube(2, 0.5));
    try {
        integrate_geodesic(boxed, p0, 100, 0.1);
        FAIL("expected ChartExit");
    } catch (const ChartExit& e) {
        CHECK(e.last_valid_index() >= 0);
        CHECK(e.last_valid_index() < 10);
    }
}

TEST_CASE("geodesic CSV has one row per step")
{
    const FinslerMetric M = FinslerMetric::euclidean(2);
    const GeodesicPath path = integrate_geodesic(M, TangentPoint({0.0, 0.0}, {1.0, 0.0}), 4, 0.25);
    std::ostringstream os;
    write_geodesic_csv(os, path);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "t,x1,x2,y1,y2,F");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 5);
}

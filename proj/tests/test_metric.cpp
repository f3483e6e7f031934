#include <cmath>
#include <string>

#include "doctest.h"

#include "flab/errors.hpp"
#include "flab/fd_oracle.hpp"
#include "flab/metric.hpp"
#include "flab/scalar.hpp"
#include "support.hpp"

using namespace flab;
using flab::testing::config;

namespace {

/// Closed-form fundamental tensor of F = alpha + beta with alpha^2 = a_ij y^i y^j.
Eigen::MatrixXd randers_g(const FinslerMetric& M, const TangentPoint& p)
{
    const int n = M.dimension();
    Eigen::MatrixXd a(n, n);
    Eigen::VectorXd b(n), y(n);
    for (int i = 0; i < n; ++i) {
        b[i] = M.b()[i](p.x());
        y[i] = p.y()[i];
        for (int j = 0; j < n; ++j) a(i, j) = M.a()[i][j](p.x());
    }
    const double alpha = std::sqrt(y.dot(a * y));
    const double F = alpha + b.dot(y);
    const Eigen::VectorXd l = a * y / alpha;
    return (F / alpha) * (a - l * l.transpose()) + (l + b) * (l + b).transpose();
}

} // namespace

TEST_CASE("Euclidean fundamental tensor is the identity")
{
    const FinslerMetric M = FinslerMetric::euclidean(3);
    const FundamentalTensor T = fundamental_tensor(M, TangentPoint({0.1, 0.2, 0.3}, {1.0, -2.0, 0.5}));
    CHECK((T.g - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(T.condition == doctest::Approx(1.0));
}

TEST_CASE("Riemannian fundamental tensor is a(x)")
{
    const FinslerMetric M = config("riemannian3");
    for (int k = 0; k < 10; ++k) {
        const TangentPoint p = flab::testing::point(3, k, M);
        const FundamentalTensor T = fundamental_tensor(M, p);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(std::abs(T.g(i, j) - M.a()[i][j](p.x())) <= 1e-13);
    }
}

TEST_CASE("Randers fundamental tensor matches the closed form and finite differences")
{
    for (const char* name : {"randers2", "randers3", "randers4"}) {
        const FinslerMetric M = config(name);
        const int n = M.dimension();
        for (int k = 0; k < 10; ++k) {
            const TangentPoint p = flab::testing::point(11, k, M);
            const FundamentalTensor T = fundamental_tensor(M, p);
            const Eigen::MatrixXd g0 = randers_g(M, p);
            CHECK((T.g - g0).cwiseAbs().maxCoeff() <= 1e-12 * g0.cwiseAbs().maxCoeff());
            CHECK((T.g * T.g_inv - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-12);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const int vars[2] = {n + i, n + j};
                    const double fd = 0.5 * fd_oracle(M.squared(), p, vars);
                    CHECK(std::abs(fd - T.g(i, j)) <= 1e-6 * std::max(1.0, std::abs(T.g(i, j))));
                }
        }
    }
}

TEST_CASE("Euler identities hold to roundoff on every sample family")
{
    for (const char* name : {"euclidean2", "riemannian2", "randers3"}) {
        const FinslerMetric M = config(name);
        for (int k = 0; k < 20; ++k) CHECK(euler_identities(M, flab::testing::point(5, k, M)).max() <= 1e-12);
    }
}

TEST_CASE("sample points are deterministic and avoid the zero section")
{
    const FinslerMetric M = config("randers3");
    for (int k = 0; k < 50; ++k) {
        const TangentPoint p = flab::testing::point(42, k, M);
        const TangentPoint q = flab::testing::point(42, k, M);
        CHECK(p.x() == q.x());
        CHECK(p.y() == q.y());
        double r = 0.0;
        for (double v : p.y()) r += v * v;
        CHECK(std::sqrt(r) >= 0.5);
        CHECK(std::sqrt(r) <= 2.0);
    }
    CHECK(flab::testing::point(42, 0, M).x() != flab::testing::point(43, 0, M).x());
}

TEST_CASE("y = 0 is rejected with a message about the slit tangent bundle")
{
    try {
        TangentPoint p({0.0, 0.0}, {0.0, 0.0});
        FAIL("expected SingularEvaluation");
    } catch (const SingularEvaluation& e) {
        CHECK(std::string(e.what()).find("slit tangent bundle") != std::string::npos);
    }
}

TEST_CASE("a degenerate metric is rejected naming the point")
{
    // g = diag(1, 1e-300): condition number far beyond the guard.
    auto F = ScalarField::from_generic(2, [](auto, auto y) { return checked_sqrt(y[0] * y[0] + 1e-300 * y[1] * y[1]); });
    const FinslerMetric M = FinslerMetric::custom("flat-degenerate", F);
    try {
        fundamental_tensor(M, TangentPoint({0.0, 0.0}, {1.0, 0.5}));
        FAIL("expected DegenerateMetric");
    } catch (const DegenerateMetric& e) {
        CHECK(std::string(e.what()).find("x=") != std::string::npos);
    }
}

TEST_CASE("metric configs are validated field by field")
{
    auto error_of = [](const char* text) {
        try {
            load_metric(nlohmann::json::parse(text));
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(error_of(R"({"family": "randers", "n": 2, "a": [[1,0],[0,1]], "b": [0.1]})").find("b:") == 0);
    CHECK(error_of(R"({"family": "riemannian", "n": 2, "a": [[1,0.2],[0,1]]})").find("symmetric") != std::string::npos);
    CHECK(error_of(R"({"family": "randers", "n": 2, "a": [[1,0],[0,1]], "b": [1.5, 0]})").find("convexity") != std::string::npos);
    CHECK(error_of(R"({"family": "euclidean", "n": 2, "colour": 3})").find("colour") != std::string::npos);
    CHECK(error_of(R"({"family": "finsler", "n": 2})").find("family") != std::string::npos);
    CHECK(error_of(R"({"family": "riemannian", "n": 1, "a": [[{"poly": [[1.0, 4]]}]]})").find("degree") != std::string::npos);
    CHECK(error_of(R"({"family": "riemannian", "n": 2, "a": [[-1,0],[0,1]]})").find("positive definite") != std::string::npos);
    CHECK(error_of(R"({"family": "euclidean", "n": 2})").empty());
}

TEST_CASE("config file loading reports a missing file")
{
    CHECK_THROWS_AS(load_metric_file("/nonexistent/metric.json"), ConfigError);
    CHECK_THROWS_AS(load_metric_file(flab::testing::config_path("malformed")), ConfigError);
}

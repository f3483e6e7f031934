#include <cmath>

#include "doctest.h"

#include "flab/chart.hpp"
#include "flab/errors.hpp"
#include "support.hpp"

using namespace flab;
using flab::testing::config;

TEST_CASE("identity chart leaves every quantity unchanged")
{
    const FinslerMetric M = config("randers3");
    const ChartMap C = ChartMap::identity(3);
    const FinslerMetric pushed = pushforward(M, C);
    for (int k = 0; k < 5; ++k) {
        const ChartPair cp = chart_pair(M, pushed, C, flab::testing::point(14, k, M));
        const ScalarTensorResiduals inv = check_invariance(cp);
        CHECK(std::max({inv.F, inv.g, inv.delta}) <= 1e-13);
        CHECK(check_tk_rule(cp) <= 1e-13);
        const BarFrameRuleResiduals bf = check_barframe_rule(cp);
        CHECK(std::max({bf.rule, bf.gamma, bf.mixed}) <= 1e-13);
        CHECK(frame_change_determinant(cp).relative_difference() <= 1e-13);
    }
}

TEST_CASE("shear-cubic chart is a diffeomorphism of the sampling box")
{
    for (int n : {2, 3, 4}) {
        const ChartMap C = ChartMap::shear_cubic(n);
        CHECK(C.min_abs_det() > 0.5);
        SplitMix64 rng(n);
        for (int k = 0; k < 20; ++k) {
            std::vector<double> x(n);
            for (auto& v : x) v = rng.uniform(-1, 1);
            const std::vector<double> xt = C.apply<double>(x);
            const std::vector<double> back = C.inverse(xt);
            for (int i = 0; i < n; ++i) CHECK(std::abs(back[i] - x[i]) <= 1e-13);
        }
    }
}

TEST_CASE("chart Jacobian and Hessian match finite differences")
{
    const ChartMap C = ChartMap::shear_cubic(3);
    const std::vector<double> x{0.3, -0.6, 0.8};
    const Eigen::MatrixXd J = C.jacobian_value(x);
    const Tensor3 H = C.hessian_value(x);
    const double h = 1e-5;
    for (int j = 0; j < 3; ++j) {
        auto xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        const auto fp = C.apply<double>(xp), fm = C.apply<double>(xm);
        const Eigen::MatrixXd Jp = C.jacobian_value(xp), Jm = C.jacobian_value(xm);
        for (int i = 0; i < 3; ++i) {
            CHECK(std::abs((fp[i] - fm[i]) / (2 * h) - J(i, j)) <= 1e-8);
            for (int k = 0; k < 3; ++k) CHECK(std::abs((Jp(i, k) - Jm(i, k)) / (2 * h) - H(i, k, j)) <= 1e-8);
        }
    }
}

TEST_CASE("tensor rules hold through the shear-cubic chart")
{
    for (const char* name : {"riemannian2", "randers3", "randers4"}) {
        const FinslerMetric M = config(name);
        const ChartMap C = ChartMap::shear_cubic(M.dimension());
        const FinslerMetric pushed = pushforward(M, C);
        for (int k = 0; k < 5; ++k) {
            const ChartPair cp = chart_pair(M, pushed, C, flab::testing::point(15, k, M));
            const ScalarTensorResiduals inv = check_invariance(cp);
            CHECK(inv.F <= 1e-13);
            CHECK(inv.g <= 1e-10);
            CHECK(inv.delta <= 1e-9);
            CHECK(check_tk_rule(cp) <= 1e-10);
            const BarFrameRuleResiduals bf = check_barframe_rule(cp);
            CHECK(bf.rule <= 1e-10);
            CHECK(bf.gamma <= 1e-10);
            CHECK(bf.mixed <= 1e-10);
            const DeterminantCheck d = frame_change_determinant(cp);
            CHECK(d.relative_difference() <= 1e-10);
            CHECK(std::abs(d.numeric) > 0.0);
        }
    }
}

TEST_CASE("induced tangent map lifts the Jacobian")
{
    const ChartMap C = ChartMap::shear_cubic(2);
    const TangentPoint p({0.2, 0.5}, {1.0, -0.5});
    const InducedMap I = induced_tangent_map(C, p);
    const Eigen::MatrixXd J = C.jacobian_value(p.x());
    const Eigen::Vector2d y(1.0, -0.5);
    const Eigen::Vector2d yt = J * y;
    CHECK(std::abs(I.image.y()[0] - yt[0]) <= 1e-15);
    CHECK(std::abs(I.image.y()[1] - yt[1]) <= 1e-15);
    CHECK((I.jacobian.topLeftCorner(2, 2) - J).cwiseAbs().maxCoeff() == 0.0);
    CHECK((I.jacobian.bottomRightCorner(2, 2) - J).cwiseAbs().maxCoeff() == 0.0);
    CHECK(I.jacobian.topRightCorner(2, 2).cwiseAbs().maxCoeff() == 0.0);
}

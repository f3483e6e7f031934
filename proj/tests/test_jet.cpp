#include <cmath>

#include "doctest.h"

#include "flab/fd_oracle.hpp"
#include "flab/jet.hpp"
#include "flab/sampling.hpp"
#include "flab/scalar.hpp"

using namespace flab;

TEST_CASE("jet product rule through order 4 in two variables")
{
    auto B = MonomialBasis::make(2, 4);
    const double u0 = 0.3, v0 = -0.7;
    const Jet u = Jet::variable(B, 0, u0);
    const Jet v = Jet::variable(B, 1, v0);
    const Jet f = sin(u) * exp(v);

    CHECK(f.value() == doctest::Approx(std::sin(u0) * std::exp(v0)).epsilon(1e-15));
    CHECK(f.derivative({0}) == doctest::Approx(std::cos(u0) * std::exp(v0)).epsilon(1e-14));
    CHECK(f.derivative({0, 0, 1}) == doctest::Approx(-std::sin(u0) * std::exp(v0)).epsilon(1e-14));
    CHECK(f.derivative({0, 0, 0, 1}) == doctest::Approx(-std::cos(u0) * std::exp(v0)).epsilon(1e-14));
    CHECK(f.derivative({1, 1, 1, 1}) == doctest::Approx(std::sin(u0) * std::exp(v0)).epsilon(1e-14));
}

TEST_CASE("quotient, sqrt, log and pow agree with the chain rule")
{
    auto B = MonomialBasis::make(1, 4);
    const double a = 1.7;
    const Jet x = Jet::variable(B, 0, a);

    const Jet r = 1.0 / x;
    CHECK(r.derivative({0, 0, 0}) == doctest::Approx(-6.0 / std::pow(a, 4)).epsilon(1e-14));
    const Jet s = sqrt(x);
    CHECK(s.derivative({0, 0}) == doctest::Approx(-0.25 * std::pow(a, -1.5)).epsilon(1e-14));
    const Jet l = log(x);
    CHECK(l.derivative({0, 0, 0, 0}) == doctest::Approx(-6.0 / std::pow(a, 4)).epsilon(1e-14));
    const Jet p = pow(x, 2.5);
    CHECK(p.derivative({0, 0, 0}) == doctest::Approx(2.5 * 1.5 * 0.5 * std::pow(a, -0.5)).epsilon(1e-14));
}

TEST_CASE("division by a jet with zero value is singular")
{
    auto B = MonomialBasis::make(1, 2);
    const Jet x = Jet::variable(B, 0, 0.0);
    CHECK_THROWS(1.0 / x);
}

TEST_CASE("truncation keeps low-order coefficients and lowers the order")
{
    auto B = MonomialBasis::make(3, 4);
    const Jet x = Jet::variable(B, 0, 0.5);
    const Jet y = Jet::variable(B, 2, 2.0);
    const Jet f = exp(x * y);
    const Jet t = f.truncated(2);
    CHECK(t.order() == 2);
    CHECK(t.derivative({0, 2}) == doctest::Approx(f.derivative({0, 2})).epsilon(1e-15));
    CHECK((t * f).order() == 2);
}

TEST_CASE("from_taylor reproduces a polynomial's jet")
{
    auto B = MonomialBasis::make(2, 4);
    std::vector<double> c(B->size_up_to(2), 0.0);
    c[0] = 1.0;
    c[1] = 2.0;                          // d/du
    c[B->index_of(std::vector<int>{1, 1})] = 3.0;  // u v
    const Jet j = Jet::from_taylor(B, 4, c);
    CHECK(j.value() == 1.0);
    CHECK(j.derivative({0}) == 2.0);
    CHECK(j.derivative({0, 1}) == doctest::Approx(3.0));
    CHECK(j.derivative({0, 0, 1}) == 0.0);
}

TEST_CASE("jet derivatives of random compositions match finite differences")
{
    SplitMix64 rng(1234);
    for (int trial = 0; trial < 20; ++trial) {
        const double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1), c = rng.uniform(0.5, 2.0);
        auto f = [&](auto z0, auto z1) { return sqrt(c + z0 * z0) * cos(a * z1) + exp(b * z0 * z1); };
        auto B = MonomialBasis::make(2, 4);
        const double z[2] = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const Jet J = f(Jet::variable(B, 0, z[0]), Jet::variable(B, 1, z[1]));
        auto fd = [&](std::span<const double> zz) {
            using std::sqrt, std::cos, std::exp;
            return sqrt(c + zz[0] * zz[0]) * cos(a * zz[1]) + exp(b * zz[0] * zz[1]);
        };
        for (std::vector<int> vars : {std::vector<int>{0}, {1}, {0, 1}, {1, 1}, {0, 0, 1}, {0, 1, 1}}) {
            const double ad = J.derivative(vars);
            const double num = fd_partial(fd, z, vars);
            CHECK(std::abs(ad - num) <= 1e-6 * std::max(1.0, std::abs(ad)));
        }
    }
}

TEST_CASE("Tensor3 indexing is row-major")
{
    Tensor3 T(3);
    T(1, 2, 0) = 5.0;
    CHECK(T(1, 2, 0) == 5.0);
    CHECK(T(0, 2, 1) == 0.0);
    CHECK(T.size() == 3);
}

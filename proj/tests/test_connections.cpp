#include <cmath>

#include "doctest.h"

#include "flab/connections.hpp"
#include "flab/fd_oracle.hpp"
#include "flab/spray.hpp"
#include "support.hpp"

using namespace flab;
using flab::testing::config;

namespace {

double max_abs(const Tensor3& T)
{
    double m = 0.0;
    const int n = T.size();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) m = std::max(m, std::abs(T(a, b, c)));
    return m;
}

std::vector<double> chart_coordinates(const TangentPoint& p)
{
    std::vector<double> z;
    for (int q = 0; q < 2 * p.dimension(); ++q) z.push_back(p.coordinate(q));
    return z;
}

/// d^r G^k / dz^vars by finite differences of the spray.
double fd_spray(const FinslerMetric& M, const TangentPoint& p, int k, std::vector<int> vars)
{
    const int n = M.dimension();
    auto Gk = [&](std::span<const double> w) { return spray_coefficients(M, w.first(n), w.subspan(n))[k]; };
    const auto z = chart_coordinates(p);
    return fd_partial(Gk, z, vars);
}

} // namespace

TEST_CASE("Cartan tensor vanishes for Riemannian metrics and is symmetric otherwise")
{
    const FinslerMetric R = config("riemannian3");
    const FinslerMetric Q = config("randers3");
    for (int k = 0; k < 5; ++k) {
        CHECK(max_abs(vranceanu(PointGeometry(R, flab::testing::point(16, k, R))).C) <= 1e-12);
        const VranceanuTable v = vranceanu(PointGeometry(Q, flab::testing::point(16, k, Q)));
        CHECK(max_abs(v.C) > 1e-3);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 3; ++c) CHECK(std::abs(v.C(a, b, c) - v.C(a, c, b)) <= 1e-13);
    }
}

TEST_CASE("Euclidean connection tables vanish")
{
    const FinslerMetric M = FinslerMetric::euclidean(3);
    const PointGeometry geo(M, TangentPoint({0.1, 0.2, -0.3}, {0.5, -1.0, 0.7}));
    const VranceanuTable v = vranceanu(geo);
    CHECK(max_abs(v.C) == 0.0);
    CHECK(max_abs(v.Gc) == 0.0);
    CHECK(max_abs(v.Fc) == 0.0);
    const VaismanTable va = vaisman(geo);
    CHECK(va.beta_i.cwiseAbs().maxCoeff() <= 1e-15);
    for (double b : va.mixed) CHECK(std::abs(b) <= 1e-15);
}

TEST_CASE("Euclidean leafwise Vaisman coefficients match the round-sphere oracle")
{
    // nabla_{dbar_a} dbar_b = -(y^b / |y|^2) dbar_a on the leaves |y| = const of flat space.
    SplitMix64 rng(17);
    for (int n : {2, 3, 4}) {
        const FinslerMetric M = FinslerMetric::euclidean(n);
        for (int trial = 0; trial < 5; ++trial) {
            const TangentPoint p = sample_point(rng, n, M.domain());
            const PointGeometry geo(M, p);
            const VaismanTable va = vaisman(geo);
            double r2 = 0.0;
            for (double v : p.y()) r2 += v * v;
            const auto& kept = geo.kept();
            for (int a = 0; a < n - 1; ++a)
                for (int b = 0; b < n - 1; ++b)
                    for (int c = 0; c < n - 1; ++c) {
                        const double oracle = a == c ? -p.y()[kept[b]] / r2 : 0.0;
                        CHECK(std::abs(va.leaf(a, b, c) - oracle) <= 1e-13);
                    }
            CHECK((va.s_gamma + Eigen::MatrixXd::Identity(n - 1, n - 1)).cwiseAbs().maxCoeff() <= 1e-14);
            CHECK(std::abs(va.s - 1.0) <= 1e-14);
            CHECK(va.s_a.cwiseAbs().maxCoeff() <= 1e-14);
        }
    }
}

TEST_CASE("Vranceanu coefficients match finite-difference assembly")
{
    for (const char* name : {"riemannian2", "randers3"}) {
        const FinslerMetric M = config(name);
        const int n = M.dimension();
        for (int s = 0; s < 3; ++s) {
            const TangentPoint p = flab::testing::point(18, s, M);
            const VranceanuTable v = vranceanu(PointGeometry(M, p));

            // dg_ij/dz^q = 1/2 d^3 F^2 / dy^i dy^j dz^q
            auto dg = [&](int i, int j, int q) {
                const int vars[3] = {n + i, n + j, q};
                return 0.5 * fd_oracle(M.squared(), p, vars);
            };
            Eigen::MatrixXd g(n, n), N(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const int vars[2] = {n + i, n + j};
                    g(i, j) = 0.5 * fd_oracle(M.squared(), p, vars);
                    N(i, j) = fd_spray(M, p, i, {n + j});
                }
            const Eigen::MatrixXd ginv = g.inverse();
            auto delta_g = [&](int l, int i, int j) {
                double acc = dg(i, j, l);
                for (int k = 0; k < n; ++k) acc -= N(k, l) * dg(i, j, n + k);
                return acc;
            };
            double scale = std::max(1.0, max_abs(v.Fc));
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        double F = 0.0, C = 0.0;
                        for (int l = 0; l < n; ++l) {
                            F += 0.5 * ginv(k, l) * (delta_g(j, i, l) + delta_g(i, j, l) - delta_g(l, i, j));
                            C += 0.5 * ginv(k, l) * dg(i, j, n + l);
                        }
                        CHECK(std::abs(F - v.Fc(k, i, j)) <= 1e-6 * scale);
                        CHECK(std::abs(C - v.C(k, i, j)) <= 1e-6);
                        const double Gc = fd_spray(M, p, k, {n + i, n + j});
                        CHECK(std::abs(Gc - v.Gc(k, i, j)) <= 1e-6 * std::max(1.0, std::abs(Gc)));
                    }
        }
    }
}

TEST_CASE("connection checks hold at roundoff")
{
    SplitMix64 rng(19);
    for (const char* name : {"riemannian3", "randers3"}) {
        const FinslerMetric M = config(name);
        for (int s = 0; s < 3; ++s) {
            const PointGeometry geo(M, flab::testing::point(19, s, M));
            const VranceanuTable vr = vranceanu(geo);
            const VaismanTable va = vaisman(geo);
            const VranceanuChecks a = check_vranceanu_basic(geo, vr, rng);
            CHECK(std::max({a.C_symmetry, a.C_trace, a.F_symmetry, a.basic, a.lift_independence}) <= 1e-11);
            CHECK(a.structural == 0.0);
            const VaismanChecks b = check_vaisman(geo, va, rng);
            CHECK(std::max({b.gamma_action, b.s_values, b.s_a, b.s_gamma, b.beta_i}) <= 1e-11);
            CHECK(std::max({b.cond_a, b.cond_b, b.cond_c, b.cond_d, b.basic, b.lift_independence}) <= 1e-11);
            const CompositeChecks c = check_composite(geo, vr, va, rng);
            CHECK(std::max({c.gamma_delta, c.gamma_dbar, c.basic, c.lift_independence, c.inclusion, c.projection}) <= 1e-11);
            CHECK(curvature_on_line(geo, rng) <= 1e-9);
            CHECK(curvature_on_line(geo, rng, true) == 0.0);
        }
    }
}

TEST_CASE("perturbed tables are caught")
{
    SplitMix64 rng(20);
    const FinslerMetric M = config("randers3");
    const PointGeometry geo(M, flab::testing::point(20, 0, M));
    const VranceanuTable vr = vranceanu(geo);
    const VaismanTable va = vaisman(geo);

    VaismanTable bad_s = va;
    bad_s.s_gamma(0, 1) += 1e-4;
    CHECK(gamma_action_residual(geo, bad_s) >= 1e-5);
    CHECK(check_composite(geo, vr, bad_s, rng).gamma_dbar >= 1e-5);

    VaismanTable bad_leaf = va;
    bad_leaf.leafwise[1] += 1e-4;
    CHECK(check_vaisman(geo, bad_leaf, rng).cond_c >= 1e-5);

    VaismanTable bad_mixed = va;
    bad_mixed.mixed[0] += 1e-4;
    CHECK(check_vaisman(geo, bad_mixed, rng).cond_d >= 1e-5);

    VranceanuTable bad_C = vr;
    bad_C.C(0, 1, 2) += 1e-4;
    const VranceanuChecks vc = check_vranceanu_basic(geo, bad_C, rng);
    CHECK(std::max(vc.C_symmetry, vc.basic) >= 1e-5);

    VranceanuTable bad_F = vr;
    bad_F.Fc(1, 0, 2) += 1e-4;
    CHECK(check_vranceanu_basic(geo, bad_F, rng).F_symmetry >= 1e-5);
}

TEST_CASE("connection tables have consistent shapes")
{
    const FinslerMetric M = config("randers4");
    const PointGeometry geo(M, flab::testing::point(21, 0, M));
    const VranceanuTable vr = vranceanu(geo);
    const VaismanTable va = vaisman(geo);
    const ConnectionTable H = vranceanu_horizontal(geo, vr);
    const ConnectionTable L = vaisman_leafwise(geo, va);
    const ConnectionTable P = composite_connection(geo, vr, va);
    CHECK(H.rank() == 4);
    CHECK(H.dirs() == 8);
    CHECK(L.rank() == 3);
    CHECK(L.dirs() == 8);
    CHECK(P.rank() == 7);
    CHECK(P.dirs() == 8);
    for (const auto* T : {&H, &L, &P}) CHECK(T->consistent(4));

    const nlohmann::json d = connection_dump(geo, vr, va, P);
    for (const char* key : {"metric", "point", "dropped", "kept", "vranceanu", "vaisman", "composite"})
        CHECK(d.contains(key));
    CHECK(d.at("composite").at("sections").size() == 7);
}

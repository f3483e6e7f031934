// Acceptance run: one line per criterion, exit status 1 if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "flab/connections.hpp"
#include "flab/spray.hpp"
#include "flab/verify.hpp"
#include "support.hpp"

using namespace flab;

namespace {

constexpr int kPoints = 1000;
constexpr std::uint64_t kSeed = 42;
const std::vector<std::string> kMetrics{"euclidean2", "riemannian2", "riemannian3", "randers3", "randers4"};

struct Criterion {
    std::string title;
    std::vector<std::string> suites;  ///< suites or check ids of the sweep
};

const std::vector<Criterion>& criteria()
{
    static const std::vector<Criterion> c{
        {"Euler and homogeneity identities", {"euler", "spray"}},
        {"t_k identities", {"liouville", "t_field"}},
        {"dbar bracket relations", {"bar_brackets"}},
        {"frame, Sasaki and almost Kaehler structure", {"frame", "frobenius", "kahler", "sasaki"}},
        {"change of chart", {"chart", "chart_identity"}},
        {"connections", {"vranceanu", "vaisman", "composite", "adapted_triple", "curvature"}},
    };
    return c;
}

bool in_suites(const std::string& id, const std::vector<std::string>& suites)
{
    for (const auto& s : suites)
        if (id == s || id.rfind(s + ".", 0) == 0) return true;
    return false;
}

struct Line {
    bool pass = true;
    std::string detail;
    void worst(const std::string& what, double value, double tol)
    {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s %.2e (tol %.0e)", what.c_str(), value, tol);
        detail = buf;
    }
};

int failures = 0;

void print(int k, const std::string& title, const Line& l)
{
    std::printf("[%s] %d. %-44s %s\n", l.pass ? "PASS" : "FAIL", k, title.c_str(), l.detail.c_str());
    failures += l.pass ? 0 : 1;
}

/// Worst check, by residual / tolerance, over the given suites and every metric.
Line from_sweeps(const std::vector<SweepResult>& runs, const std::vector<std::string>& suites)
{
    Line l;
    double worst_ratio = -1.0;
    int checks = 0;
    for (const auto& r : runs)
        for (const auto& c : r.checks) {
            if (!in_suites(c.spec.id, suites)) continue;
            ++checks;
            if (!c.pass) l.pass = false;
            const double ratio = !c.pass ? INFINITY : c.tolerance > 0.0 ? c.max_residual / c.tolerance : 0.0;
            if (ratio > worst_ratio) {
                worst_ratio = ratio;
                l.worst(r.metric + ":" + c.spec.id, c.max_residual, c.tolerance);
            }
        }
    l.detail = std::to_string(checks) + " checks, worst " + l.detail;
    if (checks == 0) l.pass = false;
    return l;
}

double max_abs(const Tensor3& T)
{
    double m = 0.0;
    for (int a = 0; a < T.size(); ++a)
        for (int b = 0; b < T.size(); ++b)
            for (int c = 0; c < T.size(); ++c) m = std::max(m, std::abs(T(a, b, c)));
    return m;
}

Line special_cases()
{
    Line l;
    double cartan = 0.0, christoffel = 0.0;
    for (const char* name : {"riemannian2", "riemannian3"}) {
        const FinslerMetric M = testing::config(name);
        for (int k = 0; k < kPoints; ++k) {
            const TangentPoint p = testing::point(kSeed, k, M);
            const PointGeometry geo(M, p);
            cartan = std::max(cartan, max_abs(vranceanu(geo).C));
            const Eigen::VectorXd ref = testing::christoffel_spray(M, p);
            const double scale = std::max(1.0, ref.cwiseAbs().maxCoeff());
            christoffel = std::max(christoffel, (spray(geo).G - ref).cwiseAbs().maxCoeff() / scale);
        }
    }

    // Flat space: Vranceanu tables vanish; on L_Gamma^perp = {delta_i, dbar_a} the composite acts by
    // nabla_Gamma dbar_a = -dbar_a and nabla_{dbar_a} dbar_b = -(y^b / |y|^2) dbar_a, all else zero.
    double flat = 0.0;
    for (const char* name : {"euclidean2", "euclidean3"}) {
        const FinslerMetric M = testing::config(name);
        const int n = M.dimension();
        for (int k = 0; k < kPoints; ++k) {
            const TangentPoint p = testing::point(kSeed, k, M);
            const PointGeometry geo(M, p);
            const VranceanuTable vr = vranceanu(geo);
            const VaismanTable va = vaisman(geo);
            const ConnectionTable T = composite_connection(geo, vr, va);
            flat = std::max({flat, max_abs(vr.C), max_abs(vr.Gc), max_abs(vr.Fc), std::abs(va.s - 1.0),
                             va.s_a.cwiseAbs().maxCoeff(), va.beta_i.cwiseAbs().maxCoeff()});
            double r2 = 0.0;
            for (double v : p.y()) r2 += v * v;
            for (int d = 0; d < T.dirs(); ++d)
                for (int e = 0; e < T.rank(); ++e)
                    for (int o = 0; o < T.rank(); ++o) {
                        double want = 0.0;
                        if (e >= n && o >= n) {
                            const int b = e - n, c = o - n;
                            if (d == 2 * n - 1 && b == c) want = -1.0;
                            if (d >= n && d < 2 * n - 1 && d - n == c) want = -p.y()[geo.kept()[b]] / r2;
                        }
                        flat = std::max(flat, std::abs(T(d, e, o) - want));
                    }
        }
    }
    l.pass = cartan <= 1e-12 && christoffel <= 1e-6 && flat <= 1e-10;
    char buf[200];
    std::snprintf(buf, sizeof buf, "Riemannian C %.2e (tol 1e-12), Christoffel %.2e (tol 1e-06), flat tables %.2e (tol 1e-10)",
                  cartan, christoffel, flat);
    l.detail = buf;
    return l;
}

Line numerics(const std::vector<SweepResult>& runs)
{
    Line l = from_sweeps(runs, {"numerics"});
    for (const auto& r : runs)
        for (const auto& c : r.checks)
            if (c.spec.id.rfind("numerics.", 0) == 0 && c.evaluated != 50) l.pass = false;

    // RK4 drift in F over t in [0, 2]: halving dt should divide it by about 16.
    double lo = INFINITY, hi = 0.0;
    for (const char* name : {"riemannian2", "randers2"}) {
        const FinslerMetric M = testing::config(name);
        const TangentPoint p0({0.1, 0.2}, {1.0, 0.5});
        double prev = 0.0;
        for (double dt : {0.1, 0.05, 0.025, 0.0125}) {
            const double d = integrate_geodesic(M, p0, static_cast<int>(std::lround(2.0 / dt)), dt).drift;
            if (prev > 0.0) {
                lo = std::min(lo, prev / d);
                hi = std::max(hi, prev / d);
            }
            prev = d;
        }
    }
    l.pass = l.pass && lo >= 8.0 && hi <= 32.0;
    char buf[120];
    std::snprintf(buf, sizeof buf, "; RK4 drift ratios %.1f..%.1f (want 16 within a factor 2)", lo, hi);
    l.detail += buf;
    return l;
}

SweepOptions options(int points, int threads)
{
    SweepOptions o;
    o.points = points;
    o.seed = kSeed;
    o.threads = threads;
    return o;
}

} // namespace

int main()
{
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<SweepResult> runs;
    std::vector<std::string> bodies;
    for (const auto& name : kMetrics) {
        const FinslerMetric M = testing::config(name);
        const SweepOptions o = options(kPoints, 1);
        runs.push_back(run_sweep(M, o));
        bodies.push_back(report_json(runs.back(), o).at("checks").dump());
        std::printf("  %-12s %d points, %zu checks, %.1f s\n", name.c_str(), kPoints, runs.back().checks.size(),
                    runs.back().wall_seconds);
    }

    int k = 0;
    for (const auto& c : criteria()) print(++k, c.title, from_sweeps(runs, c.suites));
    print(++k, "special-case oracles", special_cases());
    print(++k, "finite-difference cross-checks and RK4 order", numerics(runs));

    Line det;
    for (std::size_t m = 0; m < kMetrics.size(); ++m) {
        const FinslerMetric M = testing::config(kMetrics[m]);
        for (int threads : {1, 4}) {
            const SweepOptions o = options(kPoints, threads);
            if (report_json(run_sweep(M, o), o).at("checks").dump() != bodies[m]) det.pass = false;
        }
    }
    det.detail = "repeat run and 4-thread run match the first report body, " + std::to_string(kMetrics.size()) +
                 " metrics x " + std::to_string(kPoints) + " points";
    print(++k, "determinism", det);

    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%d of %d criteria passed, %.1f s\n", k - failures, k, total);
    return failures ? 1 : 0;
}

// flab: sweeps, geodesics and per-point dumps for Finsler metrics read from JSON configs.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "flab/connections.hpp"
#include "flab/errors.hpp"
#include "flab/liouville.hpp"
#include "flab/spray.hpp"
#include "flab/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& text, const std::string& what)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(what + ": cannot parse '" + item + "' as a number");
        }
    }
    if (out.empty()) throw UsageError(what + ": empty list");
    return out;
}

/// "x1,...,xn;y1,...,yn"
flab::TangentPoint parse_point(const std::string& text, int n)
{
    const auto semi = text.find(';');
    if (semi == std::string::npos) throw UsageError("--point: expected \"x1,...,xn;y1,...,yn\"");
    auto x = parse_list(text.substr(0, semi), "--point x");
    auto y = parse_list(text.substr(semi + 1), "--point y");
    if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
        throw UsageError("--point: expected " + std::to_string(n) + " coordinates for x and for y");
    return flab::TangentPoint(std::move(x), std::move(y));
}

void write_json(const nlohmann::json& j, const std::string& path)
{
    if (path.empty() || path == "-") {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw flab::ConfigError("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

flab::FinslerMetric load(const std::string& path)
{
    flab::LoadedMetric lm = flab::load_metric_file(path);
    for (const auto& w : lm.warnings) std::cerr << "warning: " << w << '\n';
    return lm.metric;
}

std::vector<std::string> split_names(const std::string& text)
{
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

struct VerifyArgs {
    std::string metric, report, checks, profile;
    int points = 100, threads = 1, samples = 10;
    std::uint64_t seed = 42;
    double tol = -1.0;
    bool list = false;
};

int cmd_verify(const VerifyArgs& a)
{
    if (a.list) {
        for (const auto& c : flab::check_registry())
            std::printf("%-34s %-12s %-8.1e %s\n", c.id.c_str(), flab::to_string(c.cls).c_str(), c.tolerance,
                        c.anchor.c_str());
        return kExitOk;
    }
    if (a.metric.empty()) throw UsageError("verify: --metric is required");
    if (a.points < 1) throw UsageError("verify: --points must be at least 1");
    if (a.threads < 1) throw UsageError("verify: --threads must be at least 1");

    flab::SweepOptions opts;
    opts.points = a.points;
    opts.seed = a.seed;
    opts.threads = a.threads;
    opts.samples = a.samples;
    opts.selection = split_names(a.checks);
    if (!a.profile.empty()) opts.tolerances = flab::load_tolerance_profile(a.profile);
    if (a.tol >= 0.0) opts.tolerances.global = a.tol;
    flab::select_checks(opts.selection);

    const flab::FinslerMetric M = load(a.metric);
    const flab::SweepResult res = flab::run_sweep(M, opts);
    if (!a.report.empty()) write_json(flab::report_json(res, opts), a.report);

    int failed = 0;
    for (const auto& c : res.checks) {
        std::printf("%-4s %-34s max %-10.3e tol %-8.1e", c.pass ? "ok" : "FAIL", c.spec.id.c_str(), c.max_residual,
                    c.tolerance);
        if (c.errors) std::printf(" errors %d", c.errors);
        std::printf("\n");
        failed += c.pass ? 0 : 1;
        for (const auto& m : c.error_messages) std::printf("       %s\n", m.c_str());
    }
    std::printf("%s: %zu checks, %d failed, %d points, %.2f s\n", res.metric.c_str(), res.checks.size(), failed,
                opts.points, res.wall_seconds);
    return failed ? kExitFail : kExitOk;
}

struct GeodesicArgs {
    std::string metric, x0, y0, out;
    int steps = 1000;
    double dt = 0.0;
};

int cmd_geodesic(const GeodesicArgs& a)
{
    if (!(a.dt > 0.0)) throw UsageError("geodesic: --dt must be positive");
    if (a.steps < 1) throw UsageError("geodesic: --steps must be at least 1");
    const flab::FinslerMetric M = load(a.metric);
    const int n = M.dimension();
    auto x = parse_list(a.x0, "--x0");
    auto y = parse_list(a.y0, "--y0");
    if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
        throw UsageError("geodesic: --x0 and --y0 need " + std::to_string(n) + " entries");
    const flab::TangentPoint p0(std::move(x), std::move(y));
    flab::GeodesicPath path;
    try {
        path = flab::integrate_geodesic(M, p0, a.steps, a.dt);
    } catch (const flab::ChartExit& e) {
        std::cerr << "error: " << e.what() << " (last valid step " << e.last_valid_index() << ")\n";
        return kExitFail;
    }
    if (a.out.empty() || a.out == "-") {
        flab::write_geodesic_csv(std::cout, path);
    } else {
        std::ofstream out(a.out);
        if (!out) throw flab::ConfigError("cannot write '" + a.out + "'");
        flab::write_geodesic_csv(out, path);
    }
    std::fprintf(stderr, "steps %d dt %g final t %.6g F drift %.3e\n", a.steps, a.dt, path.t.back(), path.drift);
    return kExitOk;
}

struct DumpArgs {
    std::string metric, point, out, reverify;
};

int cmd_frames(const DumpArgs& a)
{
    const flab::FinslerMetric M = load(a.metric);
    if (!a.reverify.empty()) {
        std::ifstream in(a.reverify);
        if (!in) throw flab::ConfigError("cannot open dump '" + a.reverify + "'");
        const double diff = flab::reverify_frame_dump(nlohmann::json::parse(in), M);
        std::printf("max difference %.3e\n", diff);
        return diff <= 1e-12 ? kExitOk : kExitFail;
    }
    if (a.point.empty()) throw UsageError("frames: --point is required");
    const flab::PointGeometry geo(M, parse_point(a.point, M.dimension()));
    nlohmann::json dump = flab::frame_dump(geo, flab::frame_pack(geo));
    for (const auto& w : dump.value("warnings", nlohmann::json::array())) std::cerr << "warning: " << w.get<std::string>() << '\n';
    write_json(dump, a.out);
    return kExitOk;
}

int cmd_connections(const DumpArgs& a)
{
    const flab::FinslerMetric M = load(a.metric);
    if (a.point.empty()) throw UsageError("connections: --point is required");
    const flab::PointGeometry geo(M, parse_point(a.point, M.dimension()));
    const flab::VranceanuTable vr = flab::vranceanu(geo);
    const flab::VaismanTable va = flab::vaisman(geo);
    write_json(flab::connection_dump(geo, vr, va, flab::composite_connection(geo, vr, va)), a.out);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Finsler geometry laboratory"};
    app.require_subcommand(1);

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "run the identity checks over sampled points");
    verify->add_option("--metric", va.metric, "metric config (JSON)");
    verify->add_option("--points", va.points, "number of sample points");
    verify->add_option("--seed", va.seed, "sampling seed");
    verify->add_option("--tol", va.tol, "tolerance applied to every check");
    verify->add_option("--report", va.report, "report path ('-' for stdout)");
    verify->add_option("--checks", va.checks, "comma separated check ids or suite names");
    verify->add_option("--tol-profile", va.profile, "tolerance profile (JSON)");
    verify->add_option("--threads", va.threads, "worker threads");
    verify->add_option("--samples", va.samples, "random fields per basicness check");
    verify->add_flag("--list", va.list, "print the check registry and exit");

    GeodesicArgs ga;
    auto* geodesic = app.add_subcommand("geodesic", "integrate a geodesic with RK4 and write CSV");
    geodesic->add_option("--metric", ga.metric, "metric config (JSON)")->required();
    geodesic->add_option("--x0", ga.x0, "initial position, comma separated")->required();
    geodesic->add_option("--y0", ga.y0, "initial velocity, comma separated")->required();
    geodesic->add_option("--steps", ga.steps, "number of steps");
    geodesic->add_option("--dt", ga.dt, "step size")->required();
    geodesic->add_option("--out", ga.out, "CSV path ('-' for stdout)");

    DumpArgs fa;
    auto* frames = app.add_subcommand("frames", "dump the adapted frame pack at a point");
    frames->add_option("--metric", fa.metric, "metric config (JSON)")->required();
    frames->add_option("--point", fa.point, "\"x1,...,xn;y1,...,yn\"");
    frames->add_option("--out", fa.out, "output path ('-' for stdout)");
    frames->add_option("--reverify", fa.reverify, "recompute a previous dump and compare");

    DumpArgs ca;
    auto* connections = app.add_subcommand("connections", "dump the connection tables at a point");
    connections->add_option("--metric", ca.metric, "metric config (JSON)")->required();
    connections->add_option("--point", ca.point, "\"x1,...,xn;y1,...,yn\"")->required();
    connections->add_option("--out", ca.out, "output path ('-' for stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*verify) return cmd_verify(va);
        if (*geodesic) return cmd_geodesic(ga);
        if (*frames) return cmd_frames(fa);
        if (*connections) return cmd_connections(ca);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const flab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const flab::SingularEvaluation& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFail;
    }
    return kExitUsage;
}

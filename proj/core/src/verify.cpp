#include "flab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <thread>
#include <unordered_map>

#include "flab/connections.hpp"
#include "flab/errors.hpp"
#include "flab/fd_oracle.hpp"
#include "flab/liouville.hpp"
#include "flab/sasaki.hpp"
#include "flab/spray.hpp"

namespace flab {

namespace {

using nlohmann::json;
using TC = ToleranceClass;

constexpr std::uint64_t kFieldStream = 0x5eedf1e1d5ULL;
constexpr int kMaxErrorMessages = 5;

std::vector<CheckSpec> build_registry()
{
    return {
        {"euler.quadratic", "y^i y^j g_ij = F^2", TC::first_order, 1e-8},
        {"euler.gradient", "dF/dy^k = g_ki y^i / F", TC::first_order, 1e-8},
        {"euler.cartan", "y^i dg_ij/dy^k = 0", TC::first_order, 1e-8},
        {"euler.liouville_norm", "G(Gamma, Gamma) = F^2", TC::first_order, 1e-8},
        {"liouville.t_routes", "(1/F) dF/dy^k = g_ki y^i / F^2", TC::first_order, 1e-8},

        {"t_field.y_dot_t", "y^i t_i = 1", TC::first_order, 1e-8},
        {"t_field.y_dot_dbar", "y^i dbar_i = 0", TC::first_order, 1e-8},
        {"t_field.dt_dy", "dt_l/dy^k = g_kl / F^2 - 2 t_k t_l", TC::first_order, 1e-8},
        {"t_field.gamma_t", "Gamma(t_k) = -t_k", TC::first_order, 1e-8},
        {"t_field.contracted_dt", "y^j dt_j/dy^i = -t_i", TC::first_order, 1e-8},
        {"t_field.contracted_gamma_t", "y^i Gamma(t_i) = -1", TC::first_order, 1e-8},
        {"bar_brackets.dbar_dbar", "[dbar_i, dbar_j] = t_i dbar_j - t_j dbar_i", TC::third_order, 1e-7},
        {"bar_brackets.dbar_gamma", "[dbar_i, Gamma] = dbar_i", TC::third_order, 1e-7},

        {"frame.bar_orthogonality", "G(dbar_k, Gamma) = 0 for every k", TC::algebraic, 1e-10},
        {"frame.dependence", "y^k dbar_k = 0 solved for the dropped field", TC::algebraic, 1e-10},
        {"frame.gram_blocks", "L'_xi, L_xi, L'_Gamma, L_Gamma are pairwise G-orthogonal", TC::first_order, 1e-9},
        {"frame.j_images", "J dbar_a = deltabar_a and J Gamma = xi", TC::algebraic, 1e-10},
        {"frame.norms", "G(xi, xi) = G(Gamma, Gamma) = F^2", TC::algebraic, 1e-10},
        {"frame.perp_to_gamma", "deltabar_a, xi, dbar_a are G-orthogonal to Gamma", TC::algebraic, 1e-10},
        {"frobenius.vertical", "V is involutive", TC::first_order, 1e-8},
        {"frobenius.indicatrix", "L'_Gamma is involutive", TC::first_order, 1e-8},
        {"frobenius.perp", "L_Gamma^perp = H + L'_Gamma is involutive", TC::first_order, 1e-8},
        {"frobenius.vertical_line", "L_Gamma is involutive", TC::first_order, 1e-8},
        {"frobenius.horizontal_line", "L_xi is involutive", TC::first_order, 1e-8},
        {"frobenius.liouville_plane", "L_Gamma + L_xi is involutive", TC::first_order, 1e-8},

        {"kahler.j_squared", "J^2 = -Id in the adapted frame", TC::structural, 0.0},
        {"kahler.j_compat", "G(JX, JY) = G(X, Y)", TC::first_order, 1e-9},
        {"kahler.routes", "G(J., .) equals the wedge form g_ij delta y^i ^ dx^j", TC::algebraic, 1e-10},
        {"kahler.antisymmetry", "Omega(X, Y) = -Omega(Y, X)", TC::structural, 1e-12},
        {"kahler.d_omega", "dOmega = 0 on triples of adapted fields", TC::third_order, 1e-7},
        {"kahler.volume", "|det Omega| = det G in coordinates", TC::algebraic, 1e-10},
        {"kahler.random_pairs", "Omega(X, Y) = G(JX, Y) on random vectors", TC::algebraic, 1e-10},
        {"sasaki.roundtrip", "coordinate Sasaki matrix is diag(g, g) in the adapted frame", TC::algebraic, 1e-10},
        {"spray.pairing", "(dx, delta y) is the dual coframe of (delta/delta x, d/dy)", TC::structural, 1e-12},
        {"spray.homogeneity", "G^i(x, s y) = s^2 G^i(x, y)", TC::first_order, 1e-9},

        {"chart.F_invariance", "F~(phi(x), D phi y) = F(x, y)", TC::third_order, 1e-7},
        {"chart.g_rule", "g~ = Dpsi^T g Dpsi", TC::third_order, 1e-7},
        {"chart.delta_rule", "delta~_i = (dx^k/dx~^i) delta_k", TC::third_order, 1e-7},
        {"chart.t_covector", "t~_i = (dx^k/dx~^i) t_k", TC::third_order, 1e-7},
        {"chart.dbar_rule", "dbar~_i = (dx^k/dx~^i) dbar_k", TC::third_order, 1e-7},
        {"chart.gamma_invariance", "the lift maps Gamma to Gamma~", TC::third_order, 1e-7},
        {"chart.dropped_relations", "dependent fields of both charts agree through the frame rule", TC::third_order, 1e-7},
        {"chart.determinant", "det of the frame change = (-1)^(m+k) (y~^k / y^m) det(dx/dx~)", TC::third_order, 1e-7},
        {"chart.gamma_action_two_charts", "nabla^v_Gamma dbar_i = -dbar_i holds equally in both charts", TC::first_order, 1e-8},
        {"chart_identity.invariance", "identity chart: F, g and delta unchanged", TC::structural, 1e-12},
        {"chart_identity.t_covector", "identity chart: t unchanged", TC::structural, 1e-12},
        {"chart_identity.dbar_rule", "identity chart: dbar frame unchanged", TC::structural, 1e-12},
        {"chart_identity.determinant", "identity chart: frame change determinant formula", TC::structural, 1e-12},

        {"vranceanu.C_symmetry", "C^k_ij = C^k_ji", TC::structural, 1e-12},
        {"vranceanu.C_trace", "C^k_ij y^j = 0", TC::algebraic, 1e-10},
        {"vranceanu.F_symmetry", "F^k_ij = F^k_ji", TC::algebraic, 1e-10},
        {"vranceanu.structural", "nabla*_{d/dy^j} delta_i = 0", TC::structural, 0.0},
        {"vranceanu.basic", "nabla*_X Y = pi_1 [X, Y~] for X vertical", TC::third_order, 1e-7},
        {"vranceanu.lift_independence", "basic residual does not depend on the lift Y~", TC::algebraic, 1e-10},
        {"vaisman.gamma_action", "nabla^v_Gamma dbar_i = -dbar_i for every i", TC::algebraic, 1e-10},
        {"vaisman.s_values", "s^j_i = -delta^j_i", TC::algebraic, 1e-10},
        {"vaisman.s_a", "s_a = 0", TC::algebraic, 1e-10},
        {"vaisman.s", "s = 1", TC::algebraic, 1e-10},
        {"vaisman.beta_i", "beta_i = 0", TC::algebraic, 1e-10},
        {"vaisman.cond_a", "nabla^v preserves L'_Gamma and L_Gamma", TC::first_order, 1e-9},
        {"vaisman.cond_b", "v(T(X, Y)) = 0 on L'_Gamma pairs, h(T) = 0 with Gamma", TC::third_order, 1e-7},
        {"vaisman.cond_c", "nabla^v G = 0 on L'_Gamma triples and on L_Gamma", TC::first_order, 1e-8},
        {"vaisman.cond_d", "the torsion conditions along horizontal directions", TC::third_order, 1e-7},
        {"vaisman.basic", "nabla^v_X Z = pi_0 [X, Z~] for X in L_Gamma", TC::third_order, 1e-7},
        {"vaisman.lift_independence", "basic residual does not depend on the lift Z~", TC::algebraic, 1e-10},
        {"composite.gamma_delta", "nabla-bar_Gamma delta_i = 0", TC::algebraic, 1e-10},
        {"composite.gamma_dbar", "nabla-bar_Gamma dbar_a = -dbar_a", TC::algebraic, 1e-10},
        {"composite.basic", "nabla-bar_X Y = pi_2 [X, Y~] for X in L_Gamma", TC::third_order, 1e-7},
        {"composite.lift_independence", "basic residual does not depend on the lift Y~", TC::algebraic, 1e-10},
        {"adapted_triple.inclusion", "i(nabla^v_X Y) = nabla-bar_X i(Y)", TC::first_order, 1e-9},
        {"adapted_triple.projection", "pi(nabla-bar_X Z) = nabla*_1X pi(Z)", TC::first_order, 1e-9},
        {"curvature.line", "K(a Gamma, b Gamma) Z = 0", TC::third_order, 1e-7},
        {"curvature.constant", "K(Gamma, Gamma) Z = 0", TC::structural, 0.0},

        {"numerics.fd_F2", "jet derivatives of F^2 agree with finite differences", TC::numerics, 1e-5},
        {"numerics.fd_spray", "jet derivatives of G^k_j agree with finite differences of G^k", TC::numerics, 1e-5},
    };
}

const std::unordered_map<std::string, int>& registry_index()
{
    static const std::unordered_map<std::string, int> idx = [] {
        std::unordered_map<std::string, int> m;
        const auto& reg = check_registry();
        for (int i = 0; i < static_cast<int>(reg.size()); ++i) m[reg[i].id] = i;
        return m;
    }();
    return idx;
}

std::string suite_of(const std::string& id) { return id.substr(0, id.find('.')); }

double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

class Recorder {
public:
    Recorder(const std::vector<bool>& enabled, std::vector<double>& out) : enabled_(enabled), out_(out) {}
    void operator()(const char* id, double value)
    {
        const int k = registry_index().at(id);
        if (enabled_[k]) out_[k] = value;
    }

private:
    const std::vector<bool>& enabled_;
    std::vector<double>& out_;
};

void evaluate_fd(const SweepContext& ctx, const PointGeometry& geo, SplitMix64& rng, Recorder& rec)
{
    const FinslerMetric& M = ctx.metric();
    const int n = geo.n();
    const TangentPoint& p = geo.point();
    if (ctx.any_enabled("numerics")) {
        const int order = 1 + static_cast<int>(rng.next() % 3);
        std::vector<int> vars;
        for (int k = 0; k < order; ++k) vars.push_back(static_cast<int>(rng.next() % (2 * n)));
        const double ad = geo.F2().derivative(vars);
        const double fd = fd_oracle(M.squared(), p, vars);
        rec("numerics.fd_F2", std::abs(ad - fd) / std::max(std::abs(ad), 1.0));

        const int k = static_cast<int>(rng.next() % n);
        const int j = static_cast<int>(rng.next() % n);
        const int v = static_cast<int>(rng.next() % (2 * n));
        auto G = [&](std::span<const double> z) {
            return spray_coefficients(M, z.subspan(0, n), z.subspan(n, n))[k];
        };
        std::vector<double> z(2 * n);
        for (int q = 0; q < 2 * n; ++q) z[q] = p.coordinate(q);
        const int mixed[2] = {n + j, v};
        const double fds = fd_partial(G, z, mixed);
        const double ads = geo.N(k, j).derivative({v});
        rec("numerics.fd_spray", std::abs(ads - fds) / std::max(std::abs(ads), 1.0));
    }
}

void evaluate_charts(const SweepContext& ctx, const PointGeometry& geo, const VaismanTable* va, Recorder& rec)
{
    const FinslerMetric& M = ctx.metric();
    const TangentPoint& p = geo.point();
    if (ctx.any_enabled("chart")) {
        const ChartPair cp = chart_pair(M, ctx.cubic_pushed(), ctx.cubic(), p);
        const ScalarTensorResiduals inv = check_invariance(cp);
        rec("chart.F_invariance", inv.F);
        rec("chart.g_rule", inv.g);
        rec("chart.delta_rule", inv.delta);
        rec("chart.t_covector", check_tk_rule(cp));
        const BarFrameRuleResiduals bf = check_barframe_rule(cp);
        rec("chart.dbar_rule", bf.rule);
        rec("chart.gamma_invariance", bf.gamma);
        rec("chart.dropped_relations", bf.mixed);
        rec("chart.determinant", frame_change_determinant(cp).relative_difference());
        const double here = va ? gamma_action_residual(geo, *va) : gamma_action_residual(geo, vaisman(geo));
        const double there = gamma_action_residual(cp.target, vaisman(cp.target));
        rec("chart.gamma_action_two_charts", std::abs(here - there));
    }
    if (ctx.any_enabled("chart_identity")) {
        const ChartPair cp = chart_pair(M, ctx.identity_pushed(), ctx.identity(), p);
        const ScalarTensorResiduals inv = check_invariance(cp);
        rec("chart_identity.invariance", std::max({inv.F, inv.g, inv.delta}));
        rec("chart_identity.t_covector", check_tk_rule(cp));
        const BarFrameRuleResiduals bf = check_barframe_rule(cp);
        rec("chart_identity.dbar_rule", std::max({bf.rule, bf.gamma, bf.mixed}));
        rec("chart_identity.determinant", frame_change_determinant(cp).relative_difference());
    }
}

} // namespace

std::string to_string(ToleranceClass c)
{
    switch (c) {
    case TC::structural: return "structural";
    case TC::algebraic: return "algebraic";
    case TC::first_order: return "first_order";
    case TC::third_order: return "third_order";
    case TC::numerics: return "numerics";
    }
    return "unknown";
}

ToleranceClass tolerance_class_from_string(const std::string& s)
{
    for (TC c : {TC::structural, TC::algebraic, TC::first_order, TC::third_order, TC::numerics})
        if (to_string(c) == s) return c;
    throw ConfigError("unknown tolerance class '" + s + "'");
}

const std::vector<CheckSpec>& check_registry()
{
    static const std::vector<CheckSpec> reg = build_registry();
    return reg;
}

double ToleranceProfile::resolve(const CheckSpec& spec) const
{
    if (global) return *global;
    if (auto it = checks.find(spec.id); it != checks.end()) return it->second;
    if (auto it = classes.find(spec.cls); it != classes.end()) return it->second;
    return spec.tolerance;
}

ToleranceProfile parse_tolerance_profile(const json& j)
{
    if (!j.is_object()) throw ConfigError("tolerance profile: expected a JSON object");
    ToleranceProfile prof;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() != "classes" && it.key() != "checks")
            throw ConfigError("tolerance profile: unknown field '" + it.key() + "'");
        if (!it.value().is_object()) throw ConfigError("tolerance profile: '" + it.key() + "' must be an object");
    }
    auto number = [](const json& v, const std::string& where) {
        if (!v.is_number() || v.get<double>() < 0.0)
            throw ConfigError("tolerance profile: " + where + " must be a non-negative number");
        return v.get<double>();
    };
    if (j.contains("classes"))
        for (auto it = j.at("classes").begin(); it != j.at("classes").end(); ++it)
            prof.classes[tolerance_class_from_string(it.key())] = number(it.value(), "classes." + it.key());
    if (j.contains("checks"))
        for (auto it = j.at("checks").begin(); it != j.at("checks").end(); ++it) {
            if (!registry_index().count(it.key()))
                throw ConfigError("tolerance profile: unknown check '" + it.key() + "'");
            prof.checks[it.key()] = number(it.value(), "checks." + it.key());
        }
    return prof;
}

ToleranceProfile load_tolerance_profile(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open tolerance profile '" + path + "'");
    try {
        return parse_tolerance_profile(json::parse(in));
    } catch (const json::parse_error& e) {
        throw ConfigError("parse error in '" + path + "': " + e.what());
    }
}

std::vector<int> select_checks(const std::vector<std::string>& selection)
{
    const auto& reg = check_registry();
    std::vector<int> out;
    if (selection.empty()) {
        for (int i = 0; i < static_cast<int>(reg.size()); ++i) out.push_back(i);
        return out;
    }
    std::vector<bool> picked(reg.size(), false);
    for (const auto& name : selection) {
        bool hit = false;
        for (std::size_t i = 0; i < reg.size(); ++i)
            if (reg[i].id == name || suite_of(reg[i].id) == name) {
                picked[i] = true;
                hit = true;
            }
        if (!hit) throw ConfigError("unknown check or suite '" + name + "'");
    }
    for (int i = 0; i < static_cast<int>(reg.size()); ++i)
        if (picked[i]) out.push_back(i);
    return out;
}

SweepContext::SweepContext(const FinslerMetric& M, const SweepOptions& opts)
    : metric_(M),
      opts_(opts),
      enabled_(check_registry().size(), false),
      cubic_(ChartMap::shear_cubic(M.dimension())),
      identity_(ChartMap::identity(M.dimension())),
      cubic_pushed_(pushforward(M, cubic_)),
      identity_pushed_(pushforward(M, identity_))
{
    for (int k : select_checks(opts.selection)) enabled_[k] = true;
}

bool SweepContext::any_enabled(const std::string& suite) const
{
    const auto& reg = check_registry();
    for (std::size_t i = 0; i < reg.size(); ++i)
        if (enabled_[i] && suite_of(reg[i].id) == suite) return true;
    return false;
}

PointOutcome evaluate_point(const SweepContext& ctx, long index)
{
    const FinslerMetric& M = ctx.metric();
    const SweepOptions& opts = ctx.options();
    const int n = M.dimension();
    PointOutcome out;
    out.residuals.assign(check_registry().size(), std::numeric_limits<double>::quiet_NaN());
    Recorder rec(ctx.enabled(), out.residuals);
    const TangentPoint p = sample_point(opts.seed, static_cast<std::uint64_t>(index), n, M.domain());
    SplitMix64 rng(stream_seed(opts.seed ^ kFieldStream, static_cast<std::uint64_t>(index)));
    auto on = [&](const char* suite) { return ctx.any_enabled(suite); };

    try {
        const PointGeometry geo(M, p);
        const double F = geo.F_value();

        if (on("euler")) {
            const EulerResiduals e = euler_identities(M, p);
            rec("euler.quadratic", e.quadratic);
            rec("euler.gradient", e.gradient);
            rec("euler.cartan", e.cartan);
            rec("euler.liouville_norm", e.liouville);
        }
        if (on("liouville")) rec("liouville.t_routes", liouville(geo).consistency);
        if (on("t_field")) {
            const TIdentityResiduals r = t_identities(geo);
            rec("t_field.y_dot_t", r.y_dot_t);
            rec("t_field.y_dot_dbar", r.y_dot_dbar);
            rec("t_field.dt_dy", r.dt_dy);
            rec("t_field.gamma_t", r.gamma_t);
            rec("t_field.contracted_dt", r.contracted_dt);
            rec("t_field.contracted_gamma_t", r.contracted_gamma_t);
        }
        if (on("bar_brackets")) {
            const BarBracketResiduals r = bar_brackets(geo);
            rec("bar_brackets.dbar_dbar", r.dbar_dbar);
            rec("bar_brackets.dbar_gamma", r.dbar_gamma);
        }
        if (on("frame")) {
            const BarFrameResiduals b = bar_frame_residuals(geo, bar_frame(geo));
            rec("frame.bar_orthogonality", b.orthogonality);
            rec("frame.dependence", b.dependence);
            const FramePack pack = frame_pack(geo);
            const FramePackResiduals r = frame_pack_residuals(geo, pack);
            rec("frame.gram_blocks", r.gram_off_block);
            rec("frame.j_images", r.j_images);
            rec("frame.norms", r.norms);
            rec("frame.perp_to_gamma", r.perp_to_gamma);
        }
        if (on("frobenius")) {
            for (const auto& e : frobenius_checks(geo).entries) {
                if (e.distribution == "V") rec("frobenius.vertical", e.leakage);
                else if (e.distribution == "L'_Gamma") rec("frobenius.indicatrix", e.leakage);
                else if (e.distribution == "L_Gamma^perp") rec("frobenius.perp", e.leakage);
                else if (e.distribution == "L_Gamma") rec("frobenius.vertical_line", e.leakage);
                else if (e.distribution == "L_xi") rec("frobenius.horizontal_line", e.leakage);
                else if (e.distribution == "L_Gamma+L_xi") rec("frobenius.liouville_plane", e.leakage);
            }
        }
        if (on("kahler") || on("sasaki")) {
            const CompatibilityReport c = compatibility_checks(geo, rng);
            rec("kahler.j_squared", c.j_squared);
            rec("kahler.j_compat", c.j_compat);
            rec("kahler.routes", c.kahler_routes);
            rec("kahler.antisymmetry", c.antisymmetry);
            rec("kahler.d_omega", c.d_omega);
            rec("kahler.volume", c.volume);
            rec("kahler.random_pairs", c.omega_random);
            rec("sasaki.roundtrip", c.roundtrip);
        }
        if (on("spray")) {
            const SprayData S = spray(geo);
            rec("spray.pairing",
                max_abs(horizontal_frame(S).pairing() - Eigen::MatrixXd::Identity(2 * n, 2 * n)));
            std::vector<double> ys = p.y();
            for (double& v : ys) v *= 2.5;
            const Eigen::VectorXd Gs = spray_coefficients(M, p.x(), ys);
            const double scale = std::max(S.G.cwiseAbs().maxCoeff(), F * F);
            rec("spray.homogeneity", (Gs - 6.25 * S.G).cwiseAbs().maxCoeff() / (6.25 * scale));
        }

        std::optional<VaismanTable> va;
        if (on("vranceanu") || on("vaisman") || on("composite") || on("adapted_triple") || on("curvature")) {
            const VranceanuTable vr = vranceanu(geo);
            va = vaisman(geo);
            if (on("vranceanu")) {
                const VranceanuChecks c = check_vranceanu_basic(geo, vr, rng, opts.samples);
                rec("vranceanu.C_symmetry", c.C_symmetry);
                rec("vranceanu.C_trace", c.C_trace);
                rec("vranceanu.F_symmetry", c.F_symmetry);
                rec("vranceanu.structural", c.structural);
                rec("vranceanu.basic", c.basic);
                rec("vranceanu.lift_independence", c.lift_independence);
            }
            if (on("vaisman")) {
                const VaismanChecks c = check_vaisman(geo, *va, rng, opts.samples);
                rec("vaisman.gamma_action", c.gamma_action);
                rec("vaisman.s_values", c.s_values);
                rec("vaisman.s_a", c.s_a);
                rec("vaisman.s", c.s_gamma);
                rec("vaisman.beta_i", c.beta_i);
                rec("vaisman.cond_a", c.cond_a);
                rec("vaisman.cond_b", c.cond_b);
                rec("vaisman.cond_c", c.cond_c);
                rec("vaisman.cond_d", c.cond_d);
                rec("vaisman.basic", c.basic);
                rec("vaisman.lift_independence", c.lift_independence);
            }
            if (on("composite") || on("adapted_triple")) {
                const CompositeChecks c = check_composite(geo, vr, *va, rng, opts.samples);
                rec("composite.gamma_delta", c.gamma_delta);
                rec("composite.gamma_dbar", c.gamma_dbar);
                rec("composite.basic", c.basic);
                rec("composite.lift_independence", c.lift_independence);
                rec("adapted_triple.inclusion", c.inclusion);
                rec("adapted_triple.projection", c.projection);
            }
            if (on("curvature")) {
                rec("curvature.line", curvature_on_line(geo, rng));
                rec("curvature.constant", curvature_on_line(geo, rng, true));
            }
        }
        evaluate_charts(ctx, geo, va ? &*va : nullptr, rec);
        if (index < opts.fd_spot_points) evaluate_fd(ctx, geo, rng, rec);
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

bool SweepResult::all_pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

SweepResult run_sweep(const FinslerMetric& M, const SweepOptions& opts)
{
    if (opts.points < 1) throw ConfigError("points must be at least 1");
    const auto t0 = std::chrono::steady_clock::now();
    const SweepContext ctx(M, opts);
    const long N = opts.points;
    std::vector<PointOutcome> outcomes(static_cast<std::size_t>(N));

    constexpr long kChunk = 16;
    const long chunks = (N + kChunk - 1) / kChunk;
    const int threads = std::max(1, std::min<int>(opts.threads, static_cast<int>(chunks)));
    auto work = [&](int w) {
        for (long c = w; c < chunks; c += threads)
            for (long i = c * kChunk; i < std::min(N, (c + 1) * kChunk); ++i) outcomes[i] = evaluate_point(ctx, i);
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }

    SweepResult res;
    res.metric = M.id();
    res.n = M.dimension();
    const auto& reg = check_registry();
    for (int k : select_checks(opts.selection)) {
        CheckResult c;
        c.spec = reg[k];
        c.tolerance = opts.tolerances.resolve(reg[k]);
        double sum = 0.0;
        bool nan_seen = false;
        for (long i = 0; i < N; ++i) {
            const PointOutcome& o = outcomes[i];
            const bool spot_only = suite_of(reg[k].id) == "numerics";
            const bool expected = !spot_only || i < opts.fd_spot_points;
            if (!o.error.empty()) {
                if (!expected) continue;
                ++c.errors;
                if (static_cast<int>(c.error_messages.size()) < kMaxErrorMessages)
                    c.error_messages.push_back("point " + std::to_string(i) + ": " + o.error);
                continue;
            }
            const double r = o.residuals[k];
            if (!expected) continue;
            ++c.evaluated;
            if (std::isnan(r)) {
                if (!nan_seen) c.worst.index = i;
                nan_seen = true;
                continue;
            }
            sum += r;
            if (!nan_seen && (c.worst.index < 0 || r > c.max_residual)) {
                c.max_residual = r;
                c.worst.index = i;
            }
        }
        if (nan_seen) c.max_residual = std::numeric_limits<double>::quiet_NaN();
        c.mean_residual = c.evaluated ? sum / c.evaluated : 0.0;
        if (c.worst.index >= 0) {
            const TangentPoint wp = sample_point(opts.seed, static_cast<std::uint64_t>(c.worst.index), res.n, M.domain());
            c.worst.x = wp.x();
            c.worst.y = wp.y();
        }
        c.pass = c.errors == 0 && c.evaluated > 0 && !nan_seen && c.max_residual <= c.tolerance;
        res.checks.push_back(std::move(c));
    }
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

json report_json(const SweepResult& r, const SweepOptions& opts)
{
    json checks = json::array();
    for (const CheckResult& c : r.checks) {
        json worst = nullptr;
        if (c.worst.index >= 0) worst = {{"index", c.worst.index}, {"x", c.worst.x}, {"y", c.worst.y}};
        auto num = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
        checks.push_back({
            {"id", c.spec.id},
            {"anchor", c.spec.anchor},
            {"metric", r.metric},
            {"class", to_string(c.spec.cls)},
            {"tolerance", c.tolerance},
            {"max_residual", num(c.max_residual)},
            {"mean_residual", num(c.mean_residual)},
            {"evaluated", c.evaluated},
            {"worst_point", worst},
            {"errors", c.errors},
            {"error_messages", c.error_messages},
            {"pass", c.pass},
        });
    }
    int passed = 0;
    for (const auto& c : r.checks) passed += c.pass ? 1 : 0;
    json meta = {
        {"tool", "flab"},
        {"version", FLAB_VERSION},
        {"metric", r.metric},
        {"n", r.n},
        {"seed", opts.seed},
        {"points", opts.points},
        {"samples_per_check", opts.samples},
        {"fd_spot_points", std::min(opts.points, opts.fd_spot_points)},
        {"threads", opts.threads},
        {"checks_run", r.checks.size()},
        {"checks_passed", passed},
        {"all_pass", r.all_pass()},
        {"wall_seconds", r.wall_seconds},
    };
    return json{{"meta", meta}, {"checks", checks}};
}

} // namespace flab

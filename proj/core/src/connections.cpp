#include "flab/connections.hpp"

#include <algorithm>
#include <cmath>

#include "flab/errors.hpp"
#include "flab/random_fields.hpp"

namespace flab {

namespace {

double along(const Jet& f, const Eigen::VectorXd& X)
{
    double acc = 0.0;
    for (int v = 0; v < X.size(); ++v)
        if (X[v] != 0.0) acc += X[v] * f.derivative({v});
    return acc;
}

/// Gamma coefficient and kept L'_Gamma coefficients of the vertical part of X.
struct VerticalSplit {
    double gamma = 0.0;
    Eigen::VectorXd kept;
};

VerticalSplit split_vertical(const PointGeometry& geo, const Eigen::VectorXd& X)
{
    const int n = geo.n();
    const Eigen::VectorXd v = geo.adapted_components(X).tail(n);
    VerticalSplit out;
    out.gamma = geo.t_value().dot(v);
    out.kept = geo.kept_coefficients(v - out.gamma * geo.y_value());
    return out;
}

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

std::vector<std::string> frame_labels(const PointGeometry& geo, bool horizontal, bool leaf)
{
    std::vector<std::string> s;
    if (horizontal)
        for (int i = 0; i < geo.n(); ++i) s.push_back("delta_" + std::to_string(i + 1));
    if (leaf)
        for (int a : geo.kept()) s.push_back("dbar_" + std::to_string(a + 1));
    return s;
}

std::vector<std::string> direction_labels(const PointGeometry& geo)
{
    auto d = frame_labels(geo, true, true);
    d.push_back("Gamma");
    return d;
}

Eigen::VectorXd field_value(const JetVector& X) { return values(X); }

} // namespace

VranceanuTable vranceanu(const PointGeometry& geo)
{
    const int n = geo.n();
    VranceanuTable T{Tensor3(n), Tensor3(n), Tensor3(n), geo.point()};
    const Eigen::MatrixXd& ginv = geo.g_inv_value();
    const Eigen::MatrixXd& N = geo.N_value();

    // dg[(i n + j) n + l] = d g_ij / dy^l, hg[...] = delta_l g_ij
    std::vector<double> dg(static_cast<std::size_t>(n) * n * n), hg(dg.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) {
                const Jet& gij = geo.g(i, j);
                double h = gij.derivative({l});
                for (int k = 0; k < n; ++k) h -= N(k, l) * gij.derivative({n + k});
                dg[(i * n + j) * n + l] = gij.derivative({n + l});
                hg[(i * n + j) * n + l] = h;
            }
    auto DG = [&](int i, int j, int l) { return dg[(i * n + j) * n + l]; };
    auto HG = [&](int i, int j, int l) { return hg[(i * n + j) * n + l]; };

    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double c = 0.0, f = 0.0;
                for (int l = 0; l < n; ++l) {
                    c += ginv(k, l) * DG(i, j, l);
                    f += ginv(k, l) * (HG(i, l, j) + HG(j, l, i) - HG(i, j, l));
                }
                T.C(k, i, j) = 0.5 * c;
                T.Fc(k, i, j) = 0.5 * f;
                T.Gc(k, i, j) = geo.N(k, j).derivative({n + i});
            }
    return T;
}

VaismanTable vaisman(const PointGeometry& geo)
{
    const int n = geo.n();
    const int r = n - 1;
    const auto& kept = geo.kept();
    VaismanTable T;
    T.rank = r;
    T.at = geo.point();
    T.s_gamma = Eigen::MatrixXd::Zero(r, r);
    T.s_a = Eigen::VectorXd::Zero(r);
    T.beta_i = Eigen::VectorXd::Zero(n);
    T.leafwise.assign(static_cast<std::size_t>(r) * r * r, 0.0);
    T.mixed.assign(static_cast<std::size_t>(n) * r * r, 0.0);

    const JetVector& Gamma = geo.Gamma();
    for (int a = 0; a < r; ++a) {
        const JetVector& da = geo.dbar(kept[a]);
        T.s_gamma.row(a) = split_vertical(geo, bracket_value(Gamma, da)).kept.transpose();
        T.s_a[a] = split_vertical(geo, bracket_value(da, Gamma)).gamma;
    }
    T.s = along(geo.F2(), field_value(Gamma)) / (2.0 * geo.F2().value());

    for (int i = 0; i < n; ++i) {
        const JetVector& di = geo.delta(i);
        for (int a = 0; a < r; ++a) {
            const Eigen::VectorXd c = split_vertical(geo, bracket_value(di, geo.dbar(kept[a]))).kept;
            for (int k = 0; k < r; ++k) T.mixed[(i * r + a) * r + k] = c[k];
        }
        T.beta_i[i] = split_vertical(geo, bracket_value(di, Gamma)).gamma;
    }

    if (r == 0) return T;

    // Koszul on the kept dbar frame.
    std::vector<Eigen::VectorXd> E(r);
    std::vector<Jet> gram_jet(static_cast<std::size_t>(r) * r);
    Eigen::MatrixXd gram(r, r);
    for (int a = 0; a < r; ++a) E[a] = field_value(geo.dbar(kept[a]));
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) {
            gram_jet[a * r + b] = geo.sasaki(geo.dbar(kept[a]), geo.dbar(kept[b]));
            gram(a, b) = gram_jet[a * r + b].value();
        }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
        throw DegenerateMetric("leafwise Gram matrix is not positive definite at " + geo.point().describe());

    std::vector<Eigen::VectorXd> br(static_cast<std::size_t>(r) * r);
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) br[a * r + b] = bracket_value(geo.dbar(kept[a]), geo.dbar(kept[b]));
    auto XG = [&](int x, int a, int b) { return along(gram_jet[a * r + b], E[x]); };
    auto GB = [&](int a, int b, int c) { return geo.sasaki_value(br[a * r + b], E[c]); };

    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) {
            Eigen::VectorXd rhs(r);
            for (int c = 0; c < r; ++c)
                rhs[c] = 0.5 * (XG(a, b, c) + XG(b, a, c) - XG(c, a, b) + GB(a, b, c) - GB(a, c, b) - GB(b, c, a));
            const Eigen::VectorXd coef = ldlt.solve(rhs);
            for (int c = 0; c < r; ++c) T.leafwise[(a * r + b) * r + c] = coef[c];
        }
    return T;
}

bool ConnectionTable::consistent(int n) const
{
    int expected = 0;
    if (bundle == "H") expected = n;
    else if (bundle == "L'_Gamma") expected = n - 1;
    else if (bundle == "L_Gamma^perp") expected = 2 * n - 1;
    else return false;
    return rank() == expected && coeff.size() == static_cast<std::size_t>(dirs()) * rank() * rank();
}

ConnectionTable vranceanu_horizontal(const PointGeometry& geo, const VranceanuTable& v)
{
    const int n = geo.n();
    ConnectionTable T;
    T.bundle = "H";
    T.sections = frame_labels(geo, true, false);
    T.directions = T.sections;
    for (int j = 0; j < n; ++j) T.directions.push_back("d/dy^" + std::to_string(j + 1));
    T.coeff.assign(static_cast<std::size_t>(2 * n) * n * n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) T(j, i, k) = v.Fc(k, i, j);
    return T;
}

ConnectionTable vaisman_leafwise(const PointGeometry& geo, const VaismanTable& v)
{
    const int n = geo.n();
    const int r = v.rank;
    ConnectionTable T;
    T.bundle = "L'_Gamma";
    T.sections = frame_labels(geo, false, true);
    T.directions = direction_labels(geo);
    T.coeff.assign(static_cast<std::size_t>(T.dirs()) * r * r, 0.0);
    for (int a = 0; a < r; ++a)
        for (int c = 0; c < r; ++c) {
            for (int i = 0; i < n; ++i) T(i, a, c) = v.beta(i, a, c);
            for (int b = 0; b < r; ++b) T(n + b, a, c) = v.leaf(b, a, c);
            T(2 * n - 1, a, c) = v.s_gamma(a, c);
        }
    return T;
}

ConnectionTable composite_connection(const PointGeometry& geo, const VranceanuTable& vr, const VaismanTable& va)
{
    const int n = geo.n();
    const int r = va.rank;
    ConnectionTable T;
    T.bundle = "L_Gamma^perp";
    T.sections = frame_labels(geo, true, true);
    T.directions = direction_labels(geo);
    T.coeff.assign(static_cast<std::size_t>(T.dirs()) * T.rank() * T.rank(), 0.0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) T(j, i, k) = vr.Fc(k, i, j);
    for (int a = 0; a < r; ++a)
        for (int c = 0; c < r; ++c) {
            for (int i = 0; i < n; ++i) T(i, n + a, n + c) = va.beta(i, a, c);
            for (int b = 0; b < r; ++b) T(n + b, n + a, n + c) = va.leaf(b, a, c);
            T(2 * n - 1, n + a, n + c) = va.s_gamma(a, c);
        }
    return T;
}

Eigen::VectorXd split_direction(const PointGeometry& geo, const Eigen::VectorXd& X)
{
    const int n = geo.n();
    const VerticalSplit vs = split_vertical(geo, X);
    Eigen::VectorXd out(2 * n);
    out.head(n) = X.head(n);
    out.segment(n, n - 1) = vs.kept;
    out[2 * n - 1] = vs.gamma;
    return out;
}

std::vector<Jet> perp_components(const PointGeometry& geo, const JetVector& Y)
{
    const int n = geo.n();
    std::vector<Jet> out(Y.begin(), Y.begin() + n);
    std::vector<Jet> v;
    for (int k = 0; k < n; ++k) {
        Jet vk = Y[n + k];
        for (int i = 0; i < n; ++i) vk += geo.N(k, i) * Y[i];
        v.push_back(std::move(vk));
    }
    Jet lambda = geo.t(0) * v[0];
    for (int k = 1; k < n; ++k) lambda += geo.t(k) * v[k];
    for (int k = 0; k < n; ++k) v[k] -= lambda * geo.y(k);
    for (auto& c : geo.kept_coefficients(v)) out.push_back(std::move(c));
    return out;
}

Eigen::VectorXd perp_vector(const PointGeometry& geo, const Eigen::VectorXd& c)
{
    const int n = geo.n();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(2 * n);
    for (int i = 0; i < n; ++i) out += c[i] * field_value(geo.delta(i));
    for (int a = 0; a < n - 1; ++a) out += c[n + a] * field_value(geo.dbar(geo.kept()[a]));
    return out;
}

Eigen::VectorXd apply(const ConnectionTable& T, const Eigen::VectorXd& X, const Eigen::VectorXd& Xdir,
                      const std::vector<Jet>& Z)
{
    const int r = T.rank();
    Eigen::VectorXd out(r);
    for (int o = 0; o < r; ++o) {
        double acc = along(Z[o], X);
        for (int d = 0; d < T.dirs(); ++d) {
            if (Xdir[d] == 0.0) continue;
            for (int e = 0; e < r; ++e) acc += Xdir[d] * Z[e].value() * T(d, e, o);
        }
        out[o] = acc;
    }
    return out;
}

VranceanuChecks check_vranceanu_basic(const PointGeometry& geo, const VranceanuTable& v, SplitMix64& rng,
                                      int samples)
{
    const int n = geo.n();
    const double F = geo.F_value();
    VranceanuChecks out;
    double fmax = 1.0;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) fmax = std::max(fmax, std::abs(v.Fc(k, i, j)));
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
            double trace = 0.0;
            for (int j = 0; j < n; ++j) {
                out.C_symmetry = std::max(out.C_symmetry, F * std::abs(v.C(k, i, j) - v.C(k, j, i)));
                out.F_symmetry = std::max(out.F_symmetry, std::abs(v.Fc(k, i, j) - v.Fc(k, j, i)) / fmax);
                trace += v.C(k, i, j) * geo.y_value()[j];
            }
            out.C_trace = std::max(out.C_trace, std::abs(trace));
        }

    const ConnectionTable H = vranceanu_horizontal(geo, v);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) out.structural = std::max(out.structural, std::abs(H(n + j, i, k)));

    auto residual = [&](const JetVector& X, const JetVector& Yt) {
        const Eigen::VectorXd Xv = values(X);
        const Eigen::VectorXd hv = geo.adapted_components(Xv);
        std::vector<Jet> Z(Yt.begin(), Yt.begin() + n);
        const Eigen::VectorXd lhs = apply(H, Xv, hv, Z);
        const Eigen::VectorXd rhs = bracket_value(X, Yt).head(n);
        return (lhs - rhs).cwiseAbs().maxCoeff() / std::max(1.0, max_abs(rhs));
    };
    for (int s = 0; s < samples; ++s) {
        const JetVector X = random_vertical_field(geo, rng, 1);
        const JetVector Y = random_field(geo, rng, 1);
        const JetVector Y2 = Y + random_vertical_field(geo, rng, 1);
        const double r1 = residual(X, Y);
        const double r2 = residual(X, Y2);
        out.basic = std::max({out.basic, r1, r2});
        out.lift_independence = std::max(out.lift_independence, std::abs(r1 - r2));
    }
    return out;
}

double gamma_action_residual(const PointGeometry& geo, const VaismanTable& v)
{
    const int n = geo.n();
    const int r = v.rank;
    const auto& kept = geo.kept();
    const int m = geo.dropped();
    const Eigen::VectorXd y = geo.y_value();
    double worst = 0.0;
    // Vector form of nabla_Gamma dbar_a for kept a.
    std::vector<Eigen::VectorXd> img(r);
    for (int a = 0; a < r; ++a) {
        img[a] = Eigen::VectorXd::Zero(2 * n);
        for (int c = 0; c < r; ++c) img[a] += v.s_gamma(a, c) * values(geo.dbar(kept[c]));
        worst = std::max(worst, max_abs(img[a] + values(geo.dbar(kept[a]))));
    }
    // dbar_m = -(y^a / y^m) dbar_a, so nabla_Gamma dbar_m = -Gamma(y^a/y^m) dbar_a - (y^a/y^m) nabla_Gamma dbar_a,
    // and Gamma(y^a / y^m) = 0 exactly for a degree-zero ratio; evaluate it from the jets anyway.
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * n);
    const Eigen::VectorXd G = values(geo.Gamma());
    for (int a = 0; a < r; ++a) {
        const Jet ratio = geo.y(kept[a]) / geo.y(m);
        rhs -= along(ratio, G) * values(geo.dbar(kept[a]));
        rhs -= (y[kept[a]] / y[m]) * img[a];
    }
    worst = std::max(worst, max_abs(rhs + values(geo.dbar(m))));
    return worst;
}

VaismanChecks check_vaisman(const PointGeometry& geo, const VaismanTable& v, SplitMix64& rng, int samples)
{
    const int n = geo.n();
    const int r = v.rank;
    const auto& kept = geo.kept();
    const double F = geo.F_value();
    const double F2 = F * F;
    const Eigen::VectorXd G = values(geo.Gamma());
    VaismanChecks out;
    out.gamma_action = gamma_action_residual(geo, v);
    out.s_values = r ? (v.s_gamma + Eigen::MatrixXd::Identity(r, r)).cwiseAbs().maxCoeff() : 0.0;
    out.s_a = F * max_abs(v.s_a);
    out.s_gamma = std::abs(v.s - 1.0);
    out.beta_i = F * max_abs(v.beta_i);

    std::vector<Eigen::VectorXd> E(r);
    for (int a = 0; a < r; ++a) E[a] = values(geo.dbar(kept[a]));
    auto leaf_vector = [&](const Eigen::VectorXd& c) {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(2 * n);
        for (int a = 0; a < r; ++a) w += c[a] * E[a];
        return w;
    };
    auto gamma_part = [&](const Eigen::VectorXd& w) { return geo.sasaki_value(w, G) / F2; };

    // a) images of L'_Gamma along every direction have no Gamma part; images of Gamma are multiples of Gamma.
    const ConnectionTable L = vaisman_leafwise(geo, v);
    for (int d = 0; d < L.dirs(); ++d)
        for (int a = 0; a < r; ++a) {
            Eigen::VectorXd c(r);
            for (int o = 0; o < r; ++o) c[o] = L(d, a, o);
            out.cond_a = std::max(out.cond_a, std::abs(gamma_part(leaf_vector(c))));
        }
    {
        std::vector<double> gamma_coeffs(v.s_a.data(), v.s_a.data() + r);
        gamma_coeffs.push_back(v.s);
        for (int i = 0; i < n; ++i) gamma_coeffs.push_back(v.beta_i[i]);
        for (double c : gamma_coeffs) {
            const Eigen::VectorXd w = c * G;
            const Eigen::VectorXd rest = w - gamma_part(w) * G;
            out.cond_a = std::max(out.cond_a, geo.sasaki_norm(rest) / F);
        }
    }

    // b) v(T(dbar_a, dbar_b)) = 0 and h(T(dbar_a, Gamma)) = 0, v(T(dbar_a, Gamma)) = 0.
    for (int a = 0; a < r; ++a) {
        for (int b = 0; b < r; ++b) {
            const Eigen::VectorXd br = split_vertical(geo, bracket_value(geo.dbar(kept[a]), geo.dbar(kept[b]))).kept;
            for (int c = 0; c < r; ++c)
                out.cond_b = std::max(out.cond_b, F * std::abs(v.leaf(a, b, c) - v.leaf(b, a, c) - br[c]));
        }
        const VerticalSplit bg = split_vertical(geo, bracket_value(geo.dbar(kept[a]), geo.Gamma()));
        out.cond_b = std::max(out.cond_b, F * std::abs(v.s_a[a] - bg.gamma));
        for (int c = 0; c < r; ++c)
            out.cond_b = std::max(out.cond_b, std::abs(-v.s_gamma(a, c) - bg.kept[c]));
    }

    // c) leafwise metric compatibility and Gamma(F^2) = 2 s F^2.
    {
        std::vector<Jet> gram(static_cast<std::size_t>(r) * r);
        Eigen::MatrixXd gv(r, r);
        for (int a = 0; a < r; ++a)
            for (int b = 0; b < r; ++b) {
                gram[a * r + b] = geo.sasaki(geo.dbar(kept[a]), geo.dbar(kept[b]));
                gv(a, b) = gram[a * r + b].value();
            }
        for (int x = 0; x < r; ++x)
            for (int a = 0; a < r; ++a)
                for (int b = 0; b < r; ++b) {
                    double rhs = 0.0;
                    for (int c = 0; c < r; ++c) rhs += v.leaf(x, a, c) * gv(c, b) + v.leaf(x, b, c) * gv(a, c);
                    const double lhs = along(gram[a * r + b], E[x]);
                    out.cond_c = std::max(out.cond_c, F * std::abs(lhs - rhs) / std::max(1.0, gv.cwiseAbs().maxCoeff()));
                }
        out.cond_c = std::max(out.cond_c, std::abs(along(geo.F2(), G) - 2.0 * v.s * F2) / F2);
    }

    // d) v(T(delta_i, dbar_a)) = 0 and h(T(delta_i, Gamma)) = 0.
    {
        double nscale = std::max(1.0, geo.N_value().cwiseAbs().maxCoeff());
        for (int i = 0; i < n; ++i) {
            for (int a = 0; a < r; ++a) {
                const Eigen::VectorXd br = split_vertical(geo, bracket_value(geo.delta(i), geo.dbar(kept[a]))).kept;
                for (int c = 0; c < r; ++c)
                    out.cond_d = std::max(out.cond_d, std::abs(v.beta(i, a, c) - br[c]) / nscale);
            }
            const double bg = split_vertical(geo, bracket_value(geo.delta(i), geo.Gamma())).gamma;
            out.cond_d = std::max(out.cond_d, F * std::abs(v.beta_i[i] - bg) / nscale);
        }
    }

    // Basicness along the line foliation: X = a Gamma, Z in L'_Gamma, lifts Z + b Gamma.
    const JetVector Gamma1 = truncated(geo.Gamma(), 1);
    std::vector<JetVector> D1(r);
    for (int a = 0; a < r; ++a) D1[a] = truncated(geo.dbar(kept[a]), 1);
    auto residual = [&](const Jet& a0, const std::vector<Jet>& c, const Jet& b) {
        const JetVector X = a0 * Gamma1;
        JetVector Zt = b * Gamma1;
        for (int k = 0; k < r; ++k) Zt = Zt + c[k] * D1[k];
        const Eigen::VectorXd Xv = values(X);
        const Eigen::VectorXd lhs = leaf_vector(apply(L, Xv, split_direction(geo, Xv), c));
        const Eigen::VectorXd br = bracket_value(X, Zt);
        const Eigen::VectorXd rhs = leaf_vector(split_vertical(geo, br).kept);
        return geo.sasaki_norm(lhs - rhs) / std::max(1.0, geo.sasaki_norm(rhs));
    };
    for (int s = 0; s < samples && r > 0; ++s) {
        const Jet a0 = random_function(geo, rng, 1);
        std::vector<Jet> c;
        for (int k = 0; k < r; ++k) c.push_back(random_function(geo, rng, 1));
        const double r0 = residual(a0, c, Jet::constant(geo.basis(), 0.0).truncated(1));
        const double r1 = residual(a0, c, random_function(geo, rng, 1));
        out.basic = std::max({out.basic, r0, r1});
        out.lift_independence = std::max(out.lift_independence, std::abs(r0 - r1));
    }
    return out;
}

CompositeChecks check_composite(const PointGeometry& geo, const VranceanuTable& vr, const VaismanTable& va,
                                SplitMix64& rng, int samples)
{
    const int n = geo.n();
    const int r = va.rank;
    const int R = 2 * n - 1;
    const double F2 = geo.F_value() * geo.F_value();
    const ConnectionTable T = composite_connection(geo, vr, va);
    const ConnectionTable L = vaisman_leafwise(geo, va);
    const ConnectionTable H = vranceanu_horizontal(geo, vr);
    const Eigen::VectorXd G = values(geo.Gamma());
    const Eigen::VectorXd Gdir = split_direction(geo, G);
    CompositeChecks out;

    auto constant_frame = [&](int e) {
        std::vector<Jet> Z;
        for (int k = 0; k < R; ++k) Z.push_back(Jet::constant(geo.basis(), k == e ? 1.0 : 0.0).truncated(1));
        return Z;
    };
    for (int e = 0; e < R; ++e) {
        Eigen::VectorXd img = apply(T, G, Gdir, constant_frame(e));
        if (e >= n) img[e] += 1.0;
        const double res = perp_vector(geo, img).cwiseAbs().maxCoeff();
        if (e < n) out.gamma_delta = std::max(out.gamma_delta, res);
        else out.gamma_dbar = std::max(out.gamma_dbar, res);
    }

    auto pi2 = [&](const Eigen::VectorXd& w) { return w - (geo.sasaki_value(w, G) / F2) * G; };
    const JetVector Gamma1 = truncated(geo.Gamma(), 1);
    auto residual = [&](const Jet& a0, const JetVector& Yt) {
        const JetVector X = a0 * Gamma1;
        const Eigen::VectorXd Xv = values(X);
        const Eigen::VectorXd lhs = perp_vector(geo, apply(T, Xv, split_direction(geo, Xv), perp_components(geo, Yt)));
        const Eigen::VectorXd rhs = pi2(bracket_value(X, Yt));
        return geo.sasaki_norm(lhs - rhs) / std::max(1.0, geo.sasaki_norm(rhs));
    };
    for (int s = 0; s < samples; ++s) {
        const Jet a0 = random_function(geo, rng, 1);
        const JetVector Y = random_field(geo, rng, 1);
        const JetVector Y2 = Y + random_function(geo, rng, 1) * Gamma1;
        const double r1 = residual(a0, Y);
        const double r2 = residual(a0, Y2);
        out.basic = std::max({out.basic, r1, r2});
        out.lift_independence = std::max(out.lift_independence, std::abs(r1 - r2));
    }

    // Compatibility with the inclusion of L'_Gamma and the projection onto H.
    for (int s = 0; s < samples; ++s) {
        const Eigen::VectorXd X = random_vector(2 * n, rng);
        const Eigen::VectorXd Xdir = split_direction(geo, X);
        std::vector<Jet> Zl, Zp;
        for (int i = 0; i < n; ++i) Zp.push_back(random_function(geo, rng, 1));
        for (int a = 0; a < r; ++a) {
            Zl.push_back(random_function(geo, rng, 1));
            Zp.push_back(Zl.back());
        }
        std::vector<Jet> Zi(Zl);
        for (int i = 0; i < n; ++i) Zi.insert(Zi.begin(), Jet::constant(geo.basis(), 0.0).truncated(1));
        const Eigen::VectorXd inc_lhs = apply(L, X, Xdir, Zl);
        const Eigen::VectorXd inc_rhs = apply(T, X, Xdir, Zi);
        double inc = inc_rhs.head(n).cwiseAbs().maxCoeff();
        inc = std::max(inc, (inc_rhs.tail(r) - inc_lhs).cwiseAbs().maxCoeff() / std::max(1.0, max_abs(inc_lhs)));
        out.inclusion = std::max(out.inclusion, inc);

        Eigen::VectorXd hdir(2 * n);
        hdir << geo.adapted_components(X);
        std::vector<Jet> Zh(Zp.begin(), Zp.begin() + n);
        const Eigen::VectorXd proj_lhs = apply(T, X, Xdir, Zp).head(n);
        const Eigen::VectorXd proj_rhs = apply(H, X, hdir, Zh);
        out.projection = std::max(out.projection, (proj_lhs - proj_rhs).cwiseAbs().maxCoeff() /
                                                      std::max(1.0, max_abs(proj_rhs)));
    }
    return out;
}

double curvature_on_line(const PointGeometry& geo, SplitMix64& rng, bool constant)
{
    const int n = geo.n();
    const int r = n - 1;
    const int R = 2 * n - 1;
    const auto& kept = geo.kept();
    const JetVector& Gamma = geo.Gamma();
    constexpr int order = 3;

    // omega(a, c): nabla_Gamma dbar_a = omega(a, c) dbar_c as jets, from the jet bracket [Gamma, dbar_a].
    std::vector<Jet> omega(static_cast<std::size_t>(r) * r);
    for (int a = 0; a < r; ++a) {
        const JetVector br = bracket(Gamma, geo.dbar(kept[a]));
        std::vector<Jet> v;
        for (int k = 0; k < n; ++k) {
            Jet vk = br[n + k];
            for (int i = 0; i < n; ++i) vk += geo.N(k, i) * br[i];
            v.push_back(std::move(vk));
        }
        Jet lambda = geo.t(0) * v[0];
        for (int k = 1; k < n; ++k) lambda += geo.t(k) * v[k];
        for (int k = 0; k < n; ++k) v[k] -= lambda * geo.y(k);
        auto c = geo.kept_coefficients(v);
        for (int k = 0; k < r; ++k) omega[a * r + k] = c[k];
    }

    auto nabla = [&](const std::vector<Jet>& Z) {
        std::vector<Jet> out;
        for (int o = 0; o < R; ++o) out.push_back(directional(Gamma, Z[o]));
        for (int o = 0; o < r; ++o)
            for (int e = 0; e < r; ++e) out[n + o] += Z[n + e] * omega[e * r + o];
        return out;
    };
    auto scale = [](const Jet& f, std::vector<Jet> Z) {
        for (auto& z : Z) z = f * z;
        return Z;
    };

    const Jet one = Jet::constant(geo.basis(), 1.0).truncated(order);
    const Jet a = constant ? one : random_function(geo, rng, order);
    const Jet b = constant ? one : random_function(geo, rng, order);
    std::vector<Jet> Z;
    for (int k = 0; k < R; ++k) Z.push_back(random_function(geo, rng, order));

    const Jet c = a * directional(Gamma, b) - b * directional(Gamma, a);
    const std::vector<Jet> nz = nabla(Z);
    const std::vector<Jet> t1 = scale(a, nabla(scale(b, nz)));
    const std::vector<Jet> t2 = scale(b, nabla(scale(a, nz)));
    Eigen::VectorXd K(R), Z0(R);
    for (int k = 0; k < R; ++k) {
        K[k] = t1[k].value() - t2[k].value() - c.value() * nz[k].value();
        Z0[k] = Z[k].value();
    }
    return geo.sasaki_norm(perp_vector(geo, K)) / std::max(1.0, geo.sasaki_norm(perp_vector(geo, Z0)));
}

nlohmann::json connection_dump(const PointGeometry& geo, const VranceanuTable& vr, const VaismanTable& va,
                               const ConnectionTable& composite)
{
    using nlohmann::json;
    const int n = geo.n();
    const int r = va.rank;
    auto tensor = [n](const Tensor3& T) {
        json out = json::array();
        for (int k = 0; k < n; ++k) {
            json mk = json::array();
            for (int i = 0; i < n; ++i) {
                json row = json::array();
                for (int j = 0; j < n; ++j) row.push_back(T(k, i, j));
                mk.push_back(row);
            }
            out.push_back(mk);
        }
        return out;
    };
    json kept = json::array();
    for (int a : geo.kept()) kept.push_back(a + 1);

    json leaf = json::array(), mixed = json::array(), s_gamma = json::array();
    for (int a = 0; a < r; ++a) {
        json la = json::array(), row = json::array();
        for (int b = 0; b < r; ++b) {
            json lb = json::array();
            for (int c = 0; c < r; ++c) lb.push_back(va.leaf(a, b, c));
            la.push_back(lb);
            row.push_back(va.s_gamma(a, b));
        }
        leaf.push_back(la);
        s_gamma.push_back(row);
    }
    for (int i = 0; i < n; ++i) {
        json mi = json::array();
        for (int a = 0; a < r; ++a) {
            json ma = json::array();
            for (int c = 0; c < r; ++c) ma.push_back(va.beta(i, a, c));
            mi.push_back(ma);
        }
        mixed.push_back(mi);
    }
    json comp = json::array();
    for (int d = 0; d < composite.dirs(); ++d) {
        json cd = json::array();
        for (int e = 0; e < composite.rank(); ++e) {
            json row = json::array();
            for (int o = 0; o < composite.rank(); ++o) row.push_back(composite(d, e, o));
            cd.push_back(row);
        }
        comp.push_back(cd);
    }
    const auto& p = geo.point();
    return json{
        {"metric", geo.metric().id()},
        {"point", {{"x", p.x()}, {"y", p.y()}}},
        {"dropped", geo.dropped() + 1},
        {"kept", kept},
        {"vranceanu", {{"C", tensor(vr.C)}, {"G", tensor(vr.Gc)}, {"F", tensor(vr.Fc)}}},
        {"vaisman",
         {{"s_gamma", s_gamma},
          {"s_a", std::vector<double>(va.s_a.data(), va.s_a.data() + r)},
          {"s", va.s},
          {"leafwise", leaf},
          {"beta", mixed},
          {"beta_i", std::vector<double>(va.beta_i.data(), va.beta_i.data() + n)}}},
        {"composite",
         {{"bundle", composite.bundle},
          {"sections", composite.sections},
          {"directions", composite.directions},
          {"coefficients", comp}}},
    };
}

} // namespace flab

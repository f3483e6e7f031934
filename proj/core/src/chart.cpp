#include "flab/chart.hpp"

#include <cmath>

#include "flab/sampling.hpp"

namespace flab {

namespace {

constexpr int kNewtonIterations = 60;
constexpr int kJetNewtonIterations = 3;  // exact through order 2^k - 1 >= PointGeometry::kOrder

} // namespace

ChartMap ChartMap::identity(int n)
{
    ChartMap c = linear(Eigen::MatrixXd::Identity(n, n), Eigen::VectorXd::Zero(n));
    c.name_ = "identity";
    return c;
}

ChartMap ChartMap::linear(Eigen::MatrixXd L, Eigen::VectorXd offset)
{
    if (L.rows() != L.cols() || L.rows() != offset.size()) throw ConfigError("ChartMap: dimension mismatch");
    ChartMap c;
    c.name_ = "linear";
    c.L_ = std::move(L);
    c.offset_ = std::move(offset);
    c.kappa_ = Eigen::VectorXd::Zero(c.offset_.size());
    c.domain_ = DomainBox::cube(static_cast<int>(c.offset_.size()), 2.0);
    return c;
}

ChartMap ChartMap::shear_cubic(int n, double shear, double cubic)
{
    Eigen::MatrixXd L = Eigen::MatrixXd::Identity(n, n);
    for (int i = 0; i + 1 < n; ++i) L(i, i + 1) = shear;
    Eigen::VectorXd offset(n);
    for (int i = 0; i < n; ++i) offset[i] = 0.1 * (i + 1);
    ChartMap c = linear(std::move(L), std::move(offset));
    c.name_ = "shear_cubic";
    c.kappa_ = Eigen::VectorXd::Constant(n, cubic);
    return c;
}

Eigen::MatrixXd ChartMap::jacobian_value(std::span<const double> x) const
{
    const int n = dimension();
    const std::vector<double> j = jacobian(x);
    Eigen::MatrixXd m(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m(r, c) = j[r * n + c];
    return m;
}

Tensor3 ChartMap::hessian_value(std::span<const double> x) const
{
    const int n = dimension();
    Tensor3 h(n);
    for (int i = 0; i < n; ++i) {
        const int s = (i + 1) % n;
        h(i, s, s) += 6.0 * kappa_[i] * x[s];
    }
    return h;
}

std::vector<double> ChartMap::inverse(std::span<const double> xt) const
{
    const int n = dimension();
    Eigen::VectorXd target = Eigen::Map<const Eigen::VectorXd>(xt.data(), n);
    Eigen::VectorXd x = L_.partialPivLu().solve(target - offset_);
    for (int it = 0; it < kNewtonIterations; ++it) {
        const std::vector<double> xs(x.data(), x.data() + n);
        const std::vector<double> fx = apply<double>(xs);
        Eigen::VectorXd r(n);
        for (int i = 0; i < n; ++i) r[i] = fx[i] - target[i];
        const Eigen::VectorXd step = jacobian_value(xs).partialPivLu().solve(r);
        x -= step;
        if (step.norm() <= 1e-15 * (1.0 + x.norm())) return {x.data(), x.data() + n};
    }
    throw ChartExit("ChartMap::inverse: Newton iteration did not converge for " + name_, -1);
}

std::vector<Jet> ChartMap::inverse(std::span<const Jet> xt, std::span<const double> guess) const
{
    const int n = dimension();
    std::vector<Jet> x;
    for (int i = 0; i < n; ++i) x.push_back(Jet::constant(xt[0].basis(), guess[i]));
    for (int it = 0; it < kJetNewtonIterations; ++it) {
        const std::vector<Jet> fx = apply<Jet>(x);
        std::vector<Jet> r;
        for (int i = 0; i < n; ++i) r.push_back(fx[i] - xt[i]);
        const std::vector<Jet> step = solve_dense(jacobian<Jet>(x), std::move(r), n);
        for (int i = 0; i < n; ++i) x[i] -= step[i];
    }
    return x;
}

double ChartMap::min_abs_det(int probes, std::uint64_t seed) const
{
    const int n = dimension();
    SplitMix64 rng(seed);
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < probes; ++k) {
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) x[i] = rng.uniform(domain_.lo[i], domain_.hi[i]);
        worst = std::min(worst, std::abs(jacobian_value(x).determinant()));
    }
    return worst;
}

FinslerMetric pushforward(const FinslerMetric& M, const ChartMap& C)
{
    if (M.dimension() != C.dimension()) throw ConfigError("pushforward: dimension mismatch");
    const int n = M.dimension();

    auto eval_double = [C, n](const ScalarField& f, std::span<const double> xt, std::span<const double> yt) {
        const std::vector<double> x = C.inverse(xt);
        std::vector<double> J = C.jacobian<double>(x);
        const std::vector<double> y = solve_dense(std::move(J), std::vector<double>(yt.begin(), yt.end()), n);
        return f(std::span<const double>(x), std::span<const double>(y));
    };
    auto eval_jet = [C, n](const ScalarField& f, std::span<const Jet> xt, std::span<const Jet> yt) {
        std::vector<double> xt0;
        for (const auto& v : xt) xt0.push_back(v.value());
        const std::vector<Jet> x = C.inverse(xt, C.inverse(xt0));
        const std::vector<Jet> y = solve_dense(C.jacobian<Jet>(x), std::vector<Jet>(yt.begin(), yt.end()), n);
        return f(std::span<const Jet>(x), std::span<const Jet>(y));
    };
    const ScalarField& F = M.fundamental_function();
    const ScalarField& F2 = M.squared();
    ScalarField Ft(
        n, [=](std::span<const double> x, std::span<const double> y) { return eval_double(F, x, y); },
        [=](std::span<const Jet> x, std::span<const Jet> y) { return eval_jet(F, x, y); });
    ScalarField F2t(
        n, [=](std::span<const double> x, std::span<const double> y) { return eval_double(F2, x, y); },
        [=](std::span<const Jet> x, std::span<const Jet> y) { return eval_jet(F2, x, y); });
    return FinslerMetric::custom(M.id() + "@" + C.name(), std::move(Ft), std::move(F2t));
}

InducedMap induced_tangent_map(const ChartMap& C, const TangentPoint& p)
{
    if (!C.domain().contains(p.x()))
        throw ChartExit("point " + p.describe() + " is outside the domain of chart map " + C.name(), -1);
    const int n = C.dimension();
    const Eigen::MatrixXd D = C.jacobian_value(p.x());
    const Tensor3 H = C.hessian_value(p.x());
    const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(p.y().data(), n);
    const Eigen::VectorXd yt = D * y;
    InducedMap out{TangentPoint(C.apply<double>(p.x()), std::vector<double>(yt.data(), yt.data() + n)),
                   Eigen::MatrixXd::Zero(2 * n, 2 * n)};
    out.jacobian.topLeftCorner(n, n) = D;
    out.jacobian.bottomRightCorner(n, n) = D;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double v = 0.0;
            for (int k = 0; k < n; ++k) v += H(i, j, k) * y[k];
            out.jacobian(n + i, j) = v;
        }
    return out;
}

ChartPair chart_pair(const FinslerMetric& M, const FinslerMetric& pushed, const ChartMap& C, const TangentPoint& p)
{
    const InducedMap im = induced_tangent_map(C, p);
    ChartPair cp{PointGeometry(M, p), PointGeometry(pushed, im.image), C.jacobian_value(p.x()), {}, im.jacobian, {}};
    cp.Dpsi = cp.Dphi.inverse();
    cp.lift_inv = cp.lift.inverse();
    return cp;
}

ScalarTensorResiduals check_invariance(const ChartPair& cp)
{
    const PointGeometry& s = cp.source;
    const PointGeometry& t = cp.target;
    const int n = s.n();
    ScalarTensorResiduals r;
    r.F = std::abs(t.F_value() - s.F_value()) / s.F_value();
    const Eigen::MatrixXd g_pushed = cp.Dpsi.transpose() * s.g_value() * cp.Dpsi;
    r.g = (t.g_value() - g_pushed).cwiseAbs().maxCoeff() / t.g_value().cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, s.N_value().cwiseAbs().maxCoeff());
    for (int i1 = 0; i1 < n; ++i1) {
        const Eigen::VectorXd pulled = cp.lift_inv * values(t.delta(i1));
        Eigen::VectorXd expected = Eigen::VectorXd::Zero(2 * n);
        for (int i = 0; i < n; ++i) expected += cp.Dpsi(i, i1) * values(s.delta(i));
        r.delta = std::max(r.delta, (pulled - expected).cwiseAbs().maxCoeff() / scale);
    }
    return r;
}

double check_tk_rule(const ChartPair& cp)
{
    const Eigen::VectorXd expected = cp.Dpsi.transpose() * cp.source.t_value();
    return cp.source.F_value() * (cp.target.t_value() - expected).cwiseAbs().maxCoeff();
}

BarFrameRuleResiduals check_barframe_rule(const ChartPair& cp)
{
    const PointGeometry& s = cp.source;
    const PointGeometry& t = cp.target;
    const int n = s.n();
    const Eigen::VectorXd& y = s.y_value();
    const Eigen::VectorXd& yt = t.y_value();
    const int m = s.dropped();
    const int k = t.dropped();
    std::vector<Eigen::VectorXd> dbar, dbar_t;
    for (int i = 0; i < n; ++i) {
        dbar.push_back(values(s.dbar(i)));
        dbar_t.push_back(values(t.dbar(i)));
    }

    BarFrameRuleResiduals r;
    for (int i1 = 0; i1 < n; ++i1) {
        Eigen::VectorXd expected = Eigen::VectorXd::Zero(2 * n);
        for (int kk = 0; kk < n; ++kk) expected += cp.Dpsi(kk, i1) * dbar[kk];
        r.rule = std::max(r.rule, (cp.lift_inv * dbar_t[i1] - expected).cwiseAbs().maxCoeff());
    }
    r.gamma = (cp.lift * values(s.Gamma()) - values(t.Gamma())).cwiseAbs().maxCoeff() / yt.norm();

    // coefficient of dbar_i (i != m) in dbar~_i1
    auto a = [&](int i, int i1) { return cp.Dpsi(i, i1) - (y[i] / y[m]) * cp.Dpsi(m, i1); };
    for (int i1 = 0; i1 < n; ++i1) {
        if (i1 == k) continue;
        Eigen::VectorXd expected = Eigen::VectorXd::Zero(2 * n);
        for (int i = 0; i < n; ++i)
            if (i != m) expected += a(i, i1) * dbar[i];
        r.mixed = std::max(r.mixed, (cp.lift_inv * dbar_t[i1] - expected).cwiseAbs().maxCoeff());
    }
    for (int j = 0; j < n; ++j) {
        if (j == m) continue;
        Eigen::VectorXd expected = Eigen::VectorXd::Zero(2 * n);
        for (int j1 = 0; j1 < n; ++j1)
            if (j1 != k) expected += (cp.Dphi(j1, j) - (yt[j1] / yt[k]) * cp.Dphi(k, j)) * dbar_t[j1];
        r.mixed = std::max(r.mixed, (cp.lift * dbar[j] - expected).cwiseAbs().maxCoeff());
    }
    for (int i = 0; i < n; ++i) {
        if (i == m) continue;
        double rhs = 0.0;
        for (int i1 = 0; i1 < n; ++i1)
            if (i1 != k) rhs -= (yt[i1] / yt[k]) * a(i, i1);
        r.mixed = std::max(r.mixed, std::abs(a(i, k) - rhs));
    }
    return r;
}

double DeterminantCheck::relative_difference() const
{
    return std::abs(numeric - closed_form) / std::max(std::abs(closed_form), std::numeric_limits<double>::min());
}

DeterminantCheck frame_change_determinant(const ChartPair& cp)
{
    const PointGeometry& s = cp.source;
    const PointGeometry& t = cp.target;
    const int n = s.n();
    const int m = s.dropped();
    const int k = t.dropped();
    // y-components (in the source chart) of both bases; the x-components vanish for vertical fields.
    Eigen::MatrixXd Bs(n, n), Bt(n, n);
    int col = 0;
    for (int a : s.kept()) Bs.col(col++) = values(s.dbar(a)).tail(n);
    Bs.col(col) = values(s.Gamma()).tail(n);
    col = 0;
    for (int a : t.kept()) Bt.col(col++) = (cp.lift_inv * values(t.dbar(a))).tail(n);
    Bt.col(col) = (cp.lift_inv * values(t.Gamma())).tail(n);

    DeterminantCheck d;
    d.numeric = Bs.partialPivLu().solve(Bt).determinant();
    const double sign = ((m + k) % 2 == 0) ? 1.0 : -1.0;
    d.closed_form = sign * (t.y_value()[k] / s.y_value()[m]) * cp.Dpsi.determinant();
    return d;
}

} // namespace flab

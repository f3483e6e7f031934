#include "flab/geometry.hpp"

#include <cmath>

namespace flab {

int dependent_index(std::span<const double> y)
{
    int m = 0;
    for (int k = 1; k < static_cast<int>(y.size()); ++k)
        if (std::abs(y[k]) > std::abs(y[m])) m = k;
    return m;
}

PointGeometry::PointGeometry(const FinslerMetric& metric, const TangentPoint& p)
    : metric_(metric), p_(p), n_(metric.dimension())
{
    if (p.dimension() != n_) throw std::invalid_argument("PointGeometry: point dimension mismatch");
    const int n = n_;
    basis_ = MonomialBasis::make(2 * n, kOrder);
    for (int k = 0; k < 2 * n; ++k) z_.push_back(Jet::variable(basis_, k, p.coordinate(k)));
    const std::span<const Jet> xs(z_.data(), n);
    const std::span<const Jet> ys(z_.data() + n, n);

    F_ = metric.fundamental_function()(xs, ys);
    if (!(F_.value() > 0.0)) throw DegenerateMetric("F is not positive at " + p.describe());
    F2_ = metric.squared()(xs, ys);

    g_.reserve(static_cast<std::size_t>(n) * n);
    std::vector<Jet> dF2y;
    for (int i = 0; i < n; ++i) dF2y.push_back(F2_.partial(n + i));
    gv_ = Eigen::MatrixXd(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            g_.push_back(0.5 * dF2y[i].partial(n + j));
            gv_(i, j) = g_.back().value();
        }
    condition_ = guard_metric(gv_, p);
    ginv_ = invert_dense(g_, n);
    ginvv_ = Eigen::MatrixXd(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) ginvv_(i, j) = ginv_[i * n + j].value();

    // G^i = 1/4 g^ik (d^2F^2/dy^k dx^h y^h - dF^2/dx^k)
    std::vector<Jet> rhs;
    for (int k = 0; k < n; ++k) {
        Jet acc = -F2_.partial(k);
        for (int h = 0; h < n; ++h) acc += dF2y[k].partial(h) * y(h);
        rhs.push_back(std::move(acc));
    }
    for (int i = 0; i < n; ++i) {
        Jet acc = ginv_[i * n] * rhs[0];
        for (int k = 1; k < n; ++k) acc += ginv_[i * n + k] * rhs[k];
        G_.push_back(0.25 * acc);
    }
    Nv_ = Eigen::MatrixXd(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            N_.push_back(G_[j].partial(n + i));
            Nv_(j, i) = N_.back().value();
        }

    const Jet inv_F = reciprocal(F_);
    const Jet inv_F2 = reciprocal(F2_);
    tv_ = Eigen::VectorXd(n);
    for (int k = 0; k < n; ++k) {
        t_.push_back(F_.partial(n + k) * inv_F);
        tv_[k] = t_.back().value();
        Jet acc = g_[k * n] * y(0);
        for (int i = 1; i < n; ++i) acc += g_[k * n + i] * y(i);
        t_metric_.push_back(acc * inv_F2);
    }

    yv_ = Eigen::Map<const Eigen::VectorXd>(p.y().data(), n);
    dropped_ = dependent_index(p.y());
    for (int k = 0; k < n; ++k)
        if (k != dropped_) kept_.push_back(k);

    // Frame fields.
    const Jet zero = Jet::constant(basis_, 0.0);
    Gamma_.assign(2 * n, zero);
    for (int i = 0; i < n; ++i) Gamma_[n + i] = y(i);

    for (int k = 0; k < n; ++k) {
        JetVector f = (-1.0) * (t_[k] * Gamma_);
        f[n + k] += 1.0;
        dbar_.push_back(std::move(f));
    }
    for (int i = 0; i < n; ++i) {
        JetVector f(2 * n, zero);
        f[i] += 1.0;
        for (int j = 0; j < n; ++j) f[n + j] = -N_[j * n + i];
        delta_.push_back(std::move(f));
    }
    xi_ = y(0) * delta_[0];
    for (int i = 1; i < n; ++i) xi_ = xi_ + y(i) * delta_[i];
    for (int k = 0; k < n; ++k) {
        // delta-bar_k = E_k^i delta_i with E_k^i the y-components of dbar_k.
        JetVector f = dbar_[k][n] * delta_[0];
        for (int i = 1; i < n; ++i) f = f + dbar_[k][n + i] * delta_[i];
        deltabar_.push_back(std::move(f));
    }

    // Coordinate-frame Sasaki metric: B^T diag(g, g) B with coframe rows (dx, dy + N dx).
    Eigen::MatrixXd B = Eigen::MatrixXd::Identity(2 * n, 2 * n);
    B.block(n, 0, n, n) = Nv_;
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    D.block(0, 0, n, n) = gv_;
    D.block(n, n, n, n) = gv_;
    Gc_ = B.transpose() * D * B;
}

Jet PointGeometry::sasaki(const JetVector& X, const JetVector& Y) const
{
    const int n = n_;
    std::vector<Jet> vx, vy;
    for (int j = 0; j < n; ++j) {
        Jet ax = X[n + j];
        Jet ay = Y[n + j];
        for (int i = 0; i < n; ++i) {
            if (!X[i].is_zero()) ax += N_[j * n + i] * X[i];
            if (!Y[i].is_zero()) ay += N_[j * n + i] * Y[i];
        }
        vx.push_back(std::move(ax));
        vy.push_back(std::move(ay));
    }
    Jet acc = zero();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Jet s = X[i] * Y[j] + vx[i] * vy[j];
            acc += g_[i * n + j] * s;
        }
    return acc;
}

Jet PointGeometry::kahler(const JetVector& X, const JetVector& Y) const
{
    const int n = n_;
    std::vector<Jet> vx, vy;
    for (int j = 0; j < n; ++j) {
        Jet ax = X[n + j];
        Jet ay = Y[n + j];
        for (int i = 0; i < n; ++i) {
            if (!X[i].is_zero()) ax += N_[j * n + i] * X[i];
            if (!Y[i].is_zero()) ay += N_[j * n + i] * Y[i];
        }
        vx.push_back(std::move(ax));
        vy.push_back(std::move(ay));
    }
    Jet acc = zero();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Jet s = vx[i] * Y[j] - vy[i] * X[j];
            acc += g_[i * n + j] * s;
        }
    return acc;
}

double PointGeometry::sasaki_norm(const Eigen::VectorXd& X) const
{
    return std::sqrt(std::max(0.0, sasaki_value(X, X)));
}

Eigen::VectorXd PointGeometry::adapted_components(const Eigen::VectorXd& X) const
{
    Eigen::VectorXd hv = X;
    hv.tail(n_) += Nv_ * X.head(n_);
    return hv;
}

Eigen::VectorXd PointGeometry::from_adapted(const Eigen::VectorXd& hv) const
{
    Eigen::VectorXd X = hv;
    X.tail(n_) -= Nv_ * hv.head(n_);
    return X;
}

Eigen::VectorXd PointGeometry::J(const Eigen::VectorXd& X) const
{
    const Eigen::VectorXd hv = adapted_components(X);
    Eigen::VectorXd out(2 * n_);
    out.head(n_) = hv.tail(n_);
    out.tail(n_) = -hv.head(n_);
    return from_adapted(out);
}

Eigen::VectorXd PointGeometry::kept_coefficients(const Eigen::VectorXd& w) const
{
    Eigen::VectorXd c(n_ - 1);
    const double ratio = w[dropped_] / yv_[dropped_];
    for (int a = 0; a < n_ - 1; ++a) c[a] = w[kept_[a]] - ratio * yv_[kept_[a]];
    return c;
}

std::vector<Jet> PointGeometry::kept_coefficients(const std::vector<Jet>& w) const
{
    std::vector<Jet> c;
    const Jet ratio = w[dropped_] / y(dropped_);
    for (int a : kept_) c.push_back(w[a] - ratio * y(a));
    return c;
}

} // namespace flab

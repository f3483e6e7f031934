#include "flab/spray.hpp"

#include <cmath>
#include <iomanip>
#include <map>

namespace flab {

SprayData spray(const PointGeometry& geo)
{
    const int n = geo.n();
    SprayData s;
    s.at = geo.point();
    s.G = Eigen::VectorXd(n);
    s.N = geo.N_value();
    s.dN = Tensor3(n);
    for (int j = 0; j < n; ++j) {
        s.G[j] = geo.spray(j).value();
        for (int i = 0; i < n; ++i) {
            const Jet& Nji = geo.N(j, i);
            for (int k = 0; k < n; ++k) s.dN(j, i, k) = Nji.derivative({n + k});
        }
    }
    return s;
}

SprayData spray(const FinslerMetric& M, const TangentPoint& p) { return spray(PointGeometry(M, p)); }

Eigen::VectorXd spray_coefficients(const FinslerMetric& M, std::span<const double> x, std::span<const double> y)
{
    const int n = M.dimension();
    thread_local std::map<int, BasisPtr> cache;
    BasisPtr& basis = cache[n];
    if (!basis) basis = MonomialBasis::make(2 * n, 2);

    std::vector<Jet> xs, ys;
    for (int i = 0; i < n; ++i) {
        xs.push_back(Jet::variable(basis, i, x[i]));
        ys.push_back(Jet::variable(basis, n + i, y[i]));
    }
    const Jet F2 = M.squared()(std::span<const Jet>(xs), std::span<const Jet>(ys));

    Eigen::MatrixXd g(n, n);
    Eigen::VectorXd rhs(n);
    for (int k = 0; k < n; ++k) {
        rhs[k] = -F2.derivative({k});
        for (int h = 0; h < n; ++h) rhs[k] += F2.derivative({n + k, h}) * y[h];
        for (int j = 0; j < n; ++j) g(k, j) = 0.5 * F2.derivative({n + k, n + j});
    }
    return 0.25 * g.ldlt().solve(rhs);
}

HorizontalFrame horizontal_frame(const SprayData& S)
{
    const int n = static_cast<int>(S.G.size());
    HorizontalFrame h;
    h.rows = Eigen::MatrixXd::Zero(n, 2 * n);
    h.rows.leftCols(n).setIdentity();
    h.rows.rightCols(n) = -S.N.transpose();
    h.frame = Eigen::MatrixXd::Identity(2 * n, 2 * n);
    h.frame.bottomLeftCorner(n, n) = -S.N;
    h.coframe = Eigen::MatrixXd::Identity(2 * n, 2 * n);
    h.coframe.bottomLeftCorner(n, n) = S.N;
    return h;
}

Tensor3 nonlinear_curvature(const PointGeometry& geo)
{
    const int n = geo.n();
    Tensor3 R(n);
    // delta_i G^k_j = dG^k_j/dx^i - G^l_i dG^k_j/dy^l
    auto delta = [&](int i, int k, int j) {
        const Jet& Nkj = geo.N(k, j);
        double v = Nkj.derivative({i});
        for (int l = 0; l < n; ++l) v -= geo.N_value()(l, i) * Nkj.derivative({n + l});
        return v;
    };
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double r = delta(i, k, j) - delta(j, k, i);
                R(k, i, j) = r;
                R(k, j, i) = -r;
            }
    return R;
}

GeodesicPath integrate_geodesic(const FinslerMetric& M, const TangentPoint& p0, int steps, double dt)
{
    if (!(dt > 0.0)) throw std::invalid_argument("integrate_geodesic: dt must be positive");
    if (steps < 0) throw std::invalid_argument("integrate_geodesic: steps must be non-negative");
    const int n = M.dimension();
    if (!M.domain().contains(p0.x())) throw ChartExit("initial point " + p0.describe() + " is outside the chart domain", -1);

    using Vec = Eigen::VectorXd;
    auto rhs = [&](const Vec& z) {
        Vec d(2 * n);
        d.head(n) = z.tail(n);
        const std::vector<double> x(z.data(), z.data() + n), y(z.data() + n, z.data() + 2 * n);
        d.tail(n) = -2.0 * spray_coefficients(M, x, y);
        return d;
    };

    GeodesicPath path;
    Vec z(2 * n);
    for (int i = 0; i < n; ++i) {
        z[i] = p0.x()[i];
        z[n + i] = p0.y()[i];
    }
    const double F0 = M.F(p0);
    path.t.push_back(0.0);
    path.points.push_back(p0);
    path.F.push_back(F0);
    for (int s = 1; s <= steps; ++s) {
        const Vec k1 = rhs(z);
        const Vec k2 = rhs(z + 0.5 * dt * k1);
        const Vec k3 = rhs(z + 0.5 * dt * k2);
        const Vec k4 = rhs(z + dt * k3);
        z += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        std::vector<double> x(z.data(), z.data() + n), y(z.data() + n, z.data() + 2 * n);
        if (!M.domain().contains(x))
            throw ChartExit("geodesic left the chart domain at step " + std::to_string(s), s - 1);
        TangentPoint p(std::move(x), std::move(y));
        const double F = M.F(p);
        path.drift = std::max(path.drift, std::abs(F - F0));
        path.t.push_back(s * dt);
        path.points.push_back(std::move(p));
        path.F.push_back(F);
    }
    return path;
}

void write_geodesic_csv(std::ostream& out, const GeodesicPath& path)
{
    if (path.points.empty()) return;
    const int n = path.points.front().dimension();
    out << "t";
    for (int i = 1; i <= n; ++i) out << ",x" << i;
    for (int i = 1; i <= n; ++i) out << ",y" << i;
    out << ",F\n";
    out << std::setprecision(17);
    for (std::size_t s = 0; s < path.points.size(); ++s) {
        out << path.t[s];
        for (double v : path.points[s].x()) out << ',' << v;
        for (double v : path.points[s].y()) out << ',' << v;
        out << ',' << path.F[s] << '\n';
    }
}

} // namespace flab

#include "flab/sasaki.hpp"

#include <cmath>


namespace flab {

namespace {

// Columns of the coordinate matrix of the adapted frame {delta_i, d/dy^i}, and its inverse (the coframe).
Eigen::MatrixXd adapted_frame(const PointGeometry& geo)
{
    const int n = geo.n();
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(2 * n, 2 * n);
    P.bottomLeftCorner(n, n) = -geo.N_value();
    return P;
}

Eigen::MatrixXd adapted_coframe(const PointGeometry& geo)
{
    const int n = geo.n();
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(2 * n, 2 * n);
    A.bottomLeftCorner(n, n) = geo.N_value();
    return A;
}

double derivative_value(const JetVector& X, const Jet& f)
{
    double acc = 0.0;
    for (std::size_t a = 0; a < X.size(); ++a) {
        const double xa = X[a].value();
        if (xa != 0.0) acc += xa * f.derivative({static_cast<int>(a)});
    }
    return acc;
}

} // namespace

SasakiMetric sasaki(const PointGeometry& geo)
{
    const int n = geo.n();
    SasakiMetric s;
    s.at = geo.point();
    s.adapted = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    s.adapted.topLeftCorner(n, n) = geo.g_value();
    s.adapted.bottomRightCorner(n, n) = geo.g_value();
    s.coordinate = geo.sasaki_coordinate();
    return s;
}

AlmostComplexJ almost_complex(const PointGeometry& geo)
{
    const int n = geo.n();
    AlmostComplexJ j;
    j.adapted = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    j.adapted.topRightCorner(n, n).setIdentity();
    j.adapted.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
    j.coordinate = adapted_frame(geo) * j.adapted * adapted_coframe(geo);
    return j;
}

KahlerForm kahler_form(const PointGeometry& geo)
{
    const int n = geo.n();
    const SasakiMetric G = sasaki(geo);
    const AlmostComplexJ J = almost_complex(geo);
    KahlerForm k;
    k.from_metric = J.adapted.transpose() * G.adapted;

    // e_p has adapted components (h, v) = unit vector p; Omega(X, Y) = g_ij (v_X^i h_Y^j - v_Y^i h_X^j).
    k.from_wedge = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    const Eigen::MatrixXd& g = geo.g_value();
    for (int p = 0; p < 2 * n; ++p)
        for (int q = 0; q < 2 * n; ++q) {
            double v = 0.0;
            if (p >= n && q < n) v += g(p - n, q);
            if (q >= n && p < n) v -= g(q - n, p);
            k.from_wedge(p, q) = v;
        }
    const Eigen::MatrixXd A = adapted_coframe(geo);
    k.coordinate = A.transpose() * k.from_metric * A;
    return k;
}

double d_omega(const PointGeometry& geo, const std::vector<JetVector>& frame)
{
    const int d = static_cast<int>(frame.size());
    const Eigen::MatrixXd omega = kahler_form(geo).coordinate;
    std::vector<Jet> pair(static_cast<std::size_t>(d) * d);
    for (int p = 0; p < d; ++p)
        for (int q = p + 1; q < d; ++q) pair[p * d + q] = geo.kahler(frame[p], frame[q]);
    std::vector<Eigen::VectorXd> br(static_cast<std::size_t>(d) * d);
    for (int p = 0; p < d; ++p)
        for (int q = p + 1; q < d; ++q) br[p * d + q] = bracket_value(frame[p], frame[q]);
    std::vector<Eigen::VectorXd> vals;
    for (const auto& f : frame) vals.push_back(values(f));

    auto Om = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return a.dot(omega * b); };
    double worst = 0.0;
    for (int a = 0; a < d; ++a)
        for (int b = a + 1; b < d; ++b)
            for (int c = b + 1; c < d; ++c) {
                const double r = derivative_value(frame[a], pair[b * d + c]) -
                                 derivative_value(frame[b], pair[a * d + c]) +
                                 derivative_value(frame[c], pair[a * d + b]) - Om(br[a * d + b], vals[c]) +
                                 Om(br[a * d + c], vals[b]) - Om(br[b * d + c], vals[a]);
                worst = std::max(worst, std::abs(r));
            }
    return worst / (geo.F_value() * geo.F_value());
}

CompatibilityReport compatibility_checks(const PointGeometry& geo, SplitMix64& rng, int random_pairs)
{
    const int n = geo.n();
    const double F2 = geo.F_value() * geo.F_value();
    CompatibilityReport r;
    const AlmostComplexJ J = almost_complex(geo);
    const Eigen::MatrixXd J2 = J.adapted * J.adapted;
    r.j_squared = (J2 + Eigen::MatrixXd::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff();

    std::vector<JetVector> frame;
    for (int a : geo.kept()) frame.push_back(geo.deltabar(a));
    frame.push_back(geo.xi());
    for (int a : geo.kept()) frame.push_back(geo.dbar(a));
    frame.push_back(geo.Gamma());
    std::vector<Eigen::VectorXd> vals;
    for (const auto& f : frame) vals.push_back(values(f));
    for (const auto& X : vals)
        for (const auto& Y : vals) {
            const double lhs = geo.sasaki_value(geo.J(X), geo.J(Y));
            r.j_compat = std::max(r.j_compat, std::abs(lhs - geo.sasaki_value(X, Y)) / F2);
        }

    const KahlerForm k = kahler_form(geo);
    r.kahler_routes = (k.from_metric - k.from_wedge).cwiseAbs().maxCoeff() / geo.g_value().cwiseAbs().maxCoeff();
    r.antisymmetry = (k.from_metric + k.from_metric.transpose()).cwiseAbs().maxCoeff();

    r.d_omega = d_omega(geo, frame);

    const double detG = geo.sasaki_coordinate().determinant();
    r.volume = std::abs(std::abs(k.coordinate.determinant()) - detG) / detG;

    for (int s = 0; s < random_pairs; ++s) {
        Eigen::VectorXd X(2 * n), Y(2 * n);
        for (int i = 0; i < 2 * n; ++i) X[i] = rng.uniform(-1.0, 1.0);
        for (int i = 0; i < 2 * n; ++i) Y[i] = rng.uniform(-1.0, 1.0);
        // local expression g_ij (dy^i + N^i_k dx^k)(X) dx^j(Y) - (X <-> Y)
        const Eigen::VectorXd vX = X.tail(n) + geo.N_value() * X.head(n);
        const Eigen::VectorXd vY = Y.tail(n) + geo.N_value() * Y.head(n);
        const double wedge = vX.dot(geo.g_value() * Y.head(n)) - vY.dot(geo.g_value() * X.head(n));
        const double metric = geo.sasaki_value(geo.J(X), Y);
        const double scale = geo.sasaki_norm(X) * geo.sasaki_norm(Y);
        r.omega_random = std::max(r.omega_random, std::abs(wedge - metric) / scale);
    }

    const Eigen::MatrixXd P = adapted_frame(geo);
    const Eigen::MatrixXd back = P.transpose() * geo.sasaki_coordinate() * P;
    r.roundtrip = (back - sasaki(geo).adapted).cwiseAbs().maxCoeff() / geo.g_value().cwiseAbs().maxCoeff();
    return r;
}

} // namespace flab

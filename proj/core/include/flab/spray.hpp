#pragma once

#include <ostream>
#include <vector>

#include <Eigen/Dense>

#include "flab/geometry.hpp"

namespace flab {

struct SprayData {
    Eigen::VectorXd G;  ///< spray coefficients G^i
    Eigen::MatrixXd N;  ///< N(j, i) = G^j_i = dG^j/dy^i
    Tensor3 dN;         ///< dN(j, i, k) = dG^j_i/dy^k
    TangentPoint at;
};

SprayData spray(const PointGeometry& geo);
SprayData spray(const FinslerMetric& M, const TangentPoint& p);

/// G^i only, from an order-2 expansion of F^2. Cheaper than a full PointGeometry.
Eigen::VectorXd spray_coefficients(const FinslerMetric& M, std::span<const double> x, std::span<const double> y);

/// delta/delta x^i as rows of coordinate components, with the dual coframe (dx^i, dy^i + G^i_j dx^j).
struct HorizontalFrame {
    Eigen::MatrixXd rows;     ///< n x 2n
    Eigen::MatrixXd frame;    ///< 2n x 2n, columns delta/delta x^1..n, d/dy^1..n
    Eigen::MatrixXd coframe;  ///< 2n x 2n, rows dx^1..n, delta y^1..n
    /// coframe * frame; the identity up to roundoff.
    Eigen::MatrixXd pairing() const { return coframe * frame; }
};

HorizontalFrame horizontal_frame(const SprayData& S);

/// R(k, i, j) = delta_i G^k_j - delta_j G^k_i, antisymmetric in (i, j) by construction.
Tensor3 nonlinear_curvature(const PointGeometry& geo);

struct GeodesicPath {
    std::vector<double> t;
    std::vector<TangentPoint> points;
    std::vector<double> F;
    double drift = 0.0;  ///< max_t |F(t) - F(0)|
};

/// Fixed-step RK4 for x' = y, y' = -2 G(x, y). Throws ChartExit once x leaves the metric's domain.
GeodesicPath integrate_geodesic(const FinslerMetric& M, const TangentPoint& p0, int steps, double dt);

/// CSV with header t,x1..xn,y1..yn,F.
void write_geodesic_csv(std::ostream& out, const GeodesicPath& path);

} // namespace flab

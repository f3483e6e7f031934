#pragma once

#include <vector>

#include <Eigen/Dense>

#include "flab/metric.hpp"
#include "flab/vector_field.hpp"

namespace flab {

/// All jet-valued geometric data of a Finsler metric about one point of TM0.
///
/// F and F^2 are expanded to order 4 in the 2n chart variables. Every other
/// quantity is derived from them by jet arithmetic, so each carries exactly the
/// order it can support:
///
///   g_ij, g^ij, G^i  order 2      G^j_i (N)    order 1
///   t_k              order 3      frame fields order of their coefficients
///
/// which is enough for one derivative of every frame-field coefficient (Lie
/// brackets) and two derivatives of the Liouville data.
class PointGeometry {
public:
    static constexpr int kOrder = 4;

    PointGeometry(const FinslerMetric& metric, const TangentPoint& p);

    int n() const { return n_; }
    int dim() const { return 2 * n_; }
    const TangentPoint& point() const { return p_; }
    const FinslerMetric& metric() const { return metric_; }
    const BasisPtr& basis() const { return basis_; }

    Jet zero() const { return Jet::constant(basis_, 0.0); }
    /// Variable jet of chart coordinate z_k.
    const Jet& coordinate(int k) const { return z_[k]; }
    const Jet& x(int i) const { return z_[i]; }
    const Jet& y(int i) const { return z_[n_ + i]; }

    const Jet& F() const { return F_; }
    const Jet& F2() const { return F2_; }
    const Jet& g(int i, int j) const { return g_[i * n_ + j]; }
    const Jet& g_inv(int i, int j) const { return ginv_[i * n_ + j]; }
    /// Spray coefficient G^i.
    const Jet& spray(int i) const { return G_[i]; }
    /// Nonlinear connection G^j_i = dG^j/dy^i.
    const Jet& N(int j, int i) const { return N_[j * n_ + i]; }
    /// t_k = (1/F) dF/dy^k.
    const Jet& t(int k) const { return t_[k]; }
    /// t_k = y^i g_ki / F^2.
    const Jet& t_metric(int k) const { return t_metric_[k]; }

    /// Index of the dependent vertical field, argmax_k |y^k|.
    int dropped() const { return dropped_; }
    /// The n - 1 indices other than dropped(), increasing.
    const std::vector<int>& kept() const { return kept_; }

    double F_value() const { return F_.value(); }
    const Eigen::MatrixXd& g_value() const { return gv_; }
    const Eigen::MatrixXd& g_inv_value() const { return ginvv_; }
    /// N(j, i) = G^j_i at the point.
    const Eigen::MatrixXd& N_value() const { return Nv_; }
    const Eigen::VectorXd& t_value() const { return tv_; }
    const Eigen::VectorXd& y_value() const { return yv_; }
    double metric_condition() const { return condition_; }

    // Frame fields in coordinate components.
    const JetVector& Gamma() const { return Gamma_; }
    const JetVector& xi() const { return xi_; }
    const JetVector& dbar(int k) const { return dbar_[k]; }
    const JetVector& delta(int i) const { return delta_[i]; }
    const JetVector& deltabar(int k) const { return deltabar_[k]; }
    JetVector dy(int i) const { return coordinate_field(basis_, dim(), n_ + i); }
    JetVector dx(int i) const { return coordinate_field(basis_, dim(), i); }

    /// Sasaki metric G(X, Y) as a jet.
    Jet sasaki(const JetVector& X, const JetVector& Y) const;
    /// Almost Kaehler form Omega(X, Y) = g_ij (dy^i + N^i_k dx^k)(X) dx^j(Y) - (X <-> Y), as a jet.
    Jet kahler(const JetVector& X, const JetVector& Y) const;

    /// Sasaki metric in the coordinate frame at the point (2n x 2n).
    const Eigen::MatrixXd& sasaki_coordinate() const { return Gc_; }
    double sasaki_value(const Eigen::VectorXd& X, const Eigen::VectorXd& Y) const { return X.dot(Gc_ * Y); }
    double sasaki_norm(const Eigen::VectorXd& X) const;

    /// Almost complex structure in coordinate components: J(delta_i) = -d/dy^i, J(d/dy^i) = delta_i.
    Eigen::VectorXd J(const Eigen::VectorXd& X) const;
    /// Horizontal and vertical adapted components (dx^i(X), delta y^i(X)).
    Eigen::VectorXd adapted_components(const Eigen::VectorXd& X) const;
    /// Coordinate components of h^i delta_i + v^i d/dy^i for adapted components (h, v).
    Eigen::VectorXd from_adapted(const Eigen::VectorXd& hv) const;

    /// Coefficients c^a (a in kept()) of a vertical vector w in L'_Gamma on the frame dbar_a; w given by its
    /// y-components. Uses dbar_m = -(1/y^m) y^a dbar_a.
    Eigen::VectorXd kept_coefficients(const Eigen::VectorXd& w) const;
    std::vector<Jet> kept_coefficients(const std::vector<Jet>& w) const;

private:
    FinslerMetric metric_;
    TangentPoint p_;
    int n_;
    BasisPtr basis_;
    std::vector<Jet> z_;
    Jet F_, F2_;
    std::vector<Jet> g_, ginv_, G_, N_, t_, t_metric_;
    int dropped_ = 0;
    std::vector<int> kept_;
    Eigen::MatrixXd gv_, ginvv_, Nv_, Gc_;
    Eigen::VectorXd tv_, yv_;
    double condition_ = 1.0;
    JetVector Gamma_, xi_;
    std::vector<JetVector> dbar_, delta_, deltabar_;
};

/// Index argmax_k |y^k| (first one on ties).
int dependent_index(std::span<const double> y);

} // namespace flab

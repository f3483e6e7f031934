#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "flab/geometry.hpp"

namespace flab {

/// Polynomial chart change x~ = phi(x) with phi^i(x) = L_ij x^j + c_i + kappa_i (x^{s(i)})^3, s(i) = i + 1 mod n.
class ChartMap {
public:
    static ChartMap identity(int n);
    static ChartMap linear(Eigen::MatrixXd L, Eigen::VectorXd offset);
    /// Unit upper shear plus a cyclic cubic perturbation.
    static ChartMap shear_cubic(int n, double shear = 0.3, double cubic = 0.05);

    const std::string& name() const { return name_; }
    int dimension() const { return static_cast<int>(offset_.size()); }
    const DomainBox& domain() const { return domain_; }
    void set_domain(DomainBox box) { domain_ = std::move(box); }

    template <class T>
    std::vector<T> apply(std::span<const T> x) const
    {
        const int n = dimension();
        std::vector<T> out;
        for (int i = 0; i < n; ++i) {
            T acc = constant_like(x[0], offset_[i]);
            for (int j = 0; j < n; ++j)
                if (L_(i, j) != 0.0) acc = acc + L_(i, j) * x[j];
            if (kappa_[i] != 0.0) {
                const T& s = x[(i + 1) % n];
                acc = acc + kappa_[i] * (s * s * s);
            }
            out.push_back(std::move(acc));
        }
        return out;
    }

    /// Row-major Jacobian, entry (i, j) = d phi^i / dx^j.
    template <class T>
    std::vector<T> jacobian(std::span<const T> x) const
    {
        const int n = dimension();
        std::vector<T> out;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                T e = constant_like(x[0], L_(i, j));
                if (kappa_[i] != 0.0 && j == (i + 1) % n) e = e + (3.0 * kappa_[i]) * (x[j] * x[j]);
                out.push_back(std::move(e));
            }
        return out;
    }

    Eigen::MatrixXd jacobian_value(std::span<const double> x) const;
    /// H(i, j, k) = d^2 phi^i / dx^j dx^k.
    Tensor3 hessian_value(std::span<const double> x) const;

    /// phi^{-1}(x~) by Newton iteration; throws ChartExit when it does not converge.
    std::vector<double> inverse(std::span<const double> xt) const;
    /// Jet of phi^{-1} about x~, given as jets; `guess` is phi^{-1} at the expansion point.
    std::vector<Jet> inverse(std::span<const Jet> xt, std::span<const double> guess) const;

    /// min |det D phi| over `probes` seeded points of the domain.
    double min_abs_det(int probes = 64, std::uint64_t seed = 0xc4a27) const;

private:
    std::string name_;
    Eigen::MatrixXd L_;
    Eigen::VectorXd offset_;
    Eigen::VectorXd kappa_;
    DomainBox domain_;
};

/// The metric expressed in the target chart: F~(x~, y~) = F(phi^{-1}(x~), D phi^{-1} y~).
FinslerMetric pushforward(const FinslerMetric& M, const ChartMap& C);

/// (x~, y~) = (phi(x), D phi(x) y) and the Jacobian [[D phi, 0], [D^2 phi . y, D phi]] of the lift.
struct InducedMap {
    TangentPoint image;
    Eigen::MatrixXd jacobian;
};

InducedMap induced_tangent_map(const ChartMap& C, const TangentPoint& p);

/// Source and target chart geometry at one point and its image.
struct ChartPair {
    PointGeometry source;
    PointGeometry target;
    Eigen::MatrixXd Dphi;     ///< d x~^i / d x^j
    Eigen::MatrixXd Dpsi;     ///< d x^i / d x~^j
    Eigen::MatrixXd lift;     ///< Jacobian of the induced map on TM0
    Eigen::MatrixXd lift_inv;
};

ChartPair chart_pair(const FinslerMetric& M, const FinslerMetric& pushed, const ChartMap& C, const TangentPoint& p);

struct ScalarTensorResiduals {
    double F = 0.0;      ///< |F~ - F| / F
    double g = 0.0;      ///< max |g~ - Dpsi^T g Dpsi| / max |g~|
    double delta = 0.0;  ///< lift^{-1} delta~_i1 against (dx^i/dx~^i1) delta_i
};

ScalarTensorResiduals check_invariance(const ChartPair& cp);

/// F max |t~_k1 - (dx^k/dx~^k1) t_k|.
double check_tk_rule(const ChartPair& cp);

struct BarFrameRuleResiduals {
    double rule = 0.0;   ///< dbar~_i1 = (dx^k/dx~^i1) dbar_k
    double gamma = 0.0;  ///< Gamma pushes to Gamma~
    double mixed = 0.0;  ///< the two dropped-index relations and the coefficient identity they imply
};

BarFrameRuleResiduals check_barframe_rule(const ChartPair& cp);

struct DeterminantCheck {
    double numeric = 0.0;
    double closed_form = 0.0;
    double relative_difference() const;
};

/// det of the change of basis {dbar (drop m), Gamma} -> {dbar~ (drop k), Gamma} and the closed form
/// (-1)^(m+k) (y~^k / y^m) det(dx/dx~) with m, k the dropped indices.
DeterminantCheck frame_change_determinant(const ChartPair& cp);

} // namespace flab

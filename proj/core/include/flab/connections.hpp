#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

#include "flab/geometry.hpp"
#include "flab/sampling.hpp"

namespace flab {

/// Coefficients of the Vranceanu connection in the adapted frame, all indexed (k, i, j):
///   nabla_{d/dy^j} d/dy^i = C^k_ij d/dy^k     C^k_ij = 1/2 g^kl dg_ij/dy^l
///   nabla_{delta_j} d/dy^i = G^k_ij d/dy^k    G^k_ij = dG^k_j/dy^i
///   nabla_{delta_j} delta_i = F^k_ij delta_k  F^k_ij = 1/2 g^kl (delta_j g_il + delta_i g_jl - delta_l g_ij)
///   nabla_{d/dy^j} delta_i = 0
struct VranceanuTable {
    Tensor3 C;
    Tensor3 Gc;
    Tensor3 Fc;
    TangentPoint at;
};

VranceanuTable vranceanu(const PointGeometry& geo);

/// Vaisman connection on V(TM0) in the frame {dbar_a (a kept), Gamma}. Index a, b, c run over kept().
struct VaismanTable {
    int rank = 0;                ///< n - 1
    Eigen::MatrixXd s_gamma;     ///< nabla_Gamma dbar_a = s_gamma(a, c) dbar_c
    Eigen::VectorXd s_a;         ///< nabla_{dbar_a} Gamma = s_a(a) Gamma
    double s = 0.0;              ///< nabla_Gamma Gamma = s Gamma
    std::vector<double> leafwise;///< nabla_{dbar_a} dbar_b = leaf(a, b, c) dbar_c
    std::vector<double> mixed;   ///< nabla_{delta_i} dbar_a = beta(i, a, c) dbar_c
    Eigen::VectorXd beta_i;      ///< nabla_{delta_i} Gamma = beta_i(i) Gamma
    TangentPoint at;

    double leaf(int a, int b, int c) const { return leafwise[(a * rank + b) * rank + c]; }
    double beta(int i, int a, int c) const { return mixed[(i * rank + a) * rank + c]; }
};

VaismanTable vaisman(const PointGeometry& geo);

/// Coefficients of a linear connection on a subbundle: nabla_{D_d} e_e = coeff(d, e, o) e_o.
struct ConnectionTable {
    std::string bundle;                   ///< "H", "L'_Gamma" or "L_Gamma^perp"
    std::vector<std::string> sections;    ///< frame e_e
    std::vector<std::string> directions;  ///< derivative directions D_d
    std::vector<double> coeff;

    int rank() const { return static_cast<int>(sections.size()); }
    int dirs() const { return static_cast<int>(directions.size()); }
    double operator()(int d, int e, int o) const { return coeff[(static_cast<std::size_t>(d) * rank() + e) * rank() + o]; }
    double& operator()(int d, int e, int o) { return coeff[(static_cast<std::size_t>(d) * rank() + e) * rank() + o]; }
    /// Frame tag and bundle agree in dimension.
    bool consistent(int n) const;
};

/// nabla*_1 on H: frame {delta_i}, directions {delta_j, d/dy^j}.
ConnectionTable vranceanu_horizontal(const PointGeometry& geo, const VranceanuTable& v);
/// nabla^v on L'_Gamma: frame {dbar_a}, directions {delta_j, dbar_b, Gamma}.
ConnectionTable vaisman_leafwise(const PointGeometry& geo, const VaismanTable& v);
/// nabla-bar = nabla*_1 + nabla^v on L_Gamma^perp: frame {delta_i, dbar_a}, directions {delta_j, dbar_b, Gamma}.
ConnectionTable composite_connection(const PointGeometry& geo, const VranceanuTable& vr, const VaismanTable& va);

/// Coefficients of a coordinate vector on the directions {delta_j, dbar_b (kept), Gamma}.
Eigen::VectorXd split_direction(const PointGeometry& geo, const Eigen::VectorXd& X);
/// Components of pi_2(Y) on {delta_i, dbar_a}, as jets.
std::vector<Jet> perp_components(const PointGeometry& geo, const JetVector& Y);
/// Coordinate vector of sum_e c_e e_e for the L_Gamma^perp frame.
Eigen::VectorXd perp_vector(const PointGeometry& geo, const Eigen::VectorXd& c);

/// nabla_X Z for a table on L_Gamma^perp, L'_Gamma or H sharing the frame conventions above.
/// `Z` holds frame components, `Xdir` the direction coefficients and `X` the coordinate vector.
Eigen::VectorXd apply(const ConnectionTable& T, const Eigen::VectorXd& X, const Eigen::VectorXd& Xdir,
                      const std::vector<Jet>& Z);

struct VranceanuChecks {
    double C_symmetry = 0.0;       ///< max |C^k_ij - C^k_ji| F
    double C_trace = 0.0;          ///< max |C^k_ij y^j|
    double F_symmetry = 0.0;       ///< max |F^k_ij - F^k_ji| / max(1, |F|)
    double structural = 0.0;       ///< the nabla*_{d/dy} delta block
    double basic = 0.0;            ///< nabla*_X Y - pi_1 [X, Y~] for random X in V
    double lift_independence = 0.0;
};

VranceanuChecks check_vranceanu_basic(const PointGeometry& geo, const VranceanuTable& v, SplitMix64& rng,
                                      int samples = 10);

struct VaismanChecks {
    double gamma_action = 0.0;             ///< max_i |nabla_Gamma dbar_i + dbar_i|, every i including the dropped one
    double s_values = 0.0;         ///< max |s_gamma + I|
    double s_a = 0.0;              ///< F max |s_a|
    double s_gamma = 0.0;          ///< |s - 1|
    double beta_i = 0.0;           ///< F max |beta_i|
    double cond_a = 0.0;           ///< splitting preservation
    double cond_b = 0.0;           ///< vanishing partial torsion
    double cond_c = 0.0;           ///< metric on L'_Gamma triples and on L_Gamma
    double cond_d = 0.0;           ///< horizontal directions
    double basic = 0.0;            ///< nabla_X Z - pi_0 [X, Z + b Gamma] for X = a Gamma
    double lift_independence = 0.0;
};

double gamma_action_residual(const PointGeometry& geo, const VaismanTable& v);
VaismanChecks check_vaisman(const PointGeometry& geo, const VaismanTable& v, SplitMix64& rng, int samples = 10);

struct CompositeChecks {
    double gamma_delta = 0.0;      ///< |nabla-bar_Gamma delta_i|
    double gamma_dbar = 0.0;       ///< |nabla-bar_Gamma dbar_a + dbar_a|
    double basic = 0.0;            ///< nabla-bar_X Y - pi_2 [X, Y~] for X = a Gamma
    double lift_independence = 0.0;
    double inclusion = 0.0;        ///< i(nabla^v_X Y) - nabla-bar_X i(Y)
    double projection = 0.0;       ///< pi(nabla-bar_X Z) - nabla*_1X pi(Z)
};

CompositeChecks check_composite(const PointGeometry& geo, const VranceanuTable& vr, const VaismanTable& va,
                                SplitMix64& rng, int samples = 10);

/// K(a Gamma, b Gamma) Z for nabla^v + nabla*_1 with random a, b, Z; when `constant` is set a = b = 1.
double curvature_on_line(const PointGeometry& geo, SplitMix64& rng, bool constant = false);

nlohmann::json connection_dump(const PointGeometry& geo, const VranceanuTable& vr, const VaismanTable& va,
                               const ConnectionTable& composite);

} // namespace flab

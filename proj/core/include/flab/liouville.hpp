#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

#include "flab/geometry.hpp"

namespace flab {

struct LiouvilleData {
    Eigen::VectorXd t;         ///< t_k = (1/F) dF/dy^k
    Eigen::VectorXd t_metric;  ///< t_k = y^i g_ki / F^2
    Eigen::VectorXd Gamma;     ///< coordinate components of y^i d/dy^i
    Eigen::VectorXd xi;        ///< coordinate components of y^i delta/delta x^i
    double consistency = 0.0;  ///< F * max_k |t_k - t_metric_k|
    TangentPoint at;
};

LiouvilleData liouville(const PointGeometry& geo);

struct BarFrame {
    Eigen::MatrixXd full;  ///< n x n, row k = d/dy components of dbar_k = d/dy^k - t_k Gamma
    Eigen::MatrixXd E;     ///< (n-1) x n, the rows of `full` other than `dropped`
    int dropped = 0;
    std::vector<int> kept;
};

BarFrame bar_frame(const PointGeometry& geo);

struct BarFrameResiduals {
    double rank_ratio = 0.0;     ///< smallest / largest singular value of E
    double orthogonality = 0.0;  ///< max_k |G(dbar_k, Gamma)| / F
    double dependence = 0.0;     ///< max |dbar_m + (1/y^m) y^a dbar_a|
};

BarFrameResiduals bar_frame_residuals(const PointGeometry& geo, const BarFrame& bar);

/// The six identities satisfied by t_k, each scaled to be dimensionless.
struct TIdentityResiduals {
    double y_dot_t = 0.0;           ///< |y^i t_i - 1|
    double y_dot_dbar = 0.0;        ///< max |y^i dbar_i| / |y|
    double dt_dy = 0.0;             ///< F^2 max |dt_l/dy^k + 2 t_k t_l - g_kl / F^2|
    double gamma_t = 0.0;           ///< F max |Gamma t_k + t_k|
    double contracted_dt = 0.0;     ///< F max |y^j dt_j/dy^i + t_i|
    double contracted_gamma_t = 0.0;///< |y^i Gamma(t_i) + 1|
    double max() const;
};

TIdentityResiduals t_identities(const PointGeometry& geo);

struct BarBracketResiduals {
    double dbar_dbar = 0.0;   ///< F max |[dbar_i, dbar_j] - (t_i dbar_j - t_j dbar_i)|
    double dbar_gamma = 0.0;  ///< max |[dbar_i, Gamma] - dbar_i|
    double max() const { return std::max(dbar_dbar, dbar_gamma); }
};

BarBracketResiduals bar_brackets(const PointGeometry& geo);

/// The adapted frame {deltabar_a, xi, dbar_a, Gamma} (a over the kept indices) in coordinate components.
struct FramePack {
    Eigen::MatrixXd matrix;  ///< 2n x 2n, one column per adapted field
    Eigen::MatrixXd gram;    ///< G(column_p, column_q)
    int dropped = 0;
    std::vector<int> kept;
    double condition = 1.0;  ///< 2-norm condition number of `matrix`
    double metric_condition = 1.0;
    std::vector<std::string> warnings;

    struct Block {
        std::string tag;
        int begin;
        int size;
    };
    /// L'_xi, L_xi, L'_Gamma, L_Gamma in column order.
    std::vector<Block> blocks() const;
    /// Columns spanning L_Gamma^perp = L_xi + L'_xi + L'_Gamma.
    std::vector<int> perp_columns() const;
};

inline constexpr double kFramePackConditionWarning = 1e10;

FramePack frame_pack(const PointGeometry& geo);

struct FramePackResiduals {
    double gram_off_block = 0.0;  ///< max off-block |Gram| / F^2
    double j_images = 0.0;        ///< max |J dbar_a - deltabar_a|, |J Gamma - xi| / |y|
    double norms = 0.0;           ///< |G(xi, xi) - F^2|, |G(Gamma, Gamma) - F^2| relative to F^2
    double perp_to_gamma = 0.0;   ///< max |G(X, Gamma)| / F^2 over the L_Gamma^perp columns
};

FramePackResiduals frame_pack_residuals(const PointGeometry& geo, const FramePack& pack);

/// Integrability of a distribution spanned by frame fields: the bracket of every pair, projected
/// G-orthogonally off the span, measured in G-norm relative to max(1, |bracket|).
double bracket_leakage(const PointGeometry& geo, const std::vector<JetVector>& span);

struct FrobeniusReport {
    struct Entry {
        std::string distribution;
        double leakage;
    };
    std::vector<Entry> entries;  ///< V, L'_Gamma, L_Gamma^perp, L_Gamma, L_xi, L_Gamma + L_xi
};

FrobeniusReport frobenius_checks(const PointGeometry& geo);

/// Structured dump of a frame pack at a point.
nlohmann::json frame_dump(const PointGeometry& geo, const FramePack& pack);
FramePack parse_frame_dump(const nlohmann::json& dump);
/// Recomputes the pack at the dumped point and returns the largest entry difference.
double reverify_frame_dump(const nlohmann::json& dump, const FinslerMetric& M);

} // namespace flab

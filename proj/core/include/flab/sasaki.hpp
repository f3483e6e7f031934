#pragma once

#include <Eigen/Dense>

#include "flab/geometry.hpp"
#include "flab/sampling.hpp"

namespace flab {

/// Sasaki lift diag(g, g) in the adapted frame {delta/delta x, d/dy}, and the same form in coordinates.
struct SasakiMetric {
    Eigen::MatrixXd adapted;
    Eigen::MatrixXd coordinate;
    TangentPoint at;
};

SasakiMetric sasaki(const PointGeometry& geo);

/// J(delta_i) = -d/dy^i, J(d/dy^i) = delta_i. `adapted` acts on (h, v) column vectors.
struct AlmostComplexJ {
    Eigen::MatrixXd adapted;
    Eigen::MatrixXd coordinate;
};

AlmostComplexJ almost_complex(const PointGeometry& geo);

/// Omega in the adapted frame, entry (p, q) = Omega(e_p, e_q), built two ways.
struct KahlerForm {
    Eigen::MatrixXd from_metric;  ///< G(J e_p, e_q)
    Eigen::MatrixXd from_wedge;   ///< g_ij delta y^i ^ dx^j evaluated on (e_p, e_q)
    Eigen::MatrixXd coordinate;   ///< from_metric in the coordinate frame
};

KahlerForm kahler_form(const PointGeometry& geo);

/// dOmega(X, Y, Z) by the invariant formula, maximised over triples of the given frame fields, divided by F^2.
double d_omega(const PointGeometry& geo, const std::vector<JetVector>& frame);

struct CompatibilityReport {
    double j_squared = 0.0;       ///< max |J^2 + I| in the adapted frame
    double j_compat = 0.0;        ///< max |G(JX, JY) - G(X, Y)| / F^2 over adapted frame pairs
    double kahler_routes = 0.0;   ///< max |Omega_metric - Omega_wedge| / max|g|
    double antisymmetry = 0.0;    ///< max |Omega + Omega^T|
    double d_omega = 0.0;
    double volume = 0.0;          ///< | |det Omega| - det G | / det G in coordinates
    double omega_random = 0.0;    ///< Omega(X, Y) against G(JX, Y) on random pairs
    double roundtrip = 0.0;       ///< coordinate G pulled back to the adapted frame vs diag(g, g)
};

/// Runs every almost-Kaehler identity at the point; `random_pairs` vectors are drawn from `rng`.
CompatibilityReport compatibility_checks(const PointGeometry& geo, SplitMix64& rng, int random_pairs = 20);

} // namespace flab

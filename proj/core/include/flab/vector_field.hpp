#pragma once

#include <vector>

#include <Eigen/Dense>

#include "flab/jet.hpp"

namespace flab {

/// Vector field on the 2n-dimensional chart: coordinate components along
/// (d/dx^1..d/dx^n, d/dy^1..d/dy^n), each a jet about the evaluation point.
using JetVector = std::vector<Jet>;

/// X(f) = X^a df/dz^a, valid to min(order X, order f - 1).
Jet directional(const JetVector& X, const Jet& f);

/// Lie bracket [X, Y]^a = X(Y^a) - Y(X^a).
JetVector bracket(const JetVector& X, const JetVector& Y);

/// [X, Y] at the expansion point only; needs one derivative of each coefficient.
Eigen::VectorXd bracket_value(const JetVector& X, const JetVector& Y);

Eigen::VectorXd values(const JetVector& X);

JetVector operator+(const JetVector& a, const JetVector& b);
JetVector operator-(const JetVector& a, const JetVector& b);
JetVector operator*(const Jet& f, const JetVector& X);
JetVector operator*(double c, const JetVector& X);

/// Field with constant coordinate components `v`.
JetVector constant_field(const BasisPtr& basis, const Eigen::VectorXd& v);
/// The coordinate field d/dz^k on a 2n-dimensional chart (dim = 2n).
JetVector coordinate_field(const BasisPtr& basis, int dim, int k);

} // namespace flab

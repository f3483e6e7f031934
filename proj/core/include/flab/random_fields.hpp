#pragma once

#include "flab/geometry.hpp"
#include "flab/sampling.hpp"

namespace flab {

/// Random polynomial of the given degree in (z - z0), coefficients uniform in [-1, 1], as a jet of `order`.
Jet random_function(const PointGeometry& geo, SplitMix64& rng, int order, int degree = 2);

/// Vector field with random polynomial coordinate components.
JetVector random_field(const PointGeometry& geo, SplitMix64& rng, int order);

/// Vertical field (zero d/dx components) with random polynomial coefficients.
JetVector random_vertical_field(const PointGeometry& geo, SplitMix64& rng, int order);

Eigen::VectorXd random_vector(int dim, SplitMix64& rng);

/// Every component truncated to `order`.
JetVector truncated(const JetVector& X, int order);

/// sum_k c_k X_k with jet coefficients.
JetVector combine(const std::vector<Jet>& c, const std::vector<JetVector>& X);

} // namespace flab

#pragma once

#include <span>

#include "flab/field.hpp"

namespace flab {

/// Finite-difference settings.
///
/// `step` is the spacing used for first-order indices. A multi-index of total
/// order r uses h_r = step^(2 / (r + 1)) (1e-5, 4.6e-4, 3.2e-3 by default), which
/// keeps the roundoff term eps / h^r below the h^4 truncation error left after
/// one Richardson level.
struct FdOptions {
    double step = 1e-5;
    int richardson_levels = 1;
};

/// Central-difference estimate of a partial derivative of f at (x, y).
///
/// `vars` lists chart variables (x^i -> i, y^i -> n + i) with repetition, up to three entries.
/// Stencils are tensor products of the 1D central stencils for each distinct variable.
double fd_oracle(const ScalarField& f, std::span<const double> x, std::span<const double> y,
                 std::span<const int> vars, const FdOptions& opts = {});
double fd_oracle(const ScalarField& f, const TangentPoint& p, std::span<const int> vars,
                 const FdOptions& opts = {});

/// Same scheme applied to an arbitrary function of the 2n chart coordinates.
double fd_partial(const std::function<double(std::span<const double>)>& f, std::span<const double> z,
                  std::span<const int> vars, const FdOptions& opts = {});

} // namespace flab

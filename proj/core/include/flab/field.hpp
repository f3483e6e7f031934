#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "flab/jet.hpp"
#include "flab/scalar.hpp"

namespace flab {

/// A point (x, y) of the slit tangent manifold: y is never the zero vector.
class TangentPoint {
public:
    TangentPoint() = default;
    /// Throws std::invalid_argument on a size mismatch and SingularEvaluation when y = 0.
    TangentPoint(std::vector<double> x, std::vector<double> y);

    int dimension() const { return static_cast<int>(x_.size()); }
    const std::vector<double>& x() const { return x_; }
    const std::vector<double>& y() const { return y_; }
    /// Coordinate z_k of the 2n-dimensional chart: x for k < n, y for k >= n.
    double coordinate(int k) const { return k < dimension() ? x_[k] : y_[k - dimension()]; }
    std::string describe() const;

private:
    std::vector<double> x_;
    std::vector<double> y_;
};

/// Scalar field on the 2n-dimensional chart, evaluable on doubles and on jets.
///
/// Both evaluators must implement the same expression; `from_generic` builds
/// them from one generic callable so this holds by construction.
class ScalarField {
public:
    using DoubleEval = std::function<double(std::span<const double>, std::span<const double>)>;
    using JetEval = std::function<Jet(std::span<const Jet>, std::span<const Jet>)>;

    ScalarField() = default;
    ScalarField(int n, DoubleEval d, JetEval j) : n_(n), eval_d_(std::move(d)), eval_j_(std::move(j)) {}

    template <class Fn>
    static ScalarField from_generic(int n, Fn fn)
    {
        return ScalarField(
            n,
            [fn](std::span<const double> x, std::span<const double> y) { return fn(x, y); },
            [fn](std::span<const Jet> x, std::span<const Jet> y) { return fn(x, y); });
    }

    int dimension() const { return n_; }
    double operator()(std::span<const double> x, std::span<const double> y) const { return eval_d_(x, y); }
    Jet operator()(std::span<const Jet> x, std::span<const Jet> y) const { return eval_j_(x, y); }

    ScalarField operator+(const ScalarField& o) const;
    ScalarField operator*(const ScalarField& o) const;
    ScalarField scaled(double c) const;

private:
    int n_ = 0;
    DoubleEval eval_d_;
    JetEval eval_j_;
};

/// Seeds the 2n chart coordinates as jets on `basis`; variable k is active with jet slot active[k] (or -1).
void seed_jets(const BasisPtr& basis, std::span<const double> x, std::span<const double> y,
               std::span<const int> slot_of, std::vector<Jet>& xj, std::vector<Jet>& yj);

/// Jet of f at (x, y) up to `order` in the listed active chart variables (indices into z = (x, y)).
Jet eval_jet(const ScalarField& f, std::span<const double> x, std::span<const double> y,
             std::span<const int> active, int order);

/// Value, gradient, Hessian and third derivatives of f with respect to the active variables.
Jet3 eval_jet3(const ScalarField& f, const TangentPoint& p, std::span<const int> active);
Jet3 eval_jet3(const ScalarField& f, std::span<const double> x, std::span<const double> y,
               std::span<const int> active);

/// Active-variable lists for the common cases.
std::vector<int> all_variables(int n);
std::vector<int> y_variables(int n);
std::vector<int> x_variables(int n);

} // namespace flab

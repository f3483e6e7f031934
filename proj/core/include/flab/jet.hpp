#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "flab/errors.hpp"

namespace flab {

/// Index set of all monomials z^alpha in `variables` unknowns with |alpha| <= max_order.
///
/// Monomials are ordered by total degree, then lexicographically (highest
/// exponent of the first variable first). The basis also owns the product and
/// differentiation tables used by Jet, so it is built once and shared
/// read-only between every jet that lives on it.
class MonomialBasis {
public:
    MonomialBasis(int variables, int max_order);

    /// Shared instance, built on first request for each (variables, max_order).
    static std::shared_ptr<const MonomialBasis> make(int variables, int max_order);

    int variables() const { return variables_; }
    int max_order() const { return max_order_; }
    int size() const { return static_cast<int>(degree_.size()); }
    /// Number of monomials of degree <= order.
    int size_up_to(int order) const { return degree_offset_[order + 1]; }

    int degree(int idx) const { return degree_[idx]; }
    std::span<const int> exponents(int idx) const
    {
        return {exponents_.data() + static_cast<std::size_t>(idx) * variables_,
                static_cast<std::size_t>(variables_)};
    }
    /// alpha! for monomial idx; converts Taylor coefficients to partial derivatives.
    double factorial_weight(int idx) const { return weight_[idx]; }

    /// Index of z^alpha * z_v, or -1 when the degree would exceed max_order.
    int raise(int idx, int v) const { return raise_[static_cast<std::size_t>(idx) * variables_ + v]; }

    /// Index of the monomial with the given exponents, or -1 if not in the basis.
    int index_of(std::span<const int> exps) const;
    /// Index of the monomial obtained from a list of differentiation variables, e.g. {0, 0, 2}.
    int index_of_multi_index(std::span<const int> vars) const;

    struct ProductTerm {
        int rhs;
        int out;
    };
    /// Products z^a * z^b for fixed a, sorted by degree of b; limited to deg(a)+deg(b) <= order.
    std::span<const ProductTerm> products(int lhs, int order) const;

private:
    int variables_;
    int max_order_;
    std::vector<int> exponents_;
    std::vector<int> degree_;
    std::vector<int> degree_offset_;
    std::vector<double> weight_;
    std::vector<int> raise_;
    std::vector<std::vector<ProductTerm>> products_;
    std::vector<std::vector<int>> product_offset_; // [lhs][deg b] -> end offset
};

using BasisPtr = std::shared_ptr<const MonomialBasis>;

/// Truncated multivariate Taylor polynomial of a scalar field about a point.
///
/// Coefficients are stored as Taylor coefficients f_alpha = d^alpha f / alpha!,
/// so multiplication is a truncated Cauchy product. Each jet carries the order
/// to which its coefficients are valid; arithmetic truncates to the smaller
/// order of its operands and differentiation lowers the order by one.
class Jet {
public:
    Jet() = default;

    static Jet constant(BasisPtr basis, double c);
    static Jet variable(BasisPtr basis, int v, double value);
    /// Jet of the given order with Taylor coefficients `coeffs` (missing entries are zero).
    static Jet from_taylor(BasisPtr basis, int order, std::span<const double> coeffs);

    const BasisPtr& basis() const { return basis_; }
    int order() const { return order_; }
    double value() const { return coeffs_.empty() ? 0.0 : coeffs_[0]; }
    double coefficient(int idx) const { return idx < static_cast<int>(coeffs_.size()) ? coeffs_[idx] : 0.0; }
    std::span<const double> coefficients() const { return coeffs_; }

    /// Partial derivative along the listed variables, e.g. {0, 3} for d^2/dz0 dz3.
    double derivative(std::span<const int> vars) const;
    double derivative(std::initializer_list<int> vars) const
    {
        return derivative(std::span<const int>(vars.begin(), vars.size()));
    }

    /// Jet of d/dz_v, valid to order - 1.
    Jet partial(int v) const;
    Jet truncated(int order) const;

    bool is_zero() const;

    Jet operator-() const;
    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(const Jet& o);
    Jet& operator/=(const Jet& o);
    Jet& operator+=(double c);
    Jet& operator-=(double c);
    Jet& operator*=(double c);
    Jet& operator/=(double c);

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);
    friend Jet operator+(Jet a, double c) { return a += c; }
    friend Jet operator+(double c, Jet a) { return a += c; }
    friend Jet operator-(Jet a, double c) { return a -= c; }
    friend Jet operator-(double c, const Jet& a) { return (-a) += c; }
    friend Jet operator*(Jet a, double c) { return a *= c; }
    friend Jet operator*(double c, Jet a) { return a *= c; }
    friend Jet operator/(Jet a, double c) { return a /= c; }
    friend Jet operator/(double c, const Jet& a);

    friend Jet sqrt(const Jet& a);
    friend Jet exp(const Jet& a);
    friend Jet log(const Jet& a);
    friend Jet sin(const Jet& a);
    friend Jet cos(const Jet& a);
    friend Jet pow(const Jet& a, double r);
    friend Jet reciprocal(const Jet& a);

    /// Composition phi(a) given phi and its derivatives at a.value(): d[k] = phi^(k)(a0).
    static Jet compose(const Jet& a, std::span<const double> phi_derivatives);

private:
    Jet(BasisPtr basis, int order);

    void require_same_basis(const Jet& o) const;

    BasisPtr basis_;
    int order_ = 0;
    std::vector<double> coeffs_;
};

/// Dense m x m x m array indexed (i, j, k).
class Tensor3 {
public:
    Tensor3() = default;
    explicit Tensor3(int m) : m_(m), data_(static_cast<std::size_t>(m) * m * m, 0.0) {}
    int size() const { return m_; }
    double operator()(int i, int j, int k) const { return data_[(static_cast<std::size_t>(i) * m_ + j) * m_ + k]; }
    double& operator()(int i, int j, int k) { return data_[(static_cast<std::size_t>(i) * m_ + j) * m_ + k]; }

private:
    int m_ = 0;
    std::vector<double> data_;
};

/// Value, gradient, Hessian and third-derivative tensor of a scalar field at a point.
struct Jet3 {
    double value = 0.0;
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
    Tensor3 third;
};

/// Reads a Jet3 off an order >= 3 jet. Symmetric entries are copied from one coefficient.
Jet3 to_jet3(const Jet& jet);

} // namespace flab

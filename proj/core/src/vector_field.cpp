#include "flab/vector_field.hpp"

#include <stdexcept>

namespace flab {

Jet directional(const JetVector& X, const Jet& f)
{
    if (f.order() < 1) throw std::logic_error("directional: order-0 jet cannot be differentiated");
    int order = f.order() - 1;
    for (const auto& c : X) order = std::min(order, c.order());
    Jet acc = Jet::constant(f.basis(), 0.0).truncated(order);
    for (std::size_t a = 0; a < X.size(); ++a) {
        if (X[a].is_zero()) continue;
        acc += X[a] * f.partial(static_cast<int>(a));
    }
    return acc;
}

JetVector bracket(const JetVector& X, const JetVector& Y)
{
    if (X.size() != Y.size()) throw std::invalid_argument("bracket: dimension mismatch");
    JetVector out;
    out.reserve(X.size());
    for (std::size_t a = 0; a < X.size(); ++a) out.push_back(directional(X, Y[a]) - directional(Y, X[a]));
    return out;
}

Eigen::VectorXd bracket_value(const JetVector& X, const JetVector& Y)
{
    if (X.size() != Y.size()) throw std::invalid_argument("bracket: dimension mismatch");
    const int dim = static_cast<int>(X.size());
    Eigen::VectorXd out = Eigen::VectorXd::Zero(dim);
    for (int b = 0; b < dim; ++b) {
        const double xb = X[b].value();
        const double yb = Y[b].value();
        for (int a = 0; a < dim; ++a) {
            if (xb != 0.0 && !Y[a].is_zero()) out[a] += xb * Y[a].derivative({b});
            if (yb != 0.0 && !X[a].is_zero()) out[a] -= yb * X[a].derivative({b});
        }
    }
    return out;
}

Eigen::VectorXd values(const JetVector& X)
{
    Eigen::VectorXd v(static_cast<Eigen::Index>(X.size()));
    for (std::size_t a = 0; a < X.size(); ++a) v[static_cast<Eigen::Index>(a)] = X[a].value();
    return v;
}

JetVector operator+(const JetVector& a, const JetVector& b)
{
    JetVector out = a;
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
    return out;
}

JetVector operator-(const JetVector& a, const JetVector& b)
{
    JetVector out = a;
    for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
    return out;
}

JetVector operator*(const Jet& f, const JetVector& X)
{
    JetVector out;
    out.reserve(X.size());
    for (const auto& c : X) out.push_back(c.is_zero() ? c.truncated(std::min(c.order(), f.order())) : f * c);
    return out;
}

JetVector operator*(double c, const JetVector& X)
{
    JetVector out = X;
    for (auto& v : out) v *= c;
    return out;
}

JetVector constant_field(const BasisPtr& basis, const Eigen::VectorXd& v)
{
    JetVector out;
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(Jet::constant(basis, v[i]));
    return out;
}

JetVector coordinate_field(const BasisPtr& basis, int dim, int k)
{
    Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
    e[k] = 1.0;
    return constant_field(basis, e);
}

} // namespace flab

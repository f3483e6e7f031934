#include "flab/random_fields.hpp"

namespace flab {

Jet random_function(const PointGeometry& geo, SplitMix64& rng, int order, int degree)
{
    const MonomialBasis& basis = *geo.basis();
    std::vector<double> coeffs(static_cast<std::size_t>(basis.size_up_to(std::min(degree, order))));
    for (double& c : coeffs) c = rng.uniform(-1.0, 1.0);
    return Jet::from_taylor(geo.basis(), order, coeffs);
}

JetVector random_field(const PointGeometry& geo, SplitMix64& rng, int order)
{
    JetVector X;
    for (int a = 0; a < geo.dim(); ++a) X.push_back(random_function(geo, rng, order));
    return X;
}

JetVector random_vertical_field(const PointGeometry& geo, SplitMix64& rng, int order)
{
    JetVector X;
    for (int a = 0; a < geo.n(); ++a) X.push_back(Jet::constant(geo.basis(), 0.0).truncated(order));
    for (int a = 0; a < geo.n(); ++a) X.push_back(random_function(geo, rng, order));
    return X;
}

Eigen::VectorXd random_vector(int dim, SplitMix64& rng)
{
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = rng.uniform(-1.0, 1.0);
    return v;
}

JetVector truncated(const JetVector& X, int order)
{
    JetVector out;
    out.reserve(X.size());
    for (const auto& c : X) out.push_back(c.truncated(order));
    return out;
}

JetVector combine(const std::vector<Jet>& c, const std::vector<JetVector>& X)
{
    JetVector acc = c[0] * X[0];
    for (std::size_t k = 1; k < c.size(); ++k) acc = acc + c[k] * X[k];
    return acc;
}

} // namespace flab

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

#include "flab/field.hpp"

namespace flab {

/// Polynomial in the position coordinates x, total degree <= 3 in configs.
class Polynomial {
public:
    struct Term {
        double coef;
        std::vector<int> exps;
    };

    Polynomial() = default;
    Polynomial(int n, double c);
    Polynomial(int n, std::vector<Term> terms);

    int variables() const { return n_; }
    int degree() const;
    bool is_constant() const { return degree() == 0; }
    const std::vector<Term>& terms() const { return terms_; }

    template <class T>
    T eval(std::span<const T> x) const
    {
        T acc = constant_like(x[0], 0.0);
        for (const auto& term : terms_) {
            bool constant = true;
            T mono = constant_like(x[0], term.coef);
            for (int v = 0; v < n_; ++v)
                for (int e = 0; e < term.exps[v]; ++e) {
                    mono = mono * x[v];
                    constant = false;
                }
            if (constant)
                acc = acc + term.coef;
            else
                acc = acc + mono;
        }
        return acc;
    }

    double operator()(std::span<const double> x) const { return eval<double>(x); }
    /// Partial derivative d/dx^v.
    Polynomial derivative(int v) const;

private:
    int n_ = 0;
    std::vector<Term> terms_;
};

using PolyMatrix = std::vector<std::vector<Polynomial>>;
using PolyVector = std::vector<Polynomial>;

struct DomainBox {
    std::vector<double> lo;
    std::vector<double> hi;

    static DomainBox cube(int n, double half_width);
    bool contains(std::span<const double> x) const;
};

enum class MetricFamily { euclidean, riemannian, randers, custom };

std::string to_string(MetricFamily f);

/// A Finsler function F(x, y) on one chart together with its family data.
///
/// F is positive and positively 1-homogeneous in y. When the family has a
/// closed-form square (Riemannian), F^2 is evaluated directly rather than as F*F.
class FinslerMetric {
public:
    static FinslerMetric euclidean(int n);
    static FinslerMetric riemannian(PolyMatrix a);
    static FinslerMetric randers(PolyMatrix a, PolyVector b);
    static FinslerMetric custom(std::string id, ScalarField F, std::optional<ScalarField> F2 = std::nullopt);

    int dimension() const { return n_; }
    MetricFamily family() const { return family_; }
    const std::string& id() const { return id_; }
    void set_id(std::string id) { id_ = std::move(id); }
    const DomainBox& domain() const { return domain_; }
    void set_domain(DomainBox box) { domain_ = std::move(box); }

    const ScalarField& fundamental_function() const { return F_; }
    const ScalarField& squared() const { return F2_; }

    double F(std::span<const double> x, std::span<const double> y) const { return F_(x, y); }
    double F(const TangentPoint& p) const { return F_(p.x(), p.y()); }

    /// a_ij(x) for Riemannian and Randers families (empty otherwise).
    const PolyMatrix& a() const { return a_; }
    /// b_i(x) for the Randers family (empty otherwise).
    const PolyVector& b() const { return b_; }

private:
    int n_ = 0;
    MetricFamily family_ = MetricFamily::custom;
    std::string id_;
    ScalarField F_;
    ScalarField F2_;
    PolyMatrix a_;
    PolyVector b_;
    DomainBox domain_;
};

struct FundamentalTensor {
    Eigen::MatrixXd g;
    Eigen::MatrixXd g_inv;
    double condition = 1.0;
    TangentPoint at;
};

/// Largest condition number of g accepted before inversion.
inline constexpr double kMaxMetricCondition = 1e12;

/// Checks positive definiteness and conditioning of g; throws DegenerateMetric naming the point.
double guard_metric(const Eigen::MatrixXd& g, const TangentPoint& p);

/// g_ij = 1/2 d^2 F^2 / dy^i dy^j and its inverse.
FundamentalTensor fundamental_tensor(const FinslerMetric& M, const TangentPoint& p);

struct EulerResiduals {
    double quadratic = 0.0;  ///< |F^2 - y^i y^j g_ij| / F^2
    double gradient = 0.0;   ///< max_k |dF/dy^k - y^i g_ki / F|
    double cartan = 0.0;     ///< max_jk |y^i dg_ij/dy^k| / max|g|
    double liouville = 0.0;  ///< |G(Gamma, Gamma) - F^2| / F^2
    double max() const;
};

EulerResiduals euler_identities(const FinslerMetric& M, const TangentPoint& p);

struct LoadedMetric {
    FinslerMetric metric;
    std::vector<std::string> warnings;
};

/// Builds a metric from a config document (schema in configs/README.md).
///
/// Probes 8 seeded sample points: F <= 0 or a non positive-definite g rejects the config,
/// failed homogeneity is reported as a warning.
LoadedMetric load_metric(const nlohmann::json& config);
LoadedMetric load_metric_file(const std::string& path);

} // namespace flab

#include "flab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace flab {

Polynomial::Polynomial(int n, double c) : n_(n)
{
    if (c != 0.0) terms_.push_back({c, std::vector<int>(n, 0)});
}

Polynomial::Polynomial(int n, std::vector<Term> terms) : n_(n), terms_(std::move(terms))
{
    for (const auto& t : terms_)
        if (static_cast<int>(t.exps.size()) != n_ || std::any_of(t.exps.begin(), t.exps.end(), [](int e) { return e < 0; }))
            throw ConfigError("polynomial term has wrong exponent vector");
}

int Polynomial::degree() const
{
    int d = 0;
    for (const auto& t : terms_) {
        int s = 0;
        for (int e : t.exps) s += e;
        if (t.coef != 0.0) d = std::max(d, s);
    }
    return d;
}

Polynomial Polynomial::derivative(int v) const
{
    std::vector<Term> out;
    for (const auto& t : terms_) {
        if (t.exps[v] == 0) continue;
        Term d = t;
        d.coef *= t.exps[v];
        --d.exps[v];
        out.push_back(std::move(d));
    }
    return Polynomial(n_, std::move(out));
}

DomainBox DomainBox::cube(int n, double half_width)
{
    return {std::vector<double>(n, -half_width), std::vector<double>(n, half_width)};
}

bool DomainBox::contains(std::span<const double> x) const
{
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!(x[i] >= lo[i] && x[i] <= hi[i])) return false;
    return true;
}

std::string to_string(MetricFamily f)
{
    switch (f) {
    case MetricFamily::euclidean: return "euclidean";
    case MetricFamily::riemannian: return "riemannian";
    case MetricFamily::randers: return "randers";
    case MetricFamily::custom: return "custom";
    }
    return "unknown";
}

namespace {

constexpr double kDefaultDomain = 100.0;

// q = a_ij(x) y^i y^j with constant entries kept as plain scalars.
template <class T>
T quadratic_form(const PolyMatrix& a, std::span<const T> x, std::span<const T> y)
{
    const int n = static_cast<int>(y.size());
    T q = constant_like(y[0], 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double w = i == j ? 1.0 : 2.0;
            const Polynomial& p = a[i][j];
            if (p.terms().empty()) continue;
            T yy = y[i] * y[j];
            if (p.is_constant())
                q = q + (w * p.terms()[0].coef) * yy;
            else
                q = q + w * (p.eval(x) * yy);
        }
    return q;
}

template <class T>
T linear_form(const PolyVector& b, std::span<const T> x, std::span<const T> y)
{
    T s = constant_like(y[0], 0.0);
    for (std::size_t i = 0; i < b.size(); ++i) {
        const Polynomial& p = b[i];
        if (p.terms().empty()) continue;
        if (p.is_constant())
            s = s + p.terms()[0].coef * y[i];
        else
            s = s + p.eval(x) * y[i];
    }
    return s;
}

void check_square(const PolyMatrix& a, const char* what)
{
    const std::size_t n = a.size();
    if (n == 0) throw ConfigError(std::string(what) + ": empty coefficient matrix");
    for (const auto& row : a)
        if (row.size() != n) throw ConfigError(std::string(what) + ": coefficient matrix is not square");
}

} // namespace

FinslerMetric FinslerMetric::euclidean(int n)
{
    if (n < 1) throw ConfigError("euclidean: dimension must be positive");
    FinslerMetric m;
    m.n_ = n;
    m.family_ = MetricFamily::euclidean;
    m.id_ = "euclidean-" + std::to_string(n);
    m.F2_ = ScalarField::from_generic(n, [](auto, auto y) {
        auto s = y[0] * y[0];
        for (std::size_t i = 1; i < y.size(); ++i) s = s + y[i] * y[i];
        return s;
    });
    auto sq = m.F2_;
    m.F_ = ScalarField::from_generic(n, [sq](auto x, auto y) { return checked_sqrt(sq(x, y)); });
    m.domain_ = DomainBox::cube(n, kDefaultDomain);
    return m;
}

FinslerMetric FinslerMetric::riemannian(PolyMatrix a)
{
    check_square(a, "riemannian");
    FinslerMetric m;
    m.n_ = static_cast<int>(a.size());
    m.family_ = MetricFamily::riemannian;
    m.id_ = "riemannian-" + std::to_string(m.n_);
    m.a_ = a;
    m.F2_ = ScalarField::from_generic(m.n_, [a](auto x, auto y) { return quadratic_form(a, x, y); });
    auto sq = m.F2_;
    m.F_ = ScalarField::from_generic(m.n_, [sq](auto x, auto y) { return checked_sqrt(sq(x, y)); });
    m.domain_ = DomainBox::cube(m.n_, kDefaultDomain);
    return m;
}

FinslerMetric FinslerMetric::randers(PolyMatrix a, PolyVector b)
{
    check_square(a, "randers");
    if (b.size() != a.size()) throw ConfigError("randers: b has length " + std::to_string(b.size()) +
                                                ", expected " + std::to_string(a.size()));
    FinslerMetric m;
    m.n_ = static_cast<int>(a.size());
    m.family_ = MetricFamily::randers;
    m.id_ = "randers-" + std::to_string(m.n_);
    m.a_ = a;
    m.b_ = b;
    m.F_ = ScalarField::from_generic(m.n_, [a, b](auto x, auto y) {
        return checked_sqrt(quadratic_form(a, x, y)) + linear_form(b, x, y);
    });
    auto f = m.F_;
    m.F2_ = ScalarField::from_generic(m.n_, [f](auto x, auto y) {
        auto v = f(x, y);
        return v * v;
    });
    m.domain_ = DomainBox::cube(m.n_, kDefaultDomain);
    return m;
}

FinslerMetric FinslerMetric::custom(std::string id, ScalarField F, std::optional<ScalarField> F2)
{
    FinslerMetric m;
    m.n_ = F.dimension();
    m.family_ = MetricFamily::custom;
    m.id_ = std::move(id);
    m.F_ = F;
    if (F2) {
        m.F2_ = *F2;
    } else {
        m.F2_ = ScalarField(
            m.n_,
            [F](std::span<const double> x, std::span<const double> y) {
                const double v = F(x, y);
                return v * v;
            },
            [F](std::span<const Jet> x, std::span<const Jet> y) {
                Jet v = F(x, y);
                return v * v;
            });
    }
    m.domain_ = DomainBox::cube(m.n_, kDefaultDomain);
    return m;
}

double guard_metric(const Eigen::MatrixXd& g, const TangentPoint& p)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0.0)) {
        std::ostringstream os;
        os << "degenerate metric at " << p.describe() << ": fundamental tensor not positive definite (lambda_min = "
           << lo << ")";
        throw DegenerateMetric(os.str());
    }
    const double cond = hi / lo;
    if (cond > kMaxMetricCondition) {
        std::ostringstream os;
        os << "degenerate metric at " << p.describe() << ": condition number " << cond << " exceeds "
           << kMaxMetricCondition;
        throw DegenerateMetric(os.str());
    }
    return cond;
}

FundamentalTensor fundamental_tensor(const FinslerMetric& M, const TangentPoint& p)
{
    const int n = M.dimension();
    if (p.dimension() != n) throw std::invalid_argument("fundamental_tensor: point dimension mismatch");
    const double F = M.F(p);
    if (!(F > 0.0)) throw DegenerateMetric("F is not positive at " + p.describe());
    const auto active = y_variables(n);
    const Jet jet = eval_jet(M.squared(), p.x(), p.y(), active, 2);
    FundamentalTensor out;
    out.at = p;
    out.g = Eigen::MatrixXd(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double v = 0.5 * jet.derivative({i, j});
            out.g(i, j) = v;
            out.g(j, i) = v;
        }
    out.condition = guard_metric(out.g, p);
    out.g_inv = out.g.ldlt().solve(Eigen::MatrixXd::Identity(n, n));
    return out;
}

double EulerResiduals::max() const { return std::max({quadratic, gradient, cartan, liouville}); }

EulerResiduals euler_identities(const FinslerMetric& M, const TangentPoint& p)
{
    const int n = M.dimension();
    const auto active = y_variables(n);
    const Jet3 f2 = eval_jet3(M.squared(), p, active);
    const Jet fj = eval_jet(M.fundamental_function(), p.x(), p.y(), active, 1);
    const Eigen::Map<const Eigen::VectorXd> y(p.y().data(), n);
    const Eigen::MatrixXd g = 0.5 * f2.hess;
    const double F = fj.value();
    const double F2 = F * F;

    EulerResiduals r;
    r.quadratic = std::abs(f2.value - y.dot(g * y)) / F2;
    const Eigen::VectorXd gy = g * y;
    for (int k = 0; k < n; ++k) r.gradient = std::max(r.gradient, std::abs(fj.derivative({k}) - gy[k] / F));
    const double gscale = g.cwiseAbs().maxCoeff();
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += y[i] * 0.5 * f2.third(i, j, k);
            r.cartan = std::max(r.cartan, std::abs(s) / gscale);
        }
    // Sasaki metric restricted to the vertical block is g, so G(Gamma, Gamma) = g(y, y).
    r.liouville = std::abs(y.dot(gy) - F2) / F2;
    return r;
}

} // namespace flab

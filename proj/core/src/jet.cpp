#include "flab/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace flab {

namespace {

void enumerate_degree(int variables, int degree, int var, std::vector<int>& current,
                      std::vector<std::vector<int>>& out)
{
    if (var == variables - 1) {
        current[var] = degree;
        out.push_back(current);
        return;
    }
    for (int e = degree; e >= 0; --e) {
        current[var] = e;
        enumerate_degree(variables, degree - e, var + 1, current, out);
    }
}

double factorial(int k)
{
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

} // namespace

MonomialBasis::MonomialBasis(int variables, int max_order)
    : variables_(variables), max_order_(max_order)
{
    if (variables < 1) throw std::invalid_argument("MonomialBasis: need at least one variable");
    if (max_order < 0) throw std::invalid_argument("MonomialBasis: negative order");

    std::vector<std::vector<int>> monomials;
    degree_offset_.push_back(0);
    for (int d = 0; d <= max_order; ++d) {
        std::vector<int> current(variables, 0);
        enumerate_degree(variables, d, 0, current, monomials);
        degree_offset_.push_back(static_cast<int>(monomials.size()));
    }

    std::map<std::vector<int>, int> lookup;
    for (std::size_t i = 0; i < monomials.size(); ++i) {
        const auto& m = monomials[i];
        exponents_.insert(exponents_.end(), m.begin(), m.end());
        int deg = 0;
        double w = 1.0;
        for (int e : m) {
            deg += e;
            w *= factorial(e);
        }
        degree_.push_back(deg);
        weight_.push_back(w);
        lookup.emplace(m, static_cast<int>(i));
    }

    const int count = size();
    raise_.assign(static_cast<std::size_t>(count) * variables_, -1);
    for (int i = 0; i < count; ++i) {
        for (int v = 0; v < variables_; ++v) {
            std::vector<int> e = monomials[i];
            ++e[v];
            auto it = lookup.find(e);
            if (it != lookup.end()) raise_[static_cast<std::size_t>(i) * variables_ + v] = it->second;
        }
    }

    products_.resize(count);
    product_offset_.resize(count);
    for (int a = 0; a < count; ++a) {
        const int room = max_order_ - degree_[a];
        product_offset_[a].assign(static_cast<std::size_t>(std::max(room, 0)) + 1, 0);
        if (room < 0) continue;
        for (int b = 0; b < size_up_to(room); ++b) {
            std::vector<int> e(variables_);
            for (int v = 0; v < variables_; ++v) e[v] = monomials[a][v] + monomials[b][v];
            products_[a].push_back({b, lookup.at(e)});
        }
        for (int d = 0; d <= room; ++d) product_offset_[a][d] = size_up_to(d);
    }
}

std::shared_ptr<const MonomialBasis> MonomialBasis::make(int variables, int max_order)
{
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const MonomialBasis>> cache;
    const std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[{variables, max_order}];
    if (!slot) slot = std::make_shared<const MonomialBasis>(variables, max_order);
    return slot;
}

int MonomialBasis::index_of(std::span<const int> exps) const
{
    int deg = 0;
    for (int e : exps) deg += e;
    if (static_cast<int>(exps.size()) != variables_ || deg > max_order_) return -1;
    int idx = 0;
    for (int v = 0; v < variables_; ++v)
        for (int k = 0; k < exps[v]; ++k) idx = raise(idx, v);
    return idx;
}

int MonomialBasis::index_of_multi_index(std::span<const int> vars) const
{
    if (static_cast<int>(vars.size()) > max_order_) return -1;
    int idx = 0;
    for (int v : vars) {
        if (v < 0 || v >= variables_) throw std::out_of_range("multi-index variable out of range");
        idx = raise(idx, v);
    }
    return idx;
}

std::span<const MonomialBasis::ProductTerm> MonomialBasis::products(int lhs, int order) const
{
    const int room = std::min(order, max_order_) - degree_[lhs];
    if (room < 0) return {};
    return {products_[lhs].data(), static_cast<std::size_t>(product_offset_[lhs][room])};
}

Jet::Jet(BasisPtr basis, int order)
    : basis_(std::move(basis)), order_(order), coeffs_(basis_->size_up_to(order), 0.0)
{
}

Jet Jet::constant(BasisPtr basis, double c)
{
    const int order = basis->max_order();
    Jet j(std::move(basis), order);
    j.coeffs_[0] = c;
    return j;
}

Jet Jet::variable(BasisPtr basis, int v, double value)
{
    Jet j = constant(basis, value);
    if (j.order_ >= 1) j.coeffs_[basis->raise(0, v)] = 1.0;
    return j;
}

Jet Jet::from_taylor(BasisPtr basis, int order, std::span<const double> coeffs)
{
    if (order < 0 || order > basis->max_order()) throw std::out_of_range("Jet::from_taylor: order outside basis");
    Jet j(std::move(basis), order);
    const std::size_t count = std::min(coeffs.size(), static_cast<std::size_t>(j.basis_->size_up_to(order)));
    std::copy_n(coeffs.begin(), count, j.coeffs_.begin());
    return j;
}

void Jet::require_same_basis(const Jet& o) const
{
    if (basis_ != o.basis_) throw std::logic_error("Jet: operands live on different bases");
}

double Jet::derivative(std::span<const int> vars) const
{
    if (static_cast<int>(vars.size()) > order_)
        throw std::out_of_range("Jet::derivative: requested order exceeds jet order");
    const int idx = basis_->index_of_multi_index(vars);
    return basis_->factorial_weight(idx) * coeffs_[idx];
}

Jet Jet::partial(int v) const
{
    if (order_ < 1) throw std::logic_error("Jet::partial: order-0 jet has no derivatives");
    Jet r(basis_, order_ - 1);
    const int count = basis_->size_up_to(order_ - 1);
    for (int i = 0; i < count; ++i) {
        const int up = basis_->raise(i, v);
        r.coeffs_[i] = (basis_->exponents(i)[v] + 1) * coeffs_[up];
    }
    return r;
}

Jet Jet::truncated(int order) const
{
    if (order >= order_) return *this;
    Jet r = *this;
    r.order_ = order;
    r.coeffs_.resize(basis_->size_up_to(order));
    return r;
}

bool Jet::is_zero() const
{
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
}

Jet Jet::operator-() const
{
    Jet r = *this;
    for (double& c : r.coeffs_) c = -c;
    return r;
}

Jet& Jet::operator+=(const Jet& o)
{
    require_same_basis(o);
    if (o.order_ < order_) *this = truncated(o.order_);
    const int count = basis_->size_up_to(order_);
    for (int i = 0; i < count; ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
}

Jet& Jet::operator-=(const Jet& o)
{
    require_same_basis(o);
    if (o.order_ < order_) *this = truncated(o.order_);
    const int count = basis_->size_up_to(order_);
    for (int i = 0; i < count; ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
}

Jet& Jet::operator*=(const Jet& o) { return *this = *this * o; }
Jet& Jet::operator/=(const Jet& o) { return *this = *this / o; }

Jet& Jet::operator+=(double c)
{
    coeffs_[0] += c;
    return *this;
}

Jet& Jet::operator-=(double c)
{
    coeffs_[0] -= c;
    return *this;
}

Jet& Jet::operator*=(double c)
{
    for (double& x : coeffs_) x *= c;
    return *this;
}

Jet& Jet::operator/=(double c)
{
    for (double& x : coeffs_) x /= c;
    return *this;
}

Jet operator*(const Jet& a, const Jet& b)
{
    a.require_same_basis(b);
    const int order = std::min(a.order_, b.order_);
    Jet r(a.basis_, order);
    const MonomialBasis& basis = *a.basis_;
    const int count = basis.size_up_to(order);
    for (int i = 0; i < count; ++i) {
        const double ca = a.coeffs_[i];
        if (ca == 0.0) continue;
        for (const auto& term : basis.products(i, order)) r.coeffs_[term.out] += ca * b.coeffs_[term.rhs];
    }
    return r;
}

Jet Jet::compose(const Jet& a, std::span<const double> phi_derivatives)
{
    Jet r(a.basis_, a.order_);
    r.coeffs_[0] = phi_derivatives[0];
    if (a.order_ == 0) return r;

    Jet delta = a;
    delta.coeffs_[0] = 0.0;
    Jet power = delta;
    double kfact = 1.0;
    for (int k = 1; k <= a.order_; ++k) {
        kfact *= k;
        const double w = phi_derivatives[k] / kfact;
        const int count = a.basis_->size_up_to(a.order_);
        for (int i = 1; i < count; ++i) r.coeffs_[i] += w * power.coeffs_[i];
        if (k < a.order_) power = power * delta;
    }
    return r;
}

Jet pow(const Jet& a, double r)
{
    const double a0 = a.value();
    const bool integer = std::floor(r) == r;
    if (a0 < 0.0 && !integer)
        throw SingularEvaluation("pow: negative base with non-integer exponent");
    if (a0 == 0.0 && a.order_ > 0 && !(integer && r >= a.order_))
        throw SingularEvaluation("pow: derivative singular at zero");
    std::vector<double> d(static_cast<std::size_t>(a.order_) + 1);
    double coeff = 1.0;
    for (int k = 0; k <= a.order_; ++k) {
        d[k] = coeff * std::pow(a0, r - k);
        coeff *= (r - k);
    }
    return Jet::compose(a, d);
}

Jet reciprocal(const Jet& a)
{
    const double a0 = a.value();
    if (a0 == 0.0) throw SingularEvaluation("division by a jet with zero value");
    std::vector<double> d(static_cast<std::size_t>(a.order_) + 1);
    double inv = 1.0 / a0;
    double term = inv;
    for (int k = 0; k <= a.order_; ++k) {
        d[k] = term;
        term *= -(k + 1) * inv;
    }
    return Jet::compose(a, d);
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

Jet operator/(double c, const Jet& a) { return reciprocal(a) * c; }

Jet sqrt(const Jet& a)
{
    const double a0 = a.value();
    if (a0 < 0.0 || (a0 == 0.0 && a.order_ > 0))
        throw SingularEvaluation("sqrt: argument not positive");
    return pow(a, 0.5);
}

Jet exp(const Jet& a)
{
    std::vector<double> d(static_cast<std::size_t>(a.order_) + 1, std::exp(a.value()));
    return Jet::compose(a, d);
}

Jet log(const Jet& a)
{
    const double a0 = a.value();
    if (a0 <= 0.0) throw SingularEvaluation("log: argument not positive");
    std::vector<double> d(static_cast<std::size_t>(a.order_) + 1);
    d[0] = std::log(a0);
    double term = 1.0 / a0;
    for (int k = 1; k <= a.order_; ++k) {
        d[k] = term;
        term *= -k / a0;
    }
    return Jet::compose(a, d);
}

Jet sin(const Jet& a)
{
    const double s = std::sin(a.value());
    const double c = std::cos(a.value());
    const double cycle[4] = {s, c, -s, -c};
    std::vector<double> d(static_cast<std::size_t>(a.order_) + 1);
    for (int k = 0; k <= a.order_; ++k) d[k] = cycle[k % 4];
    return Jet::compose(a, d);
}

Jet cos(const Jet& a)
{
    const double s = std::sin(a.value());
    const double c = std::cos(a.value());
    const double cycle[4] = {c, -s, -c, s};
    std::vector<double> d(static_cast<std::size_t>(a.order_) + 1);
    for (int k = 0; k <= a.order_; ++k) d[k] = cycle[k % 4];
    return Jet::compose(a, d);
}

Jet3 to_jet3(const Jet& jet)
{
    if (jet.order() < 3) throw std::logic_error("to_jet3: jet order below 3");
    const int m = jet.basis()->variables();
    Jet3 out;
    out.value = jet.value();
    out.grad = Eigen::VectorXd::Zero(m);
    out.hess = Eigen::MatrixXd::Zero(m, m);
    out.third = Tensor3(m);
    for (int i = 0; i < m; ++i) {
        out.grad[i] = jet.derivative({i});
        for (int j = i; j < m; ++j) {
            const double h = jet.derivative({i, j});
            out.hess(i, j) = h;
            out.hess(j, i) = h;
            for (int k = j; k < m; ++k) {
                const double t = jet.derivative({i, j, k});
                out.third(i, j, k) = t;
                out.third(i, k, j) = t;
                out.third(j, i, k) = t;
                out.third(j, k, i) = t;
                out.third(k, i, j) = t;
                out.third(k, j, i) = t;
            }
        }
    }
    return out;
}

} // namespace flab

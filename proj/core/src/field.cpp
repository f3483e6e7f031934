#include "flab/field.hpp"

#include <numeric>
#include <sstream>

namespace flab {

TangentPoint::TangentPoint(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y))
{
    if (x_.size() != y_.size() || x_.empty())
        throw std::invalid_argument("TangentPoint: x and y must have the same positive length");
    bool nonzero = false;
    for (double v : y_) nonzero = nonzero || v != 0.0;
    if (!nonzero)
        throw SingularEvaluation("point " + describe() +
                                 " lies on the zero section: y = 0 is excluded from the slit tangent bundle TM0 "
                                 "(t_k = y^i g_ki / F^2 is singular there)");
}

std::string TangentPoint::describe() const
{
    std::ostringstream os;
    os.precision(17);
    os << "(x=[";
    for (std::size_t i = 0; i < x_.size(); ++i) os << (i ? "," : "") << x_[i];
    os << "], y=[";
    for (std::size_t i = 0; i < y_.size(); ++i) os << (i ? "," : "") << y_[i];
    os << "])";
    return os.str();
}

ScalarField ScalarField::operator+(const ScalarField& o) const
{
    auto a = *this;
    auto b = o;
    return ScalarField(
        n_, [a, b](std::span<const double> x, std::span<const double> y) { return a(x, y) + b(x, y); },
        [a, b](std::span<const Jet> x, std::span<const Jet> y) { return a(x, y) + b(x, y); });
}

ScalarField ScalarField::operator*(const ScalarField& o) const
{
    auto a = *this;
    auto b = o;
    return ScalarField(
        n_, [a, b](std::span<const double> x, std::span<const double> y) { return a(x, y) * b(x, y); },
        [a, b](std::span<const Jet> x, std::span<const Jet> y) { return a(x, y) * b(x, y); });
}

ScalarField ScalarField::scaled(double c) const
{
    auto a = *this;
    return ScalarField(
        n_, [a, c](std::span<const double> x, std::span<const double> y) { return c * a(x, y); },
        [a, c](std::span<const Jet> x, std::span<const Jet> y) { return c * a(x, y); });
}

void seed_jets(const BasisPtr& basis, std::span<const double> x, std::span<const double> y,
               std::span<const int> slot_of, std::vector<Jet>& xj, std::vector<Jet>& yj)
{
    const int n = static_cast<int>(x.size());
    xj.clear();
    yj.clear();
    for (int k = 0; k < 2 * n; ++k) {
        const double v = k < n ? x[k] : y[k - n];
        Jet j = slot_of[k] >= 0 ? Jet::variable(basis, slot_of[k], v) : Jet::constant(basis, v);
        (k < n ? xj : yj).push_back(std::move(j));
    }
}

Jet eval_jet(const ScalarField& f, std::span<const double> x, std::span<const double> y,
             std::span<const int> active, int order)
{
    const int n = static_cast<int>(x.size());
    if (static_cast<int>(y.size()) != n || n != f.dimension())
        throw std::invalid_argument("eval_jet: point dimension does not match field dimension");
    if (active.empty()) throw std::invalid_argument("eval_jet: need at least one active variable");
    std::vector<int> slot_of(2 * n, -1);
    for (std::size_t s = 0; s < active.size(); ++s) {
        const int k = active[s];
        if (k < 0 || k >= 2 * n || slot_of[k] >= 0)
            throw std::invalid_argument("eval_jet: active variables must be distinct chart indices");
        slot_of[k] = static_cast<int>(s);
    }
    auto basis = MonomialBasis::make(static_cast<int>(active.size()), order);
    std::vector<Jet> xj, yj;
    seed_jets(basis, x, y, slot_of, xj, yj);
    return f(xj, yj);
}

Jet3 eval_jet3(const ScalarField& f, std::span<const double> x, std::span<const double> y,
               std::span<const int> active)
{
    return to_jet3(eval_jet(f, x, y, active, 3));
}

Jet3 eval_jet3(const ScalarField& f, const TangentPoint& p, std::span<const int> active)
{
    return eval_jet3(f, p.x(), p.y(), active);
}

std::vector<int> all_variables(int n)
{
    std::vector<int> v(2 * n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

std::vector<int> y_variables(int n)
{
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), n);
    return v;
}

std::vector<int> x_variables(int n)
{
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

} // namespace flab

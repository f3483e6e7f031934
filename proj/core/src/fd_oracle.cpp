#include "flab/fd_oracle.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace flab {

namespace {

struct Stencil {
    std::vector<int> offsets;
    std::vector<double> weights; // multiplied by 1 / h^r afterwards
};

Stencil central_stencil(int r)
{
    switch (r) {
    case 1: return {{-1, 1}, {-0.5, 0.5}};
    case 2: return {{-1, 0, 1}, {1.0, -2.0, 1.0}};
    case 3: return {{-2, -1, 1, 2}, {-0.5, 1.0, -1.0, 0.5}};
    default: throw std::invalid_argument("fd_oracle: supports multiplicities 1..3");
    }
}

double central_estimate(const std::function<double(std::span<const double>)>& f, std::span<const double> z,
                        const std::map<int, int>& mult, double h)
{
    std::vector<std::pair<int, Stencil>> stencils;
    int total = 0;
    for (auto [v, r] : mult) {
        stencils.emplace_back(v, central_stencil(r));
        total += r;
    }
    std::vector<double> pt(z.begin(), z.end());
    // Odometer over the tensor-product stencil.
    std::vector<std::size_t> pos(stencils.size(), 0);
    double sum = 0.0;
    while (true) {
        double w = 1.0;
        for (std::size_t s = 0; s < stencils.size(); ++s) {
            const auto& [v, st] = stencils[s];
            pt[v] = z[v] + st.offsets[pos[s]] * h;
            w *= st.weights[pos[s]];
        }
        sum += w * f(pt);
        std::size_t s = 0;
        for (; s < stencils.size(); ++s) {
            if (++pos[s] < stencils[s].second.offsets.size()) break;
            pos[s] = 0;
        }
        if (s == stencils.size()) break;
    }
    return sum / std::pow(h, total);
}

} // namespace

double fd_partial(const std::function<double(std::span<const double>)>& f, std::span<const double> z,
                  std::span<const int> vars, const FdOptions& opts)
{
    if (vars.empty()) return f(z);
    if (vars.size() > 3) throw std::invalid_argument("fd_oracle: order above 3 not supported");
    std::map<int, int> mult;
    for (int v : vars) {
        if (v < 0 || v >= static_cast<int>(z.size())) throw std::out_of_range("fd_oracle: variable index");
        ++mult[v];
    }
    const int r = static_cast<int>(vars.size());
    const double h = std::pow(opts.step, 2.0 / (r + 1));
    // Richardson table on h, h/2, h/4, ...; each level removes the next even power.
    std::vector<double> level;
    double hk = h;
    for (int l = 0; l <= opts.richardson_levels; ++l) {
        level.push_back(central_estimate(f, z, mult, hk));
        hk *= 0.5;
    }
    double factor = 4.0;
    for (int l = 1; l <= opts.richardson_levels; ++l) {
        for (std::size_t i = 0; i + 1 < level.size(); ++i)
            level[i] = (factor * level[i + 1] - level[i]) / (factor - 1.0);
        level.pop_back();
        factor *= 4.0;
    }
    return level.front();
}

double fd_oracle(const ScalarField& f, std::span<const double> x, std::span<const double> y,
                 std::span<const int> vars, const FdOptions& opts)
{
    const std::size_t n = x.size();
    std::vector<double> z(x.begin(), x.end());
    z.insert(z.end(), y.begin(), y.end());
    auto g = [&](std::span<const double> pt) { return f(pt.subspan(0, n), pt.subspan(n, n)); };
    return fd_partial(g, z, vars, opts);
}

double fd_oracle(const ScalarField& f, const TangentPoint& p, std::span<const int> vars, const FdOptions& opts)
{
    return fd_oracle(f, p.x(), p.y(), vars, opts);
}

} // namespace flab

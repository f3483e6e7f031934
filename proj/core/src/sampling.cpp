#include "flab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "flab/metric.hpp"

namespace flab {

std::uint64_t SplitMix64::next()
{
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double SplitMix64::normal()
{
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index)
{
    SplitMix64 mix(seed ^ (0xd1b54a32d192ed03ULL * (index + 1)));
    mix.next();
    return mix.next();
}

TangentPoint sample_point(SplitMix64& rng, int n, const DomainBox& domain, const SamplingPolicy& policy)
{
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
        const double lo = std::max(-policy.x_half_width, domain.lo[i]);
        const double hi = std::min(policy.x_half_width, domain.hi[i]);
        x[i] = rng.uniform(lo, hi);
    }
    double norm = 0.0;
    do {
        norm = 0.0;
        for (int i = 0; i < n; ++i) {
            y[i] = rng.normal();
            norm += y[i] * y[i];
        }
        norm = std::sqrt(norm);
    } while (norm < 1e-12);
    // Radius with density proportional to r^(n-1): uniform in shell volume.
    const double a = std::pow(policy.y_min, n);
    const double b = std::pow(policy.y_max, n);
    const double r = std::pow(a + (b - a) * rng.uniform(), 1.0 / n);
    for (double& v : y) v *= r / norm;
    return TangentPoint(std::move(x), std::move(y));
}

TangentPoint sample_point(std::uint64_t seed, std::uint64_t index, int n, const DomainBox& domain,
                          const SamplingPolicy& policy)
{
    SplitMix64 rng(stream_seed(seed, index));
    return sample_point(rng, n, domain, policy);
}

} // namespace flab

#pragma once

#include <cstdint>
#include <vector>

#include "flab/field.hpp"

namespace flab {

struct DomainBox;

/// splitmix64 generator; platform independent so sampled points are bit-identical everywhere.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Standard normal via Box-Muller.
    double normal();

private:
    std::uint64_t state_;
};

/// Seed of the independent stream used for sample `index` of a sweep seeded with `seed`.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

/// Sampling policy: x uniform in [-1, 1]^n (clipped to the domain), y uniform in the shell 0.5 <= |y| <= 2.
struct SamplingPolicy {
    double x_half_width = 1.0;
    double y_min = 0.5;
    double y_max = 2.0;
};

TangentPoint sample_point(SplitMix64& rng, int n, const DomainBox& domain, const SamplingPolicy& policy = {});

/// The `index`-th point of the deterministic sample sequence for `seed`.
TangentPoint sample_point(std::uint64_t seed, std::uint64_t index, int n, const DomainBox& domain,
                          const SamplingPolicy& policy = {});

} // namespace flab

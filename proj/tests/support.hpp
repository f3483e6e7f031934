#pragma once

#include <string>

#include <Eigen/Dense>

#include "flab/metric.hpp"
#include "flab/sampling.hpp"

namespace flab::testing {

inline std::string config_path(const std::string& name) { return std::string(FLAB_CONFIG_DIR) + "/" + name + ".json"; }

inline FinslerMetric config(const std::string& name) { return load_metric_file(config_path(name)).metric; }

inline TangentPoint point(std::uint64_t seed, std::uint64_t index, const FinslerMetric& M)
{
    return sample_point(seed, index, M.dimension(), M.domain());
}

/// G^i = 1/2 Gamma^i_jk y^j y^k from the Christoffel symbols of a(x), differentiated symbolically.
inline Eigen::VectorXd christoffel_spray(const FinslerMetric& M, const TangentPoint& p)
{
    const int n = M.dimension();
    Eigen::MatrixXd a(n, n);
    std::vector<Eigen::MatrixXd> da(n, Eigen::MatrixXd(n, n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            a(i, j) = M.a()[i][j](p.x());
            for (int k = 0; k < n; ++k) da[k](i, j) = M.a()[i][j].derivative(k)(p.x());
        }
    const Eigen::MatrixXd ainv = a.inverse();
    Eigen::VectorXd G = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double c = 0.0;
                for (int l = 0; l < n; ++l) c += ainv(i, l) * (da[j](l, k) + da[k](l, j) - da[l](j, k));
                G[i] += 0.25 * c * p.y()[j] * p.y()[k];
            }
    return G;
}

} // namespace flab::testing

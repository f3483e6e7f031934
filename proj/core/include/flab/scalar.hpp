#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "flab/errors.hpp"
#include "flab/jet.hpp"

namespace flab {

// Uniform access to double and Jet inside templated evaluators.

inline double value_of(double v) { return v; }
inline double value_of(const Jet& j) { return j.value(); }

/// A constant of the same kind as `like` (a plain double, or a jet on like's basis).
inline double constant_like(double, double c) { return c; }
inline Jet constant_like(const Jet& like, double c) { return Jet::constant(like.basis(), c); }

inline double reciprocal(double v)
{
    if (v == 0.0) throw SingularEvaluation("division by zero");
    return 1.0 / v;
}

/// sqrt that reports a non-positive argument instead of returning NaN.
inline double checked_sqrt(double v)
{
    if (v < 0.0) throw SingularEvaluation("sqrt: negative argument");
    return std::sqrt(v);
}
inline Jet checked_sqrt(const Jet& v) { return sqrt(v); }

/// Solves A x = b for a dense row-major n x n system (Gaussian elimination, partial pivoting on values).
template <class T>
std::vector<T> solve_dense(std::vector<T> a, std::vector<T> b, int n)
{
    const int cols = static_cast<int>(b.size()) / n;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(value_of(a[k * n + k]));
        for (int r = k + 1; r < n; ++r) {
            const double v = std::abs(value_of(a[r * n + k]));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best == 0.0) throw SingularEvaluation("solve_dense: singular matrix");
        if (piv != k) {
            for (int c = 0; c < n; ++c) std::swap(a[k * n + c], a[piv * n + c]);
            for (int c = 0; c < cols; ++c) std::swap(b[k * cols + c], b[piv * cols + c]);
        }
        const T inv = 1.0 / a[k * n + k];
        for (int r = k + 1; r < n; ++r) {
            const T f = a[r * n + k] * inv;
            for (int c = k; c < n; ++c) a[r * n + c] -= f * a[k * n + c];
            for (int c = 0; c < cols; ++c) b[r * cols + c] -= f * b[k * cols + c];
        }
    }
    for (int k = n - 1; k >= 0; --k) {
        const T inv = 1.0 / a[k * n + k];
        for (int c = 0; c < cols; ++c) {
            T acc = b[k * cols + c];
            for (int j = k + 1; j < n; ++j) acc -= a[k * n + j] * b[j * cols + c];
            b[k * cols + c] = acc * inv;
        }
    }
    return b;
}

/// Inverse of a dense row-major n x n matrix.
template <class T>
std::vector<T> invert_dense(const std::vector<T>& a, int n)
{
    std::vector<T> id;
    id.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) id.push_back(constant_like(a[0], i == j ? 1.0 : 0.0));
    return solve_dense(a, std::move(id), n);
}

} // namespace flab

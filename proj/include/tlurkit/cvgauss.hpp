#pragma once

// Two-mode Gaussian states in quadrature ordering (x1, p1, x2, p2) with
// [x_j, p_k] = i delta_jk. Covariances are symmetrised second moments, so the
// vacuum has variance 1/2 per quadrature and each mode obeys
// Var(x_j) + Var(p_j) >= 1. Means are carried for completeness; no
// criterion here depends on them.

#include <array>
#include <cstdint>

#include <Eigen/Dense>

#include "tlurkit/criteria.hpp"

namespace tlurkit {

using Vector4 = Eigen::Vector4d;
using Matrix4 = Eigen::Matrix4d;

class GaussianState {
public:
    /// Validates symmetry, cov + (i/2) Omega >= 0 and the per-mode uncertainty
    /// sums, all within 1e-9.
    GaussianState(Vector4 mean, Matrix4 cov);

    const Vector4& mean() const { return mean_; }
    const Matrix4& cov() const { return cov_; }

    /// Var(x_j) + Var(p_j) for mode j in {1, 2}.
    double mode_uncertainty(int mode) const;

private:
    Vector4 mean_;
    Matrix4 cov_;
};

GaussianState vacuum();

/// Var(x1 + x2) = Var(p1 - p2) = e^{-2r}.
GaussianState tmsv(double r);

/// Thermal modes with mean occupations n1, n2: variances (2n + 1)/2.
GaussianState thermal(double n1, double n2);

GaussianState displaced(const GaussianState& state, const Vector4& shift);

/// Classical Gaussian mixture of displaced random single-mode squeezed
/// thermal products. Separable by construction.
GaussianState random_separable_gaussian(std::uint64_t seed);

/// Variance of c^T xi, i.e. c^T cov c.
double combo_variance(const GaussianState& state, const Vector4& coeffs);

/// Var(u) + Var(v) >= a^2 + 1/a^2 with u = |a| x1 + x2 / a, v = |a| p1 - p2 / a.
CriterionReport eval_duan(const GaussianState& state, double a);

/// Duan form with M^2 added to the bound, where
/// M = |a| sqrt(Var x1 + Var p1 - 1) - sqrt(Var x2 + Var p2 - 1) / |a|.
CriterionReport eval_corollary2(const GaussianState& state, double a);

} // namespace tlurkit

#pragma once

#include "aicmab/efe.hpp"

namespace aicmab {

inline constexpr int kQuadratureNodes = 400;
inline constexpr double kQuadratureHalfWidth = 8.0;  // in principal-axis standard deviations

/// Reference EFE by dense tensor-grid integration (dimension ≤ 3).
///
/// Integrates the exact sigmoid likelihood against the belief with the
/// trapezoidal rule on ±8 standard deviations along each principal axis of the
/// covariance. `c_hat`
/// holds the true marginals C(o); the pragmatic/epistemic split uses the
/// exact posterior KL, so total = pragmatic − epistemic by construction.
/// The grid comes from its own eigendecomposition, independent of
/// GaussianBelief's cached Cholesky factor.
EfeBreakdown quadrature_oracle(const GaussianBeliefd& belief, const ContextVector& x, const PriorPreference& pref,
                               int nodes_per_axis = kQuadratureNodes);

}  // namespace aicmab

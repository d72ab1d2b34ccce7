#pragma once

#include <functional>
#include <span>

namespace benfrag::detail {

struct QuadratureResult
{
  double value = 0.0;
  double abs_error = 0.0;
};

/// Integral of f over (0, upper). f may carry an integrable singularity at 0
/// (handled by tanh-sinh on the first segment); the rest is split into
/// segments no wider than `segment` plus the given interior breakpoints and
/// integrated with adaptive Gauss-Kronrod.
QuadratureResult integrate_half_line(const std::function<double(double)>& f,
                                     double upper,
                                     double segment,
                                     std::span<const double> breakpoints = {});

} // namespace benfrag::detail

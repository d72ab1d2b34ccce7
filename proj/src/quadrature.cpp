#include "quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace benfrag::detail {

namespace {

constexpr double kAbsoluteTolerance = 1e-13;
constexpr double kRelativeFloor = 1e-12;
constexpr unsigned kMaxDepth = 12;

// Gauss-Kronrod bisection against an absolute error budget. Boost's own
// adaptive driver compares against a tolerance relative to the segment
// value, which never settles on oscillatory segments that nearly cancel.
QuadratureResult bisect(const std::function<double(double)>& f, double a, double b, double tol, unsigned depth)
{
  QuadratureResult r;
  double l1 = 0.0;
  r.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &r.abs_error, &l1);
  const double roundoff = kRelativeFloor * l1;
  if (r.abs_error <= std::max(tol, roundoff) || depth == 0)
    return r;
  const double mid = 0.5 * (a + b);
  const QuadratureResult left = bisect(f, a, mid, 0.5 * tol, depth - 1);
  const QuadratureResult right = bisect(f, mid, b, 0.5 * tol, depth - 1);
  return { left.value + right.value, left.abs_error + right.abs_error };
}

} // namespace

QuadratureResult integrate_half_line(const std::function<double(double)>& f,
                                     double upper,
                                     double segment,
                                     std::span<const double> breakpoints)
{
  std::vector<double> cuts;
  const double first = std::min(segment, upper);
  for (double x = first; x < upper; x += segment)
    cuts.push_back(x);
  for (double b : breakpoints)
    if (b > 0.0 && b < upper)
      cuts.push_back(b);
  cuts.push_back(upper);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  QuadratureResult total;
  {
    static thread_local boost::math::quadrature::tanh_sinh<double> ts;
    double err = 0.0;
    total.value = ts.integrate(f, 0.0, cuts.front(), 1e-14, &err);
    total.abs_error = err;
  }
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const double width = cuts[i] - cuts[i - 1];
    const QuadratureResult r = bisect(f, cuts[i - 1], cuts[i], kAbsoluteTolerance * width / upper, kMaxDepth);
    total.value += r.value;
    total.abs_error += r.abs_error;
  }
  return total;
}

} // namespace benfrag::detail

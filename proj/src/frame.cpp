#include "benfrag/frame.hpp"

#include "benfrag/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

namespace benfrag {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_d(std::size_t m, std::size_t d)
{
  if (d < 1 || d > m)
    throw ConfigError("frame dimension d must satisfy 1 <= d <= m");
}

// Calls visit(mask) for every d-subset of {0..m-1} in lexicographic order of
// the index sets.
template<class Visit>
void for_each_subset(std::size_t m, std::size_t d, Visit&& visit)
{
  std::vector<std::size_t> idx(d);
  std::iota(idx.begin(), idx.end(), std::size_t{ 0 });
  for (;;) {
    std::uint32_t mask = 0;
    for (std::size_t i : idx)
      mask |= std::uint32_t{ 1 } << i;
    visit(mask, idx);

    std::size_t k = d;
    while (k > 0 && idx[k - 1] == m - d + (k - 1))
      --k;
    if (k == 0)
      return;
    ++idx[k - 1];
    for (std::size_t j = k; j < d; ++j)
      idx[j] = idx[j - 1] + 1;
  }
}

} // namespace

namespace {

long double log_add_exp_ld(long double x, long double y, long double ln_b)
{
  if (x == -HUGE_VALL)
    return y;
  if (y == -HUGE_VALL)
    return x;
  const long double hi = std::max(x, y);
  const long double lo = std::min(x, y);
  return hi + std::log1p(std::exp((lo - hi) * ln_b)) / ln_b;
}

} // namespace

double log_add_exp(double x, double y, double base)
{
  return static_cast<double>(log_add_exp_ld(x, y, std::log(static_cast<long double>(base))));
}

double log_binomial(std::size_t m, std::size_t d, double base)
{
  const double ln_c = std::lgamma(static_cast<double>(m) + 1.0) - std::lgamma(static_cast<double>(d) + 1.0) -
                      std::lgamma(static_cast<double>(m - d) + 1.0);
  return ln_c / std::log(base);
}

std::vector<std::size_t> subset_indices(std::uint32_t mask)
{
  std::vector<std::size_t> out;
  while (mask != 0) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return out;
}

MaxProduct max_product_subset(std::span<const double> log_sides, std::size_t d)
{
  const std::size_t m = log_sides.size();
  check_d(m, d);

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{ 0 });
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return log_sides[a] > log_sides[b];
  });

  MaxProduct out;
  out.subset.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(d));
  std::sort(out.subset.begin(), out.subset.end());
  out.log_max = 0.0;
  for (std::size_t i : out.subset)
    out.log_max += log_sides[i];
  out.gap = d == m ? std::numeric_limits<double>::infinity() : log_sides[order[d - 1]] - log_sides[order[d]];
  return out;
}

double FrameVolumes::wafer_excess() const
{
  return std::expm1((log_vd - log_max) * std::log(base));
}

FrameVolumes frame_volumes(std::span<const double> log_sides, std::size_t d, double base, bool materialize_products)
{
  const std::size_t m = log_sides.size();
  check_d(m, d);

  FrameVolumes fv;
  fv.m = m;
  fv.d = d;
  fv.base = base;

  const long double ln_b = std::log(static_cast<long double>(base));
  long double log_vd = 0.0L;
  if (d == m) {
    // A single product: the plain left-to-right sum, with no rounding from
    // the recursion.
    double sum = 0.0;
    for (double s : log_sides)
      sum += s;
    log_vd = sum;
  } else {
    // e[j] = log_B e_j(first i sides), carried in extended precision.
    std::vector<long double> e(d + 1, -HUGE_VALL);
    e[0] = 0.0L;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = std::min(i + 1, d); j >= 1; --j)
        e[j] = log_add_exp_ld(e[j], e[j - 1] + log_sides[i], ln_b);
    }
    log_vd = e[d];
  }
  fv.log_vd = static_cast<double>(log_vd);
  fv.log_Vd = static_cast<double>(log_vd + static_cast<long double>(m - d) * std::log(2.0L) / ln_b);

  MaxProduct mx = max_product_subset(log_sides, d);
  fv.log_max = mx.log_max;
  fv.argmax_subset = std::move(mx.subset);
  fv.gap = mx.gap;

  if (materialize_products && m <= kMaxMaterializedDimension) {
    for_each_subset(m, d, [&](std::uint32_t mask, const std::vector<std::size_t>& idx) {
      double s = 0.0;
      for (std::size_t i : idx)
        s += log_sides[i];
      fv.log_products.push_back(SubsetProduct{ mask, s });
    });
  }
  return fv;
}

FrameVolumes frame_volumes(const LogBox& box, std::size_t d, double base, bool materialize_products)
{
  return frame_volumes(box.log_sides, d, base, materialize_products);
}

} // namespace benfrag

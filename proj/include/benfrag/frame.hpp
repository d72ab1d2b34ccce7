#pragma once

#include "benfrag/fragmentation.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace benfrag {

/// log_B(B^x + B^y), exact when either argument is -inf.
double log_add_exp(double x, double y, double base);

/// log_B of the binomial coefficient C(m, d).
double log_binomial(std::size_t m, std::size_t d, double base);

/// Largest number of sides for which every d-product is materialized.
inline constexpr std::size_t kMaxMaterializedDimension = 20;

struct SubsetProduct
{
  std::uint32_t mask = 0; ///< bit i set when side i belongs to the subset
  double log_product = 0.0;
};

/// Expands a subset mask into ascending 0-based indices.
std::vector<std::size_t> subset_indices(std::uint32_t mask);

struct MaxProduct
{
  std::vector<std::size_t> subset; ///< 0-based, ascending
  double log_max = 0.0;
  /// log_max minus the largest other d-product; +inf when d == m.
  double gap = 0.0;
};

/// The d largest sides, ties broken toward the lexicographically smallest
/// index set. The runner-up product swaps the smallest included side for the
/// largest excluded one, so gap = s_(d) - s_(d+1) in descending order.
MaxProduct max_product_subset(std::span<const double> log_sides, std::size_t d);

struct FrameVolumes
{
  std::size_t m = 0;
  std::size_t d = 0;
  double base = 10.0;
  /// Every d-product in combination order; empty when m exceeds
  /// kMaxMaterializedDimension or materialization was not requested.
  std::vector<SubsetProduct> log_products;
  double log_vd = 0.0;  ///< log_B of the elementary symmetric sum e_d(sides)
  double log_Vd = 0.0;  ///< log_vd + (m - d) log_B 2
  double log_max = 0.0; ///< log_B of the largest d-product
  std::vector<std::size_t> argmax_subset;
  double gap = 0.0;

  /// v_d / max - 1 = sum over non-maximal subsets of B^{log p_J - log_max}.
  double wafer_excess() const;
};

/// d-volume of a box in log-space through the elementary symmetric
/// recurrence e_j <- e_j + s_i e_{j-1}, each addition a log_add_exp.
FrameVolumes frame_volumes(std::span<const double> log_sides,
                           std::size_t d,
                           double base,
                           bool materialize_products = true);

FrameVolumes frame_volumes(const LogBox& box, std::size_t d, double base, bool materialize_products = true);

} // namespace benfrag

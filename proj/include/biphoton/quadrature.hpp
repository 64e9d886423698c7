#pragma once

#include <cmath>
#include <complex>
#include <span>

#include "biphoton/grid.hpp"

namespace biphoton {

using cplx = std::complex<double>;

namespace detail {

// Positions closer than this (in units of the step) to a node are read from the
// node directly, so shifts by whole steps stay exact.
inline constexpr double kNodeSnap = 1e-9;

struct Bracket {
  std::ptrdiff_t lo;  // left node, -1 when outside
  double frac;        // weight of the right node
};

template <typename Tag>
Bracket bracket(const UniformGrid<Tag>& g, double x) {
  const double t = (x - g.front()) / g.step();
  const double last = static_cast<double>(g.points() - 1);
  const double nearest = std::round(t);
  if (std::abs(t - nearest) < kNodeSnap) {
    if (nearest < 0.0 || nearest > last) return {-1, 0.0};
    auto k = static_cast<std::ptrdiff_t>(nearest);
    if (k == static_cast<std::ptrdiff_t>(g.points() - 1)) return {k - 1, 1.0};
    return {k, 0.0};
  }
  if (t < 0.0 || t > last) return {-1, 0.0};
  const double fl = std::floor(t);
  return {static_cast<std::ptrdiff_t>(fl), t - fl};
}

}  // namespace detail

/// Linear interpolation of samples on `g`, zero outside the grid.
template <typename Tag, typename T>
T interpolate(const UniformGrid<Tag>& g, std::span<const T> values, double x) {
  const auto b = detail::bracket(g, x);
  if (b.lo < 0) return T{};
  const auto k = static_cast<std::size_t>(b.lo);
  if (b.frac == 0.0) return values[k];
  if (b.frac == 1.0) return values[k + 1];
  return values[k] * (1.0 - b.frac) + values[k + 1] * b.frac;
}

/// Composite trapezoid sum of sampled values.
template <typename Tag, typename T>
T trapezoid(const UniformGrid<Tag>& g, std::span<const T> values) {
  T acc{};
  const std::size_t n = values.size();
  for (std::size_t k = 0; k < n; ++k) acc += values[k] * g.weight(k);
  return acc;
}

}  // namespace biphoton

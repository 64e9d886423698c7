#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "biphoton/errors.hpp"

namespace biphoton {

struct FrequencyTag {};
struct TimeTag {};

/// Uniform sampling of one real variable:
///   x_k = center - span/2 + k * span/(points-1),  k = 0 .. points-1.
/// The tag keeps frequency and time grids from being mixed up.
template <typename Tag>
class UniformGrid {
 public:
  UniformGrid(double center, double span, std::size_t points)
      : center_(center), span_(span), points_(points) {
    if (points_ < 2) throw PreconditionError("grid needs at least 2 points");
    if (!(span_ > 0.0) || !std::isfinite(span_)) throw PreconditionError("grid span must be positive");
    if (!std::isfinite(center_)) throw PreconditionError("grid center must be finite");
  }

  static UniformGrid from_range(double lo, double hi, std::size_t points) {
    return UniformGrid(0.5 * (lo + hi), hi - lo, points);
  }

  double center() const { return center_; }
  double span() const { return span_; }
  std::size_t points() const { return points_; }
  double step() const { return span_ / static_cast<double>(points_ - 1); }
  double front() const { return center_ - 0.5 * span_; }
  double back() const { return center_ + 0.5 * span_; }
  double operator[](std::size_t k) const { return front() + static_cast<double>(k) * step(); }

  bool contains(double x, double slack = 1e-12) const {
    const double tol = slack * span_;
    return x >= front() - tol && x <= back() + tol;
  }

  // Trapezoid weight of node k.
  double weight(std::size_t k) const {
    return (k == 0 || k + 1 == points_) ? 0.5 * step() : step();
  }

  /// True when the node set is mirror-symmetric about 0, i.e. x_k = -x_{N-1-k}.
  bool symmetric_about_zero() const { return std::abs(center_) <= 1e-12 * span_; }

  friend bool operator==(const UniformGrid& a, const UniformGrid& b) {
    return a.points_ == b.points_ && std::abs(a.center_ - b.center_) <= 1e-12 * a.span_ &&
           std::abs(a.span_ - b.span_) <= 1e-12 * a.span_;
  }

  std::string describe() const {
    return "center=" + std::to_string(center_) + ",span=" + std::to_string(span_) +
           ",points=" + std::to_string(points_);
  }

 private:
  double center_;
  double span_;
  std::size_t points_;
};

using FrequencyGrid = UniformGrid<FrequencyTag>;
using TimeGrid = UniformGrid<TimeTag>;

/// Grid with the same span and twice the resolution (2N-1 points), whose nodes
/// contain every (w_j + w_k)/2 of a grid with `points` nodes centered at
/// `center`. Used for the collective variables w+ and w- of a square JSA grid.
inline FrequencyGrid collective_grid(double center, double span, std::size_t points) {
  return FrequencyGrid(center, span, 2 * points - 1);
}

}  // namespace biphoton

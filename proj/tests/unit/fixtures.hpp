#pragma once

#include <cmath>
#include <numbers>

#include "biphoton/grid.hpp"
#include "biphoton/spectral.hpp"

namespace biphoton::testing {

inline constexpr double kPi = std::numbers::pi;

inline FrequencyGrid centered(std::size_t points = 513, double span = 16.0) { return {0.0, span, points}; }

// Square JSA grid around `center` with f+ / f- sampled on the matching collective grids.
struct FactoredSetup {
  FrequencyGrid grid;
  FrequencyGrid plus_grid;
  FrequencyGrid minus_grid;

  FactoredSetup(double center, std::size_t points, double span = 16.0)
      : grid(center, span, points),
        plus_grid(collective_grid(center, span, points)),
        minus_grid(collective_grid(0.0, span, points)) {}

  JointSpectralAmplitude jsa(const SpectralAmplitude& f_plus, const SpectralAmplitude& f_minus) const {
    return build_jsa_factored(f_plus, f_minus, grid, grid);
  }
};

}  // namespace biphoton::testing

#pragma once

#include <Eigen/Dense>

#include "biphoton/grid.hpp"
#include "biphoton/pipeline.hpp"
#include "biphoton/spectral.hpp"

namespace biphoton {

/// Brute-force linear-optics propagation of a two-photon state, independent of the
/// reduced formulas in interferometers.hpp.
///
/// The state is a first-quantized wavefunction psi_XY(x, y) over (port of photon 1,
/// port of photon 2) with X, Y in {a, b}. Bosons start as psi_ab = J/sqrt2,
/// psi_ba = J^T/sqrt2; fermions (FERMION_MZ) as psi_ab = F/sqrt2, psi_ba = -F^T/sqrt2.
/// Beam-splitter: a -> (a + b)/sqrt2, b -> (a - b)/sqrt2 per photon. Delay tau in
/// arm X multiplies by e^{i w tau}; a shift mu in arm X reads the amplitude at w + mu.
///
///   HOM        delay tau in arm b, shifts +mu/2 in arm a and -mu/2 in arm b, beam-splitter
///   MZ         beam-splitter, delay in a, beam-splitter
///   GMZ        beam-splitter, delay (and optional pi/4 phase) in a, shift in b, beam-splitter
///   NLMZ       beam-splitter, delay in a, frequency beam-splitter on one photon per arm,
///              beam-splitter
///   FERMION_MZ as MZ, fermionic initial state
struct PostselectedAmplitude {
  FrequencyGrid grid_s;
  FrequencyGrid grid_i;
  Eigen::MatrixXcd values;  // sqrt2 psi_ab: photon 1 in port a, photon 2 in port b
  Pipeline pipeline;
  double tau;
  double mu;
};

/// Throws PreconditionError for SINGLE_COUNT, mu != 0 on MZ / NLMZ / FERMION_MZ,
/// non-square grids, or grids above 1025 points per axis.
PostselectedAmplitude build_postselected(const JointSpectralAmplitude& jsa, Pipeline pipeline, double tau,
                                         double mu = 0.0, bool quarter_phase = false);

/// Double trapezoid of |values|^2.
double coincidence_from_amplitude(const PostselectedAmplitude& ps);

inline double oracle_coincidence(const JointSpectralAmplitude& jsa, Pipeline pipeline, double tau, double mu = 0.0,
                                 bool quarter_phase = false) {
  return coincidence_from_amplitude(build_postselected(jsa, pipeline, tau, mu, quarter_phase));
}

}  // namespace biphoton

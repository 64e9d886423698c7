#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "biphoton/grid.hpp"
#include "biphoton/pipeline.hpp"
#include "biphoton/spectral.hpp"

namespace biphoton {

// Scalar operations return the unclipped value; traces clip to [0, 1] and keep
// the largest clip.

// ---- HOM ----------------------------------------------------------------

/// 1/2 (1 - pi W(tau, mu/2)).
double hom(const SpectralAmplitude& f_minus, double tau, double mu);

/// Same quantity written through the parity parts of f-, weighted cos(pi a/2)
/// and sin(pi a/2):
///   1/2 (1 - c^2 W_S - s^2 W_S~ - c s (W_SS~ + W_S~S)).
double hom_decomposed(const SpectralAmplitude& f_minus, AnyonParameter a, double tau, double mu);

/// 1/2 (1 - cos(pi a) Re int_0^inf |f|^2 e^{i w tau} dw) for a phase-free envelope.
double hom_anyon_sign_phase(const SpectralAmplitude& f_envelope, AnyonParameter a, double tau);

/// 1/2 (1 - 2 Re[e^{-i pi a} int_0^inf |f|^2 e^{2 i w tau} dw]): the HOM trace of
/// the split-phase amplitude e^{i pi a sgn(w)/2} |f(w)|.
double hom_anyon_sign_phase_corrected(const SpectralAmplitude& f_envelope, AnyonParameter a, double tau);

struct SeriesResult {
  double value;
  double last_term;  // magnitude of the final term kept
  bool converged;    // last_term <= 1e-8 max(1, |sum|)
};

/// Power-law anyon spectrum |w|^a e^{-w^2/2 sigma^2} (phase e^{i pi a} for w<0):
///   1/2 (1 - Re[e^{i pi a} sum_n (2 i sigma tau)^n Gamma(a + (n+1)/2) / (n! Gamma(a + 1/2))]).
/// Requires n_terms <= 80 and |sigma tau| <= 1.5.
SeriesResult hom_anyon_series(double sigma, AnyonParameter a, double tau, int n_terms);

/// The same series with the coefficients exactly as they are usually quoted:
///   1/2 (1 - cos(pi a) Re sum_n (i^n / n!) sigma^{-(n+a)} 2^{a+n-1} Gamma((a+n+1)/2) (1 + (-1)^{n+a}) tau^n).
/// Kept for comparison; it lacks the amplitude normalization.
SeriesResult hom_anyon_series_as_printed(double sigma, AnyonParameter a, double tau, int n_terms);

// ---- Mach-Zehnder -------------------------------------------------------

/// (1/16) int int |(J + J^T)(e^{i(x+y)tau} + 1) + (e^{i x tau} + e^{i y tau})(J - J^T)|^2.
double mz_general(const JointSpectralAmplitude& jsa, double tau);

/// 1/2 (1 + P+(2 tau)).
double mz_symmetric(const SpectralAmplitude& f_plus, double tau);
/// 1/2 (1 + P-(2 tau)).
double mz_antisymmetric(const SpectralAmplitude& f_minus, double tau);
/// 1/2 (1 + cos^2(pi a/2) P+(2 tau) + sin^2(pi a/2) P-(2 tau)), P- from the envelope |f-|.
double mz_anyonic(const SpectralAmplitude& f_plus, const SpectralAmplitude& f_minus_envelope, AnyonParameter a,
                  double tau);

/// 1/2 (1 +- P_S(tau)) in port a (+) or b (-).
double single_count(const SpectralAmplitude& s, double tau, Port port);

/// MZ with a frequency beam-splitter between the arms. Requires a square grid
/// that contains 0.
double nonlinear_mz(const JointSpectralAmplitude& jsa, double tau);

/// (1/16) int int |(e^{i(x+y)tau} + 1)(F - F^T) + (e^{i x tau} + e^{i y tau})(F + F^T)|^2.
double fermion_mz(const JointSpectralAmplitude& f, double tau);

// ---- generalized Mach-Zehnder (delay tau in arm a, shift mu in arm b) ---

/// Direct quadrature of the four-term post-selected amplitude. `quarter_phase`
/// adds a pi/4 phase per photon in arm a. |mu| must not exceed a quarter of the span.
double gmz_general(const JointSpectralAmplitude& jsa, double tau, double mu, bool quarter_phase = false);

/// 1/2 (1 + Re F+(mu, 2 tau)), or 1/2 (1 - Im F+(mu, 2 tau)) with the quarter phase.
double gmz_symmetric(const SpectralAmplitude& f_plus, double tau, double mu, bool quarter_phase = false);
/// 1/2 (1 + Re(e^{i mu tau} F-(mu, 2 tau))); the quarter phase is global here.
double gmz_antisymmetric(const SpectralAmplitude& f_minus, double tau, double mu);

/// Product JSA gamma(x) beta(y). Exact in the shifted norms:
///   I = (1/16)[|U_g|^2 |U_b|^2 + |V_b|^2 |V_g|^2 + 2 Re(<V_b, U_g><V_g, U_b>)],
///   U_f(x) = f(x) e^{i x tau} + f(x + mu),  V_f(x) = f(x) e^{i x tau} - f(x + mu).
double gmz_separable(const SpectralAmplitude& gamma, const SpectralAmplitude& beta, double tau, double mu,
                     bool quarter_phase = false);

/// Factored JSA f+(w+) f-(w-) with any f- on a grid symmetric about 0 (f+ is
/// normalized here, f- is split into its even and odd parts).
double gmz_anyonic(const SpectralAmplitude& f_plus, const SpectralAmplitude& f_minus, double tau, double mu);

/// Largest norm lost by the shifted lookups J(x+mu, y), J(x, y+mu), J(x+mu, y+mu).
double gmz_shifted_mass_deficit(const JointSpectralAmplitude& jsa, double mu);

// ---- traces -------------------------------------------------------------

struct CoincidenceTrace {
  Pipeline pipeline;
  TimeGrid tau_grid;
  std::optional<FrequencyGrid> mu_grid;
  Eigen::MatrixXd values;  // rows index tau, one column per mu (a single column without mu)
  double max_clip = 0.0;
  double clipped_mass = 0.0;
  std::map<std::string, std::string> metadata;

  double at(std::size_t tau_index, std::size_t mu_index = 0) const {
    return values(static_cast<Eigen::Index>(tau_index), static_cast<Eigen::Index>(mu_index));
  }
};

CoincidenceTrace sweep(Pipeline pipeline, const TimeGrid& taus, const std::function<double(double)>& fn,
                       unsigned threads = 1);
CoincidenceTrace sweep(Pipeline pipeline, const TimeGrid& taus, const FrequencyGrid& mus,
                       const std::function<double(double, double)>& fn, unsigned threads = 1);

}  // namespace biphoton

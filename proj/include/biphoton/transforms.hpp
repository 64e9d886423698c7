#pragma once

#include <vector>

#include <Eigen/Dense>

#include "biphoton/grid.hpp"
#include "biphoton/spectral.hpp"

namespace biphoton {

/// pi W(tau, mu) sampled on a lattice; rows index tau, columns mu.
struct WignerMap {
  TimeGrid tau_grid;
  FrequencyGrid mu_grid;
  Eigen::MatrixXd values;
};

/// F(mu, t) sampled on a lattice; rows index t, columns mu. `tau_grid` holds the
/// time argument t of the transform itself.
struct StftMap {
  TimeGrid tau_grid;
  FrequencyGrid mu_grid;
  Eigen::MatrixXcd values;
};

/// P(tau) = int |f(w)|^2 cos(w tau) dw.
double cosine_fourier(const SpectralAmplitude& f, double tau);
std::vector<double> cosine_fourier(const SpectralAmplitude& f, const TimeGrid& taus);

/// pi W(tau, mu) = int e^{2 i w tau} f(mu - w) f*(mu + w) dw (real part; the
/// imaginary part is a quadrature residue).
double wigner(const SpectralAmplitude& f, double tau, double mu);
/// Cross distribution int e^{2 i w tau} f(mu - w) g*(mu + w) dw.
cplx cross_wigner(const SpectralAmplitude& f, const SpectralAmplitude& g, double tau, double mu);
WignerMap wigner_map(const SpectralAmplitude& f, const TimeGrid& taus, const FrequencyGrid& mus, unsigned threads = 1);

/// F(mu, t) = int f(w) f*(w + mu) e^{i w t} dw. The interferometer reductions
/// evaluate it at t = 2 tau.
cplx stft(const SpectralAmplitude& f, double mu, double t);
cplx cross_stft(const SpectralAmplitude& f, const SpectralAmplitude& g, double mu, double t);
StftMap stft_map(const SpectralAmplitude& f, const TimeGrid& ts, const FrequencyGrid& mus, unsigned threads = 1);

/// chi(mu, tau) = e^{i mu tau / 2} int f(w - mu) f*(w) e^{i w tau} dw.
cplx characteristic(const SpectralAmplitude& f, double mu, double tau);

struct IntensityEstimate {
  FrequencyGrid grid;
  std::vector<double> values;  // unit integral unless `zero`
  bool zero = false;            // the trace carried no oscillating part
  bool window_short = false;    // |I - 1/2| at the window edges above 1e-3
  double most_negative = 0.0;   // smallest raw value relative to the peak, before clipping
  bool negative_flag = false;   // most_negative < -1e-3
};

/// Pump intensity |f+(w)|^2 from a symmetric MZ trace I(tau):
///   |f+(w)|^2 ~ int (I(tau) - 1/2) cos(2 w tau) dtau, clipped at 0 and renormalized.
IntensityEstimate reconstruct_pump_intensity(const TimeGrid& taus, const std::vector<double>& trace,
                                             const FrequencyGrid& omegas);

/// f(mu) from f*(mu) = (1 / f(0)) int F(mu, t) dt, renormalized.
/// Throws PreconditionError when |f0| <= 1e-6.
SpectralAmplitude reconstruct_amplitude(const StftMap& map, cplx f0);

}  // namespace biphoton

#include "biphoton/transforms.hpp"

#include <algorithm>
#include <cmath>

#include "biphoton/errors.hpp"
#include "biphoton/parallel.hpp"

namespace biphoton {

double cosine_fourier(const SpectralAmplitude& f, double tau) {
  const auto& g = f.grid();
  const auto v = f.values();
  double acc = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) acc += std::norm(v[k]) * std::cos(g[k] * tau) * g.weight(k);
  return acc;
}

std::vector<double> cosine_fourier(const SpectralAmplitude& f, const TimeGrid& taus) {
  std::vector<double> out(taus.points());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = cosine_fourier(f, taus[j]);
  return out;
}

// Nodes x_k of f's grid play the role of mu - w, so f is read exactly and g is
// interpolated at mu + w = 2 mu - x_k.
cplx cross_wigner(const SpectralAmplitude& f, const SpectralAmplitude& g, double tau, double mu) {
  const auto& grid = f.grid();
  const auto v = f.values();
  cplx acc{};
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] == cplx{}) continue;
    const double x = grid[k];
    acc += std::polar(grid.weight(k), 2.0 * (mu - x) * tau) * v[k] * std::conj(g(2.0 * mu - x));
  }
  return acc;
}

double wigner(const SpectralAmplitude& f, double tau, double mu) { return cross_wigner(f, f, tau, mu).real(); }

WignerMap wigner_map(const SpectralAmplitude& f, const TimeGrid& taus, const FrequencyGrid& mus, unsigned threads) {
  Eigen::MatrixXd m(taus.points(), mus.points());
  parallel_for(taus.points(), threads, [&](std::size_t j) {
    for (std::size_t k = 0; k < mus.points(); ++k)
      m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = wigner(f, taus[j], mus[k]);
  });
  return {taus, mus, std::move(m)};
}

cplx cross_stft(const SpectralAmplitude& f, const SpectralAmplitude& g, double mu, double t) {
  const auto& grid = f.grid();
  const auto v = f.values();
  cplx acc{};
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] == cplx{}) continue;
    const double w = grid[k];
    acc += std::polar(grid.weight(k), w * t) * v[k] * std::conj(g(w + mu));
  }
  return acc;
}

cplx stft(const SpectralAmplitude& f, double mu, double t) { return cross_stft(f, f, mu, t); }

StftMap stft_map(const SpectralAmplitude& f, const TimeGrid& ts, const FrequencyGrid& mus, unsigned threads) {
  Eigen::MatrixXcd m(ts.points(), mus.points());
  parallel_for(ts.points(), threads, [&](std::size_t j) {
    for (std::size_t k = 0; k < mus.points(); ++k)
      m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = stft(f, mus[k], ts[j]);
  });
  return {ts, mus, std::move(m)};
}

cplx characteristic(const SpectralAmplitude& f, double mu, double tau) {
  const auto& grid = f.grid();
  const auto v = f.values();
  cplx acc{};
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] == cplx{}) continue;
    const double w = grid[k];
    acc += std::polar(grid.weight(k), w * tau) * f(w - mu) * std::conj(v[k]);
  }
  return std::polar(1.0, 0.5 * mu * tau) * acc;
}

IntensityEstimate reconstruct_pump_intensity(const TimeGrid& taus, const std::vector<double>& trace,
                                             const FrequencyGrid& omegas) {
  if (trace.size() != taus.points()) throw PreconditionError("trace length does not match its tau grid");
  IntensityEstimate out{omegas, std::vector<double>(omegas.points(), 0.0)};
  out.window_short = std::abs(trace.front() - 0.5) > 1e-3 || std::abs(trace.back() - 0.5) > 1e-3;

  for (std::size_t k = 0; k < omegas.points(); ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j < taus.points(); ++j)
      acc += (trace[j] - 0.5) * std::cos(2.0 * omegas[k] * taus[j]) * taus.weight(j);
    out.values[k] = acc;
  }
  const double peak = *std::max_element(out.values.begin(), out.values.end());
  const double low = *std::min_element(out.values.begin(), out.values.end());
  if (!(peak > 1e-12)) {
    std::fill(out.values.begin(), out.values.end(), 0.0);
    out.zero = true;
    return out;
  }
  out.most_negative = std::min(0.0, low / peak);
  out.negative_flag = out.most_negative < -1e-3;
  for (auto& v : out.values) v = std::max(v, 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < out.values.size(); ++k) total += out.values[k] * omegas.weight(k);
  for (auto& v : out.values) v /= total;
  return out;
}

SpectralAmplitude reconstruct_amplitude(const StftMap& map, cplx f0) {
  if (!(std::abs(f0) > 1e-6)) throw PreconditionError("reconstruction needs f(0) != 0");
  const auto& ts = map.tau_grid;
  std::vector<cplx> out(map.mu_grid.points());
  for (std::size_t k = 0; k < out.size(); ++k) {
    cplx acc{};
    for (std::size_t j = 0; j < ts.points(); ++j)
      acc += map.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) * ts.weight(j);
    out[k] = std::conj(acc / f0);
  }
  return SpectralAmplitude(map.mu_grid, std::move(out)).normalized();
}

}  // namespace biphoton

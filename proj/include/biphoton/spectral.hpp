#pragma once

#include <complex>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "biphoton/grid.hpp"
#include "biphoton/quadrature.hpp"

namespace biphoton {

/// Exchange-statistics parameter a in [0,1]; exchange phase e^{i pi a}.
/// a = 0 is bosonic, a = 1 fermionic.
class AnyonParameter {
 public:
  explicit AnyonParameter(double a);
  double value() const { return a_; }
  cplx exchange_phase() const;
  double symmetric_weight() const;      // cos(pi a / 2)
  double antisymmetric_weight() const;  // sin(pi a / 2)

 private:
  double a_;
};

/// Complex amplitude sampled on a uniform 1D frequency grid. Immutable.
class SpectralAmplitude {
 public:
  SpectralAmplitude(FrequencyGrid grid, std::vector<cplx> values);

  const FrequencyGrid& grid() const { return grid_; }
  std::span<const cplx> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  /// Linear interpolation, zero outside the grid.
  cplx operator()(double omega) const { return interpolate(grid_, values(), omega); }

  /// Trapezoid estimate of the L2 norm squared.
  double norm_squared() const;
  /// Unit L2 norm copy; throws PreconditionError for a (numerically) zero amplitude.
  SpectralAmplitude normalized() const;

  /// |f| sampled on the same grid.
  SpectralAmplitude modulus() const;
  /// f(w) e^{i slope w}.
  SpectralAmplitude with_linear_phase(double slope) const;

 private:
  FrequencyGrid grid_;
  std::vector<cplx> values_;
};

/// Complex amplitude on a (w_s, w_i) grid; rows index w_s, columns w_i.
class JointSpectralAmplitude {
 public:
  JointSpectralAmplitude(FrequencyGrid grid_s, FrequencyGrid grid_i, Eigen::MatrixXcd values);

  const FrequencyGrid& grid_s() const { return grid_s_; }
  const FrequencyGrid& grid_i() const { return grid_i_; }
  const Eigen::MatrixXcd& values() const { return values_; }
  bool is_square() const { return grid_s_ == grid_i_; }

  /// Bilinear interpolation, zero outside the grid.
  cplx operator()(double ws, double wi) const;

  /// Double-trapezoid estimate of the L2 norm squared.
  double norm_squared() const;
  JointSpectralAmplitude normalized() const;

 private:
  FrequencyGrid grid_s_;
  FrequencyGrid grid_i_;
  Eigen::MatrixXcd values_;
};

/// Bilinear interpolation of samples m(ws_k, wi_l), zero outside the grids.
cplx bilinear(const FrequencyGrid& grid_s, const FrequencyGrid& grid_i, const Eigen::MatrixXcd& m, double ws,
              double wi);

/// out(r, c) = m at (grid[r] + mu, column c): rows read at a shifted frequency,
/// linear interpolation, zero off-grid.
Eigen::MatrixXcd shift_rows(const Eigen::MatrixXcd& m, const FrequencyGrid& grid, double mu);
/// out(r, c) = m at (row r, grid[c] + mu).
Eigen::MatrixXcd shift_cols(const Eigen::MatrixXcd& m, const FrequencyGrid& grid, double mu);

/// Double-trapezoid inner product <a, b> = sum conj(a) b w_s w_i over a shared grid.
cplx inner_product(const JointSpectralAmplitude& a, const JointSpectralAmplitude& b);
/// Trapezoid inner product <f, g> = int conj(f) g over f's grid (g interpolated).
cplx inner_product(const SpectralAmplitude& f, const SpectralAmplitude& g);

// ---- constructors -------------------------------------------------------

/// Samples `fn` on the grid without normalization.
SpectralAmplitude sample(const FrequencyGrid& grid, const std::function<cplx(double)>& fn);

/// Normalized Gaussian (pi sigma^2)^{-1/4} exp(-(w-center)^2 / 2 sigma^2).
/// Throws when the grid does not cover center +- 3 sigma.
SpectralAmplitude build_gaussian(double center, double sigma, const FrequencyGrid& grid);

/// sgn(w)^a e^{-w^2/2 sigma^2}: envelope for w>0, e^{i pi a} envelope for w<0,
/// and 0 at w=0 unless a=0.
SpectralAmplitude build_sign_alpha_gaussian(AnyonParameter a, double sigma, const FrequencyGrid& grid);

/// w^a e^{-w^2/2 sigma^2} on the principal branch: |w|^a envelope for w>0,
/// e^{i pi a} |w|^a envelope for w<0.
SpectralAmplitude build_power_alpha_gaussian(AnyonParameter a, double sigma, const FrequencyGrid& grid);

/// e^{i pi a sgn(w)/2} e^{-w^2/2 sigma^2}: the split-phase variant whose exchange
/// ratio f(-w)/f(w) is e^{-i pi a} for w>0. Zero at w=0 unless a=0.
SpectralAmplitude build_split_phase_gaussian(AnyonParameter a, double sigma, const FrequencyGrid& grid);

/// Odd pair g(w - center) - g(w + center) of Gaussians with width sigma.
SpectralAmplitude build_odd_gaussian_pair(double center, double sigma, const FrequencyGrid& grid);

// ---- parity -------------------------------------------------------------

struct SymmetryDecomposition {
  SpectralAmplitude symmetric;      // S, unit norm unless symmetric_zero
  SpectralAmplitude antisymmetric;  // S~, unit norm unless antisymmetric_zero
  double symmetric_weight;          // ||f_sym|| / ||f||
  double antisymmetric_weight;      // ||f_anti|| / ||f||
  bool symmetric_zero;
  bool antisymmetric_zero;
};

/// Splits f(w) into even and odd parts about w = 0. The grid must be mirror
/// symmetric about zero.
SymmetryDecomposition symmetry_decompose(const SpectralAmplitude& f);

/// Unnormalized even / odd parts (f(w) +- f(-w))/2 on the same grid.
std::pair<SpectralAmplitude, SpectralAmplitude> parity_parts(const SpectralAmplitude& f);

// ---- joint amplitudes ---------------------------------------------------

/// JSA(ws, wi) = f+((ws+wi)/2) f-((ws-wi)/2), normalized. The collective grids
/// must cover the ranges spanned by grid_s and grid_i.
JointSpectralAmplitude build_jsa_factored(const SpectralAmplitude& f_plus, const SpectralAmplitude& f_minus,
                                          const FrequencyGrid& grid_s, const FrequencyGrid& grid_i);

/// JSA(ws, wi) = gamma(ws) beta(wi), normalized.
JointSpectralAmplitude build_jsa_separable(const SpectralAmplitude& gamma, const SpectralAmplitude& beta,
                                           const FrequencyGrid& grid_s, const FrequencyGrid& grid_i);

/// JSA(wi, ws). Requires identical grids.
JointSpectralAmplitude exchange(const JointSpectralAmplitude& jsa);

struct FbsRotation {
  JointSpectralAmplitude jsa;
  double clipped_fraction;  // share of the input norm that fell outside the grid
};

/// Frequency beam-splitter: out(ws, wi) = JSA((ws+wi)/2, (ws-wi)/2), renormalized.
FbsRotation fbs_rotate(const JointSpectralAmplitude& jsa);

/// Entanglement entropy of the Schmidt spectrum, -sum p log p.
double schmidt_entropy(const JointSpectralAmplitude& jsa);

}  // namespace biphoton

#include "biphoton/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "biphoton/errors.hpp"

namespace biphoton {

namespace {

constexpr double kZeroNorm = 1e-24;

void require_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw PreconditionError("sigma must be positive and finite");
}

double envelope(double w, double sigma) { return std::exp(-0.5 * w * w / (sigma * sigma)); }

}  // namespace

AnyonParameter::AnyonParameter(double a) : a_(a) {
  if (!(a >= 0.0 && a <= 1.0)) throw PreconditionError("anyon parameter must lie in [0, 1]");
}

cplx AnyonParameter::exchange_phase() const { return std::polar(1.0, std::numbers::pi * a_); }
double AnyonParameter::symmetric_weight() const { return std::cos(0.5 * std::numbers::pi * a_); }
double AnyonParameter::antisymmetric_weight() const { return std::sin(0.5 * std::numbers::pi * a_); }

SpectralAmplitude::SpectralAmplitude(FrequencyGrid grid, std::vector<cplx> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.points()) throw PreconditionError("amplitude size does not match its grid");
  for (const auto& v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw PreconditionError("amplitude has non-finite samples");
}

double SpectralAmplitude::norm_squared() const {
  double acc = 0.0;
  for (std::size_t k = 0; k < values_.size(); ++k) acc += std::norm(values_[k]) * grid_.weight(k);
  return acc;
}

SpectralAmplitude SpectralAmplitude::normalized() const {
  const double n2 = norm_squared();
  if (!(n2 > kZeroNorm)) throw PreconditionError("cannot normalize a zero amplitude");
  const double s = 1.0 / std::sqrt(n2);
  std::vector<cplx> v(values_);
  for (auto& x : v) x *= s;
  return {grid_, std::move(v)};
}

SpectralAmplitude SpectralAmplitude::modulus() const {
  std::vector<cplx> v(values_.size());
  std::transform(values_.begin(), values_.end(), v.begin(), [](cplx x) { return cplx(std::abs(x), 0.0); });
  return {grid_, std::move(v)};
}

SpectralAmplitude SpectralAmplitude::with_linear_phase(double slope) const {
  std::vector<cplx> v(values_);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] *= std::polar(1.0, slope * grid_[k]);
  return {grid_, std::move(v)};
}

JointSpectralAmplitude::JointSpectralAmplitude(FrequencyGrid grid_s, FrequencyGrid grid_i, Eigen::MatrixXcd values)
    : grid_s_(grid_s), grid_i_(grid_i), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.rows()) != grid_s_.points() ||
      static_cast<std::size_t>(values_.cols()) != grid_i_.points())
    throw PreconditionError("JSA shape does not match its grids");
  if (!values_.allFinite()) throw PreconditionError("JSA has non-finite samples");
}

cplx bilinear(const FrequencyGrid& grid_s, const FrequencyGrid& grid_i, const Eigen::MatrixXcd& m, double ws,
              double wi) {
  const auto bs = detail::bracket(grid_s, ws);
  const auto bi = detail::bracket(grid_i, wi);
  if (bs.lo < 0 || bi.lo < 0) return {};
  const auto r = static_cast<Eigen::Index>(bs.lo);
  const auto c = static_cast<Eigen::Index>(bi.lo);
  auto at = [&](Eigen::Index dr, Eigen::Index dc, double w) -> cplx {
    return w == 0.0 ? cplx{} : m(r + dr, c + dc) * w;
  };
  return at(0, 0, (1 - bs.frac) * (1 - bi.frac)) + at(1, 0, bs.frac * (1 - bi.frac)) +
         at(0, 1, (1 - bs.frac) * bi.frac) + at(1, 1, bs.frac * bi.frac);
}

Eigen::MatrixXcd shift_rows(const Eigen::MatrixXcd& m, const FrequencyGrid& grid, double mu) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m.rows(), m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const auto b = detail::bracket(grid, grid[static_cast<std::size_t>(r)] + mu);
    if (b.lo < 0) continue;
    const auto k = static_cast<Eigen::Index>(b.lo);
    if (b.frac == 0.0)
      out.row(r) = m.row(k);
    else if (b.frac == 1.0)
      out.row(r) = m.row(k + 1);
    else
      out.row(r) = (1.0 - b.frac) * m.row(k) + b.frac * m.row(k + 1);
  }
  return out;
}

Eigen::MatrixXcd shift_cols(const Eigen::MatrixXcd& m, const FrequencyGrid& grid, double mu) {
  return shift_rows(m.transpose(), grid, mu).transpose();
}

cplx JointSpectralAmplitude::operator()(double ws, double wi) const {
  return bilinear(grid_s_, grid_i_, values_, ws, wi);
}

double JointSpectralAmplitude::norm_squared() const {
  double acc = 0.0;
  for (Eigen::Index r = 0; r < values_.rows(); ++r) {
    double row = 0.0;
    for (Eigen::Index c = 0; c < values_.cols(); ++c)
      row += std::norm(values_(r, c)) * grid_i_.weight(static_cast<std::size_t>(c));
    acc += row * grid_s_.weight(static_cast<std::size_t>(r));
  }
  return acc;
}

JointSpectralAmplitude JointSpectralAmplitude::normalized() const {
  const double n2 = norm_squared();
  if (!(n2 > kZeroNorm)) throw PreconditionError("cannot normalize a zero JSA");
  return {grid_s_, grid_i_, values_ / std::sqrt(n2)};
}

cplx inner_product(const JointSpectralAmplitude& a, const JointSpectralAmplitude& b) {
  if (!(a.grid_s() == b.grid_s()) || !(a.grid_i() == b.grid_i()))
    throw PreconditionError("inner product needs JSAs on the same grid");
  cplx acc{};
  const auto& A = a.values();
  const auto& B = b.values();
  for (Eigen::Index r = 0; r < A.rows(); ++r) {
    cplx row{};
    for (Eigen::Index c = 0; c < A.cols(); ++c)
      row += std::conj(A(r, c)) * B(r, c) * a.grid_i().weight(static_cast<std::size_t>(c));
    acc += row * a.grid_s().weight(static_cast<std::size_t>(r));
  }
  return acc;
}

cplx inner_product(const SpectralAmplitude& f, const SpectralAmplitude& g) {
  cplx acc{};
  const auto& grid = f.grid();
  for (std::size_t k = 0; k < f.size(); ++k) acc += std::conj(f.values()[k]) * g(grid[k]) * grid.weight(k);
  return acc;
}

SpectralAmplitude sample(const FrequencyGrid& grid, const std::function<cplx(double)>& fn) {
  std::vector<cplx> v(grid.points());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = fn(grid[k]);
  return {grid, std::move(v)};
}

SpectralAmplitude build_gaussian(double center, double sigma, const FrequencyGrid& grid) {
  require_sigma(sigma);
  if (!grid.contains(center - 3.0 * sigma, 0.0) || !grid.contains(center + 3.0 * sigma, 0.0))
    throw ConfigError("grid does not cover center +- 3 sigma");
  return sample(grid, [&](double w) { return cplx(envelope(w - center, sigma), 0.0); }).normalized();
}

SpectralAmplitude build_sign_alpha_gaussian(AnyonParameter a, double sigma, const FrequencyGrid& grid) {
  require_sigma(sigma);
  const cplx phase = a.exchange_phase();
  const bool boson = a.value() == 0.0;
  return sample(grid, [&](double w) -> cplx {
           const double e = envelope(w, sigma);
           if (w > 0.0) return e;
           if (w < 0.0) return phase * e;
           return boson ? cplx(e) : cplx{};
         })
      .normalized();
}

SpectralAmplitude build_power_alpha_gaussian(AnyonParameter a, double sigma, const FrequencyGrid& grid) {
  require_sigma(sigma);
  const cplx phase = a.exchange_phase();
  const double p = a.value();
  return sample(grid, [&](double w) -> cplx {
           const double m = (p == 0.0 ? 1.0 : std::pow(std::abs(w / sigma), p)) * envelope(w, sigma);
           return w < 0.0 ? phase * m : cplx(m);
         })
      .normalized();
}

SpectralAmplitude build_split_phase_gaussian(AnyonParameter a, double sigma, const FrequencyGrid& grid) {
  require_sigma(sigma);
  const cplx half = std::polar(1.0, 0.5 * std::numbers::pi * a.value());
  const bool boson = a.value() == 0.0;
  return sample(grid, [&](double w) -> cplx {
           const double e = envelope(w, sigma);
           if (w > 0.0) return half * e;
           if (w < 0.0) return std::conj(half) * e;
           return boson ? cplx(e) : cplx{};
         })
      .normalized();
}

SpectralAmplitude build_odd_gaussian_pair(double center, double sigma, const FrequencyGrid& grid) {
  require_sigma(sigma);
  if (!grid.contains(center + 3.0 * sigma, 0.0) || !grid.contains(-center - 3.0 * sigma, 0.0))
    throw PreconditionError("grid does not cover the Gaussian pair");
  return sample(grid, [&](double w) { return cplx(envelope(w - center, sigma) - envelope(w + center, sigma)); })
      .normalized();
}

std::pair<SpectralAmplitude, SpectralAmplitude> parity_parts(const SpectralAmplitude& f) {
  if (!f.grid().symmetric_about_zero()) throw PreconditionError("parity split needs a grid symmetric about 0");
  const std::size_t n = f.size();
  std::vector<cplx> even(n), odd(n);
  const auto v = f.values();
  for (std::size_t k = 0; k < n; ++k) {
    even[k] = 0.5 * (v[k] + v[n - 1 - k]);
    odd[k] = 0.5 * (v[k] - v[n - 1 - k]);
  }
  return {SpectralAmplitude(f.grid(), std::move(even)), SpectralAmplitude(f.grid(), std::move(odd))};
}

SymmetryDecomposition symmetry_decompose(const SpectralAmplitude& f) {
  const double total = f.norm_squared();
  if (!(total > kZeroNorm)) throw PreconditionError("cannot decompose a zero amplitude");
  auto [even, odd] = parity_parts(f);
  const double ne = even.norm_squared();
  const double no = odd.norm_squared();
  const double tiny = 1e-20 * total;
  const bool ez = ne <= tiny;
  const bool oz = no <= tiny;
  return SymmetryDecomposition{ez ? even : even.normalized(),
                               oz ? odd : odd.normalized(),
                               std::sqrt(ne / total),
                               std::sqrt(no / total),
                               ez,
                               oz};
}

JointSpectralAmplitude build_jsa_factored(const SpectralAmplitude& f_plus, const SpectralAmplitude& f_minus,
                                          const FrequencyGrid& grid_s, const FrequencyGrid& grid_i) {
  const double tol = 1e-9;
  const double sum_lo = 0.5 * (grid_s.front() + grid_i.front());
  const double sum_hi = 0.5 * (grid_s.back() + grid_i.back());
  const double dif_lo = 0.5 * (grid_s.front() - grid_i.back());
  const double dif_hi = 0.5 * (grid_s.back() - grid_i.front());
  if (!f_plus.grid().contains(sum_lo, tol) || !f_plus.grid().contains(sum_hi, tol) ||
      !f_minus.grid().contains(dif_lo, tol) || !f_minus.grid().contains(dif_hi, tol))
    throw PreconditionError("collective grids do not cover the JSA grid");
  Eigen::MatrixXcd m(grid_s.points(), grid_i.points());
  for (std::size_t r = 0; r < grid_s.points(); ++r)
    for (std::size_t c = 0; c < grid_i.points(); ++c) {
      const double ws = grid_s[r];
      const double wi = grid_i[c];
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          f_plus(0.5 * (ws + wi)) * f_minus(0.5 * (ws - wi));
    }
  return JointSpectralAmplitude(grid_s, grid_i, std::move(m)).normalized();
}

JointSpectralAmplitude build_jsa_separable(const SpectralAmplitude& gamma, const SpectralAmplitude& beta,
                                           const FrequencyGrid& grid_s, const FrequencyGrid& grid_i) {
  Eigen::VectorXcd g(grid_s.points()), b(grid_i.points());
  for (std::size_t r = 0; r < grid_s.points(); ++r) g(static_cast<Eigen::Index>(r)) = gamma(grid_s[r]);
  for (std::size_t c = 0; c < grid_i.points(); ++c) b(static_cast<Eigen::Index>(c)) = beta(grid_i[c]);
  return JointSpectralAmplitude(grid_s, grid_i, g * b.transpose()).normalized();
}

JointSpectralAmplitude exchange(const JointSpectralAmplitude& jsa) {
  if (!jsa.is_square()) throw PreconditionError("exchange needs identical signal and idler grids");
  return {jsa.grid_s(), jsa.grid_i(), jsa.values().transpose()};
}

FbsRotation fbs_rotate(const JointSpectralAmplitude& jsa) {
  const auto& gs = jsa.grid_s();
  const auto& gi = jsa.grid_i();
  Eigen::MatrixXcd m(gs.points(), gi.points());
  for (std::size_t r = 0; r < gs.points(); ++r)
    for (std::size_t c = 0; c < gi.points(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          jsa(0.5 * (gs[r] + gi[c]), 0.5 * (gs[r] - gi[c]));
  JointSpectralAmplitude rotated(gs, gi, std::move(m));
  const double kept = rotated.norm_squared() / (2.0 * jsa.norm_squared());
  return {rotated.normalized(), std::clamp(1.0 - kept, 0.0, 1.0)};
}

double schmidt_entropy(const JointSpectralAmplitude& jsa) {
  const auto& gs = jsa.grid_s();
  const auto& gi = jsa.grid_i();
  Eigen::MatrixXcd w = jsa.values();
  for (Eigen::Index r = 0; r < w.rows(); ++r) w.row(r) *= std::sqrt(gs.weight(static_cast<std::size_t>(r)));
  for (Eigen::Index c = 0; c < w.cols(); ++c) w.col(c) *= std::sqrt(gi.weight(static_cast<std::size_t>(c)));
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(w);
  const Eigen::VectorXd s = svd.singularValues();
  const double total = s.squaredNorm();
  if (!(total > kZeroNorm)) throw PreconditionError("Schmidt entropy of a zero JSA");
  double h = 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    const double p = s(k) * s(k) / total;
    if (p > 1e-300) h -= p * std::log(p);
  }
  return h;
}

}  // namespace biphoton

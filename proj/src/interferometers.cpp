#include "biphoton/interferometers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include "biphoton/errors.hpp"
#include "biphoton/parallel.hpp"
#include "biphoton/transforms.hpp"

namespace biphoton {

std::string to_string(Pipeline p) {
  switch (p) {
    case Pipeline::HOM: return "HOM";
    case Pipeline::MZ: return "MZ";
    case Pipeline::NLMZ: return "NLMZ";
    case Pipeline::GMZ: return "GMZ";
    case Pipeline::FERMION_MZ: return "FERMION_MZ";
    case Pipeline::SINGLE_COUNT: return "SINGLE_COUNT";
  }
  return "?";
}

Pipeline pipeline_from_string(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
  for (auto p : {Pipeline::HOM, Pipeline::MZ, Pipeline::NLMZ, Pipeline::GMZ, Pipeline::FERMION_MZ,
                 Pipeline::SINGLE_COUNT})
    if (to_string(p) == upper) return p;
  throw ConfigError("unknown pipeline '" + std::string(name) + "'");
}

namespace {

constexpr double kPi = std::numbers::pi;

void require_square(const JointSpectralAmplitude& jsa, const char* who) {
  if (!jsa.is_square()) throw PreconditionError(std::string(who) + " needs identical signal and idler grids");
}

std::vector<cplx> phases(const FrequencyGrid& g, double tau) {
  std::vector<cplx> e(g.points());
  for (std::size_t k = 0; k < e.size(); ++k) e[k] = std::polar(1.0, g[k] * tau);
  return e;
}

// Double trapezoid of |C(r, c)|^2 with C supplied element-wise.
template <typename Amp>
double integrate_modulus(const FrequencyGrid& g, Amp&& amp) {
  const auto n = static_cast<Eigen::Index>(g.points());
  double acc = 0.0;
  for (Eigen::Index r = 0; r < n; ++r) {
    double row = 0.0;
    for (Eigen::Index c = 0; c < n; ++c) row += std::norm(amp(r, c)) * g.weight(static_cast<std::size_t>(c));
    acc += row * g.weight(static_cast<std::size_t>(r));
  }
  return acc;
}

// Half-line trapezoid of |f|^2 e^{i w t}, w >= 0, on a grid containing 0 as a node
// or not; the node at 0 (if any) gets half weight.
cplx half_line(const SpectralAmplitude& f, double t) {
  const auto& g = f.grid();
  const auto v = f.values();
  const double h = g.step();
  cplx acc{};
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double w = g[k];
    if (w < -1e-9 * h) continue;
    const double weight = std::abs(w) <= 1e-9 * h ? 0.5 * h : g.weight(k);
    acc += std::polar(std::norm(v[k]) * weight, w * t);
  }
  return acc;
}

double shifted_norm(const SpectralAmplitude& f, double shift) {
  const auto& g = f.grid();
  double acc = 0.0;
  for (std::size_t k = 0; k < g.points(); ++k) acc += std::norm(f(g[k] + shift)) * g.weight(k);
  return acc;
}

}  // namespace

double hom(const SpectralAmplitude& f_minus, double tau, double mu) {
  return 0.5 * (1.0 - wigner(f_minus, tau, 0.5 * mu));
}

double hom_decomposed(const SpectralAmplitude& f_minus, AnyonParameter a, double tau, double mu) {
  const auto d = symmetry_decompose(f_minus);
  const double c = a.symmetric_weight();
  const double s = a.antisymmetric_weight();
  const double m = 0.5 * mu;
  cplx w{};
  if (!d.symmetric_zero) w += c * c * cross_wigner(d.symmetric, d.symmetric, tau, m);
  if (!d.antisymmetric_zero) w += s * s * cross_wigner(d.antisymmetric, d.antisymmetric, tau, m);
  if (!d.symmetric_zero && !d.antisymmetric_zero)
    w += c * s *
         (cross_wigner(d.symmetric, d.antisymmetric, tau, m) + cross_wigner(d.antisymmetric, d.symmetric, tau, m));
  return 0.5 * (1.0 - w.real());
}

double hom_anyon_sign_phase(const SpectralAmplitude& f_envelope, AnyonParameter a, double tau) {
  return 0.5 * (1.0 - std::cos(kPi * a.value()) * half_line(f_envelope, tau).real());
}

double hom_anyon_sign_phase_corrected(const SpectralAmplitude& f_envelope, AnyonParameter a, double tau) {
  const cplx h = std::polar(1.0, -kPi * a.value()) * half_line(f_envelope, 2.0 * tau);
  return 0.5 * (1.0 - 2.0 * h.real());
}

namespace {

void check_series_args(double sigma, double tau, int n_terms) {
  if (!(sigma > 0.0)) throw PreconditionError("series needs sigma > 0");
  if (n_terms < 1 || n_terms > 80) throw PreconditionError("series needs 1 <= n_terms <= 80");
  if (!(std::abs(sigma * tau) <= 1.5)) throw PreconditionError("series only evaluated for |sigma tau| <= 1.5");
}

cplx i_pow(int n) {
  switch (n % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

// x^n for real x, with 0^0 = 1.
double real_pow(double x, int n) { return n == 0 ? 1.0 : std::pow(x, n); }

}  // namespace

SeriesResult hom_anyon_series(double sigma, AnyonParameter a, double tau, int n_terms) {
  check_series_args(sigma, tau, n_terms);
  const double av = a.value();
  const double x = 2.0 * sigma * tau;
  const double lg0 = std::lgamma(av + 0.5);
  cplx sum{};
  double last = 0.0;
  for (int n = 0; n < n_terms; ++n) {
    const double mag = std::exp(std::lgamma(av + 0.5 * (n + 1)) - lg0 - std::lgamma(n + 1.0));
    const cplx term = i_pow(n) * real_pow(x, n) * mag;
    sum += term;
    last = std::abs(term);
  }
  const double value = 0.5 * (1.0 - (std::polar(1.0, kPi * av) * sum).real());
  return {value, last, last <= 1e-8 * std::max(1.0, std::abs(sum))};
}

SeriesResult hom_anyon_series_as_printed(double sigma, AnyonParameter a, double tau, int n_terms) {
  check_series_args(sigma, tau, n_terms);
  const double av = a.value();
  cplx sum{};
  double last = 0.0;
  for (int n = 0; n < n_terms; ++n) {
    const double mag = std::exp(std::lgamma(0.5 * (av + n + 1)) - std::lgamma(n + 1.0) - (n + av) * std::log(sigma) +
                                (av + n - 1) * std::log(2.0));
    const cplx parity = 1.0 + std::polar(1.0, kPi * (n + av));
    const cplx term = i_pow(n) * mag * parity * real_pow(tau, n);
    sum += term;
    last = std::abs(term);
  }
  const double value = 0.5 * (1.0 - std::cos(kPi * av) * sum.real());
  return {value, last, last <= 1e-8 * std::max(1.0, std::abs(sum))};
}

double mz_general(const JointSpectralAmplitude& jsa, double tau) {
  require_square(jsa, "mz_general");
  const auto& g = jsa.grid_s();
  const auto& J = jsa.values();
  const auto e = phases(g, tau);
  return integrate_modulus(g, [&](Eigen::Index r, Eigen::Index c) {
           const cplx ex = e[static_cast<std::size_t>(r)];
           const cplx ey = e[static_cast<std::size_t>(c)];
           const cplx sym = J(r, c) + J(c, r);
           const cplx anti = J(r, c) - J(c, r);
           return sym * (ex * ey + 1.0) + (ex + ey) * anti;
         }) /
         16.0;
}

double mz_symmetric(const SpectralAmplitude& f_plus, double tau) {
  return 0.5 * (1.0 + cosine_fourier(f_plus, 2.0 * tau));
}

double mz_antisymmetric(const SpectralAmplitude& f_minus, double tau) {
  return 0.5 * (1.0 + cosine_fourier(f_minus, 2.0 * tau));
}

double mz_anyonic(const SpectralAmplitude& f_plus, const SpectralAmplitude& f_minus_envelope, AnyonParameter a,
                  double tau) {
  const double c = a.symmetric_weight();
  const double s = a.antisymmetric_weight();
  return 0.5 * (1.0 + c * c * cosine_fourier(f_plus, 2.0 * tau) + s * s * cosine_fourier(f_minus_envelope, 2.0 * tau));
}

double single_count(const SpectralAmplitude& s, double tau, Port port) {
  const double p = cosine_fourier(s, tau);
  return port == Port::A ? 0.5 * (1.0 + p) : 0.5 * (1.0 - p);
}

double nonlinear_mz(const JointSpectralAmplitude& jsa, double tau) {
  require_square(jsa, "nonlinear_mz");
  const auto& g = jsa.grid_s();
  if (!g.contains(0.0, 0.0)) throw PreconditionError("nonlinear_mz needs a grid that contains 0");
  const auto& J = jsa.values();
  const auto n = static_cast<Eigen::Index>(g.points());
  Eigen::MatrixXcd rotated(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) {
      const double wp = 0.5 * (g[static_cast<std::size_t>(r)] + g[static_cast<std::size_t>(c)]);
      const double wm = 0.5 * (g[static_cast<std::size_t>(r)] - g[static_cast<std::size_t>(c)]);
      rotated(r, c) = jsa(wp, wm) - jsa(wm, wp) + jsa(-wm, wp) - jsa(wp, -wm);
    }
  const auto e = phases(g, tau);
  const auto eh = phases(g, 0.5 * tau);
  const double k = 1.0 / std::sqrt(2.0);
  return integrate_modulus(g, [&](Eigen::Index r, Eigen::Index c) {
           const auto ri = static_cast<std::size_t>(r);
           const auto ci = static_cast<std::size_t>(c);
           const cplx sym = J(r, c) + J(c, r);
           return sym * (e[ri] * e[ci] + 1.0) + k * eh[ri] * eh[ci] * rotated(r, c);
         }) /
         16.0;
}

double fermion_mz(const JointSpectralAmplitude& f, double tau) {
  require_square(f, "fermion_mz");
  const auto& g = f.grid_s();
  const auto& F = f.values();
  const auto e = phases(g, tau);
  return integrate_modulus(g, [&](Eigen::Index r, Eigen::Index c) {
           const cplx ex = e[static_cast<std::size_t>(r)];
           const cplx ey = e[static_cast<std::size_t>(c)];
           return (ex * ey + 1.0) * (F(r, c) - F(c, r)) + (ex + ey) * (F(r, c) + F(c, r));
         }) /
         16.0;
}

namespace {

void check_gmz_shift(const FrequencyGrid& g, double mu) {
  if (!(std::abs(mu) <= 0.25 * g.span() * (1.0 + 1e-12)))
    throw PreconditionError("frequency shift exceeds a quarter of the grid span");
}

}  // namespace

double gmz_general(const JointSpectralAmplitude& jsa, double tau, double mu, bool quarter_phase) {
  require_square(jsa, "gmz_general");
  const auto& g = jsa.grid_s();
  check_gmz_shift(g, mu);
  const auto& J = jsa.values();
  const Eigen::MatrixXcd Jr = shift_rows(J, g, mu);
  const Eigen::MatrixXcd Jc = shift_cols(J, g, mu);
  const Eigen::MatrixXcd Jrc = shift_cols(Jr, g, mu);
  const auto e = phases(g, tau);
  const cplx p1 = quarter_phase ? std::polar(1.0, 0.25 * kPi) : cplx(1.0);
  const cplx p2 = p1 * p1;
  return integrate_modulus(g, [&](Eigen::Index r, Eigen::Index c) {
           const cplx ex = e[static_cast<std::size_t>(r)];
           const cplx ey = e[static_cast<std::size_t>(c)];
           const cplx bunched = (J(r, c) + J(c, r)) * ex * ey * p2;
           const cplx split_x = ex * p1 * (Jc(r, c) - Jr(c, r));
           const cplx split_y = ey * p1 * (Jr(r, c) - Jc(c, r));
           const cplx shifted = Jrc(r, c) + Jrc(c, r);
           return bunched + split_x + split_y + shifted;
         }) /
         16.0;
}

double gmz_symmetric(const SpectralAmplitude& f_plus, double tau, double mu, bool quarter_phase) {
  const cplx F = stft(f_plus, mu, 2.0 * tau);
  return quarter_phase ? 0.5 * (1.0 - F.imag()) : 0.5 * (1.0 + F.real());
}

double gmz_antisymmetric(const SpectralAmplitude& f_minus, double tau, double mu) {
  const cplx F = stft(f_minus, mu, 2.0 * tau);
  return 0.5 * (1.0 + (std::polar(1.0, mu * tau) * F).real());
}

double gmz_separable(const SpectralAmplitude& gamma, const SpectralAmplitude& beta, double tau, double mu,
                     bool quarter_phase) {
  if (!(gamma.grid() == beta.grid())) throw PreconditionError("gmz_separable needs gamma and beta on one grid");
  const auto& g = gamma.grid();
  check_gmz_shift(g, mu);
  const cplx p1 = quarter_phase ? std::polar(1.0, 0.25 * kPi) : cplx(1.0);
  const std::size_t n = g.points();
  std::vector<cplx> ug(n), vg(n), ub(n), vb(n);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx e = std::polar(1.0, g[k] * tau) * p1;
    const cplx gx = gamma.values()[k] * e;
    const cplx bx = beta.values()[k] * e;
    const cplx gs = gamma(g[k] + mu);
    const cplx bs = beta(g[k] + mu);
    ug[k] = gx + gs;
    vg[k] = gx - gs;
    ub[k] = bx + bs;
    vb[k] = bx - bs;
  }
  double nug = 0, nub = 0, nvg = 0, nvb = 0;
  cplx x1{}, x2{};
  for (std::size_t k = 0; k < n; ++k) {
    const double w = g.weight(k);
    nug += std::norm(ug[k]) * w;
    nub += std::norm(ub[k]) * w;
    nvg += std::norm(vg[k]) * w;
    nvb += std::norm(vb[k]) * w;
    x1 += ug[k] * std::conj(vb[k]) * w;
    x2 += ub[k] * std::conj(vg[k]) * w;
  }
  return (nug * nub + nvb * nvg + 2.0 * (x1 * x2).real()) / 16.0;
}

double gmz_anyonic(const SpectralAmplitude& f_plus, const SpectralAmplitude& f_minus, double tau, double mu) {
  const auto fp = f_plus.normalized();
  const auto [S, A] = parity_parts(f_minus.normalized());
  const auto& gp = fp.grid();
  const auto& gq = S.grid();

  const double norm_s = S.norm_squared();
  const double fp_mu = shifted_norm(fp, mu);
  const double fp_half = shifted_norm(fp, 0.5 * mu);
  const double a_lo = shifted_norm(A, -0.5 * mu);
  const double a_hi = shifted_norm(A, 0.5 * mu);
  const cplx Fp = stft(fp, mu, 2.0 * tau);
  const cplx Fa = stft(A, mu, 2.0 * tau);

  const double sym = norm_s * (1.0 + fp_mu + 2.0 * Fp.real());
  const double anti = fp_half * (a_lo + a_hi + 2.0 * (std::polar(1.0, mu * tau) * Fa).real());

  cplx X{};
  for (std::size_t k = 0; k < gp.points(); ++k) {
    const double p = gp[k];
    const cplx half = std::conj(fp(p + 0.5 * mu));
    X += (fp.values()[k] * std::polar(1.0, p * tau) + fp(p + mu) * std::polar(1.0, -p * tau)) * half * gp.weight(k);
  }
  cplx Y{};
  for (std::size_t k = 0; k < gq.points(); ++k) {
    const double q = gq[k];
    const cplx s = S.values()[k];
    if (s == cplx{}) continue;
    Y += s * (std::polar(1.0, -q * tau) * std::conj(A(q - 0.5 * mu)) + std::polar(1.0, q * tau) * std::conj(A(q + 0.5 * mu))) *
         gq.weight(k);
  }
  return 0.25 * (sym + anti + 2.0 * (X * Y).real());
}

double gmz_shifted_mass_deficit(const JointSpectralAmplitude& jsa, double mu) {
  require_square(jsa, "gmz_shifted_mass_deficit");
  const auto& g = jsa.grid_s();
  const Eigen::MatrixXcd Jr = shift_rows(jsa.values(), g, mu);
  const Eigen::MatrixXcd Jc = shift_cols(jsa.values(), g, mu);
  const Eigen::MatrixXcd Jrc = shift_cols(Jr, g, mu);
  const double base = jsa.norm_squared();
  double worst = 0.0;
  for (const auto* m : {&Jr, &Jc, &Jrc}) {
    const double kept = JointSpectralAmplitude(g, g, *m).norm_squared();
    worst = std::max(worst, base - kept);
  }
  return std::max(0.0, worst / base);
}

namespace {

double clip(double v, double& max_clip) {
  const double c = std::clamp(v, 0.0, 1.0);
  max_clip = std::max(max_clip, std::abs(c - v));
  return c;
}

}  // namespace

CoincidenceTrace sweep(Pipeline pipeline, const TimeGrid& taus, const std::function<double(double)>& fn,
                       unsigned threads) {
  Eigen::VectorXd raw(taus.points());
  parallel_for(taus.points(), threads, [&](std::size_t j) { raw(static_cast<Eigen::Index>(j)) = fn(taus[j]); });
  CoincidenceTrace t{pipeline, taus, std::nullopt, Eigen::MatrixXd(taus.points(), 1), 0.0, 0.0, {}};
  for (Eigen::Index j = 0; j < raw.size(); ++j) t.values(j, 0) = clip(raw(j), t.max_clip);
  return t;
}

CoincidenceTrace sweep(Pipeline pipeline, const TimeGrid& taus, const FrequencyGrid& mus,
                       const std::function<double(double, double)>& fn, unsigned threads) {
  Eigen::MatrixXd raw(taus.points(), mus.points());
  parallel_for(taus.points() * mus.points(), threads, [&](std::size_t idx) {
    const std::size_t j = idx / mus.points();
    const std::size_t k = idx % mus.points();
    raw(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = fn(taus[j], mus[k]);
  });
  CoincidenceTrace t{pipeline, taus, mus, Eigen::MatrixXd(taus.points(), mus.points()), 0.0, 0.0, {}};
  for (Eigen::Index j = 0; j < raw.rows(); ++j)
    for (Eigen::Index k = 0; k < raw.cols(); ++k) t.values(j, k) = clip(raw(j, k), t.max_clip);
  return t;
}

}  // namespace biphoton

#include "biphoton/oracle.hpp"

#include <cmath>
#include <numbers>

#include "biphoton/errors.hpp"

namespace biphoton {

namespace {

constexpr std::size_t kMaxPoints = 1025;

struct TwoPhotonState {
  FrequencyGrid grid;
  Eigen::MatrixXcd aa, ab, ba, bb;  // rows: photon 1 frequency, cols: photon 2 frequency
};

void beam_splitter(TwoPhotonState& s) {
  const double k = 1.0 / std::sqrt(2.0);
  // photon 1
  Eigen::MatrixXcd aa = k * (s.aa + s.ba), ba = k * (s.aa - s.ba);
  Eigen::MatrixXcd ab = k * (s.ab + s.bb), bb = k * (s.ab - s.bb);
  // photon 2
  s.aa = k * (aa + ab);
  s.ab = k * (aa - ab);
  s.ba = k * (ba + bb);
  s.bb = k * (ba - bb);
}

Eigen::VectorXcd phase_vector(const FrequencyGrid& g, double tau, double offset) {
  Eigen::VectorXcd e(static_cast<Eigen::Index>(g.points()));
  for (std::size_t k = 0; k < g.points(); ++k) e(static_cast<Eigen::Index>(k)) = std::polar(1.0, g[k] * tau + offset);
  return e;
}

void delay_a(TwoPhotonState& s, double tau, double phase) {
  const Eigen::VectorXcd e = phase_vector(s.grid, tau, phase);
  s.aa = e.asDiagonal() * s.aa * e.asDiagonal();
  s.ab = e.asDiagonal() * s.ab;
  s.ba = s.ba * e.asDiagonal();
}

void delay_b(TwoPhotonState& s, double tau) {
  const Eigen::VectorXcd e = phase_vector(s.grid, tau, 0.0);
  s.bb = e.asDiagonal() * s.bb * e.asDiagonal();
  s.ba = e.asDiagonal() * s.ba;
  s.ab = s.ab * e.asDiagonal();
}

void shift_b(TwoPhotonState& s, double mu) {
  if (mu == 0.0) return;
  s.bb = shift_cols(shift_rows(s.bb, s.grid, mu), s.grid, mu);
  s.ba = shift_rows(s.ba, s.grid, mu);
  s.ab = shift_cols(s.ab, s.grid, mu);
}

void shift_a(TwoPhotonState& s, double mu) {
  if (mu == 0.0) return;
  s.aa = shift_cols(shift_rows(s.aa, s.grid, mu), s.grid, mu);
  s.ab = shift_rows(s.ab, s.grid, mu);
  s.ba = shift_cols(s.ba, s.grid, mu);
}

// Frequency beam-splitter acting on one photon per arm: |x, y>_ab -> |w+, w->_ab.
void frequency_beam_splitter(TwoPhotonState& s) {
  const auto& g = s.grid;
  const auto n = static_cast<Eigen::Index>(g.points());
  const double k = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd ab(n, n), ba(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) {
      const double x = g[static_cast<std::size_t>(r)];
      const double y = g[static_cast<std::size_t>(c)];
      ab(r, c) = k * bilinear(g, g, s.ab, 0.5 * (x + y), 0.5 * (x - y));
      ba(r, c) = k * bilinear(g, g, s.ba, 0.5 * (y - x), 0.5 * (x + y));
    }
  s.ab = std::move(ab);
  s.ba = std::move(ba);
}

TwoPhotonState initial_state(const JointSpectralAmplitude& jsa, bool fermion) {
  const double k = 1.0 / std::sqrt(2.0);
  const auto& J = jsa.values();
  const auto n = J.rows();
  TwoPhotonState s{jsa.grid_s(), Eigen::MatrixXcd::Zero(n, n), k * J, (fermion ? -k : k) * J.transpose(),
                   Eigen::MatrixXcd::Zero(n, n)};
  return s;
}

}  // namespace

PostselectedAmplitude build_postselected(const JointSpectralAmplitude& jsa, Pipeline pipeline, double tau, double mu,
                                         bool quarter_phase) {
  if (!jsa.is_square()) throw PreconditionError("oracle needs identical signal and idler grids");
  if (jsa.grid_s().points() > kMaxPoints) throw PreconditionError("oracle grid above 1025 points per axis");
  if (mu != 0.0 && pipeline != Pipeline::GMZ && pipeline != Pipeline::HOM)
    throw PreconditionError("frequency shift only applies to HOM and GMZ in the oracle");
  if (quarter_phase && pipeline != Pipeline::GMZ) throw PreconditionError("quarter phase only applies to GMZ");

  auto s = initial_state(jsa, pipeline == Pipeline::FERMION_MZ);
  switch (pipeline) {
    case Pipeline::HOM:
      delay_b(s, tau);
      shift_a(s, 0.5 * mu);
      shift_b(s, -0.5 * mu);
      beam_splitter(s);
      break;
    case Pipeline::MZ:
    case Pipeline::FERMION_MZ:
      beam_splitter(s);
      delay_a(s, tau, 0.0);
      beam_splitter(s);
      break;
    case Pipeline::GMZ:
      beam_splitter(s);
      delay_a(s, tau, quarter_phase ? 0.25 * std::numbers::pi : 0.0);
      shift_b(s, mu);
      beam_splitter(s);
      break;
    case Pipeline::NLMZ:
      if (!s.grid.contains(0.0, 0.0)) throw PreconditionError("NLMZ oracle needs a grid that contains 0");
      beam_splitter(s);
      delay_a(s, tau, 0.0);
      frequency_beam_splitter(s);
      beam_splitter(s);
      break;
    case Pipeline::SINGLE_COUNT:
      throw PreconditionError("the oracle has no single-count pipeline");
  }
  return {jsa.grid_s(), jsa.grid_i(), std::sqrt(2.0) * s.ab, pipeline, tau, mu};
}

double coincidence_from_amplitude(const PostselectedAmplitude& ps) {
  return JointSpectralAmplitude(ps.grid_s, ps.grid_i, ps.values).norm_squared();
}

}  // namespace biphoton

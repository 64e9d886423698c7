#include <gtest/gtest.h>

#include <random>

#include "biphoton/errors.hpp"
#include "biphoton/interferometers.hpp"
#include "biphoton/oracle.hpp"
#include "fixtures.hpp"

using namespace biphoton;
using namespace biphoton::testing;

namespace {

JointSpectralAmplitude symmetric_jsa(std::size_t points = 129, double center = 3.0) {
  const FactoredSetup s(center, points);
  return s.jsa(build_gaussian(center, 0.7, s.plus_grid), build_gaussian(0.0, 1.0, s.minus_grid));
}

JointSpectralAmplitude antisymmetric_jsa(std::size_t points = 129, double center = 3.0) {
  const FactoredSetup s(center, points);
  return s.jsa(build_gaussian(center, 0.7, s.plus_grid), build_odd_gaussian_pair(1.5, 0.5, s.minus_grid));
}

double max_ratio_spread(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::Index r, c;
  b.cwiseAbs().maxCoeff(&r, &c);
  const cplx k = a(r, c) / b(r, c);
  return (a - k * b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
}

}  // namespace

TEST(Oracle, CalibrationAnchor) {
  EXPECT_NEAR(oracle_coincidence(symmetric_jsa(), Pipeline::MZ, 0.0), 1.0, 1e-6);
  EXPECT_NEAR(oracle_coincidence(antisymmetric_jsa(), Pipeline::MZ, 0.0), 1.0, 1e-6);
}

TEST(Oracle, ZeroDelayAmplitudeIsTheJsa) {
  const auto j = symmetric_jsa();
  const auto ps = build_postselected(j, Pipeline::MZ, 0.0);
  EXPECT_LT(max_ratio_spread(ps.values, j.values()), 1e-12);
}

TEST(Oracle, AntisymmetricStateHasNoBunchedPart) {
  // With J^T = -J the coincidence amplitude is (e^{ix tau} + e^{iy tau}) J / 2, up to a global phase.
  const auto j = antisymmetric_jsa();
  const double tau = 0.8;
  const auto ps = build_postselected(j, Pipeline::MZ, tau);
  const auto& g = j.grid_s();
  Eigen::MatrixXcd expect = j.values();
  for (Eigen::Index r = 0; r < expect.rows(); ++r)
    for (Eigen::Index c = 0; c < expect.cols(); ++c)
      expect(r, c) *= 0.5 * (std::polar(1.0, g[static_cast<std::size_t>(r)] * tau) +
                             std::polar(1.0, g[static_cast<std::size_t>(c)] * tau));
  EXPECT_LT(max_ratio_spread(ps.values, expect), 1e-12);
}

TEST(Oracle, GmzWithoutShiftIsMz) {
  const auto j = antisymmetric_jsa();
  for (double tau : {0.0, 0.45, 1.9}) {
    const auto mz = build_postselected(j, Pipeline::MZ, tau);
    const auto gmz = build_postselected(j, Pipeline::GMZ, tau, 0.0);
    EXPECT_TRUE(mz.values == gmz.values);
  }
}

TEST(Oracle, MatchesClosedForms) {
  const auto js = symmetric_jsa();
  const auto ja = antisymmetric_jsa();
  for (double tau : {-2.0, 0.3, 1.1}) {
    EXPECT_NEAR(oracle_coincidence(js, Pipeline::MZ, tau), mz_general(js, tau), 1e-10);
    EXPECT_NEAR(oracle_coincidence(ja, Pipeline::MZ, tau), mz_general(ja, tau), 1e-10);
    for (double mu : {-0.7, 0.5})
      for (bool q : {false, true})
        EXPECT_NEAR(oracle_coincidence(js, Pipeline::GMZ, tau, mu, q), gmz_general(js, tau, mu, q), 1e-10);
    EXPECT_NEAR(oracle_coincidence(ja, Pipeline::FERMION_MZ, tau), fermion_mz(ja, tau), 1e-10);
  }
}

TEST(Oracle, HomMatchesWignerFormula) {
  const FactoredSetup s(0.0, 129);
  const auto fm = build_power_alpha_gaussian(AnyonParameter(0.5), 1.0, s.minus_grid).with_linear_phase(0.4);
  const auto j = s.jsa(build_gaussian(0.0, 0.3, s.plus_grid), fm);
  for (double tau : {0.0, 0.5, 1.5})
    for (double mu : {-1.0, 0.0, 0.5}) EXPECT_NEAR(oracle_coincidence(j, Pipeline::HOM, tau, mu), hom(fm, tau, mu), 1e-6);
}

TEST(Oracle, NonlinearMzAgreesLoosely) {
  const FactoredSetup s(0.0, 129);
  const auto fp = build_gaussian(0.0, 0.7, s.plus_grid);
  for (const auto& fm : {build_gaussian(0.0, 1.0, s.minus_grid), build_odd_gaussian_pair(1.5, 0.5, s.minus_grid)}) {
    const auto j = s.jsa(fp, fm);
    for (double tau : {0.0, 1.0, 3.0}) EXPECT_NEAR(oracle_coincidence(j, Pipeline::NLMZ, tau), nonlinear_mz(j, tau), 1e-2);
  }
}

TEST(Oracle, SecondOrderConvergence) {
  // mu/h keeps a fractional part of 1/3 or 2/3 under halving, so the interpolation constant is fixed
  const double mu = 0.125 * 7.0 / 3.0;
  std::vector<double> v;
  for (std::size_t n : {257u, 513u, 1025u}) v.push_back(oracle_coincidence(symmetric_jsa(n), Pipeline::GMZ, 0.7, mu));
  const double ratio = (v[0] - v[1]) / (v[1] - v[2]);
  EXPECT_GT(ratio, 3.0);
  EXPECT_LT(ratio, 5.0);
}

TEST(Oracle, RelabelingInvariance) {
  const FrequencyGrid g(0.0, 8.0, 65);
  std::mt19937 rng(7);
  std::normal_distribution<double> n;
  Eigen::MatrixXcd m(65, 65);
  for (Eigen::Index r = 0; r < 65; ++r)
    for (Eigen::Index c = 0; c < 65; ++c) m(r, c) = cplx(n(rng), n(rng));
  const JointSpectralAmplitude j(g, g, (m + m.transpose()).eval());
  const auto jn = j.normalized();
  for (double tau : {0.0, 0.7}) {
    EXPECT_NEAR(oracle_coincidence(jn, Pipeline::MZ, tau), oracle_coincidence(exchange(jn), Pipeline::MZ, tau), 1e-12);
  }
}

TEST(Oracle, Deterministic) {
  const auto j = symmetric_jsa();
  EXPECT_EQ(oracle_coincidence(j, Pipeline::GMZ, 0.9, 0.4), oracle_coincidence(j, Pipeline::GMZ, 0.9, 0.4));
}

TEST(Oracle, RejectsUnsupportedRequests) {
  const auto j = symmetric_jsa(65);
  EXPECT_THROW(build_postselected(j, Pipeline::SINGLE_COUNT, 0.0), PreconditionError);
  EXPECT_THROW(build_postselected(j, Pipeline::MZ, 0.0, 0.5), PreconditionError);
  EXPECT_THROW(build_postselected(j, Pipeline::MZ, 0.0, 0.0, true), PreconditionError);
  EXPECT_THROW(build_postselected(symmetric_jsa(65, 10.0), Pipeline::NLMZ, 0.0), PreconditionError);
  const FrequencyGrid a(0.0, 8.0, 33), b(1.0, 8.0, 33);
  const JointSpectralAmplitude rect(a, b, Eigen::MatrixXcd::Ones(33, 33));
  EXPECT_THROW(build_postselected(rect, Pipeline::MZ, 0.0), PreconditionError);
  const FrequencyGrid big(0.0, 8.0, 1027);
  const JointSpectralAmplitude huge(big, big, Eigen::MatrixXcd::Zero(1027, 1027));
  EXPECT_THROW(build_postselected(huge, Pipeline::MZ, 0.0), PreconditionError);
}

#include <gtest/gtest.h>

#include "biphoton/errors.hpp"
#include "biphoton/interferometers.hpp"
#include "biphoton/transforms.hpp"
#include "fixtures.hpp"

using namespace biphoton;
using namespace biphoton::testing;

namespace {

double half_cos_law(double a) { return 0.5 * (1.0 - std::cos(kPi * a)); }

}  // namespace

// ---- HOM ------------------------------------------------------------------

TEST(Hom, ZeroDelayParity) {
  const auto g = centered();
  EXPECT_NEAR(hom(build_gaussian(0.0, 1.0, g), 0.0, 0.0), 0.0, 1e-6);
  EXPECT_NEAR(hom(build_sign_alpha_gaussian(AnyonParameter(1.0), 1.0, g), 0.0, 0.0), 1.0, 1e-6);
}

TEST(Hom, AnyonicZeroDelayLaw) {
  const auto g = centered();
  for (double a : {0.0, 0.2, 0.5, 0.8, 1.0}) {
    EXPECT_NEAR(hom(build_sign_alpha_gaussian(AnyonParameter(a), 1.0, g), 0.0, 0.0), half_cos_law(a), 1e-3);
    EXPECT_NEAR(hom(build_power_alpha_gaussian(AnyonParameter(a), 1.0, g), 0.0, 0.0), half_cos_law(a), 1e-3);
  }
}

TEST(Hom, DecomposedMatchesDirect) {
  const auto g = centered();
  for (double a : {0.0, 0.3, 0.5, 1.0}) {
    const AnyonParameter ap(a);
    const auto f = build_power_alpha_gaussian(ap, 1.0, g);
    for (double tau : {0.0, 0.6, 1.7})
      for (double mu : {-1.0, 0.0, 0.8}) EXPECT_NEAR(hom_decomposed(f, ap, tau, mu), hom(f, tau, mu), 1e-8);
  }
  const auto half = build_sign_alpha_gaussian(AnyonParameter(0.5), 1.0, g);
  EXPECT_NEAR(hom_decomposed(half, AnyonParameter(0.5), 0.0, 0.0), 0.5, 1e-3);
}

TEST(Hom, SignPhaseHalfLineForm) {
  const auto env = build_gaussian(0.0, 1.0, centered());
  EXPECT_NEAR(hom_anyon_sign_phase(env, AnyonParameter(0.0), 12.0), 0.5, 1e-3);
  for (double tau : {0.0, 0.5, 2.0}) EXPECT_NEAR(hom_anyon_sign_phase(env, AnyonParameter(0.5), tau), 0.5, 1e-8);
  EXPECT_NEAR(hom_anyon_sign_phase(env, AnyonParameter(1.0), 0.0), 0.75, 1e-6);
}

TEST(Hom, CorrectedSignPhaseMatchesSplitPhaseAmplitude) {
  const auto g = centered();
  for (double a : {0.0, 0.25, 0.5, 1.0}) {
    const AnyonParameter ap(a);
    const auto f = build_split_phase_gaussian(ap, 1.0, g);
    const auto env = f.modulus();
    EXPECT_NEAR(hom_anyon_sign_phase_corrected(env, ap, 0.0), half_cos_law(a), 1e-3);
    for (double tau : {0.3, 1.0}) EXPECT_NEAR(hom_anyon_sign_phase_corrected(env, ap, tau), hom(f, tau, 0.0), 1e-6);
  }
}

TEST(Hom, SeriesLimitsAndAgreement) {
  EXPECT_NEAR(hom_anyon_series(1.0, AnyonParameter(0.0), 0.0, 40).value, 0.0, 1e-12);
  EXPECT_NEAR(hom_anyon_series(1.0, AnyonParameter(1.0), 0.0, 40).value, 1.0, 1e-12);
  const auto f = build_power_alpha_gaussian(AnyonParameter(0.5), 1.0, centered(1025));
  for (double st : {0.0, 0.25, 0.5, 1.0}) {
    const auto s = hom_anyon_series(1.0, AnyonParameter(0.5), st, 60);
    EXPECT_TRUE(s.converged);
    EXPECT_NEAR(s.value, hom(f, st, 0.0), 1e-3) << st;
  }
  EXPECT_THROW(hom_anyon_series(1.0, AnyonParameter(0.5), 2.0, 40), PreconditionError);
  EXPECT_THROW(hom_anyon_series(1.0, AnyonParameter(0.5), 0.5, 81), PreconditionError);
}

TEST(Hom, AsPrintedSeriesIsNotNormalized) {
  const double v = hom_anyon_series_as_printed(1.0, AnyonParameter(0.0), 0.0, 40).value;
  EXPECT_GT(std::abs(v - 0.0), 0.1);
}

TEST(Hom, DephasedLimit) {
  const auto f = build_power_alpha_gaussian(AnyonParameter(0.7), 1.0, centered());
  EXPECT_NEAR(hom(f, 12.0, 0.0), 0.5, 2e-3);
  EXPECT_NEAR(hom(f, -12.0, 0.0), 0.5, 2e-3);
}

// ---- MZ -------------------------------------------------------------------

class MzFixture : public ::testing::Test {
 protected:
  FactoredSetup s{3.0, 129};
  SpectralAmplitude fp = build_gaussian(3.0, 0.7, s.plus_grid);
  SpectralAmplitude even = build_gaussian(0.0, 1.0, s.minus_grid);
  SpectralAmplitude odd = build_odd_gaussian_pair(1.5, 0.5, s.minus_grid);
};

TEST_F(MzFixture, GeneralIsOneAtZeroDelay) {
  EXPECT_NEAR(mz_general(s.jsa(fp, even), 0.0), 1.0, 1e-6);
  EXPECT_NEAR(mz_general(s.jsa(fp, odd), 0.0), 1.0, 1e-6);
  const auto anyon = build_power_alpha_gaussian(AnyonParameter(0.5), 1.0, s.minus_grid);
  EXPECT_NEAR(mz_general(s.jsa(fp, anyon), 0.0), 1.0, 1e-6);
}

TEST_F(MzFixture, ReducedFormsMatchGeneral) {
  const auto js = s.jsa(fp, even);
  const auto ja = s.jsa(fp, odd);
  for (double tau = -4.0; tau <= 4.0; tau += 0.4) {
    EXPECT_NEAR(mz_symmetric(fp, tau), mz_general(js, tau), 1e-6);
    EXPECT_NEAR(mz_antisymmetric(odd, tau), mz_general(ja, tau), 1e-6);
  }
}

TEST(Mz, SymmetricGaussianClosedForm) {
  const auto f = build_gaussian(3.0, 1.0, centered(513, 20.0));
  EXPECT_NEAR(mz_symmetric(f, 0.0), 1.0, 1e-12);
  EXPECT_NEAR(mz_symmetric(f, kPi / 6.0), 0.5 * (1.0 - std::exp(-kPi * kPi / 36.0)), 1e-6);
  EXPECT_NEAR(mz_symmetric(f, 12.0), 0.5, 1e-3);
}

TEST(Mz, AntisymmetricPowerSpectrumIsEven) {
  const auto f = build_power_alpha_gaussian(AnyonParameter(1.0), 1.0, centered());
  EXPECT_NEAR(mz_antisymmetric(f, 0.0), 1.0, 1e-12);
  for (double tau : {0.3, 1.1, 2.5}) EXPECT_NEAR(mz_antisymmetric(f, tau), mz_antisymmetric(f, -tau), 1e-12);
}

TEST(Mz, AnyonicLimitsAndOracle) {
  const FactoredSetup s(4.0, 257);
  const auto fp = build_gaussian(4.0, 0.5, s.plus_grid);
  for (double a : {0.0, 0.5, 1.0}) {
    const AnyonParameter ap(a);
    const auto fm = build_power_alpha_gaussian(ap, 1.3, s.minus_grid);
    const auto env = fm.modulus();
    const auto j = s.jsa(fp, fm);
    EXPECT_NEAR(mz_anyonic(fp, env, ap, 0.0), 1.0, 1e-9);
    for (double tau : {-2.0, 0.35, 1.0, 3.0}) {
      EXPECT_NEAR(mz_anyonic(fp, env, ap, tau), mz_general(j, tau), 1e-6) << a << " " << tau;
      if (a == 0.0) EXPECT_NEAR(mz_anyonic(fp, env, ap, tau), mz_symmetric(fp, tau), 1e-12);
      if (a == 1.0) EXPECT_NEAR(mz_anyonic(fp, env, ap, tau), mz_antisymmetric(fm, tau), 1e-12);
    }
  }
}

TEST(SingleCount, PortsAndClosedForm) {
  const auto f = build_gaussian(3.0, 1.0, centered(513, 20.0));
  EXPECT_NEAR(single_count(f, 0.0, Port::A), 1.0, 1e-12);
  EXPECT_NEAR(single_count(f, 0.0, Port::B), 0.0, 1e-12);
  for (double tau : {-1.3, 0.4, 2.0}) {
    EXPECT_NEAR(single_count(f, tau, Port::A) + single_count(f, tau, Port::B), 1.0, 1e-10);
    EXPECT_NEAR(single_count(f, tau, Port::A), 0.5 * (1.0 + std::cos(3.0 * tau) * std::exp(-0.25 * tau * tau)), 1e-6);
  }
}

// ---- nonlinear MZ -----------------------------------------------------------

TEST(NonlinearMz, SymmetricEqualsPlainMz) {
  const FactoredSetup s(0.0, 129);
  const auto fp = build_gaussian(0.0, 0.7, s.plus_grid);
  const auto j = s.jsa(fp, build_gaussian(0.0, 1.0, s.minus_grid));
  for (double tau = -5.0; tau <= 5.0; tau += 0.5) EXPECT_NEAR(nonlinear_mz(j, tau), mz_symmetric(fp, tau), 1e-6);
}

TEST(NonlinearMz, AntisymmetricIsFlat) {
  const FactoredSetup s(0.0, 257);
  const auto fp = build_gaussian(0.0, 0.7, s.plus_grid);
  const auto fm = build_odd_gaussian_pair(1.5, 0.5, s.minus_grid);
  const auto j = s.jsa(fp, fm);
  double lo = 1.0, hi = 0.0;
  for (double tau = -6.0; tau <= 6.0; tau += 0.25) {
    const double v = nonlinear_mz(j, tau);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  EXPECT_LT(hi - lo, 1e-8);
  const double overlap = std::abs(inner_product(fm, fp.normalized()));
  EXPECT_NEAR(hi, 0.5 * (1.0 - overlap * overlap), 1e-3);
}

TEST(NonlinearMz, NeedsGridThroughZero) {
  const FactoredSetup s(10.0, 65);
  const auto j = s.jsa(build_gaussian(10.0, 0.7, s.plus_grid), build_gaussian(0.0, 1.0, s.minus_grid));
  EXPECT_THROW(nonlinear_mz(j, 0.0), PreconditionError);
}

// ---- generalized MZ ---------------------------------------------------------

class GmzFixture : public ::testing::Test {
 protected:
  FactoredSetup s{3.0, 129};
  SpectralAmplitude fp = build_gaussian(3.0, 0.7, s.plus_grid);
  SpectralAmplitude even = build_gaussian(0.0, 1.0, s.minus_grid);
  SpectralAmplitude odd = build_odd_gaussian_pair(1.5, 0.5, s.minus_grid);
};

TEST_F(GmzFixture, ShiftFreeLimitIsMz) {
  for (const auto& fm : {even, odd}) {
    const auto j = s.jsa(fp, fm);
    for (double tau : {0.0, 0.7, 2.1}) EXPECT_NEAR(gmz_general(j, tau, 0.0), mz_general(j, tau), 1e-10);
  }
}

TEST_F(GmzFixture, StftFormsMatchGeneral) {
  const auto js = s.jsa(fp, even);
  const auto ja = s.jsa(fp, odd);
  EXPECT_NEAR(gmz_symmetric(fp, 0.0, 0.0), 1.0, 1e-9);
  EXPECT_NEAR(gmz_antisymmetric(odd, 0.0, 0.0), 1.0, 1e-9);
  for (double tau = -3.0; tau <= 3.0; tau += 0.6)
    for (double mu = -1.5; mu <= 1.5; mu += 0.5) {
      EXPECT_NEAR(gmz_symmetric(fp, tau, mu), gmz_general(js, tau, mu), 1e-5);
      EXPECT_NEAR(0.5 * (1.0 + std::real(stft(fp, mu, 2.0 * tau))), gmz_general(js, tau, mu), 1e-5);
      EXPECT_NEAR(gmz_antisymmetric(odd, tau, mu), gmz_general(ja, tau, mu), 1e-5);
      EXPECT_NEAR(gmz_symmetric(fp, tau, mu, true), gmz_general(js, tau, mu, true), 1e-5);
    }
}

TEST(Gmz, GaussianEnvelopeInShift) {
  const auto f = build_gaussian(0.0, 1.0, centered());
  for (double mu : {0.5, 1.0, 2.0})
    EXPECT_NEAR(std::abs(gmz_symmetric(f, 0.0, mu) - 0.5), 0.5 * std::exp(-0.25 * mu * mu), 1e-4);
}

TEST(Gmz, SeparableMatchesGeneral) {
  const FrequencyGrid g(3.0, 16.0, 129);
  const auto ga = build_gaussian(2.5, 0.6, g);
  const auto be = build_gaussian(3.5, 0.9, g);
  const auto j = build_jsa_separable(ga, be, g, g);
  EXPECT_NEAR(gmz_separable(ga, be, 0.0, 0.0), 1.0, 1e-9);
  for (double tau : {-1.0, 0.3, 1.4})
    for (double mu : {-1.0, 0.0, 0.6})
      for (bool q : {false, true}) EXPECT_NEAR(gmz_separable(ga, be, tau, mu, q), gmz_general(j, tau, mu, q), 1e-10);
}

TEST(Gmz, SeparableFarDetunedBeats) {
  const FrequencyGrid g(5.0, 16.0, 129);
  const auto ga = build_gaussian(2.0, 0.3, g);
  const auto be = build_gaussian(8.0, 0.3, g);
  const auto j = build_jsa_separable(ga, be, g, g);
  double lo = 1.0, hi = 0.0;
  for (double tau = 0.0; tau <= 0.6; tau += 0.02) {
    const double v = gmz_separable(ga, be, tau, 0.0);
    EXPECT_NEAR(v, gmz_general(j, tau, 0.0), 1e-5);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  EXPECT_GT(hi - lo, 0.3);
}

TEST(Gmz, AnyonicMatchesGeneralAndLimits) {
  const FactoredSetup s(3.0, 129);
  const auto fp = build_gaussian(3.0, 0.7, s.plus_grid);
  for (double a : {0.0, 0.5}) {
    const AnyonParameter ap(a);
    const auto fm = build_power_alpha_gaussian(ap, 1.0, s.minus_grid);
    const auto j = s.jsa(fp, fm);
    for (double tau : {-1.0, 0.4, 1.5}) {
      if (a == 0.0) EXPECT_NEAR(gmz_anyonic(fp, fm, tau, 0.0), mz_symmetric(fp, tau), 1e-6);
      if (a == 0.5) EXPECT_NEAR(gmz_anyonic(fp, fm, tau, 0.0), mz_anyonic(fp, fm.modulus(), ap, tau), 1e-6);
      for (double mu : {0.0, 0.5, -0.75}) EXPECT_NEAR(gmz_anyonic(fp, fm, tau, mu), gmz_general(j, tau, mu), 1e-4);
    }
  }
}

TEST(Gmz, RejectsOversizedShift) {
  const FactoredSetup s(3.0, 65);
  const auto j = s.jsa(build_gaussian(3.0, 0.7, s.plus_grid), build_gaussian(0.0, 1.0, s.minus_grid));
  EXPECT_THROW(gmz_general(j, 0.0, 4.5), PreconditionError);
  EXPECT_LT(gmz_shifted_mass_deficit(j, 1.0), 1e-4);
}

// ---- fermions ---------------------------------------------------------------

TEST(Fermion, DualityWithBosons) {
  const FactoredSetup s(3.0, 129);
  const auto fp = build_gaussian(3.0, 0.6, s.plus_grid);
  const auto odd = build_odd_gaussian_pair(1.5, 0.5, s.minus_grid);
  const auto even = odd.modulus();
  const auto sym = s.jsa(fp, even);
  const auto anti = s.jsa(fp, odd);
  EXPECT_NEAR(fermion_mz(sym, 0.0), 1.0, 1e-6);
  for (double tau = -4.0; tau <= 4.0; tau += 0.25) {
    EXPECT_NEAR(fermion_mz(sym, tau), mz_general(anti, tau), 1e-8);
    EXPECT_NEAR(fermion_mz(anti, tau), mz_general(sym, tau), 1e-8);
  }
}

// ---- sweeps -----------------------------------------------------------------

TEST(Sweep, ClipsAndRecords) {
  const auto taus = TimeGrid::from_range(0.0, 1.0, 5);
  const auto t = sweep(Pipeline::MZ, taus, [](double tau) { return tau < 0.5 ? -1e-3 : 1.0 + 2e-3; }, 2);
  EXPECT_EQ(t.values.rows(), 5);
  EXPECT_EQ(t.at(0), 0.0);
  EXPECT_EQ(t.at(4), 1.0);
  EXPECT_NEAR(t.max_clip, 2e-3, 1e-15);
  const auto mus = FrequencyGrid::from_range(-1.0, 1.0, 3);
  const auto m = sweep(Pipeline::GMZ, taus, mus, [](double tau, double mu) { return 0.5 + 0.1 * tau * mu; }, 3);
  EXPECT_EQ(m.values.cols(), 3);
  EXPECT_NEAR(m.at(4, 2), 0.6, 1e-15);
  EXPECT_EQ(m.max_clip, 0.0);
}

TEST(Sweep, DeterministicAcrossThreadCounts) {
  const auto f = build_gaussian(2.0, 0.8, centered(257));
  const auto taus = TimeGrid::from_range(-5.0, 5.0, 101);
  const auto a = sweep(Pipeline::MZ, taus, [&](double tau) { return mz_symmetric(f, tau); }, 1);
  const auto b = sweep(Pipeline::MZ, taus, [&](double tau) { return mz_symmetric(f, tau); }, 4);
  EXPECT_TRUE(a.values == b.values);
}

TEST(Pipeline, RoundTripNames) {
  for (auto p : {Pipeline::HOM, Pipeline::MZ, Pipeline::NLMZ, Pipeline::GMZ, Pipeline::FERMION_MZ, Pipeline::SINGLE_COUNT})
    EXPECT_EQ(pipeline_from_string(to_string(p)), p);
  EXPECT_EQ(pipeline_from_string("gmz"), Pipeline::GMZ);
  EXPECT_THROW(pipeline_from_string("sagnac"), ConfigError);
}

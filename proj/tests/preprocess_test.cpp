#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "cpufp/error.hpp"
#include "cpufp/preprocess.hpp"

namespace cpufp {
namespace {

// Frozen from scipy.signal 1.15.3: cheby1(6, 0.5, 0.1) and cheby1(3, 1.0, 0.3);
// filtfilt(padtype='odd', padlen=21) and lfilter(zi=lfilter_zi*x[0]) outputs use the
// order-6 numerator rescaled to unity DC gain.
const std::vector<double> kScipyB6 = {1.1341790241947333e-06, 6.8050741451684e-06, 1.7012685362921e-05, 2.2683580483894665e-05, 1.7012685362921e-05, 6.8050741451684e-06, 1.1341790241947333e-06};
const std::vector<double> kScipyA6 = {1.0, -5.494556482637794, 12.724343078508852, -15.88931337833839, 11.279979304201968, -4.315270232760599, 0.6948945995607737};
const std::vector<double> kScipyB3 = {0.034384966351816024, 0.10315489905544807, 0.10315489905544807, 0.034384966351816024};
const std::vector<double> kScipyA3 = {1.0, -1.5804049383264676, 1.2538449813550228, -0.3983603122140273};
const std::vector<double> kScipyFiltfilt = {
    39.61981892399765, 47.06972129437893, 54.278137879252306, 61.0271219197892,
    67.12144471768875, 72.39661032364435, 76.72493759774459, 80.01941396194242,
    82.2351826489702, 83.36868925518661, 83.454671445102, 82.5613158989557,
    80.78401879995792, 78.23826245087984, 75.05215604264745, 71.35918146567234,
    67.29163696454488, 62.97518712416473, 58.52481458188111, 54.04233650246008,
    49.61550804568669, 45.318597067229675, 41.2141899999208, 37.3558879740683,
    33.79148261136577, 30.566168019205314, 27.72535195587779, 25.316674523333777,
    23.390923605005643, 22.00164628503633, 21.203385918864836, 21.048614804655422,
    21.58357087826444, 22.843331633872353, 24.846558352394304, 27.590409109928597,
    31.046142840150296, 35.155915060383165, 39.83119857911339, 44.953153328632496,
    50.375125924133464, 55.927292453920344, 61.42328069782879, 66.66843529315769,
    71.46923642633278, 75.64326346119798, 79.02902117165189, 81.49492603294281,
    82.94678703139301, 83.33320845810539, 82.64848497247112, 80.93274108452144,
    78.26927355578162, 74.77926889126529, 70.61427078553761, 65.94694629503566,
    60.96082901512599, 55.83979071981248, 50.75800276410445, 45.87109374325551};
const std::vector<double> kScipyForward = {
    39.99999999942643, 40.000009642170525, 40.00012998515156, 40.00087941319608,
    40.00401873753877, 40.01406978063754, 40.040516925166955, 40.10041334036309,
    40.220808352486635, 40.440157282152406, 40.80793740846959, 41.38216278161018,
    42.22504096203216, 43.397311803706955, 44.951804006213365, 46.92660721183865,
    49.338282165512496, 52.17581703823702, 55.396283615532546, 58.92308105793882,
    62.64731301774198, 66.43232418640024, 70.12086034147258, 73.54401383577485,
    76.53120454849295, 78.92064183790346, 80.56972095705754, 81.36461188421818,
    81.22808916262191, 80.12473345101921, 78.06310293792578, 75.09500784415128,
    71.31232476111973, 66.8418600059636, 61.83867148613555, 56.47808308206302,
    50.946641149625975, 45.43257165288414, 40.11659756940037, 35.16396744508001,
    30.718216002910665, 26.896731449575235, 23.787971223972693, 21.45027299360907,
    19.912366973341182, 19.175643834518272, 19.218000662551912, 19.99875915981197,
    21.46383839832394, 23.55034297704857, 26.19009631365247, 29.312095658783438,
    32.84406948151381, 36.713243884145285, 40.84625088882174, 45.16814068319503,
    49.60079254832151, 54.06135188429337, 58.46137497073491, 62.70716396263718};

std::vector<double> frozen_input() {
  std::vector<double> x(60);
  for (int t = 0; t < 60; ++t) {
    x[static_cast<std::size_t>(t)] = 50.0 + 30.0 * std::sin(2.0 * std::numbers::pi * t / 40.0) +
                                     10.0 * (((t * 7919) % 13) - 6) / 6.0;
  }
  return x;
}

double gain_db(const FilterCoefficients& c, double omega) {
  return 20.0 * std::log10(std::abs(frequency_response(c, omega)));
}

// Independent of the design path: eigenvalues of the companion matrix of a(z).
double max_root_magnitude(const std::vector<double>& a) {
  const auto n = static_cast<Eigen::Index>(a.size() - 1);
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) companion(0, k) = -a[static_cast<std::size_t>(k + 1)] / a[0];
  for (Eigen::Index k = 1; k < n; ++k) companion(k, k - 1) = 1.0;
  return companion.eigenvalues().cwiseAbs().maxCoeff();
}

CpuTimeSeries raw(std::vector<double> v) { return CpuTimeSeries(std::move(v), 1.0, Stage::Raw, "test"); }
CpuTimeSeries filtered(std::vector<double> v) {
  return CpuTimeSeries(std::move(v), 1.0, Stage::Filtered, "test");
}

TEST(DesignChebyshev1, DenominatorMatchesReferenceDesign) {
  const auto c = design_chebyshev1(FilterSpec{6, 0.5, 0.1, true}).coefficients;
  ASSERT_EQ(c.a.size(), kScipyA6.size());
  for (std::size_t k = 0; k < c.a.size(); ++k) EXPECT_NEAR(c.a[k], kScipyA6[k], 1e-10) << k;
  // Same shape as the textbook numerator, rescaled to unity DC gain.
  const double eps2 = std::pow(10.0, 0.05) - 1.0;
  for (std::size_t k = 0; k < c.b.size(); ++k) {
    EXPECT_NEAR(c.b[k], kScipyB6[k] * std::sqrt(1.0 + eps2), 1e-15) << k;
  }
}

TEST(DesignChebyshev1, OddOrderMatchesReferenceDesignExactly) {
  const auto c = design_chebyshev1(FilterSpec{3, 1.0, 0.3, true}).coefficients;
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_NEAR(c.b[k], kScipyB3[k], 1e-12) << k;
    EXPECT_NEAR(c.a[k], kScipyA3[k], 1e-12) << k;
  }
}

TEST(DesignChebyshev1, DcGainWithinRippleBand) {
  const auto c = design_chebyshev1(FilterSpec{6, 0.5, 0.1, true}).coefficients;
  EXPECT_EQ(c.a[0], 1.0);
  const double dc = gain_db(c, 0.0);
  EXPECT_GE(dc, -0.5 - 1e-6);
  EXPECT_LE(dc, 0.0 + 1e-6);
}

TEST(DesignChebyshev1, StopbandAttenuationAtTwiceCutoff) {
  const auto c = design_chebyshev1(FilterSpec{6, 0.5, 0.1, true}).coefficients;
  const double attenuation = -gain_db(c, 0.2 * std::numbers::pi);
  EXPECT_GE(attenuation, 50.0);
  // Analytic: 10 log10(1 + eps^2 C6(W)^2) below the ripple peak, W the
  // prewarped frequency ratio; the peak sits 0.5 dB above DC here.
  const double eps2 = std::pow(10.0, 0.05) - 1.0;
  const double w = std::tan(0.1 * std::numbers::pi) / std::tan(0.05 * std::numbers::pi);
  const double c6 = std::cosh(6.0 * std::acosh(w));
  const double expected = 10.0 * std::log10(1.0 + eps2 * c6 * c6) - 0.5;
  EXPECT_NEAR(attenuation, expected, 1e-6);
  // Unwarped bound at exactly 2x: ~53.5 dB; prewarping only helps.
  EXPECT_GE(attenuation + 0.5, 10.0 * std::log10(1.0 + eps2 * std::pow(std::cosh(6.0 * std::acosh(2.0)), 2)));
}

TEST(DesignChebyshev1, PassbandRipple) {
  const auto c = design_chebyshev1(FilterSpec{6, 0.5, 0.1, true}).coefficients;
  for (int k = 0; k <= 100; ++k) {
    const double omega = 0.1 * std::numbers::pi * k / 100.0;
    const double g = gain_db(c, omega);
    EXPECT_GE(g, -1e-6) << omega;
    EXPECT_LE(g, 0.5 + 1e-6) << omega;
  }
}

TEST(DesignChebyshev1, StableAcrossSpecs) {
  for (int order = 1; order <= 10; ++order) {
    for (double ripple : {0.1, 0.5, 1.0, 3.0}) {
      for (double cutoff : {0.02, 0.1, 0.3, 0.7, 0.95}) {
        const auto d = design_chebyshev1(FilterSpec{order, ripple, cutoff, true});
        for (const auto& p : d.poles) EXPECT_LT(std::abs(p), 1.0);
        // Ten poles crowded near z = 1 do not survive expansion into
        // polynomial coefficients (the same happens with scipy's cheby1).
        if (order >= 10 && cutoff <= 0.02) continue;
        EXPECT_LT(max_root_magnitude(d.coefficients.a), 1.0)
            << order << " " << ripple << " " << cutoff;
      }
    }
  }
}

TEST(DesignChebyshev1, InvalidSpecs) {
  for (const auto& spec : {FilterSpec{0, 0.5, 0.1, true}, FilterSpec{6, 0.0, 0.1, true},
                           FilterSpec{6, 0.5, 0.0, true}, FilterSpec{6, 0.5, 1.0, true}}) {
    try {
      design_chebyshev1(spec);
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::InvalidSpec);
    }
  }
}

TEST(FilterSeries, ZeroPhaseMatchesReferenceFiltfilt) {
  const auto out = filter_series(raw(frozen_input()), FilterSpec{});
  ASSERT_EQ(out.size(), kScipyFiltfilt.size());
  EXPECT_EQ(out.stage(), Stage::Filtered);
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_NEAR(out[i], kScipyFiltfilt[i], 1e-8) << i;
}

TEST(FilterSeries, ForwardOnlyMatchesReferenceLfilter) {
  FilterSpec spec;
  spec.zero_phase = false;
  const auto out = filter_series(raw(frozen_input()), spec);
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_NEAR(out[i], kScipyForward[i], 1e-8) << i;
}

TEST(FilterSeries, ConstantPasses) {
  const auto out = filter_series(raw(std::vector<double>(100, 50.0)), FilterSpec{});
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_NEAR(out[i], 50.0, 1e-6) << i;
}

TEST(FilterSeries, NyquistNoiseSuppressed) {
  const FilterSpec spec;
  const auto c = design_chebyshev1(spec).coefficients;
  // |H(pi)| of the design: the bilinear zeros put it at (numerically) zero,
  // far beyond the 40 dB asked for.
  EXPECT_LT(std::abs(frequency_response(c, std::numbers::pi)), 1e-2);

  std::vector<double> x(400);
  for (std::size_t t = 0; t < x.size(); ++t) x[t] = 50.0 + 40.0 * (t % 2 == 0 ? 1.0 : -1.0);
  const auto out = filter_series(raw(x), spec);
  // The odd reflection of an alternating signal is biased, so the ends ring
  // for a long while; only the interior is checked.
  for (std::size_t t = 120; t + 120 < out.size(); ++t) EXPECT_NEAR(out[t], 50.0, 0.4) << t;
}

TEST(FilterSeries, TooShort) {
  try {
    filter_series(raw({1, 2, 3, 4, 5}), FilterSpec{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::TraceTooShort);
    EXPECT_EQ(e.detail(), 21);
  }
  EXPECT_EQ(min_filter_length(FilterSpec{}), 21u);
  // exactly the minimum is accepted
  std::vector<double> x(21);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i % 7);
  EXPECT_EQ(filter_series(raw(x), FilterSpec{}).size(), 21u);
}

TEST(FilterSeries, RequiresRawInput) {
  EXPECT_THROW(filter_series(filtered(std::vector<double>(50, 1.0)), FilterSpec{}), Error);
}

TEST(FilterSeries, LinearInInput) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (bool zero_phase : {true, false}) {
    FilterSpec spec;
    spec.zero_phase = zero_phase;
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> x(120), y(120), mix(120);
      const double alpha = u(rng) / 50.0 - 1.0;
      const double beta = u(rng) / 50.0 - 1.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = u(rng);
        y[i] = u(rng);
        mix[i] = alpha * x[i] + beta * y[i];
      }
      const auto fx = filter_series(raw(x), spec);
      const auto fy = filter_series(raw(y), spec);
      const auto fm = filter_series(raw(mix), spec);
      for (std::size_t i = 0; i < x.size(); ++i) {
        EXPECT_NEAR(fm[i], alpha * fx[i] + beta * fy[i], 1e-6);
      }
    }
  }
}

TEST(FilterSeries, ZeroPhaseHasNoLag) {
  std::vector<double> x(400);
  for (std::size_t t = 0; t < x.size(); ++t) {
    x[t] = 50.0 + 30.0 * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / 100.0);
  }
  const auto y = filter_series(raw(x), FilterSpec{});
  auto xcorr = [&](int lag) {
    double acc = 0.0;
    for (int t = 50; t < 350; ++t) {
      acc += (x[static_cast<std::size_t>(t)] - 50.0) * (y[static_cast<std::size_t>(t + lag)] - 50.0);
    }
    return acc;
  };
  int best = -20;
  for (int lag = -20; lag <= 20; ++lag) {
    if (xcorr(lag) > xcorr(best)) best = lag;
  }
  EXPECT_EQ(best, 0);

  FilterSpec causal;
  causal.zero_phase = false;
  const auto z = filter_series(raw(x), causal);
  // the causal filter delays the sinusoid; its output lags the input
  double lagged = 0.0;
  double aligned = 0.0;
  for (int t = 50; t < 350; ++t) {
    aligned += (x[static_cast<std::size_t>(t)] - 50.0) * (z[static_cast<std::size_t>(t)] - 50.0);
    lagged += (x[static_cast<std::size_t>(t)] - 50.0) * (z[static_cast<std::size_t>(t + 5)] - 50.0);
  }
  EXPECT_GT(lagged, aligned);
}

TEST(Normalize, Examples) {
  const auto a = normalize(filtered({10, 30, 20}));
  EXPECT_EQ(a[0], 0.0);
  EXPECT_EQ(a[1], 1.0);
  EXPECT_EQ(a[2], 0.5);
  EXPECT_EQ(a.stage(), Stage::Normalized);
  const auto b = normalize(filtered({0, 1}));
  EXPECT_EQ(b[0], 0.0);
  EXPECT_EQ(b[1], 1.0);
}

TEST(Normalize, ConstantTrace) {
  try {
    normalize(filtered({7, 7, 7}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ConstantTrace);
  }
  EXPECT_THROW(normalize(filtered({})), Error);
}

TEST(Normalize, AffineInvariant) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> s(30);
    for (auto& v : s) v = 100.0 * u(rng);
    const double a = 0.01 + 50.0 * u(rng);
    const double b = 200.0 * u(rng) - 100.0;
    std::vector<double> t(s);
    for (auto& v : t) v = a * v + b;
    const auto ns = normalize(filtered(s));
    const auto nt = normalize(filtered(t));
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(ns[i], nt[i], 1e-9);
  }
}

TEST(Preprocess, PreservesLengthAndNormalizes) {
  const auto in = frozen_input();
  const auto out = preprocess(raw(in), FilterSpec{});
  EXPECT_EQ(out.size(), in.size());
  EXPECT_EQ(out.stage(), Stage::Normalized);
  const auto [lo, hi] = std::minmax_element(out.samples().begin(), out.samples().end());
  EXPECT_EQ(*lo, 0.0);
  EXPECT_EQ(*hi, 1.0);
}

TEST(Preprocess, ConstantRawTrace) {
  try {
    preprocess(raw(std::vector<double>(100, 42.0)), FilterSpec{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ConstantTrace);
  }
}

TEST(Preprocess, MatchesFilterThenNormalize) {
  const auto in = frozen_input();
  const auto direct = normalize(filter_series(raw(in), FilterSpec{}));
  const auto out = preprocess(raw(in), FilterSpec{});
  for (std::size_t i = 0; i < in.size(); ++i) EXPECT_NEAR(out[i], direct[i], 1e-8) << i;
}

TEST(Preprocess, ScaledTracesGiveIdenticalOutput) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(60 + trial);
    for (auto& x : v) x = u(rng);
    const auto base = preprocess(raw(v), FilterSpec{});
    for (double a : {0.5, 2.0, 10.0, 3.7}) {
      const auto scaled = preprocess(raw(v).scaled(a), FilterSpec{});
      EXPECT_EQ(std::vector<double>(scaled.samples().begin(), scaled.samples().end()),
                std::vector<double>(base.samples().begin(), base.samples().end()))
          << trial << " " << a;
    }
  }
}

TEST(Lfilter, SteadyStateInitialConditionHoldsStep) {
  const auto c = design_chebyshev1(FilterSpec{4, 1.0, 0.2, true}).coefficients;
  auto zi = steady_state_initial(c);
  const std::vector<double> ones(50, 1.0);
  const auto y = lfilter(c, ones, zi);
  for (double v : y) EXPECT_NEAR(v, 1.0, 1e-12);
}

}  // namespace
}  // namespace cpufp

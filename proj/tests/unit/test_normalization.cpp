#include <gtest/gtest.h>

#include <cmath>

#include "corrdet/normalization.hpp"

using namespace corrdet;

TEST(CltConstants, GeneralGolden) {
  const auto c = clt_constants(50, 100, make_regime(RegimeKind::kGeneral, 50, 100));
  EXPECT_NEAR(c.mu, -16.169444613443603, 1e-12);
  EXPECT_NEAR(c.variance(), 0.346689106527531, 1e-12);
  EXPECT_EQ(c.regime.kind, RegimeKind::kGeneral);
}

TEST(CltConstants, SquareGolden) {
  const auto c = clt_constants(100, 100, make_regime(RegimeKind::kSquare, 100, 100));
  EXPECT_NEAR(c.mu, -102.30258509299405, 1e-11);
  EXPECT_NEAR(c.variance(), 9.210340371976183, 1e-12);
  EXPECT_NEAR(c.sigma, 3.0348542587702927, 1e-12);
}

TEST(CltConstants, NonPositiveVariance) {
  try {
    clt_constants(2, 100, make_regime(RegimeKind::kGeneral, 2, 100));
    FAIL() << "expected an error";
  } catch (const std::domain_error& e) {
    EXPECT_STREQ(e.what(), "variance formula non-positive: p too small relative to n for the general normalization");
  }
}

TEST(CltConstants, SquareEqualsNearSingularAtBoundary) {
  for (long n : {2L, 10L, 400L, 1000L, 12345L}) {
    const auto sq = clt_constants(n, n, make_regime(RegimeKind::kSquare, n, n));
    const auto ns = clt_constants(n, n, make_regime(RegimeKind::kNearSingular, n, n));
    EXPECT_EQ(sq.mu, ns.mu) << n;
    EXPECT_EQ(sq.sigma, ns.sigma) << n;
  }
}

TEST(CltConstants, GeneralVarianceIncreasingInP) {
  const long n = 500;
  double prev = 0.0;
  for (long p = 2; p <= n; ++p) {
    const double ell = std::log(static_cast<double>(n - p + 1)) - std::log(static_cast<double>(n));
    const double var = -2.0 * ell - 2.0 * p / static_cast<double>(n);
    if (!(var > 0.0)) continue;
    const auto c = clt_constants(p, n, Regime{RegimeKind::kGeneral, kDefaultW, 0.0});
    EXPECT_GT(c.variance(), prev) << p;
    prev = c.variance();
  }
  EXPECT_GT(prev, 0.0);
}

TEST(CltConstants, RegimeConsistencyEnforced) {
  EXPECT_THROW(make_regime(RegimeKind::kSquare, 99, 100), std::invalid_argument);
  EXPECT_THROW(make_regime(RegimeKind::kNearSingular, 50, 100), std::invalid_argument);
  EXPECT_NO_THROW(make_regime(RegimeKind::kNearSingular, 90, 100));
  EXPECT_THROW(clt_constants(101, 100, Regime{}), std::invalid_argument);
}

TEST(SelectRegime, Thresholds) {
  EXPECT_EQ(select_regime(100, 100).kind, RegimeKind::kSquare);
  EXPECT_EQ(select_regime(90, 100).kind, RegimeKind::kNearSingular);
  EXPECT_EQ(select_regime(89, 100).kind, RegimeKind::kGeneral);
  EXPECT_EQ(select_regime(89, 100).threshold, 10.0);
  EXPECT_EQ(select_regime(397, 400).kind, RegimeKind::kNearSingular);
  EXPECT_EQ(select_regime(300, 1000).kind, RegimeKind::kGeneral);
  EXPECT_EQ(select_regime(95, 100, 0.6).kind, RegimeKind::kNearSingular);
  EXPECT_EQ(select_regime(95, 100, 0.9).kind, RegimeKind::kGeneral);
  EXPECT_THROW(select_regime(5, 10, 1.0), std::invalid_argument);
}

TEST(Standardize, CenterAndScale) {
  const auto c = clt_constants(300, 1000, select_regime(300, 1000));
  EXPECT_EQ(standardize_logdet(c.mu, c), 0.0);
  EXPECT_NEAR(standardize_logdet(c.mu + c.sigma, c), 1.0, 1e-12);
}

TEST(LogCn, MatchesDirectSum) {
  for (auto [p, n] : {std::pair{50L, 100L}, {1L, 1L}, {300L, 1000L}, {2000L, 2000L}}) {
    double direct = 0.0;
    for (long i = 0; i < p; ++i) direct += std::log(static_cast<double>(n - i) / static_cast<double>(n));
    EXPECT_NEAR(log_cn(p, n), direct, 1e-9) << p << "," << n;
  }
  EXPECT_NEAR(log_cn(50, 100), -14.99690069561411, 1e-10);
}

TEST(RegimeNames, RoundTrip) {
  for (auto k : {RegimeKind::kGeneral, RegimeKind::kNearSingular, RegimeKind::kSquare}) {
    EXPECT_EQ(regime_kind_from_string(to_string(k)), k);
  }
  EXPECT_EQ(regime_kind_from_string("near"), RegimeKind::kNearSingular);
  EXPECT_THROW(regime_kind_from_string("other"), std::invalid_argument);
}

TEST(CltConstants, JsonFields) {
  nlohmann::json j = clt_constants(50, 100, select_regime(50, 100));
  EXPECT_EQ(j["regime"], "general");
  EXPECT_DOUBLE_EQ(j["w"].get<double>(), 0.5);
  EXPECT_TRUE(j.contains("mu"));
  EXPECT_TRUE(j.contains("sigma"));
}

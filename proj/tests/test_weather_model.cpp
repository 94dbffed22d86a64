// Copyright 2026 The deweather Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>
#include <random>

#include <doctest.h>

#include "error.hpp"
#include "oracles.hpp"
#include "types.hpp"
#include "weather.hpp"

using namespace deweather;

namespace {

// 40-digit arbitrary-precision references, frozen before the implementation
// was written.
struct PdfRef {
  double r;
  double value;
};

constexpr PdfRef kPdfRefs[] = {
    {0.5, 0.052764056220847330805},   {1.0, 0.094903959682232476089},
    {2.0, 0.13835413862450520407},    {2.737, 0.14560905013129906345},
    {5.117, 0.1100007381313771359},   {10.0, 0.030548808445398176201},
    {20.0, 0.001014873796975552489},  {50.0, 9.7665877744493495783e-9},
};

struct LgammaRef {
  double x;
  double value;
};

constexpr LgammaRef kLgammaRefs[] = {
    {0.1, 2.25271265173420595987},   {0.5, 0.5723649429247000870717},
    {1.0, 0.0},                      {1.5, -0.1207822376352452223455},
    {2.15, 0.07045573370411181512911}, {3.0, 0.6931471805599453094172},
    {5.0, 3.178053830347945619647},  {10.0, 12.80182748008146961121},
    {20.0, 39.33988418719949403622}, {30.0, 71.25703896716800901007},
    {40.0, 106.6317602606434591262}, {50.0, 144.5657439463448860089},
};

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

}  // namespace

TEST_CASE("log_gamma matches high-precision references on (0, 50]") {
  for (const LgammaRef& ref : kLgammaRefs) {
    CAPTURE(ref.x);
    CHECK(close_rel(log_gamma(ref.x), ref.value, 1e-12));
  }
  CHECK_THROWS_AS(log_gamma(0.0), Error);
  CHECK_THROWS_AS(log_gamma(-1.0), Error);
}

TEST_CASE("gamma_pdf matches high-precision references") {
  const GammaParams params = GammaParams::defaults();
  for (const PdfRef& ref : kPdfRefs) {
    CAPTURE(ref.r);
    CHECK(std::abs(gamma_pdf(params, ref.r) - ref.value) <=
          1e-12 * ref.value);
  }
  // A second parameter set, same oracle.
  const GammaParams other(1.9, 2.6);
  CHECK(std::abs(gamma_pdf(other, 1.0) - 0.11519800434731142053) <= 1e-12);
  CHECK(std::abs(gamma_pdf(other, 3.0) - 0.1434767089859269901) <= 1e-12);
  CHECK(std::abs(gamma_pdf(other, 8.0) - 0.050695751991751954614) <= 1e-12);
}

TEST_CASE("gamma_pdf boundary behavior") {
  CHECK(gamma_pdf(GammaParams::defaults(), 0.0) == 0.0);  // k > 1
  CHECK(gamma_pdf(GammaParams::defaults(), -3.0) == 0.0);
  CHECK(gamma_pdf(GammaParams(1.0, 2.0), 0.0) == 0.5);
  CHECK(gamma_pdf(GammaParams(0.5, 2.0), 0.0) ==
        std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(
      gamma_pdf(GammaParams::defaults(),
                std::numeric_limits<double>::quiet_NaN()),
      Error);
}

TEST_CASE("gamma_pdf integrates to one and peaks at (k-1)theta") {
  const GammaParams params = GammaParams::defaults();
  const auto pdf = [&](double r) { return gamma_pdf(params, r); };
  const double integral = oracle::adaptive_simpson(pdf, 0.0, 200.0, 1e-10);
  CHECK(std::abs(integral - 1.0) < 1e-6);

  const double mode = oracle::golden_argmax(pdf, 0.0, 20.0);
  CHECK(std::abs(mode - 2.737) < 1e-3);
}

TEST_CASE("gamma params validation") {
  CHECK_THROWS_AS(GammaParams(0.0, 1.0), Error);
  CHECK_THROWS_AS(GammaParams(1.0, -2.0), Error);
  CHECK_THROWS_AS(GammaParams(std::numeric_limits<double>::infinity(), 1.0),
                  Error);
  CHECK(GammaParams::defaults().shape() == 2.15);
  CHECK(GammaParams::defaults().scale() == 2.38);
}

TEST_CASE("histogram uses half-open bins from zero") {
  const RangeHistogram hist = build_histogram({0.5, 2.9, 3.0}, 3.0);
  REQUIRE(hist.counts.size() == 2);
  CHECK(hist.counts[0] == 2);  // 3.0 belongs to bin 1
  CHECK(hist.counts[1] == 1);
  CHECK(hist.total() == 3);

  CHECK(build_histogram({}, 3.0).counts.empty());
  CHECK_THROWS_AS(build_histogram({1.0}, 0.0), Error);
}

TEST_CASE("histogram of gamma draws passes a chi-square check") {
  // Seeded Monte Carlo oracle: 1e4 draws vs the analytic bin masses.
  std::mt19937_64 rng(123);
  std::gamma_distribution<double> dist(2.15, 2.38);
  Ranges samples(10000);
  for (double& s : samples) {
    s = dist(rng);
  }
  const RangeHistogram hist = build_histogram(samples, 3.0);

  // P(bin) for 3 m bins plus the >=21 m tail, from regularized incomplete
  // gamma evaluations.
  const double probs[] = {0.3151360942, 0.3643053710, 0.1917012007,
                          0.0811051876, 0.0309291224, 0.0110973615,
                          0.0038251604, 0.0019005022};
  double chi2 = 0.0;
  const double n = static_cast<double>(samples.size());
  for (int b = 0; b < 7; ++b) {
    const double observed =
        b < static_cast<int>(hist.counts.size())
            ? static_cast<double>(hist.counts[static_cast<std::size_t>(b)])
            : 0.0;
    const double expected = n * probs[b];
    chi2 += (observed - expected) * (observed - expected) / expected;
  }
  double tail = 0.0;
  for (std::size_t b = 7; b < hist.counts.size(); ++b) {
    tail += static_cast<double>(hist.counts[b]);
  }
  const double expected_tail = n * probs[7];
  chi2 += (tail - expected_tail) * (tail - expected_tail) / expected_tail;

  // df = 7, alpha = 0.001.
  CHECK(chi2 < 24.321886);
}

TEST_CASE("moment fit inverts exact moments") {
  // Mean k*theta = 5.117 and population variance k*theta^2 = 12.17846 come
  // from (2.15, 2.38); a two-point sample realizes them exactly.
  const double mean = 5.117;
  const double sd = std::sqrt(12.17846);
  const GammaParams fitted = fit_gamma_mom({mean - sd, mean + sd});
  CHECK(fitted.shape() == doctest::Approx(2.15).epsilon(1e-9));
  CHECK(fitted.scale() == doctest::Approx(2.38).epsilon(1e-9));

  // The variant with variance 12.17815 lands within a few 1e-5 of the same
  // parameters.
  const GammaParams near = fit_gamma_mom(
      {mean - std::sqrt(12.17815), mean + std::sqrt(12.17815)});
  CHECK(near.shape() == doctest::Approx(2.15).epsilon(1e-3));
  CHECK(near.scale() == doctest::Approx(2.38).epsilon(1e-3));
}

TEST_CASE("moment fit error paths") {
  CHECK_THROWS_AS(fit_gamma_mom({}), Error);
  CHECK_THROWS_AS(fit_gamma_mom({5.0}), Error);
  try {
    fit_gamma_mom({2.0, 2.0, 2.0});  // zero variance
    FAIL("expected fit error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::fit);
  }
}

TEST_CASE("moment fit recovers parameters from seeded draws") {
  std::mt19937_64 rng(77);
  std::gamma_distribution<double> dist(2.15, 2.38);
  Ranges samples(100000);
  for (double& s : samples) {
    s = dist(rng);
  }
  const GammaParams fitted = fit_gamma_mom(samples);
  CHECK(std::abs(fitted.shape() - 2.15) / 2.15 < 0.05);
  CHECK(std::abs(fitted.scale() - 2.38) / 2.38 < 0.05);
}

TEST_CASE("alpha weight limits and midpoint") {
  const GammaParams params = GammaParams::defaults();
  CHECK(alpha_weight(params, Severity{0.0}, 1.0) == 0.0);
  CHECK(alpha_weight(params, Severity{0.0}, 123.0) == 0.0);

  // rho * f(r) = 1 is the logistic midpoint.
  const double f2 = gamma_pdf(params, 2.0);
  CHECK(alpha_weight(params, Severity{1.0 / f2}, 2.0) ==
        doctest::Approx(0.5).epsilon(1e-12));

  // Large rho drives alpha toward (but never past) 1 at any r with f > 0.
  CHECK(alpha_weight(params, Severity{1e18}, 2.0) > 1.0 - 1e-12);
  CHECK(alpha_weight(params, Severity{1e300}, 2.0) <= 1.0);

  // f(0) = 0 for k > 1, so alpha vanishes there for any severity.
  CHECK(alpha_weight(params, Severity{1e9}, 0.0) == 0.0);

  CHECK_THROWS_AS(alpha_weight(params, Severity{-1.0}, 1.0), Error);
}

TEST_CASE("alpha weight is monotone in rho and inherits the pdf mode") {
  const GammaParams params = GammaParams::defaults();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> rs(0.0, 30.0);
  for (int i = 0; i < 200; ++i) {
    const double r = rs(rng);
    double prev = -1.0;
    for (double rho : {0.0, 0.5, 2.0, 10.0, 1e4}) {
      const double a = alpha_weight(params, Severity{rho}, r);
      CHECK(a >= prev);
      CHECK(a >= 0.0);
      CHECK(a < 1.0);
      prev = a;
    }
  }
  const double mode = oracle::golden_argmax(
      [&](double r) { return alpha_weight(params, Severity{5.0}, r); }, 0.0,
      20.0);
  CHECK(std::abs(mode - 2.737) < 1e-3);
}

TEST_CASE("weather sampler determinism and shape") {
  CHECK(sample_weather_points(GammaParams::defaults(), 0, 1.0, 9).empty());

  const PointCloud a = sample_weather_points(GammaParams::defaults(), 10, 5.0, 42);
  const PointCloud b = sample_weather_points(GammaParams::defaults(), 10, 5.0, 42);
  REQUIRE(a.size() == 10);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].y == b[i].y);
    CHECK(a[i].z == b[i].z);
    CHECK(a[i].intensity == b[i].intensity);
  }

  const PointCloud big =
      sample_weather_points(GammaParams::defaults(), 100000, 5.0, 7);
  const Ranges r = compute_ranges(big);
  double mean = 0.0;
  for (double v : r) {
    mean += v;
  }
  mean /= static_cast<double>(r.size());
  CHECK(std::abs(mean - 5.117) / 5.117 < 0.02);

  // Directions stay inside the +/-30 degree elevation cone; intensities in
  // [0, ceiling].
  for (std::size_t i = 0; i < big.size(); i += 997) {
    if (r[i] > 0.0) {
      CHECK(std::abs(big[i].z) / r[i] <= 0.5 + 1e-6);
    }
    CHECK(big[i].intensity >= 0.0f);
    CHECK(big[i].intensity <= 5.0f);
  }
}

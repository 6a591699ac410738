#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "tfem/tempering.hpp"

using namespace tfem;

TEST_CASE("jmin policy values") {
  CHECK(jmin(PowerLawPolicy{1.0, 3.0}, 0.1, 2, 1) == Catch::Approx(1e-3));
  // all k-curves start from the same point when C = 10^(k-3)
  for (const double k : {2.0, 3.0, 4.0, 5.0})
    CHECK(jmin(PowerLawPolicy{std::pow(10.0, k - 3.0), k}, 0.1, 2, 1) == Catch::Approx(1e-3));
  CHECK(jmin(HighOrderPolicy{1.0, 4}, 0.1, 2, 4) == Catch::Approx(std::pow(10.0, -5.4)));
  CHECK(jmin(FixedPolicy{1e-8}, 0.5, 2, 1) == Catch::Approx(1e-8));
  CHECK_THROWS_AS(jmin(PowerLawPolicy{}, 0.0, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(jmin(TheoreticalOptPolicy{0.0, 1.0}, 0.1, 2, 1), std::invalid_argument);
}

TEST_CASE("theoretical optimum formula and L-independence") {
  const double w1 = 2.0, w2 = 6.0, h = 0.05;
  const double expect = std::pow(h, 3) * (w2 / w1) * std::sqrt(3.0 * kCircumradiusConstant / 8.0);
  CHECK(jmin(TheoreticalOptPolicy{w1, w2}, h, 2, 1) == Catch::Approx(expect));
  // no length argument exists; identical for any two "runs" differing only in L
  CHECK(jmin(TheoreticalOptPolicy{w1, w2}, h, 2, 1) ==
        jmin(TheoreticalOptPolicy{w1, w2}, h, 2, 1));
  // 3D exponent
  CHECK(jmin(TheoreticalOptPolicy{1.0, 1.0}, 0.1, 3, 1) ==
        Catch::Approx(std::pow(0.1, 4) * std::sqrt(3.0 * kCircumradiusConstant / 8.0)));
}

TEST_CASE("clamped inverse") {
  CHECK(clamped_inverse(1e-8, 1e-3) == Catch::Approx(1e3));
  CHECK(clamped_inverse(0.02, 1e-3) == Catch::Approx(50.0));
  CHECK(clamped_inverse(0.0, 1e-3) == Catch::Approx(1e3));
  CHECK_THROWS_AS(clamped_inverse(0.0, 0.0), std::invalid_argument);
  // monotone nonincreasing in J; equals 1/J for J >= Jmin
  double prev = 1e300;
  for (double J = 0.0; J <= 2e-3; J += 1e-4) {
    const double v = clamped_inverse(J, 1e-3);
    CHECK(v <= prev + 1e-15);
    if (J >= 1e-3) CHECK(v == Catch::Approx(1.0 / J));
    prev = v;
  }
}

TEST_CASE("optimal D") {
  // hbar >= C h^2 regime: no tempering
  CHECK(optimal_D(0.05, 0.1, 1.0, 1.0) == 1.0);
  CHECK(optimal_D(0.0, 0.1, 1.0, 1.0) == 0.0);
  const double expect = 1e-2 * std::sqrt(2.0 / (3.0 * kCircumradiusConstant));
  CHECK(optimal_D(1e-4, 0.1, 1.0, 1.0) == Catch::Approx(expect));
  CHECK_THROWS_AS(optimal_D(1e-4, 0.1, 1.0, 0.0), std::invalid_argument);
  // never exceeds one
  for (double hbar = 0.0; hbar < 0.2; hbar += 0.01)
    CHECK(optimal_D(hbar, 0.1, 3.0, 0.5) <= 1.0);
}

TEST_CASE("penalty strength Dtilde") {
  CHECK(penalty_strength_Dtilde(0.1, 1e-3) == Catch::Approx(kPenaltyAlpha * 100.0));
  const double h = 0.05;
  CHECK(penalty_strength_Dtilde(h, h * h * h) == Catch::Approx(kPenaltyAlpha / (h * h)));
  CHECK_THROWS_AS(penalty_strength_Dtilde(0.1, 0.0), std::invalid_argument);
}

#include "consgain/errors.hpp"
#include "consgain/gain.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace consgain;
using doctest::Approx;

TEST_CASE("Gains must be positive and finite") {
  CHECK_THROWS_AS(Gains(0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(Gains(1.0, -1.0), ParameterError);
  CHECK_THROWS_AS(Gains(std::nan(""), 1.0), ParameterError);
  CHECK_THROWS_AS(Gains(1.0, INFINITY), ParameterError);
}

TEST_CASE("g1") {
  CHECK(g1(1.0, Gains(1, 1)) == 1.0);
  CHECK(g1(2.0, Gains(0.5, 1)) == 1.0);
  CHECK(g1(0.5858, Gains(1, 1)) == Approx(2.914).epsilon(1e-3));
  CHECK_THROWS_AS((void)g1(0.0, Gains(1, 1)), DomainError);
}

TEST_CASE("g2 and g3 values (frozen from the frequency-sweep oracle)") {
  CHECK(g2(1.0, Gains(1, 1)) == Approx(2.1547005).epsilon(1e-7));
  CHECK(g2(2.0, Gains(1, 1)) == Approx(1.5224077).epsilon(1e-7));
  CHECK(g3(2.0, Gains(1, 1)) == Approx(0.4045085).epsilon(1e-7));
  CHECK(g3(1.0, Gains(1, 1)) == Approx(g2(1.0, Gains(1, 1))).epsilon(1e-15));
  CHECK(g3(0.5, Gains(2, 1)) == Approx(8.1311822).epsilon(1e-7));
  // Small beta: the naive form cancels badly, the factored one does not.
  CHECK(g2(1.0, Gains(1, 0.1)) == Approx(200.12523).epsilon(1e-7));
  // sup delta ~ 2 / beta^2 as beta -> 0
  CHECK(g2(1.0, Gains(1, 1e-6)) == Approx(2e12).epsilon(1e-9));
}

TEST_CASE("g2/g3 domain errors") {
  // Delta < 0
  CHECK_THROWS_AS((void)g2(0.5, Gains(1, 3)), DomainError);
  // Delta >= 0 but denominator <= 0 (t below beta^2 / 4 alpha)
  CHECK_THROWS_AS((void)g2(0.2, Gains(1, 1)), DomainError);
  CHECK_THROWS_AS((void)g3(10.0, Gains(1, 2)), DomainError);
  CHECK_THROWS_AS((void)g2(-1.0, Gains(1, 1)), DomainError);
  CHECK(g2_domain_lower_bound(Gains(1, 1)) == Approx(0.25));
  CHECK(g2_domain_lower_bound(Gains(1, 3)) == Approx(2.25));
}

TEST_CASE("critical thresholds") {
  CHECK(critical_beta_absolute(1, 1) == Approx(std::sqrt(3.0)));
  CHECK(critical_beta_absolute(2, 1) == Approx(std::sqrt(8.0)));
  CHECK(critical_beta_absolute(1e-12, 1) < 1e-5);
  CHECK(critical_beta_relative(1, 1) == Approx(std::sqrt(3.0)));
  CHECK(critical_beta_relative(2, 1) == Approx(std::sqrt(2.0)));
  CHECK(critical_beta_relative(0.5, 1) == Approx(std::sqrt(5.0)));

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const double l = std::pow(10.0, u(rng));
    const double a = std::pow(10.0, u(rng));
    const double p = critical_beta_absolute(l, a);
    CHECK(std::abs(p - l * critical_beta_relative(l, a)) <= 1e-12 * p);
  }
}

TEST_CASE("gain_absolute examples") {
  const GainReport above = gain_absolute(1.0, Gains(1, 2));
  CHECK(above.value == 1.0);
  CHECK(above.branch == Branch::AtOrAboveThreshold);
  CHECK(above.worst_freq == 0.0);

  const GainReport below = gain_absolute(1.0, Gains(1, 1));
  CHECK(below.value == Approx(1.4678898).epsilon(1e-7));
  CHECK(below.branch == Branch::BelowThreshold);
  CHECK(below.worst_freq == Approx(std::sqrt(std::sqrt(3.0) - 1.0)).epsilon(1e-12));

  CHECK(gain_absolute(2.0, Gains(1, 1)).value == Approx(1.2338589).epsilon(1e-7));

  // P4
  const GainReport p4 = gain_absolute(2.0 - std::sqrt(2.0), Gains(1, 1));
  CHECK(p4.value == Approx(1.8572568).epsilon(1e-7));
  CHECK(p4.worst_freq == Approx(0.4803531).epsilon(1e-6));
}

TEST_CASE("gain_relative examples") {
  const GainReport r = gain_relative(2.0, Gains(1, 1));
  CHECK(r.value == Approx(0.6360098).epsilon(1e-7));
  CHECK(r.worst_freq == Approx(std::sqrt(std::sqrt(5.0) - 1.0)).epsilon(1e-12));
  CHECK(gain_relative(1.0, Gains(1, 1)).value == gain_absolute(1.0, Gains(1, 1)).value);
  const GainReport top = gain_relative(2.0, Gains(1, 2));
  CHECK(top.value == 0.5);
  CHECK(top.branch == Branch::AtOrAboveThreshold);
}

TEST_CASE("threshold branch assignment and continuity") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double l = std::pow(10.0, u(rng));
    const double a = std::pow(10.0, u(rng));
    for (const Protocol p : {Protocol::Absolute, Protocol::Relative}) {
      const double th = p == Protocol::Absolute ? critical_beta_absolute(l, a)
                                                : critical_beta_relative(l, a);
      const GainReport at = gain(p, l, Gains(a, th));
      CHECK(at.branch == Branch::AtOrAboveThreshold);
      CHECK(std::abs(at.value - 1.0 / (a * l)) <= 1e-12 * at.value);
      const double left = gain(p, l, Gains(a, th - 1e-8)).value;
      const double right = gain(p, l, Gains(a, th + 1e-8)).value;
      CHECK(std::abs(left - right) <= 1e-9);
    }
  }
}

TEST_CASE("report invariants: value >= 1/(alpha lambda2), equality on the upper branch") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double l = std::pow(10.0, 1.5 * u(rng));
    const Gains g(std::pow(10.0, u(rng)), std::pow(10.0, u(rng)));
    for (const Protocol p : {Protocol::Absolute, Protocol::Relative}) {
      const GainReport r = gain(p, l, g);
      const double floor = 1.0 / (g.alpha() * l);
      if (r.branch == Branch::AtOrAboveThreshold) {
        CHECK(r.value == floor);
        CHECK(r.worst_freq == 0.0);
      } else {
        CHECK(r.value >= floor);
        CHECK(r.worst_freq > 0.0);
      }
    }
  }
}

TEST_CASE("gain is non-increasing in alpha and beta") {
  const int m = 50;
  auto axis = [m](int i) { return 0.1 * std::pow(100.0, static_cast<double>(i) / (m - 1)); };
  for (const double l : {0.3, 1.0, 3.0}) {
    for (const Protocol p : {Protocol::Absolute, Protocol::Relative}) {
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          const double v = gain(p, l, Gains(axis(i), axis(j))).value;
          if (i + 1 < m) CHECK(gain(p, l, Gains(axis(i + 1), axis(j))).value <= v + 1e-12);
          if (j + 1 < m) CHECK(gain(p, l, Gains(axis(i), axis(j + 1))).value <= v + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("protocol ordering follows lambda2") {
  const int m = 30;
  auto axis = [m](int i) { return 0.1 * std::pow(100.0, static_cast<double>(i) / (m - 1)); };
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const Gains g(axis(i), axis(j));
      for (const double l : {0.3, 2.0 - std::sqrt(2.0), 0.9}) {
        CHECK(gain_absolute(l, g).value <= gain_relative(l, g).value + 1e-12);
      }
      for (const double l : {1.5, 2.0, 5.0}) {
        CHECK(gain_relative(l, g).value <= gain_absolute(l, g).value + 1e-12);
      }
      CHECK(std::abs(gain_absolute(1.0, g).value - gain_relative(1.0, g).value) <= 1e-12);
    }
  }
}

TEST_CASE("select_protocol") {
  CHECK(select_protocol(0.5858).verdict == Verdict::AbsoluteBetter);
  CHECK(select_protocol(1.0).verdict == Verdict::Tie);
  CHECK(select_protocol(1.0 + 0.9e-9).verdict == Verdict::Tie);
  CHECK(select_protocol(1.0 - 0.9e-9).verdict == Verdict::Tie);
  CHECK(select_protocol(1.0 + 2e-9).verdict == Verdict::RelativeBetter);
  CHECK(select_protocol(2.0).verdict == Verdict::RelativeBetter);
  CHECK(select_protocol(2.0).lambda2 == 2.0);
  CHECK_THROWS_AS((void)select_protocol(0.0), DomainError);
}

TEST_CASE("asymptotic limits") {
  const AsymptoticGains a = asymptotic_gains(1.0, Gains(1, 2));
  CHECK(a.absolute_alpha_limit == 0.5);
  const AsymptoticGains b = asymptotic_gains(2.0, Gains(1, 1));
  CHECK(b.absolute_beta_limit == 0.5);
  CHECK(b.relative_beta_limit == 0.5);
  CHECK(b.relative_alpha_limit == 0.5);

  CHECK(std::abs(gain_absolute(1.0, Gains(1e4, 2)).value - 0.5) <= 1e-3);
  CHECK(std::abs(gain_absolute(2.0, Gains(1, 1e4)).value - 0.5) <= 1e-3);
  CHECK(std::abs(gain_relative(2.0, Gains(1, 1e4)).value - 0.5) <= 1e-3);
  CHECK(std::abs(gain_relative(2.0, Gains(1e5, 1)).value - 0.5) <= 1e-3);
}

TEST_CASE("GainReport JSON") {
  const std::string j = to_json(gain_absolute(1.0, Gains(1, 2)));
  CHECK(j == R"({"branch":"at_or_above_threshold","protocol":"absolute","threshold":1.7320508075688772,"value":1.0,"worst_freq":0.0})");
}

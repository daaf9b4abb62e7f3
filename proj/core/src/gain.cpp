#include "consgain/gain.hpp"

#include "consgain/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace consgain {
namespace {

void require_positive(double t, const char* what) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
}

// 1 / (s^2 - (sqrt(D) - 1)^2) with s = alpha t and D = (s + 1)^2 - c, c > 0.
// The denominator is factored as (s + 1 - r)(s - 1 + r) with
// s + 1 - r = c / (s + 1 + r), which avoids cancellation when c is small.
double peak_from_discriminant(double s, double c, const char* name) {
  const double disc = (s + 1.0) * (s + 1.0) - c;
  if (disc < 0.0) {
    throw DomainError(std::string(name) + ": negative discriminant");
  }
  const double r = std::sqrt(disc);
  const double lower = c / (s + 1.0 + r);
  const double upper = s - 1.0 + r;
  const double denom = lower * upper;
  if (!(denom > 0.0)) {
    throw DomainError(std::string(name) + ": non-positive denominator");
  }
  return 1.0 / denom;
}

// sqrt(sqrt(D) - 1) where D - 1 = critical^2 - b^2, evaluated in factored form.
double peak_frequency(double s, double critical, double b) {
  const double excess = (critical - b) * (critical + b);
  const double r = std::sqrt((s + 1.0) * (s + 1.0) - b * b);
  return std::sqrt(std::max(0.0, excess / (r + 1.0)));
}

}  // namespace

std::string_view to_string(Protocol p) {
  return p == Protocol::Absolute ? "absolute" : "relative";
}

std::string_view to_string(Branch b) {
  return b == Branch::BelowThreshold ? "below_threshold" : "at_or_above_threshold";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::AbsoluteBetter:
      return "AbsoluteBetter";
    case Verdict::RelativeBetter:
      return "RelativeBetter";
    case Verdict::Tie:
      return "Tie";
  }
  return "?";
}

Gains::Gains(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ParameterError("alpha must be positive and finite");
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw ParameterError("beta must be positive and finite");
  }
}

double g1(double t, const Gains& gains) {
  require_positive(t, "g1: t");
  const double s = gains.alpha() * t;
  return 1.0 / (s * s);
}

double g2(double t, const Gains& gains) {
  require_positive(t, "g2: t");
  const double b = gains.beta();
  return peak_from_discriminant(gains.alpha() * t, b * b, "g2");
}

double g3(double t, const Gains& gains) {
  require_positive(t, "g3: t");
  const double bt = gains.beta() * t;
  return peak_from_discriminant(gains.alpha() * t, bt * bt, "g3");
}

double g2_domain_lower_bound(const Gains& gains) {
  const double a = gains.alpha();
  const double b = gains.beta();
  return std::max((b - 1.0) / a, b * b / (4.0 * a));
}

double critical_beta_absolute(double lambda2, double alpha) {
  const double s = alpha * lambda2;
  return std::sqrt(s * s + 2.0 * s);
}

double critical_beta_relative(double lambda2, double alpha) {
  return std::sqrt(alpha * alpha + 2.0 * alpha / lambda2);
}

GainReport gain_absolute(double lambda2, const Gains& gains) {
  require_positive(lambda2, "lambda2");
  GainReport r;
  r.protocol = Protocol::Absolute;
  r.threshold = critical_beta_absolute(lambda2, gains.alpha());
  const double s = gains.alpha() * lambda2;
  const double floor = 1.0 / s;
  if (gains.beta() >= r.threshold) {
    r.branch = Branch::AtOrAboveThreshold;
    r.value = floor;
    r.worst_freq = 0.0;
    return r;
  }
  r.branch = Branch::BelowThreshold;
  // Rounding just below the threshold can land a ulp under the floor.
  r.value = std::max(floor, std::sqrt(g2(lambda2, gains)));
  r.worst_freq = peak_frequency(s, r.threshold, gains.beta());
  return r;
}

GainReport gain_relative(double lambda2, const Gains& gains) {
  require_positive(lambda2, "lambda2");
  GainReport r;
  r.protocol = Protocol::Relative;
  r.threshold = critical_beta_relative(lambda2, gains.alpha());
  const double s = gains.alpha() * lambda2;
  const double floor = 1.0 / s;
  if (gains.beta() >= r.threshold) {
    r.branch = Branch::AtOrAboveThreshold;
    r.value = floor;
    r.worst_freq = 0.0;
    return r;
  }
  r.branch = Branch::BelowThreshold;
  r.value = std::max(floor, std::sqrt(g3(lambda2, gains)));
  r.worst_freq = peak_frequency(s, critical_beta_absolute(lambda2, gains.alpha()),
                                gains.beta() * lambda2);
  return r;
}

GainReport gain(Protocol protocol, double lambda2, const Gains& gains) {
  return protocol == Protocol::Absolute ? gain_absolute(lambda2, gains)
                                        : gain_relative(lambda2, gains);
}

std::string to_json(const GainReport& r) {
  return nlohmann::json{{"protocol", std::string(to_string(r.protocol))},
                        {"value", r.value},
                        {"branch", std::string(to_string(r.branch))},
                        {"threshold", r.threshold},
                        {"worst_freq", r.worst_freq}}
      .dump();
}

Selection select_protocol(double lambda2) {
  require_positive(lambda2, "lambda2");
  Selection s;
  s.lambda2 = lambda2;
  if (lambda2 < 1.0 - kTieBand) {
    s.verdict = Verdict::AbsoluteBetter;
  } else if (lambda2 > 1.0 + kTieBand) {
    s.verdict = Verdict::RelativeBetter;
  } else {
    s.verdict = Verdict::Tie;
  }
  return s;
}

AsymptoticGains asymptotic_gains(double lambda2, const Gains& gains) {
  require_positive(lambda2, "lambda2");
  const double a = gains.alpha();
  const double b = gains.beta();
  return {1.0 / b, 1.0 / (a * lambda2), 1.0 / (b * lambda2), 1.0 / (a * lambda2)};
}

}  // namespace consgain

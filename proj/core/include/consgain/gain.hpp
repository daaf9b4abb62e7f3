#pragma once

#include <string>
#include <string_view>

namespace consgain {

/// Velocity feedback used by the consensus protocol.
///   Absolute: u_i = alpha * sum_j a_ij (x_j - x_i) - beta * v_i
///   Relative: u_i = alpha * sum_j a_ij (x_j - x_i) + beta * sum_j a_ij (v_j - v_i)
enum class Protocol { Absolute, Relative };

[[nodiscard]] std::string_view to_string(Protocol p);

/// Tunable gain pair; both strictly positive and finite.
class Gains {
 public:
  Gains(double alpha, double beta);

  [[nodiscard]] double alpha() const noexcept { return alpha_; }
  [[nodiscard]] double beta() const noexcept { return beta_; }

 private:
  double alpha_;
  double beta_;
};

// Scalar functions whose values at the eigenvalues give the squared modal
// peaks. g2 and g3 throw DomainError outside the set where their
// denominators are positive; callers only use them below threshold.
[[nodiscard]] double g1(double t, const Gains& gains);
[[nodiscard]] double g2(double t, const Gains& gains);
[[nodiscard]] double g3(double t, const Gains& gains);

/// Open interval on which g2 is defined and decreasing:
/// t > max((beta-1)/alpha, beta^2/(4 alpha)).
[[nodiscard]] double g2_domain_lower_bound(const Gains& gains);

/// sqrt((alpha lambda2)^2 + 2 alpha lambda2)
[[nodiscard]] double critical_beta_absolute(double lambda2, double alpha);
/// sqrt(alpha^2 + 2 alpha / lambda2)
[[nodiscard]] double critical_beta_relative(double lambda2, double alpha);

enum class Branch { BelowThreshold, AtOrAboveThreshold };

[[nodiscard]] std::string_view to_string(Branch b);

struct GainReport {
  Protocol protocol = Protocol::Absolute;
  double value = 0.0;       // H-infinity norm of the disturbance-to-error map
  Branch branch = Branch::AtOrAboveThreshold;
  double threshold = 0.0;   // critical beta
  double worst_freq = 0.0;  // rad/s where the dominant modal peak sits
};

[[nodiscard]] GainReport gain_absolute(double lambda2, const Gains& gains);
[[nodiscard]] GainReport gain_relative(double lambda2, const Gains& gains);
[[nodiscard]] GainReport gain(Protocol protocol, double lambda2, const Gains& gains);

/// {"protocol", "value", "branch", "threshold", "worst_freq"}
[[nodiscard]] std::string to_json(const GainReport& r);

enum class Verdict { AbsoluteBetter, RelativeBetter, Tie };

[[nodiscard]] std::string_view to_string(Verdict v);

/// Half-width of the band around lambda2 = 1 reported as a tie.
inline constexpr double kTieBand = 1e-9;

struct Selection {
  Verdict verdict = Verdict::Tie;
  double lambda2 = 0.0;
};

/// The protocol with the smaller gain for every (alpha, beta), decided by
/// lambda2 alone.
[[nodiscard]] Selection select_protocol(double lambda2);

/// Limits of both gains when one tunable gain grows without bound.
struct AsymptoticGains {
  double absolute_alpha_limit;  // 1 / beta
  double absolute_beta_limit;   // 1 / (alpha lambda2)
  double relative_alpha_limit;  // 1 / (beta lambda2)
  double relative_beta_limit;   // 1 / (alpha lambda2)
};

[[nodiscard]] AsymptoticGains asymptotic_gains(double lambda2, const Gains& gains);

}  // namespace consgain

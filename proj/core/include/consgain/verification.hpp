#pragma once

#include "consgain/gain.hpp"
#include "consgain/graph.hpp"
#include "consgain/oracle.hpp"
#include "consgain/simulator.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>

namespace consgain {

// Randomised suites that check the closed-form gains against the numerical
// oracles and the time-domain simulator.

inline constexpr double kModalTolerance = 1e-6;       // relative
inline constexpr double kFullMatrixTolerance = 1e-5;  // relative
inline constexpr double kPeakFrequencyTolerance = 1e-6;
inline constexpr double kBoundSlack = 1.02;
inline constexpr double kTightnessFraction = 0.95;

/// Signature of the closed-form gain under test; swappable so that a
/// deliberately wrong formula can serve as a negative control.
using AnalyticGain = std::function<GainReport(Protocol, double lambda2, const Gains&)>;

[[nodiscard]] AnalyticGain reference_gain();

/// Connected graph with n in [n_min, n_max] and edge probability in
/// [0.05, 0.9]; half the draws use unit weights, the rest U[0.2, 2].
[[nodiscard]] Graph random_connected_graph(std::mt19937_64& rng, std::size_t n_min,
                                           std::size_t n_max);

struct OracleCase {
  Graph graph;
  Protocol protocol;
  Gains gains;
};

[[nodiscard]] std::string to_json(const OracleCase& c);

struct OracleCaseResult {
  double lambda2 = 0.0;
  GainReport analytic;
  ModalNorm modal;
  Peak full;
  double err_modal = 0.0;
  double err_full = 0.0;
  double freq_err = 0.0;
  bool passed = true;
  std::string failure;  // first violated check
};

[[nodiscard]] OracleCaseResult check_oracle_case(const OracleCase& c,
                                                 const AnalyticGain& analytic = reference_gain());

struct OracleSuiteReport {
  std::size_t cases = 0;
  std::size_t failures = 0;
  double max_err_modal = 0.0;
  double max_err_full = 0.0;
  double max_freq_err = 0.0;
  double max_residual = 0.0;
  std::optional<OracleCase> first_failure;
  std::string first_failure_reason;

  [[nodiscard]] bool passed() const { return failures == 0; }
};

/// `cases` random tuples: n in [2, 12], alpha and beta log-uniform in
/// [0.1, 10], protocol alternating.
[[nodiscard]] OracleSuiteReport run_oracle_suite(std::uint64_t seed, std::size_t cases,
                                                 const AnalyticGain& analytic = reference_gain());

struct SimRunResult {
  double analytic = 0.0;
  double empirical = 0.0;
  [[nodiscard]] double ratio() const { return empirical / analytic; }
};

/// Simulates a zero-initial-state run over horizon t_on + 50/(alpha lambda2 min(1, beta)).
/// dt defaults to the smaller of 0.02 and 90% of the stability limit.
[[nodiscard]] SimRunResult run_disturbed(const Graph& g, Protocol protocol, const Gains& gains,
                                         const Disturbance& dist, double dt = 0.0,
                                         const AnalyticGain& analytic = reference_gain());

/// The worst-case disturbance run used for the tightness check.
[[nodiscard]] SimRunResult run_worst_case(const Graph& g, Protocol protocol, const Gains& gains,
                                          double dt = 0.0);

struct SimSuiteReport {
  std::size_t runs = 0;
  std::size_t violations = 0;
  double max_ratio = 0.0;  // empirical / analytic
  std::optional<OracleCase> first_violation;
  std::string first_violation_detail;

  [[nodiscard]] bool passed() const { return violations == 0; }
};

/// `runs` random simulations (n in [3, 10], gains in [0.5, 2], random sine,
/// pulse or noise disturbance); checks empirical <= 1.02 * analytic.
[[nodiscard]] SimSuiteReport run_simulation_suite(std::uint64_t seed, std::size_t runs,
                                                  const AnalyticGain& analytic = reference_gain());

}  // namespace consgain

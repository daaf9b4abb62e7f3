#include "consgain/verification.hpp"

#include "consgain/errors.hpp"
#include "consgain/spectral.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>

namespace consgain {
namespace {

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

double relative_error(double reference, double value) {
  return std::abs(value - reference) / std::abs(reference);
}

double default_dt(const Graph& g, Protocol protocol, const Gains& gains) {
  return std::min(0.02, 0.9 * max_stable_dt(g, protocol, gains));
}

}  // namespace

AnalyticGain reference_gain() {
  return [](Protocol p, double lambda2, const Gains& gains) { return gain(p, lambda2, gains); };
}

Graph random_connected_graph(std::mt19937_64& rng, std::size_t n_min, std::size_t n_max) {
  std::uniform_int_distribution<std::size_t> pick_n(n_min, n_max);
  std::uniform_real_distribution<double> pick_p(0.05, 0.9);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> pick_w(0.2, 2.0);
  const auto n = static_cast<Eigen::Index>(pick_n(rng));
  const double p = pick_p(rng);
  const bool unit_weights = unit(rng) < 0.5;
  for (;;) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        if (unit(rng) < p) {
          a(i, j) = a(j, i) = unit_weights ? 1.0 : pick_w(rng);
        }
      }
    }
    Graph g(std::move(a));
    if (g.is_connected()) return g;
  }
}

std::string to_json(const OracleCase& c) {
  return nlohmann::json{{"graph", nlohmann::json::parse(to_graph_json(c.graph))},
                        {"protocol", std::string(to_string(c.protocol))},
                        {"alpha", c.gains.alpha()},
                        {"beta", c.gains.beta()}}
      .dump();
}

OracleCaseResult check_oracle_case(const OracleCase& c, const AnalyticGain& analytic) {
  OracleCaseResult r;
  const Spectrum spec = spectrum(c.graph);
  r.lambda2 = spec.algebraic_connectivity();
  r.analytic = analytic(c.protocol, r.lambda2, c.gains);
  r.modal = hinf_modal(spec, c.protocol, c.gains);
  r.full = hinf_fullmatrix(build_state_space(c.graph, c.protocol, c.gains));
  r.err_modal = relative_error(r.analytic.value, r.modal.value);
  r.err_full = relative_error(r.analytic.value, r.full.value);
  r.freq_err = std::abs(r.modal.frequency - r.analytic.worst_freq);

  std::ostringstream why;
  if (!(r.err_modal <= kModalTolerance)) {
    why << "modal oracle rel err " << r.err_modal << " > " << kModalTolerance << "; ";
  }
  if (!(r.err_full <= kFullMatrixTolerance)) {
    why << "transfer-matrix oracle rel err " << r.err_full << " > " << kFullMatrixTolerance
        << "; ";
  }
  if (!(r.freq_err <= kPeakFrequencyTolerance)) {
    why << "peak frequency " << r.modal.frequency << " vs analytic " << r.analytic.worst_freq
        << "; ";
  }
  if (!(r.modal.max_residual <= kQuarticTolerance)) {
    why << "quartic residual " << r.modal.max_residual << "; ";
  }
  r.failure = why.str();
  r.passed = r.failure.empty();
  return r;
}

OracleSuiteReport run_oracle_suite(std::uint64_t seed, std::size_t cases,
                                   const AnalyticGain& analytic) {
  std::mt19937_64 rng(seed);
  OracleSuiteReport report;
  for (std::size_t i = 0; i < cases; ++i) {
    OracleCase c{random_connected_graph(rng, 2, 12),
                 i % 2 == 0 ? Protocol::Absolute : Protocol::Relative,
                 Gains(log_uniform(rng, 0.1, 10.0), log_uniform(rng, 0.1, 10.0))};
    const OracleCaseResult r = check_oracle_case(c, analytic);
    ++report.cases;
    report.max_err_modal = std::max(report.max_err_modal, r.err_modal);
    report.max_err_full = std::max(report.max_err_full, r.err_full);
    report.max_freq_err = std::max(report.max_freq_err, r.freq_err);
    report.max_residual = std::max(report.max_residual, r.modal.max_residual);
    if (!r.passed) {
      if (report.failures == 0) {
        report.first_failure = c;
        report.first_failure_reason = r.failure;
      }
      ++report.failures;
    }
  }
  return report;
}

SimRunResult run_disturbed(const Graph& g, Protocol protocol, const Gains& gains,
                           const Disturbance& dist, double dt, const AnalyticGain& analytic) {
  const Spectrum spec = spectrum(g);
  const double lambda2 = spec.algebraic_connectivity();
  if (dt <= 0.0) dt = default_dt(g, protocol, gains);
  const double settle = 50.0 / (gains.alpha() * lambda2 * std::min(1.0, gains.beta()));
  const auto n = static_cast<Eigen::Index>(g.size());
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
  const SimTrace trace = simulate(g, protocol, gains, dist, zero, zero, dist.t_on + settle, dt,
                                  SimOptions{.keep_trajectories = false});
  return {analytic(protocol, lambda2, gains).value, empirical_gain(trace)};
}

SimRunResult run_worst_case(const Graph& g, Protocol protocol, const Gains& gains, double dt) {
  const Disturbance d = worst_case_disturbance(g, protocol, gains, spectrum(g));
  return run_disturbed(g, protocol, gains, d, dt);
}

SimSuiteReport run_simulation_suite(std::uint64_t seed, std::size_t runs,
                                    const AnalyticGain& analytic) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  SimSuiteReport report;
  for (std::size_t i = 0; i < runs; ++i) {
    const Graph g = random_connected_graph(rng, 3, 10);
    const Protocol protocol = i % 2 == 0 ? Protocol::Absolute : Protocol::Relative;
    const Gains gains(log_uniform(rng, 0.5, 2.0), log_uniform(rng, 0.5, 2.0));

    Disturbance d;
    const double kind = unit(rng);
    d.kind = kind < 1.0 / 3.0   ? DisturbanceKind::TruncatedSine
             : kind < 2.0 / 3.0 ? DisturbanceKind::Pulse
                                : DisturbanceKind::FilteredNoise;
    d.frequency = 3.0 * unit(rng);
    d.bandwidth = 0.5 + 2.5 * unit(rng);
    d.t_on = 5.0 + 25.0 * unit(rng);
    d.amplitude = 0.1 + 2.0 * unit(rng);
    d.weights.resize(static_cast<Eigen::Index>(g.size()));
    for (Eigen::Index k = 0; k < d.weights.size(); ++k) d.weights(k) = normal(rng);
    d.seed = rng();

    const SimRunResult r = run_disturbed(g, protocol, gains, d, 0.0, analytic);
    ++report.runs;
    report.max_ratio = std::max(report.max_ratio, r.ratio());
    if (!(r.empirical <= kBoundSlack * r.analytic)) {
      if (report.violations == 0) {
        report.first_violation = OracleCase{g, protocol, gains};
        std::ostringstream detail;
        detail << to_string(d.kind) << " disturbance: empirical " << r.empirical
               << " > 1.02 * analytic " << r.analytic;
        report.first_violation_detail = detail.str();
      }
      ++report.violations;
    }
  }
  return report;
}

}  // namespace consgain
